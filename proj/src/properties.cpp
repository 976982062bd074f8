// Copyright 2026 The ARMOR-Tabular Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "armor/properties.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "armor/experiments.hpp"
#include "armor/report.hpp"

namespace armor {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Counts violations of a scalar inequality and remembers the worst slack.
class Tally {
 public:
  explicit Tally(std::string name) : name_(std::move(name)) {}

  // `excess` > 0 means the property failed by that much.
  void record(double excess) {
    ++checks_;
    if (!(excess <= 0.0)) ++failures_;
    if (std::isnan(excess)) worst_ = kInf;
    else worst_ = std::max(worst_, excess);
  }
  void record(bool ok) { record(ok ? -kInf : kInf); }

  PropertyCheck result() const {
    std::string detail = std::to_string(failures_) + "/" + std::to_string(checks_) + " violations";
    if (checks_ > 0 && std::isfinite(worst_)) detail += ", worst excess " + format_double(worst_);
    return {name_, checks_ > 0 && failures_ == 0, detail};
  }

 private:
  std::string name_;
  std::size_t checks_ = 0;
  std::size_t failures_ = 0;
  double worst_ = -kInf;
};

Mdp random_small_mdp(Rng& rng) {
  RandomMdpOptions opts;
  opts.num_states = 2 + static_cast<int>(rng.index(3));
  opts.num_actions = 2;
  opts.gamma = rng.uniform(0.5, 0.95);
  return random_mdp(opts, rng);
}

struct GameCase {
  Mdp truth;
  Policy reference;
  ModelClass cls;
  std::vector<double> losses;
  PolicySet policies;
  std::size_t truth_index = 0;
};

GameCase make_game_case(std::uint64_t seed) {
  Rng rng(seed);
  GameCase c;
  c.truth = random_small_mdp(rng);
  const int S = c.truth.num_states, A = c.truth.num_actions;
  const Policy behavior = random_policy(S, A, rng);
  c.reference = random_policy(S, A, rng);
  PerturbOptions perturb;
  perturb.class_size = 8;
  perturb.row_fraction = 0.5;
  c.cls = perturbed_model_class(c.truth, perturb, derive_seed(seed, 1));
  const Dataset data =
      sample_dataset(c.truth, behavior, 200, derive_seed(seed, 2), SamplingScheme::occupancy_iid);
  c.losses = class_losses(c.cls, data, default_vmax(c.truth.discount));
  const Policy extras[] = {c.reference};
  c.policies = enumerate_policies(S, A, extras);
  c.truth_index = c.cls.truth_index.value_or(0);
  return c;
}

const double kAlphas[] = {0.0, 0.5, 2.0, 10.0, kInf};

// Plain double loop, kept apart from the solver's own code path.
std::pair<std::size_t, double> brute_force_relative(const VersionSpace& vs, const PolicySet& policies,
                                                    const Policy& ref) {
  std::size_t best = 0;
  double best_value = -kInf;
  for (std::size_t p = 0; p < policies.size(); ++p) {
    double worst = kInf;
    for (std::size_t m = 0; m < vs.model_class().size(); ++m) {
      if (!vs.contains(m)) continue;
      const Mdp& model = vs.model(m);
      worst = std::min(worst, expected_return(model, policies[p]) - expected_return(model, ref));
    }
    if (worst > best_value) {
      best_value = worst;
      best = p;
    }
  }
  return {best, best_value};
}

}  // namespace

std::vector<PropertyCheck> run_property_suite(const PropertyOptions& options) {
  const std::size_t n = options.instances;
  std::vector<PropertyCheck> out;

  {
    Tally bellman("bellman_residual"), occ("occupancy_return"), sim("simulation_lemma"),
        mono("reward_monotonicity");
    for (std::size_t k = 0; k < n; ++k) {
      Rng rng(derive_seed(options.seed, 100 + k));
      const Mdp m = random_small_mdp(rng);
      const Policy pi = random_policy(m.num_states, m.num_actions, rng);
      const Values v = evaluate_policy(m, pi);
      const Eigen::VectorXd residual =
          v.state_values - (policy_reward(m, pi) +
                            m.discount * policy_transition(m, pi) * v.state_values);
      bellman.record(residual.cwiseAbs().maxCoeff() - 1e-9);

      const double via_occupancy = occupancy(m, pi).expectation(m.reward) / (1.0 - m.discount);
      occ.record(std::abs(via_occupancy - v.expected_return) - 1e-9);

      for (int t = 0; t < 10; ++t) {
        RandomMdpOptions opts{m.num_states, m.num_actions, m.discount, 0.0};
        Mdp other = random_mdp(opts, rng);
        other.initial_dist = m.initial_dist;
        const Policy q = random_policy(m.num_states, m.num_actions, rng);
        const SimulationGap gap = simulation_gap(m, other, q, default_vmax(m.discount));
        sim.record(gap.exact_gap - gap.bound - 1e-9);
      }

      Mdp richer = m;
      for (Eigen::Index i = 0; i < richer.reward.size(); ++i)
        richer.reward(i) = std::min(1.0, richer.reward(i) + rng.uniform(0.0, 0.2));
      mono.record(v.expected_return - expected_return(richer, pi) - 1e-12);
    }
    for (const Tally* t : {&bellman, &occ, &sim, &mono}) out.push_back(t->result());
  }

  {
    Tally vs_mono("version_space_monotonicity"), mle("mle_membership"),
        nonneg("game_value_nonnegative"), rpi("robust_policy_improvement"),
        value_mono("value_monotone_in_alpha"), fp_abs("fixed_point_absolute"),
        fp_rel("fixed_point_relative"), fp_reg("fixed_point_regret"),
        fp_opt("fixed_point_optimistic"), brute("brute_force_consistency");
    for (std::size_t k = 0; k < n; ++k) {
      const GameCase c = make_game_case(derive_seed(options.seed, 10'000 + k));
      const double j_ref = expected_return(c.truth, c.reference);
      std::vector<std::size_t> previous_members;
      double previous_value = kInf;
      for (double alpha : kAlphas) {
        const VersionSpace vs(c.cls, c.losses, alpha);
        vs_mono.record(std::includes(vs.members().begin(), vs.members().end(),
                                     previous_members.begin(), previous_members.end()));
        previous_members = vs.members();
        mle.record(vs.contains(vs.mle_index()));

        const GameSolution sol = solve_relative_pessimism(vs, c.policies, c.reference);
        nonneg.record(-sol.value - 1e-12);
        value_mono.record(sol.value - previous_value - 1e-12);
        previous_value = sol.value;
        if (vs.contains(c.truth_index))
          rpi.record(j_ref - expected_return(c.truth, c.policies[sol.policy_index]) - 1e-8);

        const auto [index, value] = brute_force_relative(vs, c.policies, c.reference);
        brute.record(index == sol.policy_index && std::abs(value - sol.value) <= 1e-12);

        const auto check = [&](Tally& tally, const GameSolution& s) {
          tally.record(is_fixed_point(vs, c.policies, c.policies[s.policy_index], 1e-9).is_fixed);
        };
        check(fp_abs, solve_generalized_pessimism(vs, c.policies, absolute_offsets(vs)));
        check(fp_rel, sol);
        check(fp_reg, solve_generalized_pessimism(vs, c.policies, regret_offsets(vs, c.policies)));
        check(fp_opt, solve_optimistic(vs, c.policies));
      }
    }
    for (const Tally* t : {&vs_mono, &mle, &nonneg, &rpi, &value_mono, &fp_abs, &fp_rel, &fp_reg,
                           &fp_opt, &brute})
      out.push_back(t->result());
  }

  {
    Tally mimic("toy_chain_mimicry");
    const ToyChainSpec spec;
    const ToyChain chain = toy_chain(spec);
    const ModelClass cls = toy_chain_model_class(spec);
    const Policy extras[] = {chain.reference};
    const PolicySet policies =
        enumerate_policies(chain.truth.num_states, chain.truth.num_actions, extras);
    const Dataset data = sample_dataset(chain.truth, chain.behavior, 1000, options.seed,
                                        SamplingScheme::occupancy_iid);
    const VersionSpace vs(cls, class_losses(cls, data, default_vmax(spec.gamma)), 1.0);
    const GameSolution sol = solve_relative_pessimism(vs, policies, chain.reference);
    const Policy& learned = policies[sol.policy_index];
    bool ok = true;
    for (int s : reachable_states(chain.truth, chain.reference))
      ok = ok && learned.probs.row(s).isApprox(chain.reference.probs.row(s));
    mimic.record(ok);
    mimic.record(std::abs(expected_return(chain.truth, learned) -
                          expected_return(chain.truth, chain.reference)) -
                 1e-8);
    out.push_back(mimic.result());
  }

  {
    Tally conc("concentrability_behavior_is_one");
    for (std::size_t k = 0; k < n; ++k) {
      Rng rng(derive_seed(options.seed, 20'000 + k));
      const Mdp m = random_small_mdp(rng);
      const Policy mu = random_policy(m.num_states, m.num_actions, rng);
      const ModelClass cls = perturbed_model_class(m, {}, derive_seed(options.seed, 30'000 + k));
      const double c =
          concentrability(cls, m, mu, occupancy(m, mu), default_vmax(m.discount)).value;
      conc.record(std::abs(c - 1.0) - 1e-12);
    }
    out.push_back(conc.result());
  }
  return out;
}

}  // namespace armor
