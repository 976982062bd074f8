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

#include <doctest.h>

#include <cmath>
#include <limits>

#include "armor/error.hpp"
#include "armor/game.hpp"
#include "armor/instances.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace armor;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Case {
  Mdp truth;
  Policy behavior;
  Policy reference;
  ModelClass cls;
  std::vector<double> losses;
  PolicySet policies;
};

Case random_case(std::uint64_t seed, int S = 3, std::size_t models = 6) {
  Case c;
  c.truth = fixtures::random_mdp(S, 2, 0.9, seed);
  c.behavior = fixtures::random_policy(S, 2, seed + 1);
  c.reference = fixtures::random_policy(S, 2, seed + 2);
  c.cls = perturbed_model_class(c.truth, {models, 0.3, 0.5}, seed + 3);
  const Dataset d = sample_dataset(c.truth, c.behavior, 200, seed + 4, SamplingScheme::occupancy_iid);
  c.losses = class_losses(c.cls, d, default_vmax(0.9));
  const Policy extras[] = {c.reference};
  c.policies = enumerate_policies(S, 2, extras);
  return c;
}

// Game returns table for the double-loop oracle. The solver's policy
// evaluation is checked against truncation elsewhere; the loop is what is
// being compared here.
std::vector<std::vector<double>> returns_table(const ModelClass& cls, const PolicySet& policies) {
  std::vector<std::vector<double>> table(cls.size(), std::vector<double>(policies.size()));
  for (std::size_t m = 0; m < cls.size(); ++m)
    for (std::size_t p = 0; p < policies.size(); ++p)
      table[m][p] = expected_return(cls[m], policies[p]);
  return table;
}

}  // namespace

TEST_CASE("policy enumeration") {
  CHECK(enumerate_policies(1, 2).size() == 2);
  const PolicySet four = enumerate_policies(2, 2);
  REQUIRE(four.size() == 4);
  CHECK(four[0] == Policy::constant_action(2, 2, 0));
  CHECK(four[1] == Policy::deterministic({0, 1}, 2));
  CHECK(four.labels[2] == "det:10");

  const Policy ref = fixtures::random_policy(2, 2, 1);
  const Policy extras[] = {ref};
  const PolicySet with = enumerate_policies(2, 2, extras);
  REQUIRE(with.size() == 5);
  CHECK(with[4].probs == ref.probs);
  CHECK(with.find(ref) == std::optional<std::size_t>(4));
  CHECK_THROWS_AS(enumerate_policies(21, 2), CapacityError);
  CHECK_THROWS_AS(enumerate_policies(2, 3, extras), DimensionError);
}

TEST_CASE("returns table agrees with truncated rollouts") {
  const Case c = random_case(5);
  const Eigen::MatrixXd table = policy_returns(c.cls, c.policies);
  for (std::size_t m = 0; m < c.cls.size(); ++m)
    for (std::size_t p = 0; p < c.policies.size(); ++p)
      CHECK(std::abs(table(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(p)) -
                     oracle::truncated_return(c.cls[m], c.policies[p])) <= 1e-10);
}

TEST_CASE("worst case model") {
  const Case c = random_case(11);
  SUBCASE("singleton") {
    const VersionSpace vs = VersionSpace(c.cls, c.losses, kInf).restricted_to({2});
    const WorstCase w = worst_case_model(vs, c.policies[1], c.reference);
    CHECK(w.model_index == 2);
    CHECK(w.value == doctest::Approx(expected_return(c.cls[2], c.policies[1]) -
                                     expected_return(c.cls[2], c.reference)));
  }
  SUBCASE("self difference") {
    const VersionSpace vs(c.cls, c.losses, kInf);
    const WorstCase w = worst_case_model(vs, c.reference, c.reference);
    CHECK(w.value == 0.0);
    CHECK(w.model_index == vs.members().front());
  }
  SUBCASE("toy chain") {
    const ToyChain chain = toy_chain({});
    const VersionSpace vs(toy_chain_model_class({}), std::vector<double>(10, 0.0), 0.0);
    const WorstCase w = worst_case_model(vs, chain.behavior, chain.reference);
    std::size_t best = 0;
    double best_value = kInf;
    for (std::size_t m : vs.members()) {
      const double v = oracle::truncated_return(vs.model(m), chain.behavior) -
                       oracle::truncated_return(vs.model(m), chain.reference);
      if (v < best_value - 1e-9) {
        best_value = v;
        best = m;
      }
    }
    CHECK(w.model_index == best);
    CHECK(w.value == doctest::Approx(best_value).epsilon(1e-9));
    CHECK(vs.model_class().labels[w.model_index] == "left-reward-x0.5");
  }
}

TEST_CASE("relative pessimism examples") {
  const Case c = random_case(21);
  const VersionSpace vs(c.cls, c.losses, 2.0);
  SUBCASE("only the reference") {
    PolicySet only;
    only.insert(c.reference, "ref");
    const GameSolution s = solve_relative_pessimism(vs, only, c.reference);
    CHECK(s.policy_index == 0);
    CHECK(s.value == 0.0);
  }
  SUBCASE("singleton version space picks the optimal policy") {
    const VersionSpace single = vs.restricted_to({vs.mle_index()});
    const GameSolution s = solve_relative_pessimism(single, c.policies, c.reference);
    const Mdp& m = single.model(vs.mle_index());
    double best = -kInf;
    for (std::size_t p = 0; p < c.policies.size(); ++p)
      best = std::max(best, oracle::truncated_return(m, c.policies[p]));
    CHECK(oracle::truncated_return(m, c.policies[s.policy_index]) == doctest::Approx(best).epsilon(1e-10));
    CHECK(s.policy_index == solve_generalized_pessimism(single, c.policies, absolute_offsets(single)).policy_index);
  }
  SUBCASE("reference outside the class is flagged") {
    const PolicySet det = enumerate_policies(3, 2);
    CHECK_FALSE(solve_relative_pessimism(vs, det, c.reference).reference_in_policies);
    CHECK(solve_relative_pessimism(vs, c.policies, c.reference).reference_in_policies);
  }
}

TEST_CASE("toy chain mimicry") {
  const ToyChain chain = toy_chain({});
  const ModelClass cls = toy_chain_model_class({});
  const Dataset d = sample_dataset(chain.truth, chain.behavior, 1000, 0, SamplingScheme::occupancy_iid);
  const Policy extras[] = {chain.reference};
  const PolicySet policies = enumerate_policies(5, 2, extras);
  for (double alpha : {1.0, 100.0, kInf}) {
    const VersionSpace vs = build_version_space(cls, d, alpha, default_vmax(0.95));
    const GameSolution s = solve_relative_pessimism(vs, policies, chain.reference);
    const Policy& pi = policies[s.policy_index];
    for (int st : reachable_states(chain.truth, chain.reference))
      CHECK(pi.probs.row(st) == chain.reference.probs.row(st));
    CHECK(std::abs(expected_return(chain.truth, pi) - expected_return(chain.truth, chain.reference)) <= 1e-8);
    CHECK(s.value == doctest::Approx(0.0));
  }
}

TEST_CASE("generalized pessimism") {
  const Case c = random_case(31);
  const VersionSpace vs(c.cls, c.losses, kInf);
  SUBCASE("reference offsets reproduce relative pessimism") {
    const GameSolution a = solve_relative_pessimism(vs, c.policies, c.reference);
    const GameSolution b = solve_generalized_pessimism(vs, c.policies, reference_offsets(vs, c.reference));
    CHECK(a.policy_index == b.policy_index);
    CHECK(a.value == b.value);
  }
  SUBCASE("regret offsets against a double loop") {
    const VersionSpace three = vs.restricted_to({0, 2, 4});
    const auto table = returns_table(c.cls, c.policies);
    std::vector<double> offset(c.cls.size(), 0.0);
    for (std::size_t m : three.members())
      offset[m] = -*std::max_element(table[m].begin(), table[m].end());
    const oracle::GameAnswer want = oracle::brute_force_game(table, three.members(), offset);
    const GameSolution got = solve_generalized_pessimism(three, c.policies, regret_offsets(three, c.policies));
    CHECK(got.policy_index == want.policy);
    CHECK(std::abs(got.value - want.value) <= 1e-12);
    CHECK(got.value <= 0.0);
  }
  SUBCASE("subset argument") {
    const GameSolution s = solve_generalized_pessimism(vs, c.policies, absolute_offsets(vs),
                                                       std::vector<std::size_t>{1});
    const auto table = returns_table(c.cls, c.policies);
    CHECK(s.value == *std::max_element(table[1].begin(), table[1].end()));
  }
  SUBCASE("missing offsets") {
    ModelOffsets partial = absolute_offsets(vs);
    partial.erase(partial.begin());
    CHECK_THROWS_AS(solve_generalized_pessimism(vs, c.policies, partial), ParameterError);
  }
  SUBCASE("optimistic") {
    const GameSolution s = solve_optimistic(vs, c.policies);
    const auto table = returns_table(c.cls, c.policies);
    double best = -kInf;
    for (const auto& row : table) best = std::max(best, *std::max_element(row.begin(), row.end()));
    CHECK(s.value == best);
  }
}

TEST_CASE("fixed points") {
  const Case c = random_case(41);
  const VersionSpace vs(c.cls, c.losses, kInf);
  SUBCASE("relative pessimism output") {
    const GameSolution s = solve_relative_pessimism(vs, c.policies, c.reference);
    CHECK(is_fixed_point(vs, c.policies, c.policies[s.policy_index], 1e-9).is_fixed);
  }
  SUBCASE("optimal policy of any member") {
    for (std::size_t m : vs.members()) {
      const GameSolution s = solve_generalized_pessimism(vs.restricted_to({m}), c.policies,
                                                         absolute_offsets(vs));
      CHECK(is_fixed_point(vs, c.policies, c.policies[s.policy_index], 1e-9).is_fixed);
    }
  }
  SUBCASE("dominated policy") {
    // Action 1 pays nothing and stays put; action 0 pays 1 everywhere.
    Mdp a = fixtures::blank_mdp(2, 2, 0.9);
    a.transition << 0, 1, 1, 0, 0, 1, 0, 1;
    a.reward << 1, 0, 1, 0;
    Mdp b = a;
    b.transition.row(0) << 1, 0;
    ModelClass cls;
    cls.models = {a, b};
    cls.labels = {"a", "b"};
    const VersionSpace two(cls, {0.0, 0.0}, 0.0);
    const PolicySet det = enumerate_policies(2, 2);
    const Policy worst = Policy::constant_action(2, 2, 1);
    for (std::size_t p = 0; p < det.size(); ++p)
      for (const Mdp& m : cls.models)
        if (!(det[p] == worst)) CHECK(expected_return(m, det[p]) >= expected_return(m, worst));
    const FixedPointCheck fp = is_fixed_point(two, det, worst, 1e-9);
    CHECK_FALSE(fp.is_fixed);
    CHECK(fp.best_improvement > 0.0);
    CHECK(det[fp.witness_policy_index] == Policy::constant_action(2, 2, 0));
  }
}

TEST_CASE("concentrability") {
  const Case c = random_case(51);
  const OccupancyMeasure mu = occupancy(c.truth, c.behavior);
  CHECK(concentrability(c.cls, c.truth, c.behavior, mu, 10.0).value == 1.0);

  ModelClass single;
  single.models = {c.truth};
  single.labels = {"truth"};
  const ConcentrabilityResult one = concentrability(single, c.truth, c.reference, mu, 10.0);
  CHECK(one.value == 1.0);
  CHECK_FALSE(one.witness_model_index.has_value());

  // Data never takes action 1; a member differing only there is invisible.
  Policy left = Policy::constant_action(3, 2, 0);
  const OccupancyMeasure left_data = occupancy(c.truth, left);
  ModelClass hidden = single;
  Mdp m = c.truth;
  m.reward(0, 1) = 1.0 - m.reward(0, 1);
  hidden.models.push_back(m);
  hidden.labels.push_back("hidden");
  const ConcentrabilityResult inf =
      concentrability(hidden, c.truth, Policy::constant_action(3, 2, 1), left_data, 10.0);
  CHECK(std::isinf(inf.value));
  CHECK(inf.witness_model_index == std::optional<std::size_t>(1));
}

TEST_CASE("performance bound formula") {
  const double b = performance_bound(2.0, 1.0, 10.0, 0.9, 1000, 10, 0.1, 1.0);
  CHECK(performance_bound(2.0, 1.0, 10.0, 0.9, 2000, 10, 0.1, 1.0) ==
        doctest::Approx(b / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(performance_bound(0.0, 0.0, 10.0, 0.9, 1000, 10, 0.1, 1.0) == 0.0);
  CHECK(performance_bound(2.0, 1.0, 10.0, 0.9, 1000, 100, 0.1, 1.0) ==
        doctest::Approx(b * std::sqrt(std::log(1000.0) / std::log(100.0))).epsilon(1e-14));
  const double expect = (std::sqrt(2.0) + 1.0) * 10.0 / 0.1 * std::sqrt(std::log(100.0) / 1000.0);
  CHECK(b == doctest::Approx(expect).epsilon(1e-14));
  CHECK_THROWS_AS(performance_bound(-1.0, 1.0, 10.0, 0.9, 1000, 10, 0.1, 1.0), ParameterError);
  CHECK_THROWS_AS(performance_bound(1.0, 1.0, 10.0, 0.9, 0, 10, 0.1, 1.0), ParameterError);
}

TEST_CASE("random instance properties") {
  std::size_t rpi_checks = 0;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const Case c = random_case(1000 + seed * 7, 2 + static_cast<int>(seed % 3), 5 + seed % 6);
    const auto table = returns_table(c.cls, c.policies);
    const double j_ref = expected_return(c.truth, c.reference);
    double previous = kInf;
    for (double alpha : {0.0, 0.3, 3.0, 30.0, kInf}) {
      const VersionSpace vs(c.cls, c.losses, alpha);
      const GameSolution s = solve_relative_pessimism(vs, c.policies, c.reference);
      CHECK(s.value >= -1e-12);
      CHECK(s.value <= previous + 1e-12);
      previous = s.value;
      if (vs.contains(0)) {
        ++rpi_checks;
        CHECK(expected_return(c.truth, c.policies[s.policy_index]) >= j_ref - 1e-8);
      }

      std::vector<double> offset(c.cls.size());
      for (std::size_t m = 0; m < c.cls.size(); ++m) offset[m] = -table[m].back();
      const oracle::GameAnswer want = oracle::brute_force_game(table, vs.members(), offset);
      CHECK(s.policy_index == want.policy);
      CHECK(std::abs(s.value - want.value) <= 1e-12);

      const auto fixed = [&](const GameSolution& g) {
        return is_fixed_point(vs, c.policies, c.policies[g.policy_index], 1e-9).is_fixed;
      };
      CHECK(fixed(s));
      CHECK(fixed(solve_generalized_pessimism(vs, c.policies, absolute_offsets(vs))));
      CHECK(fixed(solve_generalized_pessimism(vs, c.policies, regret_offsets(vs, c.policies))));
      CHECK(fixed(solve_optimistic(vs, c.policies)));
    }
  }
  CHECK(rpi_checks > 100);
}
