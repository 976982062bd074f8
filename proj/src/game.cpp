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

#include "armor/game.hpp"

#include <cmath>

namespace armor {

std::optional<std::size_t> PolicySet::find(const Policy& pi) const {
  for (std::size_t i = 0; i < policies.size(); ++i)
    if (policies[i] == pi) return i;
  return std::nullopt;
}

std::size_t PolicySet::insert(const Policy& pi, const std::string& label) {
  if (auto at = find(pi)) return *at;
  policies.push_back(pi);
  labels.push_back(label);
  return policies.size() - 1;
}

PolicySet enumerate_policies(int num_states, int num_actions, std::span<const Policy> extras,
                             std::span<const std::string> extra_labels) {
  if (num_states <= 0 || num_actions <= 0)
    throw DimensionError("enumerate_policies: counts must be positive");
  if (!extra_labels.empty() && extra_labels.size() != extras.size())
    throw DimensionError("enumerate_policies: one label per extra policy is required");
  std::size_t count = 1;
  for (int s = 0; s < num_states; ++s) {
    count *= static_cast<std::size_t>(num_actions);
    if (count > kMaxEnumeratedPolicies)
      throw CapacityError("enumerate_policies: A^S exceeds " +
                          std::to_string(kMaxEnumeratedPolicies));
  }

  PolicySet set;
  set.policies.reserve(count + extras.size());
  set.labels.reserve(count + extras.size());
  std::vector<int> actions(static_cast<std::size_t>(num_states));
  for (std::size_t index = 0; index < count; ++index) {
    std::size_t rest = index;
    for (int s = num_states - 1; s >= 0; --s) {
      actions[static_cast<std::size_t>(s)] = static_cast<int>(rest % num_actions);
      rest /= static_cast<std::size_t>(num_actions);
    }
    std::string label = "det:";
    for (std::size_t s = 0; s < actions.size(); ++s) {
      if (num_actions > 10 && s > 0) label += '-';
      label += std::to_string(actions[s]);
    }
    set.policies.push_back(Policy::deterministic(actions, num_actions));
    set.labels.push_back(std::move(label));
  }
  for (std::size_t i = 0; i < extras.size(); ++i) {
    extras[i].validate();
    if (extras[i].num_states() != num_states || extras[i].num_actions() != num_actions)
      throw DimensionError("enumerate_policies: extra policy has the wrong shape");
    set.policies.push_back(extras[i]);
    set.labels.push_back(extra_labels.empty() ? "extra:" + std::to_string(i) : extra_labels[i]);
  }
  return set;
}

Eigen::MatrixXd policy_returns(const ModelClass& cls, const PolicySet& policies) {
  Eigen::MatrixXd returns(static_cast<Eigen::Index>(cls.size()),
                          static_cast<Eigen::Index>(policies.size()));
  for (std::size_t m = 0; m < cls.size(); ++m)
    for (std::size_t p = 0; p < policies.size(); ++p)
      returns(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(p)) =
          expected_return(cls[m], policies[p]);
  return returns;
}

Eigen::VectorXd policy_returns(const ModelClass& cls, const Policy& pi) {
  Eigen::VectorXd returns(static_cast<Eigen::Index>(cls.size()));
  for (std::size_t m = 0; m < cls.size(); ++m)
    returns(static_cast<Eigen::Index>(m)) = expected_return(cls[m], pi);
  return returns;
}

WorstCase worst_case_model(const VersionSpace& vs, const Policy& pi, const Policy& pi_ref) {
  WorstCase worst{0, std::numeric_limits<double>::infinity()};
  for (std::size_t m : vs.members()) {
    const double diff = expected_return(vs.model(m), pi) - expected_return(vs.model(m), pi_ref);
    if (diff < worst.value) worst = {m, diff};
  }
  return worst;
}

namespace {

void check_policies(const VersionSpace& vs, const PolicySet& policies) {
  if (policies.size() == 0) throw ParameterError("policy set is empty");
  const Mdp& model = vs.model(vs.members().front());
  for (const Policy& pi : policies.policies) check_compatible(model, pi);
}

// Shared max-min scan. `returns` is indexed by class model (rows) and policy.
GameSolution max_min(const Eigen::MatrixXd& returns, const ModelOffsets& psi,
                     const std::vector<std::size_t>& subset) {
  const auto num_policies = static_cast<std::size_t>(returns.cols());
  GameSolution sol;
  sol.per_policy_values.resize(static_cast<Eigen::Index>(num_policies));
  sol.per_policy_worst_models.resize(num_policies);
  for (std::size_t p = 0; p < num_policies; ++p) {
    double inner = std::numeric_limits<double>::infinity();
    std::size_t arg = subset.front();
    for (std::size_t m : subset) {
      const double v =
          returns(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(p)) + psi.at(m);
      if (v < inner) {
        inner = v;
        arg = m;
      }
    }
    sol.per_policy_values(static_cast<Eigen::Index>(p)) = inner;
    sol.per_policy_worst_models[p] = arg;
    if (p == 0 || inner > sol.value) {
      sol.value = inner;
      sol.policy_index = p;
      sol.worst_model_index = arg;
    }
  }
  return sol;
}

}  // namespace

GameSolution solve_generalized_pessimism(const VersionSpace& vs, const PolicySet& policies,
                                         const ModelOffsets& psi,
                                         const std::optional<std::vector<std::size_t>>& subset) {
  check_policies(vs, policies);
  const std::vector<std::size_t> models = subset ? vs.restricted_to(*subset).members() : vs.members();
  for (std::size_t m : models) {
    const auto it = psi.find(m);
    if (it == psi.end() || std::isnan(it->second))
      throw ParameterError("psi is undefined on model " + std::to_string(m));
  }
  return max_min(policy_returns(vs.model_class(), policies), psi, models);
}

ModelOffsets absolute_offsets(const VersionSpace& vs) {
  ModelOffsets psi;
  for (std::size_t m : vs.members()) psi[m] = 0.0;
  return psi;
}

ModelOffsets reference_offsets(const VersionSpace& vs, const Policy& pi_ref) {
  ModelOffsets psi;
  for (std::size_t m : vs.members()) psi[m] = -expected_return(vs.model(m), pi_ref);
  return psi;
}

ModelOffsets regret_offsets(const VersionSpace& vs, const PolicySet& policies) {
  check_policies(vs, policies);
  ModelOffsets psi;
  for (std::size_t m : vs.members()) {
    double best = -std::numeric_limits<double>::infinity();
    for (const Policy& pi : policies.policies) best = std::max(best, expected_return(vs.model(m), pi));
    psi[m] = -best;
  }
  return psi;
}

GameSolution solve_relative_pessimism(const VersionSpace& vs, const PolicySet& policies,
                                      const Policy& pi_ref) {
  check_policies(vs, policies);
  GameSolution sol = solve_generalized_pessimism(vs, policies, reference_offsets(vs, pi_ref));
  sol.reference_in_policies = policies.find(pi_ref).has_value();
  return sol;
}

GameSolution solve_optimistic(const VersionSpace& vs, const PolicySet& policies) {
  const ModelOffsets zero = absolute_offsets(vs);
  GameSolution best;
  bool first = true;
  for (std::size_t m : vs.members()) {
    GameSolution sol = solve_generalized_pessimism(vs, policies, zero, std::vector<std::size_t>{m});
    if (first || sol.value > best.value) {
      best = std::move(sol);
      first = false;
    }
  }
  return best;
}

FixedPointCheck is_fixed_point(const VersionSpace& vs, const PolicySet& policies,
                               const Policy& pi, double tol) {
  PolicySet candidates = policies;
  candidates.insert(pi, "candidate");
  const GameSolution sol = solve_relative_pessimism(vs, candidates, pi);
  return {sol.value <= tol, sol.value, sol.policy_index};
}

ConcentrabilityResult concentrability(const ModelClass& cls, const Mdp& truth,
                                      const Policy& pi, const OccupancyMeasure& data_dist,
                                      double vmax) {
  if (cls.models.empty()) throw ParameterError("concentrability: model class is empty");
  if (data_dist.dist.rows() != truth.num_states || data_dist.dist.cols() != truth.num_actions)
    throw DimensionError("concentrability: data distribution has the wrong shape");
  const OccupancyMeasure policy_dist = occupancy(truth, pi);

  ConcentrabilityResult result;
  bool any_ratio = false;
  for (std::size_t m = 0; m < cls.size(); ++m) {
    const Eigen::MatrixXd err = model_discrepancy(cls[m], truth, vmax);
    const double num = policy_dist.expectation(err);
    const double den = data_dist.expectation(err);
    if (den == 0.0) {
      if (num == 0.0) continue;
      return {std::numeric_limits<double>::infinity(), m};
    }
    const double ratio = num / den;
    if (!any_ratio || ratio > result.value) {
      result = {ratio, m};
      any_ratio = true;
    }
  }
  return result;
}

double performance_bound(double c_comp, double c_ref, double vmax, double gamma, std::size_t n,
                         std::size_t class_size, double delta, double c_abs) {
  if (!(c_comp >= 0.0) || !(c_ref >= 0.0))
    throw ParameterError("performance_bound: concentrability terms must be >= 0");
  if (!(vmax > 0.0)) throw ParameterError("performance_bound: vmax must be positive");
  if (!(gamma >= 0.0 && gamma < 1.0)) throw ParameterError("performance_bound: gamma must lie in [0, 1)");
  if (n < 1) throw ParameterError("performance_bound: n must be >= 1");
  if (class_size < 1) throw ParameterError("performance_bound: class size must be >= 1");
  if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("performance_bound: delta must lie in (0, 1)");
  if (!(c_abs >= 0.0)) throw ParameterError("performance_bound: c_abs must be >= 0");
  const double log_term = std::log(static_cast<double>(class_size) / delta);
  return c_abs * (std::sqrt(c_comp) + std::sqrt(c_ref)) * (vmax / (1.0 - gamma)) *
         std::sqrt(log_term / static_cast<double>(n));
}

}  // namespace armor
