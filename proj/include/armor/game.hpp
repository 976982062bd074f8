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

#pragma once

#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "armor/mdp.hpp"
#include "armor/version_space.hpp"

namespace armor {

/// Finite policy class. Tie-breaking everywhere in this module is by lowest
/// index, so the order of `policies` is part of the contract.
struct PolicySet {
  std::vector<Policy> policies;
  std::vector<std::string> labels;

  std::size_t size() const { return policies.size(); }
  const Policy& operator[](std::size_t i) const { return policies[i]; }
  std::optional<std::size_t> find(const Policy& pi) const;
  /// Appends `pi` unless an identical table is present; returns its index.
  std::size_t insert(const Policy& pi, const std::string& label);
};

inline constexpr std::size_t kMaxEnumeratedPolicies = 1'000'000;

/// All A^S deterministic policies (state 0 is the most significant digit, so
/// index 0 is "always action 0"), followed by `extras` in order.
PolicySet enumerate_policies(int num_states, int num_actions,
                             std::span<const Policy> extras = {},
                             std::span<const std::string> extra_labels = {});

/// J_M(pi) for every model of the class (rows) and every policy (columns).
/// Rows of non-members are computed too; they are cheap at this scale.
Eigen::MatrixXd policy_returns(const ModelClass& cls, const PolicySet& policies);
Eigen::VectorXd policy_returns(const ModelClass& cls, const Policy& pi);

struct GameSolution {
  std::size_t policy_index = 0;
  double value = 0.0;
  std::size_t worst_model_index = 0;
  Eigen::VectorXd per_policy_values;
  std::vector<std::size_t> per_policy_worst_models;
  // False when the reference policy was not among the candidates, in which
  // case the improvement guarantee does not apply.
  bool reference_in_policies = true;
};

struct WorstCase {
  std::size_t model_index = 0;
  double value = 0.0;
};

/// argmin over members of J_M(pi) - J_M(pi_ref).
WorstCase worst_case_model(const VersionSpace& vs, const Policy& pi, const Policy& pi_ref);

/// max over policies of min over members of J_M(pi) - J_M(pi_ref).
GameSolution solve_relative_pessimism(const VersionSpace& vs, const PolicySet& policies,
                                      const Policy& pi_ref);

/// Per-model offset psi(M), keyed by index into the model class.
using ModelOffsets = std::map<std::size_t, double>;

/// max over policies of min over M in `subset` of J_M(pi) + psi(M). `subset`
/// defaults to all members and must consist of members.
GameSolution solve_generalized_pessimism(const VersionSpace& vs, const PolicySet& policies,
                                         const ModelOffsets& psi,
                                         const std::optional<std::vector<std::size_t>>& subset = {});

/// psi = 0: plain worst-case return.
ModelOffsets absolute_offsets(const VersionSpace& vs);
/// psi(M) = -J_M(pi_ref): relative pessimism.
ModelOffsets reference_offsets(const VersionSpace& vs, const Policy& pi_ref);
/// psi(M) = -max_pi J_M(pi) over `policies`: worst-case regret.
ModelOffsets regret_offsets(const VersionSpace& vs, const PolicySet& policies);

/// Best policy of the most favourable member: argmax over (pi, M) of J_M(pi),
/// found by scanning singleton subsets. `worst_model_index` holds the
/// favourable model.
GameSolution solve_optimistic(const VersionSpace& vs, const PolicySet& policies);

struct FixedPointCheck {
  bool is_fixed = false;
  double best_improvement = 0.0;
  std::size_t witness_policy_index = 0;
};

/// Largest worst-case improvement over `pi` available in `policies` (with
/// `pi` added as a candidate if absent); fixed when it is at most `tol`.
FixedPointCheck is_fixed_point(const VersionSpace& vs, const PolicySet& policies,
                               const Policy& pi, double tol);

struct ConcentrabilityResult {
  double value = 1.0;
  // Model achieving the supremum; empty when every ratio was 0/0.
  std::optional<std::size_t> witness_model_index;
};

/// sup over the class of E_{d^pi}[err(M)] / E_{mu}[err(M)], err being the
/// discrepancy to the true model. 0/0 terms are skipped (all skipped -> 1);
/// x/0 with x > 0 gives +inf.
ConcentrabilityResult concentrability(const ModelClass& cls, const Mdp& truth,
                                      const Policy& pi, const OccupancyMeasure& data_dist,
                                      double vmax);

/// c_abs (sqrt(c_comp) + sqrt(c_ref)) vmax / (1 - gamma) sqrt(log(|M| / delta) / n).
double performance_bound(double c_comp, double c_ref, double vmax, double gamma, std::size_t n,
                         std::size_t class_size, double delta, double c_abs);

}  // namespace armor
