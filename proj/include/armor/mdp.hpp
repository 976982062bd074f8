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

// Exact finite-MDP mathematics: policy evaluation, discounted occupancies,
// model discrepancy and the simulation-lemma bound. Everything here is
// header-only and templated on the scalar type; the rest of the library uses
// the double-precision aliases at the bottom of the file.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "armor/error.hpp"

namespace armor {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

inline constexpr double kDistributionTolerance = 1e-12;
inline constexpr int kMaxExactStates = 64;

/// Finite discounted MDP. Transitions are stored as an (S*A) x S matrix whose
/// row `s * A + a` is the next-state distribution of the pair (s, a).
template <typename Scalar>
struct TabularMdp {
  int num_states = 0;
  int num_actions = 0;
  MatrixX<Scalar> transition;  // (S*A) x S
  MatrixX<Scalar> reward;      // S x A, entries in [0, 1]
  Scalar discount = Scalar(0);
  VectorX<Scalar> initial_dist;  // S

  Eigen::Index row(int s, int a) const {
    return static_cast<Eigen::Index>(s) * num_actions + a;
  }
  auto next_state_dist(int s, int a) const { return transition.row(row(s, a)); }
  auto next_state_dist(int s, int a) { return transition.row(row(s, a)); }

  /// Throws DimensionError / ParameterError if any invariant is violated.
  void validate() const;

  bool operator==(const TabularMdp& other) const {
    return num_states == other.num_states && num_actions == other.num_actions &&
           discount == other.discount && transition == other.transition &&
           reward == other.reward && initial_dist == other.initial_dist;
  }
};

/// Stochastic policy table; row s is the action distribution at state s.
template <typename Scalar>
struct PolicyTable {
  MatrixX<Scalar> probs;  // S x A

  int num_states() const { return static_cast<int>(probs.rows()); }
  int num_actions() const { return static_cast<int>(probs.cols()); }

  void validate() const;

  static PolicyTable uniform(int num_states, int num_actions) {
    return {MatrixX<Scalar>::Constant(num_states, num_actions,
                                      Scalar(1) / Scalar(num_actions))};
  }

  // Deterministic policies are one-hot tables.
  static PolicyTable deterministic(const std::vector<int>& actions, int num_actions) {
    PolicyTable pi{MatrixX<Scalar>::Zero(static_cast<Eigen::Index>(actions.size()),
                                         num_actions)};
    for (std::size_t s = 0; s < actions.size(); ++s) {
      if (actions[s] < 0 || actions[s] >= num_actions)
        throw DimensionError("deterministic policy: action index out of range");
      pi.probs(static_cast<Eigen::Index>(s), actions[s]) = Scalar(1);
    }
    return pi;
  }

  static PolicyTable constant_action(int num_states, int num_actions, int action) {
    return deterministic(std::vector<int>(static_cast<std::size_t>(num_states), action),
                         num_actions);
  }

  bool operator==(const PolicyTable& other) const { return probs == other.probs; }
};

template <typename Scalar>
struct ValueResult {
  VectorX<Scalar> state_values;  // V, S
  MatrixX<Scalar> q_values;      // Q, S x A
  Scalar expected_return = Scalar(0);
  Scalar vmax = Scalar(0);
};

/// Normalised discounted state-action occupancy d(s, a).
template <typename Scalar>
struct Occupancy {
  MatrixX<Scalar> dist;  // S x A

  Scalar expectation(const MatrixX<Scalar>& table) const {
    return dist.cwiseProduct(table).sum();
  }
};

struct SimulationGap {
  double exact_gap = 0.0;
  double bound = 0.0;
};

/// Value range used when the caller does not pick one: rewards live in
/// [0, 1], so discounted values live in [0, 1 / (1 - gamma)].
template <typename Scalar>
Scalar default_vmax(Scalar discount) {
  return Scalar(1) / (Scalar(1) - discount);
}

namespace detail {

template <typename Derived>
void check_distribution(const Eigen::MatrixBase<Derived>& row, const char* what) {
  using Scalar = typename Derived::Scalar;
  if ((row.array() < Scalar(0)).any() || !row.allFinite())
    throw ParameterError(std::string(what) + ": negative or non-finite probability");
  if (std::abs(static_cast<double>(row.sum()) - 1.0) > kDistributionTolerance)
    throw ParameterError(std::string(what) + ": probabilities do not sum to 1");
}

}  // namespace detail

template <typename Scalar>
void TabularMdp<Scalar>::validate() const {
  if (num_states <= 0 || num_actions <= 0)
    throw DimensionError("mdp: state and action counts must be positive");
  if (transition.rows() != static_cast<Eigen::Index>(num_states) * num_actions ||
      transition.cols() != num_states)
    throw DimensionError("mdp: transition tensor has wrong shape");
  if (reward.rows() != num_states || reward.cols() != num_actions)
    throw DimensionError("mdp: reward table has wrong shape");
  if (initial_dist.size() != num_states)
    throw DimensionError("mdp: initial distribution has wrong length");
  if (!(discount >= Scalar(0) && discount < Scalar(1)))
    throw ParameterError("mdp: discount must lie in [0, 1)");
  for (Eigen::Index r = 0; r < transition.rows(); ++r)
    detail::check_distribution(transition.row(r), "mdp transition row");
  detail::check_distribution(initial_dist.transpose(), "mdp initial distribution");
  if (!reward.allFinite() || (reward.array() < Scalar(0)).any() ||
      (reward.array() > Scalar(1)).any())
    throw ParameterError("mdp: rewards must lie in [0, 1]");
}

template <typename Scalar>
void PolicyTable<Scalar>::validate() const {
  if (probs.rows() == 0 || probs.cols() == 0)
    throw DimensionError("policy: empty table");
  for (Eigen::Index s = 0; s < probs.rows(); ++s)
    detail::check_distribution(probs.row(s), "policy row");
}

template <typename Scalar>
void check_compatible(const TabularMdp<Scalar>& mdp, const PolicyTable<Scalar>& pi) {
  if (pi.num_states() != mdp.num_states || pi.num_actions() != mdp.num_actions)
    throw DimensionError("policy shape does not match the mdp");
}

template <typename Scalar>
void check_compatible(const TabularMdp<Scalar>& lhs, const TabularMdp<Scalar>& rhs) {
  if (lhs.num_states != rhs.num_states || lhs.num_actions != rhs.num_actions)
    throw DimensionError("mdp shapes do not agree");
}

/// State-to-state transition matrix P_pi(s, s') = sum_a pi(a|s) P(s'|s,a).
template <typename Scalar>
MatrixX<Scalar> policy_transition(const TabularMdp<Scalar>& mdp,
                                  const PolicyTable<Scalar>& pi) {
  MatrixX<Scalar> p_pi = MatrixX<Scalar>::Zero(mdp.num_states, mdp.num_states);
  for (int s = 0; s < mdp.num_states; ++s)
    for (int a = 0; a < mdp.num_actions; ++a)
      p_pi.row(s) += pi.probs(s, a) * mdp.next_state_dist(s, a);
  return p_pi;
}

template <typename Scalar>
VectorX<Scalar> policy_reward(const TabularMdp<Scalar>& mdp, const PolicyTable<Scalar>& pi) {
  return mdp.reward.cwiseProduct(pi.probs).rowwise().sum();
}

/// Q(s, a) = R(s, a) + gamma * sum_s' P(s'|s,a) V(s'), as an S x A table.
template <typename Scalar>
MatrixX<Scalar> backup(const TabularMdp<Scalar>& mdp, const VectorX<Scalar>& values) {
  const VectorX<Scalar> next = mdp.transition * values;
  MatrixX<Scalar> q = mdp.reward;
  for (int s = 0; s < mdp.num_states; ++s)
    for (int a = 0; a < mdp.num_actions; ++a)
      q(s, a) += mdp.discount * next(mdp.row(s, a));
  return q;
}

/// Exact policy evaluation by an LU solve of (I - gamma P_pi) V = r_pi.
template <typename Scalar>
ValueResult<Scalar> evaluate_policy(const TabularMdp<Scalar>& mdp,
                                    const PolicyTable<Scalar>& pi) {
  mdp.validate();
  pi.validate();
  check_compatible(mdp, pi);
  const int n = mdp.num_states;
  const MatrixX<Scalar> system =
      MatrixX<Scalar>::Identity(n, n) - mdp.discount * policy_transition(mdp, pi);
  ValueResult<Scalar> result;
  result.state_values = system.partialPivLu().solve(policy_reward(mdp, pi));
  result.q_values = backup(mdp, result.state_values);
  result.expected_return = mdp.initial_dist.dot(result.state_values);
  result.vmax = default_vmax(mdp.discount);
  return result;
}

template <typename Scalar>
Scalar expected_return(const TabularMdp<Scalar>& mdp, const PolicyTable<Scalar>& pi) {
  return evaluate_policy(mdp, pi).expected_return;
}

/// d(s, a) = (1 - gamma) sum_t gamma^t Pr(s_t = s, a_t = a). The state marginal
/// solves the transposed flow equations (I - gamma P_pi)^T d_S = (1 - gamma) d0.
template <typename Scalar>
Occupancy<Scalar> occupancy(const TabularMdp<Scalar>& mdp, const PolicyTable<Scalar>& pi) {
  mdp.validate();
  pi.validate();
  check_compatible(mdp, pi);
  const int n = mdp.num_states;
  const MatrixX<Scalar> system =
      MatrixX<Scalar>::Identity(n, n) - mdp.discount * policy_transition(mdp, pi).transpose();
  const VectorX<Scalar> state_dist =
      system.partialPivLu().solve((Scalar(1) - mdp.discount) * mdp.initial_dist);
  Occupancy<Scalar> occ{pi.probs};
  for (int s = 0; s < n; ++s) occ.dist.row(s) *= state_dist(s);
  // Round-off can leave entries at -1e-18; clamp so the result is a distribution.
  occ.dist = occ.dist.cwiseMax(Scalar(0));
  return occ;
}

/// Total-variation distance between the next-state rows of every (s, a) pair.
template <typename Scalar>
MatrixX<Scalar> transition_tv(const TabularMdp<Scalar>& lhs, const TabularMdp<Scalar>& rhs) {
  check_compatible(lhs, rhs);
  MatrixX<Scalar> tv(lhs.num_states, lhs.num_actions);
  for (int s = 0; s < lhs.num_states; ++s)
    for (int a = 0; a < lhs.num_actions; ++a)
      tv(s, a) = Scalar(0.5) *
                 (lhs.next_state_dist(s, a) - rhs.next_state_dist(s, a)).cwiseAbs().sum();
  return tv;
}

/// Per-pair model error TV(P, P_ref)^2 + (R - R_ref)^2 / vmax^2.
template <typename Scalar>
MatrixX<Scalar> model_discrepancy(const TabularMdp<Scalar>& mdp,
                                  const TabularMdp<Scalar>& reference, Scalar vmax) {
  if (!(vmax >= Scalar(1))) throw ParameterError("model_discrepancy: vmax must be >= 1");
  const MatrixX<Scalar> tv = transition_tv(mdp, reference);
  return tv.cwiseAbs2() + (mdp.reward - reference.reward).cwiseAbs2() / (vmax * vmax);
}

/// Exact return gap between two models under one policy, and the
/// simulation-lemma bound on it taken under the occupancy of `mdp`.
template <typename Scalar>
SimulationGap simulation_gap(const TabularMdp<Scalar>& mdp, const TabularMdp<Scalar>& other,
                             const PolicyTable<Scalar>& pi, Scalar vmax) {
  check_compatible(mdp, other);
  other.validate();
  if (mdp.discount != other.discount)
    throw ParameterError("simulation_gap: models must share the discount");
  const Occupancy<Scalar> occ = occupancy(mdp, pi);
  const Scalar horizon = Scalar(1) / (Scalar(1) - mdp.discount);
  const Scalar tv_term = vmax * horizon * occ.expectation(transition_tv(mdp, other));
  const Scalar reward_term =
      horizon * occ.expectation((mdp.reward - other.reward).cwiseAbs().eval());
  SimulationGap gap;
  gap.exact_gap = static_cast<double>(
      std::abs(expected_return(mdp, pi) - expected_return(other, pi)));
  gap.bound = static_cast<double>(tv_term + reward_term);
  return gap;
}

using Mdp = TabularMdp<double>;
using Policy = PolicyTable<double>;
using Values = ValueResult<double>;
using OccupancyMeasure = Occupancy<double>;

}  // namespace armor
