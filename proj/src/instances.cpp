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

#include "armor/instances.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace armor {

void ToyChainSpec::validate() const {
  if (length < 3 || length % 2 == 0) throw ParameterError("toy chain: length must be odd and >= 3");
  if (!(gamma >= 0.0 && gamma < 1.0)) throw ParameterError("toy chain: gamma must lie in [0, 1)");
  if (reward_left < 0.0 || reward_left > 1.0 || reward_right < 0.0 || reward_right > 1.0)
    throw ParameterError("toy chain: rewards must lie in [0, 1]");
}

namespace {

void set_deterministic(Mdp& mdp, int s, int a, int next) {
  mdp.next_state_dist(s, a).setZero();
  mdp.transition(mdp.row(s, a), next) = 1.0;
}

}  // namespace

ToyChain toy_chain(const ToyChainSpec& spec) {
  spec.validate();
  const int n = spec.length;
  Mdp mdp;
  mdp.num_states = n;
  mdp.num_actions = 2;
  mdp.transition = Eigen::MatrixXd::Zero(2 * n, n);
  mdp.reward = Eigen::MatrixXd::Zero(n, 2);
  mdp.discount = spec.gamma;
  mdp.initial_dist = Eigen::VectorXd::Zero(n);
  mdp.initial_dist(spec.center()) = 1.0;
  for (int s = 0; s < n; ++s) {
    set_deterministic(mdp, s, kLeft, std::max(s - 1, 0));
    set_deterministic(mdp, s, kRight, std::min(s + 1, n - 1));
  }
  if (spec.absorbing_ends) {
    set_deterministic(mdp, 0, kRight, 0);
    set_deterministic(mdp, n - 1, kLeft, n - 1);
  }
  mdp.reward.row(0).setConstant(spec.reward_left);
  mdp.reward.row(n - 1).setConstant(spec.reward_right);
  mdp.validate();
  return {mdp, Policy::constant_action(n, 2, kLeft), Policy::constant_action(n, 2, kRight)};
}

ModelClass toy_chain_model_class(const ToyChainSpec& spec) {
  const ToyChain chain = toy_chain(spec);
  const int n = spec.length;
  const int c = spec.center();
  ModelClass cls;
  auto add = [&](Mdp m, std::string label) {
    m.validate();
    cls.models.push_back(std::move(m));
    cls.labels.push_back(std::move(label));
  };
  add(chain.truth, "true");
  // Right moves the data never shows, reversed.
  for (int s = c; s <= n - 2; ++s) {
    Mdp m = chain.truth;
    set_deterministic(m, s, kRight, s - 1);
    add(std::move(m), "reverse-right@" + std::to_string(s));
  }
  // Left moves right of the centre, flipped.
  for (int s = c + 1; s <= n - 2; ++s) {
    Mdp m = chain.truth;
    set_deterministic(m, s, kLeft, s + 1);
    add(std::move(m), "flip-left@" + std::to_string(s));
  }
  {
    Mdp m = chain.truth;
    set_deterministic(m, n - 1, kLeft, n - 2);
    add(std::move(m), "leak-left@end");
  }
  {
    Mdp m = chain.truth;
    set_deterministic(m, n - 1, kRight, n - 2);
    add(std::move(m), "leak-right@end");
  }
  for (double scale : {0.5, 0.0}) {
    Mdp m = chain.truth;
    m.reward.row(n - 1) *= scale;
    add(std::move(m), "right-reward-x" + std::string(scale == 0.0 ? "0" : "0.5"));
  }
  {
    // Visible in left-only data, so it leaves the version space as n grows.
    Mdp m = chain.truth;
    m.reward.row(0) *= 0.5;
    add(std::move(m), "left-reward-x0.5");
  }
  {
    Mdp m = chain.truth;
    m.reward(0, kRight) = 1.0;
    add(std::move(m), "left-end-right-reward-high");
  }
  cls.truth_index = 0;
  cls.validate();
  return cls;
}

std::vector<int> reachable_states(const Mdp& mdp, const Policy& pi) {
  const Eigen::MatrixXd p_pi = policy_transition(mdp, pi);
  std::vector<char> seen(static_cast<std::size_t>(mdp.num_states), 0);
  std::vector<int> frontier;
  for (int s = 0; s < mdp.num_states; ++s)
    if (mdp.initial_dist(s) > 0.0) {
      seen[static_cast<std::size_t>(s)] = 1;
      frontier.push_back(s);
    }
  while (!frontier.empty()) {
    const int s = frontier.back();
    frontier.pop_back();
    for (int sp = 0; sp < mdp.num_states; ++sp)
      if (p_pi(s, sp) > 0.0 && !seen[static_cast<std::size_t>(sp)]) {
        seen[static_cast<std::size_t>(sp)] = 1;
        frontier.push_back(sp);
      }
  }
  std::vector<int> states;
  for (int s = 0; s < mdp.num_states; ++s)
    if (seen[static_cast<std::size_t>(s)]) states.push_back(s);
  return states;
}

namespace {

Eigen::RowVectorXd dirichlet_row(int size, Rng& rng) {
  Eigen::RowVectorXd row(size);
  for (int i = 0; i < size; ++i) row(i) = rng.exponential();
  return row / row.sum();
}

}  // namespace

Mdp random_mdp(const RandomMdpOptions& options, Rng& rng) {
  const int S = options.num_states;
  const int A = options.num_actions;
  if (S <= 0 || A <= 0) throw DimensionError("random_mdp: counts must be positive");
  Mdp mdp;
  mdp.num_states = S;
  mdp.num_actions = A;
  mdp.discount = options.gamma;
  mdp.transition.resize(static_cast<Eigen::Index>(S) * A, S);
  for (Eigen::Index r = 0; r < mdp.transition.rows(); ++r) {
    Eigen::RowVectorXd row = dirichlet_row(S, rng);
    if (options.sparsity > 0.0) {
      const Eigen::Index keep = static_cast<Eigen::Index>(rng.index(static_cast<std::size_t>(S)));
      for (Eigen::Index j = 0; j < S; ++j)
        if (j != keep && rng.uniform() < options.sparsity) row(j) = 0.0;
      row /= row.sum();
    }
    mdp.transition.row(r) = row;
  }
  mdp.reward.resize(S, A);
  for (Eigen::Index i = 0; i < mdp.reward.size(); ++i) mdp.reward(i) = rng.uniform();
  mdp.initial_dist = dirichlet_row(S, rng).transpose();
  mdp.validate();
  return mdp;
}

Policy random_policy(int num_states, int num_actions, Rng& rng) {
  Policy pi{Eigen::MatrixXd(num_states, num_actions)};
  for (int s = 0; s < num_states; ++s) pi.probs.row(s) = dirichlet_row(num_actions, rng);
  return pi;
}

Policy random_deterministic_policy(int num_states, int num_actions, Rng& rng) {
  std::vector<int> actions(static_cast<std::size_t>(num_states));
  for (int& a : actions) a = static_cast<int>(rng.index(static_cast<std::size_t>(num_actions)));
  return Policy::deterministic(actions, num_actions);
}

Policy optimal_policy(const Mdp& mdp) {
  mdp.validate();
  std::vector<int> actions(static_cast<std::size_t>(mdp.num_states), 0);
  Policy pi = Policy::deterministic(actions, mdp.num_actions);
  // Policy iteration terminates in at most A^S improvements; the margin keeps
  // round-off from cycling between tied actions.
  for (int iter = 0; iter < 10000; ++iter) {
    const Eigen::MatrixXd q = evaluate_policy(mdp, pi).q_values;
    bool changed = false;
    for (int s = 0; s < mdp.num_states; ++s) {
      int best = actions[static_cast<std::size_t>(s)];
      for (int a = 0; a < mdp.num_actions; ++a)
        if (q(s, a) > q(s, best) + 1e-12) best = a;
      if (best != actions[static_cast<std::size_t>(s)]) {
        actions[static_cast<std::size_t>(s)] = best;
        changed = true;
      }
    }
    if (!changed) break;
    pi = Policy::deterministic(actions, mdp.num_actions);
  }
  return pi;
}

Policy mix_with_uniform(const Policy& pi, double epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw ParameterError("mix_with_uniform: epsilon in [0, 1]");
  Policy mixed = pi;
  mixed.probs = (1.0 - epsilon) * pi.probs.array() + epsilon / static_cast<double>(pi.num_actions());
  return mixed;
}

ModelClass perturbed_model_class(const Mdp& truth, const PerturbOptions& options,
                                 std::uint64_t seed) {
  truth.validate();
  if (options.class_size == 0) throw ParameterError("perturbed_model_class: class size must be >= 1");
  if (!(options.perturb_scale >= 0.0 && options.perturb_scale <= 1.0))
    throw ParameterError("perturbed_model_class: perturb scale must lie in [0, 1]");
  Rng rng(seed);
  ModelClass cls;
  cls.models.push_back(truth);
  cls.labels.push_back("true");
  cls.truth_index = 0;
  const double scale = options.perturb_scale;
  for (std::size_t k = 1; k < options.class_size; ++k) {
    Mdp m = truth;
    for (int s = 0; s < m.num_states; ++s)
      for (int a = 0; a < m.num_actions; ++a) {
        if (rng.uniform() >= options.row_fraction) continue;
        const double eps = rng.uniform(0.5 * scale, scale);
        m.next_state_dist(s, a) =
            (1.0 - eps) * m.next_state_dist(s, a) + eps * dirichlet_row(m.num_states, rng);
        m.next_state_dist(s, a) /= m.next_state_dist(s, a).sum();
        m.reward(s, a) = std::clamp(m.reward(s, a) + rng.uniform(-0.5 * scale, 0.5 * scale), 0.0, 1.0);
      }
    cls.models.push_back(std::move(m));
    cls.labels.push_back("perturbed" + std::to_string(k));
  }
  cls.validate();
  return cls;
}

}  // namespace armor
