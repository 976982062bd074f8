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

#include <vector>

#include "armor/instances.hpp"
#include "armor/mdp.hpp"
#include "armor/random.hpp"

namespace fixtures {

using armor::Mdp;
using armor::Policy;

inline Mdp blank_mdp(int S, int A, double gamma) {
  Mdp m;
  m.num_states = S;
  m.num_actions = A;
  m.transition = Eigen::MatrixXd::Zero(S * A, S);
  m.reward = Eigen::MatrixXd::Zero(S, A);
  m.discount = gamma;
  m.initial_dist = Eigen::VectorXd::Zero(S);
  m.initial_dist(0) = 1.0;
  return m;
}

inline Mdp one_state(double reward, double gamma, int A = 1) {
  Mdp m = blank_mdp(1, A, gamma);
  m.transition.setOnes();
  m.reward.setConstant(reward);
  return m;
}

// s0 -> s1 under a0, self-loops otherwise; R(s1, .) = 1.
inline Mdp two_state_chain(double gamma = 0.5) {
  Mdp m = blank_mdp(2, 2, gamma);
  m.transition(0 * 2 + 0, 1) = 1.0;
  m.transition(0 * 2 + 1, 0) = 1.0;
  m.transition(1 * 2 + 0, 1) = 1.0;
  m.transition(1 * 2 + 1, 1) = 1.0;
  m.reward.row(1).setOnes();
  return m;
}

inline Mdp random_mdp(int S, int A, double gamma, std::uint64_t seed) {
  armor::Rng rng(seed);
  return armor::random_mdp({S, A, gamma, 0.0}, rng);
}

inline Policy random_policy(int S, int A, std::uint64_t seed) {
  armor::Rng rng(seed);
  return armor::random_policy(S, A, rng);
}

}  // namespace fixtures
