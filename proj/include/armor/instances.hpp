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

#include <cstdint>
#include <vector>

#include "armor/mdp.hpp"
#include "armor/random.hpp"
#include "armor/version_space.hpp"

namespace armor {

/// One-dimensional chain: action 0 moves left, action 1 moves right, the
/// agent starts in the centre cell and the end cells pay their reward on every
/// step spent there.
struct ToyChainSpec {
  int length = 5;  // odd, >= 3
  double reward_left = 0.1;
  double reward_right = 1.0;
  double gamma = 0.95;
  bool absorbing_ends = true;

  int center() const { return length / 2; }
  void validate() const;
};

inline constexpr int kLeft = 0;
inline constexpr int kRight = 1;

struct ToyChain {
  Mdp truth;
  Policy behavior;   // always left
  Policy reference;  // always right
};

ToyChain toy_chain(const ToyChainSpec& spec);

/// The true chain plus data-consistent and data-inconsistent variants:
/// reversed right moves at the reference's interior states, leaking end
/// cells, rescaled end rewards and an optimistic reward on the unseen left-end
/// right action. Index 0 is the true model.
ModelClass toy_chain_model_class(const ToyChainSpec& spec);

/// States with positive probability of being visited by `pi` from d0.
std::vector<int> reachable_states(const Mdp& mdp, const Policy& pi);

struct RandomMdpOptions {
  int num_states = 4;
  int num_actions = 2;
  double gamma = 0.9;
  // Fraction of next states given zero probability in each row (at least one
  // next state is always kept).
  double sparsity = 0.0;
};

/// Dirichlet(1) transition rows, U(0, 1) rewards and a Dirichlet(1) initial
/// distribution.
Mdp random_mdp(const RandomMdpOptions& options, Rng& rng);

/// Dirichlet(1) action rows.
Policy random_policy(int num_states, int num_actions, Rng& rng);
Policy random_deterministic_policy(int num_states, int num_actions, Rng& rng);

/// Deterministic optimal policy by policy iteration (lowest action on ties).
Policy optimal_policy(const Mdp& mdp);

/// (1 - epsilon) pi + epsilon * uniform.
Policy mix_with_uniform(const Policy& pi, double epsilon);

struct PerturbOptions {
  std::size_t class_size = 10;
  // Each perturbed row becomes (1 - e) P + e q with e ~ U(scale / 2, scale)
  // and q ~ Dirichlet(1); rewards move by U(-scale / 2, scale / 2), clipped.
  double perturb_scale = 0.3;
  // Probability that a given (s, a) row of a wrong model is perturbed.
  double row_fraction = 1.0;
};

/// Model 0 is `truth`; models 1.. are independent perturbations of it.
ModelClass perturbed_model_class(const Mdp& truth, const PerturbOptions& options,
                                 std::uint64_t seed);

}  // namespace armor
