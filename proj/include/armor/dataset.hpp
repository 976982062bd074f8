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
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "armor/mdp.hpp"

namespace armor {

struct Transition {
  int s = 0;
  int a = 0;
  double r = 0.0;
  int sp = 0;

  bool operator==(const Transition&) const = default;
};

enum class SamplingScheme { occupancy_iid, trajectory };

std::string_view to_string(SamplingScheme scheme);
SamplingScheme parse_sampling_scheme(std::string_view name);

struct DatasetMeta {
  std::uint64_t seed = 0;
  SamplingScheme scheme = SamplingScheme::occupancy_iid;
  std::string behavior_id;
  std::size_t n = 0;

  bool operator==(const DatasetMeta&) const = default;
};

struct Dataset {
  std::vector<Transition> transitions;
  DatasetMeta meta;

  std::size_t size() const { return transitions.size(); }
  bool empty() const { return transitions.empty(); }
  bool operator==(const Dataset&) const = default;
};

struct SamplingOptions {
  // Observed rewards are R(s, a) + U(-reward_noise, reward_noise).
  double reward_noise = 0.0;
  // Episode length for the trajectory scheme; 0 picks ceil(1 / (1 - gamma)).
  int trajectory_horizon = 0;
  std::string behavior_id = "behavior";
};

/// Draws n transitions from the true model under the behaviour policy.
///
/// occupancy_iid: each (s, a) is an independent draw from the discounted
/// occupancy of `behavior`, obtained by rolling out from d0 and stopping at
/// every step with probability 1 - gamma; the stopped pair is recorded and its
/// reward and successor are then drawn from the model.
///
/// trajectory: consecutive transitions of fixed-length episodes started from
/// d0, for data that looks like logged interaction.
Dataset sample_dataset(const Mdp& truth, const Policy& behavior, std::size_t n,
                       std::uint64_t seed, SamplingScheme scheme,
                       const SamplingOptions& options = {});

// -log(p) is clamped at -log(kMinLikelihood) so that datasets containing a
// transition a model deems impossible still get a finite (huge) loss.
inline constexpr double kMinLikelihood = 1e-300;

/// Model-fitting loss sum_D [ -log P(s'|s,a) + (R(s,a) - r)^2 / vmax^2 ].
double fit_loss(std::span<const Transition> data, const Mdp& model, double vmax);
double fit_loss(const Dataset& data, const Mdp& model, double vmax);

/// JSON Lines: a `{"meta":{...}}` line followed by one
/// `{"s":..,"a":..,"r":..,"sp":..}` line per transition.
void save_dataset(const Dataset& data, const std::filesystem::path& path);
Dataset load_dataset(const std::filesystem::path& path);

}  // namespace armor
