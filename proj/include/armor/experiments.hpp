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
#include <optional>
#include <string>
#include <vector>

#include "armor/armor_iter.hpp"
#include "armor/dataset.hpp"
#include "armor/game.hpp"
#include "armor/instances.hpp"
#include "armor/version_space.hpp"

namespace armor {

enum class InstanceKind { toy_chain, random };

struct InstanceConfig {
  InstanceKind kind = InstanceKind::toy_chain;
  ToyChainSpec chain;
  RandomMdpOptions random;
  PerturbOptions perturb;
  std::uint64_t instance_seed = 0;
  // Random instances use an expert-cloned reference: the optimal policy of
  // the true model mixed with this much uniform noise.
  double reference_epsilon = 0.1;
};

struct Instance {
  Mdp truth;
  Policy behavior;
  Policy reference;
  ModelClass model_class;
};

Instance make_instance(const InstanceConfig& config);

/// d0-weighted probability that `pi` picks the same action as `reference`.
double start_agreement(const Mdp& mdp, const Policy& pi, const Policy& reference);

// ---------------------------------------------------------------------------
// Improvement-over-reference sweeps.

enum class SweepMode { exact_alpha, iterative_beta };

std::string_view to_string(SweepMode mode);
SweepMode parse_sweep_mode(std::string_view name);

struct SweepConfig {
  SweepMode mode = SweepMode::exact_alpha;
  InstanceConfig instance;
  std::vector<double> grid;  // alpha values (exact) or beta values (iterative)
  std::vector<std::uint64_t> seeds{0};
  std::size_t n = 1000;
  SamplingScheme scheme = SamplingScheme::occupancy_iid;
  // Iterative mode only; gamma and vmax are taken from the instance.
  ArmorConfig armor;
  // Version-space threshold of the absolute-pessimism baseline in iterative mode.
  double baseline_alpha = 1.0;
};

struct SweepRow {
  double parameter = 0.0;
  double j_ref = 0.0;
  double j_learned = 0.0;
  double j_baseline = 0.0;  // absolute-pessimism (plain offline RL) solution
  std::uint64_t seed = 0;
  bool truth_in_version_space = true;
  double start_agreement = 0.0;
};

struct SweepResult {
  SweepMode mode = SweepMode::exact_alpha;
  double vmax = 0.0;
  std::vector<SweepRow> rows;

  /// Rows (with the true model in the version space, for exact mode) where
  /// j_learned < j_ref - tolerance.
  std::size_t violations(double tolerance) const;
  double min_margin() const;
};

SweepResult rpi_sweep(const SweepConfig& config);
void write_sweep_csv(const SweepResult& result, const std::filesystem::path& path);
std::string sweep_svg(const SweepResult& result);

// ---------------------------------------------------------------------------
// Version-space coverage and shrinkage.

struct CoverageConfig {
  InstanceConfig instance;
  std::vector<std::size_t> n_grid{100, 1000, 10000};
  double delta = 0.1;
  std::size_t trials = 500;
  // Sample size used to calibrate alpha; the threshold is then held fixed.
  std::size_t calibration_n = 1000;
  // Skips calibration when set.
  std::optional<double> alpha;
  std::uint64_t seed = 0;
  SamplingScheme scheme = SamplingScheme::occupancy_iid;
};

struct CoverageRow {
  std::size_t n = 0;
  double alpha = 0.0;
  double truth_frequency = 0.0;        // fraction of trials with M* in the version space
  double wrong_mean_frequency = 0.0;   // mean over wrong models of their membership rate
  double wrong_median_fraction = 0.0;  // median over trials of the member share of wrong models
  std::vector<double> per_model_frequency;
};

std::vector<CoverageRow> coverage_trial(const CoverageConfig& config);
void write_coverage_csv(const std::vector<CoverageRow>& rows, const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Absolute pessimism vs. regret minimisation.

struct SeparationConfig {
  int num_states = 3;
  int num_actions = 2;
  std::size_t num_models = 5;
  double gamma = 0.9;
  std::size_t seeds = 500;
  std::uint64_t base_seed = 0;
  double gap_tolerance = 1e-6;
};

struct SeparationWitness {
  std::uint64_t seed = 0;
  ModelClass models;
  std::size_t absolute_policy = 0;
  std::size_t regret_policy = 0;
  // How much each solution beats the other on its own objective.
  double absolute_gap = 0.0;
  double regret_gap = 0.0;
};

struct SeparationReport {
  std::size_t seeds_tried = 0;
  std::optional<SeparationWitness> witness;
};

/// The two solutions pick different policies and each is better than the
/// other's pick on its own objective by more than `tolerance`.
std::optional<SeparationWitness> find_separation(const VersionSpace& vs, const PolicySet& policies,
                                                 double tolerance);

SeparationReport objective_separation_search(const SeparationConfig& config);
nlohmann::json separation_report_json(const SeparationReport& report);

// ---------------------------------------------------------------------------
// Suboptimality against the best covered comparator as n grows.

struct TrendConfig {
  InstanceConfig instance;
  std::vector<std::size_t> n_grid{100, 1000, 10000};
  std::size_t seeds = 20;
  double delta = 0.1;
  std::size_t calibration_trials = 200;
  std::size_t calibration_n = 1000;
  std::uint64_t seed = 0;
};

struct TrendRow {
  std::size_t n = 0;
  std::uint64_t seed = 0;
  double suboptimality = 0.0;
  double unit_bound = 0.0;  // performance_bound with c_abs = 1
};

struct TrendResult {
  double alpha = 0.0;
  double c_comparator = 0.0;
  double c_reference = 0.0;
  std::size_t comparator_index = 0;
  std::vector<TrendRow> rows;

  std::vector<double> median_by_n(const std::vector<std::size_t>& n_grid) const;
  /// Smallest c_abs with suboptimality <= c_abs * unit_bound on every row.
  double fitted_constant() const;
};

/// Relative pessimism with the behaviour policy as reference; the comparator
/// is the best policy of the enumerated class whose concentrability is finite.
TrendResult absolute_performance_trend(const TrendConfig& config);

double median(std::vector<double> values);

}  // namespace armor
