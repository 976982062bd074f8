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
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "armor/dataset.hpp"
#include "armor/mdp.hpp"

namespace armor {

/// Finite candidate model class. All members share S, A, gamma and d0.
struct ModelClass {
  std::vector<Mdp> models;
  std::vector<std::string> labels;
  // Index of the ground-truth model when the class is known to be realizable.
  std::optional<std::size_t> truth_index;

  std::size_t size() const { return models.size(); }
  const Mdp& operator[](std::size_t i) const { return models[i]; }

  void validate() const;
  // Index of the first member equal to `model`, if any.
  std::optional<std::size_t> find(const Mdp& model) const;
};

nlohmann::json model_class_to_json(const ModelClass& cls);
/// Accepts either a bare JSON array of MDP documents or
/// {"models": [...], "labels": [...], "truth_index": k}.
ModelClass model_class_from_json(const nlohmann::json& doc);

struct MleFit {
  std::size_t index = 0;
  double loss = 0.0;
};

/// Fit losses of every member on `data`.
std::vector<double> class_losses(const ModelClass& cls, const Dataset& data, double vmax);

/// Lowest-index minimiser of the fit loss.
MleFit mle_fit(const ModelClass& cls, const Dataset& data, double vmax);
MleFit mle_fit(const ModelClass& cls, const Dataset& data);

/// Models whose fit loss is within alpha of the best one. Immutable; the
/// losses are cached so game solving never touches the dataset again.
class VersionSpace {
 public:
  VersionSpace(ModelClass cls, std::vector<double> losses, double alpha);

  const ModelClass& model_class() const { return class_; }
  const std::vector<double>& losses() const { return losses_; }
  double alpha() const { return alpha_; }
  double min_loss() const { return min_loss_; }
  std::size_t mle_index() const { return mle_index_; }
  const std::vector<std::size_t>& members() const { return members_; }
  bool contains(std::size_t model_index) const;
  const Mdp& model(std::size_t model_index) const { return class_.models.at(model_index); }

  /// Same class and losses, different threshold.
  VersionSpace with_alpha(double alpha) const { return {class_, losses_, alpha}; }

  /// Restricts membership to `subset` (which must consist of members).
  VersionSpace restricted_to(const std::vector<std::size_t>& subset) const;

 private:
  ModelClass class_;
  std::vector<double> losses_;
  double alpha_;
  double min_loss_;
  std::size_t mle_index_;
  std::vector<std::size_t> members_;
};

VersionSpace build_version_space(const ModelClass& cls, const Dataset& data, double alpha,
                                 double vmax);
VersionSpace build_version_space(const ModelClass& cls, const Dataset& data, double alpha);

struct CalibrationOptions {
  SamplingScheme scheme = SamplingScheme::occupancy_iid;
  SamplingOptions sampling;
  std::optional<double> vmax;
};

/// Candidate thresholds c * log(|M| / delta) for c in {2^-6, ..., 2^8}.
std::vector<double> alpha_grid(std::size_t class_size, double delta);

/// Smallest grid threshold for which the true model lies in the version space
/// on at least a (1 - delta) fraction of `trials` freshly sampled datasets of
/// size n. Throws ParameterError when trials < 10 / delta and when no grid
/// value reaches the target coverage.
double calibrate_alpha(const ModelClass& cls, const Mdp& truth, const Policy& behavior,
                       std::size_t n, double delta, std::size_t trials, std::uint64_t seed,
                       const CalibrationOptions& options = {});

}  // namespace armor
