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

#include "armor/version_space.hpp"

#include <algorithm>
#include <cmath>

#include "armor/mdp_json.hpp"
#include "armor/random.hpp"

namespace armor {

using nlohmann::json;

void ModelClass::validate() const {
  if (models.empty()) throw ParameterError("model class is empty");
  if (!labels.empty() && labels.size() != models.size())
    throw DimensionError("model class: label count does not match model count");
  const Mdp& first = models.front();
  for (const Mdp& m : models) {
    m.validate();
    check_compatible(first, m);
    if (m.discount != first.discount || m.initial_dist != first.initial_dist)
      throw ParameterError("model class: members must share discount and initial distribution");
  }
  if (truth_index && *truth_index >= models.size())
    throw DimensionError("model class: truth index out of range");
}

std::optional<std::size_t> ModelClass::find(const Mdp& model) const {
  for (std::size_t i = 0; i < models.size(); ++i)
    if (models[i] == model) return i;
  return std::nullopt;
}

json model_class_to_json(const ModelClass& cls) {
  json models = json::array();
  for (const Mdp& m : cls.models) models.push_back(mdp_to_json(m));
  json doc{{"models", std::move(models)}, {"labels", cls.labels}};
  if (cls.truth_index) doc["truth_index"] = *cls.truth_index;
  return doc;
}

ModelClass model_class_from_json(const json& doc) {
  ModelClass cls;
  const json* models = &doc;
  if (doc.is_object()) {
    models = &doc.at("models");
    if (doc.contains("labels")) cls.labels = doc.at("labels").get<std::vector<std::string>>();
    if (doc.contains("truth_index")) cls.truth_index = doc.at("truth_index").get<std::size_t>();
  }
  if (!models->is_array()) throw ParseError("model class json must be an array of mdps", 0);
  for (const json& m : *models) cls.models.push_back(mdp_from_json(m));
  if (cls.labels.empty())
    for (std::size_t i = 0; i < cls.models.size(); ++i) cls.labels.push_back("model" + std::to_string(i));
  cls.validate();
  return cls;
}

std::vector<double> class_losses(const ModelClass& cls, const Dataset& data, double vmax) {
  cls.validate();
  std::vector<double> losses;
  losses.reserve(cls.size());
  for (const Mdp& m : cls.models) losses.push_back(fit_loss(data, m, vmax));
  return losses;
}

namespace {

std::size_t argmin_first(const std::vector<double>& values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] < values[best]) best = i;
  return best;
}

}  // namespace

MleFit mle_fit(const ModelClass& cls, const Dataset& data, double vmax) {
  const std::vector<double> losses = class_losses(cls, data, vmax);
  const std::size_t best = argmin_first(losses);
  return {best, losses[best]};
}

MleFit mle_fit(const ModelClass& cls, const Dataset& data) {
  cls.validate();
  return mle_fit(cls, data, default_vmax(cls.models.front().discount));
}

VersionSpace::VersionSpace(ModelClass cls, std::vector<double> losses, double alpha)
    : class_(std::move(cls)), losses_(std::move(losses)), alpha_(alpha) {
  if (class_.models.empty()) throw ParameterError("version space: empty model class");
  if (losses_.size() != class_.size())
    throw DimensionError("version space: one loss per model is required");
  if (std::isnan(alpha_) || alpha_ < 0.0) throw ParameterError("version space: alpha must be >= 0");
  mle_index_ = argmin_first(losses_);
  min_loss_ = losses_[mle_index_];
  for (std::size_t i = 0; i < losses_.size(); ++i)
    if (losses_[i] - min_loss_ <= alpha_) members_.push_back(i);
}

bool VersionSpace::contains(std::size_t model_index) const {
  return std::binary_search(members_.begin(), members_.end(), model_index);
}

VersionSpace VersionSpace::restricted_to(const std::vector<std::size_t>& subset) const {
  if (subset.empty()) throw ParameterError("version space: empty subset");
  for (std::size_t i : subset)
    if (!contains(i)) throw ParameterError("version space: subset contains a non-member");
  VersionSpace restricted = *this;
  restricted.members_ = subset;
  std::sort(restricted.members_.begin(), restricted.members_.end());
  restricted.members_.erase(std::unique(restricted.members_.begin(), restricted.members_.end()),
                            restricted.members_.end());
  return restricted;
}

VersionSpace build_version_space(const ModelClass& cls, const Dataset& data, double alpha,
                                 double vmax) {
  if (std::isnan(alpha) || alpha < 0.0) throw ParameterError("alpha must be >= 0");
  return {cls, class_losses(cls, data, vmax), alpha};
}

VersionSpace build_version_space(const ModelClass& cls, const Dataset& data, double alpha) {
  cls.validate();
  return build_version_space(cls, data, alpha, default_vmax(cls.models.front().discount));
}

std::vector<double> alpha_grid(std::size_t class_size, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("delta must lie in (0, 1)");
  if (class_size == 0) throw ParameterError("class size must be positive");
  const double base = std::log(static_cast<double>(class_size) / delta);
  std::vector<double> grid;
  for (int k = -6; k <= 8; ++k) grid.push_back(std::ldexp(1.0, k) * base);
  return grid;
}

double calibrate_alpha(const ModelClass& cls, const Mdp& truth, const Policy& behavior,
                       std::size_t n, double delta, std::size_t trials, std::uint64_t seed,
                       const CalibrationOptions& options) {
  cls.validate();
  if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("delta must lie in (0, 1)");
  if (static_cast<double>(trials) < 10.0 / delta)
    throw ParameterError("calibrate_alpha: need at least 10 / delta trials");
  const std::optional<std::size_t> truth_at = cls.find(truth);
  if (!truth_at) throw ParameterError("calibrate_alpha: the true model is not in the class");
  const double vmax = options.vmax.value_or(default_vmax(truth.discount));

  // Excess loss of the true model over the MLE, one per fresh dataset.
  std::vector<double> excess;
  excess.reserve(trials);
  for (std::size_t t = 0; t < trials; ++t) {
    const Dataset data = sample_dataset(truth, behavior, n, derive_seed(seed, t),
                                        options.scheme, options.sampling);
    const std::vector<double> losses = class_losses(cls, data, vmax);
    const double best = *std::min_element(losses.begin(), losses.end());
    excess.push_back(losses[*truth_at] - best);
  }

  const auto required = static_cast<std::size_t>(
      std::ceil((1.0 - delta) * static_cast<double>(trials) - 1e-9));
  for (double alpha : alpha_grid(cls.size(), delta)) {
    const auto covered = static_cast<std::size_t>(
        std::count_if(excess.begin(), excess.end(), [&](double e) { return e <= alpha; }));
    if (covered >= required) return alpha;
  }
  throw ParameterError("calibrate_alpha: no grid threshold reaches the requested coverage");
}

}  // namespace armor
