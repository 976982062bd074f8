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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "armor/error.hpp"
#include "armor/instances.hpp"
#include "armor/mdp_json.hpp"
#include "armor/version_space.hpp"
#include "fixtures.hpp"

using namespace armor;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Two-state models that differ only in the successor distribution of (0, 0).
Mdp coin_model(double p_stay, double reward = 0.5) {
  Mdp m = fixtures::blank_mdp(2, 1, 0.5);
  m.transition << p_stay, 1.0 - p_stay, 0.5, 0.5;
  m.reward.setConstant(reward);
  return m;
}

ModelClass make_class(std::vector<Mdp> models, std::optional<std::size_t> truth = 0) {
  ModelClass cls;
  for (std::size_t i = 0; i < models.size(); ++i) cls.labels.push_back("m" + std::to_string(i));
  cls.models = std::move(models);
  cls.truth_index = truth;
  return cls;
}

std::vector<std::size_t> scan_members(const std::vector<double>& losses, double alpha) {
  const double best = *std::min_element(losses.begin(), losses.end());
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < losses.size(); ++i)
    if (losses[i] - best <= alpha) out.push_back(i);
  return out;
}

}  // namespace

TEST_CASE("mle fit") {
  SUBCASE("truth attains the minimum on noiseless data") {
    const Mdp truth = fixtures::random_mdp(3, 2, 0.9, 1);
    const ModelClass cls = perturbed_model_class(truth, {}, 2);
    const Dataset d = sample_dataset(truth, Policy::uniform(3, 2), 500, 3, SamplingScheme::occupancy_iid);
    const std::vector<double> losses = class_losses(cls, d, 10.0);
    const MleFit fit = mle_fit(cls, d, 10.0);
    CHECK(fit.loss == *std::min_element(losses.begin(), losses.end()));
    CHECK(losses[0] == doctest::Approx(fit.loss).epsilon(1e-12));
  }
  SUBCASE("empty dataset ties to index 0") {
    const ModelClass cls = make_class({coin_model(0.3), coin_model(0.7)});
    CHECK(mle_fit(cls, Dataset{}).index == 0);
  }
  SUBCASE("hand computation") {
    const ModelClass cls = make_class({coin_model(0.2, 0.4), coin_model(0.6, 0.5)});
    Dataset d;
    d.transitions = {{0, 0, 0.5, 0}, {0, 0, 0.5, 0}, {0, 0, 0.5, 1}, {1, 0, 0.5, 1}, {0, 0, 0.5, 0}};
    const double v2 = 4.0;
    const double l0 = -3 * std::log(0.2) - std::log(0.8) - std::log(0.5) + 5 * 0.01 / v2;
    const double l1 = -3 * std::log(0.6) - std::log(0.4) - std::log(0.5);
    const std::vector<double> losses = class_losses(cls, d, 2.0);
    CHECK(std::abs(losses[0] - l0) <= 1e-12);
    CHECK(std::abs(losses[1] - l1) <= 1e-12);
    const MleFit fit = mle_fit(cls, d, 2.0);
    CHECK(fit.index == (l0 <= l1 ? 0u : 1u));
    CHECK(fit.index == 1u);
  }
}

TEST_CASE("thresholding") {
  const Mdp truth = fixtures::random_mdp(3, 2, 0.9, 5);
  PerturbOptions opts;
  opts.class_size = 12;
  opts.perturb_scale = 0.1;
  const ModelClass cls = perturbed_model_class(truth, opts, 6);
  const Dataset d = sample_dataset(truth, Policy::uniform(3, 2), 300, 7, SamplingScheme::occupancy_iid);
  const std::vector<double> losses = class_losses(cls, d, 10.0);
  const VersionSpace vs(cls, losses, 0.0);

  CHECK(vs.members() == scan_members(losses, 0.0));
  CHECK(vs.with_alpha(kInf).members().size() == cls.size());

  std::vector<std::size_t> previous;
  for (double alpha : {0.1, 1.0, 10.0}) {
    const VersionSpace v = vs.with_alpha(alpha);
    CHECK(v.members() == scan_members(losses, alpha));
    CHECK(std::includes(v.members().begin(), v.members().end(), previous.begin(), previous.end()));
    CHECK(v.members().size() >= previous.size());
    CHECK(v.contains(v.mle_index()));
    previous = v.members();
  }

  CHECK(build_version_space(cls, d, 1.0, 10.0).members() == vs.with_alpha(1.0).members());
  CHECK_THROWS_AS(VersionSpace(cls, losses, -1.0), ParameterError);
  CHECK_THROWS_AS(VersionSpace(cls, losses, std::nan("")), ParameterError);
  CHECK_THROWS_AS(VersionSpace(cls, {1.0}, 1.0), DimensionError);
}

TEST_CASE("restriction") {
  const ModelClass cls = make_class({coin_model(0.3), coin_model(0.5), coin_model(0.7)});
  const VersionSpace vs(cls, {0.0, 1.0, 5.0}, 2.0);
  CHECK(vs.members() == std::vector<std::size_t>{0, 1});
  CHECK(vs.restricted_to({1}).members() == std::vector<std::size_t>{1});
  CHECK_THROWS_AS(vs.restricted_to({2}), ParameterError);
  CHECK_THROWS_AS(vs.restricted_to({}), ParameterError);
}

TEST_CASE("mle is a member for every alpha on random instances") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Mdp truth = fixtures::random_mdp(3, 2, 0.9, seed);
    const ModelClass cls = perturbed_model_class(truth, {}, seed + 1000);
    const Dataset d = sample_dataset(truth, Policy::uniform(3, 2), 100, seed, SamplingScheme::trajectory);
    const std::vector<double> losses = class_losses(cls, d, 10.0);
    for (double alpha : {0.0, 1e-3, 0.5, 3.0, kInf})
      CHECK(VersionSpace(cls, losses, alpha).contains(mle_fit(cls, d, 10.0).index));
  }
}

TEST_CASE("calibration") {
  const Policy mu = Policy::uniform(2, 1);
  SUBCASE("singleton class") {
    const ModelClass cls = make_class({coin_model(0.3)});
    const double alpha = calibrate_alpha(cls, cls[0], mu, 100, 0.1, 100, 1);
    CHECK(alpha == alpha_grid(1, 0.1).front());
  }
  SUBCASE("distinguishable pair") {
    const ModelClass cls = make_class({coin_model(0.1), coin_model(0.9)});
    double previous = kInf;
    for (std::size_t n : {100u, 1000u, 10000u}) {
      const double alpha = calibrate_alpha(cls, cls[0], mu, n, 0.5, 200, 3);
      CHECK(alpha <= previous);
      previous = alpha;
    }
    CHECK(previous == alpha_grid(2, 0.5).front());
  }
  SUBCASE("duplicated truth") {
    const ModelClass base = make_class({coin_model(0.4), coin_model(0.6)});
    const ModelClass dup = make_class({coin_model(0.4), coin_model(0.4), coin_model(0.6)});
    // Same grid size so only the losses could differ.
    CalibrationOptions opts;
    const double a = calibrate_alpha(base, base[0], mu, 200, 0.1, 100, 9, opts);
    const double b = calibrate_alpha(dup, dup[0], mu, 200, 0.1, 100, 9, opts);
    CHECK(a / std::log(2.0 / 0.1) == doctest::Approx(b / std::log(3.0 / 0.1)));
  }
  SUBCASE("errors") {
    const ModelClass cls = make_class({coin_model(0.4), coin_model(0.6)});
    CHECK_THROWS_AS(calibrate_alpha(cls, cls[0], mu, 10, 0.1, 99, 0), ParameterError);
    CHECK_THROWS_AS(calibrate_alpha(cls, coin_model(0.5), mu, 10, 0.1, 100, 0), ParameterError);
    CHECK_THROWS_AS(calibrate_alpha(cls, cls[0], mu, 10, 1.5, 100, 0), ParameterError);
  }
}

TEST_CASE("calibrated threshold covers the truth on fresh data") {
  const Mdp truth = fixtures::random_mdp(4, 2, 0.9, 77);
  const Policy mu = fixtures::random_policy(4, 2, 78);
  const ModelClass cls = perturbed_model_class(truth, {}, 79);
  const double delta = 0.1;
  const double alpha = calibrate_alpha(cls, truth, mu, 1000, delta, 200, 80);
  std::size_t covered = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Dataset d = sample_dataset(truth, mu, 1000, derive_seed(1234, seed), SamplingScheme::occupancy_iid);
    const std::vector<double> losses = class_losses(cls, d, default_vmax(0.9));
    if (losses[0] - *std::min_element(losses.begin(), losses.end()) <= alpha) ++covered;
  }
  CHECK(static_cast<double>(covered) / 200.0 >= 1.0 - delta - 0.05);
}

TEST_CASE("class json") {
  const ModelClass cls = perturbed_model_class(fixtures::random_mdp(2, 2, 0.9, 1), {3, 0.3, 1.0}, 2);
  const ModelClass back = model_class_from_json(model_class_to_json(cls));
  CHECK(back.models == cls.models);
  CHECK(back.labels == cls.labels);
  CHECK(back.truth_index == cls.truth_index);

  nlohmann::json bare = nlohmann::json::array();
  for (const Mdp& m : cls.models) bare.push_back(mdp_to_json(m));
  const ModelClass from_array = model_class_from_json(bare);
  CHECK(from_array.models == cls.models);
  CHECK_FALSE(from_array.truth_index.has_value());

  ModelClass mixed = cls;
  mixed.models.push_back(fixtures::random_mdp(3, 2, 0.9, 4));
  mixed.labels.push_back("odd");
  CHECK_THROWS(mixed.validate());
}
