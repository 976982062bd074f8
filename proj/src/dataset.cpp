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

#include "armor/dataset.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "armor/random.hpp"

namespace armor {

using nlohmann::json;

std::string_view to_string(SamplingScheme scheme) {
  switch (scheme) {
    case SamplingScheme::occupancy_iid: return "occupancy_iid";
    case SamplingScheme::trajectory: return "trajectory";
  }
  throw ParameterError("unknown sampling scheme");
}

SamplingScheme parse_sampling_scheme(std::string_view name) {
  if (name == "occupancy_iid") return SamplingScheme::occupancy_iid;
  if (name == "trajectory") return SamplingScheme::trajectory;
  throw ParameterError("unknown sampling scheme '" + std::string(name) + "'");
}

namespace {

int sample_state(Rng& rng, const Eigen::VectorXd& dist) {
  return static_cast<int>(rng.categorical(dist));
}

Transition observe(Rng& rng, const Mdp& truth, int s, int a, double noise) {
  Transition t{s, a, truth.reward(s, a), 0};
  if (noise > 0.0) t.r += rng.uniform(-noise, noise);
  t.sp = static_cast<int>(rng.categorical(truth.next_state_dist(s, a)));
  return t;
}

}  // namespace

Dataset sample_dataset(const Mdp& truth, const Policy& behavior, std::size_t n,
                       std::uint64_t seed, SamplingScheme scheme,
                       const SamplingOptions& options) {
  truth.validate();
  behavior.validate();
  check_compatible(truth, behavior);
  if (!(options.reward_noise >= 0.0)) throw ParameterError("reward noise must be >= 0");

  Dataset data;
  data.meta = {seed, scheme, options.behavior_id, n};
  data.transitions.reserve(n);
  Rng rng(seed);

  switch (scheme) {
    case SamplingScheme::occupancy_iid: {
      for (std::size_t i = 0; i < n; ++i) {
        int s = sample_state(rng, truth.initial_dist);
        int a = static_cast<int>(rng.categorical(behavior.probs.row(s)));
        while (rng.uniform() < truth.discount) {
          s = static_cast<int>(rng.categorical(truth.next_state_dist(s, a)));
          a = static_cast<int>(rng.categorical(behavior.probs.row(s)));
        }
        data.transitions.push_back(observe(rng, truth, s, a, options.reward_noise));
      }
      break;
    }
    case SamplingScheme::trajectory: {
      const int horizon =
          options.trajectory_horizon > 0
              ? options.trajectory_horizon
              : static_cast<int>(std::ceil(1.0 / (1.0 - truth.discount)));
      int s = sample_state(rng, truth.initial_dist);
      int t = 0;
      while (data.transitions.size() < n) {
        const int a = static_cast<int>(rng.categorical(behavior.probs.row(s)));
        const Transition tr = observe(rng, truth, s, a, options.reward_noise);
        data.transitions.push_back(tr);
        s = tr.sp;
        if (++t == horizon) {
          t = 0;
          s = sample_state(rng, truth.initial_dist);
        }
      }
      break;
    }
    default:
      throw ParameterError("unknown sampling scheme");
  }
  return data;
}

double fit_loss(std::span<const Transition> data, const Mdp& model, double vmax) {
  if (!(vmax > 0.0)) throw ParameterError("fit_loss: vmax must be positive");
  const double inv_v2 = 1.0 / (vmax * vmax);
  double loss = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const Transition& t = data[i];
    if (t.s < 0 || t.s >= model.num_states || t.sp < 0 || t.sp >= model.num_states ||
        t.a < 0 || t.a >= model.num_actions)
      throw DataError("fit_loss: transition " + std::to_string(i) +
                      " has an index outside the model");
    const double p = model.transition(model.row(t.s, t.a), t.sp);
    const double dr = model.reward(t.s, t.a) - t.r;
    loss += -std::log(std::max(p, kMinLikelihood)) + dr * dr * inv_v2;
  }
  return loss;
}

double fit_loss(const Dataset& data, const Mdp& model, double vmax) {
  return fit_loss(std::span<const Transition>(data.transitions), model, vmax);
}

void save_dataset(const Dataset& data, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  const json meta{{"meta",
                   {{"seed", data.meta.seed},
                    {"scheme", to_string(data.meta.scheme)},
                    {"behavior_id", data.meta.behavior_id},
                    {"n", data.transitions.size()}}}};
  out << meta.dump() << '\n';
  for (const Transition& t : data.transitions)
    out << json{{"s", t.s}, {"a", t.a}, {"r", t.r}, {"sp", t.sp}}.dump() << '\n';
  if (!out) throw IoError("error while writing " + path.string());
}

namespace {

int read_index(const json& doc, const char* key, std::size_t line) {
  const json& v = doc.at(key);
  if (!v.is_number_integer()) throw ParseError(std::string("'") + key + "' must be an integer", line);
  const auto value = v.get<std::int64_t>();
  if (value < 0) throw ParseError(std::string("'") + key + "' must be nonnegative", line);
  if (value > std::numeric_limits<int>::max())
    throw ParseError(std::string("'") + key + "' is too large", line);
  return static_cast<int>(value);
}

}  // namespace

Dataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  Dataset data;
  std::string text;
  std::size_t line = 0;
  bool have_meta = false;
  while (std::getline(in, text)) {
    ++line;
    if (text.empty()) continue;
    json doc;
    try {
      doc = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ParseError(std::string("invalid json: ") + e.what(), line);
    }
    try {
      if (!have_meta) {
        const json& meta = doc.at("meta");
        data.meta.seed = meta.at("seed").get<std::uint64_t>();
        data.meta.scheme = parse_sampling_scheme(meta.at("scheme").get<std::string>());
        data.meta.behavior_id = meta.at("behavior_id").get<std::string>();
        data.meta.n = meta.at("n").get<std::size_t>();
        have_meta = true;
        continue;
      }
      Transition t;
      t.s = read_index(doc, "s", line);
      t.a = read_index(doc, "a", line);
      t.sp = read_index(doc, "sp", line);
      const json& r = doc.at("r");
      if (!r.is_number()) throw ParseError("'r' must be a number", line);
      t.r = r.get<double>();
      data.transitions.push_back(t);
    } catch (const json::exception& e) {
      throw ParseError(e.what(), line);
    } catch (const ParameterError& e) {
      throw ParseError(e.what(), line);
    }
  }
  if (!have_meta) throw ParseError(path.string() + ": missing metadata line", line);
  if (data.meta.n != data.transitions.size())
    throw ParseError("metadata n = " + std::to_string(data.meta.n) + " but file holds " +
                         std::to_string(data.transitions.size()) + " transitions",
                     line);
  return data;
}

}  // namespace armor
