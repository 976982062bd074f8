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

#include "armor/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "armor/report.hpp"

namespace armor {

Instance make_instance(const InstanceConfig& config) {
  if (config.kind == InstanceKind::toy_chain) {
    ToyChain chain = toy_chain(config.chain);
    return {std::move(chain.truth), std::move(chain.behavior), std::move(chain.reference),
            toy_chain_model_class(config.chain)};
  }
  Rng rng(config.instance_seed);
  Instance inst;
  inst.truth = random_mdp(config.random, rng);
  inst.behavior = random_policy(inst.truth.num_states, inst.truth.num_actions, rng);
  inst.reference = mix_with_uniform(optimal_policy(inst.truth), config.reference_epsilon);
  inst.model_class =
      perturbed_model_class(inst.truth, config.perturb, derive_seed(config.instance_seed, 1));
  return inst;
}

double start_agreement(const Mdp& mdp, const Policy& pi, const Policy& reference) {
  double total = 0.0;
  for (int s = 0; s < mdp.num_states; ++s)
    total += mdp.initial_dist(s) * pi.probs.row(s).dot(reference.probs.row(s));
  return total;
}

std::string_view to_string(SweepMode mode) {
  return mode == SweepMode::exact_alpha ? "exact-alpha" : "iterative-beta";
}

SweepMode parse_sweep_mode(std::string_view name) {
  if (name == "exact-alpha" || name == "exact_alpha") return SweepMode::exact_alpha;
  if (name == "iterative-beta" || name == "iterative_beta") return SweepMode::iterative_beta;
  throw ParameterError("unknown sweep mode '" + std::string(name) + "'");
}

std::size_t SweepResult::violations(double tolerance) const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [&](const SweepRow& r) {
    return r.truth_in_version_space && r.j_learned < r.j_ref - tolerance;
  }));
}

double SweepResult::min_margin() const {
  double margin = std::numeric_limits<double>::infinity();
  for (const SweepRow& r : rows)
    if (r.truth_in_version_space) margin = std::min(margin, r.j_learned - r.j_ref);
  return margin;
}

namespace {

void check_exact_capacity(const Mdp& mdp) {
  if (mdp.num_states > kMaxExactStates)
    throw CapacityError("exact solver supports at most " + std::to_string(kMaxExactStates) + " states");
}

}  // namespace

SweepResult rpi_sweep(const SweepConfig& config) {
  if (config.grid.empty()) throw ParameterError("rpi_sweep: grid is empty");
  if (config.seeds.empty()) throw ParameterError("rpi_sweep: no seeds");
  const Instance inst = make_instance(config.instance);
  check_exact_capacity(inst.truth);
  const std::size_t truth_index = inst.model_class.truth_index.value_or(0);
  const double vmax = default_vmax(inst.truth.discount);
  const Policy extras[] = {inst.reference};
  const PolicySet policies =
      enumerate_policies(inst.truth.num_states, inst.truth.num_actions, extras);
  const double j_ref = expected_return(inst.truth, inst.reference);

  SweepResult result;
  result.mode = config.mode;
  result.vmax = vmax;
  for (std::uint64_t seed : config.seeds) {
    const Dataset data = sample_dataset(inst.truth, inst.behavior, config.n, seed, config.scheme);
    const std::vector<double> losses = class_losses(inst.model_class, data, vmax);

    if (config.mode == SweepMode::exact_alpha) {
      for (double alpha : config.grid) {
        const VersionSpace vs(inst.model_class, losses, alpha);
        const GameSolution rel = solve_relative_pessimism(vs, policies, inst.reference);
        const GameSolution abs = solve_generalized_pessimism(vs, policies, absolute_offsets(vs));
        const Policy& learned = policies[rel.policy_index];
        result.rows.push_back({alpha, j_ref, expected_return(inst.truth, learned),
                               expected_return(inst.truth, policies[abs.policy_index]), seed,
                               vs.contains(truth_index),
                               start_agreement(inst.truth, learned, inst.reference)});
      }
      continue;
    }

    const VersionSpace baseline_vs(inst.model_class, losses, config.baseline_alpha);
    const GameSolution abs =
        solve_generalized_pessimism(baseline_vs, policies, absolute_offsets(baseline_vs));
    const double j_baseline = expected_return(inst.truth, policies[abs.policy_index]);
    for (double beta : config.grid) {
      ArmorConfig cfg = config.armor;
      cfg.beta = beta;
      cfg.gamma = inst.truth.discount;
      cfg.vmax = vmax;
      cfg.seed = seed;
      cfg.eval_period = 0;
      const ArmorResult run = run_armor(inst.truth, data, inst.reference, cfg);
      result.rows.push_back({beta, j_ref, expected_return(inst.truth, run.final_policy),
                             j_baseline, seed, true,
                             start_agreement(inst.truth, run.final_policy, inst.reference)});
    }
  }
  return result;
}

void write_sweep_csv(const SweepResult& result, const std::filesystem::path& path) {
  std::string text = std::string(result.mode == SweepMode::exact_alpha ? "alpha" : "beta") +
                     ",seed,J_ref,J_learned,J_offlineRL_baseline,truth_in_version_space,"
                     "start_agreement\n";
  for (const SweepRow& r : result.rows)
    text += format_double(r.parameter) + ',' + std::to_string(r.seed) + ',' +
            format_double(r.j_ref) + ',' + format_double(r.j_learned) + ',' +
            format_double(r.j_baseline) + ',' + (r.truth_in_version_space ? "1" : "0") + ',' +
            format_double(r.start_agreement) + '\n';
  write_text_file(path, text);
}

std::string sweep_svg(const SweepResult& result) {
  // One point per grid value: mean over seeds.
  std::vector<double> params;
  for (const SweepRow& r : result.rows)
    if (std::find(params.begin(), params.end(), r.parameter) == params.end())
      params.push_back(r.parameter);
  std::sort(params.begin(), params.end());
  LineSeries ref{"J(reference)", {}, {}}, learned{"J(learned)", {}, {}}, base{"J(abs. pessimism)", {}, {}};
  bool all_positive = true;
  for (double p : params) {
    double jr = 0, jl = 0, jb = 0;
    int count = 0;
    for (const SweepRow& r : result.rows)
      if (r.parameter == p) {
        jr += r.j_ref;
        jl += r.j_learned;
        jb += r.j_baseline;
        ++count;
      }
    if (!(p > 0.0) || !std::isfinite(p)) all_positive = false;
    for (auto* s : {&ref, &learned, &base}) s->xs.push_back(p);
    ref.ys.push_back(jr / count);
    learned.ys.push_back(jl / count);
    base.ys.push_back(jb / count);
  }
  ChartOptions opts;
  opts.title = result.mode == SweepMode::exact_alpha ? "Exact game: return vs alpha"
                                                     : "Iterative solver: return vs beta";
  opts.x_label = result.mode == SweepMode::exact_alpha ? "alpha" : "beta";
  opts.y_label = "return on the true model";
  opts.log_x = all_positive;
  return line_chart_svg({ref, learned, base}, opts);
}

double median(std::vector<double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

std::vector<CoverageRow> coverage_trial(const CoverageConfig& config) {
  if (!(config.delta > 0.0 && config.delta < 1.0)) throw ParameterError("coverage: delta must lie in (0, 1)");
  if (static_cast<double>(config.trials) < 10.0 / config.delta)
    throw ParameterError("coverage: need at least 10 / delta trials");
  if (config.n_grid.empty()) throw ParameterError("coverage: n grid is empty");
  const Instance inst = make_instance(config.instance);
  check_exact_capacity(inst.truth);
  const ModelClass& cls = inst.model_class;
  const std::size_t truth_index = cls.truth_index.value_or(0);
  const double vmax = default_vmax(inst.truth.discount);

  CalibrationOptions calib;
  calib.scheme = config.scheme;
  const double alpha =
      config.alpha ? *config.alpha
                   : calibrate_alpha(cls, inst.truth, inst.behavior, config.calibration_n,
                                     config.delta, config.trials, config.seed, calib);

  std::vector<CoverageRow> rows;
  for (std::size_t gi = 0; gi < config.n_grid.size(); ++gi) {
    const std::size_t n = config.n_grid[gi];
    CoverageRow row;
    row.n = n;
    row.alpha = alpha;
    row.per_model_frequency.assign(cls.size(), 0.0);
    std::vector<double> wrong_fraction;
    std::size_t truth_hits = 0;
    for (std::size_t t = 0; t < config.trials; ++t) {
      // Fresh datasets, disjoint from the calibration stream.
      const std::uint64_t seed = derive_seed(derive_seed(config.seed, 1'000'003 + gi), t);
      const Dataset data = sample_dataset(inst.truth, inst.behavior, n, seed, config.scheme);
      const VersionSpace vs(cls, class_losses(cls, data, vmax), alpha);
      if (vs.contains(truth_index)) ++truth_hits;
      std::size_t wrong_members = 0;
      for (std::size_t m : vs.members()) {
        row.per_model_frequency[m] += 1.0;
        if (m != truth_index) ++wrong_members;
      }
      if (cls.size() > 1)
        wrong_fraction.push_back(static_cast<double>(wrong_members) /
                                 static_cast<double>(cls.size() - 1));
    }
    const double trials = static_cast<double>(config.trials);
    for (double& f : row.per_model_frequency) f /= trials;
    row.truth_frequency = static_cast<double>(truth_hits) / trials;
    double wrong_total = 0.0;
    for (std::size_t m = 0; m < cls.size(); ++m)
      if (m != truth_index) wrong_total += row.per_model_frequency[m];
    row.wrong_mean_frequency = cls.size() > 1 ? wrong_total / static_cast<double>(cls.size() - 1) : 0.0;
    row.wrong_median_fraction = cls.size() > 1 ? median(wrong_fraction) : 0.0;
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_coverage_csv(const std::vector<CoverageRow>& rows, const std::filesystem::path& path) {
  std::string text = "n,alpha,truth_frequency,wrong_mean_frequency,wrong_median_fraction";
  const std::size_t models = rows.empty() ? 0 : rows.front().per_model_frequency.size();
  for (std::size_t m = 0; m < models; ++m) text += ",model" + std::to_string(m);
  text += '\n';
  for (const CoverageRow& r : rows) {
    text += std::to_string(r.n) + ',' + format_double(r.alpha) + ',' +
            format_double(r.truth_frequency) + ',' + format_double(r.wrong_mean_frequency) + ',' +
            format_double(r.wrong_median_fraction);
    for (double f : r.per_model_frequency) text += ',' + format_double(f);
    text += '\n';
  }
  write_text_file(path, text);
}

std::optional<SeparationWitness> find_separation(const VersionSpace& vs, const PolicySet& policies,
                                                 double tolerance) {
  const GameSolution abs = solve_generalized_pessimism(vs, policies, absolute_offsets(vs));
  const GameSolution reg = solve_generalized_pessimism(vs, policies, regret_offsets(vs, policies));
  if (abs.policy_index == reg.policy_index) return std::nullopt;
  const auto a = static_cast<Eigen::Index>(abs.policy_index);
  const auto r = static_cast<Eigen::Index>(reg.policy_index);
  const double absolute_gap = abs.per_policy_values(a) - abs.per_policy_values(r);
  const double regret_gap = reg.per_policy_values(r) - reg.per_policy_values(a);
  if (absolute_gap <= tolerance || regret_gap <= tolerance) return std::nullopt;
  SeparationWitness w;
  w.models = vs.model_class();
  w.absolute_policy = abs.policy_index;
  w.regret_policy = reg.policy_index;
  w.absolute_gap = absolute_gap;
  w.regret_gap = regret_gap;
  return w;
}

SeparationReport objective_separation_search(const SeparationConfig& config) {
  if (config.num_models == 0) throw ParameterError("separation search: need at least one model");
  const PolicySet policies = enumerate_policies(config.num_states, config.num_actions);
  SeparationReport report;
  RandomMdpOptions opts{config.num_states, config.num_actions, config.gamma, 0.0};
  for (std::size_t k = 0; k < config.seeds; ++k) {
    const std::uint64_t seed = derive_seed(config.base_seed, k);
    Rng rng(seed);
    ModelClass cls;
    const Mdp first = random_mdp(opts, rng);
    for (std::size_t m = 0; m < config.num_models; ++m) {
      Mdp model = m == 0 ? first : random_mdp(opts, rng);
      model.initial_dist = first.initial_dist;
      cls.models.push_back(std::move(model));
      cls.labels.push_back("model" + std::to_string(m));
    }
    ++report.seeds_tried;
    const VersionSpace vs(cls, std::vector<double>(cls.size(), 0.0),
                          std::numeric_limits<double>::infinity());
    if (auto w = find_separation(vs, policies, config.gap_tolerance)) {
      w->seed = seed;
      report.witness = std::move(w);
      break;
    }
  }
  return report;
}

nlohmann::json separation_report_json(const SeparationReport& report) {
  nlohmann::json doc{{"seeds_tried", report.seeds_tried}, {"found", report.witness.has_value()}};
  if (report.witness) {
    const SeparationWitness& w = *report.witness;
    doc["witness"] = {{"seed", w.seed},
                      {"absolute_policy", w.absolute_policy},
                      {"regret_policy", w.regret_policy},
                      {"absolute_gap", w.absolute_gap},
                      {"regret_gap", w.regret_gap},
                      {"models", model_class_to_json(w.models)}};
  }
  return doc;
}

std::vector<double> TrendResult::median_by_n(const std::vector<std::size_t>& n_grid) const {
  std::vector<double> medians;
  for (std::size_t n : n_grid) {
    std::vector<double> values;
    for (const TrendRow& r : rows)
      if (r.n == n) values.push_back(r.suboptimality);
    medians.push_back(median(values));
  }
  return medians;
}

double TrendResult::fitted_constant() const {
  double c = 0.0;
  for (const TrendRow& r : rows) {
    if (r.suboptimality <= 0.0) continue;
    if (r.unit_bound <= 0.0) return std::numeric_limits<double>::infinity();
    c = std::max(c, r.suboptimality / r.unit_bound);
  }
  return c;
}

TrendResult absolute_performance_trend(const TrendConfig& config) {
  const Instance inst = make_instance(config.instance);
  check_exact_capacity(inst.truth);
  const ModelClass& cls = inst.model_class;
  const double vmax = default_vmax(inst.truth.discount);
  const Policy extras[] = {inst.behavior};
  const PolicySet policies =
      enumerate_policies(inst.truth.num_states, inst.truth.num_actions, extras);
  const OccupancyMeasure data_dist = occupancy(inst.truth, inst.behavior);

  TrendResult result;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < policies.size(); ++p) {
    const ConcentrabilityResult c = concentrability(cls, inst.truth, policies[p], data_dist, vmax);
    if (!std::isfinite(c.value)) continue;
    const double j = expected_return(inst.truth, policies[p]);
    if (j > best) {
      best = j;
      result.comparator_index = p;
      result.c_comparator = c.value;
    }
  }
  result.c_reference = concentrability(cls, inst.truth, inst.behavior, data_dist, vmax).value;
  result.alpha = calibrate_alpha(cls, inst.truth, inst.behavior, config.calibration_n,
                                 config.delta, config.calibration_trials, config.seed);

  for (std::size_t gi = 0; gi < config.n_grid.size(); ++gi) {
    const std::size_t n = config.n_grid[gi];
    const double unit = performance_bound(result.c_comparator, result.c_reference, vmax,
                                          inst.truth.discount, n, cls.size(), config.delta, 1.0);
    for (std::size_t k = 0; k < config.seeds; ++k) {
      const std::uint64_t seed = derive_seed(derive_seed(config.seed, 7'000'001 + gi), k);
      const Dataset data = sample_dataset(inst.truth, inst.behavior, n, seed,
                                          SamplingScheme::occupancy_iid);
      const VersionSpace vs(cls, class_losses(cls, data, vmax), result.alpha);
      const GameSolution sol = solve_relative_pessimism(vs, policies, inst.behavior);
      result.rows.push_back({n, seed, best - expected_return(inst.truth, policies[sol.policy_index]),
                             unit});
    }
  }
  return result;
}

}  // namespace armor
