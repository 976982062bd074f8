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

#include "commands.hpp"

#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "armor/experiments.hpp"
#include "armor/mdp_json.hpp"
#include "armor/properties.hpp"
#include "armor/report.hpp"

namespace armor::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string scalar_text(const json& value) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_null()) return {};
  return value.dump();
}

void flatten(const json& doc, const std::vector<std::string>& parents,
             std::vector<CLI::ConfigItem>& out) {
  for (const auto& [key, value] : doc.items()) {
    if (value.is_object()) {
      std::vector<std::string> nested = parents;
      nested.push_back(key);
      flatten(value, nested, out);
      continue;
    }
    CLI::ConfigItem item;
    item.parents = parents;
    item.name = key;
    if (value.is_array()) {
      for (const json& v : value) item.inputs.push_back(scalar_text(v));
    } else {
      item.inputs.push_back(scalar_text(value));
    }
    out.push_back(std::move(item));
  }
}

json app_to_json(const CLI::App* app, bool default_also) {
  json doc = json::object();
  for (const CLI::Option* opt : app->get_options()) {
    if (opt->get_lnames().empty() || !opt->get_configurable()) continue;
    const std::string& name = opt->get_lnames().front();
    if (name == "config" || name == "help") continue;
    if (opt->count() > 0) {
      const auto& r = opt->results();
      doc[name] = r.size() == 1 ? json(r.front()) : json(r);
    } else if (default_also && !opt->get_default_str().empty()) {
      doc[name] = opt->get_default_str();
    }
  }
  for (const CLI::App* sub : app->get_subcommands([](const CLI::App*) { return true; })) {
    json nested = app_to_json(sub, default_also);
    if (!nested.empty()) doc[sub->get_name()] = std::move(nested);
  }
  return doc;
}

// Accepts "inf" and friends, which the stock number parser does not.
double parse_real(const std::string& text) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ParameterError("not a number: '" + text + "'");
  }
  if (used != text.size()) throw ParameterError("not a number: '" + text + "'");
  return value;
}

std::vector<double> parse_reals(const std::vector<std::string>& texts) {
  std::vector<double> out;
  for (const std::string& t : texts) out.push_back(parse_real(t));
  return out;
}

struct Globals {
  fs::path out_dir = ".";
  std::uint64_t seed = 0;

  fs::path output(const std::string& name) const {
    fs::create_directories(out_dir);
    return out_dir / name;
  }
};

struct InstanceOptions {
  std::string kind = "toy-chain";
  int states = 4;
  int actions = 2;
  std::string gamma;  // empty: 0.95 for the chain, 0.9 for random instances
  double sparsity = 0.0;
  int chain_length = 5;
  std::uint64_t instance_seed = 0;
  std::size_t class_size = 10;
  double perturb_scale = 0.3;
  double row_fraction = 1.0;
  double reference_epsilon = 0.1;

  void attach(CLI::App* app) {
    app->add_option("--instance", kind, "toy-chain or random")
        ->check(CLI::IsMember({"toy-chain", "random"}))
        ->capture_default_str();
    app->add_option("--states", states, "states of a random instance")->capture_default_str();
    app->add_option("--actions", actions, "actions of a random instance")->capture_default_str();
    app->add_option("--gamma", gamma, "discount factor");
    app->add_option("--sparsity", sparsity, "zeroed share of random transition rows")
        ->capture_default_str();
    app->add_option("--chain-length", chain_length, "odd length of the toy chain")
        ->capture_default_str();
    app->add_option("--instance-seed", instance_seed, "seed of the random instance")
        ->capture_default_str();
    app->add_option("--class-size", class_size, "size of a perturbed model class")
        ->capture_default_str();
    app->add_option("--perturb-scale", perturb_scale, "perturbation strength of wrong models")
        ->capture_default_str();
    app->add_option("--row-fraction", row_fraction, "share of perturbed rows per wrong model")
        ->capture_default_str();
    app->add_option("--reference-epsilon", reference_epsilon,
                    "uniform noise mixed into the expert reference of random instances")
        ->capture_default_str();
  }

  InstanceConfig config() const {
    InstanceConfig c;
    c.kind = kind == "random" ? InstanceKind::random : InstanceKind::toy_chain;
    c.chain.length = chain_length;
    c.random.num_states = states;
    c.random.num_actions = actions;
    c.random.sparsity = sparsity;
    if (!gamma.empty()) {
      c.chain.gamma = parse_real(gamma);
      c.random.gamma = c.chain.gamma;
    }
    c.perturb.class_size = class_size;
    c.perturb.perturb_scale = perturb_scale;
    c.perturb.row_fraction = row_fraction;
    c.instance_seed = instance_seed;
    c.reference_epsilon = reference_epsilon;
    return c;
  }
};

// always-left, always-right, behavior, reference or file:<path>.
Policy resolve_policy(const std::string& spec, const Instance& inst) {
  const int S = inst.truth.num_states, A = inst.truth.num_actions;
  if (spec == "always-left") return Policy::constant_action(S, A, kLeft);
  if (spec == "always-right") return Policy::constant_action(S, A, kRight);
  if (spec == "behavior") return inst.behavior;
  if (spec == "reference") return inst.reference;
  if (spec.rfind("file:", 0) == 0) {
    Policy pi = load_policy(spec.substr(5));
    check_compatible(inst.truth, pi);
    return pi;
  }
  throw ParameterError("unknown policy '" + spec + "'");
}

struct ArmorOptions {
  ArmorConfig cfg;
  std::string warmstart = "none";
  std::string optimizer = "adam";

  void attach(CLI::App* app) {
    app->add_option("--beta", cfg.beta, "weight of the Bellman and model-fit terms")
        ->capture_default_str();
    app->add_option("--lambda", cfg.lambda, "weight of model fitting")->capture_default_str();
    app->add_option("--w", cfg.w, "target-critic share of the residual loss")
        ->capture_default_str();
    app->add_option("--tau", cfg.tau, "target averaging rate")->capture_default_str();
    app->add_option("--eta-fast", cfg.eta_fast, "adversary step size")->capture_default_str();
    app->add_option("--eta-slow", cfg.eta_slow, "actor step size")->capture_default_str();
    app->add_option("--horizon", cfg.horizon, "rollout reset period")->capture_default_str();
    app->add_option("--steps", cfg.steps, "training iterations")->capture_default_str();
    app->add_option("--batch-real", cfg.batch_real)->capture_default_str();
    app->add_option("--batch-model", cfg.batch_model)->capture_default_str();
    app->add_option("--buffer-cap", cfg.buffer_cap)->capture_default_str();
    app->add_option("--eval-period", cfg.eval_period, "steps between evaluations, 0 for none")
        ->capture_default_str();
    app->add_option("--warmstart", warmstart)
        ->check(CLI::IsMember({"none", "ref", "bc"}))
        ->capture_default_str();
    app->add_option("--warmstart-steps", cfg.warmstart_steps)->capture_default_str();
    app->add_option("--optimizer", optimizer)
        ->check(CLI::IsMember({"adam", "sgd"}))
        ->capture_default_str();
  }

  ArmorConfig config(const Mdp& truth, std::uint64_t seed) const {
    ArmorConfig c = cfg;
    c.gamma = truth.discount;
    c.vmax = default_vmax(truth.discount);
    c.seed = seed;
    c.warmstart = parse_warm_start(warmstart);
    c.optimizer = optimizer == "sgd" ? OptimizerKind::sgd : OptimizerKind::adam;
    c.validate();
    return c;
  }
};

json policy_json(const Policy& pi) { return policy_to_json(pi)["probs"]; }

// --- gen-data ---------------------------------------------------------------

void add_gen_data(CLI::App& app, const Globals& g, std::function<int()>& action) {
  auto* sub = app.add_subcommand("gen-data", "sample an offline dataset");
  auto inst = std::make_shared<InstanceOptions>();
  inst->attach(sub);
  struct Opts {
    std::string mdp, behavior = "behavior", scheme = "occupancy_iid";
    std::size_t n = 1000;
    double reward_noise = 0.0;
    int trajectory_horizon = 0;
  };
  auto o = std::make_shared<Opts>();
  sub->add_option("--mdp", o->mdp, "true model (JSON); defaults to the instance");
  sub->add_option("--behavior", o->behavior, "behavior, reference, always-left, always-right or file:<path>")
      ->capture_default_str();
  sub->add_option("-n,--n", o->n, "number of transitions")->capture_default_str();
  sub->add_option("--scheme", o->scheme)
      ->check(CLI::IsMember({"occupancy_iid", "trajectory"}))
      ->capture_default_str();
  sub->add_option("--reward-noise", o->reward_noise, "uniform noise half-width on rewards")
      ->capture_default_str();
  sub->add_option("--trajectory-horizon", o->trajectory_horizon)->capture_default_str();
  sub->callback([&g, &action, inst, o] {
    action = [&g, inst, o] {
      Instance instance = make_instance(inst->config());
      if (!o->mdp.empty()) instance.truth = load_mdp(o->mdp);
      const Policy behavior = resolve_policy(o->behavior, instance);
      SamplingOptions sampling;
      sampling.reward_noise = o->reward_noise;
      sampling.trajectory_horizon = o->trajectory_horizon;
      sampling.behavior_id = o->behavior;
      const Dataset data = sample_dataset(instance.truth, behavior, o->n, g.seed,
                                          parse_sampling_scheme(o->scheme), sampling);
      save_dataset(data, g.output("dataset.jsonl"));
      write_json_file(g.output("mdp.json"), mdp_to_json(instance.truth));
      write_json_file(g.output("behavior.json"), policy_to_json(behavior));
      write_json_file(g.output("reference.json"), policy_to_json(instance.reference));
      write_json_file(g.output("class.json"), model_class_to_json(instance.model_class));
      std::cout << "wrote " << data.transitions.size() << " transitions to "
                << (g.out_dir / "dataset.jsonl").string() << '\n';
      return kOk;
    };
  });
}

// --- solve-exact ------------------------------------------------------------

void add_solve_exact(CLI::App& app, const Globals& g, std::function<int()>& action) {
  auto* sub = app.add_subcommand("solve-exact", "solve the finite maximin game exactly");
  auto inst = std::make_shared<InstanceOptions>();
  inst->attach(sub);
  struct Opts {
    std::string mdp, cls, data, alpha = "1", ref = "reference", behavior = "behavior",
                                objective = "relative";
    std::size_t n = 1000;
  };
  auto o = std::make_shared<Opts>();
  sub->add_option("--mdp", o->mdp, "true model used to report returns");
  sub->add_option("--class", o->cls, "model class (JSON)");
  sub->add_option("--data", o->data, "dataset (JSON Lines); sampled when absent");
  sub->add_option("-n,--n", o->n, "sample size when no dataset is given")->capture_default_str();
  sub->add_option("--behavior", o->behavior, "policy used to sample a missing dataset")
      ->capture_default_str();
  sub->add_option("--alpha", o->alpha, "version-space threshold (inf allowed)")
      ->capture_default_str();
  sub->add_option("--ref", o->ref, "always-left, always-right, behavior, reference or file:<path>")
      ->capture_default_str();
  sub->add_option("--objective", o->objective)
      ->check(CLI::IsMember({"relative", "absolute", "regret", "optimistic"}))
      ->capture_default_str();
  sub->callback([&g, &action, inst, o] {
    action = [&g, inst, o] {
      Instance instance = make_instance(inst->config());
      if (!o->mdp.empty()) instance.truth = load_mdp(o->mdp);
      if (!o->cls.empty()) instance.model_class = model_class_from_json(read_json_file(o->cls));
      instance.model_class.validate();
      check_compatible(instance.truth, instance.model_class[0]);
      const Policy ref = resolve_policy(o->ref, instance);
      const Dataset data = o->data.empty()
                               ? sample_dataset(instance.truth, resolve_policy(o->behavior, instance),
                                                o->n, g.seed, SamplingScheme::occupancy_iid)
                               : load_dataset(o->data);
      const double vmax = default_vmax(instance.truth.discount);
      const double alpha = parse_real(o->alpha);
      const VersionSpace vs = build_version_space(instance.model_class, data, alpha, vmax);
      const Policy extras[] = {ref};
      const std::string extra_labels[] = {"ref"};
      const PolicySet policies = enumerate_policies(instance.truth.num_states,
                                                    instance.truth.num_actions, extras, extra_labels);
      GameSolution sol;
      if (o->objective == "relative") sol = solve_relative_pessimism(vs, policies, ref);
      else if (o->objective == "absolute")
        sol = solve_generalized_pessimism(vs, policies, absolute_offsets(vs));
      else if (o->objective == "regret")
        sol = solve_generalized_pessimism(vs, policies, regret_offsets(vs, policies));
      else sol = solve_optimistic(vs, policies);

      const ModelClass& cls = vs.model_class();
      json members = json::array();
      for (std::size_t m : vs.members()) members.push_back(cls.labels.at(m));
      const Policy& chosen = policies[sol.policy_index];
      const json doc{{"objective", o->objective},
                     {"alpha", o->alpha},
                     {"members", members},
                     {"policy_index", sol.policy_index},
                     {"policy_label", policies.labels[sol.policy_index]},
                     {"value", sol.value},
                     {"worst_model_index", sol.worst_model_index},
                     {"worst_model_label", cls.labels.at(sol.worst_model_index)},
                     {"reference_in_policies", sol.reference_in_policies},
                     {"J_true", expected_return(instance.truth, chosen)},
                     {"J_ref", expected_return(instance.truth, ref)},
                     {"policy", policy_json(chosen)}};
      write_json_file(g.output("solution.json"), doc);

      std::string csv = "index,label,value,worst_model,J_true\n";
      for (std::size_t p = 0; p < policies.size(); ++p)
        csv += std::to_string(p) + ',' + policies.labels[p] + ',' +
               format_double(sol.per_policy_values(static_cast<Eigen::Index>(p))) + ',' +
               cls.labels.at(sol.per_policy_worst_models[p]) + ',' +
               format_double(expected_return(instance.truth, policies[p])) + '\n';
      write_text_file(g.output("per_policy_values.csv"), csv);
      std::cout << "policy " << policies.labels[sol.policy_index] << " value "
                << format_double(sol.value) << " J_true "
                << format_double(expected_return(instance.truth, chosen)) << " J_ref "
                << format_double(expected_return(instance.truth, ref)) << '\n';
      return kOk;
    };
  });
}

// --- run-armor --------------------------------------------------------------

void add_run_armor(CLI::App& app, const Globals& g, std::function<int()>& action) {
  auto* sub = app.add_subcommand("run-armor", "train the adversarial actor-critic iteration");
  auto inst = std::make_shared<InstanceOptions>();
  inst->attach(sub);
  auto armor = std::make_shared<ArmorOptions>();
  armor->attach(sub);
  struct Opts {
    std::string data, ref = "reference", behavior = "behavior";
    std::size_t n = 1000;
  };
  auto o = std::make_shared<Opts>();
  sub->add_option("--data", o->data, "dataset (JSON Lines); sampled when absent");
  sub->add_option("-n,--n", o->n)->capture_default_str();
  sub->add_option("--behavior", o->behavior)->capture_default_str();
  sub->add_option("--ref", o->ref)->capture_default_str();
  sub->callback([&g, &action, inst, armor, o] {
    action = [&g, inst, armor, o] {
      const Instance instance = make_instance(inst->config());
      const Policy ref = resolve_policy(o->ref, instance);
      const Dataset data = o->data.empty()
                               ? sample_dataset(instance.truth, resolve_policy(o->behavior, instance),
                                                o->n, g.seed, SamplingScheme::occupancy_iid)
                               : load_dataset(o->data);
      const ArmorConfig cfg = armor->config(instance.truth, g.seed);
      const ArmorResult result = run_armor(instance.truth, data, ref, cfg);
      write_trace_csv(result, g.output("trace.csv"));
      const std::vector<int> states = buffer_states(result.final_state.model_buffer);
      const json doc{{"J_true", expected_return(instance.truth, result.final_policy)},
                     {"J_ref", expected_return(instance.truth, ref)},
                     {"start_agreement",
                      start_agreement(instance.truth, result.final_policy, ref)},
                     {"mean_tv_to_ref_on_buffer",
                      states.empty() ? 0.0 : mean_policy_tv(result.final_policy, ref, states)},
                     {"policy", policy_json(result.final_policy)}};
      write_json_file(g.output("armor_result.json"), doc);
      std::cout << "J_true " << format_double(doc["J_true"].get<double>()) << " J_ref "
                << format_double(doc["J_ref"].get<double>()) << '\n';
      return kOk;
    };
  });
}

// --- sweep ------------------------------------------------------------------

void add_sweep(CLI::App& app, const Globals& g, std::function<int()>& action) {
  auto* sub = app.add_subcommand("sweep", "return of the learned policy across alpha or beta");
  auto inst = std::make_shared<InstanceOptions>();
  inst->attach(sub);
  auto armor = std::make_shared<ArmorOptions>();
  armor->attach(sub);
  struct Opts {
    std::string mode = "exact-alpha", scheme = "occupancy_iid", baseline_alpha = "1";
    std::vector<std::string> grid;
    std::size_t num_seeds = 1;
    std::size_t n = 1000;
  };
  auto o = std::make_shared<Opts>();
  sub->add_option("--mode", o->mode)
      ->check(CLI::IsMember({"exact-alpha", "iterative-beta"}))
      ->capture_default_str();
  sub->add_option("--grid", o->grid, "alpha or beta values");
  sub->add_option("--num-seeds", o->num_seeds, "datasets per grid value")->capture_default_str();
  sub->add_option("-n,--n", o->n)->capture_default_str();
  sub->add_option("--scheme", o->scheme)
      ->check(CLI::IsMember({"occupancy_iid", "trajectory"}))
      ->capture_default_str();
  sub->add_option("--baseline-alpha", o->baseline_alpha)->capture_default_str();
  sub->callback([&g, &action, inst, armor, o] {
    action = [&g, inst, armor, o] {
      SweepConfig cfg;
      cfg.mode = parse_sweep_mode(o->mode);
      cfg.instance = inst->config();
      if (!o->grid.empty()) cfg.grid = parse_reals(o->grid);
      else if (cfg.mode == SweepMode::exact_alpha)
        cfg.grid = {0.0, 0.01, 0.1, 1.0, 10.0, 100.0, std::numeric_limits<double>::infinity()};
      else cfg.grid = {0.01, 0.1, 1.0, 10.0, 100.0};
      cfg.seeds.clear();
      for (std::size_t i = 0; i < o->num_seeds; ++i) cfg.seeds.push_back(g.seed + i);
      cfg.n = o->n;
      cfg.scheme = parse_sampling_scheme(o->scheme);
      cfg.baseline_alpha = parse_real(o->baseline_alpha);
      if (cfg.mode == SweepMode::iterative_beta) {
        const Instance instance = make_instance(cfg.instance);
        cfg.armor = armor->config(instance.truth, g.seed);
      }
      const SweepResult result = rpi_sweep(cfg);
      write_sweep_csv(result, g.output("sweep.csv"));
      write_text_file(g.output("sweep.svg"), sweep_svg(result));
      std::cout << result.rows.size() << " rows, " << result.violations(1e-8)
                << " below J_ref, min margin " << format_double(result.min_margin()) << '\n';
      return kOk;
    };
  });
}

// --- coverage ---------------------------------------------------------------

void add_coverage(CLI::App& app, const Globals& g, std::function<int()>& action) {
  auto* sub = app.add_subcommand("coverage", "version-space coverage and shrinkage");
  auto inst = std::make_shared<InstanceOptions>();
  inst->attach(sub);
  struct Opts {
    std::string alpha;
    double delta = 0.1;
    std::size_t trials = 500, calibration_n = 1000;
    std::vector<std::size_t> n_grid{100, 1000, 10000};
  };
  auto o = std::make_shared<Opts>();
  sub->add_option("--alpha", o->alpha, "fixed threshold; calibrated when absent");
  sub->add_option("--calibrate-delta", o->delta)->capture_default_str();
  sub->add_option("--trials", o->trials)->capture_default_str();
  sub->add_option("--calibration-n", o->calibration_n)->capture_default_str();
  sub->add_option("--n-grid", o->n_grid)->capture_default_str();
  sub->callback([&g, &action, inst, o] {
    action = [&g, inst, o] {
      CoverageConfig cfg;
      cfg.instance = inst->config();
      cfg.n_grid = o->n_grid;
      cfg.delta = o->delta;
      cfg.trials = o->trials;
      cfg.calibration_n = o->calibration_n;
      cfg.seed = g.seed;
      if (!o->alpha.empty()) cfg.alpha = parse_real(o->alpha);
      const std::vector<CoverageRow> rows = coverage_trial(cfg);
      write_coverage_csv(rows, g.output("coverage.csv"));
      for (const CoverageRow& r : rows)
        std::cout << "n " << r.n << " alpha " << format_double(r.alpha) << " truth "
                  << format_double(r.truth_frequency) << " wrong(median) "
                  << format_double(r.wrong_median_fraction) << '\n';
      return kOk;
    };
  });
}

// --- separation-search ------------------------------------------------------

void add_separation(CLI::App& app, const Globals& g, std::function<int()>& action) {
  auto* sub = app.add_subcommand("separation-search",
                                 "look for classes where absolute pessimism and regret disagree");
  auto o = std::make_shared<SeparationConfig>();
  sub->add_option("--states", o->num_states)->capture_default_str();
  sub->add_option("--actions", o->num_actions)->capture_default_str();
  sub->add_option("--models", o->num_models)->capture_default_str();
  sub->add_option("--gamma", o->gamma)->capture_default_str();
  sub->add_option("--num-seeds", o->seeds)->capture_default_str();
  sub->add_option("--tolerance", o->gap_tolerance)->capture_default_str();
  sub->callback([&g, &action, o] {
    action = [&g, o] {
      SeparationConfig cfg = *o;
      cfg.base_seed = g.seed;
      const SeparationReport report = objective_separation_search(cfg);
      write_json_file(g.output("separation.json"), separation_report_json(report));
      std::cout << (report.witness ? "witness found" : "no witness") << " after "
                << report.seeds_tried << " seeds\n";
      return kOk;
    };
  });
}

// --- check-properties -------------------------------------------------------

void add_check_properties(CLI::App& app, const Globals& g, std::function<int()>& action) {
  auto* sub = app.add_subcommand("check-properties", "run the invariant suite");
  auto o = std::make_shared<PropertyOptions>();
  sub->add_option("--instances", o->instances, "random instances per check")
      ->capture_default_str();
  sub->callback([&g, &action, o] {
    action = [&g, o] {
      PropertyOptions opts = *o;
      opts.seed = g.seed;
      const std::vector<PropertyCheck> checks = run_property_suite(opts);
      json doc = json::array();
      bool all = true;
      for (const PropertyCheck& c : checks) {
        std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
        doc.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
        all = all && c.passed;
      }
      write_json_file(g.output("properties.json"), doc);
      return all ? kOk : kPropertyFailure;
    };
  });
}

}  // namespace

std::string JsonConfig::to_config(const CLI::App* app, bool default_also, bool, std::string) const {
  return app_to_json(app, default_also).dump(2) + '\n';
}

std::vector<CLI::ConfigItem> JsonConfig::from_config(std::istream& input) const {
  json doc;
  try {
    doc = json::parse(input);
  } catch (const json::exception& e) {
    throw CLI::ParseError(std::string("config: ") + e.what(), CLI::ExitCodes::ConversionError);
  }
  if (!doc.is_object()) throw CLI::ParseError("config: expected a JSON object",
                                              CLI::ExitCodes::ConversionError);
  std::vector<CLI::ConfigItem> items;
  flatten(doc, {}, items);
  return items;
}

int run(int argc, char** argv) {
  CLI::App app{"Relative-pessimism offline RL on finite MDPs"};
  app.require_subcommand(1);
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "", "JSON file with option values");

  Globals g;
  std::string out_dir = ".";
  app.add_option("--out-dir", out_dir, "directory for output files")->capture_default_str();
  app.add_option("--seed", g.seed, "random seed")->capture_default_str();

  std::function<int()> action;
  add_gen_data(app, g, action);
  add_solve_exact(app, g, action);
  add_run_armor(app, g, action);
  add_sweep(app, g, action);
  add_coverage(app, g, action);
  add_separation(app, g, action);
  add_check_properties(app, g, action);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }
  g.out_dir = out_dir;
  try {
    return action ? action() : kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace armor::cli
