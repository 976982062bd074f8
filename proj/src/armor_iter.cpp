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

#include "armor/armor_iter.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace armor {

std::string_view to_string(WarmStart mode) {
  switch (mode) {
    case WarmStart::none: return "none";
    case WarmStart::ref: return "ref";
    case WarmStart::bc: return "bc";
  }
  return "none";
}

WarmStart parse_warm_start(std::string_view name) {
  if (name == "none") return WarmStart::none;
  if (name == "ref") return WarmStart::ref;
  if (name == "bc") return WarmStart::bc;
  throw ParameterError("unknown warm start '" + std::string(name) + "'");
}

void ArmorConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ParameterError(std::string("armor config: ") + what);
  };
  require(beta >= 0.0, "beta must be >= 0");
  require(lambda >= 0.0, "lambda must be >= 0");
  require(w >= 0.0 && w <= 1.0, "w must lie in [0, 1]");
  require(tau >= 0.0 && tau <= 1.0, "tau must lie in [0, 1]");
  require(eta_fast > 0.0 && eta_slow > 0.0, "learning rates must be positive");
  require(eta_slow <= eta_fast, "eta_slow must not exceed eta_fast");
  require(horizon >= 1, "horizon must be >= 1");
  require(batch_real >= 1, "batch_real must be >= 1");
  require(buffer_cap >= batch_model, "buffer_cap must be >= batch_model");
  require(vmax > 0.0, "vmax must be positive");
  require(gamma >= 0.0 && gamma < 1.0, "gamma must lie in [0, 1)");
}

ArmorConfig ArmorConfig::for_mdp(const Mdp& mdp) {
  ArmorConfig cfg;
  cfg.gamma = mdp.discount;
  cfg.vmax = default_vmax(mdp.discount);
  return cfg;
}

Eigen::MatrixXd softmax_rows(const Eigen::MatrixXd& logits) {
  Eigen::MatrixXd out(logits.rows(), logits.cols());
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    const double top = logits.row(r).maxCoeff();
    out.row(r) = (logits.row(r).array() - top).exp().matrix();
    out.row(r) /= out.row(r).sum();
  }
  return out;
}

Eigen::MatrixXd ModelParams::transition() const { return softmax_rows(logits); }

Mdp ModelParams::to_mdp(double gamma, const Eigen::VectorXd& initial_dist) const {
  return Mdp{num_states(), num_actions(), transition(), reward, gamma, initial_dist};
}

ModelParams ModelParams::uniform(int num_states, int num_actions, double reward_init) {
  return {Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(num_states) * num_actions, num_states),
          Eigen::MatrixXd::Constant(num_states, num_actions, reward_init)};
}

void ModelBuffer::push(StateAction sa) {
  if (capacity_ == 0) return;
  if (data_.size() < capacity_) {
    data_.push_back(sa);
    return;
  }
  data_[head_] = sa;
  head_ = (head_ + 1) % capacity_;
}

Policy ArmorState::policy() const { return Policy{softmax_rows(policy_logits)}; }

ArmorState init_armor_state(int num_states, int num_actions, const ArmorConfig& cfg) {
  cfg.validate();
  if (num_states <= 0 || num_actions <= 0)
    throw DimensionError("armor: state and action counts must be positive");
  if (num_states > kMaxIterativeStates)
    throw CapacityError("armor: at most " + std::to_string(kMaxIterativeStates) + " states");
  ArmorState state;
  state.rng = Rng(cfg.seed);
  state.model = ModelParams::uniform(num_states, num_actions, 0.5);
  state.policy_logits = Eigen::MatrixXd::Zero(num_states, num_actions);
  // Small random critics so the two heads start apart.
  auto random_critic = [&] {
    Eigen::MatrixXd f(num_states, num_actions);
    for (Eigen::Index i = 0; i < f.size(); ++i) f(i) = state.rng.uniform(0.0, 0.01 * cfg.vmax);
    return f;
  };
  state.f1 = random_critic();
  state.f2 = random_critic();
  state.fbar1 = state.f1;
  state.fbar2 = state.f2;
  state.model_buffer = ModelBuffer(cfg.buffer_cap);
  return state;
}

std::vector<StateAction> combined_batch(std::span<const Transition> real,
                                        std::span<const StateAction> model) {
  std::vector<StateAction> batch;
  batch.reserve(real.size() + model.size());
  for (const Transition& t : real) batch.push_back({t.s, t.a});
  batch.insert(batch.end(), model.begin(), model.end());
  return batch;
}

namespace {

void check_batch(std::span<const StateAction> batch, int num_states, int num_actions) {
  if (batch.empty()) throw ParameterError("armor: empty minibatch");
  for (const StateAction& sa : batch)
    if (sa.s < 0 || sa.s >= num_states || sa.a < 0 || sa.a >= num_actions)
      throw DataError("armor: minibatch entry out of range");
}

void check_real(std::span<const Transition> real, int num_states, int num_actions) {
  for (const Transition& t : real)
    if (t.s < 0 || t.s >= num_states || t.a < 0 || t.a >= num_actions || t.sp < 0 ||
        t.sp >= num_states)
      throw DataError("armor: real transition out of range");
}

Eigen::VectorXd state_values(const Eigen::MatrixXd& f, const Eigen::MatrixXd& probs) {
  return f.cwiseProduct(probs).rowwise().sum();
}

double log_softmax_at(const Eigen::MatrixXd& logits, Eigen::Index row, Eigen::Index col) {
  const double top = logits.row(row).maxCoeff();
  const double lse = top + std::log((logits.row(row).array() - top).exp().sum());
  return logits(row, col) - lse;
}

bool all_finite(const AdversaryGradient& g) {
  return g.critic.allFinite() && g.model_logits.allFinite() && g.model_reward.allFinite();
}

void optimizer_step(Eigen::MatrixXd& param, const Eigen::MatrixXd& grad, double lr,
                    OptimizerKind kind, AdamSlot& slot) {
  if (kind == OptimizerKind::sgd) {
    param -= lr * grad;
    return;
  }
  constexpr double kBeta1 = 0.9;
  constexpr double kBeta2 = 0.999;
  constexpr double kEps = 1e-8;
  if (slot.m.size() == 0) {
    slot.m = Eigen::MatrixXd::Zero(param.rows(), param.cols());
    slot.v = Eigen::MatrixXd::Zero(param.rows(), param.cols());
  }
  ++slot.t;
  slot.m = kBeta1 * slot.m + (1.0 - kBeta1) * grad;
  slot.v = kBeta2 * slot.v + (1.0 - kBeta2) * grad.cwiseAbs2();
  const double c1 = 1.0 - std::pow(kBeta1, static_cast<double>(slot.t));
  const double c2 = 1.0 - std::pow(kBeta2, static_cast<double>(slot.t));
  param.array() -= lr * (slot.m.array() / c1) / ((slot.v.array() / c2).sqrt() + kEps);
}

}  // namespace

double pessimistic_loss(const Eigen::MatrixXd& f, const Policy& pi, const Policy& pi_ref,
                        std::span<const StateAction> batch) {
  check_batch(batch, static_cast<int>(f.rows()), static_cast<int>(f.cols()));
  const Eigen::VectorXd gap = state_values(f, pi.probs) - state_values(f, pi_ref.probs);
  double total = 0.0;
  for (const StateAction& sa : batch) total += gap(sa.s);
  return total / static_cast<double>(batch.size());
}

double bellman_surrogate(const Eigen::MatrixXd& f, const Eigen::MatrixXd& fbar,
                         const ModelParams& model, const Policy& pi,
                         std::span<const StateAction> batch, double w, double gamma) {
  check_batch(batch, model.num_states(), model.num_actions());
  const Eigen::MatrixXd p = model.transition();
  const Eigen::VectorXd v_self = state_values(f, pi.probs);
  const Eigen::VectorXd v_target = state_values(fbar, pi.probs);
  const int A = model.num_actions();
  double total = 0.0;
  for (const StateAction& sa : batch) {
    const Eigen::Index row = static_cast<Eigen::Index>(sa.s) * A + sa.a;
    const double base = f(sa.s, sa.a) - model.reward(sa.s, sa.a);
    for (Eigen::Index sp = 0; sp < p.cols(); ++sp) {
      const double d_self = base - gamma * v_self(sp);
      const double d_target = base - gamma * v_target(sp);
      total += p(row, sp) * ((1.0 - w) * d_self * d_self + w * d_target * d_target);
    }
  }
  return total / static_cast<double>(batch.size());
}

double model_fit_loss(const ModelParams& model, std::span<const Transition> real, double vmax) {
  if (real.empty()) return 0.0;
  check_real(real, model.num_states(), model.num_actions());
  const int A = model.num_actions();
  double total = 0.0;
  for (const Transition& t : real) {
    const Eigen::Index row = static_cast<Eigen::Index>(t.s) * A + t.a;
    const double dr = model.reward(t.s, t.a) - t.r;
    total += -log_softmax_at(model.logits, row, t.sp) + dr * dr / (vmax * vmax);
  }
  return total / static_cast<double>(real.size());
}

double adversary_loss(const Eigen::MatrixXd& f, const Eigen::MatrixXd& fbar,
                      const ModelParams& model, const Policy& pi, const Policy& pi_ref,
                      std::span<const Transition> real, std::span<const StateAction> batch,
                      const ArmorConfig& cfg) {
  return pessimistic_loss(f, pi, pi_ref, batch) +
         cfg.beta * (bellman_surrogate(f, fbar, model, pi, batch, cfg.w, cfg.gamma) +
                     cfg.lambda * model_fit_loss(model, real, cfg.vmax));
}

AdversaryGradient adversary_gradient(const Eigen::MatrixXd& f, const Eigen::MatrixXd& fbar,
                                     const ModelParams& model, const Policy& pi,
                                     const Policy& pi_ref, std::span<const Transition> real,
                                     std::span<const StateAction> batch, const ArmorConfig& cfg) {
  const int S = model.num_states();
  const int A = model.num_actions();
  check_batch(batch, S, A);
  check_real(real, S, A);
  if (f.rows() != S || f.cols() != A || fbar.rows() != S || fbar.cols() != A)
    throw DimensionError("armor: critic shape does not match the model");

  AdversaryGradient g{Eigen::MatrixXd::Zero(S, A), Eigen::MatrixXd::Zero(model.logits.rows(), S),
                      Eigen::MatrixXd::Zero(S, A)};
  const double inv_n = 1.0 / static_cast<double>(batch.size());

  // Pessimistic term: d/df(s, a) of mean_i [f(s_i, pi) - f(s_i, pi_ref)].
  for (const StateAction& sa : batch)
    g.critic.row(sa.s) += inv_n * (pi.probs.row(sa.s) - pi_ref.probs.row(sa.s));

  // Bellman surrogate; d_prob accumulates the derivative with respect to the
  // transition probabilities before the softmax chain rule.
  const Eigen::MatrixXd p = model.transition();
  const Eigen::VectorXd v_self = state_values(f, pi.probs);
  const Eigen::VectorXd v_target = state_values(fbar, pi.probs);
  const double c_self = cfg.beta * (1.0 - cfg.w) * inv_n;
  const double c_target = cfg.beta * cfg.w * inv_n;
  Eigen::MatrixXd d_prob = Eigen::MatrixXd::Zero(p.rows(), p.cols());
  Eigen::VectorXd d_next_value = Eigen::VectorXd::Zero(S);
  for (const StateAction& sa : batch) {
    const Eigen::Index row = static_cast<Eigen::Index>(sa.s) * A + sa.a;
    const double base = f(sa.s, sa.a) - model.reward(sa.s, sa.a);
    double d_base = 0.0;
    for (Eigen::Index sp = 0; sp < S; ++sp) {
      const double prob = p(row, sp);
      const double d_self = base - cfg.gamma * v_self(sp);
      const double d_target = base - cfg.gamma * v_target(sp);
      d_base += 2.0 * prob * (c_self * d_self + c_target * d_target);
      d_next_value(sp) -= 2.0 * prob * c_self * d_self * cfg.gamma;
      d_prob(row, sp) += c_self * d_self * d_self + c_target * d_target * d_target;
    }
    g.critic(sa.s, sa.a) += d_base;
    g.model_reward(sa.s, sa.a) -= d_base;
  }
  // Only the non-target term bootstraps through f itself.
  for (int s = 0; s < S; ++s) g.critic.row(s) += d_next_value(s) * pi.probs.row(s);

  for (Eigen::Index row = 0; row < p.rows(); ++row) {
    const double mean = p.row(row).dot(d_prob.row(row));
    g.model_logits.row(row) = p.row(row).array() * (d_prob.row(row).array() - mean);
  }

  // Model fit on the real minibatch, averaged.
  if (!real.empty()) {
    const double c_fit = cfg.beta * cfg.lambda / static_cast<double>(real.size());
    for (const Transition& t : real) {
      const Eigen::Index row = static_cast<Eigen::Index>(t.s) * A + t.a;
      g.model_logits.row(row) += c_fit * p.row(row);
      g.model_logits(row, t.sp) -= c_fit;
      g.model_reward(t.s, t.a) +=
          c_fit * 2.0 * (model.reward(t.s, t.a) - t.r) / (cfg.vmax * cfg.vmax);
    }
  }
  return g;
}

double actor_objective(const Eigen::MatrixXd& f1, const Eigen::MatrixXd& policy_logits,
                       const Policy& pi_ref, std::span<const StateAction> batch) {
  return pessimistic_loss(f1, Policy{softmax_rows(policy_logits)}, pi_ref, batch);
}

Eigen::MatrixXd actor_gradient(const Eigen::MatrixXd& f1, const Eigen::MatrixXd& policy_logits,
                               std::span<const StateAction> batch) {
  check_batch(batch, static_cast<int>(f1.rows()), static_cast<int>(f1.cols()));
  const Eigen::MatrixXd probs = softmax_rows(policy_logits);
  const Eigen::VectorXd v = state_values(f1, probs);
  Eigen::VectorXd weight = Eigen::VectorXd::Zero(f1.rows());
  for (const StateAction& sa : batch) weight(sa.s) += 1.0;
  weight /= static_cast<double>(batch.size());
  Eigen::MatrixXd grad(f1.rows(), f1.cols());
  for (Eigen::Index s = 0; s < f1.rows(); ++s)
    grad.row(s) = weight(s) * probs.row(s).array() * (f1.row(s).array() - v(s));
  return grad;
}

void adversary_update(ArmorState& state, const Policy& pi_ref, std::span<const Transition> real,
                      std::span<const StateAction> model_batch, const ArmorConfig& cfg) {
  const std::vector<StateAction> batch = combined_batch(real, model_batch);
  const Policy pi = state.policy();
  const AdversaryGradient g1 =
      adversary_gradient(state.f1, state.fbar1, state.model, pi, pi_ref, real, batch, cfg);
  const AdversaryGradient g2 =
      adversary_gradient(state.f2, state.fbar2, state.model, pi, pi_ref, real, batch, cfg);
  if (!all_finite(g1) || !all_finite(g2))
    throw NumericalError("non-finite adversary gradient", state.step);

  optimizer_step(state.model.logits, g1.model_logits + g2.model_logits, cfg.eta_fast,
                 cfg.optimizer, state.opt_logits);
  optimizer_step(state.model.reward, g1.model_reward + g2.model_reward, cfg.eta_fast,
                 cfg.optimizer, state.opt_reward);
  state.model.reward = state.model.reward.cwiseMax(0.0).cwiseMin(1.0);

  optimizer_step(state.f1, g1.critic, cfg.eta_fast, cfg.optimizer, state.opt_f1);
  optimizer_step(state.f2, g2.critic, cfg.eta_fast, cfg.optimizer, state.opt_f2);
  state.f1 = state.f1.cwiseMax(0.0).cwiseMin(cfg.vmax);
  state.f2 = state.f2.cwiseMax(0.0).cwiseMin(cfg.vmax);

  state.fbar1 = (1.0 - cfg.tau) * state.fbar1 + cfg.tau * state.f1;
  state.fbar2 = (1.0 - cfg.tau) * state.fbar2 + cfg.tau * state.f2;
}

void actor_update(ArmorState& state, std::span<const StateAction> batch, const ArmorConfig& cfg) {
  const Eigen::MatrixXd grad = actor_gradient(state.f1, state.policy_logits, batch);
  if (!grad.allFinite()) throw NumericalError("non-finite actor gradient", state.step);
  // Ascent on the pessimistic loss is descent on its negation.
  optimizer_step(state.policy_logits, -grad, cfg.eta_slow, cfg.optimizer, state.opt_policy);
}

void rollout_expand(ArmorState& state, const Policy& pi_ref, std::span<const Transition> real,
                    const ArmorConfig& cfg) {
  if (state.step % static_cast<std::size_t>(cfg.horizon) == 0) {
    state.rollout_pi.clear();
    for (const Transition& t : real) state.rollout_pi.push_back(t.s);
    state.rollout_ref = state.rollout_pi;
  }
  // The successor draw only reads the current model; nothing downstream
  // differentiates through it.
  const Eigen::MatrixXd p = state.model.transition();
  const int A = state.model.num_actions();
  auto advance = [&](std::vector<int>& states, const Eigen::MatrixXd& probs) {
    for (int& s : states) {
      const int a = static_cast<int>(state.rng.categorical(probs.row(s)));
      state.model_buffer.push({s, a});
      s = static_cast<int>(state.rng.categorical(p.row(static_cast<Eigen::Index>(s) * A + a)));
    }
  };
  advance(state.rollout_pi, state.policy().probs);
  advance(state.rollout_ref, pi_ref.probs);
}

namespace {

std::vector<Transition> sample_real(Rng& rng, const Dataset& data, std::size_t count) {
  std::vector<Transition> batch;
  batch.reserve(count);
  for (std::size_t i = 0; i < count; ++i) batch.push_back(data.transitions[rng.index(data.size())]);
  return batch;
}

std::vector<StateAction> sample_buffer(Rng& rng, const ModelBuffer& buffer, std::size_t count) {
  std::vector<StateAction> batch;
  if (buffer.empty()) return batch;
  batch.reserve(count);
  for (std::size_t i = 0; i < count; ++i) batch.push_back(buffer[rng.index(buffer.size())]);
  return batch;
}

}  // namespace

void warm_start(ArmorState& state, const Dataset& data, const Policy& pi_ref,
                const ArmorConfig& cfg) {
  if (cfg.warmstart == WarmStart::none) return;
  if (data.empty()) throw ParameterError("warm start needs a nonempty dataset");
  if (cfg.warmstart == WarmStart::ref)
    state.policy_logits = pi_ref.probs.cwiseMax(1e-3).array().log().matrix();

  const int S = state.model.num_states();
  const int A = state.model.num_actions();
  AdamSlot logits_slot, reward_slot, f1_slot, f2_slot, policy_slot;
  for (std::size_t k = 0; k < cfg.warmstart_steps; ++k) {
    const std::vector<Transition> real = sample_real(state.rng, data, cfg.batch_real);
    const double inv_n = 1.0 / static_cast<double>(real.size());
    const Eigen::MatrixXd p = state.model.transition();
    const Eigen::MatrixXd probs = softmax_rows(state.policy_logits);

    // Maximum likelihood model fit.
    Eigen::MatrixXd d_logits = Eigen::MatrixXd::Zero(p.rows(), p.cols());
    Eigen::MatrixXd d_reward = Eigen::MatrixXd::Zero(S, A);
    for (const Transition& t : real) {
      const Eigen::Index row = static_cast<Eigen::Index>(t.s) * A + t.a;
      d_logits.row(row) += inv_n * p.row(row);
      d_logits(row, t.sp) -= inv_n;
      d_reward(t.s, t.a) += inv_n * 2.0 * (state.model.reward(t.s, t.a) - t.r) / (cfg.vmax * cfg.vmax);
    }
    optimizer_step(state.model.logits, d_logits, cfg.eta_fast, cfg.optimizer, logits_slot);
    optimizer_step(state.model.reward, d_reward, cfg.eta_fast, cfg.optimizer, reward_slot);
    state.model.reward = state.model.reward.cwiseMax(0.0).cwiseMin(1.0);

    // Semi-gradient TD on the real transitions against the target critics.
    auto td_step = [&](Eigen::MatrixXd& f, Eigen::MatrixXd& fbar, AdamSlot& slot) {
      const Eigen::VectorXd v_target = state_values(fbar, probs);
      Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(S, A);
      for (const Transition& t : real)
        grad(t.s, t.a) += inv_n * 2.0 * (f(t.s, t.a) - t.r - cfg.gamma * v_target(t.sp));
      optimizer_step(f, grad, cfg.eta_fast, cfg.optimizer, slot);
      f = f.cwiseMax(0.0).cwiseMin(cfg.vmax);
      fbar = (1.0 - cfg.tau) * fbar + cfg.tau * f;
    };
    td_step(state.f1, state.fbar1, f1_slot);
    td_step(state.f2, state.fbar2, f2_slot);

    if (cfg.warmstart == WarmStart::bc) {
      Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(S, A);
      for (const Transition& t : real) {
        grad.row(t.s) += inv_n * probs.row(t.s);
        grad(t.s, t.a) -= inv_n;
      }
      optimizer_step(state.policy_logits, grad, cfg.eta_fast, cfg.optimizer, policy_slot);
    }
  }
}

ArmorResult run_armor(const Mdp& truth, const Dataset& data, const Policy& pi_ref,
                      const ArmorConfig& cfg) {
  cfg.validate();
  truth.validate();
  pi_ref.validate();
  check_compatible(truth, pi_ref);
  if (data.empty()) throw ParameterError("run_armor: dataset is empty");
  check_real(data.transitions, truth.num_states, truth.num_actions);

  ArmorResult result;
  ArmorState state = init_armor_state(truth.num_states, truth.num_actions, cfg);
  warm_start(state, data, pi_ref, cfg);

  result.loss_trace.reserve(cfg.steps);
  for (std::size_t k = 0; k < cfg.steps; ++k) {
    state.step = k;
    const std::vector<Transition> real = sample_real(state.rng, data, cfg.batch_real);
    const std::vector<StateAction> model_batch =
        sample_buffer(state.rng, state.model_buffer, cfg.batch_model);
    const std::vector<StateAction> batch = combined_batch(real, model_batch);

    const Policy pi = state.policy();
    result.loss_trace.push_back(
        {k, pessimistic_loss(state.f1, pi, pi_ref, batch),
         bellman_surrogate(state.f1, state.fbar1, state.model, pi, batch, cfg.w, cfg.gamma),
         model_fit_loss(state.model, real, cfg.vmax)});

    adversary_update(state, pi_ref, real, model_batch, cfg);
    actor_update(state, batch, cfg);
    rollout_expand(state, pi_ref, real, cfg);

    if (cfg.eval_period > 0 && (k + 1) % cfg.eval_period == 0)
      result.eval_trace.push_back({k + 1, expected_return(truth, state.policy())});
  }
  state.step = cfg.steps;
  result.final_policy = state.policy();
  result.final_state = std::move(state);
  return result;
}

double mean_policy_tv(const Policy& pi, const Policy& other, std::span<const int> states) {
  if (states.empty()) return 0.0;
  double total = 0.0;
  for (int s : states) total += 0.5 * (pi.probs.row(s) - other.probs.row(s)).cwiseAbs().sum();
  return total / static_cast<double>(states.size());
}

std::vector<int> buffer_states(const ModelBuffer& buffer) {
  std::vector<int> states;
  states.reserve(buffer.size());
  for (std::size_t i = 0; i < buffer.size(); ++i) states.push_back(buffer[i].s);
  return states;
}

void write_trace_csv(const ArmorResult& result, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << "step,pess_loss,bellman_loss,model_loss,J_true\n";
  out << std::setprecision(17);
  std::size_t e = 0;
  for (const LossRecord& rec : result.loss_trace) {
    out << rec.step << ',' << rec.pessimistic << ',' << rec.bellman << ',' << rec.model_fit << ',';
    // Evaluations are stamped with the number of completed steps.
    while (e < result.eval_trace.size() && result.eval_trace[e].step < rec.step + 1) ++e;
    if (e < result.eval_trace.size() && result.eval_trace[e].step == rec.step + 1)
      out << result.eval_trace[e].true_return;
    out << '\n';
  }
}

}  // namespace armor
