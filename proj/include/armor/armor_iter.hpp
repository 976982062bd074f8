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

// Small-scale adversarial model-based actor-critic over tabular softmax
// parameterisations. The model, two critics and the policy are tables; every
// loss below has an exact analytic gradient.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "armor/dataset.hpp"
#include "armor/mdp.hpp"
#include "armor/random.hpp"

namespace armor {

enum class WarmStart { none, ref, bc };
enum class OptimizerKind { adam, sgd };

std::string_view to_string(WarmStart mode);
WarmStart parse_warm_start(std::string_view name);

inline constexpr int kMaxIterativeStates = 16;

struct ArmorConfig {
  double beta = 1.0;     // weight on the Bellman and model-fit terms
  double lambda = 1.0;   // weight of model fitting inside the beta term
  double w = 0.5;        // target-critic share of the double residual loss
  double tau = 5e-3;     // target averaging rate
  double eta_fast = 5e-4;
  double eta_slow = 5e-7;
  int horizon = 10;      // rollout reset period H
  std::size_t steps = 1000;
  std::size_t batch_real = 32;
  std::size_t batch_model = 32;
  std::size_t buffer_cap = 100000;
  double vmax = 20.0;
  double gamma = 0.95;
  std::uint64_t seed = 0;
  WarmStart warmstart = WarmStart::none;
  std::size_t warmstart_steps = 1000;
  std::size_t eval_period = 100;  // 0 disables the evaluation trace
  OptimizerKind optimizer = OptimizerKind::adam;

  void validate() const;

  /// Defaults with gamma and vmax = 1 / (1 - gamma) taken from `mdp`.
  static ArmorConfig for_mdp(const Mdp& mdp);
};

struct StateAction {
  int s = 0;
  int a = 0;
  bool operator==(const StateAction&) const = default;
};

/// Softmax-parameterised transitions plus a reward table kept in [0, 1].
struct ModelParams {
  Eigen::MatrixXd logits;  // (S*A) x S
  Eigen::MatrixXd reward;  // S x A

  int num_states() const { return static_cast<int>(reward.rows()); }
  int num_actions() const { return static_cast<int>(reward.cols()); }

  Eigen::MatrixXd transition() const;
  Mdp to_mdp(double gamma, const Eigen::VectorXd& initial_dist) const;

  static ModelParams uniform(int num_states, int num_actions, double reward_init);
};

/// Fixed-capacity FIFO of state-action pairs; the oldest entry is evicted
/// once the buffer is full.
class ModelBuffer {
 public:
  explicit ModelBuffer(std::size_t capacity = 0) : capacity_(capacity) {}

  void push(StateAction sa);
  std::size_t size() const { return data_.size(); }
  std::size_t capacity() const { return capacity_; }
  bool empty() const { return data_.empty(); }
  // i = 0 is the oldest entry.
  const StateAction& operator[](std::size_t i) const { return data_[(head_ + i) % data_.size()]; }

 private:
  std::size_t capacity_;
  std::size_t head_ = 0;
  std::vector<StateAction> data_;
};

struct AdamSlot {
  Eigen::MatrixXd m;
  Eigen::MatrixXd v;
  std::size_t t = 0;
};

struct ArmorState {
  ModelParams model;
  Eigen::MatrixXd policy_logits;  // S x A
  Eigen::MatrixXd f1, f2;
  Eigen::MatrixXd fbar1, fbar2;
  ModelBuffer model_buffer;
  std::vector<int> rollout_pi;
  std::vector<int> rollout_ref;
  std::size_t step = 0;
  Rng rng{0};

  AdamSlot opt_logits, opt_reward, opt_f1, opt_f2, opt_policy;

  Policy policy() const;
};

ArmorState init_armor_state(int num_states, int num_actions, const ArmorConfig& cfg);

/// Row-wise softmax.
Eigen::MatrixXd softmax_rows(const Eigen::MatrixXd& logits);

/// The (s, a) pairs of the real minibatch followed by the model minibatch.
std::vector<StateAction> combined_batch(std::span<const Transition> real,
                                        std::span<const StateAction> model);

/// Mean over batch states of f(s, pi) - f(s, pi_ref), f(s, pi) = sum_a pi(a|s) f(s, a).
double pessimistic_loss(const Eigen::MatrixXd& f, const Policy& pi, const Policy& pi_ref,
                        std::span<const StateAction> batch);

/// (1 - w) E_td(f, f) + w E_td(f, fbar), where
/// E_td(f, g) = mean_batch sum_s' P_M(s'|s,a) (f(s,a) - R_M(s,a) - gamma g(s', pi))^2.
double bellman_surrogate(const Eigen::MatrixXd& f, const Eigen::MatrixXd& fbar,
                         const ModelParams& model, const Policy& pi,
                         std::span<const StateAction> batch, double w, double gamma);

/// Mean over the real minibatch of -log P_M(s'|s,a) + (R_M(s,a) - r)^2 / vmax^2.
double model_fit_loss(const ModelParams& model, std::span<const Transition> real, double vmax);

/// l_adv(f, M) = pessimistic + beta (bellman + lambda fit).
double adversary_loss(const Eigen::MatrixXd& f, const Eigen::MatrixXd& fbar,
                      const ModelParams& model, const Policy& pi, const Policy& pi_ref,
                      std::span<const Transition> real, std::span<const StateAction> batch,
                      const ArmorConfig& cfg);

struct AdversaryGradient {
  Eigen::MatrixXd critic;        // d l_adv / d f
  Eigen::MatrixXd model_logits;  // d l_adv / d logits
  Eigen::MatrixXd model_reward;  // d l_adv / d reward
};

AdversaryGradient adversary_gradient(const Eigen::MatrixXd& f, const Eigen::MatrixXd& fbar,
                                     const ModelParams& model, const Policy& pi,
                                     const Policy& pi_ref, std::span<const Transition> real,
                                     std::span<const StateAction> batch, const ArmorConfig& cfg);

/// pessimistic_loss(f1, softmax(policy_logits), pi_ref, batch): the quantity
/// the actor ascends.
double actor_objective(const Eigen::MatrixXd& f1, const Eigen::MatrixXd& policy_logits,
                       const Policy& pi_ref, std::span<const StateAction> batch);

/// Gradient of actor_objective with respect to the policy logits (f1 held fixed).
Eigen::MatrixXd actor_gradient(const Eigen::MatrixXd& f1, const Eigen::MatrixXd& policy_logits,
                               std::span<const StateAction> batch);

/// One descent step on the model (sum of both critics' losses) and on each
/// critic, projection of the critics into [0, vmax], reward clipping to
/// [0, 1] and Polyak averaging of the targets.
void adversary_update(ArmorState& state, const Policy& pi_ref, std::span<const Transition> real,
                      std::span<const StateAction> model_batch, const ArmorConfig& cfg);

/// One ascent step of the policy logits on the first critic's pessimistic loss.
void actor_update(ArmorState& state, std::span<const StateAction> batch, const ArmorConfig& cfg);

/// Resets both rollout state sets to the real minibatch states when
/// step % horizon == 0, then samples actions from pi and pi_ref, appends the
/// pairs to the model buffer and advances each set by one model transition.
void rollout_expand(ArmorState& state, const Policy& pi_ref, std::span<const Transition> real,
                    const ArmorConfig& cfg);

struct LossRecord {
  std::size_t step = 0;
  double pessimistic = 0.0;
  double bellman = 0.0;
  double model_fit = 0.0;
};

struct EvalRecord {
  std::size_t step = 0;
  double true_return = 0.0;
};

struct ArmorResult {
  Policy final_policy;
  std::vector<LossRecord> loss_trace;
  std::vector<EvalRecord> eval_trace;
  ArmorState final_state;
};

/// Policy initialisation before the main loop (cfg.warmstart):
///   ref  - logits set to log(max(pi_ref, 1e-3));
///   bc   - cross-entropy descent towards the dataset actions;
/// both also fit the model by maximum likelihood and the critics by TD on the
/// real data for cfg.warmstart_steps steps. none leaves the state untouched.
void warm_start(ArmorState& state, const Dataset& data, const Policy& pi_ref,
                const ArmorConfig& cfg);

/// The full training loop. `truth` is only used for the evaluation trace.
ArmorResult run_armor(const Mdp& truth, const Dataset& data, const Policy& pi_ref,
                      const ArmorConfig& cfg);

/// Mean over `states` of TV(pi(.|s), other(.|s)).
double mean_policy_tv(const Policy& pi, const Policy& other, std::span<const int> states);
std::vector<int> buffer_states(const ModelBuffer& buffer);

/// CSV with columns step,pess_loss,bellman_loss,model_loss,J_true; J_true is
/// empty on steps without an evaluation.
void write_trace_csv(const ArmorResult& result, const std::filesystem::path& path);

}  // namespace armor
