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

#include <cmath>

#include "armor/armor_iter.hpp"
#include "armor/error.hpp"
#include "armor/game.hpp"
#include "armor/instances.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace armor;

namespace {

struct Config {
  ModelParams model;
  Eigen::MatrixXd f, fbar, policy_logits;
  Policy pi, ref;
  std::vector<Transition> real;
  std::vector<StateAction> model_batch;
  ArmorConfig cfg;
};

Eigen::MatrixXd random_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols, double lo, double hi) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = rng.uniform(lo, hi);
  return m;
}

Config random_config(std::uint64_t seed) {
  Rng rng(seed);
  Config c;
  const int S = 2 + static_cast<int>(rng.index(4));
  const int A = 2 + static_cast<int>(rng.index(2));
  c.cfg.gamma = rng.uniform(0.5, 0.97);
  c.cfg.vmax = default_vmax(c.cfg.gamma);
  c.cfg.beta = rng.uniform(0.1, 10.0);
  c.cfg.lambda = rng.uniform(0.0, 2.0);
  c.cfg.w = rng.uniform(0.0, 1.0);
  c.model.logits = random_matrix(rng, S * A, S, -2.0, 2.0);
  c.model.reward = random_matrix(rng, S, A, 0.0, 1.0);
  c.f = random_matrix(rng, S, A, 0.0, c.cfg.vmax);
  c.fbar = random_matrix(rng, S, A, 0.0, c.cfg.vmax);
  c.policy_logits = random_matrix(rng, S, A, -2.0, 2.0);
  c.pi = Policy{softmax_rows(c.policy_logits)};
  c.ref = random_policy(S, A, rng);
  for (int i = 0; i < 8; ++i)
    c.real.push_back({static_cast<int>(rng.index(S)), static_cast<int>(rng.index(A)),
                      rng.uniform(0.0, 1.0), static_cast<int>(rng.index(S))});
  for (int i = 0; i < 8; ++i)
    c.model_batch.push_back({static_cast<int>(rng.index(S)), static_cast<int>(rng.index(A))});
  return c;
}

std::vector<StateAction> batch_of(const Config& c) { return combined_batch(c.real, c.model_batch); }

}  // namespace

TEST_CASE("pessimistic loss") {
  const Config c = random_config(1);
  const auto batch = batch_of(c);
  CHECK(pessimistic_loss(c.f, c.ref, c.ref, batch) == 0.0);
  const Eigen::MatrixXd flat = Eigen::MatrixXd::Constant(c.f.rows(), c.f.cols(), 3.5);
  CHECK(std::abs(pessimistic_loss(flat, c.pi, c.ref, batch)) <= 1e-14);

  Eigen::MatrixXd f(2, 2);
  f << 1.0, 3.0, 2.0, 0.5;
  const Policy pi{(Eigen::MatrixXd(2, 2) << 0.25, 0.75, 1.0, 0.0).finished()};
  const Policy ref{(Eigen::MatrixXd(2, 2) << 0.5, 0.5, 0.0, 1.0).finished()};
  const std::vector<StateAction> b{{0, 0}, {1, 1}, {0, 1}};
  // s=0: 2.5 - 2.0 = 0.5; s=1: 2.0 - 0.5 = 1.5.
  CHECK(std::abs(pessimistic_loss(f, pi, ref, b) - (0.5 + 1.5 + 0.5) / 3.0) <= 1e-12);
}

TEST_CASE("bellman surrogate") {
  SUBCASE("exact Q gives zero") {
    const Mdp m = fixtures::random_mdp(3, 2, 0.9, 2);
    ModelParams model;
    model.logits = m.transition.array().log().matrix();
    model.reward = m.reward;
    const Policy pi = fixtures::random_policy(3, 2, 3);
    const Eigen::MatrixXd q = evaluate_policy(model.to_mdp(0.9, m.initial_dist), pi).q_values;
    const std::vector<StateAction> batch{{0, 0}, {1, 1}, {2, 0}, {2, 1}};
    // stochastic successors leave the next-state variance
    const Eigen::VectorXd v = evaluate_policy(model.to_mdp(0.9, m.initial_dist), pi).state_values;
    double want = 0.0;
    for (const StateAction& sa : batch) {
      const Eigen::VectorXd row = m.transition.row(sa.s * 2 + sa.a).transpose();
      const double mean = row.dot(v);
      want += 0.81 * (row.array() * (v.array() - mean).square()).sum();
    }
    want /= static_cast<double>(batch.size());
    CHECK(std::abs(bellman_surrogate(q, q, model, pi, batch, 0.3, 0.9) - want) <= 1e-10);
  }
  SUBCASE("exact Q of a deterministic model gives zero") {
    Mdp m = fixtures::random_mdp(3, 2, 0.9, 2);
    m.transition.setZero();
    for (int row = 0; row < 6; ++row) m.transition(row, (row * 2 + 1) % 3) = 1.0;
    ModelParams model;
    model.logits = (m.transition.array() * 60.0).matrix();
    model.reward = m.reward;
    const Policy pi = fixtures::random_policy(3, 2, 3);
    const Eigen::MatrixXd q = evaluate_policy(model.to_mdp(0.9, m.initial_dist), pi).q_values;
    const std::vector<StateAction> batch{{0, 0}, {1, 1}, {2, 0}, {2, 1}};
    CHECK(bellman_surrogate(q, q, model, pi, batch, 0.3, 0.9) <= 1e-20);
  }
  SUBCASE("no discount") {
    const Config c = random_config(4);
    CHECK(bellman_surrogate(c.model.reward, c.fbar, c.model, c.pi, batch_of(c), c.cfg.w, 0.0) == 0.0);
  }
  SUBCASE("matches sampled next states") {
    const Config c = random_config(5);
    const StateAction sa = c.model_batch.front();
    const std::vector<StateAction> one{sa};
    const double exact = bellman_surrogate(c.f, c.fbar, c.model, c.pi, one, c.cfg.w, c.cfg.gamma);
    const Eigen::MatrixXd p = softmax_rows(c.model.logits);
    const Eigen::VectorXd v = (c.f.cwiseProduct(c.pi.probs)).rowwise().sum();
    const Eigen::VectorXd vbar = (c.fbar.cwiseProduct(c.pi.probs)).rowwise().sum();
    const int A = c.model.num_actions();
    Rng rng(6);
    const std::size_t n = 1'000'000;
    double sum = 0.0, sum2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto sp = rng.categorical(p.row(sa.s * A + sa.a));
      const double base = c.f(sa.s, sa.a) - c.model.reward(sa.s, sa.a);
      const double own = base - c.cfg.gamma * v(sp);
      const double tgt = base - c.cfg.gamma * vbar(sp);
      const double x = (1.0 - c.cfg.w) * own * own + c.cfg.w * tgt * tgt;
      sum += x;
      sum2 += x * x;
    }
    const double mean = sum / n;
    const double se = std::sqrt((sum2 / n - mean * mean) / n);
    CHECK(std::abs(mean - exact) <= 3.0 * se);
  }
}

TEST_CASE("analytic gradients match central differences") {
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Config c = random_config(100 + seed);
    const auto batch = batch_of(c);
    const AdversaryGradient g =
        adversary_gradient(c.f, c.fbar, c.model, c.pi, c.ref, c.real, batch, c.cfg);

    const auto by_f = [&](const Eigen::MatrixXd& f) {
      return adversary_loss(f, c.fbar, c.model, c.pi, c.ref, c.real, batch, c.cfg);
    };
    const auto by_logits = [&](const Eigen::MatrixXd& x) {
      ModelParams m = c.model;
      m.logits = x;
      return adversary_loss(c.f, c.fbar, m, c.pi, c.ref, c.real, batch, c.cfg);
    };
    const auto by_reward = [&](const Eigen::MatrixXd& x) {
      ModelParams m = c.model;
      m.reward = x;
      return adversary_loss(c.f, c.fbar, m, c.pi, c.ref, c.real, batch, c.cfg);
    };
    const auto by_policy = [&](const Eigen::MatrixXd& x) {
      return actor_objective(c.f, x, c.ref, batch);
    };
    const double errors[] = {
        oracle::relative_error(g.critic, oracle::numeric_gradient(by_f, c.f)),
        oracle::relative_error(g.model_logits, oracle::numeric_gradient(by_logits, c.model.logits)),
        oracle::relative_error(g.model_reward, oracle::numeric_gradient(by_reward, c.model.reward)),
        oracle::relative_error(actor_gradient(c.f, c.policy_logits, batch),
                               oracle::numeric_gradient(by_policy, c.policy_logits))};
    for (double e : errors) {
      CHECK(e <= 1e-4);
      worst = std::max(worst, e);
    }
  }
  MESSAGE("worst relative gradient error " << worst);
}

TEST_CASE("beta zero leaves the model alone") {
  Config c = random_config(7);
  c.cfg.beta = 0.0;
  const AdversaryGradient g =
      adversary_gradient(c.f, c.fbar, c.model, c.pi, c.ref, c.real, batch_of(c), c.cfg);
  CHECK(g.model_logits.cwiseAbs().maxCoeff() == 0.0);
  CHECK(g.model_reward.cwiseAbs().maxCoeff() == 0.0);

  ArmorState st = init_armor_state(c.model.num_states(), c.model.num_actions(), c.cfg);
  st.model = c.model;
  const ModelParams before = st.model;
  adversary_update(st, c.ref, c.real, c.model_batch, c.cfg);
  CHECK(st.model.logits == before.logits);
  CHECK(st.model.reward == before.reward);
}

TEST_CASE("adversary update bookkeeping") {
  Config c = random_config(8);
  SUBCASE("full target copy") {
    c.cfg.tau = 1.0;
    ArmorState st = init_armor_state(c.model.num_states(), c.model.num_actions(), c.cfg);
    adversary_update(st, c.ref, c.real, c.model_batch, c.cfg);
    CHECK(st.fbar1 == st.f1);
    CHECK(st.fbar2 == st.f2);
  }
  SUBCASE("target lag and critic range") {
    c.cfg.eta_fast = 0.5;  // large steps so projection is exercised
    c.cfg.eta_slow = 0.1;
    ArmorState st = init_armor_state(c.model.num_states(), c.model.num_actions(), c.cfg);
    for (int k = 0; k < 200; ++k) {
      const Eigen::MatrixXd f_prev = st.f1, fbar_prev = st.fbar1;
      adversary_update(st, c.ref, c.real, c.model_batch, c.cfg);
      CHECK(st.f1.minCoeff() >= 0.0);
      CHECK(st.f1.maxCoeff() <= c.cfg.vmax);
      CHECK(st.f2.minCoeff() >= 0.0);
      CHECK(st.f2.maxCoeff() <= c.cfg.vmax);
      CHECK(st.model.reward.minCoeff() >= 0.0);
      CHECK(st.model.reward.maxCoeff() <= 1.0);
      const Eigen::MatrixXd expect =
          (1.0 - c.cfg.tau) * (fbar_prev - f_prev) + (1.0 - c.cfg.tau) * (f_prev - st.f1);
      CHECK((st.fbar1 - st.f1 - expect).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }
  SUBCASE("rollout states do not feed the adversary") {
    ArmorState a = init_armor_state(c.model.num_states(), c.model.num_actions(), c.cfg);
    a.model = c.model;
    ArmorState b = a;
    a.rollout_pi = {0, 1, 0};
    b.rollout_pi = {1, 1, 1};
    b.rollout_ref = {0};
    adversary_update(a, c.ref, c.real, c.model_batch, c.cfg);
    adversary_update(b, c.ref, c.real, c.model_batch, c.cfg);
    CHECK(a.model.logits == b.model.logits);
    CHECK(a.model.reward == b.model.reward);
    CHECK(a.f1 == b.f1);
    CHECK(a.f2 == b.f2);
  }
}

TEST_CASE("actor step") {
  const Config c = random_config(9);
  const auto batch = batch_of(c);
  const Eigen::MatrixXd flat = Eigen::MatrixXd::Constant(c.f.rows(), c.f.cols(), 2.0);
  CHECK(actor_gradient(flat, c.policy_logits, batch).cwiseAbs().maxCoeff() <= 1e-15);

  ArmorState st = init_armor_state(c.model.num_states(), c.model.num_actions(), c.cfg);
  st.f1 = flat;
  const Eigen::MatrixXd before = st.policy_logits;
  actor_update(st, batch, c.cfg);
  CHECK(st.policy_logits == before);

  st.f1(batch.front().s, 1) = 5.0;
  const double p_before = st.policy().probs(batch.front().s, 1);
  actor_update(st, batch, c.cfg);
  CHECK(st.policy().probs(batch.front().s, 1) > p_before);
}

TEST_CASE("rollout expansion") {
  Config c = random_config(10);
  c.cfg.horizon = 3;
  SUBCASE("reset from the real batch") {
    ArmorState st = init_armor_state(c.model.num_states(), c.model.num_actions(), c.cfg);
    st.step = 0;
    rollout_expand(st, c.ref, c.real, c.cfg);
    REQUIRE(st.model_buffer.size() == 2 * c.real.size());
    for (std::size_t i = 0; i < c.real.size(); ++i) {
      CHECK(st.model_buffer[i].s == c.real[i].s);
      CHECK(st.model_buffer[c.real.size() + i].s == c.real[i].s);
    }
    st.step = 1;
    const std::vector<int> carried = st.rollout_pi;
    rollout_expand(st, c.ref, c.real, c.cfg);
    for (std::size_t i = 0; i < carried.size(); ++i)
      CHECK(st.model_buffer[2 * c.real.size() + i].s == carried[i]);
  }
  SUBCASE("deterministic successors") {
    const int S = c.model.num_states(), A = c.model.num_actions();
    ArmorState st = init_armor_state(S, A, c.cfg);
    st.model.logits = Eigen::MatrixXd::Constant(S * A, S, -1e3);
    for (int s = 0; s < S; ++s)
      for (int a = 0; a < A; ++a) st.model.logits(s * A + a, (s + a + 1) % S) = 0.0;
    st.policy_logits = Eigen::MatrixXd::Constant(S, A, -1e3);
    st.policy_logits.col(1).setZero();
    st.step = 0;
    rollout_expand(st, Policy::constant_action(S, A, 0), c.real, c.cfg);
    for (std::size_t i = 0; i < c.real.size(); ++i) {
      CHECK(st.rollout_pi[i] == (c.real[i].s + 2) % S);
      CHECK(st.rollout_ref[i] == (c.real[i].s + 1) % S);
    }
  }
  SUBCASE("ring buffer") {
    ModelBuffer buf(3);
    for (int i = 0; i < 5; ++i) buf.push({i, 0});
    CHECK(buf.size() == 3);
    CHECK(buf[0].s == 2);
    CHECK(buf[2].s == 4);
  }
}

TEST_CASE("configuration errors") {
  ArmorConfig cfg;
  cfg.eta_slow = 1.0;
  CHECK_THROWS_AS(cfg.validate(), ParameterError);
  cfg = {};
  cfg.buffer_cap = 1;
  CHECK_THROWS_AS(cfg.validate(), ParameterError);
  CHECK_THROWS_AS(init_armor_state(kMaxIterativeStates + 1, 2, ArmorConfig{}), CapacityError);
  CHECK(parse_warm_start(to_string(WarmStart::bc)) == WarmStart::bc);
  CHECK_THROWS_AS(parse_warm_start("later"), ParameterError);
}

namespace {

struct Toy {
  ToyChain chain = toy_chain({});
  Dataset data = sample_dataset(chain.truth, chain.behavior, 1000, 0, SamplingScheme::occupancy_iid);

  ArmorConfig config() const {
    ArmorConfig cfg = ArmorConfig::for_mdp(chain.truth);
    cfg.eta_fast = 1e-2;
    cfg.eta_slow = 1e-3;
    cfg.eval_period = 0;
    return cfg;
  }
};

}  // namespace

TEST_CASE("no iterations") {
  const Toy toy;
  ArmorConfig cfg = toy.config();
  cfg.steps = 0;
  cfg.warmstart = WarmStart::ref;
  cfg.warmstart_steps = 10;
  const ArmorResult r = run_armor(toy.chain.truth, toy.data, toy.chain.reference, cfg);
  ArmorState st = init_armor_state(5, 2, cfg);
  warm_start(st, toy.data, toy.chain.reference, cfg);
  CHECK(r.final_policy == st.policy());
  CHECK(r.loss_trace.empty());
  CHECK(r.eval_trace.empty());
}

TEST_CASE("determinism") {
  const Toy toy;
  ArmorConfig cfg = toy.config();
  cfg.steps = 500;
  cfg.eval_period = 50;
  const ArmorResult a = run_armor(toy.chain.truth, toy.data, toy.chain.reference, cfg);
  const ArmorResult b = run_armor(toy.chain.truth, toy.data, toy.chain.reference, cfg);
  REQUIRE(a.loss_trace.size() == 500);
  REQUIRE(a.eval_trace.size() == 10);
  CHECK(a.eval_trace.back().step == 500);
  for (std::size_t i = 0; i < a.loss_trace.size(); ++i) {
    CHECK(a.loss_trace[i].pessimistic == b.loss_trace[i].pessimistic);
    CHECK(a.loss_trace[i].bellman == b.loss_trace[i].bellman);
    CHECK(a.loss_trace[i].model_fit == b.loss_trace[i].model_fit);
  }
  CHECK(a.final_policy == b.final_policy);
}

TEST_CASE("toy chain reaches the reference") {
  const Toy toy;
  ArmorConfig cfg = toy.config();
  cfg.steps = 20000;
  const Policy extras[] = {toy.chain.reference};
  const PolicySet policies = enumerate_policies(5, 2, extras);
  const VersionSpace vs = build_version_space(toy_chain_model_class({}), toy.data, 1.0, cfg.vmax);
  const double exact = expected_return(
      toy.chain.truth, policies[solve_relative_pessimism(vs, policies, toy.chain.reference).policy_index]);
  const ArmorResult r = run_armor(toy.chain.truth, toy.data, toy.chain.reference, cfg);
  const int start = ToyChainSpec{}.center();
  CHECK(r.final_policy.probs(start, kRight) >= 0.9);
  CHECK(expected_return(toy.chain.truth, r.final_policy) >= 0.95 * exact);
}

TEST_CASE("imitation when model fitting is off") {
  const Toy toy;
  ArmorConfig cfg = toy.config();
  cfg.steps = 20000;
  cfg.lambda = 0.0;
  const ArmorResult r = run_armor(toy.chain.truth, toy.data, toy.chain.reference, cfg);
  const std::vector<int> states = buffer_states(r.final_state.model_buffer);
  CHECK(mean_policy_tv(r.final_policy, toy.chain.reference, states) <= 0.1);
}
