#include <doctest.h>

#include <cmath>

#include "navrep/ppo.hpp"
#include "navrep/train.hpp"

using namespace navrep;

namespace {

EnvSequence random_sequence(Rng& rng, int T) {
  EnvSequence seq;
  for (int t = 0; t < T; ++t) {
    EnvStepRecord s;
    s.value = rng.uniform(-1.0, 1.0);
    s.reward = rng.uniform(-1.0, 1.0);
    if (rng.bernoulli(0.15)) {
      s.done = true;
      if (rng.bernoulli(0.5)) {
        s.truncated = true;
        s.bootstrap_value = rng.uniform(-1.0, 1.0);
      }
    }
    seq.steps.push_back(s);
  }
  if (!seq.steps.back().done) seq.last_value = rng.uniform(-1.0, 1.0);
  return seq;
}

double next_value_of(const EnvSequence& seq, size_t t) {
  const EnvStepRecord& s = seq.steps[t];
  if (s.done) return s.truncated ? s.bootstrap_value : 0.0;
  if (t + 1 == seq.steps.size()) return seq.last_value;
  return seq.steps[t + 1].value;
}

// Brute-force double loop: expand the advantage at each step as an explicit
// discounted sum of TD errors up to (and including) the episode's last step.
std::vector<double> brute_force_advantages(const EnvSequence& seq, double gamma,
                                           double lambda) {
  const size_t T = seq.steps.size();
  std::vector<double> adv(T, 0.0);
  for (size_t t = 0; t < T; ++t) {
    double acc = 0.0;
    double coef = 1.0;
    for (size_t k = t; k < T; ++k) {
      const double delta = seq.steps[k].reward +
                           gamma * next_value_of(seq, k) - seq.steps[k].value;
      acc += coef * delta;
      if (seq.steps[k].done) break;
      coef *= gamma * lambda;
    }
    adv[t] = acc;
  }
  return adv;
}

}  // namespace

TEST_CASE("GAE matches the brute-force double-loop expansion") {
  Rng rng(2024);
  const double gammas[] = {0.0, 0.5, 0.99};
  const double lambdas[] = {0.0, 0.95, 1.0};
  int n_checked = 0;
  for (int trial = 0; trial < 112; ++trial) {
    EnvSequence base = random_sequence(rng, 40);
    for (double gamma : gammas) {
      for (double lambda : lambdas) {
        EnvSequence seq = base;
        compute_returns_advantages(seq, gamma, lambda);
        const std::vector<double> expected =
            brute_force_advantages(seq, gamma, lambda);
        for (size_t t = 0; t < seq.steps.size(); ++t) {
          REQUIRE(std::abs(seq.advantages[t] - expected[t]) < 1e-10);
          REQUIRE(std::abs(seq.returns[t] -
                           (expected[t] + seq.steps[t].value)) < 1e-10);
        }
        ++n_checked;
      }
    }
  }
  CHECK(n_checked >= 1000);
}

TEST_CASE("lambda = 1 gives discounted-return-minus-value advantages") {
  Rng rng(7);
  const double gamma = 0.99;
  for (int trial = 0; trial < 20; ++trial) {
    EnvSequence seq = random_sequence(rng, 30);
    compute_returns_advantages(seq, gamma, 1.0);
    const size_t T = seq.steps.size();
    // Backward pass computing the discounted Monte-Carlo return with the
    // same bootstrap conventions.
    double g = 0.0;
    std::vector<double> ret(T, 0.0);
    for (size_t ti = T; ti-- > 0;) {
      const EnvStepRecord& s = seq.steps[ti];
      if (s.done) {
        g = s.reward + gamma * (s.truncated ? s.bootstrap_value : 0.0);
      } else if (ti + 1 == T) {
        g = s.reward + gamma * seq.last_value;
      } else {
        g = s.reward + gamma * g;
      }
      ret[ti] = g;
    }
    for (size_t t = 0; t < T; ++t) {
      CHECK(seq.advantages[t] ==
            doctest::Approx(ret[t] - seq.steps[t].value).epsilon(1e-12));
      CHECK(seq.returns[t] == doctest::Approx(ret[t]).epsilon(1e-12));
    }
  }
}

TEST_CASE("make_segments splits at episode boundaries") {
  NetworkConfig cfg;
  cfg.input_dim = 2;
  cfg.layer_width = 3;
  RolloutBuffer buffer;
  EnvSequence seq;
  seq.h0 = Vec::Constant(3, 0.5);
  for (int t = 0; t < 6; ++t) {
    EnvStepRecord s;
    s.obs = Vec::Constant(2, static_cast<double>(t));
    s.action = t % 4;
    s.episode_start = (t == 0 || t == 4);
    s.done = (t == 3);
    seq.steps.push_back(s);
  }
  seq.advantages.assign(6, 1.0);
  seq.returns.assign(6, 2.0);
  buffer.seqs.push_back(seq);

  // A mid-episode continuation sequence: no episode_start at index 0, so the
  // entry hidden state must be the carried one, not zeros.
  EnvSequence cont;
  cont.h0 = Vec::Constant(3, -0.25);
  for (int t = 0; t < 2; ++t) {
    EnvStepRecord s;
    s.obs = Vec::Constant(2, 9.0 + t);
    cont.steps.push_back(s);
  }
  cont.advantages.assign(2, 0.0);
  cont.returns.assign(2, 0.0);
  buffer.seqs.push_back(cont);

  const std::vector<EpisodeSegment> segs = make_segments(buffer, cfg);
  REQUIRE(segs.size() == 3);
  CHECK(segs[0].steps.size() == 4);
  CHECK(segs[1].steps.size() == 2);
  CHECK(segs[2].steps.size() == 2);
  CHECK(segs[0].h0.isZero());  // episode_start at t=0 resets the entry state
  CHECK(segs[1].h0.isZero());
  CHECK(segs[2].h0(0) == doctest::Approx(-0.25));
  CHECK(segs[0].steps[2].obs(0) == 2.0);
  CHECK(segs[1].steps[0].obs(0) == 4.0);
  CHECK(segs[0].steps[0].advantage == 1.0);
  CHECK(segs[0].steps[0].ret == 2.0);
}

TEST_CASE("Adam minimizes a quadratic over the parameter vector") {
  NetworkConfig cfg;
  cfg.input_dim = 2;
  cfg.layer_width = 3;
  Rng rng(5);
  NetworkWeights w = init_weights(cfg, rng);
  Adam opt(w.total_size(), 0.05);
  const auto norm = [](const NetworkWeights& n) {
    double s = 0.0;
    for (const auto& p : n.params()) {
      for (long i = 0; i < p.size; ++i) s += p.data[i] * p.data[i];
    }
    return std::sqrt(s);
  };
  const double before = norm(w);
  for (int it = 0; it < 500; ++it) {
    NetworkWeights grad = w;  // gradient of 0.5 * ||w||^2
    opt.step(w, grad);
  }
  CHECK(norm(w) < 0.05 * before);
  CHECK(w.all_finite());
}

TEST_CASE("ppo_update normalizes advantages and keeps weights finite") {
  const MazeGeometry geo = make_default_geometry();
  EnvParams env;
  NetworkConfig net;
  net.layer_width = 16;
  PpoHyperparams hyper;
  hyper.n_envs = 4;
  hyper.rollout_length = 64;

  Rng init_rng(1);
  NetworkWeights weights = init_weights(net, init_rng);
  Adam opt(weights.total_size(), hyper.learning_rate);
  RolloutCollector collector(geo, env, net, hyper.n_envs, 42);
  Rng update_rng(9);

  for (int u = 0; u < 3; ++u) {
    RolloutBuffer buffer = collector.collect(weights, hyper.rollout_length);
    CHECK(buffer.total_steps() == hyper.n_envs * hyper.rollout_length);
    compute_returns_advantages(buffer, env.gamma, hyper.gae_lambda);
    const UpdateStats us = ppo_update(weights, opt, buffer, hyper, update_rng);

    double sum = 0.0, sum2 = 0.0;
    long n = 0;
    for (const auto& seq : buffer.seqs) {
      for (double a : seq.advantages) {
        sum += a;
        sum2 += a * a;
        ++n;
      }
    }
    const double mean = sum / n;
    const double var = sum2 / n - mean * mean;
    CHECK(std::abs(mean) < 1e-9);
    CHECK(std::abs(std::sqrt(var) - 1.0) < 1e-6);
    CHECK(std::isfinite(us.policy_loss));
    CHECK(std::isfinite(us.value_loss));
    CHECK(us.entropy > 0.0);
    CHECK(us.grad_norm >= 0.0);
    CHECK(weights.all_finite());
  }
  CHECK(collector.total_env_steps() == 3L * hyper.n_envs * hyper.rollout_length);
}

TEST_CASE("rolling mean and learning-onset detection") {
  LearningCurve curve;
  SUBCASE("sentinel before the window fills") {
    for (int i = 0; i < 50; ++i) curve.add(i + 1, 150);
    CHECK(curve.rolling_mean(49, 100) == 200.0);
    CHECK_FALSE(detect_learning_onset(curve).has_value());
  }
  SUBCASE("no onset when episodes stay long") {
    for (int i = 0; i < 400; ++i) curve.add(i + 1, 200);
    CHECK_FALSE(detect_learning_onset(curve).has_value());
  }
  SUBCASE("onset lands on the first qualifying episode") {
    // 150 episodes at the cap, then sharply shorter ones. The trailing
    // 100-episode mean crosses 180 once 21 short episodes are in the window.
    for (int i = 0; i < 150; ++i) curve.add(i + 1, 200);
    for (int i = 0; i < 100; ++i) curve.add(151 + i, 100);
    const auto onset = detect_learning_onset(curve);
    REQUIRE(onset.has_value());
    CHECK(*onset == 171);
    CHECK(curve.rolling_mean(170, 100) == doctest::Approx(179.0));
    CHECK(curve.rolling_mean(169, 100) == doctest::Approx(180.0));
  }
}

TEST_CASE("checkpoint schedule is quadratic and hits the endpoint") {
  const std::vector<long> s = checkpoint_schedule(6'000'000, 36);
  REQUIRE(s.size() == 36);
  CHECK(s.front() == 4630);  // round(6e6 / 36^2)
  CHECK(s.back() == 6'000'000);
  CHECK(s[17] == std::lround(6e6 * (18.0 / 36.0) * (18.0 / 36.0)));
  for (size_t i = 1; i < s.size(); ++i) CHECK(s[i] > s[i - 1]);
}
