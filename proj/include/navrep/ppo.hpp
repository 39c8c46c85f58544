#pragma once

#include <optional>
#include <vector>

#include "navrep/rollout.hpp"

namespace navrep {

struct PpoHyperparams {
  double clip_ratio = 0.2;
  double learning_rate = 1e-3;
  double gae_lambda = 0.95;
  int rollout_length = 128;
  int n_envs = 16;
  int epochs = 4;
  int n_minibatches = 4;
  double value_coef = 0.5;
  double entropy_coef = 0.02;
  double max_grad_norm = 0.5;
  long total_post_shift_steps = 6'000'000;
  long max_raw_steps = 60'000'000;  // safety cap while waiting for onset
};

// Plain Adam over the canonical flat parameter ordering.
class Adam {
 public:
  explicit Adam(long n_params, double lr, double beta1 = 0.9,
                double beta2 = 0.999, double eps = 1e-8);

  void step(NetworkWeights& weights, const NetworkWeights& grad);
  void set_lr(double lr) { lr_ = lr; }

 private:
  std::vector<double> m_, v_;
  double lr_, beta1_, beta2_, eps_;
  long t_ = 0;
};

struct UpdateStats {
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  double clip_fraction = 0.0;
  double approx_kl = 0.0;
  double grad_norm = 0.0;
};

// Normalizes advantages across the buffer (mean 0, std 1), then runs
// epochs x minibatches of clipped-surrogate updates in place.
UpdateStats ppo_update(NetworkWeights& weights, Adam& opt,
                       RolloutBuffer& buffer, const PpoHyperparams& hyper,
                       Rng& rng);

struct LearningCurve {
  std::vector<long> cum_steps;       // env steps at episode completion
  std::vector<int> episode_lengths;

  void add(long steps, int length) {
    cum_steps.push_back(steps);
    episode_lengths.push_back(length);
  }
  size_t size() const { return episode_lengths.size(); }

  // Trailing mean of the last `window` episodes ending at index i.
  double rolling_mean(size_t i, int window) const;
};

// First cumulative-step count at which the trailing 100-episode mean length
// drops below 180, or nullopt if it never does.
std::optional<long> detect_learning_onset(const LearningCurve& curve,
                                          int window = 100,
                                          double threshold = 180.0);

}  // namespace navrep
