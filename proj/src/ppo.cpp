#include "navrep/ppo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace navrep {

Adam::Adam(long n_params, double lr, double beta1, double beta2, double eps)
    : m_(n_params, 0.0), v_(n_params, 0.0), lr_(lr), beta1_(beta1),
      beta2_(beta2), eps_(eps) {}

void Adam::step(NetworkWeights& weights, const NetworkWeights& grad) {
  ++t_;
  const double bc1 = 1.0 - std::pow(beta1_, t_);
  const double bc2 = 1.0 - std::pow(beta2_, t_);
  auto wp = weights.params();
  auto gp = grad.params();
  long k = 0;
  for (size_t a = 0; a < wp.size(); ++a) {
    for (long i = 0; i < wp[a].size; ++i, ++k) {
      const double g = gp[a].data[i];
      m_[k] = beta1_ * m_[k] + (1.0 - beta1_) * g;
      v_[k] = beta2_ * v_[k] + (1.0 - beta2_) * g * g;
      const double mhat = m_[k] / bc1;
      const double vhat = v_[k] / bc2;
      wp[a].data[i] -= lr_ * mhat / (std::sqrt(vhat) + eps_);
    }
  }
}

namespace {

double global_grad_norm(const NetworkWeights& grad) {
  double sq = 0.0;
  for (const auto& p : grad.params()) {
    for (long i = 0; i < p.size; ++i) sq += p.data[i] * p.data[i];
  }
  return std::sqrt(sq);
}

void scale_grad(NetworkWeights& grad, double s) {
  for (auto& p : grad.params()) {
    for (long i = 0; i < p.size; ++i) p.data[i] *= s;
  }
}

}  // namespace

UpdateStats ppo_update(NetworkWeights& weights, Adam& opt,
                       RolloutBuffer& buffer, const PpoHyperparams& hyper,
                       Rng& rng) {
  // Normalize advantages once per update.
  double sum = 0.0, sum2 = 0.0;
  long n = 0;
  for (const auto& seq : buffer.seqs) {
    for (double a : seq.advantages) {
      sum += a;
      ++n;
    }
  }
  const double mean = sum / static_cast<double>(n);
  for (const auto& seq : buffer.seqs) {
    for (double a : seq.advantages) sum2 += (a - mean) * (a - mean);
  }
  const double std = std::sqrt(sum2 / static_cast<double>(n));
  const double inv_std = std > 1e-12 ? 1.0 / std : 0.0;
  for (auto& seq : buffer.seqs) {
    for (double& a : seq.advantages) a = (a - mean) * inv_std;
  }

  std::vector<EpisodeSegment> segments = make_segments(buffer, weights.config);
  LossCoefs coefs{hyper.clip_ratio, hyper.value_coef, hyper.entropy_coef};

  UpdateStats stats;
  int n_steps_done = 0;
  NetworkWeights grad;
  std::vector<size_t> order(segments.size());
  std::iota(order.begin(), order.end(), 0);
  for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
    // Fisher-Yates with our deterministic RNG.
    for (size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[rng.uniform_int(i)]);
    }
    const size_t mb_count = std::max<size_t>(
        1, std::min<size_t>(hyper.n_minibatches, order.size()));
    for (size_t mb = 0; mb < mb_count; ++mb) {
      std::vector<EpisodeSegment> batch;
      for (size_t j = mb; j < order.size(); j += mb_count) {
        batch.push_back(segments[order[j]]);
      }
      if (batch.empty()) continue;
      LossStats ls = ppo_loss_backward(weights, batch, coefs, grad);
      double gn = global_grad_norm(grad);
      if (hyper.max_grad_norm > 0.0 && gn > hyper.max_grad_norm) {
        scale_grad(grad, hyper.max_grad_norm / gn);
      }
      opt.step(weights, grad);
      stats.policy_loss += ls.policy;
      stats.value_loss += ls.value;
      stats.entropy += ls.entropy;
      stats.clip_fraction += ls.clip_fraction;
      stats.approx_kl += ls.approx_kl;
      stats.grad_norm += gn;
      ++n_steps_done;
    }
  }
  if (n_steps_done > 0) {
    const double inv = 1.0 / n_steps_done;
    stats.policy_loss *= inv;
    stats.value_loss *= inv;
    stats.entropy *= inv;
    stats.clip_fraction *= inv;
    stats.approx_kl *= inv;
    stats.grad_norm *= inv;
  }
  return stats;
}

double LearningCurve::rolling_mean(size_t i, int window) const {
  const size_t w = static_cast<size_t>(window);
  if (i + 1 < w) return 200.0;  // not enough episodes yet
  double s = 0.0;
  for (size_t j = i + 1 - w; j <= i; ++j) s += episode_lengths[j];
  return s / static_cast<double>(w);
}

std::optional<long> detect_learning_onset(const LearningCurve& curve,
                                          int window, double threshold) {
  for (size_t i = static_cast<size_t>(window) - 1; i < curve.size(); ++i) {
    if (curve.rolling_mean(i, window) < threshold) {
      return curve.cum_steps[i];
    }
  }
  return std::nullopt;
}

}  // namespace navrep
