#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "navrep/maze_env.hpp"
#include "navrep/rng.hpp"

namespace navrep {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

struct NetworkConfig {
  int input_dim = 24;
  int layer_width = 64;
  int n_shared_ff = 2;  // feed-forward layers before the recurrent layer
  int n_actions = kNumActions;
};

// All learnable parameters. Layout:
//   shared ff layers (tanh) -> GRU -> actor ff (tanh) -> logits (linear)
//                                  -> critic ff (tanh) -> value (linear)
// The GRU follows the usual gate equations
//   z = sigmoid(Wz x + Uz h + bz)
//   r = sigmoid(Wr x + Ur h + br)
//   n = tanh(Wn x + r .* (Un h) + bn)
//   h' = (1 - z) .* n + z .* h
struct NetworkWeights {
  NetworkConfig config;

  std::vector<Mat> ff_w;
  std::vector<Vec> ff_b;
  Mat gru_wz, gru_uz, gru_wr, gru_ur, gru_wn, gru_un;
  Vec gru_bz, gru_br, gru_bn;
  Mat actor_w, logits_w;
  Vec actor_b, logits_b;
  Mat critic_w, value_w;  // value_w is 1 x width
  Vec critic_b, value_b;  // value_b has size 1

  struct ParamView {
    std::string name;
    double* data;
    long size;
  };
  struct ConstParamView {
    std::string name;
    const double* data;
    long size;
  };

  // Canonical flat ordering of every array; checkpoints and the optimizer
  // both iterate in this order.
  std::vector<ParamView> params();
  std::vector<ConstParamView> params() const;

  long total_size() const;
  void set_zero();
  bool all_finite() const;
};

NetworkWeights make_zero_weights(const NetworkConfig& config);
NetworkWeights init_weights(const NetworkConfig& config, Rng& rng);

struct PolicyOutput {
  Vec action_logits;
  Vec action_probs;
  double value = 0.0;
  Vec new_hidden;  // also the recurrent activations recorded for analysis
};

Vec softmax(const Vec& logits);

PolicyOutput forward(const NetworkWeights& w, const Vec& observation,
                     const Vec& hidden);

Vec zero_hidden(const NetworkConfig& config);

// Categorical sample; returns the action and its log-probability.
std::pair<ActionId, double> sample_action(const Vec& probs, Rng& rng);
ActionId argmax_action(const Vec& probs);

// --- training-side loss and exact gradient -------------------------------

// One time step of a contiguous within-episode segment.
struct SegmentStep {
  Vec obs;
  int action = 0;
  double old_logp = 0.0;
  double advantage = 0.0;
  double ret = 0.0;
};

struct EpisodeSegment {
  Vec h0;  // hidden state entering the segment (zeros at episode start)
  std::vector<SegmentStep> steps;
};

struct LossCoefs {
  double clip_ratio = 0.2;
  double value_coef = 0.5;
  double entropy_coef = 0.01;
};

struct LossStats {
  double total = 0.0;
  double policy = 0.0;
  double value = 0.0;
  double entropy = 0.0;
  double clip_fraction = 0.0;
  double approx_kl = 0.0;
  long n_steps = 0;
};

// PPO clipped-surrogate loss averaged over all steps in the batch.
LossStats ppo_loss(const NetworkWeights& w, const std::vector<EpisodeSegment>& batch,
                   const LossCoefs& coefs);

// Same loss, plus its exact gradient via backpropagation through time.
// `grad` must have the same shapes as `w`; it is zeroed first.
LossStats ppo_loss_backward(const NetworkWeights& w,
                            const std::vector<EpisodeSegment>& batch,
                            const LossCoefs& coefs, NetworkWeights& grad);

}  // namespace navrep
