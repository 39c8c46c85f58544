#pragma once

#include <functional>
#include <string>
#include <vector>

#include "navrep/run_config.hpp"
#include "navrep/store.hpp"

namespace navrep {

struct CheckpointInfo {
  int index = 0;               // 0 = the onset checkpoint
  long post_shift_steps = 0;   // env steps beyond learning onset
  long cum_raw_steps = 0;
  std::string path;
};

struct TrainResult {
  bool onset_reached = false;
  long onset_step = -1;
  LearningCurve curve;
  std::vector<CheckpointInfo> checkpoints;
  long total_env_steps = 0;
  bool stopped_early = false;
};

// Called after each checkpoint is written; return true to stop training.
using CheckpointCallback =
    std::function<bool(const CheckpointInfo&, const NetworkWeights&)>;

// Quadratically spaced post-onset checkpoint schedule: checkpoint i of n
// lands at round(total * (i/n)^2) steps, concentrating early in training.
std::vector<long> checkpoint_schedule(long total_post_shift_steps,
                                      int n_checkpoints);

// Full training run: PPO until learning onset, then `total_post_shift_steps`
// more env steps with scheduled checkpoints. Writes the config copy, the
// learning curve, per-update stats and all checkpoints under cfg.out_dir.
TrainResult train(const RunConfig& cfg,
                  const CheckpointCallback& after_checkpoint = nullptr);

}  // namespace navrep
