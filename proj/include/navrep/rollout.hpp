#pragma once

#include <functional>
#include <vector>

#include "navrep/maze_env.hpp"
#include "navrep/policy_net.hpp"

namespace navrep {

struct EnvStepRecord {
  Vec obs;              // observation the action was computed from
  int action = 0;
  double logp = 0.0;
  double value = 0.0;
  double reward = 0.0;
  bool done = false;
  bool truncated = false;       // time-limit cutoff, bootstrap continues
  double bootstrap_value = 0.0; // V of the final observation when truncated
  bool episode_start = false;   // hidden state was zeroed before this step
};

// Fixed-length per-environment sequence of steps plus the hidden state the
// sequence was entered with.
struct EnvSequence {
  Vec h0;
  std::vector<EnvStepRecord> steps;
  double last_value = 0.0;  // V of the observation after the final step
  std::vector<double> advantages;
  std::vector<double> returns;
};

struct RolloutBuffer {
  std::vector<EnvSequence> seqs;
  long total_steps() const {
    long n = 0;
    for (const auto& s : seqs) n += static_cast<long>(s.steps.size());
    return n;
  }
};

// GAE over one sequence; lambda = 1 reduces advantages to return - value.
void compute_returns_advantages(EnvSequence& seq, double gamma, double lambda);
void compute_returns_advantages(RolloutBuffer& buffer, double gamma,
                                double lambda);

// Splits sequences at episode boundaries into within-episode segments with
// their entry hidden states, as required by the recurrent update.
std::vector<EpisodeSegment> make_segments(const RolloutBuffer& buffer,
                                   const NetworkConfig& config);

// Called once per finished episode during collection.
using EpisodeCallback =
    std::function<void(int episode_length, bool reached_goal)>;

// Drives a pool of environments with the current policy, carrying hidden
// states across rollout boundaries within episodes.
class RolloutCollector {
 public:
  RolloutCollector(const MazeGeometry& geo, const EnvParams& params,
                   const NetworkConfig& net_config, int n_envs, uint64_t seed);

  RolloutBuffer collect(const NetworkWeights& weights, int rollout_len,
                        const EpisodeCallback& on_episode = nullptr);

  long total_env_steps() const { return total_env_steps_; }

 private:
  std::vector<MazeEnv> envs_;
  std::vector<Vec> obs_;
  std::vector<Vec> hidden_;
  std::vector<bool> episode_start_;
  NetworkConfig net_config_;
  Rng action_rng_;
  long total_env_steps_ = 0;
};

}  // namespace navrep
