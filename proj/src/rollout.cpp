#include "navrep/rollout.hpp"

namespace navrep {

void compute_returns_advantages(EnvSequence& seq, double gamma, double lambda) {
  const size_t T = seq.steps.size();
  seq.advantages.assign(T, 0.0);
  seq.returns.assign(T, 0.0);
  double gae = 0.0;
  for (size_t ti = T; ti-- > 0;) {
    const EnvStepRecord& s = seq.steps[ti];
    double next_value;
    if (s.done) {
      next_value = s.truncated ? s.bootstrap_value : 0.0;
    } else if (ti + 1 == T) {
      next_value = seq.last_value;
    } else {
      next_value = seq.steps[ti + 1].value;
    }
    const double delta = s.reward + gamma * next_value - s.value;
    gae = delta + (s.done ? 0.0 : gamma * lambda * gae);
    seq.advantages[ti] = gae;
    seq.returns[ti] = gae + s.value;
  }
}

void compute_returns_advantages(RolloutBuffer& buffer, double gamma,
                                double lambda) {
  for (auto& seq : buffer.seqs) compute_returns_advantages(seq, gamma, lambda);
}

std::vector<EpisodeSegment> make_segments(const RolloutBuffer& buffer,
                                   const NetworkConfig& config) {
  std::vector<EpisodeSegment> out;
  for (const auto& seq : buffer.seqs) {
    EpisodeSegment cur;
    cur.h0 = seq.h0;
    for (size_t t = 0; t < seq.steps.size(); ++t) {
      const EnvStepRecord& s = seq.steps[t];
      if (s.episode_start && !cur.steps.empty()) {
        out.push_back(std::move(cur));
        cur = EpisodeSegment{};
      }
      if (s.episode_start) cur.h0 = zero_hidden(config);
      cur.steps.push_back({s.obs, s.action, s.logp, seq.advantages[t],
                           seq.returns[t]});
    }
    if (!cur.steps.empty()) out.push_back(std::move(cur));
  }
  return out;
}

RolloutCollector::RolloutCollector(const MazeGeometry& geo,
                                   const EnvParams& params,
                                   const NetworkConfig& net_config, int n_envs,
                                   uint64_t seed)
    : net_config_(net_config), action_rng_(seed ^ 0xa5a5a5a5ULL) {
  Rng seeder(seed);
  for (int i = 0; i < n_envs; ++i) {
    envs_.emplace_back(geo, params, seeder.next_u64());
  }
  for (auto& env : envs_) {
    Observation o = env.reset();
    obs_.emplace_back(Eigen::Map<const Vec>(o.data(), o.size()));
    hidden_.push_back(zero_hidden(net_config_));
    episode_start_.push_back(true);
  }
}

RolloutBuffer RolloutCollector::collect(const NetworkWeights& weights,
                                        int rollout_len,
                                        const EpisodeCallback& on_episode) {
  RolloutBuffer buffer;
  buffer.seqs.resize(envs_.size());
  for (size_t e = 0; e < envs_.size(); ++e) {
    buffer.seqs[e].h0 = hidden_[e];
    buffer.seqs[e].steps.reserve(rollout_len);
  }
  for (int t = 0; t < rollout_len; ++t) {
    for (size_t e = 0; e < envs_.size(); ++e) {
      PolicyOutput out = forward(weights, obs_[e], hidden_[e]);
      auto [action, logp] = sample_action(out.action_probs, action_rng_);

      EnvStepRecord rec;
      rec.obs = obs_[e];
      rec.action = static_cast<int>(action);
      rec.logp = logp;
      rec.value = out.value;
      rec.episode_start = episode_start_[e];
      episode_start_[e] = false;

      StepResult sr = envs_[e].step(action);
      rec.reward = sr.reward;
      rec.done = sr.done;
      rec.truncated = sr.truncated;
      hidden_[e] = out.new_hidden;
      ++total_env_steps_;

      if (sr.done) {
        if (on_episode) {
          on_episode(envs_[e].state().step_count, sr.reward > 0.0);
        }
        if (sr.truncated) {
          // Bootstrap with the value of the episode's final observation.
          Vec final_obs = Eigen::Map<const Vec>(sr.obs.data(), sr.obs.size());
          rec.bootstrap_value =
              forward(weights, final_obs, hidden_[e]).value;
        }
        Observation o = envs_[e].reset();
        obs_[e] = Eigen::Map<const Vec>(o.data(), o.size());
        hidden_[e] = zero_hidden(net_config_);
        episode_start_[e] = true;
      } else {
        obs_[e] = Eigen::Map<const Vec>(sr.obs.data(), sr.obs.size());
      }
      buffer.seqs[e].steps.push_back(std::move(rec));
    }
  }
  // Bootstrap values for sequence tails that are mid-episode.
  for (size_t e = 0; e < envs_.size(); ++e) {
    if (!buffer.seqs[e].steps.back().done) {
      buffer.seqs[e].last_value = forward(weights, obs_[e], hidden_[e]).value;
    }
  }
  return buffer;
}

}  // namespace navrep
