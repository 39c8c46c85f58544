#include "navrep/train.hpp"

#include <cmath>
#include <fstream>

namespace navrep {

std::vector<long> checkpoint_schedule(long total_post_shift_steps,
                                      int n_checkpoints) {
  std::vector<long> out;
  for (int i = 1; i <= n_checkpoints; ++i) {
    const double f = static_cast<double>(i) / n_checkpoints;
    out.push_back(std::lround(static_cast<double>(total_post_shift_steps) * f * f));
  }
  return out;
}

TrainResult train(const RunConfig& cfg, const CheckpointCallback& after_checkpoint) {
  ensure_dir(cfg.out_dir);
  ensure_dir(cfg.out_dir + "/checkpoints");
  save_run_config(cfg, cfg.out_dir + "/config.json");

  const MazeGeometry geo = cfg.make_geometry();
  Rng master(cfg.seed);
  Rng init_rng = master.spawn();
  Rng update_rng = master.spawn();
  const uint64_t env_seed = master.next_u64();

  NetworkWeights weights = init_weights(cfg.net, init_rng);
  Adam opt(weights.total_size(), cfg.ppo.learning_rate);
  RolloutCollector collector(geo, cfg.env, cfg.net, cfg.ppo.n_envs, env_seed);

  TrainResult result;
  std::ofstream stats(cfg.out_dir + "/training_stats.csv");
  stats << "# navrep stats v1\n";
  stats << "update,cum_steps,policy_loss,value_loss,entropy,clip_fraction,"
           "approx_kl,grad_norm,rolling_ep_len\n";

  const std::vector<long> schedule =
      checkpoint_schedule(cfg.ppo.total_post_shift_steps,
                          cfg.schedule.n_checkpoints);
  size_t next_ckpt = 0;
  size_t onset_scan = 0;  // first curve index not yet checked for onset
  long update_idx = 0;

  auto save_ckpt = [&](int index, long post_shift) -> bool {
    char name[32];
    std::snprintf(name, sizeof(name), "ckpt_%02d.bin", index);
    CheckpointInfo info;
    info.index = index;
    info.post_shift_steps = post_shift;
    info.cum_raw_steps = collector.total_env_steps();
    info.path = cfg.out_dir + "/checkpoints/" + name;
    Checkpoint ckpt{weights, info.cum_raw_steps, post_shift, result.onset_step};
    save_checkpoint(ckpt, info.path);
    result.checkpoints.push_back(info);
    return after_checkpoint && after_checkpoint(info, weights);
  };

  bool stop = false;
  while (!stop) {
    RolloutBuffer buffer = collector.collect(
        weights, cfg.ppo.rollout_length, [&](int ep_len, bool /*goal*/) {
          result.curve.add(collector.total_env_steps(), ep_len);
        });
    compute_returns_advantages(buffer, cfg.env.gamma, cfg.ppo.gae_lambda);
    UpdateStats us = ppo_update(weights, opt, buffer, cfg.ppo, update_rng);
    ++update_idx;

    const size_t w = static_cast<size_t>(cfg.schedule.onset_window);
    const double rolling =
        result.curve.size() >= w
            ? result.curve.rolling_mean(result.curve.size() - 1,
                                        cfg.schedule.onset_window)
            : 200.0;
    stats << update_idx << ',' << collector.total_env_steps() << ','
          << us.policy_loss << ',' << us.value_loss << ',' << us.entropy << ','
          << us.clip_fraction << ',' << us.approx_kl << ',' << us.grad_norm
          << ',' << rolling << "\n";

    if (!result.onset_reached) {
      // Scan only the newly completed episodes for the onset condition.
      for (size_t i = std::max(onset_scan, w - 1); i < result.curve.size();
           ++i) {
        if (result.curve.rolling_mean(i, cfg.schedule.onset_window) <
            cfg.schedule.onset_threshold) {
          result.onset_reached = true;
          result.onset_step = result.curve.cum_steps[i];
          break;
        }
      }
      onset_scan = result.curve.size();
      if (result.onset_reached) {
        stop = save_ckpt(0, 0);
        if (stop) result.stopped_early = true;
      } else if (collector.total_env_steps() >= cfg.ppo.max_raw_steps) {
        break;  // onset not reached within the step budget
      }
      continue;
    }

    const long post_shift = collector.total_env_steps() - result.onset_step;
    while (next_ckpt < schedule.size() && post_shift >= schedule[next_ckpt]) {
      stop = save_ckpt(static_cast<int>(next_ckpt) + 1, schedule[next_ckpt]);
      ++next_ckpt;
      if (stop) {
        result.stopped_early = true;
        break;
      }
    }
    if (next_ckpt >= schedule.size()) break;
  }

  result.total_env_steps = collector.total_env_steps();
  save_curve(result.curve, cfg.out_dir + "/curve.csv");
  return result;
}

}  // namespace navrep
