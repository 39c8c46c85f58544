#include "navrep/evaluation.hpp"

#include <cmath>
#include <stdexcept>

namespace navrep {

EvalSuite make_eval_suite(uint64_t seed, const MazeGeometry& geo,
                          const EnvParams& params, int n_episodes) {
  EvalSuite suite;
  suite.seed = seed;
  Rng rng(seed);
  for (int i = 0; i < n_episodes; ++i) {
    StartState s;
    // Rejection-sample like reset_state; a start must be valid whether the
    // shortcut wall is present or not, so test against the closed layout.
    do {
      s.x = rng.uniform(0.0, geo.arena_size);
      s.y = rng.uniform(0.0, params.start_y_max);
    } while (near_wall(geo, {s.x, s.y}, /*shortcut_open=*/false, 1e-3));
    s.heading = rng.uniform(0.0, 2.0 * M_PI);
    suite.starts.push_back(s);
  }
  return suite;
}

double ActivationTrace::mean_episode_length() const {
  if (episodes.empty()) return 0.0;
  double s = 0.0;
  for (const auto& e : episodes) s += e.length;
  return s / static_cast<double>(episodes.size());
}

namespace {

// Runs one episode, either policy-driven or following prescribed actions.
void run_episode(const NetworkWeights& weights, const MazeGeometry& geo,
                 const EnvParams& params, const StartState& start,
                 bool shortcut_open, bool open_mode, int episode_id,
                 const std::vector<int>* prescribed, bool greedy, Rng& rng,
                 ActivationTrace& trace) {
  MazeEnv env(geo, params, /*seed=*/0);
  EnvState init;
  init.x = start.x;
  init.y = start.y;
  init.heading = start.heading;
  init.shortcut_open = shortcut_open;
  Observation o = env.reset_to(init);

  Vec obs = Eigen::Map<const Vec>(o.data(), o.size());
  Vec hidden = zero_hidden(weights.config);
  std::vector<Vec2> traj{{start.x, start.y}};
  EpisodeResult res;
  res.episode_id = episode_id;
  res.open_mode = open_mode;

  for (int t = 0;; ++t) {
    PolicyOutput out = forward(weights, obs, hidden);
    ActionId action;
    if (prescribed != nullptr) {
      if (t >= static_cast<int>(prescribed->size())) break;
      action = static_cast<ActionId>((*prescribed)[t]);
    } else if (greedy) {
      action = argmax_action(out.action_probs);
    } else {
      action = sample_action(out.action_probs, rng).first;
    }

    TraceRow row;
    row.episode_id = episode_id;
    row.open_mode = open_mode;
    row.t = t;
    row.x = env.state().x;
    row.y = env.state().y;
    row.heading = env.state().heading;
    row.shortcut_open = env.state().shortcut_open;
    row.action = static_cast<int>(action);
    row.activations = out.new_hidden;
    trace.rows.push_back(std::move(row));

    StepResult sr = env.step(action);
    hidden = out.new_hidden;
    obs = Eigen::Map<const Vec>(sr.obs.data(), sr.obs.size());
    traj.push_back({sr.state.x, sr.state.y});
    res.length = t + 1;
    if (sr.done) {
      res.reached_goal = sr.reward > 0.0;
      break;
    }
  }
  res.label = classify_path(traj, geo);
  trace.episodes.push_back(res);
}

}  // namespace

ActivationTrace run_eval(const NetworkWeights& weights,
                         const MazeGeometry& geo, const EnvParams& params,
                         const EvalSuite& suite, bool open_mode,
                         const EvalOptions& opts) {
  ActivationTrace trace;
  trace.run_id = opts.run_id;
  Rng rng(opts.action_seed);
  for (size_t i = 0; i < suite.starts.size(); ++i) {
    run_episode(weights, geo, params, suite.starts[i],
                /*shortcut_open=*/open_mode, open_mode, static_cast<int>(i),
                nullptr, opts.greedy, rng, trace);
  }
  return trace;
}

double shortcut_use_rate(const ActivationTrace& open_trace) {
  if (open_trace.episodes.empty()) {
    throw std::invalid_argument("shortcut_use_rate: empty results");
  }
  int shortcut = 0;
  for (const auto& e : open_trace.episodes) {
    if (!e.open_mode) {
      throw std::invalid_argument(
          "shortcut_use_rate: closed-mode episodes in input");
    }
    if (e.label == PathLabel::Shortcut) ++shortcut;
  }
  return static_cast<double>(shortcut) /
         static_cast<double>(open_trace.episodes.size());
}

ActionSchedule make_action_schedule(const ActivationTrace& open_trace,
                                    const ActivationTrace& closed_trace,
                                    const EvalSuite& suite) {
  ActionSchedule sched;
  sched.source_run_id = open_trace.run_id;
  auto append = [&](const ActivationTrace& trace, bool open) {
    for (const auto& ep : trace.episodes) {
      ScheduleEpisode se;
      se.start = suite.starts.at(ep.episode_id);
      se.shortcut_open = open;
      for (const auto& row : trace.rows) {
        if (row.episode_id == ep.episode_id && row.open_mode == open) {
          se.actions.push_back(row.action);
        }
      }
      sched.episodes.push_back(std::move(se));
    }
  };
  append(open_trace, true);
  append(closed_trace, false);
  return sched;
}

int select_reference_checkpoint(const std::vector<double>& use_rates,
                                double target, double window,
                                bool* within_window) {
  if (use_rates.empty()) {
    throw std::invalid_argument("select_reference_checkpoint: no candidates");
  }
  int best = 0;
  double best_d = std::abs(use_rates[0] - target);
  for (size_t i = 1; i < use_rates.size(); ++i) {
    const double d = std::abs(use_rates[i] - target);
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(i);
    }
  }
  if (within_window != nullptr) *within_window = best_d <= window;
  return best;
}

ActivationTrace replay_prescribed(const NetworkWeights& weights,
                                  const MazeGeometry& geo,
                                  const EnvParams& params,
                                  const ActionSchedule& schedule, int run_id) {
  ActivationTrace trace;
  trace.run_id = run_id;
  Rng unused(0);
  for (size_t i = 0; i < schedule.episodes.size(); ++i) {
    const ScheduleEpisode& se = schedule.episodes[i];
    run_episode(weights, geo, params, se.start, se.shortcut_open,
                se.shortcut_open, static_cast<int>(i), &se.actions,
                /*greedy=*/false, unused, trace);
  }
  return trace;
}

}  // namespace navrep
