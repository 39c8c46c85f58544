#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "navrep/maze_env.hpp"
#include "navrep/policy_net.hpp"

namespace navrep {

struct StartState {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;
};

// 50 fixed start states shared by every agent, checkpoint and mode.
struct EvalSuite {
  uint64_t seed = 0;
  std::vector<StartState> starts;
};

EvalSuite make_eval_suite(uint64_t seed, const MazeGeometry& geo,
                          const EnvParams& params, int n_episodes = 50);

struct TraceRow {
  int episode_id = 0;
  bool open_mode = false;
  int t = 0;
  double x = 0.0, y = 0.0, heading = 0.0;
  bool shortcut_open = false;
  int action = 0;
  Vec activations;  // the 64 recurrent-layer outputs at this step
};

struct EpisodeResult {
  int episode_id = 0;
  bool open_mode = false;
  int length = 0;
  bool reached_goal = false;
  PathLabel label = PathLabel::NoEntry;
};

struct ActivationTrace {
  int run_id = 0;
  std::vector<TraceRow> rows;
  std::vector<EpisodeResult> episodes;

  double mean_episode_length() const;
};

struct EvalOptions {
  bool greedy = false;       // default: sample with the fixed seed below
  uint64_t action_seed = 9001;
  int run_id = 0;
};

// Runs the 50 suite episodes with the shortcut forced open or closed,
// recording the full activation trace.
ActivationTrace run_eval(const NetworkWeights& weights,
                         const MazeGeometry& geo, const EnvParams& params,
                         const EvalSuite& suite, bool open_mode,
                         const EvalOptions& opts = {});

// Fraction of open-mode episodes whose trajectory entered through the
// shortcut gap. Throws on closed-mode input.
double shortcut_use_rate(const ActivationTrace& open_trace);

struct ScheduleEpisode {
  StartState start;
  bool shortcut_open = false;
  std::vector<int> actions;
};

struct ActionSchedule {
  int source_run_id = 0;
  double source_use_rate = 0.0;
  std::vector<ScheduleEpisode> episodes;
};

// Copies the full action history (both modes) out of recorded traces.
ActionSchedule make_action_schedule(const ActivationTrace& open_trace,
                                    const ActivationTrace& closed_trace,
                                    const EvalSuite& suite);

// Picks the candidate whose open-mode use rate is nearest the target
// (0.6 by default). Returns the index; `within_window` is false when no
// candidate lies inside [target - window, target + window].
int select_reference_checkpoint(const std::vector<double>& use_rates,
                                double target, double window,
                                bool* within_window);

// Replays prescribed actions; the evaluated network sees the induced
// observation stream but its outputs do not drive the environment.
ActivationTrace replay_prescribed(const NetworkWeights& weights,
                                  const MazeGeometry& geo,
                                  const EnvParams& params,
                                  const ActionSchedule& schedule,
                                  int run_id = 0);

}  // namespace navrep
