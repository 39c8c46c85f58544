#pragma once

#include <cstdint>
#include <string>

#include "navrep/maze_env.hpp"
#include "navrep/policy_net.hpp"
#include "navrep/ppo.hpp"

namespace navrep {

struct ScheduleConfig {
  int n_checkpoints = 36;
  int onset_window = 100;
  double onset_threshold = 180.0;
};

struct EvalConfig {
  uint64_t suite_seed = 777;
  int n_episodes = 50;
  bool greedy = false;
  uint64_t action_seed = 9001;
};

struct AnalysisConfig {
  double heatmap_sigma = 15.0;
  int kmeans_k = 12;
  int kmeans_restarts = 10;
  long subsample_cap = 300;
  long d_subsample_cap = 4096;
  double landmark_threshold = 21.0;
  // Alternative sum-of-absolute-values landmark reduction, off by default.
  bool landmark_abs_sum = false;
};

struct GeometryConfig {
  double entrance_x0 = 0.0, entrance_x1 = 40.0;
  double shortcut_x0 = 150.0, shortcut_x1 = 190.0;
  double goal_x0 = 270.0, goal_y0 = 270.0, goal_x1 = 300.0, goal_y1 = 300.0;
};

struct RunConfig {
  uint64_t seed = 1;
  std::string out_dir = "runs/run";
  GeometryConfig geometry;
  EnvParams env;
  NetworkConfig net;
  PpoHyperparams ppo;
  ScheduleConfig schedule;
  EvalConfig eval;
  AnalysisConfig analysis;

  MazeGeometry make_geometry() const;
};

RunConfig load_run_config(const std::string& path);
void save_run_config(const RunConfig& cfg, const std::string& path);
std::string run_config_to_json(const RunConfig& cfg);
RunConfig run_config_from_json(const std::string& text);

}  // namespace navrep
