#include "navrep/run_config.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace navrep {

using nlohmann::json;

MazeGeometry RunConfig::make_geometry() const {
  MazeGeometry g;
  g.entrance_x0 = geometry.entrance_x0;
  g.entrance_x1 = geometry.entrance_x1;
  g.shortcut_x0 = geometry.shortcut_x0;
  g.shortcut_x1 = geometry.shortcut_x1;
  g.goal_box = {geometry.goal_x0, geometry.goal_y0, geometry.goal_x1,
                geometry.goal_y1};
  const double S = g.arena_size;
  const double Y = g.long_wall_y;
  auto add = [&g](double ax, double ay, double bx, double by, double color,
                  bool shortcut = false) {
    g.walls.push_back({{{ax, ay}, {bx, by}}, color, shortcut});
  };
  add(0, 0, S, 0, kColorWhite);
  add(S, 0, S, S, kColorWhite);
  add(S, S, 0, S, kColorWhite);
  add(0, S, 0, 0, kColorWhite);
  if (g.entrance_x0 > 0.0) add(0, Y, g.entrance_x0, Y, kColorWhite);
  add(g.entrance_x1, Y, g.shortcut_x0, Y, kColorWhite);
  if (g.shortcut_x1 < S) add(g.shortcut_x1, Y, S, Y, kColorWhite);
  add(g.shortcut_x0, Y, g.shortcut_x1, Y, kColorPurple, true);
  return g;
}

std::string run_config_to_json(const RunConfig& c) {
  json j;
  j["format_version"] = 1;
  j["seed"] = c.seed;
  j["out_dir"] = c.out_dir;
  j["geometry"] = {{"entrance_x0", c.geometry.entrance_x0},
                   {"entrance_x1", c.geometry.entrance_x1},
                   {"shortcut_x0", c.geometry.shortcut_x0},
                   {"shortcut_x1", c.geometry.shortcut_x1},
                   {"goal_x0", c.geometry.goal_x0},
                   {"goal_y0", c.geometry.goal_y0},
                   {"goal_x1", c.geometry.goal_x1},
                   {"goal_y1", c.geometry.goal_y1}};
  j["env"] = {{"p", c.env.p},
              {"max_steps", c.env.max_steps},
              {"move_dist", c.env.move_dist},
              {"turn_angle", c.env.turn_angle},
              {"gamma", c.env.gamma},
              {"n_rays", c.env.n_rays},
              {"fov", c.env.fov},
              {"start_y_max", c.env.start_y_max}};
  j["net"] = {{"input_dim", c.net.input_dim},
              {"layer_width", c.net.layer_width},
              {"n_shared_ff", c.net.n_shared_ff},
              {"n_actions", c.net.n_actions}};
  j["ppo"] = {{"clip_ratio", c.ppo.clip_ratio},
              {"learning_rate", c.ppo.learning_rate},
              {"gae_lambda", c.ppo.gae_lambda},
              {"rollout_length", c.ppo.rollout_length},
              {"n_envs", c.ppo.n_envs},
              {"epochs", c.ppo.epochs},
              {"n_minibatches", c.ppo.n_minibatches},
              {"value_coef", c.ppo.value_coef},
              {"entropy_coef", c.ppo.entropy_coef},
              {"max_grad_norm", c.ppo.max_grad_norm},
              {"total_post_shift_steps", c.ppo.total_post_shift_steps},
              {"max_raw_steps", c.ppo.max_raw_steps}};
  j["schedule"] = {{"n_checkpoints", c.schedule.n_checkpoints},
                   {"onset_window", c.schedule.onset_window},
                   {"onset_threshold", c.schedule.onset_threshold}};
  j["eval"] = {{"suite_seed", c.eval.suite_seed},
               {"n_episodes", c.eval.n_episodes},
               {"greedy", c.eval.greedy},
               {"action_seed", c.eval.action_seed}};
  j["analysis"] = {{"heatmap_sigma", c.analysis.heatmap_sigma},
                   {"kmeans_k", c.analysis.kmeans_k},
                   {"kmeans_restarts", c.analysis.kmeans_restarts},
                   {"subsample_cap", c.analysis.subsample_cap},
                   {"d_subsample_cap", c.analysis.d_subsample_cap},
                   {"landmark_threshold", c.analysis.landmark_threshold},
                   {"landmark_abs_sum", c.analysis.landmark_abs_sum}};
  return j.dump(2);
}

RunConfig run_config_from_json(const std::string& text) {
  json j = json::parse(text);
  if (j.value("format_version", 0) != 1) {
    throw std::runtime_error("run config: unsupported format_version");
  }
  RunConfig c;
  c.seed = j.at("seed").get<uint64_t>();
  c.out_dir = j.value("out_dir", c.out_dir);
  auto get = [](const json& o, const char* k, auto& dst) {
    if (o.contains(k)) dst = o.at(k).get<std::decay_t<decltype(dst)>>();
  };
  if (j.contains("geometry")) {
    const auto& g = j["geometry"];
    get(g, "entrance_x0", c.geometry.entrance_x0);
    get(g, "entrance_x1", c.geometry.entrance_x1);
    get(g, "shortcut_x0", c.geometry.shortcut_x0);
    get(g, "shortcut_x1", c.geometry.shortcut_x1);
    get(g, "goal_x0", c.geometry.goal_x0);
    get(g, "goal_y0", c.geometry.goal_y0);
    get(g, "goal_x1", c.geometry.goal_x1);
    get(g, "goal_y1", c.geometry.goal_y1);
  }
  if (j.contains("env")) {
    const auto& e = j["env"];
    get(e, "p", c.env.p);
    get(e, "max_steps", c.env.max_steps);
    get(e, "move_dist", c.env.move_dist);
    get(e, "turn_angle", c.env.turn_angle);
    get(e, "gamma", c.env.gamma);
    get(e, "n_rays", c.env.n_rays);
    get(e, "fov", c.env.fov);
    get(e, "start_y_max", c.env.start_y_max);
  }
  if (j.contains("net")) {
    const auto& n = j["net"];
    get(n, "input_dim", c.net.input_dim);
    get(n, "layer_width", c.net.layer_width);
    get(n, "n_shared_ff", c.net.n_shared_ff);
    get(n, "n_actions", c.net.n_actions);
  }
  if (j.contains("ppo")) {
    const auto& p = j["ppo"];
    get(p, "clip_ratio", c.ppo.clip_ratio);
    get(p, "learning_rate", c.ppo.learning_rate);
    get(p, "gae_lambda", c.ppo.gae_lambda);
    get(p, "rollout_length", c.ppo.rollout_length);
    get(p, "n_envs", c.ppo.n_envs);
    get(p, "epochs", c.ppo.epochs);
    get(p, "n_minibatches", c.ppo.n_minibatches);
    get(p, "value_coef", c.ppo.value_coef);
    get(p, "entropy_coef", c.ppo.entropy_coef);
    get(p, "max_grad_norm", c.ppo.max_grad_norm);
    get(p, "total_post_shift_steps", c.ppo.total_post_shift_steps);
    get(p, "max_raw_steps", c.ppo.max_raw_steps);
  }
  if (j.contains("schedule")) {
    const auto& s = j["schedule"];
    get(s, "n_checkpoints", c.schedule.n_checkpoints);
    get(s, "onset_window", c.schedule.onset_window);
    get(s, "onset_threshold", c.schedule.onset_threshold);
  }
  if (j.contains("eval")) {
    const auto& e = j["eval"];
    get(e, "suite_seed", c.eval.suite_seed);
    get(e, "n_episodes", c.eval.n_episodes);
    get(e, "greedy", c.eval.greedy);
    get(e, "action_seed", c.eval.action_seed);
  }
  if (j.contains("analysis")) {
    const auto& a = j["analysis"];
    get(a, "heatmap_sigma", c.analysis.heatmap_sigma);
    get(a, "kmeans_k", c.analysis.kmeans_k);
    get(a, "kmeans_restarts", c.analysis.kmeans_restarts);
    get(a, "subsample_cap", c.analysis.subsample_cap);
    get(a, "d_subsample_cap", c.analysis.d_subsample_cap);
    get(a, "landmark_threshold", c.analysis.landmark_threshold);
    get(a, "landmark_abs_sum", c.analysis.landmark_abs_sum);
  }
  return c;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return run_config_from_json(text);
}

void save_run_config(const RunConfig& cfg, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write config: " + path);
  out << run_config_to_json(cfg) << "\n";
}

}  // namespace navrep
