// navrep: train recurrent PPO agents in the shortcut maze, evaluate and
// replay them, and run the spatial-representation analyses over recorded
// activation traces.
#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "navrep/pca.hpp"
#include "navrep/score_tables.hpp"
#include "navrep/train.hpp"

namespace fs = std::filesystem;
using namespace navrep;

namespace {

struct CommonOpts {
  std::string config_path;
  std::optional<uint64_t> seed;
  std::optional<double> p;
  std::string out;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path,
                  "Run configuration JSON (defaults used when omitted)");
  cmd->add_option("--seed", opts.seed, "Override the configured seed");
  cmd->add_option("--p", opts.p,
                  "Override the shortcut-open probability")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--out", opts.out, "Override the output directory");
}

RunConfig resolve_config(const CommonOpts& opts) {
  RunConfig cfg;
  if (!opts.config_path.empty()) cfg = load_run_config(opts.config_path);
  if (opts.seed) cfg.seed = *opts.seed;
  if (opts.p) cfg.env.p = *opts.p;
  if (!opts.out.empty()) cfg.out_dir = opts.out;
  // NAVREP_OUT_ROOT re-roots relative output directories.
  if (const char* root = std::getenv("NAVREP_OUT_ROOT");
      root != nullptr && *root != '\0' &&
      !fs::path(cfg.out_dir).is_absolute()) {
    cfg.out_dir = (fs::path(root) / cfg.out_dir).string();
  }
  return cfg;
}

ActivationTrace load_trace_checked(const std::string& base) {
  if (!fs::exists(base + ".csv")) {
    throw std::runtime_error("trace not found: " + base + ".csv");
  }
  return load_trace(base);
}

int run_train(const CommonOpts& opts) {
  const RunConfig cfg = resolve_config(opts);
  const TrainResult res = train(cfg);
  std::cout << "out_dir: " << cfg.out_dir << "\n"
            << "onset_reached: " << (res.onset_reached ? "yes" : "no") << "\n"
            << "onset_step: " << res.onset_step << "\n"
            << "total_env_steps: " << res.total_env_steps << "\n"
            << "checkpoints: " << res.checkpoints.size() << "\n";
  if (!res.onset_reached) {
    std::cerr << "warning: learning onset not reached within the step budget\n";
  }
  return 0;
}

int run_eval(const CommonOpts& opts, const std::string& ckpt_path,
             const std::string& mode) {
  const RunConfig cfg = resolve_config(opts);
  const MazeGeometry geo = cfg.make_geometry();
  const Checkpoint ckpt = load_checkpoint(ckpt_path);
  const EvalSuite suite =
      make_eval_suite(cfg.eval.suite_seed, geo, cfg.env, cfg.eval.n_episodes);
  ensure_dir(cfg.out_dir);
  save_suite(suite, cfg.out_dir + "/suite.json");

  EvalOptions eo;
  eo.greedy = cfg.eval.greedy;
  eo.action_seed = cfg.eval.action_seed;

  const bool do_open = mode.empty() || mode == "open";
  const bool do_closed = mode.empty() || mode == "closed";
  if (do_open) {
    const ActivationTrace t =
        run_eval(ckpt.weights, geo, cfg.env, suite, true, eo);
    save_trace(t, cfg.out_dir + "/trace_open");
    std::cout << "open: mean_episode_length=" << t.mean_episode_length()
              << " use_rate=" << shortcut_use_rate(t) << "\n";
  }
  if (do_closed) {
    const ActivationTrace t =
        run_eval(ckpt.weights, geo, cfg.env, suite, false, eo);
    save_trace(t, cfg.out_dir + "/trace_closed");
    std::cout << "closed: mean_episode_length=" << t.mean_episode_length()
              << "\n";
  }
  return 0;
}

int run_prescribe(const CommonOpts& opts, const std::string& ckpt_path,
                  const std::string& prescribed) {
  const RunConfig cfg = resolve_config(opts);
  const MazeGeometry geo = cfg.make_geometry();
  const Checkpoint ckpt = load_checkpoint(ckpt_path);
  ensure_dir(cfg.out_dir);

  if (prescribed.empty()) {
    // Record: run the suite in both modes and save the action schedule.
    const EvalSuite suite =
        make_eval_suite(cfg.eval.suite_seed, geo, cfg.env, cfg.eval.n_episodes);
    EvalOptions eo;
    eo.greedy = cfg.eval.greedy;
    eo.action_seed = cfg.eval.action_seed;
    const ActivationTrace open_t =
        run_eval(ckpt.weights, geo, cfg.env, suite, true, eo);
    const ActivationTrace closed_t =
        run_eval(ckpt.weights, geo, cfg.env, suite, false, eo);
    ActionSchedule sched = make_action_schedule(open_t, closed_t, suite);
    sched.source_use_rate = shortcut_use_rate(open_t);
    save_schedule(sched, cfg.out_dir + "/schedule.json");
    std::cout << "recorded schedule: " << sched.episodes.size()
              << " episodes, source use_rate=" << sched.source_use_rate
              << "\n";
  } else {
    // Replay a previously recorded schedule through this network.
    const ActionSchedule sched = load_schedule(prescribed);
    const ActivationTrace t =
        replay_prescribed(ckpt.weights, geo, cfg.env, sched);
    save_trace(t, cfg.out_dir + "/trace_prescribed");
    std::cout << "replayed " << sched.episodes.size() << " episodes, "
              << t.rows.size() << " rows\n";
  }
  return 0;
}

std::vector<int> subset_mask(const std::string& subset, const RunConfig& cfg,
                             const std::string& trace_open,
                             const std::string& trace_closed) {
  if (subset == "all") return {};
  const ActivationTrace open_t = load_trace_checked(trace_open);
  const ActivationTrace closed_t = load_trace_checked(trace_closed);
  const std::vector<double> scores =
      per_node_landmark_scores(open_t, closed_t, cfg.analysis);
  const std::vector<int> mask = cue_node_mask(
      scores, cfg.analysis.landmark_threshold, subset == "cue");
  if (mask.empty()) {
    throw std::runtime_error("subset '" + subset + "' selects no nodes");
  }
  return mask;
}

int run_analyze(const CommonOpts& opts, const std::string& analysis,
                const std::string& trace_base, const std::string& trace_open,
                const std::string& trace_closed, const std::string& subset) {
  const RunConfig cfg = resolve_config(opts);
  const MazeGeometry geo = cfg.make_geometry();
  ensure_dir(cfg.out_dir);

  if (analysis == "heatmap") {
    const ActivationTrace trace = load_trace_checked(trace_base);
    const std::vector<Heatmap> maps = node_heatmaps(trace, cfg.analysis);
    std::ostringstream csv;
    csv << "# navrep heatmaps v1\n"
        << "node,degenerate,n_valid\n";
    for (const Heatmap& m : maps) {
      csv << m.node_id << ',' << (m.degenerate ? 1 : 0) << ',' << m.n_valid()
          << "\n";
      char name[32];
      std::snprintf(name, sizeof(name), "/heatmap_node_%02d.ppm", m.node_id);
      save_ppm(heatmap_image(m), cfg.out_dir + name);
    }
    write_text_file(cfg.out_dir + "/heatmaps.csv", csv.str());
    std::cout << "wrote " << maps.size() << " heatmaps to " << cfg.out_dir
              << "\n";
  } else if (analysis == "localvar") {
    const ActivationTrace trace = load_trace_checked(trace_base);
    const std::vector<double> lv =
        per_node_local_variance(node_heatmaps(trace, cfg.analysis));
    std::ostringstream csv;
    csv << "# navrep localvar v1\n" << "node,local_variance\n";
    double sum = 0.0;
    for (size_t i = 0; i < lv.size(); ++i) {
      csv << i << ',' << lv[i] << "\n";
      sum += lv[i];
    }
    write_text_file(cfg.out_dir + "/localvar.csv", csv.str());
    std::cout << "mean local variance: " << sum / lv.size() << "\n";
  } else if (analysis == "kmeans") {
    const ActivationTrace trace = load_trace_checked(trace_base);
    const std::vector<Heatmap> maps = node_heatmaps(trace, cfg.analysis);
    std::vector<Eigen::VectorXd> flat;
    for (const Heatmap& m : maps) flat.push_back(m.flatten());
    Rng rng(cfg.seed);
    ClusterModel model =
        kmeans_cluster(flat, cfg.analysis.kmeans_k, cfg.analysis.kmeans_restarts,
                       rng);
    pair_negatives(model);
    std::ostringstream csv;
    csv << "# navrep kmeans v1\n" << "node,cluster\n";
    for (size_t i = 0; i < model.labels.size(); ++i) {
      csv << i << ',' << model.labels[i] << "\n";
    }
    csv << "# pairs (cluster_a,cluster_b,residual)\n";
    for (size_t p = 0; p < model.pairs.size(); ++p) {
      csv << model.pairs[p].first << ',' << model.pairs[p].second << ','
          << model.pair_residuals[p] << "\n";
    }
    write_text_file(cfg.out_dir + "/kmeans.csv", csv.str());
    std::cout << "inertia: " << model.inertia << ", pairs: "
              << model.pairs.size() << "\n";
  } else if (analysis == "landmark") {
    const ActivationTrace open_t = load_trace_checked(trace_open);
    const ActivationTrace closed_t = load_trace_checked(trace_closed);
    const std::vector<double> scores =
        per_node_landmark_scores(open_t, closed_t, cfg.analysis);
    std::ostringstream csv;
    csv << "# navrep landmark v1\n" << "node,landmark_score,cue_sensitive\n";
    double sum = 0.0;
    int n_cue = 0;
    for (size_t i = 0; i < scores.size(); ++i) {
      const bool cue = scores[i] > cfg.analysis.landmark_threshold;
      csv << i << ',' << scores[i] << ',' << (cue ? 1 : 0) << "\n";
      sum += scores[i];
      if (cue) ++n_cue;
    }
    write_text_file(cfg.out_dir + "/landmark.csv", csv.str());
    std::cout << "mean landmark score: " << sum / scores.size()
              << ", cue nodes: " << n_cue << "\n";
  } else if (analysis == "separation") {
    const ActivationTrace trace = load_trace_checked(trace_base);
    const TrajectorySets sets = build_trajectory_sets(trace, geo);
    if (sets.pre_entrance.empty() || sets.pre_shortcut.empty()) {
      throw std::runtime_error(
          "separation needs both pre-entrance and pre-shortcut rows");
    }
    SeparationParams params;
    params.subsample_cap = cfg.analysis.subsample_cap;
    params.d_subsample_cap = cfg.analysis.d_subsample_cap;
    params.node_mask = subset_mask(subset, cfg, trace_open, trace_closed);
    std::vector<Eigen::VectorXd> all;
    for (const auto& r : trace.rows) all.push_back(r.activations);
    const SeparationScore s = wasserstein_separation(
        sets.pre_entrance, sets.pre_shortcut, all, params);
    std::ostringstream csv;
    csv << "# navrep separation v1\n"
        << "subset,w,w_raw,n_pairs,d_max\n"
        << subset << ',' << s.w << ',' << s.w_raw << ',' << s.n_pairs << ','
        << s.d_max << "\n";
    write_text_file(cfg.out_dir + "/separation.csv", csv.str());
    std::cout << "separation (" << subset << "): " << s.w << "\n";
  } else {
    throw std::runtime_error("unknown analysis: " + analysis);
  }
  return 0;
}

int run_plot(const CommonOpts& opts, const std::string& run_dir) {
  const RunConfig cfg = resolve_config(opts);
  const std::string dir = run_dir.empty() ? cfg.out_dir : run_dir;
  ensure_dir(dir);
  int emitted = 0;

  if (fs::exists(dir + "/curve.csv")) {
    const LearningCurve curve = load_curve(dir + "/curve.csv");
    std::vector<std::pair<double, double>> pts;
    for (size_t i = 0; i < curve.size(); ++i) {
      pts.emplace_back(static_cast<double>(curve.cum_steps[i]),
                       static_cast<double>(curve.episode_lengths[i]));
    }
    save_ppm(line_plot({pts}), dir + "/learning_curve.ppm");
    ++emitted;
  }

  if (fs::exists(dir + "/scores.csv")) {
    // Columns: checkpoint index vs closed/open episode length, use rate and
    // the separation scores (the Fig-3/Fig-11 style panels).
    std::ifstream in(dir + "/scores.csv");
    std::string line;
    std::getline(in, line);  // version header
    std::getline(in, line);  // column header
    std::vector<std::pair<double, double>> len_closed, len_open, use_rate,
        sep_policy;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::stringstream ss(line);
      std::vector<std::string> cells;
      std::string cell;
      while (std::getline(ss, cell, ',')) cells.push_back(cell);
      if (cells.size() < 10) continue;
      const double x = std::stod(cells[1]);  // post-shift steps
      len_closed.emplace_back(x, std::stod(cells[2]));
      len_open.emplace_back(x, std::stod(cells[3]));
      use_rate.emplace_back(x, std::stod(cells[4]));
      sep_policy.emplace_back(x, std::stod(cells[8]));
    }
    save_ppm(line_plot({len_closed, len_open}), dir + "/episode_length.ppm");
    save_ppm(line_plot({use_rate}), dir + "/use_rate.ppm");
    save_ppm(line_plot({sep_policy}), dir + "/separation_vs_training.ppm");
    emitted += 3;
  }

  if (fs::exists(dir + "/trace_open.csv")) {
    const ActivationTrace trace = load_trace(dir + "/trace_open");
    if (!trace.rows.empty()) {
      const std::vector<Heatmap> maps = node_heatmaps(trace, cfg.analysis);
      save_ppm(heatmap_image(maps[0]), dir + "/heatmap_node_00.ppm");
      ++emitted;

      // 2D projection of the activation cloud, grouped by wall side.
      const MazeGeometry geo = cfg.make_geometry();
      std::vector<Eigen::VectorXd> pts;
      for (const auto& r : trace.rows) pts.push_back(r.activations);
      const Pca2d pca = project_2d(pts);
      std::vector<std::vector<std::pair<double, double>>> groups(2);
      for (size_t i = 0; i < pts.size(); ++i) {
        const int g = trace.rows[i].y < geo.long_wall_y ? 0 : 1;
        groups[g].emplace_back(pca.projected(i, 0), pca.projected(i, 1));
      }
      save_ppm(scatter_plot(groups), dir + "/projection_2d.ppm");
      ++emitted;
    }
  }

  if (emitted == 0) {
    throw std::runtime_error("no plottable artifacts found in " + dir);
  }
  std::cout << "wrote " << emitted << " images to " << dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Recurrent-PPO shortcut-maze workbench"};
  app.require_subcommand(1);

  CommonOpts train_opts, eval_opts, presc_opts, ana_opts, plot_opts;
  std::string ckpt_path, mode, prescribed, analysis, subset = "all";
  std::string trace_base = "trace_open", trace_open = "trace_open",
              trace_closed = "trace_closed", plot_dir;

  CLI::App* train_cmd =
      app.add_subcommand("train", "Train an agent and write checkpoints");
  add_common(train_cmd, train_opts);

  CLI::App* eval_cmd =
      app.add_subcommand("eval", "Run the evaluation suite on a checkpoint");
  add_common(eval_cmd, eval_opts);
  eval_cmd->add_option("--checkpoint", ckpt_path, "Checkpoint file")
      ->required();
  eval_cmd->add_option("--mode", mode, "open or closed (default: both)")
      ->check(CLI::IsMember({"open", "closed"}));

  CLI::App* presc_cmd = app.add_subcommand(
      "prescribe", "Record an action schedule, or replay one with --prescribed");
  add_common(presc_cmd, presc_opts);
  presc_cmd->add_option("--checkpoint", ckpt_path, "Checkpoint file")
      ->required();
  presc_cmd->add_option("--prescribed", prescribed,
                        "Schedule JSON to replay through this checkpoint");

  CLI::App* ana_cmd =
      app.add_subcommand("analyze", "Representation analyses over traces");
  add_common(ana_cmd, ana_opts);
  ana_cmd->add_option("--analysis", analysis, "Which analysis to run")
      ->required()
      ->check(CLI::IsMember(
          {"heatmap", "localvar", "kmeans", "landmark", "separation"}));
  ana_cmd->add_option("--trace", trace_base,
                      "Trace base path (no .csv suffix), relative to --out");
  ana_cmd->add_option("--trace-open", trace_open,
                      "Open-mode trace base path, relative to --out");
  ana_cmd->add_option("--trace-closed", trace_closed,
                      "Closed-mode trace base path, relative to --out");
  ana_cmd->add_option("--subset", subset, "Node subset for separation")
      ->check(CLI::IsMember({"all", "cue", "noncue"}));

  CLI::App* plot_cmd =
      app.add_subcommand("plot", "Emit figure-style images for a run");
  add_common(plot_cmd, plot_opts);
  plot_cmd->add_option("--run", plot_dir,
                       "Run directory to plot (default: --out)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (train_cmd->parsed()) return run_train(train_opts);
    if (eval_cmd->parsed()) return run_eval(eval_opts, ckpt_path, mode);
    if (presc_cmd->parsed())
      return run_prescribe(presc_opts, ckpt_path, prescribed);
    if (ana_cmd->parsed()) {
      const RunConfig cfg = resolve_config(ana_opts);
      const auto rel = [&cfg](const std::string& p) {
        return fs::path(p).is_absolute() ? p : cfg.out_dir + "/" + p;
      };
      return run_analyze(ana_opts, analysis, rel(trace_base), rel(trace_open),
                         rel(trace_closed), subset);
    }
    if (plot_cmd->parsed()) return run_plot(plot_opts, plot_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
