#include "navrep/score_tables.hpp"

#include <fstream>
#include <stdexcept>

namespace navrep {

ActivationTrace merge_traces(const ActivationTrace& a,
                             const ActivationTrace& b) {
  ActivationTrace out = a;
  out.rows.insert(out.rows.end(), b.rows.begin(), b.rows.end());
  out.episodes.insert(out.episodes.end(), b.episodes.begin(),
                      b.episodes.end());
  return out;
}

std::vector<Heatmap> node_heatmaps(const ActivationTrace& trace,
                                   const AnalysisConfig& cfg,
                                   ModeFilter filter) {
  if (trace.rows.empty()) {
    throw std::invalid_argument("node_heatmaps: empty trace");
  }
  const long n_nodes = trace.rows[0].activations.size();
  HeatmapParams hp;
  hp.sigma = cfg.heatmap_sigma;
  std::vector<Heatmap> maps;
  maps.reserve(n_nodes);
  for (long node = 0; node < n_nodes; ++node) {
    Heatmap m = spatial_heatmap(
        trace_samples(trace, static_cast<int>(node), filter), hp);
    m.node_id = static_cast<int>(node);
    maps.push_back(std::move(m));
  }
  return maps;
}

std::vector<double> per_node_local_variance(const std::vector<Heatmap>& maps) {
  std::vector<double> out;
  out.reserve(maps.size());
  for (const auto& m : maps) out.push_back(mean_local_variance(m));
  return out;
}

namespace {

double abs_sum_landmark(const Heatmap& h_closed, const Heatmap& h_open) {
  double s = 0.0;
  int n_joint = 0;
  for (int ix = 0; ix < kHeatmapGrid; ++ix) {
    for (int iy = 0; iy < kHeatmapGrid; ++iy) {
      if (h_closed.valid(ix, iy) && h_open.valid(ix, iy)) {
        s += std::abs(h_closed.values(ix, iy) - h_open.values(ix, iy));
        ++n_joint;
      }
    }
  }
  if (n_joint == 0) return 0.0;
  return s * (kHeatmapGrid * kHeatmapGrid) / n_joint;
}

}  // namespace

std::vector<double> per_node_landmark_scores(const ActivationTrace& open_trace,
                                             const ActivationTrace& closed_trace,
                                             const AnalysisConfig& cfg) {
  std::vector<Heatmap> open_maps = node_heatmaps(open_trace, cfg);
  std::vector<Heatmap> closed_maps = node_heatmaps(closed_trace, cfg);
  std::vector<double> scores;
  scores.reserve(open_maps.size());
  for (size_t i = 0; i < open_maps.size(); ++i) {
    scores.push_back(cfg.landmark_abs_sum
                         ? abs_sum_landmark(closed_maps[i], open_maps[i])
                         : landmark_sensitivity(closed_maps[i], open_maps[i]));
  }
  return scores;
}

std::vector<int> cue_node_mask(const std::vector<double>& landmark_scores,
                               double threshold, bool sensitive) {
  std::vector<int> mask;
  for (size_t i = 0; i < landmark_scores.size(); ++i) {
    if ((landmark_scores[i] > threshold) == sensitive) {
      mask.push_back(static_cast<int>(i));
    }
  }
  return mask;
}

namespace {

std::vector<Eigen::VectorXd> all_activations(const ActivationTrace& trace) {
  std::vector<Eigen::VectorXd> out;
  out.reserve(trace.rows.size());
  for (const auto& r : trace.rows) out.push_back(r.activations);
  return out;
}

std::optional<double> separation_or_nullopt(const TrajectorySets& sets,
                                            const std::vector<Eigen::VectorXd>& all,
                                            const SeparationParams& params) {
  if (sets.pre_entrance.empty() || sets.pre_shortcut.empty()) {
    return std::nullopt;
  }
  return wasserstein_separation(sets.pre_entrance, sets.pre_shortcut, all,
                                params)
      .w;
}

}  // namespace

CheckpointScores score_checkpoint(
    int index, long post_shift_steps, const ActivationTrace& open_trace,
    const ActivationTrace& closed_trace,
    const ActivationTrace* prescribed_trace, const MazeGeometry& geo,
    const AnalysisConfig& cfg) {
  CheckpointScores s;
  s.index = index;
  s.post_shift_steps = post_shift_steps;
  s.mean_ep_len_open = open_trace.mean_episode_length();
  s.mean_ep_len_closed = closed_trace.mean_episode_length();
  s.use_rate = shortcut_use_rate(open_trace);

  const ActivationTrace merged = merge_traces(open_trace, closed_trace);
  std::vector<Heatmap> maps = node_heatmaps(merged, cfg);
  const std::vector<double> lv = per_node_local_variance(maps);
  double lv_sum = 0.0;
  for (double v : lv) lv_sum += v;
  s.mean_local_variance = lv.empty() ? 0.0 : lv_sum / lv.size();

  const std::vector<double> landmark =
      per_node_landmark_scores(open_trace, closed_trace, cfg);
  double lm_sum = 0.0;
  for (double v : landmark) lm_sum += v;
  s.mean_landmark = landmark.empty() ? 0.0 : lm_sum / landmark.size();
  s.n_cue_nodes = static_cast<int>(
      cue_node_mask(landmark, cfg.landmark_threshold, true).size());

  SeparationParams sp;
  sp.subsample_cap = cfg.subsample_cap;
  sp.d_subsample_cap = cfg.d_subsample_cap;

  const std::vector<Eigen::VectorXd> all_merged = all_activations(merged);
  const TrajectorySets policy_sets = build_trajectory_sets(merged, geo);
  s.sep_policy =
      separation_or_nullopt(policy_sets, all_merged, sp).value_or(0.0);

  const TrajectorySets open_sets =
      build_trajectory_sets(merged, geo, /*open_episodes_only=*/true);
  s.sep_open_only =
      separation_or_nullopt(open_sets, all_merged, sp).value_or(0.0);

  if (prescribed_trace != nullptr) {
    const TrajectorySets presc_sets =
        build_trajectory_sets(*prescribed_trace, geo,
                              /*open_episodes_only=*/true);
    s.sep_prescribed = separation_or_nullopt(
        presc_sets, all_activations(*prescribed_trace), sp);
  }

  SeparationParams cue_params = sp;
  cue_params.node_mask = cue_node_mask(landmark, cfg.landmark_threshold, true);
  if (!cue_params.node_mask.empty()) {
    s.sep_cue = separation_or_nullopt(open_sets, all_merged, cue_params);
  }
  SeparationParams noncue_params = sp;
  noncue_params.node_mask =
      cue_node_mask(landmark, cfg.landmark_threshold, false);
  if (!noncue_params.node_mask.empty()) {
    s.sep_noncue = separation_or_nullopt(open_sets, all_merged, noncue_params);
  }
  return s;
}

void save_scores_csv(const std::vector<CheckpointScores>& scores,
                     const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write: " + path);
  out << "# navrep scores v1\n";
  out << "checkpoint,post_shift_steps,mean_ep_len_closed,mean_ep_len_open,"
         "use_rate,mean_local_variance,mean_landmark,n_cue_nodes,sep_policy,"
         "sep_open_only,sep_prescribed,sep_cue,sep_noncue\n";
  auto opt = [](const std::optional<double>& v) {
    return v ? std::to_string(*v) : std::string("");
  };
  for (const auto& s : scores) {
    out << s.index << ',' << s.post_shift_steps << ',' << s.mean_ep_len_closed
        << ',' << s.mean_ep_len_open << ',' << s.use_rate << ','
        << s.mean_local_variance << ',' << s.mean_landmark << ','
        << s.n_cue_nodes << ',' << s.sep_policy << ',' << s.sep_open_only
        << ',' << opt(s.sep_prescribed) << ',' << opt(s.sep_cue) << ','
        << opt(s.sep_noncue) << "\n";
  }
}

std::vector<std::vector<double>> cluster_frequencies(
    const ClusterModel& model, const std::vector<size_t>& offsets) {
  // Map each center to its pair id so positive/negative labels merge.
  std::vector<int> pair_of(model.centers.size(), -1);
  for (size_t p = 0; p < model.pairs.size(); ++p) {
    pair_of[model.pairs[p].first] = static_cast<int>(p);
    pair_of[model.pairs[p].second] = static_cast<int>(p);
  }
  const size_t n_groups = offsets.size() - 1;
  std::vector<std::vector<double>> freq(
      n_groups, std::vector<double>(model.pairs.size(), 0.0));
  for (size_t g = 0; g < n_groups; ++g) {
    const size_t n = offsets[g + 1] - offsets[g];
    for (size_t i = offsets[g]; i < offsets[g + 1]; ++i) {
      freq[g][pair_of[model.labels[i]]] += 1.0;
    }
    if (n > 0) {
      for (double& f : freq[g]) f /= static_cast<double>(n);
    }
  }
  return freq;
}

}  // namespace navrep
