#pragma once

#include <optional>
#include <string>
#include <vector>

#include "navrep/heatmap.hpp"
#include "navrep/kmeans.hpp"
#include "navrep/run_config.hpp"
#include "navrep/separation.hpp"

namespace navrep {

ActivationTrace merge_traces(const ActivationTrace& a,
                             const ActivationTrace& b);

// One standardized heatmap per recurrent node from a trace.
std::vector<Heatmap> node_heatmaps(const ActivationTrace& trace,
                                   const AnalysisConfig& cfg,
                                   ModeFilter filter = ModeFilter::All);

std::vector<double> per_node_local_variance(const std::vector<Heatmap>& maps);

// Landmark sensitivity per node from closed-mode vs open-mode heatmaps.
std::vector<double> per_node_landmark_scores(const ActivationTrace& open_trace,
                                             const ActivationTrace& closed_trace,
                                             const AnalysisConfig& cfg);

std::vector<int> cue_node_mask(const std::vector<double>& landmark_scores,
                               double threshold, bool sensitive);

// All per-checkpoint scalar scores emitted into scores.csv.
struct CheckpointScores {
  int index = 0;
  long post_shift_steps = 0;
  double mean_ep_len_closed = 0.0;
  double mean_ep_len_open = 0.0;
  double use_rate = 0.0;
  double mean_local_variance = 0.0;
  double mean_landmark = 0.0;
  int n_cue_nodes = 0;
  double sep_policy = 0.0;
  double sep_open_only = 0.0;
  std::optional<double> sep_prescribed;
  std::optional<double> sep_cue;
  std::optional<double> sep_noncue;
};

// Computes every score for one checkpoint from its recorded traces.
// `prescribed_trace` is optional (present when a schedule was replayed).
CheckpointScores score_checkpoint(
    int index, long post_shift_steps, const ActivationTrace& open_trace,
    const ActivationTrace& closed_trace,
    const ActivationTrace* prescribed_trace, const MazeGeometry& geo,
    const AnalysisConfig& cfg);

void save_scores_csv(const std::vector<CheckpointScores>& scores,
                     const std::string& path);

// Cluster labeling frequencies (positive/negative pairs merged) per group,
// where group g contributed heatmaps [offsets[g], offsets[g+1]).
std::vector<std::vector<double>> cluster_frequencies(
    const ClusterModel& model, const std::vector<size_t>& offsets);

}  // namespace navrep
