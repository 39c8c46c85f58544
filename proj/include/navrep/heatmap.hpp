#pragma once

#include <Eigen/Dense>
#include <vector>

#include "navrep/evaluation.hpp"

namespace navrep {

constexpr int kHeatmapGrid = 30;

// Standardized 30x30 spatial activation map of one recurrent node.
// values(ix, iy) covers the cell centered at ((ix+0.5), (iy+0.5)) * cell_size.
struct Heatmap {
  int node_id = -1;
  Eigen::MatrixXd values{kHeatmapGrid, kHeatmapGrid};
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> valid{kHeatmapGrid,
                                                            kHeatmapGrid};
  bool standardized = false;
  bool degenerate = false;  // pre-standardization variance ~ 0

  int n_valid() const;
  // Flattened 900-vector with invalid cells imputed as 0 (the standardized
  // mean), used for clustering.
  Eigen::VectorXd flatten() const;
};

struct HeatmapSample {
  double x = 0.0;
  double y = 0.0;
  double activation = 0.0;
};

struct HeatmapParams {
  double sigma = 15.0;        // Gaussian bandwidth in world units
  double cutoff_sigmas = 3.0;
  double arena_size = 300.0;
  double min_weight = 1e-6;   // cells below this total weight are invalid
};

// Gaussian-weighted spatial average of the samples, then standardized to
// zero mean / unit variance over the valid cells.
Heatmap spatial_heatmap(const std::vector<HeatmapSample>& samples,
                        const HeatmapParams& params = {});

// Pulls one node's samples out of a trace, optionally filtering by mode.
enum class ModeFilter { All, OpenOnly, ClosedOnly };
std::vector<HeatmapSample> trace_samples(const ActivationTrace& trace,
                                         int node_id,
                                         ModeFilter filter = ModeFilter::All);

// Mean population standard deviation over all fully interior 5x5 windows;
// windows touching invalid cells are skipped.
double mean_local_variance(const Heatmap& map, int window = 5);

// Root-sum-square of the pixel-wise difference over jointly valid cells,
// rescaled to the full 900-cell count when cells are missing.
double landmark_sensitivity(const Heatmap& h_closed, const Heatmap& h_open);

}  // namespace navrep
