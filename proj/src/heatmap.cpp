#include "navrep/heatmap.hpp"

#include <cmath>
#include <stdexcept>

namespace navrep {

int Heatmap::n_valid() const {
  int n = 0;
  for (int i = 0; i < valid.rows(); ++i) {
    for (int j = 0; j < valid.cols(); ++j) {
      if (valid(i, j)) ++n;
    }
  }
  return n;
}

Eigen::VectorXd Heatmap::flatten() const {
  Eigen::VectorXd v(kHeatmapGrid * kHeatmapGrid);
  int k = 0;
  for (int ix = 0; ix < kHeatmapGrid; ++ix) {
    for (int iy = 0; iy < kHeatmapGrid; ++iy, ++k) {
      v(k) = valid(ix, iy) ? values(ix, iy) : 0.0;
    }
  }
  return v;
}

Heatmap spatial_heatmap(const std::vector<HeatmapSample>& samples,
                        const HeatmapParams& params) {
  if (samples.empty()) {
    throw std::invalid_argument("spatial_heatmap: no samples");
  }
  Heatmap map;
  const double cell = params.arena_size / kHeatmapGrid;
  const double cutoff = params.cutoff_sigmas * params.sigma;
  const double cutoff2 = cutoff * cutoff;
  const double inv2s2 = 1.0 / (2.0 * params.sigma * params.sigma);

  Eigen::MatrixXd wsum = Eigen::MatrixXd::Zero(kHeatmapGrid, kHeatmapGrid);
  Eigen::MatrixXd asum = Eigen::MatrixXd::Zero(kHeatmapGrid, kHeatmapGrid);
  for (const auto& s : samples) {
    // Only cells within the cutoff radius of the sample are touched.
    const int ix0 = std::max(0, static_cast<int>((s.x - cutoff) / cell));
    const int ix1 = std::min(kHeatmapGrid - 1,
                             static_cast<int>((s.x + cutoff) / cell));
    const int iy0 = std::max(0, static_cast<int>((s.y - cutoff) / cell));
    const int iy1 = std::min(kHeatmapGrid - 1,
                             static_cast<int>((s.y + cutoff) / cell));
    for (int ix = ix0; ix <= ix1; ++ix) {
      const double cx = (ix + 0.5) * cell;
      for (int iy = iy0; iy <= iy1; ++iy) {
        const double cy = (iy + 0.5) * cell;
        const double d2 = (cx - s.x) * (cx - s.x) + (cy - s.y) * (cy - s.y);
        if (d2 > cutoff2) continue;
        const double w = std::exp(-d2 * inv2s2);
        wsum(ix, iy) += w;
        asum(ix, iy) += w * s.activation;
      }
    }
  }

  int n_valid = 0;
  double mean = 0.0;
  for (int ix = 0; ix < kHeatmapGrid; ++ix) {
    for (int iy = 0; iy < kHeatmapGrid; ++iy) {
      if (wsum(ix, iy) >= params.min_weight) {
        map.valid(ix, iy) = true;
        map.values(ix, iy) = asum(ix, iy) / wsum(ix, iy);
        mean += map.values(ix, iy);
        ++n_valid;
      } else {
        map.valid(ix, iy) = false;
        map.values(ix, iy) = 0.0;
      }
    }
  }
  if (n_valid == 0) {
    throw std::runtime_error("spatial_heatmap: all cells invalid");
  }
  mean /= n_valid;
  double var = 0.0;
  for (int ix = 0; ix < kHeatmapGrid; ++ix) {
    for (int iy = 0; iy < kHeatmapGrid; ++iy) {
      if (map.valid(ix, iy)) {
        const double d = map.values(ix, iy) - mean;
        var += d * d;
      }
    }
  }
  var /= n_valid;
  if (var < 1e-12) {
    map.degenerate = true;  // constant node; left unstandardized
    return map;
  }
  const double inv_std = 1.0 / std::sqrt(var);
  for (int ix = 0; ix < kHeatmapGrid; ++ix) {
    for (int iy = 0; iy < kHeatmapGrid; ++iy) {
      if (map.valid(ix, iy)) {
        map.values(ix, iy) = (map.values(ix, iy) - mean) * inv_std;
      }
    }
  }
  map.standardized = true;
  return map;
}

std::vector<HeatmapSample> trace_samples(const ActivationTrace& trace,
                                         int node_id, ModeFilter filter) {
  std::vector<HeatmapSample> out;
  out.reserve(trace.rows.size());
  for (const auto& row : trace.rows) {
    if (filter == ModeFilter::OpenOnly && !row.open_mode) continue;
    if (filter == ModeFilter::ClosedOnly && row.open_mode) continue;
    out.push_back({row.x, row.y, row.activations(node_id)});
  }
  return out;
}

double mean_local_variance(const Heatmap& map, int window) {
  double total = 0.0;
  int n_windows = 0;
  for (int ix = 0; ix + window <= kHeatmapGrid; ++ix) {
    for (int iy = 0; iy + window <= kHeatmapGrid; ++iy) {
      double s = 0.0, s2 = 0.0;
      bool ok = true;
      for (int dx = 0; dx < window && ok; ++dx) {
        for (int dy = 0; dy < window; ++dy) {
          if (!map.valid(ix + dx, iy + dy)) {
            ok = false;
            break;
          }
          const double v = map.values(ix + dx, iy + dy);
          s += v;
          s2 += v * v;
        }
      }
      if (!ok) continue;
      const double n = static_cast<double>(window * window);
      const double var = std::max(0.0, s2 / n - (s / n) * (s / n));
      total += std::sqrt(var);
      ++n_windows;
    }
  }
  return n_windows > 0 ? total / n_windows : 0.0;
}

double landmark_sensitivity(const Heatmap& h_closed, const Heatmap& h_open) {
  if (h_closed.node_id != h_open.node_id) {
    throw std::invalid_argument("landmark_sensitivity: node mismatch");
  }
  double sq = 0.0;
  int n_joint = 0;
  for (int ix = 0; ix < kHeatmapGrid; ++ix) {
    for (int iy = 0; iy < kHeatmapGrid; ++iy) {
      if (h_closed.valid(ix, iy) && h_open.valid(ix, iy)) {
        const double d = h_closed.values(ix, iy) - h_open.values(ix, iy);
        sq += d * d;
        ++n_joint;
      }
    }
  }
  if (n_joint == 0) return 0.0;
  const double full = kHeatmapGrid * kHeatmapGrid;
  return std::sqrt(sq * full / n_joint);
}

}  // namespace navrep
