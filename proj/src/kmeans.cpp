#include "navrep/kmeans.hpp"

#include <limits>
#include <stdexcept>

namespace navrep {

namespace {

double sq_dist(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return (a - b).squaredNorm();
}

struct RunResult {
  std::vector<Eigen::VectorXd> centers;
  std::vector<int> labels;
  double inertia = 0.0;
};

RunResult kmeans_once(const std::vector<Eigen::VectorXd>& points, int k,
                      Rng& rng) {
  const size_t n = points.size();
  RunResult res;

  // k-means++ seeding.
  res.centers.push_back(points[rng.uniform_int(n)]);
  std::vector<double> d2(n, std::numeric_limits<double>::infinity());
  while (static_cast<int>(res.centers.size()) < k) {
    double total = 0.0;
    for (size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], sq_dist(points[i], res.centers.back()));
      total += d2[i];
    }
    size_t pick = 0;
    if (total > 0.0) {
      double u = rng.uniform() * total;
      for (size_t i = 0; i < n; ++i) {
        u -= d2[i];
        if (u <= 0.0) {
          pick = i;
          break;
        }
      }
    } else {
      pick = rng.uniform_int(n);
    }
    res.centers.push_back(points[pick]);
  }

  res.labels.assign(n, -1);
  const long dim = points[0].size();
  for (int iter = 0; iter < 300; ++iter) {
    bool changed = false;
    for (size_t i = 0; i < n; ++i) {
      int best = 0;
      double bd = sq_dist(points[i], res.centers[0]);
      for (int c = 1; c < k; ++c) {
        const double d = sq_dist(points[i], res.centers[c]);
        if (d < bd) {
          bd = d;
          best = c;
        }
      }
      if (res.labels[i] != best) {
        res.labels[i] = best;
        changed = true;
      }
    }
    if (!changed && iter > 0) break;

    std::vector<Eigen::VectorXd> sums(k, Eigen::VectorXd::Zero(dim));
    std::vector<int> counts(k, 0);
    for (size_t i = 0; i < n; ++i) {
      sums[res.labels[i]] += points[i];
      ++counts[res.labels[i]];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) {
        res.centers[c] = sums[c] / counts[c];
      } else {
        // Re-seed an empty cluster from the farthest point.
        size_t far_i = 0;
        double far_d = -1.0;
        for (size_t i = 0; i < n; ++i) {
          const double d = sq_dist(points[i], res.centers[res.labels[i]]);
          if (d > far_d) {
            far_d = d;
            far_i = i;
          }
        }
        res.centers[c] = points[far_i];
      }
    }
  }

  res.inertia = 0.0;
  for (size_t i = 0; i < n; ++i) {
    res.inertia += sq_dist(points[i], res.centers[res.labels[i]]);
  }
  return res;
}

}  // namespace

ClusterModel kmeans_cluster(const std::vector<Eigen::VectorXd>& points, int k,
                            int restarts, Rng& rng) {
  if (static_cast<int>(points.size()) < k) {
    throw std::invalid_argument("kmeans_cluster: fewer points than clusters");
  }
  RunResult best;
  best.inertia = std::numeric_limits<double>::infinity();
  for (int r = 0; r < std::max(1, restarts); ++r) {
    RunResult run = kmeans_once(points, k, rng);
    if (run.inertia < best.inertia) best = std::move(run);
  }
  ClusterModel model;
  model.centers = std::move(best.centers);
  model.labels = std::move(best.labels);
  model.inertia = best.inertia;
  return model;
}

void pair_negatives(ClusterModel& model) {
  const int k = static_cast<int>(model.centers.size());
  if (k % 2 != 0) {
    throw std::invalid_argument("pair_negatives: odd number of centers");
  }
  model.pairs.clear();
  model.pair_residuals.clear();
  std::vector<bool> used(k, false);
  for (int step = 0; step < k / 2; ++step) {
    int ba = -1, bb = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int a = 0; a < k; ++a) {
      if (used[a]) continue;
      for (int b = a + 1; b < k; ++b) {
        if (used[b]) continue;
        const double r = (model.centers[a] + model.centers[b]).norm();
        if (r < best) {
          best = r;
          ba = a;
          bb = b;
        }
      }
    }
    used[ba] = used[bb] = true;
    model.pairs.emplace_back(ba, bb);
    model.pair_residuals.push_back(best);
  }
}

}  // namespace navrep
