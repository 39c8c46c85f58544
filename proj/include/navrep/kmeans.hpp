#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "navrep/rng.hpp"

namespace navrep {

struct ClusterModel {
  std::vector<Eigen::VectorXd> centers;
  std::vector<int> labels;
  double inertia = 0.0;
  // Positive/negative pairing: pairs[i] = {a, b} with centers[b] ~ -centers[a].
  std::vector<std::pair<int, int>> pairs;
  std::vector<double> pair_residuals;  // ||c_a + c_b|| per pair
};

// Lloyd iterations with k-means++ seeding, best of `restarts` by inertia.
// Empty clusters are re-seeded from the farthest point.
ClusterModel kmeans_cluster(const std::vector<Eigen::VectorXd>& points, int k,
                            int restarts, Rng& rng);

// Greedy global-minimum matching of centers with their negations; requires an
// even center count. Fills pairs and residuals on the model.
void pair_negatives(ClusterModel& model);

}  // namespace navrep
