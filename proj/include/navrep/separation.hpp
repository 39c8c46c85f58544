#pragma once

#include <Eigen/Dense>
#include <vector>

#include "navrep/evaluation.hpp"

namespace navrep {

// Activation rows partitioned by corridor crossing and the path the episode
// took. Membership in *_shortcut vs *_entrance depends only on the episode's
// PathLabel, never on whether the shortcut was open. NoEntry episodes are
// excluded entirely.
struct TrajectorySets {
  std::vector<Eigen::VectorXd> pre_entrance;
  std::vector<Eigen::VectorXd> pre_shortcut;
  std::vector<Eigen::VectorXd> post_entrance;
  std::vector<Eigen::VectorXd> post_shortcut;

  size_t total() const {
    return pre_entrance.size() + pre_shortcut.size() + post_entrance.size() +
           post_shortcut.size();
  }
};

TrajectorySets build_trajectory_sets(const ActivationTrace& trace,
                                     const MazeGeometry& geo,
                                     bool open_episodes_only = false);

struct SeparationScore {
  double w_raw = 0.0;     // minimum matching cost
  long n_pairs = 0;       // size of the smaller (subsampled) set
  double d_max = 0.0;     // max pairwise distance over the reference points
  double w = 0.0;         // w_raw / (n_pairs * d_max), in [0, 1]
};

struct SeparationParams {
  long subsample_cap = 300;    // per set, exact assignment is cubic
  long d_subsample_cap = 4096; // for the max-distance normalizer
  uint64_t seed = 1234;
  // Coordinate mask; empty = all coordinates.
  std::vector<int> node_mask;
};

// Normalized minimum-cost matching distance between two activation point
// sets. `all_points` defines the normalizing max pairwise distance.
SeparationScore wasserstein_separation(
    const std::vector<Eigen::VectorXd>& u,
    const std::vector<Eigen::VectorXd>& v,
    const std::vector<Eigen::VectorXd>& all_points,
    const SeparationParams& params = {});

}  // namespace navrep
