#include "navrep/separation.hpp"

#include <stdexcept>
#include <unordered_map>

#include "navrep/assignment.hpp"

namespace navrep {

TrajectorySets build_trajectory_sets(const ActivationTrace& trace,
                                     const MazeGeometry& geo,
                                     bool open_episodes_only) {
  // Label lookup per (episode, mode).
  std::unordered_map<long, PathLabel> labels;
  auto key = [](int episode_id, bool open) {
    return static_cast<long>(episode_id) * 2 + (open ? 1 : 0);
  };
  for (const auto& ep : trace.episodes) {
    labels[key(ep.episode_id, ep.open_mode)] = ep.label;
  }

  TrajectorySets sets;
  for (const auto& row : trace.rows) {
    if (open_episodes_only && !row.shortcut_open) continue;
    const auto it = labels.find(key(row.episode_id, row.open_mode));
    if (it == labels.end() || it->second == PathLabel::NoEntry) continue;
    const bool pre = row.y < geo.long_wall_y;
    const bool shortcut = it->second == PathLabel::Shortcut;
    if (pre && shortcut) {
      sets.pre_shortcut.push_back(row.activations);
    } else if (pre) {
      sets.pre_entrance.push_back(row.activations);
    } else if (shortcut) {
      sets.post_shortcut.push_back(row.activations);
    } else {
      sets.post_entrance.push_back(row.activations);
    }
  }
  return sets;
}

namespace {

std::vector<Eigen::VectorXd> subsample(const std::vector<Eigen::VectorXd>& pts,
                                       long cap, Rng& rng) {
  if (static_cast<long>(pts.size()) <= cap) return pts;
  // Partial Fisher-Yates over an index array.
  std::vector<size_t> idx(pts.size());
  for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::vector<Eigen::VectorXd> out;
  out.reserve(cap);
  for (long i = 0; i < cap; ++i) {
    const size_t j = i + rng.uniform_int(idx.size() - i);
    std::swap(idx[i], idx[j]);
    out.push_back(pts[idx[i]]);
  }
  return out;
}

Eigen::VectorXd mask_coords(const Eigen::VectorXd& x,
                            const std::vector<int>& mask) {
  if (mask.empty()) return x;
  Eigen::VectorXd out(mask.size());
  for (size_t i = 0; i < mask.size(); ++i) out(i) = x(mask[i]);
  return out;
}

}  // namespace

SeparationScore wasserstein_separation(
    const std::vector<Eigen::VectorXd>& u,
    const std::vector<Eigen::VectorXd>& v,
    const std::vector<Eigen::VectorXd>& all_points,
    const SeparationParams& params) {
  if (u.empty() || v.empty()) {
    throw std::invalid_argument("wasserstein_separation: empty set");
  }
  Rng rng(params.seed);
  std::vector<Eigen::VectorXd> su = subsample(u, params.subsample_cap, rng);
  std::vector<Eigen::VectorXd> sv = subsample(v, params.subsample_cap, rng);
  std::vector<Eigen::VectorXd> sall =
      subsample(all_points, params.d_subsample_cap, rng);
  for (auto& p : su) p = mask_coords(p, params.node_mask);
  for (auto& p : sv) p = mask_coords(p, params.node_mask);
  for (auto& p : sall) p = mask_coords(p, params.node_mask);

  // Smaller set becomes the rows of the assignment problem.
  const std::vector<Eigen::VectorXd>& small = su.size() <= sv.size() ? su : sv;
  const std::vector<Eigen::VectorXd>& large = su.size() <= sv.size() ? sv : su;
  Eigen::MatrixXd cost(small.size(), large.size());
  for (size_t i = 0; i < small.size(); ++i) {
    for (size_t j = 0; j < large.size(); ++j) {
      cost(i, j) = (small[i] - large[j]).norm();
    }
  }
  std::vector<int> row_to_col;
  SeparationScore score;
  score.w_raw = min_cost_assignment(cost, row_to_col);
  score.n_pairs = static_cast<long>(small.size());

  double d2max = 0.0;
  for (size_t i = 0; i < sall.size(); ++i) {
    for (size_t j = i + 1; j < sall.size(); ++j) {
      d2max = std::max(d2max, (sall[i] - sall[j]).squaredNorm());
    }
  }
  score.d_max = std::sqrt(d2max);
  score.w = score.d_max > 0.0
                ? score.w_raw / (static_cast<double>(score.n_pairs) * score.d_max)
                : 0.0;
  return score;
}

}  // namespace navrep
