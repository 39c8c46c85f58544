// End-to-end acceptance gate. Each numbered check prints one PASS/FAIL line;
// the process exits nonzero if any check fails. The later checks train real
// agents at desk scale, so a full run takes a while.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <vector>

#include "navrep/pca.hpp"
#include "navrep/score_tables.hpp"
#include "navrep/train.hpp"

using namespace navrep;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int idx, bool pass, const std::string& what,
            const std::string& detail = "") {
  std::printf("CRITERION %2d: %s - %s%s%s\n", idx, pass ? "PASS" : "FAIL",
              what.c_str(), detail.empty() ? "" : " | ", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// 1. Ray caster vs a marching oracle built on orientation predicates only.

double orient_cross(const Vec2& o, const Vec2& a, const Vec2& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

bool segments_cross(const Vec2& a, const Vec2& b, const Vec2& c,
                    const Vec2& d) {
  const double d1 = orient_cross(c, d, a);
  const double d2 = orient_cross(c, d, b);
  const double d3 = orient_cross(a, b, c);
  const double d4 = orient_cross(a, b, d);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

double march_ray_distance(const MazeGeometry& geo, const Vec2& origin,
                          double angle, bool shortcut_open) {
  const Vec2 dir{std::cos(angle), std::sin(angle)};
  const double coarse = 0.5, fine = 0.01;
  const double t_max = geo.arena_size * 1.5;
  for (double t = 0.0; t < t_max; t += coarse) {
    const Vec2 p0 = origin + dir * t;
    const Vec2 p1 = origin + dir * (t + coarse);
    bool any = false;
    for (const Wall& w : geo.walls) {
      if (w.shortcut && shortcut_open) continue;
      if (segments_cross(p0, p1, w.seg.a, w.seg.b)) {
        any = true;
        break;
      }
    }
    if (!any) continue;
    double best = -1.0;
    for (const Wall& w : geo.walls) {
      if (w.shortcut && shortcut_open) continue;
      for (double s = t; s < t + coarse; s += fine) {
        const Vec2 q0 = origin + dir * s;
        const Vec2 q1 = origin + dir * (s + fine);
        if (segments_cross(q0, q1, w.seg.a, w.seg.b)) {
          if (best < 0.0 || s + fine / 2.0 < best) best = s + fine / 2.0;
          break;
        }
      }
    }
    if (best >= 0.0) return best;
  }
  return -1.0;
}

void criterion_1() {
  const auto t0 = std::chrono::steady_clock::now();
  const MazeGeometry geo = make_default_geometry();
  Rng rng(1001);
  int checked = 0;
  double worst = 0.0;
  bool ok = true;
  while (checked < 10000) {
    const Vec2 o{rng.uniform(1.0, 299.0), rng.uniform(1.0, 299.0)};
    const bool open = rng.bernoulli(0.5);
    if (near_wall(geo, o, open, 0.5)) continue;
    const double angle = rng.uniform(0.0, 2.0 * M_PI);
    const double got = cast_ray(geo, o, angle, open).distance;
    const double ref = march_ray_distance(geo, o, angle, open);
    if (ref < 0.0) {
      ok = false;
      break;
    }
    worst = std::max(worst, std::abs(got - ref));
    if (worst >= 1e-2) {
      ok = false;
      break;
    }
    ++checked;
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  report(1, ok && secs < 60.0, "ray caster matches marching oracle",
         "queries=" + std::to_string(checked) + " max_err=" + fmt(worst) +
             " secs=" + fmt(secs));
}

// ---------------------------------------------------------------------------
// 2. Exact gradient vs central finite differences on randomized tiny nets.

void criterion_2() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(2002);
  const LossCoefs coefs;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    NetworkConfig cfg;
    cfg.input_dim = 2 + static_cast<int>(rng.uniform_int(3));
    cfg.layer_width = 3 + static_cast<int>(rng.uniform_int(3));
    cfg.n_shared_ff = 1 + static_cast<int>(rng.uniform_int(2));
    NetworkWeights w = init_weights(cfg, rng);
    for (auto& p : w.params()) {
      for (long i = 0; i < p.size; ++i) {
        if (p.data[i] == 0.0) p.data[i] = rng.uniform(-0.1, 0.1);
      }
    }
    std::vector<EpisodeSegment> batch;
    for (int s = 0; s < 2; ++s) {
      EpisodeSegment seg;
      seg.h0 = Vec::Zero(cfg.layer_width);
      if (s == 1) {
        for (int i = 0; i < seg.h0.size(); ++i) {
          seg.h0(i) = rng.uniform(-0.5, 0.5);
        }
      }
      Vec h = seg.h0;
      const int T = 2 + static_cast<int>(rng.uniform_int(3));
      for (int t = 0; t < T; ++t) {
        SegmentStep st;
        st.obs = Vec(cfg.input_dim);
        for (int i = 0; i < st.obs.size(); ++i) {
          st.obs(i) = rng.uniform(-1.0, 1.0);
        }
        st.action = static_cast<int>(rng.uniform_int(cfg.n_actions));
        const PolicyOutput out = forward(w, st.obs, h);
        h = out.new_hidden;
        st.old_logp =
            std::log(out.action_probs(st.action)) + rng.uniform(-0.05, 0.05);
        st.advantage = rng.uniform(-1.0, 1.0);
        st.ret = rng.uniform(-1.0, 1.0);
        seg.steps.push_back(std::move(st));
      }
      batch.push_back(std::move(seg));
    }

    NetworkWeights grad;
    ppo_loss_backward(w, batch, coefs, grad);
    auto wp = w.params();
    auto gp = grad.params();
    const double eps = 1e-5;
    for (size_t a = 0; a < wp.size(); ++a) {
      for (long i = 0; i < wp[a].size; ++i) {
        const double orig = wp[a].data[i];
        wp[a].data[i] = orig + eps;
        const double up = ppo_loss(w, batch, coefs).total;
        wp[a].data[i] = orig - eps;
        const double dn = ppo_loss(w, batch, coefs).total;
        wp[a].data[i] = orig;
        const double fd = (up - dn) / (2.0 * eps);
        const double an = gp[a].data[i];
        const double denom = std::max(std::abs(fd), std::abs(an));
        if (denom > 1e-6) {
          worst = std::max(worst, std::abs(fd - an) / denom);
        }
      }
    }
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  report(2, worst < 1e-4 && secs < 300.0,
         "BPTT gradient matches finite differences",
         "trials=100 max_rel_err=" + fmt(worst) + " secs=" + fmt(secs));
}

// ---------------------------------------------------------------------------
// 3. Return/advantage recursion vs brute-force double-loop sums.

void criterion_3() {
  Rng rng(3003);
  const double gammas[] = {0.0, 0.5, 0.99};
  const double lambdas[] = {0.0, 0.95, 1.0};
  double worst = 0.0;
  int n_sequences = 0;
  for (int trial = 0; trial < 112 && worst < 1e-10; ++trial) {
    EnvSequence base;
    const int T = 30 + static_cast<int>(rng.uniform_int(30));
    for (int t = 0; t < T; ++t) {
      EnvStepRecord s;
      s.value = rng.uniform(-1.0, 1.0);
      s.reward = rng.uniform(-1.0, 1.0);
      if (rng.bernoulli(0.15)) {
        s.done = true;
        if (rng.bernoulli(0.5)) {
          s.truncated = true;
          s.bootstrap_value = rng.uniform(-1.0, 1.0);
        }
      }
      base.steps.push_back(s);
    }
    if (!base.steps.back().done) base.last_value = rng.uniform(-1.0, 1.0);

    auto next_value = [&base](size_t t) {
      const EnvStepRecord& s = base.steps[t];
      if (s.done) return s.truncated ? s.bootstrap_value : 0.0;
      if (t + 1 == base.steps.size()) return base.last_value;
      return base.steps[t + 1].value;
    };

    for (double gamma : gammas) {
      for (double lambda : lambdas) {
        EnvSequence seq = base;
        compute_returns_advantages(seq, gamma, lambda);
        for (size_t t = 0; t < seq.steps.size(); ++t) {
          double acc = 0.0, coef = 1.0;
          for (size_t k = t; k < seq.steps.size(); ++k) {
            acc += coef * (base.steps[k].reward + gamma * next_value(k) -
                           base.steps[k].value);
            if (base.steps[k].done) break;
            coef *= gamma * lambda;
          }
          worst = std::max(worst, std::abs(seq.advantages[t] - acc));
          worst = std::max(
              worst, std::abs(seq.returns[t] - (acc + seq.steps[t].value)));
        }
        ++n_sequences;
      }
    }
  }
  report(3, worst < 1e-10 && n_sequences >= 1000,
         "GAE recursion equals double-loop sums",
         "sequences=" + std::to_string(n_sequences) + " max_err=" + fmt(worst));
}

// ---------------------------------------------------------------------------
// 4. Normalized matching score vs exhaustive enumeration on tiny sets.

double enumerate_min_assignment(const Eigen::MatrixXd& cost) {
  std::vector<int> cols(cost.cols());
  std::iota(cols.begin(), cols.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double total = 0.0;
    for (int i = 0; i < cost.rows(); ++i) total += cost(i, cols[i]);
    best = std::min(best, total);
  } while (std::next_permutation(cols.begin(), cols.end()));
  return best;
}

void criterion_4() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(4004);
  double worst = 0.0;
  bool self_zero = true;
  for (int trial = 0; trial < 500; ++trial) {
    const int nu = 1 + static_cast<int>(rng.uniform_int(6));
    const int nv = 1 + static_cast<int>(rng.uniform_int(6));
    std::vector<Eigen::VectorXd> u, v;
    auto rand_pt = [&rng]() {
      Eigen::VectorXd p(3);
      for (int i = 0; i < 3; ++i) p(i) = rng.uniform(-5.0, 5.0);
      return p;
    };
    for (int i = 0; i < nu; ++i) u.push_back(rand_pt());
    for (int i = 0; i < nv; ++i) v.push_back(rand_pt());
    std::vector<Eigen::VectorXd> all = u;
    all.insert(all.end(), v.begin(), v.end());

    const SeparationScore got = wasserstein_separation(u, v, all);
    const auto& small = nu <= nv ? u : v;
    const auto& large = nu <= nv ? v : u;
    Eigen::MatrixXd cost(small.size(), large.size());
    for (size_t i = 0; i < small.size(); ++i) {
      for (size_t j = 0; j < large.size(); ++j) {
        cost(i, j) = (small[i] - large[j]).norm();
      }
    }
    double dmax = 0.0;
    for (size_t i = 0; i < all.size(); ++i) {
      for (size_t j = i + 1; j < all.size(); ++j) {
        dmax = std::max(dmax, (all[i] - all[j]).norm());
      }
    }
    const double expected =
        dmax > 0.0 ? enumerate_min_assignment(cost) / (small.size() * dmax)
                   : 0.0;
    worst = std::max(worst, std::abs(got.w - expected));
    if (wasserstein_separation(u, u, all).w != 0.0) self_zero = false;
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  report(4, worst < 1e-10 && self_zero && secs < 120.0,
         "matching score equals exhaustive optimum; W(U,U)=0",
         "trials=500 max_err=" + fmt(worst) + " secs=" + fmt(secs));
}

// ---------------------------------------------------------------------------
// 5. Heatmap standardization invariants on a recorded trace.

void criterion_5() {
  const MazeGeometry geo = make_default_geometry();
  const EnvParams params;
  NetworkConfig net_cfg;
  Rng rng(5005);
  const NetworkWeights w = init_weights(net_cfg, rng);
  const EvalSuite suite = make_eval_suite(777, geo, params, 20);
  ActivationTrace trace = run_eval(w, geo, params, suite, true);
  // Append a constant node so the degenerate path is exercised.
  for (auto& row : trace.rows) {
    Vec ext(row.activations.size() + 1);
    ext.head(row.activations.size()) = row.activations;
    ext(row.activations.size()) = 0.5;
    row.activations = ext;
  }

  AnalysisConfig acfg;
  const std::vector<Heatmap> maps = node_heatmaps(trace, acfg);
  bool ok = true;
  std::string detail;
  int degenerate_count = 0;
  for (const Heatmap& m : maps) {
    if (m.degenerate) {
      ++degenerate_count;
      if (m.standardized) {
        ok = false;
        detail = "degenerate map standardized";
      }
      continue;
    }
    double mean = 0.0;
    const int nv = m.n_valid();
    for (int ix = 0; ix < kHeatmapGrid; ++ix) {
      for (int iy = 0; iy < kHeatmapGrid; ++iy) {
        if (m.valid(ix, iy)) mean += m.values(ix, iy);
      }
    }
    mean /= nv;
    double var = 0.0;
    for (int ix = 0; ix < kHeatmapGrid; ++ix) {
      for (int iy = 0; iy < kHeatmapGrid; ++iy) {
        if (m.valid(ix, iy)) {
          var += (m.values(ix, iy) - mean) * (m.values(ix, iy) - mean);
        }
      }
    }
    var /= nv;
    if (std::abs(mean) >= 1e-9 || std::abs(var - 1.0) >= 1e-6) {
      ok = false;
      detail = "node " + std::to_string(m.node_id) + " mean=" + fmt(mean) +
               " var=" + fmt(var);
    }
  }
  if (degenerate_count < 1) {
    ok = false;
    detail = "constant node was not flagged degenerate";
  }

  // Landmark calibration on full-valid grids.
  std::vector<HeatmapSample> samples, neg;
  Rng srng(5105);
  const double cell = 300.0 / kHeatmapGrid;
  for (int ix = 0; ix < kHeatmapGrid; ++ix) {
    for (int iy = 0; iy < kHeatmapGrid; ++iy) {
      const double a = srng.uniform(-1.0, 1.0);
      samples.push_back({(ix + 0.5) * cell, (iy + 0.5) * cell, a});
      neg.push_back({(ix + 0.5) * cell, (iy + 0.5) * cell, -a});
    }
  }
  HeatmapParams hp;
  hp.sigma = 5.0;
  const Heatmap hmap = spatial_heatmap(samples, hp);
  const Heatmap hneg = spatial_heatmap(neg, hp);
  const double self_score = landmark_sensitivity(hmap, hmap);
  const double neg_score = landmark_sensitivity(hmap, hneg);
  if (self_score != 0.0 || std::abs(neg_score - 60.0) >= 1e-6 ||
      hmap.n_valid() != kHeatmapGrid * kHeatmapGrid) {
    ok = false;
    detail = "landmark self=" + fmt(self_score) + " neg=" + fmt(neg_score);
  }
  report(5, ok, "heatmap standardization and landmark calibration",
         detail.empty() ? "nodes=" + std::to_string(maps.size()) +
                              " degenerate=" + std::to_string(degenerate_count)
                        : detail);
}

// ---------------------------------------------------------------------------
// 6. Bit-exact determinism of training and prescribed replay.

std::string file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void criterion_6(const std::string& work_dir) {
  RunConfig cfg;
  cfg.seed = 606;
  cfg.env.p = 0.5;
  cfg.net.layer_width = 32;
  cfg.ppo.n_envs = 4;
  cfg.ppo.rollout_length = 64;
  cfg.ppo.total_post_shift_steps = 4096;
  cfg.schedule.n_checkpoints = 2;
  // Trip the onset condition as soon as the window fills so the scheduled
  // checkpoints are written under a tiny budget.
  cfg.schedule.onset_threshold = 201.0;

  bool ok = true;
  std::string detail;
  cfg.out_dir = work_dir + "/det_a";
  const TrainResult ra = train(cfg);
  cfg.out_dir = work_dir + "/det_b";
  const TrainResult rb = train(cfg);
  if (!ra.onset_reached || !rb.onset_reached || ra.checkpoints.empty()) {
    ok = false;
    detail = "training did not produce checkpoints";
  } else if (ra.checkpoints.size() != rb.checkpoints.size()) {
    ok = false;
    detail = "checkpoint counts differ";
  } else {
    for (size_t i = 0; i < ra.checkpoints.size(); ++i) {
      const std::string a = file_bytes(ra.checkpoints[i].path);
      const std::string b = file_bytes(rb.checkpoints[i].path);
      if (a.empty() || a != b) {
        ok = false;
        detail = "checkpoint " + std::to_string(i) + " differs";
        break;
      }
    }
    if (ok && file_bytes(work_dir + "/det_a/curve.csv") !=
                  file_bytes(work_dir + "/det_b/curve.csv")) {
      ok = false;
      detail = "learning curves differ";
    }
  }

  // Prescribed replay reproduces the source observation stream bit-exactly:
  // identical poses imply identical observations, and the recurrent
  // activations must match to the last bit.
  if (ok) {
    const MazeGeometry geo = make_default_geometry();
    const EnvParams params;
    const Checkpoint ckpt = load_checkpoint(ra.checkpoints.back().path);
    const EvalSuite suite = make_eval_suite(777, geo, params, 10);
    const ActivationTrace open_t =
        run_eval(ckpt.weights, geo, params, suite, true);
    const ActivationTrace closed_t =
        run_eval(ckpt.weights, geo, params, suite, false);
    const ActionSchedule sched =
        make_action_schedule(open_t, closed_t, suite);
    const ActivationTrace replay =
        replay_prescribed(ckpt.weights, geo, params, sched);
    if (replay.rows.size() != open_t.rows.size() + closed_t.rows.size()) {
      ok = false;
      detail = "replay row count mismatch";
    } else {
      for (size_t i = 0; i < open_t.rows.size() && ok; ++i) {
        const TraceRow& a = replay.rows[i];
        const TraceRow& b = open_t.rows[i];
        if (a.x != b.x || a.y != b.y || a.heading != b.heading ||
            a.action != b.action ||
            !(a.activations.array() == b.activations.array()).all()) {
          ok = false;
          detail = "replay diverged at row " + std::to_string(i);
        }
      }
    }
  }
  report(6, ok, "byte-identical reruns and bit-exact prescribed replay",
         detail);
}

// ---------------------------------------------------------------------------
// 7-10. Desk-scale training runs and representation dynamics.

struct EvalNumbers {
  double mean_len_closed = 0.0;
  double use_rate = 0.0;
};

EvalNumbers eval_checkpoint(const NetworkWeights& w, const MazeGeometry& geo,
                            const EnvParams& params, const EvalSuite& suite,
                            ActivationTrace* open_out = nullptr,
                            ActivationTrace* closed_out = nullptr) {
  ActivationTrace open_t = run_eval(w, geo, params, suite, true);
  ActivationTrace closed_t = run_eval(w, geo, params, suite, false);
  EvalNumbers n;
  n.mean_len_closed = closed_t.mean_episode_length();
  n.use_rate = shortcut_use_rate(open_t);
  if (open_out) *open_out = std::move(open_t);
  if (closed_out) *closed_out = std::move(closed_t);
  return n;
}

RunConfig desk_config(uint64_t seed, double p, long post_shift_steps,
                      int n_checkpoints, const std::string& out_dir) {
  RunConfig cfg;
  cfg.seed = seed;
  cfg.env.p = p;
  cfg.ppo.total_post_shift_steps = post_shift_steps;
  cfg.ppo.max_raw_steps = 20'000'000;
  cfg.schedule.n_checkpoints = n_checkpoints;
  cfg.out_dir = out_dir;
  return cfg;
}

void criteria_7_9_10(const std::string& work_dir) {
  const RunConfig cfg =
      desk_config(1, 0.8, 2'000'000, 36, work_dir + "/main_p08_s1");
  const MazeGeometry geo = cfg.make_geometry();
  const EvalSuite suite =
      make_eval_suite(cfg.eval.suite_seed, geo, cfg.env, cfg.eval.n_episodes);
  save_suite(suite, [&] {
    ensure_dir(cfg.out_dir);
    return cfg.out_dir + "/suite.json";
  }());

  std::printf("-- training p=0.8 seed=1 (2e6 post-shift steps, 36 "
              "checkpoints)...\n");
  std::fflush(stdout);
  const TrainResult res = train(cfg);
  if (!res.onset_reached || res.checkpoints.empty()) {
    report(7, false, "desk-scale learning", "learning onset not reached");
    report(9, false, "landmark-sensitivity dynamics", "no checkpoints");
    report(10, false, "separation-score growth", "no checkpoints");
    return;
  }
  std::printf("-- onset at %ld raw steps; %zu checkpoints; scoring...\n",
              res.onset_step, res.checkpoints.size());
  std::fflush(stdout);

  std::vector<CheckpointScores> scores;
  for (const CheckpointInfo& info : res.checkpoints) {
    const Checkpoint ckpt = load_checkpoint(info.path);
    ActivationTrace open_t, closed_t;
    eval_checkpoint(ckpt.weights, geo, cfg.env, suite, &open_t, &closed_t);
    scores.push_back(score_checkpoint(info.index, info.post_shift_steps,
                                      open_t, closed_t, nullptr, geo,
                                      cfg.analysis));
  }
  save_scores_csv(scores, cfg.out_dir + "/scores.csv");

  // 7: some checkpoint within the budget is both fast in closed mode and a
  // frequent shortcut user in open mode.
  int best_idx = -1;
  for (size_t i = 0; i < scores.size(); ++i) {
    if (scores[i].mean_ep_len_closed < 100.0 && scores[i].use_rate >= 0.6) {
      best_idx = static_cast<int>(i);
    }
  }
  const CheckpointScores& last = scores.back();
  report(7, best_idx >= 0,
         "closed-mode length < 100 and use rate >= 0.6 within 2e6 steps",
         "final: len_closed=" + fmt(last.mean_ep_len_closed) +
             " use_rate=" + fmt(last.use_rate) +
             (best_idx >= 0
                  ? " first_ok_ckpt=" + std::to_string(scores[best_idx].index)
                  : ""));

  // 9: mean landmark score dips below its initial value early in training.
  const size_t third = std::max<size_t>(2, scores.size() / 3);
  double min_early = scores[0].mean_landmark;
  for (size_t i = 0; i < third; ++i) {
    min_early = std::min(min_early, scores[i].mean_landmark);
  }
  const bool dip = min_early < scores[0].mean_landmark;
  report(9, dip, "early dip in mean landmark sensitivity",
         "first=" + fmt(scores[0].mean_landmark) + " min_early=" +
             fmt(min_early) + " late=" + fmt(last.mean_landmark) +
             " late_cue_nodes=" + std::to_string(last.n_cue_nodes));

  // 10: pre-entrance/pre-shortcut separation grows over training; the
  // cue/non-cue node-subset variant is reported alongside.
  const bool grows = last.sep_policy > scores[0].sep_policy;
  std::string subsets = "cue=";
  subsets += last.sep_cue ? fmt(*last.sep_cue) : "n/a";
  subsets += " noncue=";
  subsets += last.sep_noncue ? fmt(*last.sep_noncue) : "n/a";
  report(10, grows, "separation score grows over training",
         "first=" + fmt(scores[0].sep_policy) +
             " final=" + fmt(last.sep_policy) + " " + subsets);
}

void criterion_8(const std::string& work_dir) {
  bool ok = true;
  std::string detail;
  int wins = 0;
  for (uint64_t seed : {12ULL, 15ULL}) {
    double rates[2] = {0.0, 0.0};
    int slot = 0;
    for (double p : {0.8, 0.1}) {
      char dir[64];
      std::snprintf(dir, sizeof(dir), "/pair_p%02d_s%llu",
                    static_cast<int>(p * 10),
                    static_cast<unsigned long long>(seed));
      const RunConfig cfg =
          desk_config(seed, p, 1'000'000, 2, work_dir + dir);
      std::printf("-- training p=%.1f seed=%llu (1e6 post-shift steps)...\n",
                  p, static_cast<unsigned long long>(seed));
      std::fflush(stdout);
      const TrainResult res = train(cfg);
      if (!res.onset_reached || res.checkpoints.empty()) {
        ok = false;
        detail = "onset not reached for p=" + fmt(p);
        break;
      }
      const MazeGeometry geo = cfg.make_geometry();
      const EvalSuite suite = make_eval_suite(cfg.eval.suite_seed, geo,
                                              cfg.env, cfg.eval.n_episodes);
      const Checkpoint ckpt = load_checkpoint(res.checkpoints.back().path);
      rates[slot++] =
          eval_checkpoint(ckpt.weights, geo, cfg.env, suite).use_rate;
    }
    if (!ok) break;
    if (rates[0] > rates[1]) ++wins;
    detail += " seed" + std::to_string(seed) + ": p0.8=" + fmt(rates[0]) +
              " p0.1=" + fmt(rates[1]);
  }
  report(8, ok && wins == 2,
         "use rate ordering p=0.8 > p=0.1 in 2 of 2 seed pairs", detail);
}

}  // namespace

int main() {
  const char* env_dir = std::getenv("NAVREP_ACCEPT_DIR");
  const std::string work_dir =
      env_dir != nullptr && *env_dir != '\0' ? env_dir : "acceptance_artifacts";
  ensure_dir(work_dir);

  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6(work_dir);
  criteria_7_9_10(work_dir);
  criterion_8(work_dir);

  if (g_failures > 0) {
    std::printf("%d criterion(s) FAILED\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
