#include "navrep/maze_env.hpp"

#include <algorithm>
#include <stdexcept>

namespace navrep {

MazeGeometry make_default_geometry() {
  MazeGeometry g;
  const double S = g.arena_size;
  const double Y = g.long_wall_y;
  auto add = [&g](double ax, double ay, double bx, double by, double color,
                  bool shortcut = false) {
    g.walls.push_back({{{ax, ay}, {bx, by}}, color, shortcut});
  };
  // Arena boundary.
  add(0, 0, S, 0, kColorWhite);
  add(S, 0, S, S, kColorWhite);
  add(S, S, 0, S, kColorWhite);
  add(0, S, 0, 0, kColorWhite);
  // Long wall, split around the entrance and shortcut gaps.
  if (g.entrance_x0 > 0.0) add(0, Y, g.entrance_x0, Y, kColorWhite);
  add(g.entrance_x1, Y, g.shortcut_x0, Y, kColorWhite);
  if (g.shortcut_x1 < S) add(g.shortcut_x1, Y, S, Y, kColorWhite);
  // Purple shortcut wall, present only when the shortcut is closed.
  add(g.shortcut_x0, Y, g.shortcut_x1, Y, kColorPurple, /*shortcut=*/true);
  return g;
}

RayHit cast_ray(const MazeGeometry& geo, const Vec2& origin, double angle,
                bool shortcut_open) {
  const Vec2 dir{std::cos(angle), std::sin(angle)};
  double best_t = -1.0;
  double best_color = 0.0;
  for (const Wall& w : geo.walls) {
    if (w.shortcut && shortcut_open) continue;
    if (auto t = ray_segment_intersection(origin, dir, w.seg)) {
      if (best_t < 0.0 || *t < best_t) {
        best_t = *t;
        best_color = w.color;
      }
    }
  }
  if (best_t < 0.0) {
    throw std::logic_error("cast_ray: no wall hit; geometry is corrupt");
  }
  return {best_color, best_t};
}

Observation observe(const MazeGeometry& geo, const EnvParams& params,
                    const EnvState& state) {
  const double d_max = geo.arena_size * std::sqrt(2.0);
  Observation obs;
  obs.reserve(2 * params.n_rays);
  // Leftmost ray first, fanning right across the field of view.
  for (int i = 0; i < params.n_rays; ++i) {
    const double offset =
        params.fov / 2.0 - params.fov * static_cast<double>(i) /
                               static_cast<double>(params.n_rays - 1);
    const RayHit hit = cast_ray(geo, {state.x, state.y}, state.heading + offset,
                                state.shortcut_open);
    obs.push_back(hit.color);
    obs.push_back(hit.distance / d_max);
  }
  return obs;
}

bool near_wall(const MazeGeometry& geo, const Vec2& p, bool shortcut_open,
               double margin) {
  if (p.x < margin || p.x > geo.arena_size - margin || p.y < margin ||
      p.y > geo.arena_size - margin) {
    return true;
  }
  for (const Wall& w : geo.walls) {
    if (w.shortcut && shortcut_open) continue;
    if (point_segment_distance(p, w.seg) < margin) return true;
  }
  return false;
}

EnvState reset_state(const MazeGeometry& geo, const EnvParams& params,
                     Rng& rng) {
  EnvState s;
  s.shortcut_open = rng.bernoulli(params.p);
  do {
    s.x = rng.uniform(0.0, geo.arena_size);
    s.y = rng.uniform(0.0, params.start_y_max);
  } while (near_wall(geo, {s.x, s.y}, s.shortcut_open, 1e-3));
  s.heading = rng.uniform(0.0, 2.0 * M_PI);
  s.step_count = 0;
  return s;
}

StepResult step(const MazeGeometry& geo, const EnvParams& params,
                const EnvState& state, ActionId action) {
  if (state.step_count >= params.max_steps) {
    throw std::logic_error("step: episode already finished");
  }
  StepResult r;
  r.state = state;
  switch (action) {
    case ActionId::TurnLeft:
      r.state.heading = wrap_angle(state.heading + params.turn_angle);
      break;
    case ActionId::TurnRight:
      r.state.heading = wrap_angle(state.heading - params.turn_angle);
      break;
    case ActionId::Forward: {
      // Advance toward the first wall, stopping 1e-3 short of contact; any
      // unspent distance slides along the blocking wall (projected motion),
      // again stopping short of whatever blocks the slide.
      const Vec2 origin{state.x, state.y};
      const Vec2 dir{std::cos(state.heading), std::sin(state.heading)};
      const Wall* block = nullptr;
      double hit_t = -1.0;
      for (const Wall& w : geo.walls) {
        if (w.shortcut && state.shortcut_open) continue;
        if (auto t = ray_segment_intersection(origin, dir, w.seg)) {
          if (hit_t < 0.0 || *t < hit_t) {
            hit_t = *t;
            block = &w;
          }
        }
      }
      Vec2 pos = origin;
      const double d = std::min(params.move_dist, hit_t - 1e-3);
      if (d > 0.0) pos = pos + dir * d;
      const double remaining = params.move_dist - std::max(d, 0.0);
      if (block != nullptr && hit_t - 1e-3 < params.move_dist &&
          remaining > 1e-9) {
        Vec2 tangent = block->seg.b - block->seg.a;
        const double len = std::sqrt(tangent.x * tangent.x +
                                     tangent.y * tangent.y);
        if (len > 0.0) {
          tangent = tangent * (1.0 / len);
          const double along = dir.x * tangent.x + dir.y * tangent.y;
          if (std::abs(along) > 1e-12) {
            const Vec2 slide_dir =
                along > 0.0 ? tangent : Vec2{-tangent.x, -tangent.y};
            const double want = remaining * std::abs(along);
            double slide_max = want;
            for (const Wall& w : geo.walls) {
              if (w.shortcut && state.shortcut_open) continue;
              if (auto t = ray_segment_intersection(pos, slide_dir, w.seg)) {
                slide_max = std::min(slide_max, *t - 1e-3);
              }
            }
            if (slide_max > 0.0) pos = pos + slide_dir * slide_max;
          }
        }
      }
      r.state.x = pos.x;
      r.state.y = pos.y;
      break;
    }
    case ActionId::NoOp:
      break;
  }
  r.state.step_count = state.step_count + 1;
  if (geo.goal_box.contains({r.state.x, r.state.y})) {
    r.reward = 1.0;
    r.done = true;
  } else if (r.state.step_count >= params.max_steps) {
    r.done = true;
    r.truncated = true;
  }
  r.obs = observe(geo, params, r.state);
  return r;
}

PathLabel classify_path(const std::vector<Vec2>& trajectory,
                        const MazeGeometry& geo) {
  const double Y = geo.long_wall_y;
  for (size_t i = 1; i < trajectory.size(); ++i) {
    const Vec2& a = trajectory[i - 1];
    const Vec2& b = trajectory[i];
    const bool crosses = (a.y < Y && b.y >= Y) || (a.y >= Y && b.y < Y);
    if (!crosses) continue;
    const double u = (Y - a.y) / (b.y - a.y);
    const double cx = a.x + u * (b.x - a.x);
    if (cx >= geo.shortcut_x0 && cx <= geo.shortcut_x1) return PathLabel::Shortcut;
    if (cx >= geo.entrance_x0 && cx <= geo.entrance_x1) return PathLabel::LongPath;
    // Crossing outside both gaps would mean the trajectory passed through a
    // wall; classify by the nearer gap rather than failing.
    const double ds = std::min(std::abs(cx - geo.shortcut_x0),
                               std::abs(cx - geo.shortcut_x1));
    const double de = std::min(std::abs(cx - geo.entrance_x0),
                               std::abs(cx - geo.entrance_x1));
    return ds < de ? PathLabel::Shortcut : PathLabel::LongPath;
  }
  return PathLabel::NoEntry;
}

}  // namespace navrep
