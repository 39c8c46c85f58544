#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "navrep/geometry.hpp"
#include "navrep/rng.hpp"

namespace navrep {

// Scalar color codes returned by the ray caster.
constexpr double kColorWhite = 0.0;
constexpr double kColorPurple = 1.0;

struct Wall {
  Segment seg;
  double color = kColorWhite;
  bool shortcut = false;  // active only when the shortcut is closed
};

struct Rect {
  double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
  bool contains(const Vec2& p) const {
    return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1;
  }
};

// The arena: a [0,300]^2 square with a horizontal wall at y=250 separating
// the lower region from a 50-unit corridor. The wall has two openings: the
// long-path entrance on the left and a shortcut gap that is blocked by a
// purple wall segment on closed-shortcut episodes. The goal sits in the
// top-right corner of the corridor.
struct MazeGeometry {
  double arena_size = 300.0;
  double corridor_height = 50.0;
  double long_wall_y = 250.0;
  double entrance_x0 = 0.0, entrance_x1 = 40.0;
  double shortcut_x0 = 150.0, shortcut_x1 = 190.0;
  Rect goal_box{270.0, 270.0, 300.0, 300.0};
  std::vector<Wall> walls;  // built by make_default_geometry

  bool in_arena(const Vec2& p) const {
    return p.x >= 0.0 && p.x <= arena_size && p.y >= 0.0 && p.y <= arena_size;
  }
};

MazeGeometry make_default_geometry();

struct EnvParams {
  double p = 0.5;              // shortcut-open probability per episode
  int max_steps = 200;
  double move_dist = 10.0;
  double turn_angle = 0.2;
  double gamma = 0.97;
  int n_rays = 12;
  double fov = M_PI / 2.0;
  double start_y_max = 240.0;  // starts stay below the corridor
};

struct EnvState {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;  // radians in [0, 2pi)
  bool shortcut_open = false;
  int step_count = 0;
};

using Observation = std::vector<double>;  // 2 * n_rays, (color, distance) pairs

enum class ActionId : int { TurnLeft = 0, TurnRight = 1, Forward = 2, NoOp = 3 };
constexpr int kNumActions = 4;

enum class PathLabel : int { Shortcut = 0, LongPath = 1, NoEntry = 2 };

struct RayHit {
  double color = 0.0;
  double distance = 0.0;
};

// Nearest intersection of a ray with any active wall. Distances are raw world
// units (normalization happens in observe). Throws if nothing is hit, which
// cannot happen inside an intact closed arena.
RayHit cast_ray(const MazeGeometry& geo, const Vec2& origin, double angle,
                bool shortcut_open);

Observation observe(const MazeGeometry& geo, const EnvParams& params,
                    const EnvState& state);

struct StepResult {
  EnvState state;
  double reward = 0.0;
  bool done = false;
  bool truncated = false;  // done via the step limit, not the goal
  Observation obs;
};

EnvState reset_state(const MazeGeometry& geo, const EnvParams& params, Rng& rng);

StepResult step(const MazeGeometry& geo, const EnvParams& params,
                const EnvState& state, ActionId action);

PathLabel classify_path(const std::vector<Vec2>& trajectory,
                        const MazeGeometry& geo);

// True when the point is within `margin` of any active wall or outside the
// arena. Used by reset rejection sampling and containment checks.
bool near_wall(const MazeGeometry& geo, const Vec2& p, bool shortcut_open,
               double margin);

// Convenience wrapper owning geometry, params, state and an RNG stream.
class MazeEnv {
 public:
  MazeEnv(MazeGeometry geo, EnvParams params, uint64_t seed)
      : geo_(std::move(geo)), params_(params), rng_(seed) {}

  Observation reset() {
    state_ = reset_state(geo_, params_, rng_);
    done_ = false;
    return observe(geo_, params_, state_);
  }

  // Reset to a fixed start (evaluation / replay).
  Observation reset_to(const EnvState& start) {
    state_ = start;
    state_.step_count = 0;
    done_ = false;
    return observe(geo_, params_, state_);
  }

  StepResult step(ActionId action) {
    StepResult r = navrep::step(geo_, params_, state_, action);
    state_ = r.state;
    done_ = r.done;
    return r;
  }

  const EnvState& state() const { return state_; }
  const MazeGeometry& geometry() const { return geo_; }
  const EnvParams& params() const { return params_; }
  bool done() const { return done_; }

 private:
  MazeGeometry geo_;
  EnvParams params_;
  EnvState state_;
  Rng rng_;
  bool done_ = true;
};

}  // namespace navrep
