#pragma once

#include <cmath>
#include <optional>

namespace navrep {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double norm() const { return std::hypot(x, y); }
};

struct Segment {
  Vec2 a;
  Vec2 b;
};

// Parametric distance t >= 0 along the ray (origin, direction) to the first
// intersection with the segment, or nullopt. Direction must be unit length.
inline std::optional<double> ray_segment_intersection(const Vec2& origin,
                                                      const Vec2& dir,
                                                      const Segment& seg) {
  const Vec2 e = seg.b - seg.a;
  const double denom = dir.x * e.y - dir.y * e.x;
  if (std::abs(denom) < 1e-14) return std::nullopt;  // parallel
  const Vec2 d = seg.a - origin;
  const double t = (d.x * e.y - d.y * e.x) / denom;
  const double s = (d.x * dir.y - d.y * dir.x) / denom;
  if (t < 0.0 || s < 0.0 || s > 1.0) return std::nullopt;
  return t;
}

// Distance from a point to a segment.
inline double point_segment_distance(const Vec2& p, const Segment& seg) {
  const Vec2 e = seg.b - seg.a;
  const double len2 = e.dot(e);
  if (len2 == 0.0) return (p - seg.a).norm();
  double u = (p - seg.a).dot(e) / len2;
  u = std::clamp(u, 0.0, 1.0);
  return (p - (seg.a + e * u)).norm();
}

inline double wrap_angle(double a) {
  const double two_pi = 2.0 * M_PI;
  a = std::fmod(a, two_pi);
  if (a < 0.0) a += two_pi;
  return a;
}

}  // namespace navrep
