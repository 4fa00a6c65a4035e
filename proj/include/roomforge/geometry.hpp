#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

namespace roomforge {

constexpr double kPi = 3.14159265358979323846;

inline double deg2rad(double d) { return d * kPi / 180.0; }
inline double rad2deg(double r) { return r * 180.0 / kPi; }

// Normalize an angle to [0, 360).
inline double wrap_deg(double a) {
  a = std::fmod(a, 360.0);
  if (a < 0) a += 360.0;
  return a;
}

// Signed shortest difference a-b in (-180, 180].
inline double angle_diff_deg(double a, double b) {
  double d = std::fmod(a - b, 360.0);
  if (d > 180.0) d -= 360.0;
  if (d <= -180.0) d += 360.0;
  return d;
}

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double dot(Vec2 o) const { return x * o.x + y * o.y; }
  double cross(Vec2 o) const { return x * o.y - y * o.x; }
  double norm() const { return std::hypot(x, y); }
  Vec2 normalized() const {
    double n = norm();
    return n > 0 ? Vec2{x / n, y / n} : Vec2{0, 0};
  }
  bool operator==(const Vec2&) const = default;
};

// Heading convention: 0 deg faces +y, 90 deg faces +x (clockwise compass).
inline Vec2 heading_vec(double deg) {
  double r = deg2rad(deg);
  return {std::sin(r), std::cos(r)};
}

// Bearing from `from` toward `to` in degrees, same convention.
inline double bearing_deg(Vec2 from, Vec2 to) {
  Vec2 d = to - from;
  if (d.x == 0.0 && d.y == 0.0) return 0.0;
  return wrap_deg(rad2deg(std::atan2(d.x, d.y)));
}

struct Segment {
  Vec2 a;
  Vec2 b;
};

inline double point_segment_distance(Vec2 p, const Segment& s) {
  Vec2 ab = s.b - s.a;
  double len2 = ab.dot(ab);
  if (len2 == 0.0) return (p - s.a).norm();
  double t = std::clamp((p - s.a).dot(ab) / len2, 0.0, 1.0);
  Vec2 proj = s.a + ab * t;
  return (p - proj).norm();
}

inline bool segments_intersect(const Segment& s1, const Segment& s2) {
  auto orient = [](Vec2 a, Vec2 b, Vec2 c) {
    double v = (b - a).cross(c - a);
    if (v > 1e-12) return 1;
    if (v < -1e-12) return -1;
    return 0;
  };
  int o1 = orient(s1.a, s1.b, s2.a);
  int o2 = orient(s1.a, s1.b, s2.b);
  int o3 = orient(s2.a, s2.b, s1.a);
  int o4 = orient(s2.a, s2.b, s1.b);
  if (o1 != o2 && o3 != o4) return true;
  auto on = [&](Vec2 a, Vec2 b, Vec2 c) {
    return orient(a, b, c) == 0 && c.x >= std::min(a.x, b.x) - 1e-12 &&
           c.x <= std::max(a.x, b.x) + 1e-12 && c.y >= std::min(a.y, b.y) - 1e-12 &&
           c.y <= std::max(a.y, b.y) + 1e-12;
  };
  return on(s1.a, s1.b, s2.a) || on(s1.a, s1.b, s2.b) || on(s2.a, s2.b, s1.a) ||
         on(s2.a, s2.b, s1.b);
}

inline double segment_segment_distance(const Segment& s1, const Segment& s2) {
  if (segments_intersect(s1, s2)) return 0.0;
  return std::min(std::min(point_segment_distance(s1.a, s2), point_segment_distance(s1.b, s2)),
                  std::min(point_segment_distance(s2.a, s1), point_segment_distance(s2.b, s1)));
}

// Axis-aligned w x d rectangle rotated by rot_deg about its center. Width runs
// across the facing direction, depth along it.
struct OrientedRect {
  Vec2 center;
  double half_w = 0.0;
  double half_d = 0.0;
  double rot_deg = 0.0;

  std::array<Vec2, 4> corners() const {
    Vec2 f = heading_vec(rot_deg);       // facing
    Vec2 r = {f.y, -f.x};                // right-hand side
    Vec2 dw = r * half_w;
    Vec2 dd = f * half_d;
    return {center + dw + dd, center - dw + dd, center - dw - dd, center + dw - dd};
  }

  std::array<Segment, 4> edges() const {
    auto c = corners();
    return {Segment{c[0], c[1]}, Segment{c[1], c[2]}, Segment{c[2], c[3]}, Segment{c[3], c[0]}};
  }

  bool contains(Vec2 p) const {
    Vec2 f = heading_vec(rot_deg);
    Vec2 r = {f.y, -f.x};
    Vec2 d = p - center;
    return std::abs(d.dot(r)) <= half_w + 1e-12 && std::abs(d.dot(f)) <= half_d + 1e-12;
  }
};

// Separating axis test for two oriented rectangles. Touching counts as overlap.
inline bool rects_overlap(const OrientedRect& a, const OrientedRect& b) {
  auto project = [](const OrientedRect& r, Vec2 axis, double& lo, double& hi) {
    auto cs = r.corners();
    lo = hi = cs[0].dot(axis);
    for (int i = 1; i < 4; ++i) {
      double v = cs[i].dot(axis);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  };
  Vec2 fa = heading_vec(a.rot_deg), fb = heading_vec(b.rot_deg);
  const Vec2 axes[4] = {fa, {fa.y, -fa.x}, fb, {fb.y, -fb.x}};
  for (const Vec2& axis : axes) {
    double alo, ahi, blo, bhi;
    project(a, axis, alo, ahi);
    project(b, axis, blo, bhi);
    if (ahi < blo - 1e-12 || bhi < alo - 1e-12) return false;
  }
  return true;
}

inline double rect_segment_distance(const OrientedRect& r, const Segment& s) {
  if (r.contains(s.a) || r.contains(s.b)) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& e : r.edges()) best = std::min(best, segment_segment_distance(e, s));
  return best;
}

inline double rect_rect_distance(const OrientedRect& a, const OrientedRect& b) {
  if (rects_overlap(a, b)) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& e : b.edges()) best = std::min(best, rect_segment_distance(a, e));
  return best;
}

inline double point_rect_distance(Vec2 p, const OrientedRect& r) {
  if (r.contains(p)) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& e : r.edges()) best = std::min(best, point_segment_distance(p, e));
  return best;
}

// Nearest point of the rectangle to p (p itself when inside).
inline Vec2 rect_closest_point(const OrientedRect& r, Vec2 p) {
  if (r.contains(p)) return p;
  Vec2 best{};
  double bd = std::numeric_limits<double>::infinity();
  for (const auto& e : r.edges()) {
    Vec2 ab = e.b - e.a;
    double len2 = ab.dot(ab);
    double t = len2 == 0 ? 0.0 : std::clamp((p - e.a).dot(ab) / len2, 0.0, 1.0);
    Vec2 q = e.a + ab * t;
    double d = (p - q).norm();
    if (d < bd) {
      bd = d;
      best = q;
    }
  }
  return best;
}

// Simple closed polygon, counter-clockwise. Used for room floors.
struct Polygon {
  std::vector<Vec2> pts;

  bool contains(Vec2 p) const {
    bool in = false;
    size_t n = pts.size();
    for (size_t i = 0, j = n - 1; i < n; j = i++) {
      const Vec2& a = pts[i];
      const Vec2& b = pts[j];
      // Boundary points count as inside.
      if (point_segment_distance(p, {a, b}) < 1e-9) return true;
      if ((a.y > p.y) != (b.y > p.y)) {
        double xi = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
        if (p.x < xi) in = !in;
      }
    }
    return in;
  }

  std::vector<Segment> edges() const {
    std::vector<Segment> out;
    size_t n = pts.size();
    out.reserve(n);
    for (size_t i = 0; i < n; ++i) out.push_back({pts[i], pts[(i + 1) % n]});
    return out;
  }

  double boundary_distance(Vec2 p) const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& e : edges()) best = std::min(best, point_segment_distance(p, e));
    return best;
  }

  // Bounding box.
  void bounds(Vec2& lo, Vec2& hi) const {
    lo = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    hi = {-lo.x, -lo.y};
    for (const auto& p : pts) {
      lo.x = std::min(lo.x, p.x);
      lo.y = std::min(lo.y, p.y);
      hi.x = std::max(hi.x, p.x);
      hi.y = std::max(hi.y, p.y);
    }
  }

  Vec2 centroid() const {
    double a = 0, cx = 0, cy = 0;
    size_t n = pts.size();
    for (size_t i = 0; i < n; ++i) {
      const Vec2& p = pts[i];
      const Vec2& q = pts[(i + 1) % n];
      double w = p.cross(q);
      a += w;
      cx += (p.x + q.x) * w;
      cy += (p.y + q.y) * w;
    }
    if (std::abs(a) < 1e-12) return pts.empty() ? Vec2{} : pts[0];
    return {cx / (3 * a), cy / (3 * a)};
  }
};

// Strict crossing: segments intersect in a single interior point. Collinear
// overlap and endpoint touches do not count.
inline bool segments_properly_intersect(const Segment& s1, const Segment& s2) {
  auto orient = [](Vec2 a, Vec2 b, Vec2 c) {
    double v = (b - a).cross(c - a);
    if (v > 1e-12) return 1;
    if (v < -1e-12) return -1;
    return 0;
  };
  int o1 = orient(s1.a, s1.b, s2.a);
  int o2 = orient(s1.a, s1.b, s2.b);
  int o3 = orient(s2.a, s2.b, s1.a);
  int o4 = orient(s2.a, s2.b, s1.b);
  return o1 * o2 < 0 && o3 * o4 < 0;
}

// True iff the rectangle lies fully inside the polygon (corners inside and no
// proper edge crossing; flush wall contact is allowed). Handles concave floors
// such as L-shapes.
inline bool rect_inside_polygon(const OrientedRect& r, const Polygon& poly) {
  for (const auto& c : r.corners())
    if (!poly.contains(c)) return false;
  for (const auto& re : r.edges())
    for (const auto& pe : poly.edges())
      if (segments_properly_intersect(re, pe)) return false;
  return true;
}

// Distance from the rectangle footprint to the nearest polygon edge.
inline double rect_polygon_boundary_distance(const OrientedRect& r, const Polygon& poly) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& pe : poly.edges()) best = std::min(best, rect_segment_distance(r, pe));
  return best;
}

}  // namespace roomforge
