#pragma once

// Bounded planar domains with exact signed distance to the boundary, and the
// ball families used by the weighted Hoelder semi-norm.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "besov/error.hpp"

namespace besov {

using Point = std::array<double, 2>;

/// Axis-aligned cube [lo, lo+side]^d. For d = 1 the second coordinate is unused.
struct Cube {
  int d = 2;
  Point lo{0.0, 0.0};
  double side = 1.0;

  bool contains(const Point& x, double tol = 0.0) const {
    for (int i = 0; i < d; ++i)
      if (x[i] < lo[i] - tol || x[i] > lo[i] + side + tol) return false;
    return true;
  }
  bool contains(const Cube& other, double tol = 1e-12) const {
    if (other.d != d) return false;
    for (int i = 0; i < d; ++i)
      if (other.lo[i] < lo[i] - tol || other.lo[i] + other.side > lo[i] + side + tol) return false;
    return true;
  }
  friend bool operator==(const Cube& a, const Cube& b) {
    if (a.d != b.d || a.side != b.side) return false;
    for (int i = 0; i < a.d; ++i)
      if (a.lo[i] != b.lo[i]) return false;
    return true;
  }
};

enum class DomainKind { unit_square, scaled_cube, l_shape, polygon, circular_sector };

inline const char* to_string(DomainKind k) {
  switch (k) {
    case DomainKind::unit_square: return "unit-square";
    case DomainKind::scaled_cube: return "scaled-cube";
    case DomainKind::l_shape: return "L-shape";
    case DomainKind::polygon: return "polygon";
    case DomainKind::circular_sector: return "circular-sector";
  }
  return "?";
}

namespace detail {

inline double seg_dist(const Point& x, const Point& a, const Point& b) {
  const double vx = b[0] - a[0], vy = b[1] - a[1];
  const double wx = x[0] - a[0], wy = x[1] - a[1];
  const double len2 = vx * vx + vy * vy;
  double t = len2 > 0 ? (wx * vx + wy * vy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(wx - t * vx, wy - t * vy);
}

inline double cross(const Point& o, const Point& a, const Point& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

inline bool on_segment(const Point& p, const Point& a, const Point& b) {
  return std::min(a[0], b[0]) <= p[0] && p[0] <= std::max(a[0], b[0]) && std::min(a[1], b[1]) <= p[1] &&
         p[1] <= std::max(a[1], b[1]);
}

inline bool segments_intersect(const Point& a, const Point& b, const Point& c, const Point& e) {
  const double d1 = cross(c, e, a), d2 = cross(c, e, b), d3 = cross(a, b, c), d4 = cross(a, b, e);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) return true;
  if (d1 == 0 && on_segment(a, c, e)) return true;
  if (d2 == 0 && on_segment(b, c, e)) return true;
  if (d3 == 0 && on_segment(c, a, b)) return true;
  if (d4 == 0 && on_segment(e, a, b)) return true;
  return false;
}

// Crossing-number test; points on the boundary may go either way, callers
// only rely on the sign away from the boundary.
inline bool inside_polygon(const Point& x, const std::vector<Point>& v) {
  bool in = false;
  const std::size_t n = v.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point& a = v[i];
    const Point& b = v[j];
    if ((a[1] > x[1]) != (b[1] > x[1])) {
      const double xc = a[0] + (x[1] - a[1]) * (b[0] - a[0]) / (b[1] - a[1]);
      if (x[0] < xc) in = !in;
    }
  }
  return in;
}

inline double angle_0_2pi(double y, double x) {
  double t = std::atan2(y, x);
  if (t < 0) t += 2.0 * std::numbers::pi;
  return t;
}

}  // namespace detail

/// Analytic description of a bounded domain and its bounding cube.
struct DomainSpec {
  DomainKind kind = DomainKind::unit_square;
  Cube bbox;                   // the domain itself for square/cube kinds
  std::vector<Point> vertices;  // polygon and L-shape
  double radius = 0;           // sector
  double omega = 0;            // sector central angle

  int dim() const { return bbox.d; }

  /// Exact distance to the boundary, positive inside, negative outside.
  double signed_distance(const Point& x) const {
    switch (kind) {
      case DomainKind::unit_square:
      case DomainKind::scaled_cube: return cube_signed_distance(x);
      case DomainKind::l_shape:
      case DomainKind::polygon: return polygon_signed_distance(x);
      case DomainKind::circular_sector: return sector_signed_distance(x);
    }
    return 0.0;
  }

  bool contains(const Point& x) const { return signed_distance(x) > 0.0; }

  double diameter() const {
    switch (kind) {
      case DomainKind::unit_square:
      case DomainKind::scaled_cube: return bbox.side * std::sqrt(static_cast<double>(bbox.d));
      case DomainKind::l_shape:
      case DomainKind::polygon: {
        double m = 0;
        for (const auto& a : vertices)
          for (const auto& b : vertices) m = std::max(m, std::hypot(a[0] - b[0], a[1] - b[1]));
        return m;
      }
      case DomainKind::circular_sector:
        return std::max(radius, 2.0 * radius * std::sin(std::min(omega, std::numbers::pi) / 2.0));
    }
    return 0.0;
  }

  /// True if the closure of the domain lies in the cube.
  bool fits_in(const Cube& c) const {
    if (c.d != bbox.d) return false;
    const double tol = 1e-12 * std::max(1.0, c.side);
    switch (kind) {
      case DomainKind::unit_square:
      case DomainKind::scaled_cube: return c.contains(bbox, tol);
      case DomainKind::l_shape:
      case DomainKind::polygon:
        return std::all_of(vertices.begin(), vertices.end(), [&](const Point& v) { return c.contains(v, tol); });
      case DomainKind::circular_sector: {
        std::vector<Point> pts{{0.0, 0.0}, {radius, 0.0}, {radius * std::cos(omega), radius * std::sin(omega)}};
        for (int q = 1; q < 4; ++q) {
          const double a = q * std::numbers::pi / 2.0;
          if (a < omega) pts.push_back({radius * std::cos(a), radius * std::sin(a)});
        }
        return std::all_of(pts.begin(), pts.end(), [&](const Point& v) { return c.contains(v, tol); });
      }
    }
    return false;
  }

 private:
  double cube_signed_distance(const Point& x) const {
    double inside = std::numeric_limits<double>::infinity();
    double out2 = 0.0;
    bool outside = false;
    for (int i = 0; i < bbox.d; ++i) {
      const double a = x[i] - bbox.lo[i];
      const double b = bbox.lo[i] + bbox.side - x[i];
      inside = std::min({inside, a, b});
      const double o = std::max({-a, -b, 0.0});
      if (o > 0) outside = true;
      out2 += o * o;
    }
    return outside ? -std::sqrt(out2) : inside;
  }

  double polygon_signed_distance(const Point& x) const {
    double dmin = std::numeric_limits<double>::infinity();
    const std::size_t n = vertices.size();
    for (std::size_t i = 0; i < n; ++i) dmin = std::min(dmin, detail::seg_dist(x, vertices[i], vertices[(i + 1) % n]));
    return detail::inside_polygon(x, vertices) ? dmin : -dmin;
  }

  double sector_signed_distance(const Point& x) const {
    const Point o{0.0, 0.0};
    const Point a{radius, 0.0};
    const Point b{radius * std::cos(omega), radius * std::sin(omega)};
    const double r = std::hypot(x[0], x[1]);
    const double th = detail::angle_0_2pi(x[1], x[0]);
    double dmin = std::min(detail::seg_dist(x, o, a), detail::seg_dist(x, o, b));
    if (th <= omega) dmin = std::min(dmin, std::fabs(r - radius));
    const bool in = r < radius && th > 0.0 && th < omega;
    return in ? dmin : -dmin;
  }
};

inline DomainSpec unit_square() {
  DomainSpec s;
  s.kind = DomainKind::unit_square;
  s.bbox = Cube{2, {0.0, 0.0}, 1.0};
  return s;
}

/// Cube [lo, lo+side]^d; d = 1 gives an interval for one-dimensional checks.
inline DomainSpec cube_domain(int d, Point lo, double side) {
  require(d == 1 || d == 2, "cube domain supports d = 1 or 2");
  require(side > 0, "cube side must be positive");
  DomainSpec s;
  s.kind = DomainKind::scaled_cube;
  if (d == 1) lo[1] = 0.0;
  s.bbox = Cube{d, lo, side};
  return s;
}

inline DomainSpec interval(double lo, double hi) { return cube_domain(1, {lo, 0.0}, hi - lo); }

namespace detail {

inline Cube enclosing_square(const std::vector<Point>& v) {
  double x0 = v[0][0], x1 = v[0][0], y0 = v[0][1], y1 = v[0][1];
  for (const auto& p : v) {
    x0 = std::min(x0, p[0]);
    x1 = std::max(x1, p[0]);
    y0 = std::min(y0, p[1]);
    y1 = std::max(y1, p[1]);
  }
  return Cube{2, {x0, y0}, std::max(x1 - x0, y1 - y0)};
}

inline void check_simple(const std::vector<Point>& v) {
  const std::size_t n = v.size();
  require(n >= 3, "polygon needs at least 3 vertices");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
      if (adjacent) continue;
      if (segments_intersect(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n]))
        throw PreconditionError("polygon is not simple");
    }
  }
  double area2 = 0;
  for (std::size_t i = 0; i < n; ++i) area2 += cross({0, 0}, v[i], v[(i + 1) % n]);
  require(std::fabs(area2) > 0, "polygon is degenerate");
}

}  // namespace detail

/// Simple polygon; the bounding cube is the smallest enclosing square anchored
/// at the lower-left corner of the vertex box unless one is supplied.
inline DomainSpec polygon(std::vector<Point> vertices, std::optional<Cube> box = std::nullopt) {
  if (vertices.size() > 1 && vertices.front() == vertices.back()) vertices.pop_back();
  detail::check_simple(vertices);
  DomainSpec s;
  s.kind = DomainKind::polygon;
  s.vertices = std::move(vertices);
  s.bbox = box ? *box : detail::enclosing_square(s.vertices);
  require(s.fits_in(s.bbox), "polygon does not fit in its bounding cube");
  return s;
}

/// The unit square with its upper-right quarter removed.
inline DomainSpec l_shape() {
  DomainSpec s = polygon({{0, 0}, {1, 0}, {1, 0.5}, {0.5, 0.5}, {0.5, 1}, {0, 1}}, Cube{2, {0, 0}, 1.0});
  s.kind = DomainKind::l_shape;
  return s;
}

/// Open sector {r < R, 0 < theta < omega} in the cube [-R, R]^2.
inline DomainSpec sector(double radius, double omega) {
  require(radius > 0, "sector radius must be positive");
  require(omega > 0 && omega < 2.0 * std::numbers::pi, "sector angle must lie in (0, 2pi)");
  DomainSpec s;
  s.kind = DomainKind::circular_sector;
  s.radius = radius;
  s.omega = omega;
  s.bbox = Cube{2, {-radius, -radius}, 2.0 * radius};
  return s;
}

/// Distance to the boundary. Requires x in the bounding cube.
inline double distance_to_boundary(const DomainSpec& dom, const Point& x) {
  require(dom.bbox.contains(x, 1e-12 * dom.bbox.side), "point outside the bounding cube");
  return dom.signed_distance(x);
}

/// Closed ball in the domain. delta is the distance of the ball to the boundary.
struct Ball {
  Point center{0.0, 0.0};
  double radius = 0;
  double delta = 0;
};

/// Ball with radius r at center if the open concentric ball of radius c*r lies
/// in the domain, otherwise nullopt.
inline std::optional<Ball> make_ball(const DomainSpec& dom, const Point& center, double r, double c) {
  require(c > 1, "family constant c must exceed 1");
  require(r > 0, "ball radius must be positive");
  const double sd = dom.signed_distance(center);
  if (!(sd >= c * r)) return std::nullopt;
  return Ball{center, r, sd - r};
}

/// Balls of radius side*2^-j for j in [jmin, jmax], centered on the lattice
/// lo + i*r inside the bounding cube, kept when the c-expansion fits.
inline std::vector<Ball> ball_family(const DomainSpec& dom, double c, int jmin, int jmax) {
  require(c > 1, "family constant c must exceed 1");
  require(jmin >= 0 && jmin <= jmax && jmax <= 30, "invalid level range");
  require(dom.dim() == 2, "ball families are built in d = 2");
  std::vector<Ball> out;
  const Cube& b = dom.bbox;
  for (int j = jmin; j <= jmax; ++j) {
    const double r = b.side * std::ldexp(1.0, -j);
    const long n = 1L << j;
    for (long i2 = 1; i2 < n; ++i2)
      for (long i1 = 1; i1 < n; ++i1) {
        const Point x{b.lo[0] + i1 * r, b.lo[1] + i2 * r};
        if (auto ball = make_ball(dom, x, r, c)) out.push_back(*ball);
      }
  }
  return out;
}

}  // namespace besov
