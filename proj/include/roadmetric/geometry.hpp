#pragma once

// Planar primitives: points, lines in (angle, normal offset) form,
// intersections, projections, refraction solutions and a few
// integral-geometry helpers for the invariant measure on lines.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

namespace roadmetric {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Angular tolerance below which two lines are treated as parallel.
inline constexpr double kParallelTol = 1e-12;

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
  friend constexpr Point operator*(Point a, double s) { return {s * a.x, s * a.y}; }
  friend constexpr bool operator==(Point a, Point b) = default;
};

constexpr double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }
inline double distance(Point a, Point b) { return norm(a - b); }

/// Reduces an angle to [0, pi).
inline double wrap_half_turn(double theta) {
  double t = std::fmod(theta, kPi);
  if (t < 0.0) t += kPi;
  if (t >= kPi) t -= kPi;
  return t;
}

/// An affine line. The point set is {t*dir + w*normal : t real} with
/// dir = (cos theta, sin theta) and normal = (-sin theta, cos theta).
/// theta is kept in [0, pi) so every line has exactly one representation.
struct Line {
  double theta = 0.0;
  double w = 0.0;

  Line() = default;
  Line(double theta_in, double w_in) {
    // Shifting the angle by pi flips the normal, so the offset flips sign.
    const double k = std::floor(theta_in / kPi);
    theta = theta_in - k * kPi;
    w = (static_cast<std::int64_t>(k) % 2 == 0) ? w_in : -w_in;
    if (theta >= kPi) {
      theta -= kPi;
      w = -w;
    }
    if (theta < 0.0) theta = 0.0;
  }

  static Line through(Point a, Point b) {
    const Point d = b - a;
    if (d.x == 0.0 && d.y == 0.0) throw std::invalid_argument("Line::through: coincident points");
    return from_point_direction(a, d);
  }

  static Line from_point_direction(Point p, Point d) {
    const double theta = std::atan2(d.y, d.x);
    Line l(theta, 0.0);
    l.w = dot(p, l.normal());
    return l;
  }

  Point dir() const { return {std::cos(theta), std::sin(theta)}; }
  Point normal() const { return {-std::sin(theta), std::cos(theta)}; }

  /// Signed distance from p to the line, positive on the normal side.
  double signed_distance(Point p) const { return dot(p, normal()) - w; }
  double abscissa(Point p) const { return dot(p, dir()); }
  Point at(double t) const { return t * dir() + w * normal(); }

  friend bool operator==(const Line&, const Line&) = default;
};

/// Lines ordered by (theta, w); used to make symmetric routines bitwise
/// independent of argument order.
inline bool line_less(const Line& a, const Line& b) {
  return a.theta < b.theta || (a.theta == b.theta && a.w < b.w);
}

struct Segment {
  Point a;
  Point b;
  double length() const { return distance(a, b); }
};

/// Smallest angle between two line directions, in [0, pi/2].
inline double angle_between(const Line& a, const Line& b) {
  double d = std::fabs(a.theta - b.theta);
  if (d > kPi / 2) d = kPi - d;
  return d;
}

/// Unique crossing point of two lines, or nullopt when they are parallel
/// (directions within kParallelTol radians of each other).
inline std::optional<Point> intersect(const Line& l1, const Line& l2) {
  if (angle_between(l1, l2) < kParallelTol) return std::nullopt;
  const Line& a = line_less(l1, l2) ? l1 : l2;
  const Line& b = line_less(l1, l2) ? l2 : l1;
  const Point na = a.normal();
  const Point nb = b.normal();
  // Solve <p, na> = wa, <p, nb> = wb by Cramer's rule.
  const double det = cross(na, nb);
  return Point{(a.w * nb.y - b.w * na.y) / det, (na.x * b.w - nb.x * a.w) / det};
}

inline Point project(Point p, const Line& l) { return l.at(l.abscissa(p)); }

inline double distance_to_line(Point p, const Line& l) { return std::fabs(l.signed_distance(p)); }

/// Distance from p to the closed segment [a, b].
inline double distance_to_segment(Point p, Point a, Point b) {
  const Point d = b - a;
  const double len2 = dot(d, d);
  if (len2 == 0.0) return distance(p, a);
  const double t = std::clamp(dot(p - a, d) / len2, 0.0, 1.0);
  return distance(p, a + t * d);
}

/// Euclidean distance between two closed segments.
inline double segment_distance(Point a, Point b, Point c, Point d) {
  const Point r = b - a;
  const Point s = d - c;
  const double denom = cross(r, s);
  if (denom != 0.0) {
    const double t = cross(c - a, s) / denom;
    const double u = cross(c - a, r) / denom;
    if (t >= 0.0 && t <= 1.0 && u >= 0.0 && u <= 1.0) return 0.0;
  }
  return std::min({distance_to_segment(a, c, d), distance_to_segment(b, c, d),
                   distance_to_segment(c, a, b), distance_to_segment(d, a, b)});
}

// ---------------------------------------------------------------------------
// Invariant line measure (d = 2). mu is normalised so that the lines
// hitting a ball of radius r have measure 2r; in the (theta, w) chart it is
// dtheta/pi x dw.

inline double mu_ball(double r) {
  if (!(r >= 0.0)) throw std::invalid_argument("mu_ball: negative radius");
  return 2.0 * r;
}

struct MeasureEstimate {
  double value = 0.0;
  double stderr_ = 0.0;
};

/// Monte Carlo estimate of mu of the lines hitting both B(c1, r) and
/// B(c2, s). Lines are drawn uniformly among those hitting B(c1, r) (total
/// mass 2r) and the hit fraction on B(c2, s) is scaled by that mass.
template <class Rng>
MeasureEstimate mu_two_balls_mc(Point c1, double r, Point c2, double s, std::uint64_t n, Rng& rng) {
  if (r < 0.0 || s < 0.0) throw std::invalid_argument("mu_two_balls_mc: negative radius");
  const double sep = distance(c1, c2);
  if (r + s > sep) throw std::invalid_argument("mu_two_balls_mc: balls overlap");
  if (n == 0) throw std::invalid_argument("mu_two_balls_mc: zero samples");
  if (r == 0.0 || s == 0.0) return {0.0, 0.0};
  std::uniform_real_distribution<double> angle(0.0, kPi);
  std::uniform_real_distribution<double> offset(-r, r);
  std::uint64_t hits = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    const double theta = angle(rng);
    const Point nrm{-std::sin(theta), std::cos(theta)};
    const double w = dot(c1, nrm) + offset(rng);
    if (std::fabs(dot(c2, nrm) - w) <= s) ++hits;
  }
  const double p = static_cast<double>(hits) / static_cast<double>(n);
  const double mass = mu_ball(r);
  return {mass * p, mass * std::sqrt(p * (1.0 - p) / static_cast<double>(n))};
}

// ---------------------------------------------------------------------------
// Refraction and road-crossing functionals.

/// The points y on l where leaving x at speed eps meets the road (speed v)
/// at the optimal angle, |<(y-x)/|y-x|, dir(l)>| = eps/v. Empty when the road
/// is not faster than eps or x lies on l.
inline std::vector<Point> refraction_points(Point x, const Line& l, double v, double eps) {
  if (!(eps > 0.0) || !(v > 0.0)) throw std::invalid_argument("refraction_points: speeds must be positive");
  const double h = distance_to_line(x, l);
  if (eps >= v || h < 1e-12) return {};
  const double c = eps / v;
  const double offset = h * c / std::sqrt(1.0 - c * c);
  const double t0 = l.abscissa(x);
  return {l.at(t0 + offset), l.at(t0 - offset)};
}

/// Speed of progress transverse to ref when driving l at speed v.
inline double vertical_speed(const Line& l, double v, const Line& ref) {
  return std::fabs(dot(l.dir(), ref.normal())) * v;
}

/// Ratio between the half length of ref's trace in the r-neighbourhood of
/// l and r: 1/|sin angle|, infinite for parallel lines.
inline double psi(const Line& l, const Line& ref) {
  const double s = std::fabs(cross(l.dir(), ref.dir()));
  if (s < kParallelTol) return kInf;
  return 1.0 / s;
}

/// phi(rho) = sqrt(1 - 2 dot rho + rho^2) / (1/v1 + rho/v2): speed at which a
/// straight shortcut between two crossing roads ties with driving through
/// their intersection.
inline double no_shortcut_phi(double rho, double dot_abs, double v1, double v2) {
  return std::sqrt(std::max(0.0, 1.0 - 2.0 * dot_abs * rho + rho * rho)) / (1.0 / v1 + rho / v2);
}

/// inf over rho > 0 of no_shortcut_phi. The only interior critical point is
/// rho* = (v1 + dot v2) / (v2 + dot v1); the boundary limits are v1 and v2.
inline double no_shortcut_inf(double dot_abs, double v1, double v2) {
  if (!(dot_abs >= 0.0 && dot_abs <= 1.0)) throw std::invalid_argument("no_shortcut_inf: dot outside [0,1]");
  if (!(v2 > 0.0) || !(v1 >= v2)) throw std::invalid_argument("no_shortcut_inf: need v1 >= v2 > 0");
  const double rho_star = (v1 + dot_abs * v2) / (v2 + dot_abs * v1);
  return std::min({no_shortcut_phi(rho_star, dot_abs, v1, v2), v1, v2});
}

// ---------------------------------------------------------------------------

struct ArcPolyline {
  std::vector<Point> vertices;
  double total_length = 0.0;
};

/// Chain of chords on the unit circle from x to y along the shorter arc
/// (counter-clockwise on a tie), each chord staying farther than rho from
/// the origin.
inline ArcPolyline arc_polyline(Point x, Point y, double rho) {
  if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("arc_polyline: rho outside (0,1)");
  if (std::fabs(norm(x) - 1.0) > 1e-9 || std::fabs(norm(y) - 1.0) > 1e-9)
    throw std::invalid_argument("arc_polyline: endpoints must lie on the unit circle");
  ArcPolyline out;
  out.vertices.push_back(x);
  if (x == y) return out;
  double sweep = std::atan2(cross(x, y), dot(x, y));
  if (sweep == -kPi) sweep = kPi;
  const double arc = std::fabs(sweep);
  // A chord spanning angle a sits at distance cos(a/2) from the origin.
  const double max_span = 2.0 * std::acos(rho);
  auto pieces = static_cast<int>(std::ceil(arc / max_span));
  pieces = std::max(pieces, 1);
  while (std::cos(arc / (2.0 * pieces)) <= rho) ++pieces;
  const double start = std::atan2(x.y, x.x);
  const double step = sweep / pieces;
  for (int i = 1; i < pieces; ++i) {
    const double a = start + step * i;
    out.vertices.push_back({std::cos(a), std::sin(a)});
  }
  out.vertices.push_back(y);
  for (std::size_t i = 1; i < out.vertices.size(); ++i)
    out.total_length += distance(out.vertices[i - 1], out.vertices[i]);
  return out;
}

}  // namespace roadmetric
