#pragma once

// Sampling of the Poisson road process restricted to the lines hitting a
// disc, with a lower speed cutoff, plus the scaling maps that leave the
// process invariant in law.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "roadmetric/geometry.hpp"
#include "roadmetric/rng.hpp"

namespace roadmetric {

using RoadId = std::int64_t;

struct Road {
  RoadId id = 0;
  Line line;
  double v = 0.0;

  friend bool operator==(const Road&, const Road&) = default;
};

/// A finite sample of the road process: every road whose line hits the
/// closed disc B(center, radius) and whose speed is at least v_min.
/// Roads are kept sorted by decreasing speed, ties broken by id.
struct Scene {
  std::vector<Road> roads;
  Point center;
  double radius = 1.0;
  double v_min = 1.0;
  double beta = 3.0;
  std::uint64_t seed = 0;

  /// Builds a scene from explicit roads (tests, hand-made configurations).
  static Scene from_roads(std::vector<Road> roads, Point center, double radius, double v_min, double beta,
                          std::uint64_t seed = 0) {
    Scene s;
    s.roads = std::move(roads);
    s.center = center;
    s.radius = radius;
    s.v_min = v_min;
    s.beta = beta;
    s.seed = seed;
    s.normalize();
    return s;
  }

  void normalize() {
    std::sort(roads.begin(), roads.end(), [](const Road& a, const Road& b) {
      return a.v > b.v || (a.v == b.v && a.id < b.id);
    });
    std::vector<RoadId> ids;
    ids.reserve(roads.size());
    for (const Road& r : roads) ids.push_back(r.id);
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) throw std::invalid_argument("Scene: duplicate road id");
    for (const Road& r : roads)
      if (!(r.v > 0.0)) throw std::invalid_argument("Scene: road speed must be positive");
  }

  const Road& road(RoadId id) const {
    for (const Road& r : roads)
      if (r.id == id) return r;
    throw std::out_of_range("Scene: unknown road id");
  }

  double v_max() const { return roads.empty() ? 0.0 : roads.front().v; }

  friend bool operator==(const Scene&, const Scene&) = default;
};

/// Expected number of roads hitting a disc of radius R with speed >= v0:
/// R * v0^-(beta-1) in the plane.
inline double expected_road_count(double R, double v0, double beta) { return R * std::pow(v0, -(beta - 1.0)); }

/// Inverse of the speed tail P(v >= t) = (t / v_min)^-(beta-1), for u in (0, 1].
inline double speed_from_uniform(double u, double v_min, double beta) { return v_min * std::pow(u, -1.0 / (beta - 1.0)); }

namespace detail {
inline constexpr std::uint64_t kCountStream = ~std::uint64_t{0};
}

inline Scene sample_scene(Point center, double R, double v_min, double beta, std::uint64_t seed) {
  if (!(R > 0.0)) throw std::invalid_argument("sample_scene: radius must be positive");
  if (!(v_min > 0.0)) throw std::invalid_argument("sample_scene: v_min must be positive");
  if (!(beta > 2.0)) throw std::invalid_argument("sample_scene: beta must exceed 2");

  auto count_rng = CounterRng::substream(seed, detail::kCountStream);
  std::poisson_distribution<std::int64_t> count(expected_road_count(R, v_min, beta));
  const std::int64_t n = count(count_rng);

  Scene s;
  s.center = center;
  s.radius = R;
  s.v_min = v_min;
  s.beta = beta;
  s.seed = seed;
  s.roads.reserve(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    auto rng = CounterRng::substream(seed, static_cast<std::uint64_t>(i));
    const double theta = kPi * rng.uniform();
    const double offset = R * (2.0 * rng.uniform() - 1.0);
    const double v = speed_from_uniform(rng.uniform_open_closed(), v_min, beta);
    Line l(theta, 0.0);
    l.w = dot(center, l.normal()) + offset;
    s.roads.push_back({i, l, v});
  }
  s.normalize();
  return s;
}

/// f_{x,r}: (line, v) -> (x + r * line, r^{1/(beta-1)} v).
struct ScalingMap {
  Point anchor;
  double ratio = 1.0;

  ScalingMap() = default;
  ScalingMap(Point x, double r) : anchor(x), ratio(r) {
    if (!(r > 0.0)) throw std::invalid_argument("ScalingMap: ratio must be positive");
  }

  Point apply(Point p) const { return anchor + ratio * p; }
  Line apply(const Line& l) const { return Line(l.theta, ratio * l.w + dot(anchor, l.normal())); }
  double speed_factor(double beta) const { return std::pow(ratio, 1.0 / (beta - 1.0)); }
  /// Factor picked up by driving times: r / r^{1/(beta-1)}.
  double time_factor(double beta) const { return std::pow(ratio, (beta - 2.0) / (beta - 1.0)); }

  /// this o other.
  ScalingMap compose(const ScalingMap& other) const { return {apply(other.anchor), ratio * other.ratio}; }
};

inline Scene scale_scene(const Scene& s, const ScalingMap& m) {
  const double k = m.speed_factor(s.beta);
  Scene out = s;
  for (Road& r : out.roads) {
    r.line = m.apply(r.line);
    r.v *= k;
  }
  out.center = m.apply(s.center);
  out.radius = m.ratio * s.radius;
  out.v_min = s.v_min * k;
  out.normalize();
  return out;
}

/// Largest speed among roads passing within tol of p; 0 when none.
inline double speed_at(const Scene& s, Point p, double tol = 0.0) {
  if (!(tol >= 0.0)) throw std::invalid_argument("speed_at: negative tolerance");
  double best = 0.0;
  for (const Road& r : s.roads)
    if (distance_to_line(p, r.line) <= tol) best = std::max(best, r.v);
  return best;
}

struct Crossing {
  Point at;
  RoadId a = 0;  // smaller id
  RoadId b = 0;
};

/// All pairwise crossings of non-parallel roads, ordered by id pair.
inline std::vector<Crossing> intersections(const Scene& s) {
  std::vector<const Road*> by_id;
  by_id.reserve(s.roads.size());
  for (const Road& r : s.roads) by_id.push_back(&r);
  std::sort(by_id.begin(), by_id.end(), [](const Road* a, const Road* b) { return a->id < b->id; });
  std::vector<Crossing> out;
  for (std::size_t i = 0; i < by_id.size(); ++i)
    for (std::size_t j = i + 1; j < by_id.size(); ++j)
      if (auto p = intersect(by_id[i]->line, by_id[j]->line)) out.push_back({*p, by_id[i]->id, by_id[j]->id});
  return out;
}

}  // namespace roadmetric
