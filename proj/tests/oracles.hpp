#pragma once

// Independent reference computations used by the unit and acceptance tests.
// None of them goes through the eps-graph or the closed-form refraction
// formulas.

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <queue>
#include <vector>

#include "roadmetric/geometry.hpp"
#include "roadmetric/sampler.hpp"

namespace oracle {

using roadmetric::Point;
using roadmetric::Scene;

/// Shortest travel time on a square lattice over [lo, lo + n*h]^2 with a
/// 16-neighbour stencil and off-road speed eps, plus every road sampled at
/// spacing h and driven at its own speed between consecutive samples. Road
/// samples connect off-road to lattice nodes within 2.3 h. x and y must be
/// lattice points. Off-road legs are overestimated by at most the stencil's
/// angular error (about 2.7%); road legs are exact.
inline double lattice_time(const Scene& s, Point x, Point y, double eps, Point lo, int n, double h) {
  const int side = n + 1;
  const std::size_t lattice = static_cast<std::size_t>(side) * side;
  std::vector<Point> pos;
  pos.reserve(lattice);
  for (int j = 0; j < side; ++j)
    for (int i = 0; i < side; ++i) pos.push_back({lo.x + i * h, lo.y + j * h});
  auto lattice_id = [&](int i, int j) { return static_cast<int>(static_cast<std::size_t>(j) * side + i); };
  auto locate = [&](Point p) {
    const int i = static_cast<int>(std::lround((p.x - lo.x) / h));
    const int j = static_cast<int>(std::lround((p.y - lo.y) / h));
    return lattice_id(i, j);
  };

  struct Arc {
    int to;
    double w;
  };
  std::vector<std::vector<Arc>> extra(lattice);
  auto link = [&](int a, int b, double w) {
    if (static_cast<std::size_t>(std::max(a, b)) >= extra.size()) extra.resize(std::max(a, b) + 1);
    extra[a].push_back({b, w});
    extra[b].push_back({a, w});
  };

  const Point hi{lo.x + n * h, lo.y + n * h};
  for (const auto& road : s.roads) {
    if (!(road.v > eps)) continue;
    // Chord of the road through the box.
    const Point o = road.line.at(0.0), d = road.line.dir();
    double t0 = -1e300, t1 = 1e300;
    const double org[2] = {o.x, o.y}, dir[2] = {d.x, d.y}, lb[2] = {lo.x, lo.y}, ub[2] = {hi.x, hi.y};
    bool miss = false;
    for (int k = 0; k < 2; ++k) {
      if (std::fabs(dir[k]) < 1e-15) {
        miss = miss || org[k] < lb[k] || org[k] > ub[k];
        continue;
      }
      double a = (lb[k] - org[k]) / dir[k], b = (ub[k] - org[k]) / dir[k];
      if (a > b) std::swap(a, b);
      t0 = std::max(t0, a);
      t1 = std::min(t1, b);
    }
    if (miss || !(t0 < t1)) continue;
    const int m = static_cast<int>(std::ceil((t1 - t0) / h));
    int prev = -1;
    for (int k = 0; k <= m; ++k) {
      const Point p = o + (t0 + (t1 - t0) * k / m) * d;
      const int id = static_cast<int>(pos.size());
      pos.push_back(p);
      extra.resize(pos.size());
      if (prev >= 0) link(prev, id, ((t1 - t0) / m) / road.v);
      prev = id;
      const int ci = static_cast<int>(std::floor((p.x - lo.x) / h)), cj = static_cast<int>(std::floor((p.y - lo.y) / h));
      for (int j = cj - 2; j <= cj + 3; ++j)
        for (int i = ci - 2; i <= ci + 3; ++i) {
          if (i < 0 || j < 0 || i > n || j > n) continue;
          const int q = lattice_id(i, j);
          const double dist = roadmetric::distance(pos[q], p);
          if (dist <= 2.3 * h) link(q, id, dist / eps);
        }
    }
  }
  static constexpr int kStencil[16][2] = {{1, 0},  {-1, 0}, {0, 1},   {0, -1},  {1, 1},  {1, -1}, {-1, 1}, {-1, -1},
                                          {2, 1},  {2, -1}, {-2, 1},  {-2, -1}, {1, 2},  {1, -2}, {-1, 2}, {-1, -2}};
  const int src = locate(x), dst = locate(y);
  std::vector<double> dist(pos.size(), std::numeric_limits<double>::infinity());
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[src] = 0.0;
  heap.push({0.0, src});
  while (!heap.empty()) {
    const auto [du, u] = heap.top();
    heap.pop();
    if (du > dist[u]) continue;
    if (u == dst) return du;
    auto relax = [&](int v, double w) {
      if (du + w < dist[v]) {
        dist[v] = du + w;
        heap.push({dist[v], v});
      }
    };
    if (static_cast<std::size_t>(u) < lattice) {
      const int i = u % side, j = u / side;
      for (const auto& st : kStencil) {
        const int a = i + st[0], b = j + st[1];
        if (a < 0 || b < 0 || a > n || b > n) continue;
        relax(lattice_id(a, b), h * std::hypot(st[0], st[1]) / eps);
      }
    }
    for (const Arc& arc : extra[u]) relax(arc.to, arc.w);
  }
  return dist[dst];
}

/// Entry point on a road for a trip from x (off the road, speed eps) that
/// then drives to abscissa u_end. Minimises |x - l(u)|/eps + |u_end - u|/v
/// by bisection on the derivative over [u_foot, u_end].
inline double best_entry(Point x, const roadmetric::Line& l, double v, double eps, double u_end) {
  const Point foot = roadmetric::project(x, l);
  const double uf = l.abscissa(foot);
  const double h = roadmetric::distance_to_line(x, l);
  const double sgn = u_end > uf ? 1.0 : -1.0;
  // d/du of the time along direction sgn: (u - uf)/(eps*sqrt(h^2+(u-uf)^2)) - 1/v.
  auto deriv = [&](double t) { return t / (eps * std::sqrt(h * h + t * t)) - 1.0 / v; };
  double a = 0.0, b = std::fabs(u_end - uf);
  if (deriv(b) <= 0.0) return u_end;
  for (int it = 0; it < 200; ++it) {
    const double m = 0.5 * (a + b);
    (deriv(m) < 0.0 ? a : b) = m;
  }
  return uf + sgn * 0.5 * (a + b);
}

/// Dense log-spaced scan of the no-shortcut functional over rho in
/// [1e-4, 1e4], together with the two boundary limits.
inline double no_shortcut_scan(double dot_abs, double v1, double v2, int samples = 400000) {
  double best = std::min(v1, v2);
  for (int k = 0; k <= samples; ++k) {
    const double rho = std::exp(std::log(1e-4) + (std::log(1e4) - std::log(1e-4)) * k / samples);
    // Driving distances 1 along road one and rho along road two from the
    // crossing; straight chord length via the law of cosines.
    const double chord = std::sqrt(1.0 + rho * rho - 2.0 * rho * dot_abs);
    best = std::min(best, chord / (1.0 / v1 + rho / v2));
  }
  return best;
}

}  // namespace oracle
