#pragma once

// Finite reduction of geodesic (eps v V)-paths between two terminals.
//
// A geodesic drives straight at speed eps from the source to some road,
// then only on roads (switching at crossings), then straight to the target.
// Straight legs therefore end either at a crossing or at a point where the
// road is met at the refraction angle |cos| = eps/v. The exact-mode graph
// contains exactly those candidates; full mode adds road-to-road hops and
// is only used to validate that nothing was lost.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "roadmetric/geometry.hpp"
#include "roadmetric/sampler.hpp"

namespace roadmetric {

/// Distance under which a terminal counts as lying on a road.
inline constexpr double kSnapTol = 1e-9;

enum class NodeKind { Source, Target, Intersection, Refraction, Grid, Hop };
enum class EdgeKind { OnRoad, OffRoad };

inline const char* to_string(NodeKind k) {
  switch (k) {
    case NodeKind::Source: return "source";
    case NodeKind::Target: return "target";
    case NodeKind::Intersection: return "intersection";
    case NodeKind::Refraction: return "refraction";
    case NodeKind::Grid: return "grid";
    case NodeKind::Hop: return "hop";
  }
  return "?";
}

inline const char* to_string(EdgeKind k) { return k == EdgeKind::OnRoad ? "onroad" : "offroad"; }

struct Node {
  int id = 0;
  NodeKind kind = NodeKind::Source;
  RoadId road_a = -1;  // intersection: smaller id; refraction/grid/hop: carrying road
  RoadId road_b = -1;  // intersection: larger id
  int side = -1;       // refraction: 0 = source side, 1 = target side; second of the pair in `index`
  int index = 0;       // distinguishes the two refraction points and grid/hop samples
  Point pos;

  /// Identity that survives rebuilding the graph for another source or eps.
  auto key() const { return std::make_tuple(static_cast<int>(kind), road_a, road_b, side, index); }
};

struct Edge {
  int from = 0;
  int to = 0;
  EdgeKind kind = EdgeKind::OffRoad;
  RoadId road = -1;
  double speed = 0.0;
  double length = 0.0;
  double weight = 0.0;

  int other(int n) const { return n == from ? to : from; }
};

struct Graph {
  std::vector<Node> nodes;
  std::vector<Edge> edges;
  std::vector<std::vector<int>> adjacency;  // edge indices per node
  int source = 0;
  int target = 1;
  double eps = 1.0;
  bool full_mode = false;

  int add_node(Node n) {
    n.id = static_cast<int>(nodes.size());
    nodes.push_back(n);
    adjacency.emplace_back();
    return n.id;
  }

  void add_edge(int a, int b, EdgeKind kind, double speed, RoadId road = -1) {
    Edge e;
    e.from = a;
    e.to = b;
    e.kind = kind;
    e.road = road;
    e.speed = speed;
    e.length = distance(nodes[a].pos, nodes[b].pos);
    e.weight = e.length / speed;
    const int idx = static_cast<int>(edges.size());
    edges.push_back(e);
    adjacency[a].push_back(idx);
    if (b != a) adjacency[b].push_back(idx);
  }

  std::size_t count(NodeKind k) const {
    return static_cast<std::size_t>(std::count_if(nodes.begin(), nodes.end(), [k](const Node& n) { return n.kind == k; }));
  }
};

/// Roads strictly faster than eps: the only ones an (eps v V)-geodesic uses.
inline std::vector<const Road*> fast_roads(const Scene& s, double eps) {
  std::vector<const Road*> out;
  for (const Road& r : s.roads)
    if (r.v > eps) out.push_back(&r);
  std::sort(out.begin(), out.end(), [](const Road* a, const Road* b) { return a->id < b->id; });
  return out;
}

namespace detail {

struct ChainEntry {
  double abscissa;
  int node;
};

inline void chain_roads(Graph& g, const std::vector<const Road*>& roads, std::vector<std::vector<ChainEntry>>& chains) {
  for (std::size_t r = 0; r < roads.size(); ++r) {
    auto& chain = chains[r];
    std::sort(chain.begin(), chain.end(), [](const ChainEntry& a, const ChainEntry& b) {
      return a.abscissa < b.abscissa || (a.abscissa == b.abscissa && a.node < b.node);
    });
    for (std::size_t i = 1; i < chain.size(); ++i)
      g.add_edge(chain[i - 1].node, chain[i].node, EdgeKind::OnRoad, roads[r]->v, roads[r]->id);
  }
}

/// Interval of abscissae u for which line.at(u) lies in the filled ellipse
/// {z : |z - a| + |z - b| <= sum}. Empty (lo > hi) when the line misses it.
inline std::pair<double, double> ellipse_chord(const Line& line, Point a, Point b, double sum) {
  const double c = 0.5 * distance(a, b);
  const double A = 0.5 * sum;
  if (!(A > c)) return {1.0, -1.0};
  const double B = std::sqrt(A * A - c * c);
  const Point m = 0.5 * (a + b);
  const Point e = c > 0.0 ? (1.0 / (2.0 * c)) * (b - a) : Point{1.0, 0.0};
  const Point n{-e.y, e.x};
  const Point d = line.dir();
  const Point q0 = line.at(0.0) - m;
  const double de = dot(d, e) / A, dn = dot(d, n) / B;
  const double qe = dot(q0, e) / A, qn = dot(q0, n) / B;
  const double alpha = de * de + dn * dn;
  const double beta = qe * de + qn * dn;
  const double gamma = qe * qe + qn * qn - 1.0;
  const double disc = beta * beta - alpha * gamma;
  if (disc < 0.0) return {1.0, -1.0};
  const double root = std::sqrt(disc);
  return {(-beta - root) / alpha, (-beta + root) / alpha};
}

struct Terminals {
  int source;
  int target;
};

/// Adds the exact-mode node set and on-road chains. Returns chains so that
/// full mode can extend them before chaining.
inline Graph exact_nodes(Point source, Point target, double eps,
                         const std::vector<const Road*>& roads, std::vector<std::vector<ChainEntry>>& chains) {
  if (!(eps > 0.0)) throw std::invalid_argument("build_graph: eps must be positive");
  Graph g;
  g.eps = eps;
  chains.assign(roads.size(), {});

  const Point terminals[2] = {source, target};
  std::vector<std::vector<char>> on_road(2, std::vector<char>(roads.size(), 0));
  for (int t = 0; t < 2; ++t) {
    Node n;
    n.kind = t == 0 ? NodeKind::Source : NodeKind::Target;
    n.pos = terminals[t];
    for (std::size_t r = 0; r < roads.size(); ++r) {
      if (distance_to_line(terminals[t], roads[r]->line) <= kSnapTol) {
        // Snap onto the first road found (fastest among ties is irrelevant:
        // displacement is below kSnapTol either way).
        bool first = true;
        for (std::size_t q = 0; q < r; ++q) first = first && !on_road[t][q];
        if (first) n.pos = project(terminals[t], roads[r]->line);
        on_road[t][r] = 1;
      }
    }
    const int id = g.add_node(n);
    for (std::size_t r = 0; r < roads.size(); ++r)
      if (on_road[t][r]) chains[r].push_back({roads[r]->line.abscissa(g.nodes[id].pos), id});
  }
  g.source = 0;
  g.target = 1;

  for (std::size_t i = 0; i < roads.size(); ++i)
    for (std::size_t j = i + 1; j < roads.size(); ++j) {
      const auto p = intersect(roads[i]->line, roads[j]->line);
      if (!p) continue;
      Node n;
      n.kind = NodeKind::Intersection;
      n.road_a = roads[i]->id;
      n.road_b = roads[j]->id;
      n.pos = *p;
      const int id = g.add_node(n);
      chains[i].push_back({roads[i]->line.abscissa(*p), id});
      chains[j].push_back({roads[j]->line.abscissa(*p), id});
    }

  for (int t = 0; t < 2; ++t)
    for (std::size_t r = 0; r < roads.size(); ++r) {
      if (on_road[t][r]) continue;
      const auto pts = refraction_points(g.nodes[t].pos, roads[r]->line, roads[r]->v, eps);
      for (std::size_t k = 0; k < pts.size(); ++k) {
        Node n;
        n.kind = NodeKind::Refraction;
        n.road_a = roads[r]->id;
        n.side = t;
        n.index = static_cast<int>(k);
        n.pos = pts[k];
        const int id = g.add_node(n);
        chains[r].push_back({roads[r]->line.abscissa(pts[k]), id});
      }
    }
  return g;
}

inline void terminal_legs(Graph& g) {
  const int n = static_cast<int>(g.nodes.size());
  g.add_edge(g.source, g.target, EdgeKind::OffRoad, g.eps);
  for (int i = 0; i < n; ++i) {
    if (i == g.source || i == g.target) continue;
    g.add_edge(g.source, i, EdgeKind::OffRoad, g.eps);
    g.add_edge(i, g.target, EdgeKind::OffRoad, g.eps);
  }
}

}  // namespace detail

/// Exact-mode graph: terminals, crossings of roads faster than eps, and the
/// refraction points of each terminal on each such road; on-road edges
/// between consecutive nodes of every road, off-road edges only from the
/// source and into the target.
inline Graph build_graph(const Scene& s, Point source, Point target, double eps) {
  const auto roads = fast_roads(s, eps);
  std::vector<std::vector<detail::ChainEntry>> chains;
  Graph g = detail::exact_nodes(source, target, eps, roads, chains);
  detail::chain_roads(g, roads, chains);
  detail::terminal_legs(g);
  return g;
}

struct FullModeOptions {
  int samples_per_road = 64;
  /// Upper bound on the geodesic time defining the sampling ellipse. When
  /// not positive the straight-line time |source - target| / eps is used.
  double upper_bound = 0.0;
};

/// Validation graph: exact mode plus off-road edges between every pair of
/// road nodes, and road-to-road hops from sampled points of every road to
/// their refraction points on every other road. Samples are spread over the
/// part of each road inside the ellipse that contains every path of time at
/// most the upper bound.
inline Graph build_graph_full(const Scene& s, Point source, Point target, double eps, FullModeOptions opt = {}) {
  const auto roads = fast_roads(s, eps);
  std::vector<std::vector<detail::ChainEntry>> chains;
  Graph g = detail::exact_nodes(source, target, eps, roads, chains);
  g.full_mode = true;

  const double ub = opt.upper_bound > 0.0 ? opt.upper_bound : distance(source, target) / eps;
  double v_top = eps;
  for (const Road* r : roads) v_top = std::max(v_top, r->v);
  const double sum = ub * v_top;

  const int road_node_begin = 2;
  std::vector<std::vector<int>> grid(roads.size());
  for (std::size_t r = 0; r < roads.size() && opt.samples_per_road > 0; ++r) {
    const auto [lo, hi] = detail::ellipse_chord(roads[r]->line, source, target, sum);
    if (lo > hi) continue;
    const int m = opt.samples_per_road;
    for (int k = 0; k < m; ++k) {
      const double u = m == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * k / (m - 1);
      Node n;
      n.kind = NodeKind::Grid;
      n.road_a = roads[r]->id;
      n.index = k;
      n.pos = roads[r]->line.at(u);
      const int id = g.add_node(n);
      grid[r].push_back(id);
      chains[r].push_back({u, id});
    }
  }
  const int road_node_end = static_cast<int>(g.nodes.size());

  struct HopLink {
    int from;
    int to;
  };
  std::vector<HopLink> hops;
  for (std::size_t i = 0; i < roads.size(); ++i)
    for (int p : grid[i])
      for (std::size_t j = 0; j < roads.size(); ++j) {
        if (j == i) continue;
        const auto pts = refraction_points(g.nodes[p].pos, roads[j]->line, roads[j]->v, eps);
        for (std::size_t k = 0; k < pts.size(); ++k) {
          Node n;
          n.kind = NodeKind::Hop;
          n.road_a = roads[j]->id;
          n.road_b = roads[i]->id;
          n.index = g.nodes[p].index * 2 + static_cast<int>(k);
          n.pos = pts[k];
          const int id = g.add_node(n);
          chains[j].push_back({roads[j]->line.abscissa(pts[k]), id});
          hops.push_back({p, id});
        }
      }

  detail::chain_roads(g, roads, chains);
  detail::terminal_legs(g);
  for (int a = road_node_begin; a < road_node_end; ++a)
    for (int b = a + 1; b < road_node_end; ++b) g.add_edge(a, b, EdgeKind::OffRoad, eps);
  for (const HopLink& h : hops) g.add_edge(h.from, h.to, EdgeKind::OffRoad, eps);
  return g;
}

/// Smallest | |e|^2 - 1 | over pairs of roads faster than eps and sign
/// choices, where e solves <e, dir_i> = +-eps/v_i, <e, dir_j> = +-eps/v_j.
/// Zero means some unit vector meets both roads at their refraction angle,
/// i.e. a straight hop between them could be locally optimal. Infinite when
/// there is no non-parallel pair.
inline double double_refraction_margin(const Scene& s, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("double_refraction_margin: eps must be positive");
  const auto roads = fast_roads(s, eps);
  double margin = kInf;
  for (std::size_t i = 0; i < roads.size(); ++i)
    for (std::size_t j = i + 1; j < roads.size(); ++j) {
      if (angle_between(roads[i]->line, roads[j]->line) < kParallelTol) continue;
      const Point di = roads[i]->line.dir();
      const Point dj = roads[j]->line.dir();
      const double det = cross(di, dj);
      const double ci = eps / roads[i]->v;
      const double cj = eps / roads[j]->v;
      for (const double si : {1.0, -1.0})
        for (const double sj : {1.0, -1.0}) {
          const double bi = si * ci, bj = sj * cj;
          const Point e{(bi * dj.y - bj * di.y) / det, (di.x * bj - dj.x * bi) / det};
          margin = std::min(margin, std::fabs(dot(e, e) - 1.0));
        }
    }
  return margin;
}

struct ExactnessCertificate {
  double double_refraction_margin = kInf;
  bool containment_ok = true;
  /// Radius around the scene centre needed to contain every path of time at
  /// most the upper bound.
  double containment_radius = 0.0;
};

/// Largest distance from `from` to the filled ellipse with foci a, b and
/// distance sum `sum` (sum >= |a - b|).
inline double ellipse_max_distance(Point from, Point a, Point b, double sum) {
  const double c = 0.5 * distance(a, b);
  const double A = std::max(0.5 * sum, c);
  const double B = std::sqrt(std::max(0.0, A * A - c * c));
  const Point m = 0.5 * (a + b);
  const Point e = c > 0.0 ? (1.0 / (2.0 * c)) * (b - a) : Point{1.0, 0.0};
  const Point n{-e.y, e.x};
  auto dist2 = [&](double phi) {
    const Point p = m + (A * std::cos(phi)) * e + (B * std::sin(phi)) * n;
    const Point d = p - from;
    return dot(d, d);
  };
  constexpr int kSamples = 1024;
  int best = 0;
  double best_val = -1.0;
  for (int k = 0; k < kSamples; ++k) {
    const double v = dist2(2.0 * kPi * k / kSamples);
    if (v > best_val) {
      best_val = v;
      best = k;
    }
  }
  // Golden-section refinement on the bracketing interval.
  double lo = 2.0 * kPi * (best - 1) / kSamples, hi = 2.0 * kPi * (best + 1) / kSamples;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = dist2(x1), f2 = dist2(x2);
  for (int it = 0; it < 80; ++it) {
    if (f1 > f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = dist2(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = dist2(x2);
    }
  }
  return std::sqrt(std::max({best_val, f1, f2}));
}

/// Every path of time at most upper_bound that starts at source stays in
/// the ellipse {z : |source - z| + |z - target| <= upper_bound * v_top} as
/// long as it stays in the sampled disc, where v_top is the fastest usable
/// speed. If that ellipse fits in the disc, no unsampled road can matter.
inline ExactnessCertificate containment_certificate(const Scene& s, Point source, Point target, double upper_bound,
                                                    double eps) {
  ExactnessCertificate cert;
  const double v_top = std::max(eps, s.v_max());
  const double sum = std::max(upper_bound * v_top, distance(source, target));
  cert.containment_radius = ellipse_max_distance(s.center, source, target, sum);
  cert.containment_ok = cert.containment_radius <= s.radius;
  return cert;
}

/// Debug dump: `node id kind x y` and `edge from to kind length weight`.
inline void dump_graph(std::ostream& os, const Graph& g) {
  for (const Node& n : g.nodes) os << "node " << n.id << ' ' << to_string(n.kind) << ' ' << n.pos.x << ' ' << n.pos.y << '\n';
  for (const Edge& e : g.edges)
    os << "edge " << e.from << ' ' << e.to << ' ' << to_string(e.kind) << ' ' << e.length << ' ' << e.weight << '\n';
}

}  // namespace roadmetric
