#pragma once

// Shortest (eps v V)-paths over the reduced graph, near-geodesic enumeration,
// a recursive construction of an upper bound by road hopping, and eps sweeps.

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <set>
#include <stdexcept>
#include <vector>

#include "roadmetric/dijkstra.hpp"
#include "roadmetric/eps_graph.hpp"
#include "roadmetric/sampler.hpp"

namespace roadmetric {

enum class SegmentMode { Road, Straight };

struct PathSegment {
  Point from;
  Point to;
  SegmentMode mode = SegmentMode::Straight;
  RoadId road = -1;
  double speed = 0.0;
  double time = 0.0;

  double length() const { return distance(from, to); }
};

struct GeodesicPath {
  std::vector<PathSegment> segments;
  double total_time = 0.0;
  /// Graph nodes visited, in order (empty for constructed paths).
  std::vector<Node> nodes;

  std::vector<Point> polyline() const {
    std::vector<Point> out;
    if (segments.empty()) return out;
    out.push_back(segments.front().from);
    for (const PathSegment& s : segments) out.push_back(s.to);
    return out;
  }

  /// Ids of the roads driven, in order.
  std::vector<RoadId> road_sequence() const {
    std::vector<RoadId> out;
    for (const PathSegment& s : segments)
      if (s.mode == SegmentMode::Road) out.push_back(s.road);
    return out;
  }
};

inline PathSegment make_segment(Point from, Point to, SegmentMode mode, double speed, RoadId road = -1) {
  PathSegment s;
  s.from = from;
  s.to = to;
  s.mode = mode;
  s.road = road;
  s.speed = speed;
  s.time = distance(from, to) / speed;
  return s;
}

namespace detail {

inline bool can_merge(const PathSegment& a, const PathSegment& b) {
  if (a.mode != b.mode) return false;
  if (a.mode == SegmentMode::Road) return a.road == b.road;
  // Straight legs merge only when they continue in the same direction.
  const Point u = a.to - a.from, w = b.to - b.from;
  const double lu = norm(u), lw = norm(w);
  if (lu == 0.0 || lw == 0.0) return true;
  return dot(u, w) > 0.0 && std::fabs(cross(u, w)) <= 1e-12 * lu * lw;
}

}  // namespace detail

/// Converts a walk in the graph into merged segments: runs of on-road edges
/// along one road become one Road segment, collinear straight legs one
/// Straight segment, zero-length pieces are dropped.
inline GeodesicPath path_from_edges(const Graph& g, int start, const std::vector<int>& edges) {
  GeodesicPath p;
  int cur = start;
  p.nodes.push_back(g.nodes[cur]);
  for (int ei : edges) {
    const Edge& e = g.edges[ei];
    const int nxt = e.other(cur);
    const Point a = g.nodes[cur].pos, b = g.nodes[nxt].pos;
    p.nodes.push_back(g.nodes[nxt]);
    cur = nxt;
    if (a == b) continue;
    PathSegment seg = e.kind == EdgeKind::OnRoad ? make_segment(a, b, SegmentMode::Road, e.speed, e.road)
                                                 : make_segment(a, b, SegmentMode::Straight, e.speed);
    if (!p.segments.empty() && detail::can_merge(p.segments.back(), seg)) {
      PathSegment& last = p.segments.back();
      last = make_segment(last.from, seg.to, last.mode, last.speed, last.road);
    } else {
      p.segments.push_back(seg);
    }
  }
  for (const PathSegment& s : p.segments) p.total_time += s.time;
  return p;
}

/// Dijkstra-optimal source-to-target path of an eps-graph.
inline GeodesicPath shortest_path(const Graph& g) {
  const SearchTree t = dijkstra(g, g.source, g.target);
  if (!t.reached(g.target)) throw std::logic_error("shortest_path: target unreachable");
  return path_from_edges(g, g.source, tree_path_edges(g, t, g.target));
}

inline GeodesicPath geodesic(const Scene& s, Point x, Point y, double eps) { return shortest_path(build_graph(s, x, y, eps)); }

// ---------------------------------------------------------------------------
// Recursive upper bound.

struct KendallResult {
  double time = 0.0;
  GeodesicPath path;
};

namespace detail {

struct KendallBuilder {
  std::vector<const Road*> roads;  // faster than eps, fastest first
  double eps;
  double alpha;
  int depth_max;
  std::vector<PathSegment> out;

  void build(Point x, Point y, int depth) {
    const double gap = distance(x, y);
    if (gap == 0.0) return;
    const Road* best = nullptr;
    if (depth < depth_max) {
      const double reach = alpha * gap;
      for (const Road* r : roads)
        if (distance_to_line(x, r->line) <= reach && distance_to_line(y, r->line) <= reach) {
          best = r;
          break;
        }
    }
    if (!best) {
      out.push_back(make_segment(x, y, SegmentMode::Straight, eps));
      return;
    }
    const Point xp = project(x, best->line);
    const Point yp = project(y, best->line);
    build(x, xp, depth + 1);
    if (!(xp == yp)) out.push_back(make_segment(xp, yp, SegmentMode::Road, best->v, best->id));
    build(yp, y, depth + 1);
  }
};

}  // namespace detail

/// Recursive binary-tree construction: use the fastest road meeting both
/// B(x, alpha|x-y|) and B(y, alpha|x-y|), drive between the projections of
/// x and y, and recurse on the two gaps. Gaps left when no road qualifies or
/// depth_max is reached are closed at speed eps, so the result is a valid
/// (eps v V)-path and its time bounds T_eps from above.
inline KendallResult kendall_upper_bound(const Scene& s, Point x, Point y, double eps, double alpha = 0.3,
                                         int depth_max = 16) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("kendall_upper_bound: alpha outside (0,1)");
  if (!(eps > 0.0)) throw std::invalid_argument("kendall_upper_bound: eps must be positive");
  detail::KendallBuilder b;
  for (const Road& r : s.roads)
    if (r.v > eps) b.roads.push_back(&r);
  b.eps = eps;
  b.alpha = alpha;
  b.depth_max = depth_max;
  b.build(x, y, 0);
  KendallResult res;
  res.path.segments = std::move(b.out);
  for (const PathSegment& seg : res.path.segments) res.path.total_time += seg.time;
  res.time = res.path.total_time;
  return res;
}

// ---------------------------------------------------------------------------

struct BracketResult {
  double eps = 0.0;
  double t_eps = 0.0;
  double kendall_ub = 0.0;
  ExactnessCertificate certificate;
  GeodesicPath path;
};

struct BracketOptions {
  bool kendall = true;
  double alpha = 0.3;
  int depth_max = 16;
  bool certificates = true;
};

inline BracketResult t_eps(const Scene& s, Point x, Point y, double eps, const BracketOptions& opt = {}) {
  if (!(eps > 0.0)) throw std::invalid_argument("t_eps: eps must be positive");
  BracketResult r;
  r.eps = eps;
  r.path = geodesic(s, x, y, eps);
  r.t_eps = r.path.total_time;
  if (opt.kendall) r.kendall_ub = kendall_upper_bound(s, x, y, eps, opt.alpha, opt.depth_max).time;
  if (opt.certificates) {
    r.certificate = containment_certificate(s, x, y, r.t_eps, eps);
    r.certificate.double_refraction_margin = double_refraction_margin(s, eps);
  }
  return r;
}

/// T_eps along a strictly decreasing list of eps values, all at or above the
/// scene cutoff. T_eps can only grow as eps shrinks.
inline std::vector<BracketResult> eps_sweep(const Scene& s, Point x, Point y, const std::vector<double>& eps_list,
                                            const BracketOptions& opt = {}) {
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    if (eps_list[i] < s.v_min) throw std::invalid_argument("eps_sweep: eps below the scene speed cutoff");
    if (i > 0 && !(eps_list[i] < eps_list[i - 1])) throw std::invalid_argument("eps_sweep: eps list must strictly decrease");
  }
  std::vector<BracketResult> out;
  out.reserve(eps_list.size());
  for (double eps : eps_list) out.push_back(t_eps(s, x, y, eps, opt));
  return out;
}

// ---------------------------------------------------------------------------
// Near-geodesics.

/// Hausdorff distance between two polylines, evaluated on a dense sampling
/// of each segment.
inline double hausdorff(const std::vector<Point>& a, const std::vector<Point>& b) {
  auto dist_to = [](Point p, const std::vector<Point>& poly) {
    if (poly.size() == 1) return distance(p, poly[0]);
    double best = kInf;
    for (std::size_t i = 1; i < poly.size(); ++i) best = std::min(best, distance_to_segment(p, poly[i - 1], poly[i]));
    return best;
  };
  auto directed = [&](const std::vector<Point>& from, const std::vector<Point>& to) {
    double worst = 0.0;
    if (from.size() == 1) return dist_to(from[0], to);
    constexpr int kSub = 16;
    for (std::size_t i = 1; i < from.size(); ++i)
      for (int k = 0; k <= kSub; ++k) {
        const Point p = from[i - 1] + (static_cast<double>(k) / kSub) * (from[i] - from[i - 1]);
        worst = std::max(worst, dist_to(p, to));
      }
    return worst;
  };
  if (a.empty() || b.empty()) return a.empty() && b.empty() ? 0.0 : kInf;
  return std::max(directed(a, b), directed(b, a));
}

/// Paths closer than this (Hausdorff, metres) count as the same route.
inline constexpr double kDistinctRouteTol = 1e-6;

struct GraphPath {
  std::vector<int> nodes;
  std::vector<int> edges;
  double cost = 0.0;

  bool operator<(const GraphPath& o) const { return cost < o.cost || (cost == o.cost && nodes < o.nodes); }
};

namespace detail {

inline GraphPath graph_path(const Graph& g, int start, const std::vector<int>& edges) {
  GraphPath p;
  p.edges = edges;
  p.nodes.push_back(start);
  int cur = start;
  for (int ei : edges) {
    cur = g.edges[ei].other(cur);
    p.nodes.push_back(cur);
    p.cost += g.edges[ei].weight;
  }
  return p;
}

}  // namespace detail

/// Yen's loopless k-shortest paths from g.source to g.target. Enumeration
/// stops after `k` paths, or once the next candidate costs more than
/// `max_cost`.
inline std::vector<GraphPath> yen_k_shortest(const Graph& g, std::size_t k, double max_cost = kInf) {
  std::vector<GraphPath> accepted;
  const SearchTree first = dijkstra(g, g.source, g.target);
  if (!first.reached(g.target) || k == 0) return accepted;
  accepted.push_back(detail::graph_path(g, g.source, tree_path_edges(g, first, g.target)));

  std::set<GraphPath> candidates;
  std::set<std::vector<int>> seen{accepted.front().nodes};
  std::vector<char> banned_nodes(g.nodes.size(), 0), banned_edges(g.edges.size(), 0);

  while (accepted.size() < k) {
    const GraphPath& last = accepted.back();
    for (std::size_t i = 0; i + 1 < last.nodes.size(); ++i) {
      const int spur = last.nodes[i];
      std::fill(banned_nodes.begin(), banned_nodes.end(), 0);
      std::fill(banned_edges.begin(), banned_edges.end(), 0);
      for (const GraphPath& p : accepted)
        if (p.nodes.size() > i + 1 && std::equal(p.nodes.begin(), p.nodes.begin() + static_cast<long>(i) + 1, last.nodes.begin()))
          banned_edges[p.edges[i]] = 1;
      for (std::size_t j = 0; j < i; ++j) banned_nodes[last.nodes[j]] = 1;

      const SearchTree t = dijkstra(g, spur, g.target, {&banned_nodes, &banned_edges});
      if (!t.reached(g.target)) continue;
      std::vector<int> edges(last.edges.begin(), last.edges.begin() + static_cast<long>(i));
      const auto spur_edges = tree_path_edges(g, t, g.target);
      edges.insert(edges.end(), spur_edges.begin(), spur_edges.end());
      GraphPath cand = detail::graph_path(g, g.source, edges);
      if (seen.insert(cand.nodes).second) candidates.insert(std::move(cand));
    }
    if (candidates.empty() || candidates.begin()->cost > max_cost) break;
    accepted.push_back(*candidates.begin());
    candidates.erase(candidates.begin());
  }
  return accepted;
}

/// Up to k geometrically distinct paths within `slack` of the optimum,
/// sorted by time. Node-distinct paths closer than kDistinctRouteTol in
/// Hausdorff distance are collapsed into one.
inline std::vector<GeodesicPath> k_near_geodesics(const Scene& s, Point x, Point y, double eps, std::size_t k,
                                                  double slack) {
  if (k == 0) throw std::invalid_argument("k_near_geodesics: k must be positive");
  if (!(slack >= 0.0)) throw std::invalid_argument("k_near_geodesics: negative slack");
  const Graph g = build_graph(s, x, y, eps);
  std::vector<GeodesicPath> out;
  // Over-generate: node-distinct duplicates of one route are discarded below.
  std::size_t budget = 4 * k + 4;
  double best = kInf;
  while (true) {
    const auto paths = yen_k_shortest(g, budget, kInf);
    if (paths.empty()) return out;
    best = paths.front().cost;
    out.clear();
    bool exhausted = paths.size() < budget;
    for (const GraphPath& gp : paths) {
      if (gp.cost > best + slack) {
        exhausted = true;
        break;
      }
      GeodesicPath p = path_from_edges(g, g.source, gp.edges);
      const auto poly = p.polyline();
      bool duplicate = false;
      for (const GeodesicPath& q : out)
        if (hausdorff(poly, q.polyline()) < kDistinctRouteTol) {
          duplicate = true;
          break;
        }
      if (!duplicate) out.push_back(std::move(p));
      if (out.size() == k) return out;
    }
    if (exhausted || budget >= 256) return out;
    budget *= 2;
  }
}

// ---------------------------------------------------------------------------

/// Path record: header `path total_time=<t> eps=<e> kendall_ub=<k> margin=<m>
/// containment_ok=<0|1> containment_radius=<r>` followed by one line per
/// segment `mode road_id_or_- x1 y1 x2 y2 time`.
inline void write_path_record(std::ostream& os, const BracketResult& r) {
  auto f = [](double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return std::string(buf);
  };
  os << "path total_time=" << f(r.t_eps) << " eps=" << f(r.eps) << " kendall_ub=" << f(r.kendall_ub)
     << " margin=" << f(r.certificate.double_refraction_margin) << " containment_ok=" << (r.certificate.containment_ok ? 1 : 0)
     << " containment_radius=" << f(r.certificate.containment_radius) << '\n';
  for (const PathSegment& s : r.path.segments) {
    os << (s.mode == SegmentMode::Road ? "road " : "straight ");
    if (s.mode == SegmentMode::Road)
      os << s.road;
    else
      os << '-';
    os << ' ' << f(s.from.x) << ' ' << f(s.from.y) << ' ' << f(s.to.x) << ' ' << f(s.to.y) << ' ' << f(s.time) << '\n';
  }
}

}  // namespace roadmetric
