#pragma once

// Empirical checks of the structure of geodesics (no pause en route, hubs,
// confluence, stars, cut locus, self-similarity) and the sampling law.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "roadmetric/dijkstra.hpp"
#include "roadmetric/eps_graph.hpp"
#include "roadmetric/parallel.hpp"
#include "roadmetric/sampler.hpp"
#include "roadmetric/solver.hpp"
#include "roadmetric/stats.hpp"

namespace roadmetric {

// ---------------------------------------------------------------------------
// No pause en route.

struct PauseProfile {
  /// Slowest road driven between the first and last road segments of the
  /// final path; NaN when that path drives no road.
  double interior_min_speed = std::numeric_limits<double>::quiet_NaN();
  /// (elapsed time at segment start, speed) along the final path.
  std::vector<std::pair<double, double>> endpoint_speed_decay;
  /// Interior road sequence unchanged over the last two eps levels.
  bool stabilized = false;
  /// The previous level's interior minus its two end roads reappears as a
  /// contiguous block of the final interior.
  bool core_stabilized = false;
  std::vector<std::vector<RoadId>> interiors;  // one per eps level
  std::vector<double> times;
};

/// Segments between the first and last Road segments (inclusive).
inline std::vector<PathSegment> interior_segments(const GeodesicPath& p) {
  std::size_t first = p.segments.size(), last = 0;
  for (std::size_t i = 0; i < p.segments.size(); ++i)
    if (p.segments[i].mode == SegmentMode::Road) {
      first = std::min(first, i);
      last = i;
    }
  if (first == p.segments.size()) return {};
  return {p.segments.begin() + static_cast<long>(first), p.segments.begin() + static_cast<long>(last) + 1};
}

namespace detail {

inline bool contains_block(const std::vector<RoadId>& hay, const std::vector<RoadId>& block) {
  if (block.empty()) return true;
  return std::search(hay.begin(), hay.end(), block.begin(), block.end()) != hay.end();
}

}  // namespace detail

inline PauseProfile no_pause_profile(const Scene& s, Point x, Point y, const std::vector<double>& eps_list) {
  if (eps_list.size() < 2) throw std::invalid_argument("no_pause_profile: need at least two eps levels");
  BracketOptions opt;
  opt.kendall = false;
  opt.certificates = false;
  const auto sweep = eps_sweep(s, x, y, eps_list, opt);
  PauseProfile prof;
  for (const BracketResult& r : sweep) {
    std::vector<RoadId> seq;
    for (const PathSegment& seg : interior_segments(r.path))
      if (seg.mode == SegmentMode::Road) seq.push_back(seg.road);
    prof.interiors.push_back(std::move(seq));
    prof.times.push_back(r.t_eps);
  }
  const GeodesicPath& last = sweep.back().path;
  double elapsed = 0.0;
  for (const PathSegment& seg : last.segments) {
    prof.endpoint_speed_decay.emplace_back(elapsed, seg.speed);
    elapsed += seg.time;
  }
  const auto interior = interior_segments(last);
  if (!interior.empty()) {
    prof.interior_min_speed = kInf;
    for (const PathSegment& seg : interior)
      if (seg.mode == SegmentMode::Road) prof.interior_min_speed = std::min(prof.interior_min_speed, seg.speed);
  }
  const auto& a = prof.interiors[prof.interiors.size() - 2];
  const auto& b = prof.interiors.back();
  prof.stabilized = a == b;
  if (a.empty() || b.empty()) {
    prof.core_stabilized = a == b;
  } else {
    const std::vector<RoadId> core(a.size() > 2 ? a.begin() + 1 : a.begin(), a.size() > 2 ? a.end() - 1 : a.end());
    prof.core_stabilized = detail::contains_block(b, core);
  }
  return prof;
}

/// True when straight driving happens only on the first or last segment.
inline bool structure_check(const GeodesicPath& p) {
  for (std::size_t i = 0; i < p.segments.size(); ++i)
    if (p.segments[i].mode == SegmentMode::Straight && i != 0 && i + 1 != p.segments.size()) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Hubs at crossings.

struct HubReport {
  Point intersection;
  RoadId road_i = -1;  // the faster of the two
  RoadId road_j = -1;
  double v_i = 0.0;
  double v_j = 0.0;
  double inf_phi = 0.0;
  double eps_used = 0.0;
  double delta_used = 0.0;
  bool applicable = false;
  /// Solver times between the arm endpoints x +- delta e_i, x +- delta e_j.
  std::array<std::array<double, 4>, 4> arm_times{};
  /// Drive-through-the-crossing times, by arithmetic.
  std::array<std::array<double, 4>, 4> through_times{};
  /// Largest |arithmetic - assembled path| over the six pairs.
  double assembly_gap = 0.0;
  double max_abs_error = 0.0;
  bool all_geodesic = false;
};

struct HubOptions {
  std::optional<double> eps;  // default: half the no-shortcut threshold
  double tolerance = 1e-9;
  int max_shrink = 40;
};

inline HubReport hub_check(const Scene& s, RoadId i, RoadId j, double delta, const HubOptions& opt = {}) {
  if (!(delta > 0.0)) throw std::invalid_argument("hub_check: delta must be positive");
  const Road* a = &s.road(i);
  const Road* b = &s.road(j);
  const auto x = intersect(a->line, b->line);
  if (!x) throw std::invalid_argument("hub_check: parallel roads");
  if (b->v > a->v) std::swap(a, b);

  HubReport rep;
  rep.intersection = *x;
  rep.road_i = a->id;
  rep.road_j = b->id;
  rep.v_i = a->v;
  rep.v_j = b->v;
  const double dot_abs = std::min(1.0, std::fabs(dot(a->line.dir(), b->line.dir())));
  rep.inf_phi = no_shortcut_inf(dot_abs, a->v, b->v);
  rep.eps_used = opt.eps ? *opt.eps : 0.5 * rep.inf_phi;
  if (!(rep.eps_used > 0.0) || rep.eps_used >= rep.inf_phi) return rep;

  // The geodesics between arm endpoints stay inside B(x, (1 + 2 v_i/v_j) delta)
  // once no other road in it is faster than eps.
  double d = delta;
  bool clear = false;
  for (int k = 0; k <= opt.max_shrink && !clear; ++k, d *= 0.5) {
    const double reach = (1.0 + 2.0 * a->v / b->v) * d;
    clear = true;
    for (const Road& r : s.roads) {
      if (r.id == a->id || r.id == b->id || r.v <= rep.eps_used) continue;
      if (distance_to_line(*x, r.line) <= reach) {
        clear = false;
        break;
      }
    }
    if (clear) rep.delta_used = d;
  }
  if (!clear) return rep;
  rep.applicable = true;

  const double dd = rep.delta_used;
  const std::array<Point, 4> arms{*x + dd * a->line.dir(), *x - dd * a->line.dir(), *x + dd * b->line.dir(), *x - dd * b->line.dir()};
  const std::array<const Road*, 4> arm_road{a, a, b, b};
  rep.all_geodesic = true;
  for (int p = 0; p < 4; ++p)
    for (int q = p + 1; q < 4; ++q) {
      const double solver = geodesic(s, arms[p], arms[q], rep.eps_used).total_time;
      const double through = dd / arm_road[p]->v + dd / arm_road[q]->v;
      GeodesicPath assembled;
      assembled.segments = {make_segment(arms[p], *x, SegmentMode::Road, arm_road[p]->v, arm_road[p]->id),
                            make_segment(*x, arms[q], SegmentMode::Road, arm_road[q]->v, arm_road[q]->id)};
      for (const auto& seg : assembled.segments) assembled.total_time += seg.time;
      rep.assembly_gap = std::max(rep.assembly_gap, std::fabs(assembled.total_time - through));
      rep.arm_times[p][q] = rep.arm_times[q][p] = solver;
      rep.through_times[p][q] = rep.through_times[q][p] = through;
      const double err = std::fabs(solver - through);
      rep.max_abs_error = std::max(rep.max_abs_error, err);
      if (err > opt.tolerance) rep.all_geodesic = false;
    }
  return rep;
}

// ---------------------------------------------------------------------------
// Confluence.

// A merge is reported at the first node present in every per-source graph
// (crossing, target-side refraction point, target) at or after the point
// where the paths physically join.
struct CoalescenceNode {
  Point at;
  std::vector<int> leaves;  // indices of sources whose geodesic passes here
};

struct ConfluenceTree {
  Point target;
  std::vector<Point> leaves;
  std::vector<CoalescenceNode> coalescence;
  std::vector<Point> cut_points;
  /// Every shared node has a single successor towards the target.
  bool suffix_consistent = true;
  bool acyclic = true;
  std::vector<GeodesicPath> paths;
};

inline ConfluenceTree confluence_tree(const Scene& s, Point target, const std::vector<Point>& sources, double eps) {
  using Key = std::tuple<int, RoadId, RoadId, int, int>;
  ConfluenceTree tree;
  tree.target = target;
  tree.leaves = sources;
  tree.paths = parallel_map(sources.size(), [&](std::size_t k) {
    if (sources[k] == target) throw std::invalid_argument("confluence_tree: source equals target");
    return geodesic(s, sources[k], target, eps);
  });

  // Only nodes that exist in every per-source graph take part: crossings,
  // target-side refraction points and the target. The leaf key is unique.
  auto shared = [](const Node& n) {
    return n.kind == NodeKind::Intersection || n.kind == NodeKind::Target ||
           (n.kind == NodeKind::Refraction && n.side == 1);
  };
  std::map<Key, Key> parent;
  std::map<Key, std::set<Key>> children;
  std::map<Key, std::set<int>> through;
  std::map<Key, Point> where;
  for (std::size_t k = 0; k < sources.size(); ++k) {
    std::vector<Key> seq;
    const Key leaf{-1, -1, -1, -1, static_cast<int>(k)};
    seq.push_back(leaf);
    where[leaf] = sources[k];
    for (const Node& n : tree.paths[k].nodes)
      if (shared(n)) {
        seq.push_back(n.key());
        where[n.key()] = n.pos;
      }
    for (std::size_t q = 0; q < seq.size(); ++q) {
      through[seq[q]].insert(static_cast<int>(k));
      if (q + 1 == seq.size()) break;
      auto [it, inserted] = parent.emplace(seq[q], seq[q + 1]);
      if (!inserted && it->second != seq[q + 1]) tree.suffix_consistent = false;
      children[seq[q + 1]].insert(seq[q]);
    }
  }
  // Parent pointers must reach the root without revisiting a node.
  for (const auto& [start, _] : parent) {
    std::set<Key> visited{start};
    Key cur = start;
    while (parent.count(cur)) {
      cur = parent.at(cur);
      if (!visited.insert(cur).second) {
        tree.acyclic = false;
        break;
      }
    }
  }
  for (const auto& [key, kids] : children) {
    if (kids.size() < 2 || std::get<0>(key) == static_cast<int>(NodeKind::Target)) continue;
    CoalescenceNode c;
    c.at = where.at(key);
    c.leaves.assign(through.at(key).begin(), through.at(key).end());
    tree.coalescence.push_back(c);
    tree.cut_points.push_back(c.at);
  }
  return tree;
}

// ---------------------------------------------------------------------------
// Cut locus.

struct GridSpec {
  Point center;
  double spacing = 0.1;
  double extent = 1.0;  // half-width

  std::vector<Point> points() const {
    if (!(spacing > 0.0) || !(extent >= 0.0)) throw std::invalid_argument("GridSpec: bad spacing or extent");
    const int n = static_cast<int>(std::floor(extent / spacing + 1e-9));
    std::vector<Point> out;
    for (int j = -n; j <= n; ++j)
      for (int i = -n; i <= n; ++i) out.push_back({center.x + i * spacing, center.y + j * spacing});
    return out;
  }
};

struct CutLocusHit {
  Point at;
  int multiplicity = 0;
  double time_gap = 0.0;
};

struct CutLocusSample {
  Point origin;
  std::vector<CutLocusHit> hits;
  std::size_t scanned = 0;
  std::size_t multiplicity3 = 0;
};

/// Grid points admitting at least two geometrically distinct paths within
/// `slack_rel * T_eps` of optimal.
inline CutLocusSample cut_locus_scan(const Scene& s, Point origin, const GridSpec& grid, double eps, double slack_rel = 1e-6) {
  if (!(slack_rel > 0.0)) throw std::invalid_argument("cut_locus_scan: slack must be positive");
  CutLocusSample out;
  out.origin = origin;
  std::vector<Point> pts;
  for (Point p : grid.points())
    if (!(p == origin)) pts.push_back(p);
  out.scanned = pts.size();
  const auto found = parallel_map(pts.size(), [&](std::size_t k) -> std::optional<CutLocusHit> {
    const double t = geodesic(s, origin, pts[k], eps).total_time;
    const auto paths = k_near_geodesics(s, origin, pts[k], eps, 3, slack_rel * t);
    if (paths.size() < 2) return std::nullopt;
    return CutLocusHit{pts[k], static_cast<int>(paths.size()), paths[1].total_time - paths[0].total_time};
  });
  for (const auto& h : found)
    if (h) {
      out.hits.push_back(*h);
      if (h->multiplicity >= 3) ++out.multiplicity3;
    }
  return out;
}

// ---------------------------------------------------------------------------
// Stars.

struct StarReport {
  int arms = 0;
  int probes = 0;
  std::vector<GeodesicPath> paths;
};

namespace detail {

/// Pieces of a polyline lying outside the open disc B(c, r).
inline std::vector<Segment> clip_outside(const std::vector<Point>& poly, Point c, double r) {
  std::vector<Segment> out;
  for (std::size_t i = 1; i < poly.size(); ++i) {
    const Point a = poly[i - 1], d = poly[i] - poly[i - 1];
    const double dd = dot(d, d);
    if (dd == 0.0) continue;
    // |a + t d - c|^2 < r^2 on (t0, t1).
    const Point f = a - c;
    const double bq = dot(f, d), cq = dot(f, f) - r * r;
    const double disc = bq * bq - dd * cq;
    if (disc <= 0.0) {
      out.push_back({a, poly[i]});
      continue;
    }
    const double root = std::sqrt(disc);
    const double t0 = (-bq - root) / dd, t1 = (-bq + root) / dd;
    if (t0 > 0.0) out.push_back({a, a + std::min(t0, 1.0) * d});
    if (t1 < 1.0) out.push_back({a + std::max(t1, 0.0) * d, poly[i]});
  }
  return out;
}

inline int max_independent_set(const std::vector<std::uint32_t>& conflicts, std::uint32_t candidates) {
  if (candidates == 0) return 0;
  const int v = __builtin_ctz(candidates);
  const std::uint32_t bit = 1u << v;
  // Vertices without conflicts are always taken.
  if ((conflicts[v] & candidates) == 0) return 1 + max_independent_set(conflicts, candidates & ~bit);
  const int with = 1 + max_independent_set(conflicts, candidates & ~bit & ~conflicts[v]);
  const int without = max_independent_set(conflicts, candidates & ~bit);
  return std::max(with, without);
}

}  // namespace detail

/// Largest set of geodesics from p to `probes` equally spaced points of the
/// circle of radius delta that are pairwise disjoint outside B(p, delta/100).
inline StarReport star_arms(const Scene& s, Point p, double eps, double delta, int probes = 24) {
  if (!(delta > 0.0)) throw std::invalid_argument("star_arms: delta must be positive");
  if (probes < 1 || probes > 32) throw std::invalid_argument("star_arms: probes must be in [1, 32]");
  StarReport rep;
  rep.probes = probes;
  rep.paths = parallel_map(static_cast<std::size_t>(probes), [&](std::size_t k) {
    const double a = 2.0 * kPi * static_cast<double>(k) / probes;
    return geodesic(s, p, p + delta * Point{std::cos(a), std::sin(a)}, eps);
  });
  std::vector<std::vector<Segment>> pieces;
  for (const auto& path : rep.paths) pieces.push_back(detail::clip_outside(path.polyline(), p, delta / 100.0));
  std::vector<std::uint32_t> conflicts(probes, 0);
  for (int a = 0; a < probes; ++a)
    for (int b = a + 1; b < probes; ++b) {
      bool touch = false;
      for (const Segment& u : pieces[a]) {
        for (const Segment& w : pieces[b])
          if (segment_distance(u.a, u.b, w.a, w.b) <= 1e-9) {
            touch = true;
            break;
          }
        if (touch) break;
      }
      if (touch) {
        conflicts[a] |= 1u << b;
        conflicts[b] |= 1u << a;
      }
    }
  const std::uint32_t all = probes == 32 ? ~0u : ((1u << probes) - 1u);
  rep.arms = detail::max_independent_set(conflicts, all);
  return rep;
}

// ---------------------------------------------------------------------------
// Self-similarity.

struct ScalingReport {
  double beta = 3.0;
  std::vector<double> radii;
  std::vector<std::vector<double>> samples;  // raw T_eps per radius
  std::vector<double> medians;
  double slope = 0.0;
  double expected_slope = 0.0;
  double implied_dimension = 0.0;
  double ks_statistic = 0.0;
  double ks_critical_1pct = 0.0;
  std::vector<double> contained_fraction;
};

struct ScalingOptions {
  double window_factor = 2.0;  // window radius / query distance
};

/// For each r, T_{eps_r}(0, r e1) over fresh scenes with cutoff
/// eps_r = eps0 r^{1/(beta-1)} and window scaled by r. Scenes at radius r are
/// images in law of the unit-radius ones, so the normalised times
/// r^{-(beta-2)/(beta-1)} T share one distribution.
inline ScalingReport scaling_exponent(double beta, const std::vector<double>& radii, std::size_t trials, double eps0,
                                      std::uint64_t seed, const ScalingOptions& opt = {}) {
  if (radii.size() < 2) throw std::invalid_argument("scaling_exponent: need at least two radii");
  if (trials < 100) throw std::invalid_argument("scaling_exponent: need at least 100 trials");
  ScalingReport rep;
  rep.beta = beta;
  rep.radii = radii;
  rep.expected_slope = (beta - 2.0) / (beta - 1.0);
  rep.implied_dimension = (beta - 1.0) * 2.0 / (beta - 2.0);
  std::vector<double> log_r, log_med;
  for (std::size_t ri = 0; ri < radii.size(); ++ri) {
    const double r = radii[ri];
    const double eps_r = eps0 * std::pow(r, 1.0 / (beta - 1.0));
    const Point target{r, 0.0};
    struct Trial {
      double t;
      bool contained;
    };
    const auto res = parallel_map(trials, [&](std::size_t k) {
      const std::uint64_t sd = mix64(seed ^ mix64(static_cast<std::uint64_t>(ri) * trials + k + 1));
      const Scene sc = sample_scene({0.5 * r, 0.0}, opt.window_factor * r, eps_r, beta, sd);
      BracketOptions bo;
      bo.kendall = false;
      bo.certificates = false;
      const auto b = t_eps(sc, {0.0, 0.0}, target, eps_r, bo);
      const auto cert = containment_certificate(sc, {0.0, 0.0}, target, b.t_eps, eps_r);
      return Trial{b.t_eps, cert.containment_ok};
    });
    std::vector<double> ts;
    std::size_t contained = 0;
    for (const Trial& t : res) {
      ts.push_back(t.t);
      contained += t.contained ? 1 : 0;
    }
    rep.contained_fraction.push_back(static_cast<double>(contained) / static_cast<double>(trials));
    rep.medians.push_back(stats::median(ts));
    log_r.push_back(std::log(r));
    log_med.push_back(std::log(rep.medians.back()));
    rep.samples.push_back(std::move(ts));
  }
  rep.slope = stats::ols_slope(log_r, log_med);
  auto normalised = [&](std::size_t ri) {
    std::vector<double> out = rep.samples[ri];
    const double f = std::pow(radii[ri], -rep.expected_slope);
    for (double& t : out) t *= f;
    return out;
  };
  rep.ks_statistic = stats::ks_two_sample(normalised(0), normalised(radii.size() - 1));
  rep.ks_critical_1pct = stats::ks_two_sample_critical(0.01, trials, trials);
  return rep;
}

// ---------------------------------------------------------------------------
// Poisson intensity.

struct PoissonCheck {
  double expected = 0.0;
  double mean = 0.0;
  double variance = 0.0;
  double mean_z = 0.0;
  double variance_z = 0.0;
  bool pass = false;
};

/// Road counts over `trials` seeds against Poisson(R v0^-(beta-1)); passes
/// when mean and variance are both within 4 standard errors.
inline PoissonCheck poisson_law_check(double R, double v0, double beta, std::size_t trials, std::uint64_t seed) {
  if (trials < 1000) throw std::invalid_argument("poisson_law_check: need at least 1000 trials");
  PoissonCheck c;
  c.expected = expected_road_count(R, v0, beta);
  const auto counts = parallel_map(trials, [&](std::size_t k) {
    return static_cast<double>(sample_scene({0.0, 0.0}, R, v0, beta, mix64(seed + k)).roads.size());
  });
  c.mean = stats::mean(counts);
  c.variance = stats::variance(counts);
  const double n = static_cast<double>(trials);
  const double lambda = c.expected;
  c.mean_z = (c.mean - lambda) / std::sqrt(lambda / n);
  // Var(s^2) for Poisson data: (mu4 - sigma^4 (n-3)/(n-1)) / n with mu4 = lambda + 3 lambda^2.
  const double var_se = std::sqrt((lambda + 3.0 * lambda * lambda - lambda * lambda * (n - 3.0) / (n - 1.0)) / n);
  c.variance_z = (c.variance - lambda) / var_se;
  c.pass = std::fabs(c.mean_z) <= 4.0 && std::fabs(c.variance_z) <= 4.0;
  return c;
}

// ---------------------------------------------------------------------------
// Balls.

struct BallRaster {
  Point center;
  double eps = 1.0;
  Point origin;  // lower-left cell centre
  double step = 0.0;
  int resolution = 0;
  std::vector<double> radii;
  std::vector<double> values;  // row-major, row 0 at origin.y

  double at(int ix, int iy) const { return values[static_cast<std::size_t>(iy) * resolution + ix]; }
  Point cell(int ix, int iy) const { return {origin.x + ix * step, origin.y + iy * step}; }
  /// Index of the smallest radius whose ball contains the cell, or radii.size().
  std::size_t level(int ix, int iy) const {
    const double v = at(ix, iy);
    return static_cast<std::size_t>(std::lower_bound(radii.begin(), radii.end(), v) - radii.begin());
  }
};

/// T_eps from `center` to every cell centre of a resolution x resolution
/// grid over the scene window. One Dijkstra from the centre gives the time
/// to every graph node; the last leg to a cell is then either straight from
/// the centre, straight from a node, or straight from the cell's own
/// refraction point on a road, reached along that road from its neighbouring
/// nodes. This is the multi-target search over the graph augmented with the
/// grid cells as terminals.
inline BallRaster ball_raster(const Scene& s, Point center, double eps, std::vector<double> radii, int resolution) {
  if (resolution < 32) throw std::invalid_argument("ball_raster: resolution must be at least 32");
  if (!(eps > 0.0)) throw std::invalid_argument("ball_raster: eps must be positive");
  std::sort(radii.begin(), radii.end());
  BallRaster br;
  br.center = center;
  br.eps = eps;
  br.resolution = resolution;
  br.radii = radii;
  br.step = 2.0 * s.radius / resolution;
  br.origin = {s.center.x - s.radius + 0.5 * br.step, s.center.y - s.radius + 0.5 * br.step};

  const Graph g = build_graph(s, center, center, eps);
  const SearchTree tree = dijkstra(g, g.source);
  const auto roads = fast_roads(s, eps);

  struct Stop {
    double u;
    double d;
  };
  std::vector<std::vector<Stop>> stops(roads.size());
  std::map<RoadId, std::size_t> slot;
  for (std::size_t r = 0; r < roads.size(); ++r) slot[roads[r]->id] = r;
  for (const Node& n : g.nodes) {
    if (n.kind == NodeKind::Target) continue;
    auto add = [&](RoadId id) { stops[slot.at(id)].push_back({roads[slot.at(id)]->line.abscissa(n.pos), tree.dist[n.id]}); };
    if (n.kind == NodeKind::Intersection) {
      add(n.road_a);
      add(n.road_b);
    } else if (n.kind == NodeKind::Refraction) {
      add(n.road_a);
    } else if (n.kind == NodeKind::Source) {
      for (std::size_t r = 0; r < roads.size(); ++r)
        if (distance_to_line(n.pos, roads[r]->line) <= kSnapTol) add(roads[r]->id);
    }
  }
  for (auto& st : stops) std::sort(st.begin(), st.end(), [](const Stop& a, const Stop& b) { return a.u < b.u; });

  // Best arrival time at abscissa u of road r, coming along the road.
  auto along = [&](std::size_t r, double u) {
    const auto& st = stops[r];
    if (st.empty()) return kInf;
    const auto it = std::lower_bound(st.begin(), st.end(), u, [](const Stop& a, double x) { return a.u < x; });
    double best = kInf;
    if (it != st.end()) best = std::min(best, it->d + (it->u - u) / roads[r]->v);
    if (it != st.begin()) best = std::min(best, std::prev(it)->d + (u - std::prev(it)->u) / roads[r]->v);
    return best;
  };

  br.values.assign(static_cast<std::size_t>(resolution) * resolution, 0.0);
  for (int iy = 0; iy < resolution; ++iy)
    for (int ix = 0; ix < resolution; ++ix) {
      const Point c = br.cell(ix, iy);
      double best = distance(center, c) / eps;
      for (std::size_t r = 0; r < roads.size(); ++r) {
        const Road& road = *roads[r];
        if (distance_to_line(c, road.line) <= kSnapTol) {
          best = std::min(best, along(r, road.line.abscissa(c)));
          continue;
        }
        for (const Stop& st : stops[r]) best = std::min(best, st.d + distance(road.line.at(st.u), c) / eps);
        for (const Point y : refraction_points(c, road.line, road.v, eps))
          best = std::min(best, along(r, road.line.abscissa(y)) + distance(y, c) / eps);
      }
      br.values[static_cast<std::size_t>(iy) * resolution + ix] = best;
    }
  return br;
}

}  // namespace roadmetric
