#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "roadmetric/analysis.hpp"
#include "roadmetric/solver.hpp"

using namespace roadmetric;

namespace {

Scene scene_of(std::vector<Road> roads, double R = 10.0) { return Scene::from_roads(std::move(roads), {0.0, 0.0}, R, 0.01, 3.0); }

}  // namespace

TEST(ShortestPath, EmptyScene) {
  const GeodesicPath p = geodesic(scene_of({}), {0.0, 0.0}, {3.0, 4.0}, 0.5);
  ASSERT_EQ(p.segments.size(), 1u);
  EXPECT_EQ(p.segments[0].mode, SegmentMode::Straight);
  EXPECT_DOUBLE_EQ(p.total_time, 10.0);
}

TEST(ShortestPath, BothTerminalsOnOneRoad) {
  const GeodesicPath p = geodesic(scene_of({{0, Line(0.0, 0.0), 10.0}}), {-2.0, 0.0}, {3.0, 0.0}, 1.0);
  ASSERT_EQ(p.segments.size(), 1u);
  EXPECT_EQ(p.segments[0].mode, SegmentMode::Road);
  EXPECT_NEAR(p.total_time, 0.5, 1e-15);
}

TEST(ShortestPath, StraightRoadStraight) {
  const GeodesicPath p = geodesic(scene_of({{0, Line(0.0, 0.0), 100.0}}), {0.0, 1.0}, {4.0, 1.0}, 1.0);
  ASSERT_EQ(p.segments.size(), 3u);
  EXPECT_EQ(p.segments[0].mode, SegmentMode::Straight);
  EXPECT_EQ(p.segments[1].mode, SegmentMode::Road);
  EXPECT_EQ(p.segments[2].mode, SegmentMode::Straight);
  const double c = 0.01, off = c / std::sqrt(1.0 - c * c);
  EXPECT_NEAR(p.total_time, (4.0 - 2.0 * off) / 100.0 + 2.0 / std::sqrt(1.0 - c * c), 1e-12);
  EXPECT_NEAR(p.total_time, 2.0399, 5e-5);
  EXPECT_NEAR(p.segments[0].to.x, off, 1e-12);
  EXPECT_NEAR(p.segments[2].from.x, 4.0 - off, 1e-12);

  // Brute force over entry and exit abscissae at resolution 1e-4.
  double best = kInf;
  for (int i = 0; i <= 2000; ++i)
    for (int j = 0; j <= 2000; ++j) {
      const double a = -0.1 + 1e-4 * i, b = 3.9 + 1e-4 * j;
      const double t = std::hypot(a, 1.0) + std::fabs(b - a) / 100.0 + std::hypot(4.0 - b, 1.0);
      best = std::min(best, t);
    }
  EXPECT_NEAR(p.total_time, best, 1e-8);
  EXPECT_LE(p.total_time, best + 1e-12);
}

TEST(TEps, ZeroAndEmpty) {
  const Scene s = sample_scene({0.0, 0.0}, 2.0, 0.3, 3.0, 3);
  EXPECT_EQ(t_eps(s, {0.2, 0.1}, {0.2, 0.1}, 0.3).t_eps, 0.0);
  EXPECT_DOUBLE_EQ(t_eps(scene_of({}), {0.0, 0.0}, {1.0, 0.0}, 0.25).t_eps, 4.0);
}

TEST(TEps, Symmetric) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const Scene s = sample_scene({0.0, 0.0}, 2.0, 0.45, 3.0, seed);
    const Point x{u(rng), u(rng)}, y{u(rng), u(rng)};
    const double a = t_eps(s, x, y, 0.45).t_eps, b = t_eps(s, y, x, 0.45).t_eps;
    EXPECT_NEAR(a, b, 1e-12 * std::max(1.0, a));
  }
}

TEST(TEps, TriangleInequality) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const Scene s = sample_scene({0.0, 0.0}, 2.0, 0.3, 3.0, seed);
    const Point x{u(rng), u(rng)}, y{u(rng), u(rng)}, z{u(rng), u(rng)};
    const double xy = t_eps(s, x, y, 0.3).t_eps, yz = t_eps(s, y, z, 0.3).t_eps, xz = t_eps(s, x, z, 0.3).t_eps;
    EXPECT_LE(xz, xy + yz + 1e-12);
  }
}

TEST(TEps, MatchesLatticeOracle) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> th(0.0, kPi), w(-1.5, 1.5), v(1.5, 10.0);
  std::uniform_int_distribution<int> cell(-96, 96);
  const double h = 1.0 / 64.0;
  for (int k = 0; k < 4; ++k) {
    std::vector<Road> roads;
    for (int r = 0; r < 1 + k % 3; ++r) roads.push_back({r, Line(th(rng), w(rng)), v(rng)});
    const Scene s = scene_of(roads, 3.0);
    const Point x{cell(rng) * h, cell(rng) * h}, y{cell(rng) * h, cell(rng) * h};
    const GeodesicPath p = geodesic(s, x, y, 1.0);
    bool inside = true;
    for (Point q : p.polyline()) inside = inside && std::fabs(q.x) <= 2.0 && std::fabs(q.y) <= 2.0;
    if (!inside) continue;
    const double lat = oracle::lattice_time(s, x, y, 1.0, {-2.0, -2.0}, 256, h);
    EXPECT_LE(p.total_time, lat * (1.0 + 1e-9) + 1e-12);
    EXPECT_NEAR(p.total_time, lat, 0.03 * lat);
  }
}

TEST(PathRecord, Format) {
  const auto r = t_eps(scene_of({{0, Line(0.0, 0.0), 100.0}}), {0.0, 1.0}, {4.0, 1.0}, 1.0);
  std::ostringstream os;
  write_path_record(os, r);
  const std::string text = os.str();
  EXPECT_EQ(text.rfind("path total_time=", 0), 0u);
  EXPECT_NE(text.find("\nstraight - 0 1 "), std::string::npos);
  EXPECT_NE(text.find("\nroad 0 "), std::string::npos);
}

TEST(KNear, EmptySceneSinglePath) {
  const auto paths = k_near_geodesics(scene_of({}), {0.0, 0.0}, {1.0, 1.0}, 1.0, 3, 1e-3);
  EXPECT_EQ(paths.size(), 1u);
}

TEST(KNear, CrossingOneRoadIsUnique) {
  // Going from (0,1) to (0,-1) across a single road needs a vertical
  // displacement of 2 at speed at most eps in the vertical direction, so the
  // straight segment is the only geodesic.
  const Scene s = scene_of({{0, Line(0.0, 0.0), 10.0}});
  const auto paths = k_near_geodesics(s, {0.0, 1.0}, {0.0, -1.0}, 1.0, 3, 1e-6);
  ASSERT_EQ(paths.size(), 1u);
  EXPECT_NEAR(paths[0].total_time, 2.0, 1e-12);
}

TEST(KNear, MirrorPairOfRoadsTies) {
  // Two parallel fast roads x = +-1 and a far target on the symmetry axis:
  // the left and right routes are reflections with equal time.
  const Scene s = scene_of({{0, Line(kPi / 2, -1.0), 50.0}, {1, Line(kPi / 2, 1.0), 50.0}}, 20.0);
  const auto paths = k_near_geodesics(s, {0.0, 0.0}, {0.0, 10.0}, 1.0, 3, 1e-9);
  ASSERT_EQ(paths.size(), 2u);
  EXPECT_NEAR(paths[0].total_time, paths[1].total_time, 1e-12);
  const auto a = paths[0].polyline(), b = paths[1].polyline();
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_NEAR(a[i].x, -b[i].x, 1e-12);
    EXPECT_NEAR(a[i].y, b[i].y, 1e-12);
  }
}

TEST(KNear, ZeroSlackGenericSceneUnique) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Scene s = sample_scene({0.0, 0.0}, 2.0, 0.3, 3.0, seed);
    const Point x{u(rng), u(rng)}, y{u(rng), u(rng)};
    EXPECT_EQ(k_near_geodesics(s, x, y, 0.3, 3, 0.0).size(), 1u);
    const Graph g = build_graph(s, x, y, 0.3);
    const auto two = yen_k_shortest(g, 2);
    if (two.size() == 2) {
      EXPECT_GT(two[1].cost - two[0].cost, 1e-9);
    }
  }
}

TEST(Yen, PathsAreLooplessSortedAndDistinct) {
  const Scene s = sample_scene({0.0, 0.0}, 2.0, 0.3, 3.0, 21);
  const Graph g = build_graph(s, {-0.8, 0.3}, {0.9, -0.2}, 0.3);
  const auto paths = yen_k_shortest(g, 8);
  ASSERT_FALSE(paths.empty());
  EXPECT_NEAR(paths[0].cost, shortest_path(g).total_time, 1e-12);
  std::set<std::vector<int>> seen;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    if (i) {
      EXPECT_LE(paths[i - 1].cost, paths[i].cost + 1e-15);
    }
    std::set<int> nodes(paths[i].nodes.begin(), paths[i].nodes.end());
    EXPECT_EQ(nodes.size(), paths[i].nodes.size());
    EXPECT_TRUE(seen.insert(paths[i].nodes).second);
  }
}

TEST(Kendall, EmptyAndOnRoad) {
  EXPECT_DOUBLE_EQ(kendall_upper_bound(scene_of({}), {0.0, 0.0}, {2.0, 0.0}, 0.5).time, 4.0);
  const auto k = kendall_upper_bound(scene_of({{0, Line(0.0, 0.0), 4.0}}), {0.0, 0.0}, {2.0, 0.0}, 0.5);
  EXPECT_NEAR(k.time, 0.5, 1e-15);
  ASSERT_EQ(k.path.segments.size(), 1u);
  EXPECT_EQ(k.path.segments[0].mode, SegmentMode::Road);
}

TEST(Kendall, BoundsTEpsAndIsConnected) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> ratios;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Scene s = sample_scene({0.0, 0.0}, 3.0, std::sqrt(3.0 / 50.0), 3.0, seed);
    const Point x{u(rng), u(rng)}, y{u(rng), u(rng)};
    const auto k = kendall_upper_bound(s, x, y, s.v_min, 0.3, 12);
    const double t = t_eps(s, x, y, s.v_min, {.kendall = false}).t_eps;
    EXPECT_GE(k.time, t - 1e-12);
    ratios.push_back(k.time / t);
    const auto poly = k.path.polyline();
    ASSERT_FALSE(poly.empty());
    EXPECT_EQ(poly.front(), x);
    EXPECT_EQ(poly.back(), y);
    for (std::size_t i = 1; i < k.path.segments.size(); ++i) EXPECT_EQ(k.path.segments[i - 1].to, k.path.segments[i].from);
  }
  EXPECT_LT(stats::median(ratios), 10.0);
}

TEST(Sweep, EmptySceneScalesInverse) {
  const auto r = eps_sweep(scene_of({}), {0.0, 0.0}, {1.0, 0.0}, {1.0, 0.5, 0.25});
  ASSERT_EQ(r.size(), 3u);
  EXPECT_DOUBLE_EQ(r[1].t_eps, 2.0 * r[0].t_eps);
  EXPECT_DOUBLE_EQ(r[2].t_eps, 4.0 * r[0].t_eps);
}

TEST(Sweep, TerminalsOnFastRoadConstant) {
  const auto r = eps_sweep(scene_of({{0, Line(0.3, 0.0), 5.0}}), Line(0.3, 0.0).at(-1.0), Line(0.3, 0.0).at(2.0), {1.0, 0.5, 0.25});
  for (const auto& b : r) EXPECT_NEAR(b.t_eps, 0.6, 1e-12);
}

TEST(Sweep, NondecreasingAndValidated) {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Scene s = sample_scene({0.0, 0.0}, 2.0, 0.15, 3.0, seed);
    const auto r = eps_sweep(s, {u(rng), u(rng)}, {u(rng), u(rng)}, {1.2, 0.6, 0.3, 0.15});
    for (std::size_t i = 1; i < r.size(); ++i) EXPECT_GE(r[i].t_eps, r[i - 1].t_eps - 1e-12);
  }
  const Scene s = sample_scene({0.0, 0.0}, 2.0, 0.15, 3.0, 1);
  EXPECT_THROW(eps_sweep(s, {0, 0}, {1, 0}, {0.5, 0.5}), std::invalid_argument);
  EXPECT_THROW(eps_sweep(s, {0, 0}, {1, 0}, {0.5, 0.1}), std::invalid_argument);
}

TEST(Conjugation, ScaledSceneScaledTime) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Scene s = sample_scene({0.0, 0.0}, 2.0, 0.3, 3.0, seed);
    const ScalingMap m({u(rng), u(rng)}, 4.0);
    const Point x{u(rng), u(rng)}, y{u(rng), u(rng)};
    const double before = t_eps(s, x, y, 0.3, {.kendall = false}).t_eps;
    const double after = t_eps(scale_scene(s, m), m.apply(x), m.apply(y), 0.3 * m.speed_factor(3.0), {.kendall = false}).t_eps;
    EXPECT_NEAR(after, 2.0 * before, 1e-9 * after);
  }
}

TEST(Hausdorff, Basics) {
  EXPECT_EQ(hausdorff({{0, 0}, {1, 0}}, {{0, 0}, {1, 0}}), 0.0);
  EXPECT_NEAR(hausdorff({{0, 0}, {1, 0}}, {{0, 1}, {1, 1}}), 1.0, 1e-15);
  EXPECT_NEAR(hausdorff({{0, 0}, {2, 0}}, {{0, 0}, {1, 0}}), 1.0, 1e-15);
}
