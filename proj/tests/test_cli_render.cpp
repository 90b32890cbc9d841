#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "roadmetric/roadmetric.hpp"

using namespace roadmetric;
namespace fs = std::filesystem;

namespace {

struct CliRun {
  int status = -1;
  std::string out;
};

CliRun run_cli(const std::string& args) {
  const std::string cmd = std::string(ROADMETRIC_CLI) + " " + args + " 2>/dev/null";
  CliRun r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, p)) r.out.append(buf, n);
  const int st = pclose(p);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "roadmetric_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// Elements open and close in order and every number is finite.
void expect_well_formed(const std::string& svg) {
  std::vector<std::string> stack;
  const std::regex tag(R"(<(/?)([a-zA-Z]+)[^>]*?(/?)>)");
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), tag); it != std::sregex_iterator(); ++it) {
    const auto& m = *it;
    if (m[1] == "/") {
      ASSERT_FALSE(stack.empty());
      EXPECT_EQ(stack.back(), m[2].str());
      stack.pop_back();
    } else if (m[3] != "/") {
      stack.push_back(m[2]);
    }
  }
  EXPECT_TRUE(stack.empty());
  EXPECT_EQ(svg.find("nan"), std::string::npos);
  EXPECT_EQ(svg.find("inf"), std::string::npos);
}

std::vector<std::vector<Point>> polylines(const std::string& svg) {
  std::vector<std::vector<Point>> out;
  const std::regex poly(R"(<polyline points="([^"]*)\")");
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), poly); it != std::sregex_iterator(); ++it) {
    std::vector<Point> pts;
    std::istringstream is((*it)[1].str());
    std::string pair;
    while (is >> pair) {
      const auto comma = pair.find(',');
      pts.push_back({std::stod(pair.substr(0, comma)), std::stod(pair.substr(comma + 1))});
    }
    out.push_back(pts);
  }
  return out;
}

}  // namespace

TEST(Svg, DeterministicAndWellFormed) {
  const Scene s = sample_scene({0.0, 0.0}, 2.0, 0.2, 3.0, 3);
  SvgOverlay ov;
  ov.paths.push_back(geodesic(s, {-1.0, 0.5}, {1.0, -0.5}, 0.2));
  ov.points = {{-1.0, 0.5}, {1.0, -0.5}};
  ov.title = "a < b & c";
  const std::string a = render_svg(s, ov), b = render_svg(s, ov);
  EXPECT_EQ(a, b);
  expect_well_formed(a);
  EXPECT_NE(a.find("&lt;"), std::string::npos);
  EXPECT_EQ(polylines(a).size(), 1u);
}

TEST(Svg, EmptySceneBallIsConcentric) {
  const Scene s = Scene::from_roads({}, {0.0, 0.0}, 1.0, 1.0, 3.0);
  const BallRaster b = ball_raster(s, {0.0, 0.0}, 1.0, {0.25, 0.5, 0.75}, 48);
  for (int iy = 0; iy < 48; ++iy)
    for (int ix = 0; ix < 48; ++ix) {
      const double r = norm(b.cell(ix, iy));
      const std::size_t lv = b.level(ix, iy);
      if (lv < 3) {
        EXPECT_LE(r, b.radii[lv] + 1e-12);
      }
      if (lv > 0) {
        EXPECT_GT(r, b.radii[lv - 1] - 1e-12);
      }
    }
  SvgOverlay ov;
  ov.ball = &b;
  const std::string svg = render_svg(s, ov);
  expect_well_formed(svg);
  EXPECT_NE(svg.find("<g id=\"ball\""), std::string::npos);
  EXPECT_EQ(svg.find("<g id=\"roads\""), std::string::npos);
}

TEST(Svg, PathVerticesSitOnRenderedRoads) {
  // Geodesics from eight points into the origin; after mapping back from
  // pixels every interior vertex lies on a road of the scene.
  const Scene s = sample_scene({0.0, 0.0}, 2.0, 0.15, 3.0, 21);
  SvgOverlay ov;
  for (int k = 0; k < 8; ++k) ov.paths.push_back(geodesic(s, {1.5 * std::cos(k * kPi / 4), 1.5 * std::sin(k * kPi / 4)}, {0.0, 0.0}, 0.15));
  const SvgStyle st;
  const std::string svg = render_svg(s, ov, st);
  expect_well_formed(svg);
  const auto polys = polylines(svg);
  ASSERT_EQ(polys.size(), 8u);
  const double scale = st.size / (2.0 * s.radius);
  const double pixel_tol = 1e-4 / scale;  // rounding of %.4f
  for (const auto& poly : polys) {
    ASSERT_GE(poly.size(), 2u);
    for (std::size_t i = 1; i + 1 < poly.size(); ++i) {
      const Point q{poly[i].x / scale - s.radius, s.radius - poly[i].y / scale};
      double best = kInf;
      for (const Road& r : s.roads) best = std::min(best, distance_to_line(q, r.line));
      EXPECT_LE(best, 2 * pixel_tol);
    }
  }
}

TEST(Svg, WriteToUnwritablePathThrows) {
  EXPECT_THROW(write_svg("/nonexistent-dir/x.svg", Scene{}), std::runtime_error);
}

TEST(Report, ScalingCsv) {
  ScalingReport r;
  r.radii = {1.0, 2.0};
  r.samples = {{0.5, 0.25}, {1.0}};
  std::ostringstream os;
  write_scaling_csv(os, r);
  EXPECT_EQ(os.str(), "radius,trial,time\n1,0,0.5\n1,1,0.25\n2,0,1\n");
}

TEST(Report, NonFiniteBecomesNull) {
  PauseProfile p;
  p.stabilized = true;
  const Json j = to_json(p);
  EXPECT_EQ(j["kind"], "pause");
  EXPECT_TRUE(j["interior_min_speed"].is_null());
}

TEST(Cli, SampleRoundTripsThroughSceneFile) {
  const fs::path f = scratch("scene.txt");
  ASSERT_EQ(run_cli("sample --seed 7 --radius 1 --vmin 0.1 -o " + f.string()).status, 0);
  const Scene s = scene_from_string(slurp(f));
  EXPECT_EQ(s, sample_scene({0.0, 0.0}, 1.0, 0.1, 3.0, 7));
  const CliRun g = run_cli("geodesic --scene " + f.string() + " --from 0,0 --to 0.5,0.5 --eps 0.1");
  ASSERT_EQ(g.status, 0);
  EXPECT_EQ(g.out.rfind("path total_time=", 0), 0u);
  const CliRun j = run_cli("geodesic --scene " + f.string() + " --from 0,0 --to 0.5,0.5 --eps 0.1 --json");
  ASSERT_EQ(j.status, 0);
  const Json rec = Json::parse(j.out);
  EXPECT_EQ(rec["kind"], "path");
  EXPECT_NEAR(rec["t_eps"].get<double>(), geodesic(s, {0.0, 0.0}, {0.5, 0.5}, 0.1).total_time, 1e-12);
}

TEST(Cli, Errors) {
  EXPECT_EQ(run_cli("geodesic --no-such-flag").status, 1);
  EXPECT_EQ(run_cli("").status, 1);
  EXPECT_EQ(run_cli("render -o /nonexistent-dir/out.svg").status, 1);
  EXPECT_EQ(run_cli("geodesic --vmin -1").status, 1);
}

TEST(Cli, PoissonCheckPasses) {
  const CliRun r = run_cli("check poisson --trials 2000");
  EXPECT_EQ(r.status, 0);
}

TEST(Cli, RenderWritesSvg) {
  const fs::path f = scratch("fig.svg");
  ASSERT_EQ(run_cli("render --seed 3 --radius 2 --vmin 0.2 --paths-from '1,1;0.5,-1' --to 0,0 --ball --radii 0.5,1 --resolution 32 -o " +
                    f.string())
                .status,
            0);
  const std::string svg = slurp(f);
  expect_well_formed(svg);
  EXPECT_EQ(polylines(svg).size(), 2u);
  EXPECT_NE(svg.find("<g id=\"ball\""), std::string::npos);
}

TEST(Cli, SubcommandsEmitJsonLines) {
  for (const std::string args : {"sweep --radius 2 --vmin 0.2 --eps-list 0.8,0.4,0.2 --to 1,0",
                                 "hubs --radius 2 --vmin 0.3 --count 2", "confluence --radius 2 --vmin 0.3 --ring 4",
                                 "stars --radius 2 --vmin 0.3 --count 1", "cutlocus --radius 2 --vmin 0.5 --extent 0.2 --spacing 0.1",
                                 "ball --radius 1 --vmin 0.5 --resolution 32"}) {
    const CliRun r = run_cli(args);
    ASSERT_EQ(r.status, 0) << args;
    std::istringstream is(r.out);
    std::string line;
    int lines = 0;
    while (std::getline(is, line)) {
      if (line.empty()) continue;
      const Json j = Json::parse(line);
      EXPECT_TRUE(j.contains("kind")) << args;
      ++lines;
    }
    EXPECT_GT(lines, 0) << args;
  }
}
