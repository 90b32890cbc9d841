// roadmetric: command-line driver for sampling scenes, solving for
// driving-time geodesics, and running the structure checks.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "roadmetric/roadmetric.hpp"

namespace rm = roadmetric;

namespace {

struct Common {
  std::uint64_t seed = 1;
  double beta = 3.0;
  double radius = 4.0;
  double vmin = 0.1;
  double eps = 0.0;  // 0: use vmin
  std::string center = "0,0";
  std::string scene;
};

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) throw std::invalid_argument("empty entry in list '" + text + "'");
    out.push_back(rm::parse_double(item));
  }
  return out;
}

rm::Point parse_point(const std::string& text) {
  const auto v = parse_list(text);
  if (v.size() != 2) throw std::invalid_argument("expected x,y but got '" + text + "'");
  return {v[0], v[1]};
}

/// Points separated by ';', e.g. "0,0;1,2".
std::vector<rm::Point> parse_points(const std::string& text) {
  std::vector<rm::Point> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';'))
    if (!item.empty()) out.push_back(parse_point(item));
  return out;
}

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--seed", c.seed, "scene seed")->capture_default_str();
  sub->add_option("--beta", c.beta, "speed tail exponent (> 2)")->capture_default_str();
  sub->add_option("--radius", c.radius, "sampling disc radius")->capture_default_str();
  sub->add_option("--vmin", c.vmin, "speed cutoff")->capture_default_str();
  sub->add_option("--eps", c.eps, "off-road speed (0 = vmin)")->capture_default_str();
  sub->add_option("--center", c.center, "sampling disc centre x,y")->capture_default_str();
  sub->add_option("--scene", c.scene, "read the scene from a file instead of sampling");
}

double eps_of(const Common& c) {
  const double e = c.eps > 0.0 ? c.eps : c.vmin;
  if (!(e > 0.0)) throw std::invalid_argument("eps must be positive");
  return e;
}

rm::Scene scene_of(const Common& c) {
  if (!c.scene.empty()) return rm::load_scene(c.scene);
  return rm::sample_scene(parse_point(c.center), c.radius, c.vmin, c.beta, c.seed);
}

struct Output {
  std::string path;
  std::ofstream file;

  std::ostream& stream() {
    if (path.empty() || path == "-") return std::cout;
    if (!file.is_open()) {
      file.open(path, std::ios::binary);
      if (!file) throw std::runtime_error("cannot open " + path + " for writing");
    }
    return file;
  }
};

// Deterministic selection of points for the hub and star commands.
std::vector<rm::Crossing> inner_crossings(const rm::Scene& s, double eps, double within) {
  std::vector<rm::Crossing> out;
  for (const rm::Crossing& c : rm::intersections(s))
    if (rm::distance(c.at, s.center) <= within && s.road(c.a).v > eps && s.road(c.b).v > eps) out.push_back(c);
  return out;
}

int check_poisson(std::size_t trials, std::uint64_t seed) {
  bool ok = true;
  const double cases[3][3] = {{1.0, 1.0, 3.0}, {2.0, 1.0, 3.0}, {1.0, 0.5, 3.0}};
  for (const auto& c : cases) {
    const auto r = rm::poisson_law_check(c[0], c[1], c[2], trials, seed);
    rm::write_jsonl(std::cout, rm::to_json(r, c[0], c[1], c[2]));
    std::fprintf(stderr, "%s poisson R=%g v0=%g beta=%g mean=%.4f expected=%.4f\n", r.pass ? "PASS" : "FAIL", c[0], c[1],
                 c[2], r.mean, r.expected);
    ok = ok && r.pass;
  }
  return ok ? 0 : 2;
}

int check_scaling(double beta, std::size_t trials, double eps0, std::uint64_t seed) {
  const auto r = rm::scaling_exponent(beta, {1.0, 4.0, 16.0}, trials, eps0, seed);
  rm::write_jsonl(std::cout, rm::to_json(r));
  const bool slope_ok = std::fabs(r.slope - r.expected_slope) <= 0.05;
  const bool ks_ok = r.ks_statistic < r.ks_critical_1pct;
  std::fprintf(stderr, "%s scaling slope=%.4f expected=%.4f\n", slope_ok ? "PASS" : "FAIL", r.slope, r.expected_slope);
  std::fprintf(stderr, "%s scaling ks=%.4f critical=%.4f\n", ks_ok ? "PASS" : "FAIL", r.ks_statistic, r.ks_critical_1pct);
  return slope_ok && ks_ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Poisson road network geodesics"};
  app.require_subcommand(1);
  Common c;
  std::string out_path;

  auto* sample = app.add_subcommand("sample", "sample a scene and write it");
  add_common(sample, c);
  sample->add_option("-o,--out", out_path, "scene file (default stdout)");

  std::string from = "0,0", to = "1,0";
  bool json = false;
  auto* geo = app.add_subcommand("geodesic", "shortest driving-time path between two points");
  add_common(geo, c);
  geo->add_option("--from", from, "x,y")->capture_default_str();
  geo->add_option("--to", to, "x,y")->capture_default_str();
  geo->add_flag("--json", json, "JSON record instead of the path record");

  std::string eps_list;
  auto* sweep = app.add_subcommand("sweep", "T_eps along a decreasing list of eps values");
  add_common(sweep, c);
  sweep->add_option("--from", from, "x,y")->capture_default_str();
  sweep->add_option("--to", to, "x,y")->capture_default_str();
  sweep->add_option("--eps-list", eps_list, "comma separated, strictly decreasing")->required();

  std::string radii = "0.5,1,2,4", svg_path;
  int resolution = 128;
  auto* ball = app.add_subcommand("ball", "raster of T_eps from a point");
  add_common(ball, c);
  ball->add_option("--from", from, "ball centre x,y")->capture_default_str();
  ball->add_option("--radii", radii, "time radii")->capture_default_str();
  ball->add_option("--resolution", resolution, "cells per side (>= 32)")->capture_default_str();
  ball->add_option("--svg", svg_path, "also render to this SVG file");

  std::size_t count = 10;
  double delta = 0.01;
  auto* hubs = app.add_subcommand("hubs", "verify 4-hubs at road crossings");
  add_common(hubs, c);
  hubs->add_option("--count", count, "crossings to check")->capture_default_str();
  hubs->add_option("--delta", delta, "arm length")->capture_default_str();

  std::string sources;
  std::size_t ring = 16;
  double ring_radius = 1.0;
  auto* conf = app.add_subcommand("confluence", "coalescence of geodesics into a target");
  add_common(conf, c);
  conf->add_option("--to", to, "target x,y")->capture_default_str();
  conf->add_option("--sources", sources, "sources 'x,y;x,y;...' (default: a ring)");
  conf->add_option("--ring", ring, "number of ring sources")->capture_default_str();
  conf->add_option("--ring-radius", ring_radius, "ring radius")->capture_default_str();

  double spacing = 0.1, extent = 1.0, slack = 1e-6;
  auto* cut = app.add_subcommand("cutlocus", "grid scan for points with several geodesics");
  add_common(cut, c);
  cut->add_option("--from", from, "origin x,y")->capture_default_str();
  cut->add_option("--grid-center", to, "grid centre x,y")->capture_default_str();
  cut->add_option("--spacing", spacing, "grid spacing")->capture_default_str();
  cut->add_option("--extent", extent, "grid half-width")->capture_default_str();
  cut->add_option("--slack", slack, "relative time slack")->capture_default_str();

  std::string at;
  auto* stars = app.add_subcommand("stars", "count disjoint geodesic arms at points");
  add_common(stars, c);
  stars->add_option("--at", at, "points 'x,y;...' (default: crossings near the centre)");
  stars->add_option("--delta", delta, "probe radius")->capture_default_str();
  stars->add_option("--count", count, "crossings probed when --at is absent")->capture_default_str();

  std::size_t trials = 300;
  double eps0 = 0.3;
  std::string csv_path;
  auto* scaling = app.add_subcommand("scaling", "scaling exponent of T_eps");
  add_common(scaling, c);
  scaling->add_option("--radii", radii, "query distances")->capture_default_str();
  scaling->add_option("--trials", trials, "scenes per distance (>= 100)")->capture_default_str();
  scaling->add_option("--eps0", eps0, "cutoff at distance 1")->capture_default_str();
  scaling->add_option("--csv", csv_path, "raw samples as CSV");

  std::string suite;
  auto* check = app.add_subcommand("check", "statistical suites; exit 2 on failure");
  add_common(check, c);
  check->add_option("suite", suite, "poisson | scaling")->required()->check(CLI::IsMember({"poisson", "scaling"}));
  std::size_t check_trials = 0;
  check->add_option("--trials", check_trials, "samples (default: 10000 for poisson, 300 for scaling)");
  check->add_option("--eps0", eps0, "scaling: cutoff at distance 1")->capture_default_str();

  std::string paths_from;
  bool draw_ball = false;
  auto* render = app.add_subcommand("render", "SVG of a scene with geodesics and balls");
  add_common(render, c);
  render->add_option("-o,--out", out_path, "SVG file")->required();
  render->add_option("--to", to, "geodesic target x,y")->capture_default_str();
  render->add_option("--paths-from", paths_from, "geodesic sources 'x,y;...'");
  render->add_option("--ball-from", from, "ball centre x,y (with --radii)");
  render->add_option("--radii", radii, "ball time radii")->capture_default_str();
  render->add_flag("--ball", draw_ball, "draw a ball raster");
  render->add_option("--resolution", resolution, "ball raster cells per side")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return 1;
  }

  CLI::App* active = app.get_subcommands().front();
  std::cerr << "# " << active->get_name() << " effective configuration\n" << active->config_to_str(true, false);

  try {
    Output out{out_path, {}};
    if (active == sample) {
      const rm::Scene s = scene_of(c);
      rm::write_scene(out.stream(), s);
      std::fprintf(stderr, "roads=%zu expected=%.6g\n", s.roads.size(), rm::expected_road_count(s.radius, s.v_min, s.beta));
      return 0;
    }
    const rm::Scene s = scene_of(c);
    const double eps = eps_of(c);
    if (active == geo) {
      const auto r = rm::t_eps(s, parse_point(from), parse_point(to), eps);
      if (json)
        rm::write_jsonl(std::cout, rm::to_json(r));
      else
        rm::write_path_record(std::cout, r);
      return 0;
    }
    if (active == sweep) {
      const auto levels = parse_list(eps_list);
      for (const auto& r : rm::eps_sweep(s, parse_point(from), parse_point(to), levels)) rm::write_jsonl(std::cout, rm::to_json(r));
      if (levels.size() >= 2) rm::write_jsonl(std::cout, rm::to_json(rm::no_pause_profile(s, parse_point(from), parse_point(to), levels)));
      return 0;
    }
    if (active == ball) {
      const auto b = rm::ball_raster(s, parse_point(from), eps, parse_list(radii), resolution);
      rm::write_jsonl(std::cout, rm::to_json(b));
      if (!svg_path.empty()) rm::write_svg(svg_path, s, {.paths = {}, .ball = &b, .points = {parse_point(from)}, .title = "ball"});
      return 0;
    }
    if (active == hubs) {
      const auto xs = inner_crossings(s, 0.0, 0.5 * s.radius);
      for (std::size_t k = 0; k < xs.size() && k < count; ++k) rm::write_jsonl(std::cout, rm::to_json(rm::hub_check(s, xs[k].a, xs[k].b, delta)));
      return 0;
    }
    if (active == conf) {
      const rm::Point target = parse_point(to);
      std::vector<rm::Point> src = parse_points(sources);
      if (src.empty())
        for (std::size_t k = 0; k < ring; ++k) {
          const double a = 2.0 * rm::kPi * static_cast<double>(k) / static_cast<double>(ring);
          src.push_back(target + ring_radius * rm::Point{std::cos(a), std::sin(a)});
        }
      rm::write_jsonl(std::cout, rm::to_json(rm::confluence_tree(s, target, src, eps)));
      return 0;
    }
    if (active == cut) {
      const rm::GridSpec grid{parse_point(to), spacing, extent};
      rm::write_jsonl(std::cout, rm::to_json(rm::cut_locus_scan(s, parse_point(from), grid, eps, slack)));
      return 0;
    }
    if (active == stars) {
      std::vector<rm::Point> pts = parse_points(at);
      if (pts.empty()) {
        const auto xs = inner_crossings(s, eps, 0.5 * s.radius);
        for (std::size_t k = 0; k < xs.size() && k < count; ++k) pts.push_back(xs[k].at);
      }
      for (rm::Point p : pts) rm::write_jsonl(std::cout, rm::to_json(rm::star_arms(s, p, eps, delta), p));
      return 0;
    }
    if (active == scaling) {
      const auto r = rm::scaling_exponent(c.beta, parse_list(radii), trials, eps0, c.seed);
      rm::write_jsonl(std::cout, rm::to_json(r));
      if (!csv_path.empty()) {
        std::ofstream f(csv_path);
        if (!f) throw std::runtime_error("cannot open " + csv_path + " for writing");
        rm::write_scaling_csv(f, r);
      }
      return 0;
    }
    if (active == check) {
      if (suite == "poisson") return check_poisson(check_trials ? check_trials : 10000, c.seed);
      return check_scaling(c.beta, check_trials ? check_trials : 300, eps0, c.seed);
    }
    if (active == render) {
      rm::SvgOverlay ov;
      const rm::Point target = parse_point(to);
      for (rm::Point p : parse_points(paths_from)) ov.paths.push_back(rm::geodesic(s, p, target, eps));
      std::optional<rm::BallRaster> b;
      if (draw_ball) {
        b = rm::ball_raster(s, parse_point(from), eps, parse_list(radii), resolution);
        ov.ball = &*b;
      }
      if (!ov.paths.empty()) ov.points.push_back(target);
      rm::write_svg(out_path, s, ov);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
