#pragma once

// SVG 1.1 figures of a scene window: roads, geodesics, ball rasters and
// point sets. Output bytes depend only on the inputs.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "roadmetric/analysis.hpp"
#include "roadmetric/sampler.hpp"
#include "roadmetric/solver.hpp"

namespace roadmetric {

struct SvgOverlay {
  std::vector<GeodesicPath> paths;
  const BallRaster* ball = nullptr;
  std::vector<Point> points;
  std::string title;
};

struct SvgStyle {
  int size = 800;  // pixels per side
  double road_width_min = 0.4;
  double road_width_max = 2.4;
  double path_width = 2.5;
  double point_radius = 3.0;
};

namespace detail {

inline std::string fmt4(double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.4f", x);
  return buf;
}

inline std::string hex_color(double r, double g, double b) {
  auto c = [](double x) { return static_cast<int>(std::lround(255.0 * std::clamp(x, 0.0, 1.0))); };
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c(r), c(g), c(b));
  return buf;
}

/// Blue at t = 0 to red at t = 1.
inline std::string blue_red(double t) { return hex_color(t, 0.15, 1.0 - t); }

/// Part of a line inside the axis-aligned box [lo, hi], if any.
inline std::optional<Segment> clip_line(const Line& l, Point lo, Point hi) {
  const Point o = l.at(0.0), d = l.dir();
  double t0 = -kInf, t1 = kInf;
  const double org[2] = {o.x, o.y}, dir[2] = {d.x, d.y}, lb[2] = {lo.x, lo.y}, ub[2] = {hi.x, hi.y};
  for (int k = 0; k < 2; ++k) {
    if (std::fabs(dir[k]) < 1e-15) {
      if (org[k] < lb[k] || org[k] > ub[k]) return std::nullopt;
      continue;
    }
    double a = (lb[k] - org[k]) / dir[k], b = (ub[k] - org[k]) / dir[k];
    if (a > b) std::swap(a, b);
    t0 = std::max(t0, a);
    t1 = std::min(t1, b);
  }
  if (!(t0 < t1)) return std::nullopt;
  return Segment{o + t0 * d, o + t1 * d};
}

}  // namespace detail

/// Renders the window [cx-R, cx+R]^2 of the scene. Road stroke width and
/// darkness grow with log speed over the sampled range; ball cells are
/// filled by the index of the smallest radius containing them.
inline std::string render_svg(const Scene& s, const SvgOverlay& ov = {}, const SvgStyle& st = {}) {
  const double R = s.radius;
  const Point lo{s.center.x - R, s.center.y - R}, hi{s.center.x + R, s.center.y + R};
  const double scale = st.size / (2.0 * R);
  auto px = [&](Point p) { return Point{(p.x - lo.x) * scale, (hi.y - p.y) * scale}; };
  using detail::fmt4;

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << st.size << "\" height=\"" << st.size
     << "\" viewBox=\"0 0 " << st.size << ' ' << st.size << "\">\n";
  if (!ov.title.empty()) {
    std::string t;
    for (char c : ov.title) {
      if (c == '<') t += "&lt;";
      else if (c == '>') t += "&gt;";
      else if (c == '&') t += "&amp;";
      else t += c;
    }
    os << "<title>" << t << "</title>\n";
  }
  os << "<rect x=\"0\" y=\"0\" width=\"" << st.size << "\" height=\"" << st.size << "\" fill=\"#ffffff\"/>\n";

  if (ov.ball) {
    const BallRaster& b = *ov.ball;
    const std::size_t levels = b.radii.size();
    os << "<g id=\"ball\" stroke=\"none\">\n";
    const double cell = b.step * scale;
    for (int iy = 0; iy < b.resolution; ++iy) {
      int ix = 0;
      while (ix < b.resolution) {
        const std::size_t lv = b.level(ix, iy);
        int end = ix + 1;
        while (end < b.resolution && b.level(end, iy) == lv) ++end;
        if (lv < levels) {
          const double t = levels > 1 ? static_cast<double>(lv) / static_cast<double>(levels - 1) : 0.0;
          const Point corner = px(b.cell(ix, iy) + Point{-0.5 * b.step, 0.5 * b.step});
          os << "<rect x=\"" << fmt4(corner.x) << "\" y=\"" << fmt4(corner.y) << "\" width=\"" << fmt4(cell * (end - ix))
             << "\" height=\"" << fmt4(cell) << "\" fill=\"" << detail::blue_red(t) << "\"/>\n";
        }
        ix = end;
      }
    }
    os << "</g>\n";
  }

  if (!s.roads.empty()) {
    double vlo = kInf, vhi = 0.0;
    for (const Road& r : s.roads) {
      vlo = std::min(vlo, r.v);
      vhi = std::max(vhi, r.v);
    }
    const double span = vhi > vlo ? std::log(vhi / vlo) : 1.0;
    os << "<g id=\"roads\" stroke-linecap=\"butt\">\n";
    // Slow roads first so fast ones are drawn on top.
    std::vector<const Road*> order;
    for (const Road& r : s.roads) order.push_back(&r);
    std::sort(order.begin(), order.end(), [](const Road* a, const Road* b) { return a->v < b->v || (a->v == b->v && a->id < b->id); });
    for (const Road* r : order) {
      const auto seg = detail::clip_line(r->line, lo, hi);
      if (!seg) continue;
      const double t = vhi > vlo ? std::log(r->v / vlo) / span : 1.0;
      const double w = st.road_width_min + (st.road_width_max - st.road_width_min) * t;
      const double g = 0.75 * (1.0 - t);
      const Point a = px(seg->a), c = px(seg->b);
      os << "<line x1=\"" << fmt4(a.x) << "\" y1=\"" << fmt4(a.y) << "\" x2=\"" << fmt4(c.x) << "\" y2=\"" << fmt4(c.y)
         << "\" stroke=\"" << detail::hex_color(g, g, g) << "\" stroke-width=\"" << fmt4(w) << "\"/>\n";
    }
    os << "</g>\n";
  }

  if (!ov.paths.empty()) {
    os << "<g id=\"paths\" fill=\"none\" stroke=\"#000000\" stroke-width=\"" << fmt4(st.path_width)
       << "\" stroke-linejoin=\"round\">\n";
    for (const GeodesicPath& p : ov.paths) {
      const auto poly = p.polyline();
      if (poly.size() < 2) continue;
      os << "<polyline points=\"";
      for (std::size_t i = 0; i < poly.size(); ++i) {
        const Point q = px(poly[i]);
        os << (i ? " " : "") << fmt4(q.x) << ',' << fmt4(q.y);
      }
      os << "\"/>\n";
    }
    os << "</g>\n";
  }

  if (!ov.points.empty()) {
    os << "<g id=\"points\" fill=\"#d62728\" stroke=\"none\">\n";
    for (Point p : ov.points) {
      const Point q = px(p);
      os << "<circle cx=\"" << fmt4(q.x) << "\" cy=\"" << fmt4(q.y) << "\" r=\"" << fmt4(st.point_radius) << "\"/>\n";
    }
    os << "</g>\n";
  }
  os << "</svg>\n";
  return os.str();
}

inline void write_svg(const std::string& path, const Scene& s, const SvgOverlay& ov = {}, const SvgStyle& st = {}) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << render_svg(s, ov, st);
  if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace roadmetric
