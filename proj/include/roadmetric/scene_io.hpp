#pragma once

// Text serialisation of scenes:
//
//   roadmetric-scene v1 beta=<b> R=<R> cx=<x> cy=<y> vmin=<v> seed=<n>
//   <id> <theta> <w> <v>
//   ...
//
// Floats are written with 17 significant digits, which round-trips every
// double exactly.

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "roadmetric/sampler.hpp"

namespace roadmetric {

inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline double parse_double(std::string_view s) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw std::runtime_error("scene: bad number '" + std::string(s) + "'");
  return out;
}

inline void write_scene(std::ostream& os, const Scene& s) {
  os << "roadmetric-scene v1 beta=" << format_double(s.beta) << " R=" << format_double(s.radius)
     << " cx=" << format_double(s.center.x) << " cy=" << format_double(s.center.y)
     << " vmin=" << format_double(s.v_min) << " seed=" << s.seed << '\n';
  for (const Road& r : s.roads)
    os << r.id << ' ' << format_double(r.line.theta) << ' ' << format_double(r.line.w) << ' '
       << format_double(r.v) << '\n';
}

inline std::string scene_to_string(const Scene& s) {
  std::ostringstream os;
  write_scene(os, s);
  return os.str();
}

inline Scene read_scene(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("scene: empty input");
  std::istringstream header(line);
  std::string magic, version;
  header >> magic >> version;
  if (magic != "roadmetric-scene" || version != "v1") throw std::runtime_error("scene: bad header");
  std::map<std::string, std::string> fields;
  for (std::string kv; header >> kv;) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw std::runtime_error("scene: bad header field '" + kv + "'");
    fields[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  for (const char* key : {"beta", "R", "cx", "cy", "vmin", "seed"})
    if (!fields.count(key)) throw std::runtime_error(std::string("scene: missing header field ") + key);

  Scene s;
  s.beta = parse_double(fields["beta"]);
  s.radius = parse_double(fields["R"]);
  s.center = {parse_double(fields["cx"]), parse_double(fields["cy"])};
  s.v_min = parse_double(fields["vmin"]);
  s.seed = std::stoull(fields["seed"]);

  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream rec(line);
    std::string id, theta, w, v;
    if (!(rec >> id >> theta >> w >> v)) throw std::runtime_error("scene: bad road record '" + line + "'");
    Road r;
    r.id = std::stoll(id);
    // Assign directly: the stored chart values are already canonical.
    r.line.theta = parse_double(theta);
    r.line.w = parse_double(w);
    r.v = parse_double(v);
    if (!(r.line.theta >= 0.0 && r.line.theta < kPi)) throw std::runtime_error("scene: theta outside [0, pi)");
    s.roads.push_back(r);
  }
  s.normalize();
  return s;
}

inline Scene scene_from_string(const std::string& text) {
  std::istringstream is(text);
  return read_scene(is);
}

inline void save_scene(const std::string& path, const Scene& s) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_scene(os, s);
  if (!os) throw std::runtime_error("write to '" + path + "' failed");
}

inline Scene load_scene(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open '" + path + "'");
  return read_scene(is);
}

}  // namespace roadmetric
