#pragma once

// JSON-lines records for every report type (one object per line, each with a
// `kind` field) and CSV export of time samples. Field names are listed in
// the README.

#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "roadmetric/analysis.hpp"
#include "roadmetric/solver.hpp"

namespace roadmetric {

using Json = nlohmann::ordered_json;

namespace detail {

/// JSON has no infinity or NaN; those become null.
inline Json num(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

inline Json point(Point p) { return Json::array({num(p.x), num(p.y)}); }

}  // namespace detail

inline Json to_json(const PathSegment& s) {
  Json j;
  j["mode"] = s.mode == SegmentMode::Road ? "road" : "straight";
  j["road"] = s.mode == SegmentMode::Road ? Json(s.road) : Json(nullptr);
  j["from"] = detail::point(s.from);
  j["to"] = detail::point(s.to);
  j["speed"] = detail::num(s.speed);
  j["time"] = detail::num(s.time);
  return j;
}

inline Json to_json(const GeodesicPath& p) {
  Json segs = Json::array();
  for (const PathSegment& s : p.segments) segs.push_back(to_json(s));
  Json j;
  j["total_time"] = detail::num(p.total_time);
  j["segments"] = segs;
  return j;
}

inline Json to_json(const BracketResult& r) {
  Json j;
  j["kind"] = "path";
  j["eps"] = detail::num(r.eps);
  j["t_eps"] = detail::num(r.t_eps);
  j["kendall_ub"] = detail::num(r.kendall_ub);
  j["double_refraction_margin"] = detail::num(r.certificate.double_refraction_margin);
  j["containment_ok"] = r.certificate.containment_ok;
  j["containment_radius"] = detail::num(r.certificate.containment_radius);
  j["path"] = to_json(r.path);
  return j;
}

inline Json to_json(const PauseProfile& p) {
  Json j;
  j["kind"] = "pause";
  j["interior_min_speed"] = detail::num(p.interior_min_speed);
  j["stabilized"] = p.stabilized;
  j["core_stabilized"] = p.core_stabilized;
  j["times"] = Json::array();
  for (double t : p.times) j["times"].push_back(detail::num(t));
  j["interiors"] = p.interiors;
  Json decay = Json::array();
  for (const auto& [t, v] : p.endpoint_speed_decay) decay.push_back(Json::array({detail::num(t), detail::num(v)}));
  j["endpoint_speed_decay"] = decay;
  return j;
}

inline Json to_json(const HubReport& h) {
  Json j;
  j["kind"] = "hub";
  j["road_i"] = h.road_i;
  j["road_j"] = h.road_j;
  j["intersection"] = detail::point(h.intersection);
  j["v_i"] = detail::num(h.v_i);
  j["v_j"] = detail::num(h.v_j);
  j["inf_phi"] = detail::num(h.inf_phi);
  j["eps_used"] = detail::num(h.eps_used);
  j["delta_used"] = detail::num(h.delta_used);
  j["applicable"] = h.applicable;
  j["all_geodesic"] = h.all_geodesic;
  j["max_abs_error"] = detail::num(h.max_abs_error);
  j["assembly_gap"] = detail::num(h.assembly_gap);
  Json arms = Json::array();
  for (const auto& row : h.arm_times) {
    Json r = Json::array();
    for (double t : row) r.push_back(detail::num(t));
    arms.push_back(r);
  }
  j["arm_times"] = arms;
  return j;
}

inline Json to_json(const ConfluenceTree& t) {
  Json j;
  j["kind"] = "confluence";
  j["target"] = detail::point(t.target);
  j["leaves"] = Json::array();
  for (Point p : t.leaves) j["leaves"].push_back(detail::point(p));
  j["suffix_consistent"] = t.suffix_consistent;
  j["acyclic"] = t.acyclic;
  Json co = Json::array();
  for (const CoalescenceNode& c : t.coalescence) co.push_back({{"at", detail::point(c.at)}, {"leaves", c.leaves}});
  j["coalescence"] = co;
  j["times"] = Json::array();
  for (const GeodesicPath& p : t.paths) j["times"].push_back(detail::num(p.total_time));
  return j;
}

inline Json to_json(const CutLocusSample& c) {
  Json j;
  j["kind"] = "cutlocus";
  j["origin"] = detail::point(c.origin);
  j["scanned"] = c.scanned;
  j["hits"] = c.hits.size();
  j["multiplicity3"] = c.multiplicity3;
  Json hits = Json::array();
  for (const CutLocusHit& h : c.hits)
    hits.push_back({{"at", detail::point(h.at)}, {"multiplicity", h.multiplicity}, {"time_gap", detail::num(h.time_gap)}});
  j["points"] = hits;
  return j;
}

inline Json to_json(const StarReport& s, Point p) {
  Json j;
  j["kind"] = "stars";
  j["at"] = detail::point(p);
  j["arms"] = s.arms;
  j["probes"] = s.probes;
  return j;
}

inline Json to_json(const ScalingReport& r) {
  Json j;
  j["kind"] = "scaling";
  j["beta"] = r.beta;
  j["radii"] = r.radii;
  j["medians"] = r.medians;
  j["slope"] = detail::num(r.slope);
  j["expected_slope"] = detail::num(r.expected_slope);
  j["implied_dimension"] = detail::num(r.implied_dimension);
  j["ks_statistic"] = detail::num(r.ks_statistic);
  j["ks_critical_1pct"] = detail::num(r.ks_critical_1pct);
  j["contained_fraction"] = r.contained_fraction;
  return j;
}

inline Json to_json(const PoissonCheck& c, double R, double v0, double beta) {
  Json j;
  j["kind"] = "poisson";
  j["R"] = R;
  j["v0"] = v0;
  j["beta"] = beta;
  j["expected"] = c.expected;
  j["mean"] = c.mean;
  j["variance"] = c.variance;
  j["mean_z"] = c.mean_z;
  j["variance_z"] = c.variance_z;
  j["pass"] = c.pass;
  return j;
}

inline Json to_json(const BallRaster& b) {
  Json j;
  j["kind"] = "ball";
  j["center"] = detail::point(b.center);
  j["eps"] = b.eps;
  j["resolution"] = b.resolution;
  j["radii"] = b.radii;
  Json counts = Json::array();
  for (std::size_t k = 0; k < b.radii.size(); ++k) {
    std::size_t n = 0;
    for (double v : b.values) n += v <= b.radii[k] ? 1 : 0;
    counts.push_back(n);
  }
  j["cells_within"] = counts;
  j["cell_area"] = b.step * b.step;
  return j;
}

inline void write_jsonl(std::ostream& os, const Json& j) { os << j.dump() << '\n'; }

/// `radius,trial,time` rows of the raw scaling samples.
inline void write_scaling_csv(std::ostream& os, const ScalingReport& r) {
  os << "radius,trial,time\n";
  char buf[96];
  for (std::size_t i = 0; i < r.radii.size(); ++i)
    for (std::size_t k = 0; k < r.samples[i].size(); ++k) {
      std::snprintf(buf, sizeof buf, "%.17g,%zu,%.17g\n", r.radii[i], k, r.samples[i][k]);
      os << buf;
    }
}

}  // namespace roadmetric
