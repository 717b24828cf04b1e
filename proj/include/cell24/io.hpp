#pragma once

// JSON and CSV forms of codes, spectra and reports.

#include "cell24/designs.hpp"
#include "cell24/dynamics.hpp"
#include "cell24/geometry.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace cell24 {

using Json = nlohmann::ordered_json;

/// Shortest text that reads back as the same double.
inline std::string format_double(double x) {
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << x;
  return os.str();
}

inline Json to_json(const Code& code) {
  Json pts = Json::array();
  for (const auto& p : code)
    pts.push_back({p[0], p[1], p[2], p[3]});
  return {{"label", code.label()}, {"points", pts}};
}

inline Code code_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("points") || !j["points"].is_array())
    throw std::invalid_argument("code JSON needs a \"points\" array");
  std::vector<Vec4> pts;
  for (const auto& p : j["points"]) {
    if (!p.is_array() || p.size() != 4)
      throw std::invalid_argument("code JSON: each point needs 4 coordinates");
    pts.emplace_back(p[0].get<double>(), p[1].get<double>(), p[2].get<double>(), p[3].get<double>());
  }
  if (pts.empty())
    throw std::invalid_argument("code JSON: no points");
  return Code(std::move(pts), j.value("label", std::string{}));
}

inline Code read_code(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw std::invalid_argument("cannot open " + path);
  return code_from_json(Json::parse(in));
}

/// value,multiplicity rows.
inline std::string to_csv(const GramSpectrum& s) {
  std::ostringstream os;
  os << "value,multiplicity\n";
  for (const auto& e : s.entries)
    os << format_double(e.value) << ',' << e.multiplicity << '\n';
  return os.str();
}

inline Json to_json(const GramSpectrum& s) {
  Json entries = Json::array();
  for (const auto& e : s.entries)
    entries.push_back({{"value", e.value}, {"multiplicity", e.multiplicity}});
  return {{"entries", entries}, {"cluster_tol", s.cluster_tol}, {"ambiguous", s.ambiguous}};
}

inline Json to_json(const DesignReport& r) {
  Json defects = Json::array();
  for (const auto& d : r.defects)
    defects.push_back({{"k", d.k}, {"defect", d.defect}});
  return {{"defects", defects}, {"strength", r.strength}, {"tol", r.tol}};
}

/// One eigenvalue per line.
inline std::string to_csv(const HessianSpectrum& s) {
  std::ostringstream os;
  os << "eigenvalue\n";
  for (double v : s.eigenvalues)
    os << format_double(v) << '\n';
  return os.str();
}

inline Json to_json(const HessianSpectrum& s) {
  Json clusters = Json::array();
  for (const auto& c : s.clusters())
    clusters.push_back({{"value", c.value}, {"multiplicity", c.multiplicity}});
  return {{"eigenvalues", s.eigenvalues},  {"clusters", clusters},
          {"spectral_radius", s.spectral_radius}, {"zero_tol", s.zero_tol},
          {"negative_count", s.negative_count}, {"zero_count", s.zero_count},
          {"positive_count", s.positive_count}};
}

inline Json to_json(const DescentResult& r) {
  Json j = {{"label", r.label},
            {"energy", r.energy},
            {"iterations", r.iterations},
            {"gradient_norm", r.gradient_norm},
            {"converged", r.converged},
            {"stalled", r.stalled},
            {"code", to_json(r.code)}};
  if (!r.energies.empty())
    j["energies"] = r.energies;
  return j;
}

inline Json to_json(const BasinStats& s) {
  Json counts = Json::object(), fractions = Json::object(), refs = Json::array();
  for (const auto& [label, n] : s.counts) {
    counts[label] = n;
    fractions[label] = s.fraction(label);
  }
  for (const auto& r : s.references)
    refs.push_back({{"label", r.label}, {"t_max", t_max(r.code)}});
  Json hist = Json::array();
  for (const auto& [e, n] : s.energy_histogram)
    hist.push_back({{"energy", e}, {"count", n}});
  Json runs = Json::array();
  for (const auto& r : s.runs)
    runs.push_back({{"seed", r.seed},
                    {"label", r.label},
                    {"energy", r.energy},
                    {"iterations", r.iterations},
                    {"gradient_norm", r.gradient_norm},
                    {"converged", r.converged}});
  return {{"seed", s.seed},     {"trials", s.trials},         {"references", refs},
          {"counts", counts},   {"fractions", fractions},     {"energy_histogram", hist},
          {"runs", runs}};
}

inline Json to_json(const HexIndices& h) { return Json(std::vector<int>(h.begin(), h.end())); }

inline Json to_json(const HexPartition& p) {
  Json j = Json::array();
  for (const auto& h : p.hexagons)
    j.push_back(to_json(h));
  return j;
}

inline Json to_json(const HexagonClaimReport& r) {
  Json hex = Json::array(), parts = Json::array(), pairs = Json::array();
  for (const auto& h : r.hexagons)
    hex.push_back(to_json(h));
  for (const auto& p : r.partitions)
    parts.push_back(to_json(p));
  for (const auto& w : r.pairs)
    pairs.push_back({{"first", to_json(w.first)}, {"second", to_json(w.second)}, {"partition", w.partition}});
  return {{"holds", r.holds}, {"hexagon_count", r.hexagons.size()}, {"hexagons", hex},
          {"partitions", parts}, {"disjoint_pairs", pairs}};
}

} // namespace cell24
