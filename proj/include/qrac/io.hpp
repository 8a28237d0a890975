#pragma once

// JSON and CSV serialization. Requires nlohmann/json (vendored as json.hpp).

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "qrac/bounds.hpp"
#include "qrac/classical_search.hpp"
#include "qrac/compatibility.hpp"
#include "qrac/error.hpp"
#include "qrac/matrix.hpp"
#include "qrac/operators.hpp"
#include "qrac/qubit_triple.hpp"
#include "qrac/rational.hpp"
#include "qrac/seesaw.hpp"
#include "qrac/witness.hpp"

namespace qrac::io {

using json = nlohmann::ordered_json;

inline json to_json(const Rational& r) {
  json j;
  const auto num = boost::multiprecision::numerator(r);
  const auto den = boost::multiprecision::denominator(r);
  // Exact integers stay integers when they fit; larger ones become strings.
  if (boost::multiprecision::abs(num) <= BigInt(std::numeric_limits<std::int64_t>::max()) &&
      den <= BigInt(std::numeric_limits<std::int64_t>::max())) {
    j["num"] = num.convert_to<std::int64_t>();
    j["den"] = den.convert_to<std::int64_t>();
  } else {
    j["num"] = num.str();
    j["den"] = den.str();
  }
  j["float"] = to_double(r);
  return j;
}

inline json to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.dim(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.dim(); ++j) row.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline json to_json(const MeasurementSet& ms) {
  json j;
  j["dim"] = ms.dim();
  json list = json::array();
  for (const auto& povm : ms.povms()) {
    json effects = json::array();
    for (const auto& e : povm.effects()) effects.push_back(to_json(e.matrix()));
    list.push_back(json{{"effects", std::move(effects)}});
  }
  j["measurements"] = std::move(list);
  return j;
}

inline Matrix matrix_from_json(const json& j, std::size_t dim) {
  if (!j.is_array() || j.size() != dim) throw Error(ErrorKind::kParse, "matrix must have dim rows");
  Matrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    const auto& row = j[i];
    if (!row.is_array() || row.size() != dim) throw Error(ErrorKind::kParse, "matrix row must have dim entries");
    for (std::size_t k = 0; k < dim; ++k) {
      const auto& e = row[k];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
        throw Error(ErrorKind::kParse, "matrix entry must be [re, im]");
      m(i, k) = cplx{e[0].get<double>(), e[1].get<double>()};
    }
  }
  return m;
}

/// Parses {"dim": d, "measurements": [{"effects": [matrix, ...]}, ...]} and
/// validates every POVM.
inline MeasurementSet measurements_from_json(const json& j, const ToleranceConfig& tol = default_tolerances()) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("measurements"))
    throw Error(ErrorKind::kParse, "expected keys \"dim\" and \"measurements\"");
  if (!j["dim"].is_number_integer() || j["dim"].get<long long>() < 1)
    throw Error(ErrorKind::kParse, "\"dim\" must be a positive integer");
  const auto dim = j["dim"].get<std::size_t>();
  const auto& list = j["measurements"];
  if (!list.is_array() || list.empty()) throw Error(ErrorKind::kParse, "\"measurements\" must be a non-empty array");
  std::vector<std::vector<Matrix>> effects;
  for (const auto& m : list) {
    if (!m.is_object() || !m.contains("effects") || !m["effects"].is_array() || m["effects"].empty())
      throw Error(ErrorKind::kParse, "each measurement needs a non-empty \"effects\" array");
    auto& row = effects.emplace_back();
    for (const auto& e : m["effects"]) row.push_back(matrix_from_json(e, dim));
  }
  return MeasurementSet::from_matrices(effects, tol);
}

inline MeasurementSet read_measurements(const std::string& path, const ToleranceConfig& tol = default_tolerances()) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kParse, "cannot open " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::kParse, std::string("invalid JSON: ") + e.what());
  }
  return measurements_from_json(j, tol);
}

inline json to_json(const Scenario& sc) {
  return json{{"n", sc.n()}, {"outcomes", sc.outcome_profile()}, {"dim", sc.dim()}};
}

inline json to_json(const WitnessReport& r) {
  json j;
  j["scenario"] = to_json(r.scenario);
  j["S_quantum"] = r.s_quantum;
  j["S_classical"] = to_json(r.s_classical.value);
  j["S_upper"] = r.s_upper;
  j["margin"] = r.margin;
  j["verdict"] = to_string(r.verdict);
  j["provenance"] = json{{"quantum_method", r.quantum_method},
                         {"classical_method", to_string(r.s_classical.method)},
                         {"upper_method", "PAIRWISE_OVERLAP_BOUND"},
                         {"decision_tolerance", r.decision_tolerance}};
  return j;
}

/// Recomputes the verdict of a serialized report from its own fields.
inline std::string verdict_from_json(const json& report) {
  const double margin = report.at("S_quantum").get<double>() - report.at("S_classical").at("float").get<double>();
  return std::string(to_string(decide(margin, report.at("provenance").at("decision_tolerance").get<double>())));
}

inline json to_json(const CompatibilityVerdict& v, bool with_certificate = true) {
  json j;
  j["status"] = to_string(v.status);
  j["residual"] = v.residual;
  j["iterations"] = v.iterations;
  j["iteration_cap_reached"] = v.iteration_cap_reached;
  if (v.certificate && with_certificate) {
    json effects = json::array();
    for (const auto& g : v.certificate->effects()) effects.push_back(to_json(g));
    j["certificate"] = json{{"outcomes", v.certificate->outcome_profile()}, {"effects", std::move(effects)}};
  }
  if (v.witness)
    j["witness"] = json{{"S_quantum", v.witness->s_quantum},
                        {"S_classical", v.witness->s_classical},
                        {"margin", v.witness->margin},
                        {"classical_method", v.witness->method}};
  return j;
}

inline json to_json(const SeesawResult& r, Objective objective, Constraint constraint) {
  json j;
  j["label"] = SeesawResult::kLabel;
  j["objective"] = to_string(objective);
  j["constraint"] = to_string(constraint);
  j["best_value"] = r.best_value;
  j["best_seed"] = r.best_seed;
  json log = json::array();
  for (const auto& rec : r.restarts)
    log.push_back(json{{"seed", rec.seed}, {"value", rec.value}, {"rounds", rec.rounds}, {"converged", rec.converged}});
  j["restarts"] = std::move(log);
  j["measurements"] = to_json(r.measurements);
  json states = json::array();
  for (const auto& rho : r.ensemble.states()) states.push_back(to_json(rho));
  j["states"] = std::move(states);
  if (r.parent) {
    json effects = json::array();
    for (const auto& g : r.parent->effects()) effects.push_back(to_json(g));
    j["parent"] = std::move(effects);
  }
  return j;
}

inline constexpr const char* kScanHeader = "alpha,beta,gamma,sign,xi1,xi2,xi3,xi4,S,classification";

inline std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

inline void write_scan_csv(std::ostream& out, const std::vector<TripleRecord>& records) {
  out << kScanHeader << '\n';
  for (const auto& r : records) {
    out << format_number(r.params.alpha) << ',' << format_number(r.params.beta) << ','
        << format_number(r.params.gamma) << ',' << r.params.sign;
    for (double x : r.xi.xi) out << ',' << format_number(x);
    out << ',' << format_number(r.value) << ',' << to_string(r.classification) << '\n';
  }
}

}  // namespace qrac::io
