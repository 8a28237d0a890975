#pragma once

#include <string>
#include <string_view>

#include "qrac/bounds.hpp"
#include "qrac/classical_search.hpp"
#include "qrac/compatibility.hpp"
#include "qrac/config.hpp"
#include "qrac/error.hpp"
#include "qrac/operators.hpp"
#include "qrac/quantum.hpp"
#include "qrac/rational.hpp"
#include "qrac/scenario.hpp"

namespace qrac {

enum class ClassicalMethod { kExactFormula, kBruteForce };

inline std::string_view to_string(ClassicalMethod m) {
  return m == ClassicalMethod::kExactFormula ? "EXACT_FORMULA" : "BRUTE_FORCE";
}

enum class WitnessVerdict { kIncompatible, kNoWitness };

inline std::string_view to_string(WitnessVerdict v) {
  return v == WitnessVerdict::kIncompatible ? "INCOMPATIBLE" : "NO_WITNESS";
}

struct ClassicalBound {
  Rational value;
  ClassicalMethod method = ClassicalMethod::kExactFormula;
};

/// S_c by the counting formula when it applies, otherwise by exhaustive search.
inline ClassicalBound classical_bound(const Scenario& sc) {
  if (sc.dim() <= sc.min_outcomes()) return {exact_sc(sc), ClassicalMethod::kExactFormula};
  try {
    return {brute_force_sc(sc).value, ClassicalMethod::kBruteForce};
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kTooLarge) throw;
    throw Error(ErrorKind::kBoundUnavailable,
                "no exact formula (dim > min d_y) and exhaustive search is too large");
  }
}

struct WitnessReport {
  Scenario scenario;
  double s_quantum = 0.0;
  ClassicalBound s_classical;
  double s_upper = 0.0;
  double margin = 0.0;
  WitnessVerdict verdict = WitnessVerdict::kNoWitness;
  double decision_tolerance = 1e-9;
  std::string quantum_method = "TOP_EIGENVALUE";
};

inline WitnessVerdict decide(double margin, double decision_tolerance) {
  return margin > decision_tolerance ? WitnessVerdict::kIncompatible : WitnessVerdict::kNoWitness;
}

/// Compares the quantum value of ms against the classical bound; a positive
/// margin certifies that the measurements are incompatible.
inline WitnessReport assemble_witness_report(const MeasurementSet& ms, const Scenario& sc,
                                             const ToleranceConfig& tol = default_tolerances()) {
  require_matching(ms, sc);
  const double sq = quantum_value(ms, sc).value;
  ClassicalBound sc_bound = classical_bound(sc);
  const double margin = sq - to_double(sc_bound.value);
  return WitnessReport{sc, sq, std::move(sc_bound), upper_bound_sc(sc), margin,
                       decide(margin, tol.decision), tol.decision, "TOP_EIGENVALUE"};
}

/// Promotes a solver verdict to INCOMPATIBLE when the witness fires.
inline CompatibilityVerdict upgrade_verdict(CompatibilityVerdict v, const WitnessReport& r) {
  if (r.verdict != WitnessVerdict::kIncompatible) return v;
  if (v.status == CompatibilityStatus::kCompatible)
    throw Error(ErrorKind::kInvalidArgument, "witness contradicts a compatibility certificate");
  v.status = CompatibilityStatus::kIncompatible;
  v.witness = WitnessReference{r.s_quantum, to_double(r.s_classical.value), r.margin,
                               std::string(to_string(r.s_classical.method))};
  return v;
}

}  // namespace qrac
