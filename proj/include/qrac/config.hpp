#pragma once

namespace qrac {

/// Numerical tolerances shared by every module. One value is threaded through
/// constructors and solvers so a run is reproducible from a single knob.
struct ToleranceConfig {
  double hermiticity = 1e-10;   // max |A_ij - conj(A_ji)|
  double psd = 1e-9;            // min eigenvalue floor for effects and states
  double completeness = 1e-10;  // per-entry deviation of sum of effects from I
  double unit_norm = 1e-12;     // |<psi|psi> - 1|
  double unitary = 1e-10;       // per-entry deviation of U^dagger U from I
  double trace = 1e-10;         // |Tr(rho) - 1|
  double normalization = 1e-10; // probability rows
  double stochastic = 1e-12;    // post-processing rows
  double jacobi_off_diagonal = 1e-13;
  double decision = 1e-9;       // witness margin threshold
  double feasibility = 1e-7;    // parent POVM residual for COMPATIBLE
};

inline const ToleranceConfig& default_tolerances() {
  static const ToleranceConfig cfg{};
  return cfg;
}

}  // namespace qrac
