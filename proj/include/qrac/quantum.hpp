#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "qrac/config.hpp"
#include "qrac/eigen.hpp"
#include "qrac/error.hpp"
#include "qrac/matrix.hpp"
#include "qrac/operators.hpp"
#include "qrac/scenario.hpp"

namespace qrac {

/// One density matrix per input string.
class StateEnsemble {
 public:
  StateEnsemble() = default;
  explicit StateEnsemble(std::vector<Matrix> states, const ToleranceConfig& tol = default_tolerances())
      : states_(std::move(states)) {
    require(!states_.empty(), ErrorKind::kShapeMismatch, "ensemble is empty");
    const std::size_t d = states_.front().dim();
    for (auto& rho : states_) {
      require(rho.dim() == d, ErrorKind::kShapeMismatch, "states differ in dimension");
      const double dev = rho.hermiticity_deviation();
      if (dev > tol.hermiticity) throw Error(ErrorKind::kNonHermitian, "state deviation " + std::to_string(dev));
      rho = rho.hermitian_part();
      const double tr = rho.trace().real();
      require(std::abs(tr - 1.0) <= tol.trace, ErrorKind::kRangeViolation,
              "state trace " + std::to_string(tr));
      const double lo = min_eigenvalue(rho);
      if (lo < -tol.psd) throw Error(ErrorKind::kNotPositive, "state eigenvalue " + std::to_string(lo));
    }
  }

  std::size_t dim() const noexcept { return states_.front().dim(); }
  std::size_t size() const noexcept { return states_.size(); }
  const Matrix& operator[](std::size_t x) const { return states_.at(x); }
  const std::vector<Matrix>& states() const noexcept { return states_; }

 private:
  std::vector<Matrix> states_;
};

inline void require_matching(const MeasurementSet& ms, const Scenario& sc) {
  require(ms.outcome_profile() == sc.outcome_profile(), ErrorKind::kShapeMismatch,
          "measurement outcome profile does not match the scenario");
  require(ms.dim() == static_cast<std::size_t>(sc.dim()), ErrorKind::kShapeMismatch,
          "measurement dimension does not match the scenario");
}

/// chi(x) = sum_y M_{x_y | y}
inline HermitianOperator chi(const MeasurementSet& ms, std::span<const int> x) {
  require(x.size() == ms.size(), ErrorKind::kRangeViolation, "input string length != n");
  Matrix sum(ms.dim());
  for (std::size_t y = 0; y < x.size(); ++y) {
    require(x[y] >= 0 && static_cast<std::size_t>(x[y]) < ms[y].outcomes(), ErrorKind::kRangeViolation,
            "input dit out of range");
    sum += ms.effect(y, static_cast<std::size_t>(x[y]));
  }
  return HermitianOperator(sum);
}

struct QuantumValue {
  double value = 0.0;
  StateEnsemble ensemble;      // rank-one optimal states
  std::vector<double> norms;   // ||chi(x)|| per input string
};

/// Optimal average success for fixed measurements: the sender prepares the
/// top eigenvector of chi(x) for every x.
inline QuantumValue quantum_value(const MeasurementSet& ms, const Scenario& sc) {
  require_matching(ms, sc);
  QuantumValue out;
  std::vector<Matrix> states;
  states.reserve(static_cast<std::size_t>(sc.num_inputs()));
  double total = 0.0;
  for (std::int64_t x = 0; x < sc.num_inputs(); ++x) {
    const auto digits = sc.digits(x);
    const auto top = top_eigenpair(chi(ms, digits));
    out.norms.push_back(top.value);
    total += top.value;
    states.push_back(top.vector.projector());
  }
  out.value = total / (static_cast<double>(sc.n()) * static_cast<double>(sc.num_inputs()));
  out.ensemble = StateEnsemble(std::move(states));
  return out;
}

/// p(b | x, y) = Tr(rho_x M_{b|y})
inline ProbabilityTable probability_table(const StateEnsemble& e, const MeasurementSet& ms,
                                          const Scenario& sc) {
  require_matching(ms, sc);
  require(e.size() == static_cast<std::size_t>(sc.num_inputs()) && e.dim() == ms.dim(),
          ErrorKind::kShapeMismatch, "ensemble does not match the scenario");
  ProbabilityTable t(sc);
  for (std::int64_t x = 0; x < sc.num_inputs(); ++x)
    for (int y = 0; y < sc.n(); ++y)
      for (int b = 0; b < sc.outcomes(y); ++b)
        t.at(x, y, b) = trace_product_real(e[static_cast<std::size_t>(x)],
                                           ms.effect(static_cast<std::size_t>(y), static_cast<std::size_t>(b)));
  return t;
}

/// sigma_z, sigma_x, sigma_y bases (outcome 0 is the +1 eigenvector).
inline MeasurementSet pauli_triple() {
  return MeasurementSet::from_matrices({
      {pauli::bloch_projector(0, 0, 1), pauli::bloch_projector(0, 0, 1, -1)},
      {pauli::bloch_projector(1, 0, 0), pauli::bloch_projector(1, 0, 0, -1)},
      {pauli::bloch_projector(0, 1, 0), pauli::bloch_projector(0, 1, 0, -1)},
  });
}

/// Eight qubit states with Bloch vectors nu * ((-1)^{x2}, (-1)^{x3}, (-1)^{x1}) / sqrt(3),
/// paired with the sigma_z, sigma_x, sigma_y measurements. Every (x, y) cell
/// succeeds with probability 1/2 + nu / (2 sqrt 3).
inline std::pair<StateEnsemble, MeasurementSet> cube_construction(double nu) {
  require(nu >= 0.0 && nu <= 1.0, ErrorKind::kRangeViolation, "nu must lie in [0, 1]");
  const Scenario sc = Scenario::uniform(3, 2, 2);
  const double r = nu / std::sqrt(3.0);
  std::vector<Matrix> states;
  for (std::int64_t x = 0; x < sc.num_inputs(); ++x) {
    auto sgn = [&](int y) { return sc.digit(x, y) == 0 ? 1.0 : -1.0; };
    states.push_back(pauli::bloch_projector(r * sgn(1), r * sgn(2), r * sgn(0)));
  }
  return {StateEnsemble(std::move(states)), pauli_triple()};
}

}  // namespace qrac
