#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "qrac/config.hpp"
#include "qrac/eigen.hpp"
#include "qrac/error.hpp"
#include "qrac/matrix.hpp"

namespace qrac {

/// Complex Hermitian matrix. Construction checks hermiticity and stores the
/// exactly-Hermitian part.
class HermitianOperator {
 public:
  HermitianOperator() = default;
  explicit HermitianOperator(const Matrix& m, const ToleranceConfig& tol = default_tolerances()) {
    require(m.dim() >= 1, ErrorKind::kShapeMismatch, "operator dimension must be positive");
    const double dev = m.hermiticity_deviation();
    if (dev > tol.hermiticity)
      throw Error(ErrorKind::kNonHermitian, "entry deviation " + std::to_string(dev));
    m_ = m.hermitian_part();
  }

  std::size_t dim() const noexcept { return m_.dim(); }
  const Matrix& matrix() const noexcept { return m_; }
  double min_eigenvalue() const { return qrac::min_eigenvalue(m_); }
  double max_eigenvalue() const { return qrac::max_eigenvalue(m_); }

  friend bool operator==(const HermitianOperator&, const HermitianOperator&) = default;

 private:
  Matrix m_;
};

/// Unit vector in C^d.
class PureState {
 public:
  PureState() = default;
  explicit PureState(std::vector<cplx> amplitudes, const ToleranceConfig& tol = default_tolerances())
      : amps_(std::move(amplitudes)) {
    require(!amps_.empty(), ErrorKind::kShapeMismatch, "empty state");
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    if (std::abs(s - 1.0) > tol.unit_norm)
      throw Error(ErrorKind::kInvalidArgument, "state norm^2 = " + std::to_string(s));
  }

  /// Normalizes an arbitrary nonzero vector.
  static PureState normalized(std::vector<cplx> v) {
    double s = 0.0;
    for (const auto& a : v) s += std::norm(a);
    require(s > 0.0, ErrorKind::kInvalidArgument, "cannot normalize zero vector");
    const double inv = 1.0 / std::sqrt(s);
    for (auto& a : v) a *= inv;
    PureState p;
    p.amps_ = std::move(v);
    return p;
  }

  std::size_t dim() const noexcept { return amps_.size(); }
  std::span<const cplx> amplitudes() const noexcept { return amps_; }
  Matrix projector() const { return Matrix::outer(amps_, amps_); }

 private:
  std::vector<cplx> amps_;
};

/// Positive operator-valued measure: PSD effects summing to the identity.
class Povm {
 public:
  Povm() = default;

  std::size_t dim() const noexcept { return effects_.empty() ? 0 : effects_.front().dim(); }
  std::size_t outcomes() const noexcept { return effects_.size(); }
  const std::vector<HermitianOperator>& effects() const noexcept { return effects_; }
  const Matrix& effect(std::size_t b) const { return effects_.at(b).matrix(); }

  friend Povm validate_povm(const std::vector<Matrix>& effects, const ToleranceConfig& tol);

 private:
  std::vector<HermitianOperator> effects_;
};

/// Checks hermiticity, positivity and completeness; the order of checks
/// determines which error a doubly-broken input reports.
inline Povm validate_povm(const std::vector<Matrix>& effects,
                          const ToleranceConfig& tol = default_tolerances()) {
  require(!effects.empty(), ErrorKind::kShapeMismatch, "POVM needs at least one effect");
  const std::size_t d = effects.front().dim();
  require(d >= 1, ErrorKind::kShapeMismatch, "POVM dimension must be positive");
  Povm p;
  Matrix sum(d);
  for (std::size_t b = 0; b < effects.size(); ++b) {
    require(effects[b].dim() == d, ErrorKind::kShapeMismatch, "effects differ in dimension");
    HermitianOperator h(effects[b], tol);
    const double lo = h.min_eigenvalue();
    if (lo < -tol.psd) throw NotPositiveError(b, lo);
    sum += h.matrix();
    p.effects_.push_back(std::move(h));
  }
  const double dev = (sum - Matrix::identity(d)).max_abs();
  if (dev > tol.completeness) throw IncompleteSumError(dev);
  return p;
}

/// n POVMs acting on a common dimension.
class MeasurementSet {
 public:
  MeasurementSet() = default;
  explicit MeasurementSet(std::vector<Povm> povms) : povms_(std::move(povms)) {
    require(!povms_.empty(), ErrorKind::kShapeMismatch, "measurement set is empty");
    for (const auto& p : povms_)
      require(p.dim() == povms_.front().dim(), ErrorKind::kShapeMismatch,
              "measurements act on different dimensions");
  }

  static MeasurementSet from_matrices(const std::vector<std::vector<Matrix>>& effects,
                                      const ToleranceConfig& tol = default_tolerances()) {
    std::vector<Povm> povms;
    povms.reserve(effects.size());
    for (const auto& e : effects) povms.push_back(validate_povm(e, tol));
    return MeasurementSet(std::move(povms));
  }

  std::size_t dim() const noexcept { return povms_.front().dim(); }
  std::size_t size() const noexcept { return povms_.size(); }
  const Povm& operator[](std::size_t y) const { return povms_.at(y); }
  const std::vector<Povm>& povms() const noexcept { return povms_; }
  const Matrix& effect(std::size_t y, std::size_t b) const { return povms_.at(y).effect(b); }

  std::vector<int> outcome_profile() const {
    std::vector<int> d;
    d.reserve(povms_.size());
    for (const auto& p : povms_) d.push_back(static_cast<int>(p.outcomes()));
    return d;
  }

  std::vector<std::vector<Matrix>> matrices() const {
    std::vector<std::vector<Matrix>> out;
    for (const auto& p : povms_) {
      auto& row = out.emplace_back();
      for (const auto& e : p.effects()) row.push_back(e.matrix());
    }
    return out;
  }

 private:
  std::vector<Povm> povms_;
};

struct Eigenpair {
  double value;
  PureState vector;
};

/// Largest eigenvalue with a unit eigenvector.
inline Eigenpair top_eigenpair(const HermitianOperator& h,
                               const ToleranceConfig& tol = default_tolerances()) {
  const auto e = eigh(h.matrix(), tol);
  return Eigenpair{e.values.back(), PureState::normalized(e.vector(e.values.size() - 1))};
}

/// U H U^dagger for unitary U.
inline HermitianOperator conjugate_by_unitary(const HermitianOperator& h, const Matrix& u,
                                              const ToleranceConfig& tol = default_tolerances()) {
  require(u.dim() == h.dim(), ErrorKind::kShapeMismatch, "unitary dimension mismatch");
  const double dev = (u.adjoint() * u - Matrix::identity(u.dim())).max_abs();
  if (dev > tol.unitary)
    throw Error(ErrorKind::kNotUnitary, "U^dagger U deviates by " + std::to_string(dev));
  return HermitianOperator((u * h.matrix() * u.adjoint()).hermitian_part(), tol);
}

inline MeasurementSet conjugate_by_unitary(const MeasurementSet& ms, const Matrix& u,
                                           const ToleranceConfig& tol = default_tolerances()) {
  std::vector<std::vector<Matrix>> out;
  for (const auto& p : ms.povms()) {
    auto& row = out.emplace_back();
    for (const auto& e : p.effects()) row.push_back(conjugate_by_unitary(e, u, tol).matrix());
  }
  return MeasurementSet::from_matrices(out, tol);
}

}  // namespace qrac
