#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <utility>
#include <vector>

#include "qrac/config.hpp"
#include "qrac/error.hpp"
#include "qrac/matrix.hpp"

namespace qrac {

/// Eigen-decomposition of a Hermitian matrix: ascending eigenvalues, column
/// eigenvectors.
struct EigenDecomposition {
  std::vector<double> values;
  Matrix vectors;

  std::vector<cplx> vector(std::size_t k) const {
    std::vector<cplx> v(vectors.dim());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = vectors(i, k);
    return v;
  }

  /// V diag(f(lambda)) V^dagger
  template <class F>
  Matrix reconstruct(F&& f) const {
    const std::size_t n = vectors.dim();
    Matrix m(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double w = f(values[k]);
      if (w == 0.0) continue;
      for (std::size_t i = 0; i < n; ++i) {
        const cplx vi = w * vectors(i, k);
        for (std::size_t j = 0; j < n; ++j) m(i, j) += vi * std::conj(vectors(j, k));
      }
    }
    return m;
  }
};

namespace detail {

inline EigenDecomposition eigh_2x2(const Matrix& h) {
  const double a = h(0, 0).real();
  const double d = h(1, 1).real();
  const cplx b = 0.5 * (h(0, 1) + std::conj(h(1, 0)));
  const double mean = 0.5 * (a + d);
  const double half_gap = 0.5 * (a - d);
  const double r = std::hypot(half_gap, std::abs(b));
  EigenDecomposition out{{mean - r, mean + r}, Matrix(2)};

  // Top eigenvector from whichever closed form is better conditioned.
  cplx v0, v1;
  const double top = mean + r;
  if (r == 0.0) {
    v0 = 1.0;
    v1 = 0.0;
  } else if (a >= d) {
    v0 = top - d;
    v1 = std::conj(b);
  } else {
    v0 = b;
    v1 = top - a;
  }
  const double nrm = std::sqrt(std::norm(v0) + std::norm(v1));
  v0 /= nrm;
  v1 /= nrm;
  out.vectors(0, 1) = v0;
  out.vectors(1, 1) = v1;
  out.vectors(0, 0) = -std::conj(v1);
  out.vectors(1, 0) = std::conj(v0);
  return out;
}

/// Cyclic complex Jacobi. Each rotation zeroes one off-diagonal pair.
inline EigenDecomposition eigh_jacobi(const Matrix& h, const ToleranceConfig& tol) {
  const std::size_t n = h.dim();
  Matrix a = h.hermitian_part();
  Matrix v = Matrix::identity(n);
  const double scale = std::max(1.0, a.frobenius_norm());
  const std::size_t cap = 100 * n * n;
  std::size_t rotations = 0;

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
  };

  while (off_norm() > tol.jacobi_off_diagonal * scale) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double mag = std::abs(a(p, q));
        if (mag <= 1e-300) continue;
        if (++rotations > cap)
          throw Error(ErrorKind::kConvergenceFailure, "Jacobi iteration cap reached");
        const cplx phase = a(p, q) / mag;  // e^{i phi}
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * mag);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // Rotation block R = D * [[c, s], [-s, c]] with D = diag(1, conj(phase)).
        const cplx r_pp = c;
        const cplx r_pq = s;
        const cplx r_qp = -s * std::conj(phase);
        const cplx r_qq = c * std::conj(phase);
        // A <- A R (columns p, q)
        for (std::size_t k = 0; k < n; ++k) {
          const cplx akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * r_pp + akq * r_qp;
          a(k, q) = akp * r_pq + akq * r_qq;
        }
        // A <- R^dagger A (rows p, q)
        for (std::size_t k = 0; k < n; ++k) {
          const cplx apk = a(p, k), aqk = a(q, k);
          a(p, k) = std::conj(r_pp) * apk + std::conj(r_qp) * aqk;
          a(q, k) = std::conj(r_pq) * apk + std::conj(r_qq) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (std::size_t k = 0; k < n; ++k) {
          const cplx vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * r_pp + vkq * r_qp;
          v(k, q) = vkp * r_pq + vkq * r_qq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });
  EigenDecomposition out{std::vector<double>(n), Matrix(n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

}  // namespace detail

/// Full eigen-decomposition of a Hermitian matrix. Closed form for d <= 2,
/// cyclic Jacobi otherwise.
inline EigenDecomposition eigh(const Matrix& h, const ToleranceConfig& tol = default_tolerances()) {
  switch (h.dim()) {
    case 0: throw Error(ErrorKind::kShapeMismatch, "empty matrix");
    case 1: return EigenDecomposition{{h(0, 0).real()}, Matrix::identity(1)};
    case 2: return detail::eigh_2x2(h);
    default: return detail::eigh_jacobi(h, tol);
  }
}

inline double max_eigenvalue(const Matrix& h) {
  if (h.dim() == 2) {
    const double a = h(0, 0).real(), d = h(1, 1).real();
    return 0.5 * (a + d) + std::hypot(0.5 * (a - d), std::abs(h(0, 1)));
  }
  return eigh(h).values.back();
}

inline double min_eigenvalue(const Matrix& h) {
  if (h.dim() == 2) {
    const double a = h(0, 0).real(), d = h(1, 1).real();
    return 0.5 * (a + d) - std::hypot(0.5 * (a - d), std::abs(h(0, 1)));
  }
  return eigh(h).values.front();
}

/// Spectral norm of a Hermitian matrix.
inline double operator_norm(const Matrix& h) {
  const auto e = eigh(h);
  return std::max(std::abs(e.values.front()), std::abs(e.values.back()));
}

/// Metric projection onto the PSD cone (negative eigenvalues clipped to zero).
inline Matrix psd_projection(const Matrix& h) {
  const auto e = eigh(h);
  if (e.values.front() >= 0.0) return h.hermitian_part();
  return e.reconstruct([](double w) { return w > 0.0 ? w : 0.0; });
}

/// Symmetric inverse square root of a positive definite matrix.
inline Matrix inverse_sqrt(const Matrix& h) {
  const auto e = eigh(h);
  require(e.values.front() > 0.0, ErrorKind::kNotPositive, "inverse_sqrt of singular matrix");
  return e.reconstruct([](double w) { return 1.0 / std::sqrt(w); });
}

}  // namespace qrac
