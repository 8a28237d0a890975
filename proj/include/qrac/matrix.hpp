#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "qrac/error.hpp"

namespace qrac {

using cplx = std::complex<double>;

/// Dense square complex matrix, row-major. Dimensions in this library stay
/// small (d <= 16), so no expression templates or blocking.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t dim) : dim_(dim), data_(dim * dim, cplx{0.0, 0.0}) {}
  Matrix(std::size_t dim, std::vector<cplx> entries) : dim_(dim), data_(std::move(entries)) {
    require(data_.size() == dim_ * dim_, ErrorKind::kShapeMismatch,
            "matrix entry count does not match dimension");
  }
  Matrix(std::initializer_list<std::initializer_list<cplx>> rows) : dim_(rows.size()) {
    data_.reserve(dim_ * dim_);
    for (const auto& row : rows) {
      require(row.size() == dim_, ErrorKind::kShapeMismatch, "matrix literal is not square");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static Matrix identity(std::size_t dim) {
    Matrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
  }

  static Matrix outer(std::span<const cplx> u, std::span<const cplx> v) {
    Matrix m(u.size());
    for (std::size_t i = 0; i < u.size(); ++i)
      for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = u[i] * std::conj(v[j]);
    return m;
  }

  std::size_t dim() const noexcept { return dim_; }
  std::span<const cplx> entries() const noexcept { return data_; }
  std::span<cplx> entries() noexcept { return data_; }

  cplx& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * dim_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * dim_ + j]; }

  Matrix& operator+=(const Matrix& o) {
    check_same(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    check_same(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  Matrix& operator*=(cplx s) {
    for (auto& v : data_) v *= s;
    return *this;
  }
  Matrix& operator*=(double s) {
    for (auto& v : data_) v *= s;
    return *this;
  }

  /// this += s * o
  void add_scaled(const Matrix& o, double s) {
    check_same(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += s * o.data_[k];
  }

  Matrix adjoint() const {
    Matrix m(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j) m(j, i) = std::conj((*this)(i, j));
    return m;
  }

  cplx trace() const {
    cplx t{0.0, 0.0};
    for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
  }

  /// Average with the adjoint; used after arithmetic that should preserve
  /// hermiticity but accumulates rounding.
  Matrix hermitian_part() const {
    Matrix m(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j)
        m(i, j) = 0.5 * ((*this)(i, j) + std::conj((*this)(j, i)));
    return m;
  }

  double max_abs() const {
    double r = 0.0;
    for (const auto& v : data_) r = std::max(r, std::abs(v));
    return r;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (const auto& v : data_) s += std::norm(v);
    return std::sqrt(s);
  }

  /// max_ij |A_ij - conj(A_ji)|
  double hermiticity_deviation() const {
    double r = 0.0;
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = i; j < dim_; ++j)
        r = std::max(r, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    return r;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, double s) { return a *= s; }
  friend Matrix operator*(double s, Matrix a) { return a *= s; }
  friend Matrix operator*(Matrix a, cplx s) { return a *= s; }
  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    a.check_same(b);
    const std::size_t n = a.dim_;
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) {
        const cplx aik = a(i, k);
        if (aik == cplx{0.0, 0.0}) continue;
        for (std::size_t j = 0; j < n; ++j) m(i, j) += aik * b(k, j);
      }
    return m;
  }
  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  void check_same(const Matrix& o) const {
    require(o.dim_ == dim_, ErrorKind::kShapeMismatch, "matrix dimensions differ");
  }

  std::size_t dim_ = 0;
  std::vector<cplx> data_;
};

/// Re Tr(A B) for Hermitian A, B; skips forming the product.
inline double trace_product_real(const Matrix& a, const Matrix& b) {
  const std::size_t n = a.dim();
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) s += (a(i, j) * b(j, i)).real();
  return s;
}

/// <v| A |v>
inline cplx expectation(const Matrix& a, std::span<const cplx> v) {
  cplx s{0.0, 0.0};
  const std::size_t n = a.dim();
  for (std::size_t i = 0; i < n; ++i) {
    cplx row{0.0, 0.0};
    for (std::size_t j = 0; j < n; ++j) row += a(i, j) * v[j];
    s += std::conj(v[i]) * row;
  }
  return s;
}

inline std::vector<cplx> apply(const Matrix& a, std::span<const cplx> v) {
  const std::size_t n = a.dim();
  std::vector<cplx> out(n, cplx{0.0, 0.0});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out[i] += a(i, j) * v[j];
  return out;
}

namespace pauli {

inline Matrix x() { return Matrix{{0.0, 1.0}, {1.0, 0.0}}; }
inline Matrix y() { return Matrix{{0.0, cplx{0.0, -1.0}}, {cplx{0.0, 1.0}, 0.0}}; }
inline Matrix z() { return Matrix{{1.0, 0.0}, {0.0, -1.0}}; }

/// (I + sign * (n . sigma)) / 2 for a Bloch vector n.
inline Matrix bloch_projector(double nx, double ny, double nz, double sign = 1.0) {
  const double s = 0.5 * sign;
  return Matrix{{0.5 + s * nz, cplx{s * nx, -s * ny}}, {cplx{s * nx, s * ny}, 0.5 - s * nz}};
}

/// Hadamard gate.
inline Matrix hadamard() {
  const double h = 1.0 / std::sqrt(2.0);
  return Matrix{{h, h}, {h, -h}};
}

}  // namespace pauli

}  // namespace qrac
