#pragma once

// Random generators and independent reference computations shared by the unit
// tests and the acceptance runner. Oracles avoid the library code path they
// check: classical values enumerate decoding tables directly, qubit values use
// Bloch-vector geometry, 2x2 spectra use the trace/determinant formula.

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "qrac/qrac.hpp"

namespace qrac_test {

using qrac::cplx;
using qrac::Matrix;
using qrac::Rational;

inline std::vector<cplx> random_vector(std::size_t d, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<cplx> v(d);
  for (auto& a : v) {
    const double re = g(rng);
    const double im = g(rng);
    a = cplx{re, im};
  }
  return v;
}

inline std::vector<cplx> random_unit_vector(std::size_t d, std::mt19937_64& rng) {
  auto v = random_vector(d, rng);
  double s = 0.0;
  for (auto& a : v) s += std::norm(a);
  for (auto& a : v) a /= std::sqrt(s);
  return v;
}

inline Matrix random_hermitian(std::size_t d, std::mt19937_64& rng) {
  Matrix m(d);
  auto v = random_vector(d * d, rng);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) m(i, j) = v[i * d + j];
  return m.hermitian_part();
}

/// Gram-Schmidt on Gaussian columns.
inline Matrix random_unitary(std::size_t d, std::mt19937_64& rng) {
  std::vector<std::vector<cplx>> cols;
  while (cols.size() < d) {
    auto v = random_vector(d, rng);
    for (const auto& c : cols) {
      cplx dot{0.0, 0.0};
      for (std::size_t i = 0; i < d; ++i) dot += std::conj(c[i]) * v[i];
      for (std::size_t i = 0; i < d; ++i) v[i] -= dot * c[i];
    }
    double s = 0.0;
    for (auto& a : v) s += std::norm(a);
    if (s < 1e-6) continue;
    for (auto& a : v) a /= std::sqrt(s);
    cols.push_back(v);
  }
  Matrix u(d);
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t i = 0; i < d; ++i) u(i, j) = cols[j][i];
  return u;
}

/// k-outcome POVM: rank-deficient or full-rank PSD pieces rescaled to sum to I.
inline std::vector<Matrix> random_povm(std::size_t d, std::size_t k, std::mt19937_64& rng) {
  std::vector<Matrix> h;
  Matrix s(d);
  std::uniform_int_distribution<std::size_t> rank_dist(1, d);
  for (std::size_t b = 0; b < k; ++b) {
    // Rank-r PSD piece; the first is full rank so the sum is invertible.
    const std::size_t rank = b == 0 ? d : rank_dist(rng);
    Matrix e(d);
    for (std::size_t r = 0; r < rank; ++r) {
      const auto v = random_vector(d, rng);
      e += Matrix::outer(v, v);
    }
    s += e;
    h.push_back(e);
  }
  const Matrix w = qrac::inverse_sqrt(s.hermitian_part());
  for (auto& e : h) e = (w * e * w).hermitian_part();
  return h;
}

inline qrac::MeasurementSet random_measurement_set(std::size_t d, const std::vector<int>& profile,
                                                   std::mt19937_64& rng) {
  std::vector<std::vector<Matrix>> effects;
  for (int k : profile) effects.push_back(random_povm(d, static_cast<std::size_t>(k), rng));
  return qrac::MeasurementSet::from_matrices(effects);
}

/// Mixed states: convex combination of a few random pure states.
inline std::vector<Matrix> random_density_matrices(std::size_t count, std::size_t d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Matrix> out;
  for (std::size_t x = 0; x < count; ++x) {
    Matrix rho(d);
    double total = 0.0;
    const std::size_t parts = 1 + (x % 3);
    std::vector<double> w(parts);
    for (auto& v : w) total += (v = u(rng) + 1e-3);
    for (std::size_t p = 0; p < parts; ++p) {
      const auto v = random_unit_vector(d, rng);
      rho += Matrix::outer(v, v) * (w[p] / total);
    }
    out.push_back(rho.hermitian_part());
  }
  return out;
}

/// Input strings in lexicographic order, first dit most significant.
inline std::vector<std::vector<int>> all_strings(const std::vector<int>& profile) {
  std::vector<std::vector<int>> out{{}};
  for (int d : profile) {
    std::vector<std::vector<int>> next;
    for (const auto& s : out)
      for (int v = 0; v < d; ++v) {
        auto t = s;
        t.push_back(v);
        next.push_back(t);
      }
    out = std::move(next);
  }
  return out;
}

/// Classical optimum by enumerating every decoding table D_y(m) and letting
/// each input pick its best message; the value is linear in the encoding, so
/// this equals the maximum over all (encoding, decoding) pairs.
inline Rational decoding_table_oracle(const std::vector<int>& profile, int dim) {
  const auto strings = all_strings(profile);
  const std::size_t n = profile.size();
  // table[y * dim + m] in [0, d_y)
  std::vector<int> table(n * static_cast<std::size_t>(dim), 0);
  std::int64_t best = -1;
  while (true) {
    std::int64_t total = 0;
    for (const auto& x : strings) {
      int top = 0;
      for (int m = 0; m < dim; ++m) {
        int hits = 0;
        for (std::size_t y = 0; y < n; ++y) hits += table[y * static_cast<std::size_t>(dim) + static_cast<std::size_t>(m)] == x[y];
        top = std::max(top, hits);
      }
      total += top;
    }
    best = std::max(best, total);
    std::size_t pos = 0;
    while (pos < table.size()) {
      const int limit = profile[pos / static_cast<std::size_t>(dim)];
      if (++table[pos] < limit) break;
      table[pos++] = 0;
    }
    if (pos == table.size()) break;
  }
  return Rational(best) / Rational(static_cast<std::int64_t>(n * strings.size()));
}

/// Same optimum by looping over every encoding as well; exponential in the
/// number of inputs, so only for tiny scenarios.
inline Rational full_product_oracle(const std::vector<int>& profile, int dim) {
  const auto strings = all_strings(profile);
  const std::size_t n = profile.size();
  const std::size_t l = strings.size();
  std::vector<int> table(n * static_cast<std::size_t>(dim), 0);
  std::int64_t best = -1;
  while (true) {
    std::vector<int> enc(l, 0);
    while (true) {
      std::int64_t total = 0;
      for (std::size_t x = 0; x < l; ++x)
        for (std::size_t y = 0; y < n; ++y)
          total += table[y * static_cast<std::size_t>(dim) + static_cast<std::size_t>(enc[x])] == strings[x][y];
      best = std::max(best, total);
      std::size_t p = 0;
      while (p < l) {
        if (++enc[p] < dim) break;
        enc[p++] = 0;
      }
      if (p == l) break;
    }
    std::size_t pos = 0;
    while (pos < table.size()) {
      const int limit = profile[pos / static_cast<std::size_t>(dim)];
      if (++table[pos] < limit) break;
      table[pos++] = 0;
    }
    if (pos == table.size()) break;
  }
  return Rational(best) / Rational(static_cast<std::int64_t>(n * l));
}

/// Largest eigenvalue of a 2x2 Hermitian matrix: tr/2 + sqrt((tr/2)^2 - det).
inline double eig2_top(const Matrix& h) {
  const double tr = (h(0, 0) + h(1, 1)).real();
  const double det = (h(0, 0) * h(1, 1) - h(0, 1) * h(1, 0)).real();
  return tr / 2.0 + std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
}

/// Average success for rank-one projective qubit measurements with Bloch axes
/// s_y: (1 / (n 2^n)) sum_x (n/2 + |sum_y (-1)^{x_y} s_y| / 2).
inline double qubit_closed_form(const std::vector<std::array<double, 3>>& axes) {
  const std::size_t n = axes.size();
  double total = 0.0;
  for (std::size_t x = 0; x < (std::size_t{1} << n); ++x) {
    std::array<double, 3> v{0, 0, 0};
    for (std::size_t y = 0; y < n; ++y) {
      const double s = ((x >> (n - 1 - y)) & 1U) ? -1.0 : 1.0;
      for (std::size_t c = 0; c < 3; ++c) v[c] += s * axes[y][c];
    }
    total += n / 2.0 + std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]) / 2.0;
  }
  return total / (static_cast<double>(n) * static_cast<double>(std::size_t{1} << n));
}

/// Every ordered profile over `values` with length <= max_n and product <= max_prod.
inline std::vector<std::vector<int>> profiles(int max_n, const std::vector<int>& values, long max_prod) {
  std::vector<std::vector<int>> out;
  std::function<void(std::vector<int>&, long)> rec = [&](std::vector<int>& cur, long prod) {
    if (!cur.empty()) out.push_back(cur);
    if (static_cast<int>(cur.size()) == max_n) return;
    for (int v : values) {
      if (prod * v > max_prod) continue;
      cur.push_back(v);
      rec(cur, prod * v);
      cur.pop_back();
    }
  };
  std::vector<int> cur;
  rec(cur, 1);
  return out;
}

/// Rank-one qubit projectors (I +- s.sigma)/2 for each axis.
inline qrac::MeasurementSet qubit_projective_set(const std::vector<std::array<double, 3>>& axes) {
  std::vector<std::vector<Matrix>> effects;
  for (const auto& a : axes)
    effects.push_back({qrac::pauli::bloch_projector(a[0], a[1], a[2]), qrac::pauli::bloch_projector(a[0], a[1], a[2], -1)});
  return qrac::MeasurementSet::from_matrices(effects);
}

inline std::array<double, 3> random_axis(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::array<double, 3> a{g(rng), g(rng), g(rng)};
  const double r = std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]);
  for (auto& v : a) v /= r;
  return a;
}

}  // namespace qrac_test
