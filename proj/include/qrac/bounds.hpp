#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "qrac/error.hpp"
#include "qrac/rational.hpp"
#include "qrac/scenario.hpp"

namespace qrac {

/// k[i-1] = number of measurements whose alphabet contains dit i.
struct CountingProfile {
  std::vector<int> k;
  int d_max = 0;
};

/// One occupancy vector (n_1, ..., n_dmax): how many positions of x hold each
/// dit value, with the number of strings sharing it and the identity-decoding
/// payoff of such a string.
struct SolutionTerm {
  std::vector<int> occupancy;
  BigInt multiplicity;
  int payoff = 0;
};

inline CountingProfile k_profile(const Scenario& sc) {
  CountingProfile p;
  p.d_max = sc.max_outcomes();
  p.k.assign(static_cast<std::size_t>(p.d_max), 0);
  for (int d : sc.outcome_profile())
    for (int i = 0; i < d; ++i) ++p.k[static_cast<std::size_t>(i)];
  return p;
}

inline BigInt binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || n < 0 || k > n) return 0;
  BigInt r = 1;
  for (std::int64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// All occupancy vectors with sum n and n_i <= k_i, assigned from the largest
/// dit value down. Terms with zero multiplicity are skipped.
inline std::vector<SolutionTerm> solution_terms(const Scenario& sc) {
  const auto prof = k_profile(sc);
  const auto dmax = static_cast<std::size_t>(prof.d_max);
  // capacity[j] = sum_{i<=j} k_i, used to prune branches that cannot reach n.
  std::vector<int> capacity(dmax);
  for (std::size_t j = 0; j < dmax; ++j) capacity[j] = prof.k[j] + (j ? capacity[j - 1] : 0);

  std::vector<SolutionTerm> out;
  std::vector<int> occ(dmax, 0);
  auto recurse = [&](auto&& self, std::size_t j, int remaining, int used_above, BigInt mult) -> void {
    // j counts down from dmax-1 to 0; used_above = sum_{i>j} n_i.
    const int alpha = prof.k[j] - used_above;
    if (alpha < 0) return;
    if (j == 0) {
      if (remaining > alpha) return;
      occ[0] = remaining;
      SolutionTerm t;
      t.occupancy = occ;
      t.multiplicity = mult * binomial(alpha, remaining);
      t.payoff = *std::max_element(occ.begin(), occ.begin() + sc.dim());
      if (t.multiplicity > 0) out.push_back(std::move(t));
      return;
    }
    const int hi = std::min({remaining, alpha});
    for (int v = hi; v >= 0; --v) {
      if (remaining - v > capacity[j - 1]) break;
      occ[j] = v;
      self(self, j - 1, remaining - v, used_above + v, mult * binomial(alpha, v));
    }
    occ[j] = 0;
  };
  recurse(recurse, dmax - 1, sc.n(), 0, BigInt(1));
  return out;
}

/// Exact classical optimum via the occupancy-counting formula; defined only
/// when dim <= min_y d_y.
inline Rational exact_sc(const Scenario& sc) {
  if (sc.dim() > sc.min_outcomes())
    throw Error(ErrorKind::kNotApplicable, "exact formula needs dim <= min_y d_y");
  BigInt total = 0;
  for (const auto& t : solution_terms(sc)) total += t.multiplicity * t.payoff;
  return Rational(total) / (BigInt(sc.n()) * BigInt(sc.num_inputs()));
}

/// Specializations for n = 2 and n = 3 with equal outcome counts d_tilde.
inline Rational closed_form_sc(int n, int d_tilde, int dim) {
  require(dim >= 1 && d_tilde >= 2, ErrorKind::kInvalidArgument, "invalid dimensions");
  require(dim <= d_tilde, ErrorKind::kNotApplicable, "closed form needs dim <= d_tilde");
  const BigInt d = dim, t = d_tilde;
  if (n == 2) return Rational(d + 2 * d * t - d * d) / Rational(2 * t * t);
  if (n == 3) return Rational(d * (d * d - 1 + 3 * t * (t + 1 - d))) / Rational(3 * t * t * t);
  throw Error(ErrorKind::kUnsupportedN, "closed form exists only for n = 2, 3");
}

/// General upper bound on S_c, valid for any dimension.
inline double upper_bound_sc(const Scenario& sc) {
  const double d = sc.dim();
  const int n = sc.n();
  double pair_sum = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pair_sum += d / (static_cast<double>(sc.outcomes(i)) * sc.outcomes(j));
  const double first = 1.0 + pair_sum;
  const double second = (n - 1) + d / static_cast<double>(sc.num_inputs());
  return std::min(first, second) / n;
}

/// The same bound written for equal outcome counts d_tilde.
inline double upper_bound_equal_outcomes(int n, int d_tilde, int dim) {
  require(n >= 1 && d_tilde >= 2 && dim >= 2, ErrorKind::kInvalidArgument, "invalid scenario");
  const double t = d_tilde, d = dim;
  const double first = 1.0 + n * (n - 1) * d / (2.0 * t * t);
  const double second = (n - 1) + d / std::pow(t, n);
  return std::min(first, second) / n;
}

}  // namespace qrac
