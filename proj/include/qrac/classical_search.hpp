#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qrac/error.hpp"
#include "qrac/rational.hpp"
#include "qrac/scenario.hpp"

namespace qrac {

/// Optimal deterministic strategy for the average success probability.
struct ClassicalOptimum {
  Rational value;
  std::int64_t successes = 0;  // numerator over n * prod(d_y)
  DeterministicStrategy witness;
};

namespace detail {

/// C(n, k) saturating at `cap + 1`.
inline std::int64_t binomial_capped(std::int64_t n, std::int64_t k, std::int64_t cap) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  long double r = 1.0L;
  for (std::int64_t i = 1; i <= k; ++i) {
    r = r * static_cast<long double>(n - k + i) / static_cast<long double>(i);
    if (r > static_cast<long double>(cap)) return cap + 1;
  }
  return static_cast<std::int64_t>(std::llround(r));
}

/// agree[x * L + c]: number of positions where input strings x and c coincide.
inline std::vector<std::uint8_t> agreement_table(const Scenario& sc) {
  const auto L = static_cast<std::size_t>(sc.num_inputs());
  std::vector<std::vector<int>> dig(L);
  for (std::size_t x = 0; x < L; ++x) dig[x] = sc.digits(static_cast<std::int64_t>(x));
  std::vector<std::uint8_t> agree(L * L);
  for (std::size_t x = 0; x < L; ++x)
    for (std::size_t c = 0; c < L; ++c) {
      int a = 0;
      for (int y = 0; y < sc.n(); ++y)
        a += dig[x][static_cast<std::size_t>(y)] == dig[c][static_cast<std::size_t>(y)];
      agree[x * L + c] = static_cast<std::uint8_t>(a);
    }
  return agree;
}

inline DeterministicStrategy strategy_from_codebook(const Scenario& sc,
                                                    const std::vector<std::int64_t>& codebook,
                                                    const std::vector<std::uint8_t>& agree) {
  const auto L = static_cast<std::size_t>(sc.num_inputs());
  DeterministicStrategy s;
  s.decode.assign(static_cast<std::size_t>(sc.n()), std::vector<int>(codebook.size()));
  for (std::size_t m = 0; m < codebook.size(); ++m)
    for (int y = 0; y < sc.n(); ++y)
      s.decode[static_cast<std::size_t>(y)][m] = sc.digit(codebook[m], y);
  s.encode.resize(L);
  for (std::size_t x = 0; x < L; ++x) {
    int best = -1, arg = 0;
    for (std::size_t m = 0; m < codebook.size(); ++m) {
      const int a = agree[x * L + static_cast<std::size_t>(codebook[m])];
      if (a > best) best = a, arg = static_cast<int>(m);  // strict: smallest m wins ties
    }
    s.encode[x] = arg;
  }
  return s;
}

}  // namespace detail

/// Number of codebooks (multisets of `dim` codewords) the exhaustive search visits.
inline std::int64_t brute_force_search_size(const Scenario& sc, std::int64_t cap) {
  return detail::binomial_capped(sc.num_inputs() + sc.dim() - 1, sc.dim(), cap);
}

/// Exhaustive classical optimum S_c over deterministic decodings.
///
/// A deterministic decoding assigns to every message m the codeword
/// (D_1(m), ..., D_n(m)); the value only depends on the multiset of codewords,
/// so codebooks are enumerated as non-decreasing index sequences. For each
/// codebook the optimal encoder sends the message whose codeword agrees with x
/// in the most positions (smallest m on ties).
inline ClassicalOptimum brute_force_sc(const Scenario& sc, std::int64_t guard = 1'000'000) {
  const std::int64_t count = brute_force_search_size(sc, guard);
  if (count > guard)
    throw Error(ErrorKind::kTooLarge, "brute-force search exceeds " + std::to_string(guard) +
                                          " codebooks");
  const auto L = static_cast<std::size_t>(sc.num_inputs());
  const auto dim = static_cast<std::size_t>(sc.dim());
  const auto agree = detail::agreement_table(sc);

  // best[k][x]: max agreement of x with codewords 0..k-1 of the current prefix.
  std::vector<std::vector<int>> best(dim + 1, std::vector<int>(L, 0));
  std::vector<std::int64_t> code(dim, 0);
  std::int64_t best_total = -1;
  std::vector<std::int64_t> best_code;

  // Iterative depth-first enumeration over non-decreasing code sequences.
  std::size_t depth = 0;
  code[0] = 0;
  while (true) {
    // Extend prefix at `depth` with code[depth].
    const auto c = static_cast<std::size_t>(code[depth]);
    auto& cur = best[depth + 1];
    const auto& prev = best[depth];
    for (std::size_t x = 0; x < L; ++x) cur[x] = std::max(prev[x], static_cast<int>(agree[x * L + c]));
    if (depth + 1 == dim) {
      std::int64_t total = 0;
      for (std::size_t x = 0; x < L; ++x) total += cur[x];
      if (total > best_total) {
        best_total = total;
        best_code = code;
      }
      // Advance: increment the deepest position that can still grow.
      while (true) {
        if (++code[depth] < static_cast<std::int64_t>(L)) break;
        if (depth == 0) goto done;
        --depth;
      }
    } else {
      ++depth;
      code[depth] = code[depth - 1];
    }
  }
done:
  ClassicalOptimum out;
  out.successes = best_total;
  out.value = Rational(best_total) / (static_cast<std::int64_t>(sc.n()) * sc.num_inputs());
  out.witness = detail::strategy_from_codebook(sc, best_code, agree);
  return out;
}

/// Classical optimum restricted to identity decoding D_y(m) = m. Only defined
/// when every alphabet contains all messages (dim <= min_y d_y).
inline Rational identity_decoding_sc(const Scenario& sc) {
  require(sc.dim() <= sc.min_outcomes(), ErrorKind::kNotApplicable,
          "identity decoding needs dim <= min_y d_y");
  std::int64_t total = 0;
  std::vector<int> counts(static_cast<std::size_t>(sc.dim()));
  for (std::int64_t x = 0; x < sc.num_inputs(); ++x) {
    std::fill(counts.begin(), counts.end(), 0);
    for (int y = 0; y < sc.n(); ++y) {
      const int v = sc.digit(x, y);
      if (v < sc.dim()) ++counts[static_cast<std::size_t>(v)];
    }
    total += *std::max_element(counts.begin(), counts.end());
  }
  return Rational(total) / (static_cast<std::int64_t>(sc.n()) * sc.num_inputs());
}

/// Worst-case value with shared randomness: a finite mixture of deterministic
/// strategies maximizing min_{x,y} of the expected correctness.
struct MixedStrategyValue {
  Rational value;
  std::vector<std::pair<DeterministicStrategy, Rational>> weights;
  double primal_residual = 0.0;  // max constraint violation of the returned mixture
  double dual_residual = 0.0;    // max positive reduced cost at termination
  std::size_t distinct_columns = 0;
  std::size_t pivots = 0;
};

namespace detail {

/// Deterministic strategy number `index` in (encoding, decoding) mixed radix order.
inline DeterministicStrategy strategy_at(const Scenario& sc, std::int64_t encoding,
                                         std::int64_t decoding) {
  DeterministicStrategy s;
  s.encode.resize(static_cast<std::size_t>(sc.num_inputs()));
  for (std::int64_t x = sc.num_inputs() - 1; x >= 0; --x) {
    s.encode[static_cast<std::size_t>(x)] = static_cast<int>(encoding % sc.dim());
    encoding /= sc.dim();
  }
  s.decode.assign(static_cast<std::size_t>(sc.n()), std::vector<int>(static_cast<std::size_t>(sc.dim())));
  for (int y = sc.n() - 1; y >= 0; --y)
    for (int m = sc.dim() - 1; m >= 0; --m) {
      s.decode[static_cast<std::size_t>(y)][static_cast<std::size_t>(m)] =
          static_cast<int>(decoding % sc.outcomes(y));
      decoding /= sc.outcomes(y);
    }
  return s;
}

/// Exact revised simplex for
///   max t  s.t.  t - sum_j a_cj w_j + s_c = 0 (each cell c),  sum_j w_j = 1,
/// with t, w, s >= 0 and a_cj in {0, 1} given as bit masks.
class WorstCaseLp {
 public:
  WorstCaseLp(std::size_t cells, std::vector<std::uint64_t> masks)
      : cells_(cells), masks_(std::move(masks)), rows_(cells + 1) {}

  struct Solution {
    Rational value;
    std::vector<std::pair<std::size_t, Rational>> weights;  // column -> weight
    std::size_t pivots = 0;
  };

  Solution solve() {
    const std::size_t k = masks_.size();
    // Variable ids: 0 = t, 1..k = w_j, k+1..k+cells = slacks.
    basis_.resize(rows_);
    for (std::size_t c = 0; c < cells_; ++c) basis_[c] = k + 1 + c;
    basis_[cells_] = 1;  // w_0 carries the convexity row
    binv_.assign(rows_, std::vector<Rational>(rows_, Rational(0)));
    for (std::size_t i = 0; i < rows_; ++i) binv_[i][i] = 1;
    // B = [[I, -a_0], [0, 1]]  =>  B^{-1} = [[I, a_0], [0, 1]]
    for (std::size_t c = 0; c < cells_; ++c)
      if (bit(0, c)) binv_[c][cells_] = 1;
    xb_.assign(rows_, Rational(0));
    for (std::size_t i = 0; i < rows_; ++i) xb_[i] = binv_[i][cells_];

    std::size_t degenerate_streak = 0;
    bool bland = false;
    Solution sol;
    while (true) {
      const auto entering = price(bland);
      if (!entering) break;
      auto u = column(*entering);
      std::optional<std::size_t> leave;
      Rational best_ratio;
      for (std::size_t i = 0; i < rows_; ++i) {
        if (u[i] <= 0) continue;
        Rational ratio = xb_[i] / u[i];
        if (!leave || ratio < best_ratio || (ratio == best_ratio && basis_[i] < basis_[*leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
      require(leave.has_value(), ErrorKind::kConvergenceFailure, "worst-case LP unbounded");
      if (best_ratio == 0) {
        if (++degenerate_streak > 20) bland = true;
      } else {
        degenerate_streak = 0;
      }
      pivot(*leave, *entering, u);
      ++sol.pivots;
    }

    for (std::size_t i = 0; i < rows_; ++i) {
      if (basis_[i] == 0) sol.value = xb_[i];
      if (basis_[i] >= 1 && basis_[i] <= k && xb_[i] > 0) sol.weights.emplace_back(basis_[i] - 1, xb_[i]);
    }
    std::sort(sol.weights.begin(), sol.weights.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return sol;
  }

  /// Largest reduced cost at the current basis (zero or negative at optimum).
  Rational max_reduced_cost() const {
    const auto pi = duals();
    Rational best = reduced_cost_t(pi);
    for (std::size_t j = 0; j < masks_.size(); ++j) best = std::max(best, reduced_cost_w(pi, j));
    for (std::size_t c = 0; c < cells_; ++c) best = std::max(best, Rational(-pi[c]));
    return best;
  }

 private:
  bool bit(std::size_t j, std::size_t c) const { return (masks_[j] >> c) & 1U; }

  std::vector<Rational> duals() const {
    std::vector<Rational> pi(rows_, Rational(0));
    for (std::size_t i = 0; i < rows_; ++i)
      if (basis_[i] == 0) pi = binv_[i];
    return pi;
  }

  Rational reduced_cost_t(const std::vector<Rational>& pi) const {
    Rational d = 1;
    for (std::size_t c = 0; c < cells_; ++c) d -= pi[c];
    return d;
  }
  Rational reduced_cost_w(const std::vector<Rational>& pi, std::size_t j) const {
    Rational d = -pi[cells_];
    for (std::size_t c = 0; c < cells_; ++c)
      if (bit(j, c)) d += pi[c];
    return d;
  }

  /// Entering variable id, or nothing at optimality. Reduced costs are
  /// compared on a common denominator so pricing runs on integers.
  std::optional<std::size_t> price(bool bland) const {
    const auto pi = duals();
    BigInt lcm = 1;
    for (const auto& v : pi) lcm = boost::multiprecision::lcm(lcm, boost::multiprecision::denominator(v));
    std::vector<BigInt> p(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      p[i] = boost::multiprecision::numerator(pi[i]) * (lcm / boost::multiprecision::denominator(pi[i]));

    std::optional<std::size_t> best;
    BigInt best_d = 0;
    auto consider = [&](std::size_t id, const BigInt& d) {
      if (d <= 0) return false;
      if (bland) {
        if (!best || id < *best) best = id, best_d = d;
        return true;
      }
      if (!best || d > best_d) best = id, best_d = d;
      return false;
    };
    BigInt dt = lcm;
    for (std::size_t c = 0; c < cells_; ++c) dt -= p[c];
    if (consider(0, dt) && bland) return best;
    for (std::size_t j = 0; j < masks_.size(); ++j) {
      BigInt d = -p[cells_];
      for (std::size_t c = 0; c < cells_; ++c)
        if (bit(j, c)) d += p[c];
      if (consider(j + 1, d) && bland) return best;
    }
    for (std::size_t c = 0; c < cells_; ++c)
      if (consider(masks_.size() + 1 + c, BigInt(-p[c])) && bland) return best;
    return best;
  }

  /// B^{-1} A_j
  std::vector<Rational> column(std::size_t id) const {
    std::vector<Rational> u(rows_, Rational(0));
    const std::size_t k = masks_.size();
    for (std::size_t i = 0; i < rows_; ++i) {
      Rational s = 0;
      if (id == 0) {
        for (std::size_t c = 0; c < cells_; ++c) s += binv_[i][c];
      } else if (id <= k) {
        for (std::size_t c = 0; c < cells_; ++c)
          if (bit(id - 1, c)) s -= binv_[i][c];
        s += binv_[i][cells_];
      } else {
        s = binv_[i][id - k - 1];
      }
      u[i] = s;
    }
    return u;
  }

  void pivot(std::size_t r, std::size_t id, const std::vector<Rational>& u) {
    const Rational ur = u[r];
    for (auto& v : binv_[r]) v /= ur;
    xb_[r] /= ur;
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i == r || u[i] == 0) continue;
      const Rational f = u[i];
      for (std::size_t j = 0; j < rows_; ++j)
        if (binv_[r][j] != 0) binv_[i][j] -= f * binv_[r][j];
      xb_[i] -= f * xb_[r];
    }
    basis_[r] = id;
  }

  std::size_t cells_;
  std::vector<std::uint64_t> masks_;
  std::size_t rows_;
  std::vector<std::size_t> basis_;
  std::vector<std::vector<Rational>> binv_;
  std::vector<Rational> xb_;
};

}  // namespace detail

/// Number of joint deterministic strategies: dim^(prod d_y) * prod_y d_y^dim,
/// saturating at cap + 1.
inline std::int64_t joint_strategy_count(const Scenario& sc, std::int64_t cap) {
  long double count = std::pow(static_cast<long double>(sc.dim()),
                               static_cast<long double>(sc.num_inputs()));
  for (int d : sc.outcome_profile()) count *= std::pow(static_cast<long double>(d), sc.dim());
  return count > static_cast<long double>(cap) ? cap + 1 : static_cast<std::int64_t>(count);
}

/// Worst-case success probability with shared randomness, solved exactly as a
/// linear program over mixtures of deterministic strategies.
inline MixedStrategyValue lp_worst_shared(const Scenario& sc, std::int64_t guard = 20'000) {
  if (joint_strategy_count(sc, guard) > guard)
    throw Error(ErrorKind::kTooLarge, "joint strategy count exceeds " + std::to_string(guard));
  const std::int64_t L = sc.num_inputs();
  const std::size_t cells = static_cast<std::size_t>(L) * static_cast<std::size_t>(sc.n());
  require(cells <= 64, ErrorKind::kTooLarge, "more than 64 (x, y) cells");

  std::int64_t encodings = 1;
  for (std::int64_t x = 0; x < L; ++x) encodings *= sc.dim();
  std::int64_t decodings = 1;
  for (int d : sc.outcome_profile())
    for (int m = 0; m < sc.dim(); ++m) decodings *= d;

  // Strategies with identical correctness patterns are interchangeable; keep
  // the first one in enumeration order.
  std::vector<std::uint64_t> masks;
  std::vector<std::pair<std::int64_t, std::int64_t>> representative;
  std::unordered_map<std::uint64_t, std::size_t> seen;
  for (std::int64_t e = 0; e < encodings; ++e)
    for (std::int64_t dcode = 0; dcode < decodings; ++dcode) {
      const auto s = detail::strategy_at(sc, e, dcode);
      std::uint64_t mask = 0;
      for (std::int64_t x = 0; x < L; ++x) {
        const int m = s.encode[static_cast<std::size_t>(x)];
        for (int y = 0; y < sc.n(); ++y)
          if (s.decode[static_cast<std::size_t>(y)][static_cast<std::size_t>(m)] == sc.digit(x, y))
            mask |= std::uint64_t{1} << (static_cast<std::size_t>(x) * static_cast<std::size_t>(sc.n()) +
                                         static_cast<std::size_t>(y));
      }
      if (seen.emplace(mask, masks.size()).second) {
        masks.push_back(mask);
        representative.emplace_back(e, dcode);
      }
    }

  // A column whose correct cells are a subset of another column's never helps.
  {
    std::vector<std::size_t> order(masks.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return std::popcount(masks[a]) > std::popcount(masks[b]);
    });
    std::vector<std::size_t> kept;
    for (std::size_t i : order) {
      bool dominated = false;
      for (std::size_t j : kept)
        if ((masks[i] & ~masks[j]) == 0) {
          dominated = true;
          break;
        }
      if (!dominated) kept.push_back(i);
    }
    std::sort(kept.begin(), kept.end());
    std::vector<std::uint64_t> m2;
    std::vector<std::pair<std::int64_t, std::int64_t>> r2;
    for (std::size_t i : kept) {
      m2.push_back(masks[i]);
      r2.push_back(representative[i]);
    }
    masks = std::move(m2);
    representative = std::move(r2);
  }

  detail::WorstCaseLp lp(cells, masks);
  const auto sol = lp.solve();

  MixedStrategyValue out;
  out.value = sol.value;
  out.distinct_columns = masks.size();
  out.pivots = sol.pivots;
  out.dual_residual = std::max(0.0, to_double(lp.max_reduced_cost()));

  Rational total = 0;
  std::vector<Rational> achieved(cells, Rational(0));
  for (const auto& [col, w] : sol.weights) {
    out.weights.emplace_back(
        detail::strategy_at(sc, representative[col].first, representative[col].second), w);
    total += w;
    for (std::size_t c = 0; c < cells; ++c)
      if ((masks[col] >> c) & 1U) achieved[c] += w;
  }
  Rational violation = abs(total - 1);
  for (const auto& a : achieved) violation = std::max(violation, Rational(sol.value - a));
  out.primal_residual = to_double(violation);
  return out;
}

}  // namespace qrac
