#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "qrac/error.hpp"
#include "qrac/matrix.hpp"
#include "qrac/operators.hpp"

namespace qrac {

/// Three rank-one projective qubit measurements with Bloch axes
///   (0, 0, 1),  (sqrt(1-a^2), 0, a),  (g sqrt(1-b^2), +-sqrt(1-b^2) sqrt(1-g^2), b).
struct TripleParams {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  int sign = 1;

  void validate() const {
    for (double v : {alpha, beta, gamma})
      require(v >= -1.0 && v <= 1.0, ErrorKind::kRangeViolation, "triple parameter outside [-1, 1]");
    require(sign == 1 || sign == -1, ErrorKind::kRangeViolation, "sign must be +1 or -1");
  }
};

struct XiVector {
  std::array<double, 4> xi{};
  double sum() const { return xi[0] + xi[1] + xi[2] + xi[3]; }
  double sum_of_squares() const { return xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2] + xi[3] * xi[3]; }
};

inline std::array<std::array<double, 3>, 3> triple_axes(const TripleParams& p) {
  p.validate();
  const double sa = std::sqrt(1.0 - p.alpha * p.alpha);
  const double sb = std::sqrt(1.0 - p.beta * p.beta);
  const double sg = std::sqrt(1.0 - p.gamma * p.gamma);
  return {{{0.0, 0.0, 1.0}, {sa, 0.0, p.alpha}, {p.gamma * sb, p.sign * sb * sg, p.beta}}};
}

inline MeasurementSet build_triple(const TripleParams& p) {
  std::vector<std::vector<Matrix>> effects;
  for (const auto& a : triple_axes(p))
    effects.push_back({pauli::bloch_projector(a[0], a[1], a[2]), pauli::bloch_projector(a[0], a[1], a[2], -1)});
  return MeasurementSet::from_matrices(effects);
}

/// xi_i = |s_1 + e s_2 + e' s_3| for the sign patterns (e, e') = (+,-), (-,+),
/// (-,-), (+,+); squared, these are 3 + 2e a + 2e' b + 2ee'(ab + g c) with
/// c = sqrt(1-a^2) sqrt(1-b^2). Taking norms of the summed axes avoids the
/// cancellation the expanded square suffers where some xi vanishes. The
/// quantum value is S = (12 + sum xi) / 24; neither depends on the sign.
inline std::pair<XiVector, double> xi_and_value(const TripleParams& p) {
  const auto ax = triple_axes(p);
  constexpr std::array<std::array<int, 2>, 4> pattern{{{1, -1}, {-1, 1}, {-1, -1}, {1, 1}}};
  XiVector x;
  for (std::size_t i = 0; i < 4; ++i) {
    double s = 0.0;
    for (std::size_t c = 0; c < 3; ++c) {
      const double v = ax[0][c] + pattern[i][0] * ax[1][c] + pattern[i][1] * ax[2][c];
      s += v * v;
    }
    x.xi[i] = std::sqrt(s);
  }
  return {x, (12.0 + x.sum()) / 24.0};
}

inline double sum_xi(double alpha, double beta, double gamma) {
  return xi_and_value(TripleParams{alpha, beta, gamma, 1}).first.sum();
}

/// Triples invisible to the witness although incompatible.
inline constexpr std::array<std::array<double, 3>, 4> kExceptionalPoints{{
    {0.5, 0.5, -1.0}, {-0.5, -0.5, -1.0}, {0.5, -0.5, 1.0}, {-0.5, 0.5, 1.0}}};

using Point3 = std::array<double, 3>;

struct NelderMeadSettings {
  double initial_edge = 0.05;
  double diameter_tolerance = 1e-9;
  std::size_t max_evaluations = 2000;
};

struct NelderMeadResult {
  Point3 point{};
  double value = 0.0;
  std::size_t evaluations = 0;
};

/// Nelder-Mead on a box; trial points are clamped to the box.
inline NelderMeadResult nelder_mead(const std::function<double(const Point3&)>& f, Point3 start,
                                    const Point3& lo, const Point3& hi, const NelderMeadSettings& cfg = {}) {
  auto clamp = [&](Point3 p) {
    for (std::size_t i = 0; i < 3; ++i) p[i] = std::clamp(p[i], lo[i], hi[i]);
    return p;
  };
  NelderMeadResult out;
  auto eval = [&](const Point3& p) {
    ++out.evaluations;
    return f(p);
  };
  std::array<Point3, 4> s;
  std::array<double, 4> v{};
  s[0] = clamp(start);
  for (std::size_t i = 0; i < 3; ++i) {
    Point3 p = s[0];
    // Step inward when the start sits on the upper face.
    p[i] += (p[i] + cfg.initial_edge <= hi[i]) ? cfg.initial_edge : -cfg.initial_edge;
    s[i + 1] = clamp(p);
  }
  for (std::size_t i = 0; i < 4; ++i) v[i] = eval(s[i]);

  auto diameter = [&] {
    double d = 0.0;
    for (std::size_t i = 1; i < 4; ++i)
      for (std::size_t j = 0; j < 3; ++j) d = std::max(d, std::abs(s[i][j] - s[0][j]));
    return d;
  };
  auto combine = [](const Point3& a, const Point3& b, double t) {
    Point3 r;
    for (std::size_t j = 0; j < 3; ++j) r[j] = a[j] + t * (b[j] - a[j]);
    return r;
  };

  while (out.evaluations < cfg.max_evaluations) {
    std::array<std::size_t, 4> idx{0, 1, 2, 3};
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::array<Point3, 4> s2;
    std::array<double, 4> v2{};
    for (std::size_t i = 0; i < 4; ++i) s2[i] = s[idx[i]], v2[i] = v[idx[i]];
    s = s2;
    v = v2;
    if (diameter() < cfg.diameter_tolerance) break;

    Point3 centroid{};
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) centroid[j] += s[i][j] / 3.0;
    const Point3 xr = clamp(combine(centroid, s[3], -1.0));
    const double fr = eval(xr);
    if (fr < v[0]) {
      const Point3 xe = clamp(combine(centroid, s[3], -2.0));
      const double fe = eval(xe);
      if (fe < fr) s[3] = xe, v[3] = fe;
      else s[3] = xr, v[3] = fr;
    } else if (fr < v[2]) {
      s[3] = xr, v[3] = fr;
    } else {
      const bool outside = fr < v[3];
      const Point3 xc = clamp(combine(centroid, outside ? xr : s[3], 0.5));
      const double fc = eval(xc);
      if (fc < (outside ? fr : v[3])) {
        s[3] = xc, v[3] = fc;
      } else {
        for (std::size_t i = 1; i < 4; ++i) {
          s[i] = combine(s[0], s[i], 0.5);
          v[i] = eval(s[i]);
        }
      }
    }
  }
  const auto best = static_cast<std::size_t>(std::min_element(v.begin(), v.end()) - v.begin());
  out.point = s[best];
  out.value = v[best];
  return out;
}

struct MinSumXiSettings {
  std::size_t resolution = 101;  // grid points per axis
  std::size_t seeds = 20;        // grid basins refined
  double argmin_tolerance = 1e-6;
  double dedupe_distance = 1e-3;
  Point3 lower{-1.0, -1.0, -1.0};
  Point3 upper{1.0, 1.0, 1.0};
  NelderMeadSettings nelder_mead;
};

struct MinSumXiResult {
  double minimum = 0.0;
  std::vector<Point3> argmins;
  std::size_t grid_minima = 0;  // clusters of connected equal-valued local minima
};

namespace detail {

inline double distance(const Point3& a, const Point3& b) {
  return std::sqrt((a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1]) + (a[2] - b[2]) * (a[2] - b[2]));
}

inline double grid_coordinate(double lo, double hi, std::size_t i, std::size_t n) {
  if (i + 1 == n) return hi;
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
}

}  // namespace detail

/// Global minimum of sum xi over a box: grid search, then Nelder-Mead from the
/// best grid basins. A basin is a connected set of equal-valued grid local
/// minima, so lines of minima contribute one seed each instead of crowding
/// out isolated minima.
inline MinSumXiResult min_sum_xi(const MinSumXiSettings& cfg = {}) {
  const std::size_t n = cfg.resolution;
  require(n >= 21, ErrorKind::kInvalidArgument, "grid resolution must be >= 21");
  for (std::size_t i = 0; i < 3; ++i)
    require(cfg.lower[i] >= -1.0 && cfg.upper[i] <= 1.0 && cfg.lower[i] < cfg.upper[i],
            ErrorKind::kRangeViolation, "search box must lie in [-1, 1]^3");
  auto coord = [&](std::size_t axis, std::size_t i) {
    return detail::grid_coordinate(cfg.lower[axis], cfg.upper[axis], i, n);
  };
  auto at = [n](std::size_t i, std::size_t j, std::size_t k) { return (i * n + j) * n + k; };

  std::vector<double> f(n * n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) f[at(i, j, k)] = sum_xi(coord(0, i), coord(1, j), coord(2, k));

  auto for_neighbors = [&](std::size_t i, std::size_t j, std::size_t k, auto&& visit) {
    for (int di = -1; di <= 1; ++di)
      for (int dj = -1; dj <= 1; ++dj)
        for (int dk = -1; dk <= 1; ++dk) {
          if (!di && !dj && !dk) continue;
          const auto a = static_cast<std::int64_t>(i) + di, b = static_cast<std::int64_t>(j) + dj,
                     c = static_cast<std::int64_t>(k) + dk;
          const auto nn = static_cast<std::int64_t>(n);
          if (a < 0 || b < 0 || c < 0 || a >= nn || b >= nn || c >= nn) continue;
          visit(static_cast<std::size_t>(a), static_cast<std::size_t>(b), static_cast<std::size_t>(c));
        }
  };

  std::vector<char> is_min(f.size(), 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        const double v = f[at(i, j, k)];
        bool ok = true;
        for_neighbors(i, j, k, [&](std::size_t a, std::size_t b, std::size_t c) {
          if (f[at(a, b, c)] < v) ok = false;
        });
        is_min[at(i, j, k)] = ok;
      }

  // Flood-fill clusters of equal-valued local minima; the first cell in grid
  // order represents the cluster.
  struct Basin {
    double value;
    std::size_t cell;
  };
  std::vector<Basin> basins;
  std::vector<char> seen(f.size(), 0);
  for (std::size_t cell = 0; cell < f.size(); ++cell) {
    if (!is_min[cell] || seen[cell]) continue;
    basins.push_back({f[cell], cell});
    std::vector<std::size_t> stack{cell};
    seen[cell] = 1;
    while (!stack.empty()) {
      const std::size_t c = stack.back();
      stack.pop_back();
      const std::size_t i = c / (n * n), j = (c / n) % n, k = c % n;
      for_neighbors(i, j, k, [&](std::size_t a, std::size_t b, std::size_t cc) {
        const std::size_t nb = at(a, b, cc);
        if (is_min[nb] && !seen[nb] && std::abs(f[nb] - f[c]) <= 1e-12) {
          seen[nb] = 1;
          stack.push_back(nb);
        }
      });
    }
  }
  std::stable_sort(basins.begin(), basins.end(), [](const Basin& a, const Basin& b) { return a.value < b.value; });
  if (basins.size() > cfg.seeds) basins.resize(cfg.seeds);

  const auto objective = [](const Point3& p) { return sum_xi(p[0], p[1], p[2]); };
  std::vector<NelderMeadResult> refined;
  for (const auto& b : basins) {
    const std::size_t i = b.cell / (n * n), j = (b.cell / n) % n, k = b.cell % n;
    refined.push_back(nelder_mead(objective, {coord(0, i), coord(1, j), coord(2, k)}, cfg.lower, cfg.upper,
                                  cfg.nelder_mead));
  }

  MinSumXiResult out;
  out.grid_minima = basins.size();
  out.minimum = std::numeric_limits<double>::infinity();
  for (const auto& r : refined) out.minimum = std::min(out.minimum, r.value);
  for (const auto& r : refined) {
    if (r.value > out.minimum + cfg.argmin_tolerance) continue;
    const bool dup = std::any_of(out.argmins.begin(), out.argmins.end(), [&](const Point3& q) {
      return detail::distance(q, r.point) < cfg.dedupe_distance;
    });
    if (!dup) out.argmins.push_back(r.point);
  }
  return out;
}

enum class TripleClass { kCompatibleBoundary, kExceptional, kWitnessed, kNoWitness };

inline std::string_view to_string(TripleClass c) {
  switch (c) {
    case TripleClass::kCompatibleBoundary: return "COMPATIBLE_BOUNDARY";
    case TripleClass::kExceptional: return "EXCEPTIONAL";
    case TripleClass::kWitnessed: return "WITNESSED";
    default: return "NO_WITNESS";
  }
}

struct ClassifyTolerances {
  double value = 1e-6;     // on S
  double parameter = 1e-3; // Euclidean distance in (alpha, beta[, gamma])
};

/// Distance from (|alpha|, |beta|) to the corner (1, 1).
inline double boundary_distance(const TripleParams& p) {
  return std::hypot(1.0 - std::abs(p.alpha), 1.0 - std::abs(p.beta));
}

inline double exceptional_distance(const TripleParams& p) {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& e : kExceptionalPoints) d = std::min(d, detail::distance({p.alpha, p.beta, p.gamma}, e));
  return d;
}

/// First matching class in the order boundary, exceptional, witnessed.
inline TripleClass classify(const TripleParams& p, double s, const ClassifyTolerances& tol = {}) {
  if (boundary_distance(p) <= tol.parameter) return TripleClass::kCompatibleBoundary;
  if (exceptional_distance(p) <= tol.parameter) return TripleClass::kExceptional;
  if (s > 0.75 + tol.value) return TripleClass::kWitnessed;
  return TripleClass::kNoWitness;
}

struct TripleRecord {
  TripleParams params;
  XiVector xi;
  double value = 0.0;
  TripleClass classification = TripleClass::kNoWitness;
};

/// Every (alpha, beta, gamma) on an N^3 grid over [-1, 1]^3, both signs;
/// alpha outermost, sign innermost (+1 before -1).
inline std::vector<TripleRecord> scan_and_classify(std::size_t resolution, const ClassifyTolerances& tol = {}) {
  require(resolution >= 21, ErrorKind::kInvalidArgument, "grid resolution must be >= 21");
  std::vector<TripleRecord> out;
  out.reserve(resolution * resolution * resolution * 2);
  auto c = [&](std::size_t i) { return detail::grid_coordinate(-1.0, 1.0, i, resolution); };
  for (std::size_t i = 0; i < resolution; ++i)
    for (std::size_t j = 0; j < resolution; ++j)
      for (std::size_t k = 0; k < resolution; ++k)
        for (int sign : {1, -1}) {
          TripleRecord r;
          r.params = TripleParams{c(i), c(j), c(k), sign};
          std::tie(r.xi, r.value) = xi_and_value(r.params);
          r.classification = classify(r.params, r.value, tol);
          out.push_back(r);
        }
  return out;
}

}  // namespace qrac
