#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qrac/config.hpp"
#include "qrac/eigen.hpp"
#include "qrac/error.hpp"
#include "qrac/matrix.hpp"
#include "qrac/operators.hpp"

namespace qrac {

inline constexpr std::size_t kMaxParentOutcomes = 4096;

namespace detail {

inline std::size_t product_size(const std::vector<int>& profile, std::size_t cap) {
  std::size_t k = 1;
  for (int d : profile) {
    require(d >= 1, ErrorKind::kInvalidArgument, "outcome counts must be positive");
    if (k > cap / static_cast<std::size_t>(d)) return cap + 1;
    k *= static_cast<std::size_t>(d);
  }
  return k;
}

/// Slot y of tuple index kappa (first slot most significant).
inline int tuple_slot(std::size_t kappa, const std::vector<int>& profile, std::size_t y) {
  std::size_t stride = 1;
  for (std::size_t z = profile.size(); z-- > y + 1;) stride *= static_cast<std::size_t>(profile[z]);
  return static_cast<int>((kappa / stride) % static_cast<std::size_t>(profile[y]));
}

inline std::vector<std::vector<int>> tuple_table(const std::vector<int>& profile, std::size_t count) {
  std::vector<std::vector<int>> t(count, std::vector<int>(profile.size()));
  for (std::size_t k = 0; k < count; ++k)
    for (std::size_t y = 0; y < profile.size(); ++y) t[k][y] = tuple_slot(k, profile, y);
  return t;
}

/// max_k max(0, -lambda_min(G_k))
inline double psd_violation(const std::vector<Matrix>& g) {
  double v = 0.0;
  for (const auto& m : g) v = std::max(v, -min_eigenvalue(m));
  return v;
}

}  // namespace detail

/// Joint observable with one effect per outcome tuple (b_1, ..., b_n).
class ParentPovm {
 public:
  ParentPovm() = default;
  ParentPovm(std::vector<int> outcome_profile, std::vector<Matrix> effects,
             const ToleranceConfig& tol = default_tolerances())
      : profile_(std::move(outcome_profile)), effects_(std::move(effects)) {
    require(!profile_.empty(), ErrorKind::kShapeMismatch, "parent needs at least one slot");
    const std::size_t k = detail::product_size(profile_, kMaxParentOutcomes);
    require(k <= kMaxParentOutcomes, ErrorKind::kTooLarge, "parent outcome count exceeds 4096");
    require(effects_.size() == k, ErrorKind::kShapeMismatch,
            "parent effect count must equal prod d_y");
    const std::size_t d = effects_.front().dim();
    Matrix sum(d);
    for (std::size_t i = 0; i < k; ++i) {
      require(effects_[i].dim() == d, ErrorKind::kShapeMismatch, "parent effects differ in dimension");
      const double dev = effects_[i].hermiticity_deviation();
      if (dev > tol.hermiticity)
        throw Error(ErrorKind::kNonHermitian, "parent effect deviation " + std::to_string(dev));
      effects_[i] = effects_[i].hermitian_part();
      const double lo = min_eigenvalue(effects_[i]);
      if (lo < -tol.psd) throw NotPositiveError(i, lo);
      sum += effects_[i];
    }
    const double dev = (sum - Matrix::identity(d)).max_abs();
    if (dev > tol.completeness) throw IncompleteSumError(dev);
  }

  std::size_t dim() const noexcept { return effects_.empty() ? 0 : effects_.front().dim(); }
  std::size_t size() const noexcept { return effects_.size(); }
  const std::vector<int>& outcome_profile() const noexcept { return profile_; }
  const std::vector<Matrix>& effects() const noexcept { return effects_; }
  const Matrix& effect(std::size_t kappa) const { return effects_.at(kappa); }
  int slot(std::size_t kappa, std::size_t y) const { return detail::tuple_slot(kappa, profile_, y); }

 private:
  std::vector<int> profile_;
  std::vector<Matrix> effects_;
};

/// P_y(b | kappa): one row-stochastic table per measurement.
struct PostProcessing {
  std::vector<std::vector<std::vector<double>>> p;  // p[y][kappa][b]

  void validate(std::size_t parent_outcomes, const ToleranceConfig& tol = default_tolerances()) const {
    for (const auto& table : p) {
      require(table.size() == parent_outcomes, ErrorKind::kShapeMismatch,
              "post-processing rows must match parent outcomes");
      for (const auto& row : table) {
        require(!row.empty(), ErrorKind::kShapeMismatch, "empty post-processing row");
        double s = 0.0;
        for (double v : row) {
          require(v >= 0.0, ErrorKind::kRangeViolation, "negative post-processing entry");
          s += v;
        }
        require(std::abs(s - 1.0) <= tol.stochastic, ErrorKind::kRangeViolation,
                "post-processing row does not sum to one");
      }
    }
  }

  /// P_y(b | kappa) = [kappa_y = b]
  static PostProcessing deterministic(const std::vector<int>& profile) {
    const std::size_t k = detail::product_size(profile, kMaxParentOutcomes);
    PostProcessing post;
    for (std::size_t y = 0; y < profile.size(); ++y) {
      auto& table = post.p.emplace_back(k, std::vector<double>(static_cast<std::size_t>(profile[y]), 0.0));
      for (std::size_t kappa = 0; kappa < k; ++kappa)
        table[kappa][static_cast<std::size_t>(detail::tuple_slot(kappa, profile, y))] = 1.0;
    }
    return post;
  }
};

/// Effects of measurement y obtained by summing the parent over every other slot.
inline Povm marginalize(const ParentPovm& parent, std::size_t y,
                        const ToleranceConfig& tol = default_tolerances()) {
  if (y >= parent.outcome_profile().size())
    throw Error(ErrorKind::kIndexOutOfRange, "marginal index " + std::to_string(y));
  std::vector<Matrix> effects(static_cast<std::size_t>(parent.outcome_profile()[y]), Matrix(parent.dim()));
  for (std::size_t k = 0; k < parent.size(); ++k)
    effects[static_cast<std::size_t>(parent.slot(k, y))] += parent.effect(k);
  return validate_povm(effects, tol);
}

/// M_{b|y} = sum_kappa P_y(b | kappa) G_kappa
inline MeasurementSet induce(const ParentPovm& parent, const PostProcessing& post,
                             const ToleranceConfig& tol = default_tolerances()) {
  require(!post.p.empty(), ErrorKind::kShapeMismatch, "post-processing has no measurements");
  post.validate(parent.size(), tol);
  std::vector<std::vector<Matrix>> sets;
  for (const auto& table : post.p) {
    const std::size_t outcomes = table.front().size();
    auto& effects = sets.emplace_back(outcomes, Matrix(parent.dim()));
    for (std::size_t k = 0; k < parent.size(); ++k) {
      require(table[k].size() == outcomes, ErrorKind::kShapeMismatch, "ragged post-processing table");
      for (std::size_t b = 0; b < outcomes; ++b)
        if (table[k][b] != 0.0) effects[b].add_scaled(parent.effect(k), table[k][b]);
    }
  }
  return MeasurementSet::from_matrices(sets, tol);
}

/// Largest operator-norm deviation between the parent's marginals and ms.
inline double marginal_residual(const std::vector<Matrix>& parent, const std::vector<int>& profile,
                                const MeasurementSet& ms) {
  double r = 0.0;
  for (std::size_t y = 0; y < profile.size(); ++y) {
    std::vector<Matrix> marg(static_cast<std::size_t>(profile[y]), Matrix(ms.dim()));
    for (std::size_t k = 0; k < parent.size(); ++k)
      marg[static_cast<std::size_t>(detail::tuple_slot(k, profile, y))] += parent[k];
    for (std::size_t b = 0; b < marg.size(); ++b)
      r = std::max(r, operator_norm((marg[b] - ms.effect(y, b)).hermitian_part()));
  }
  return r;
}

inline double certificate_residual(const ParentPovm& parent, const MeasurementSet& ms) {
  require(parent.outcome_profile() == ms.outcome_profile() && parent.dim() == ms.dim(),
          ErrorKind::kShapeMismatch, "certificate does not match measurement set");
  return std::max(marginal_residual(parent.effects(), parent.outcome_profile(), ms),
                  detail::psd_violation(parent.effects()));
}

enum class CompatibilityStatus { kCompatible, kIncompatible, kIndeterminate };

inline std::string_view to_string(CompatibilityStatus s) {
  switch (s) {
    case CompatibilityStatus::kCompatible: return "COMPATIBLE";
    case CompatibilityStatus::kIncompatible: return "INCOMPATIBLE";
    default: return "INDETERMINATE";
  }
}

/// Summary of the witness that justified an INCOMPATIBLE verdict.
struct WitnessReference {
  double s_quantum = 0.0;
  double s_classical = 0.0;
  double margin = 0.0;
  std::string method;
};

struct CompatibilityVerdict {
  CompatibilityStatus status = CompatibilityStatus::kIndeterminate;
  double residual = 0.0;
  std::optional<ParentPovm> certificate;
  std::optional<WitnessReference> witness;
  std::size_t iterations = 0;
  bool iteration_cap_reached = false;
  std::vector<double> residual_history;  // per iteration, Frobenius marginal gap of the PSD iterate
};

struct FeasibilitySettings {
  std::size_t max_iterations = 20000;
  double tolerance = 1e-7;
  bool record_history = true;
};

namespace detail {

/// Orthogonal projection onto {G : marginals of G equal the target effects},
/// applied entrywise. The constraint matrix A (rows = (y, b), columns = kappa)
/// is the same for every entry, so (A A^T)^+ is computed once.
class MarginalProjector {
 public:
  MarginalProjector(std::vector<int> profile, const MeasurementSet& ms)
      : profile_(std::move(profile)), dim_(ms.dim()) {
    k_ = product_size(profile_, kMaxParentOutcomes);
    tuples_ = tuple_table(profile_, k_);
    offset_.assign(profile_.size(), 0);
    for (std::size_t y = 1; y < profile_.size(); ++y)
      offset_[y] = offset_[y - 1] + static_cast<std::size_t>(profile_[y - 1]);
    rows_ = offset_.back() + static_cast<std::size_t>(profile_.back());

    // (A A^T)_{(y,b),(z,c)} = #{kappa : kappa_y = b, kappa_z = c}
    Matrix gram(rows_);
    for (std::size_t k = 0; k < k_; ++k)
      for (std::size_t y = 0; y < profile_.size(); ++y)
        for (std::size_t z = 0; z < profile_.size(); ++z)
          gram(row(y, tuples_[k][y]), row(z, tuples_[k][z])) += 1.0;
    const auto e = eigh(gram);
    const double cutoff = 1e-9 * std::max(1.0, e.values.back());
    const Matrix pinv = e.reconstruct([&](double w) { return w > cutoff ? 1.0 / w : 0.0; });
    pinv_.assign(rows_ * rows_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < rows_; ++j) pinv_[i * rows_ + j] = pinv(i, j).real();

    target_.assign(rows_, Matrix(dim_));
    for (std::size_t y = 0; y < profile_.size(); ++y)
      for (int b = 0; b < profile_[y]; ++b) target_[row(y, b)] = ms.effect(y, static_cast<std::size_t>(b));
  }

  std::size_t outcomes() const noexcept { return k_; }

  void project(std::vector<Matrix>& g) const {
    std::vector<cplx> v(rows_), w(rows_);
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = i; j < dim_; ++j) {
        for (std::size_t r = 0; r < rows_; ++r) v[r] = -target_[r](i, j);
        for (std::size_t k = 0; k < k_; ++k) {
          const cplx gk = g[k](i, j);
          for (std::size_t y = 0; y < profile_.size(); ++y) v[row(y, tuples_[k][y])] += gk;
        }
        for (std::size_t r = 0; r < rows_; ++r) {
          cplx s{0.0, 0.0};
          for (std::size_t c = 0; c < rows_; ++c) s += pinv_[r * rows_ + c] * v[c];
          w[r] = s;
        }
        for (std::size_t k = 0; k < k_; ++k) {
          cplx s{0.0, 0.0};
          for (std::size_t y = 0; y < profile_.size(); ++y) s += w[row(y, tuples_[k][y])];
          g[k](i, j) -= s;
          if (i != j) g[k](j, i) = std::conj(g[k](i, j));
          else g[k](i, i) = g[k](i, i).real();
        }
      }
  }

  /// max over (y, b) of the Frobenius norm of the marginal gap.
  double frobenius_gap(const std::vector<Matrix>& g) const {
    std::vector<Matrix> marg(rows_, Matrix(dim_));
    for (std::size_t k = 0; k < k_; ++k)
      for (std::size_t y = 0; y < profile_.size(); ++y) marg[row(y, tuples_[k][y])] += g[k];
    double r = 0.0;
    for (std::size_t q = 0; q < rows_; ++q) r = std::max(r, (marg[q] - target_[q]).frobenius_norm());
    return r;
  }

 private:
  std::size_t row(std::size_t y, int b) const { return offset_[y] + static_cast<std::size_t>(b); }

  std::vector<int> profile_;
  std::size_t dim_;
  std::size_t k_ = 0;
  std::size_t rows_ = 0;
  std::vector<std::vector<int>> tuples_;
  std::vector<std::size_t> offset_;
  std::vector<double> pinv_;
  std::vector<Matrix> target_;
};

/// S^{-1/2} G_k S^{-1/2} with S = sum_k G_k; restores exact completeness.
inline std::vector<Matrix> normalize_sum(const std::vector<Matrix>& g) {
  Matrix s(g.front().dim());
  for (const auto& m : g) s += m;
  const Matrix w = inverse_sqrt(s.hermitian_part());
  std::vector<Matrix> out;
  out.reserve(g.size());
  for (const auto& m : g) out.push_back((w * m * w).hermitian_part());
  return out;
}

}  // namespace detail

/// Searches for a parent POVM reproducing every measurement of ms as a
/// marginal. Dykstra's alternating projections between the PSD cones and the
/// affine marginal constraints; COMPATIBLE only with a validated certificate.
inline CompatibilityVerdict feasibility_check(const MeasurementSet& ms,
                                              const FeasibilitySettings& cfg = {},
                                              const ToleranceConfig& tol = default_tolerances()) {
  const auto profile = ms.outcome_profile();
  if (detail::product_size(profile, kMaxParentOutcomes) > kMaxParentOutcomes)
    throw Error(ErrorKind::kTooLarge, "parent outcome count exceeds 4096");
  const detail::MarginalProjector affine(profile, ms);
  const std::size_t k = affine.outcomes();
  const std::size_t d = ms.dim();

  std::vector<Matrix> x(k, Matrix(d)), y(k, Matrix(d)), p(k, Matrix(d));
  affine.project(x);

  CompatibilityVerdict verdict;
  double last_gap = 0.0;
  for (std::size_t it = 1; it <= cfg.max_iterations; ++it) {
    for (std::size_t i = 0; i < k; ++i) {
      Matrix z = x[i] + p[i];
      y[i] = psd_projection(z);
      p[i] = z - y[i];
    }
    const double gap = affine.frobenius_gap(y);
    last_gap = gap;
    if (cfg.record_history) verdict.residual_history.push_back(gap);
    verdict.iterations = it;

    if (gap <= 0.25 * cfg.tolerance) {
      const auto polished = detail::normalize_sum(y);
      const double r = std::max(marginal_residual(polished, profile, ms), detail::psd_violation(polished));
      if (r <= cfg.tolerance) {
        verdict.status = CompatibilityStatus::kCompatible;
        verdict.residual = r;
        ToleranceConfig relaxed = tol;
        relaxed.psd = std::max(tol.psd, 2.0 * cfg.tolerance);
        verdict.certificate.emplace(profile, polished, relaxed);
        return verdict;
      }
    }
    x = y;
    affine.project(x);
  }
  verdict.iteration_cap_reached = true;
  verdict.status = CompatibilityStatus::kIndeterminate;
  verdict.residual = std::max(last_gap, marginal_residual(y, profile, ms));
  return verdict;
}

/// Projection onto the set of K-outcome POVMs {G_k >= 0, sum G_k = I}:
/// Dykstra between the affine completeness shift and PSD clipping, finished
/// with an exact normalization.
inline std::vector<Matrix> project_to_povm(std::vector<Matrix> g, std::size_t iterations = 500) {
  const std::size_t k = g.size();
  const std::size_t d = g.front().dim();
  const Matrix id = Matrix::identity(d);
  std::vector<Matrix> p(k, Matrix(d));
  auto sum = [&] {
    Matrix s(d);
    for (const auto& m : g) s += m;
    return s;
  };
  for (std::size_t it = 0; it < iterations; ++it) {
    const Matrix delta = (id - sum()) * (1.0 / static_cast<double>(k));
    for (std::size_t i = 0; i < k; ++i) {
      Matrix z = g[i] + delta + p[i];
      g[i] = psd_projection(z);
      p[i] = z - g[i];
    }
    if ((sum() - id).max_abs() < 1e-11) break;
  }
  // Keep the final normalization well defined if the clipped sum is singular.
  if (min_eigenvalue(sum().hermitian_part()) < 1e-8)
    for (auto& m : g) m.add_scaled(id, 1e-6);
  return detail::normalize_sum(g);
}

enum class PostProcessingKind { kRandom, kDeterministic };

struct CompatibleSample {
  MeasurementSet measurements;
  ParentPovm parent;
  PostProcessing post;
};

namespace detail {

inline Matrix random_gaussian_matrix(std::size_t d, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix a(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      a(i, j) = cplx{re, im};
    }
  return a;
}

}  // namespace detail

/// Random parent with K = prod d_y full-rank effects, normalized to sum to I.
inline ParentPovm random_parent(std::size_t dim, const std::vector<int>& profile, std::mt19937_64& rng) {
  const std::size_t k = detail::product_size(profile, kMaxParentOutcomes);
  require(k <= kMaxParentOutcomes, ErrorKind::kTooLarge, "parent outcome count exceeds 4096");
  std::vector<Matrix> h;
  h.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    const Matrix a = detail::random_gaussian_matrix(dim, rng);
    h.push_back((a * a.adjoint()).hermitian_part());
  }
  return ParentPovm(profile, detail::normalize_sum(h));
}

/// Random compatible measurement set together with its construction.
inline CompatibleSample random_compatible_set(std::size_t dim, const std::vector<int>& profile,
                                              std::uint64_t seed,
                                              PostProcessingKind kind = PostProcessingKind::kRandom) {
  std::mt19937_64 rng(seed);
  ParentPovm parent = random_parent(dim, profile, rng);
  PostProcessing post;
  if (kind == PostProcessingKind::kDeterministic) {
    post = PostProcessing::deterministic(profile);
  } else {
    std::exponential_distribution<double> expo(1.0);
    for (int d : profile) {
      auto& table = post.p.emplace_back(parent.size(), std::vector<double>(static_cast<std::size_t>(d)));
      for (auto& row : table) {
        double s = 0.0;
        for (auto& v : row) s += (v = expo(rng));
        for (auto& v : row) v /= s;
      }
    }
  }
  MeasurementSet ms = induce(parent, post);
  return CompatibleSample{std::move(ms), std::move(parent), std::move(post)};
}

}  // namespace qrac
