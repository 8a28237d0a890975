#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

#include "qrac/compatibility.hpp"
#include "qrac/eigen.hpp"
#include "qrac/error.hpp"
#include "qrac/matrix.hpp"
#include "qrac/operators.hpp"
#include "qrac/quantum.hpp"
#include "qrac/scenario.hpp"

namespace qrac {

enum class Constraint { kFree, kCompatible };

inline std::string_view to_string(Constraint c) { return c == Constraint::kFree ? "free" : "compatible"; }

struct SeesawSettings {
  std::size_t max_rounds = 500;
  double tau_initial = 0.1;   // soft-min temperature for the worst-case weights
  double tau_decay = 0.99;
  double tau_floor = 0.003;
  double weight_floor = 1e-6;
  double gradient_scale = 5.0;  // measurement step = gradient_scale * tau
  double state_scale = 2.0;     // worst-case state step = min(1, state_scale * tau)
  double stop_change = 1e-9;
  /// Starting measurements for the first restart (FREE only).
  std::optional<MeasurementSet> initial_measurements;
};

struct RestartRecord {
  std::uint64_t seed = 0;
  double value = 0.0;
  std::size_t rounds = 0;
  bool converged = false;
};

/// Best strategy over all restarts. Values are lower bounds from a local
/// search, never certified optima.
struct SeesawResult {
  static constexpr std::string_view kLabel = "HEURISTIC";
  double best_value = -std::numeric_limits<double>::infinity();
  std::uint64_t best_seed = 0;
  StateEnsemble ensemble;
  MeasurementSet measurements;
  std::optional<ParentPovm> parent;
  std::vector<RestartRecord> restarts;
};

namespace detail {

class SeesawRun {
 public:
  SeesawRun(const Scenario& sc, Objective objective, Constraint constraint, const SeesawSettings& cfg)
      : sc_(sc), objective_(objective), constraint_(constraint), cfg_(cfg),
        d_(static_cast<std::size_t>(sc.dim())),
        n_(static_cast<std::size_t>(sc.n())),
        l_(static_cast<std::size_t>(sc.num_inputs())),
        digits_(l_) {
    for (std::size_t x = 0; x < l_; ++x) digits_[x] = sc.digits(static_cast<std::int64_t>(x));
    if (constraint_ == Constraint::kCompatible) {
      const auto k = product_size(sc.outcome_profile(), kMaxParentOutcomes);
      require(k <= kMaxParentOutcomes, ErrorKind::kTooLarge, "parent outcome count exceeds 4096");
      tuples_ = tuple_table(sc.outcome_profile(), k);
    }
  }

  RestartRecord run(std::uint64_t seed, const std::optional<MeasurementSet>& init) {
    std::mt19937_64 rng(seed);
    init_state(rng, init);

    RestartRecord rec{seed, -std::numeric_limits<double>::infinity(), 0, false};
    double tau = cfg_.tau_initial;
    double prev = std::numeric_limits<double>::quiet_NaN();
    const bool annealed = uses_tau();
    for (std::size_t round = 0; round < cfg_.max_rounds; ++round) {
      state_step(tau);
      measurement_step(tau);
      const double v = objective_value();
      if (v > rec.value) {
        rec.value = v;
        best_rho_ = rho_;
        best_m_ = m_;
        best_g_ = g_;
      }
      rec.rounds = round + 1;
      tau = std::max(tau * cfg_.tau_decay, cfg_.tau_floor);
      if (std::abs(v - prev) < cfg_.stop_change && (!annealed || tau == cfg_.tau_floor)) {
        rec.converged = true;
        break;
      }
      prev = v;
    }
    return rec;
  }

  StateEnsemble best_ensemble() const { return StateEnsemble(best_rho_); }
  MeasurementSet best_measurements() const { return MeasurementSet::from_matrices(best_m_); }
  std::optional<ParentPovm> best_parent() const {
    if (constraint_ != Constraint::kCompatible) return std::nullopt;
    return ParentPovm(sc_.outcome_profile(), best_g_);
  }

 private:
  bool uses_tau() const {
    if (objective_ == Objective::kWorst || constraint_ == Constraint::kCompatible) return true;
    return sc_.max_outcomes() > 2;
  }

  void init_state(std::mt19937_64& rng, const std::optional<MeasurementSet>& init) {
    std::normal_distribution<double> normal(0.0, 1.0);
    rho_.clear();
    for (std::size_t x = 0; x < l_; ++x) {
      std::vector<cplx> v(d_);
      for (auto& a : v) {
        const double re = normal(rng);
        const double im = normal(rng);
        a = cplx{re, im};
      }
      rho_.push_back(PureState::normalized(std::move(v)).projector());
    }
    if (constraint_ == Constraint::kCompatible) {
      g_ = random_parent(d_, sc_.outcome_profile(), rng).effects();
      refresh_marginals();
    } else if (init) {
      require_matching(*init, sc_);
      m_ = init->matrices();
    } else {
      m_.clear();
      for (int d : sc_.outcome_profile()) m_.push_back(random_parent(d_, {d}, rng).effects());
    }
  }

  void refresh_marginals() {
    m_.assign(n_, {});
    for (std::size_t y = 0; y < n_; ++y)
      m_[y].assign(static_cast<std::size_t>(sc_.outcome_profile()[y]), Matrix(d_));
    for (std::size_t k = 0; k < g_.size(); ++k)
      for (std::size_t y = 0; y < n_; ++y) m_[y][static_cast<std::size_t>(tuples_[k][y])] += g_[k];
  }

  /// p[x][y] = Tr(rho_x M_{x_y | y})
  std::vector<double> cells() const {
    std::vector<double> p(l_ * n_);
    for (std::size_t x = 0; x < l_; ++x)
      for (std::size_t y = 0; y < n_; ++y)
        p[x * n_ + y] = trace_product_real(rho_[x], m_[y][static_cast<std::size_t>(digits_[x][y])]);
    return p;
  }

  double objective_value() const {
    const auto p = cells();
    if (objective_ == Objective::kWorst) return *std::min_element(p.begin(), p.end());
    double s = 0.0;
    for (double v : p) s += v;
    return s / static_cast<double>(p.size());
  }

  /// Soft-min weights concentrating on the worst cells; uniform for AVERAGE.
  std::vector<double> weights(double tau) const {
    const std::size_t cells_count = l_ * n_;
    if (objective_ == Objective::kAverage)
      return std::vector<double>(cells_count, 1.0 / static_cast<double>(cells_count));
    const auto p = cells();
    const double lo = *std::min_element(p.begin(), p.end());
    std::vector<double> w(cells_count);
    double s = 0.0;
    for (std::size_t c = 0; c < cells_count; ++c) s += (w[c] = std::exp(-(p[c] - lo) / tau));
    double s2 = 0.0;
    for (auto& v : w) s2 += (v = std::max(v / s, cfg_.weight_floor));
    for (auto& v : w) v /= s2;
    return w;
  }

  void state_step(double tau) {
    const auto w = weights(tau);
    const double step = objective_ == Objective::kAverage ? 1.0 : std::min(1.0, cfg_.state_scale * tau);
    for (std::size_t x = 0; x < l_; ++x) {
      Matrix op(d_);
      for (std::size_t y = 0; y < n_; ++y)
        op.add_scaled(m_[y][static_cast<std::size_t>(digits_[x][y])], w[x * n_ + y]);
      const auto e = eigh(op.hermitian_part());
      const Matrix top = Matrix::outer(e.vector(d_ - 1), e.vector(d_ - 1));
      rho_[x] = (rho_[x] * (1.0 - step) + top * step).hermitian_part();
    }
  }

  /// O[y][b] = sum_{x : x_y = b} w[x, y] rho_x, the gradient of the weighted
  /// score with respect to M_{b|y}.
  std::vector<std::vector<Matrix>> score_operators(const std::vector<double>& w) const {
    std::vector<std::vector<Matrix>> o(n_);
    for (std::size_t y = 0; y < n_; ++y) o[y].assign(static_cast<std::size_t>(sc_.outcome_profile()[y]), Matrix(d_));
    for (std::size_t x = 0; x < l_; ++x)
      for (std::size_t y = 0; y < n_; ++y)
        o[y][static_cast<std::size_t>(digits_[x][y])].add_scaled(rho_[x], w[x * n_ + y]);
    return o;
  }

  void measurement_step(double tau) {
    const auto w = weights(tau);
    const auto o = score_operators(w);
    const double eta = cfg_.gradient_scale * tau;
    if (constraint_ == Constraint::kCompatible) {
      for (std::size_t k = 0; k < g_.size(); ++k)
        for (std::size_t y = 0; y < n_; ++y) g_[k].add_scaled(o[y][static_cast<std::size_t>(tuples_[k][y])], eta);
      g_ = project_to_povm(std::move(g_));
      refresh_marginals();
      return;
    }
    for (std::size_t y = 0; y < n_; ++y) {
      if (o[y].size() == 2) {
        // Helstrom: project onto the nonnegative part of O_0 - O_1.
        const auto e = eigh((o[y][0] - o[y][1]).hermitian_part());
        const Matrix p0 = e.reconstruct([](double v) { return v >= 0.0 ? 1.0 : 0.0; });
        m_[y][0] = p0;
        m_[y][1] = Matrix::identity(d_) - p0;
      } else {
        for (std::size_t b = 0; b < o[y].size(); ++b) m_[y][b].add_scaled(o[y][b], eta);
        m_[y] = project_to_povm(std::move(m_[y]));
      }
    }
  }

  const Scenario& sc_;
  Objective objective_;
  Constraint constraint_;
  const SeesawSettings& cfg_;
  std::size_t d_, n_, l_;
  std::vector<std::vector<int>> digits_;
  std::vector<std::vector<int>> tuples_;

  std::vector<Matrix> rho_;
  std::vector<std::vector<Matrix>> m_;
  std::vector<Matrix> g_;
  std::vector<Matrix> best_rho_;
  std::vector<std::vector<Matrix>> best_m_;
  std::vector<Matrix> best_g_;
};

}  // namespace detail

/// Alternating optimization of states and measurements from `restarts`
/// seeded random starting points (restart r uses seed + r).
inline SeesawResult seesaw(const Scenario& sc, Objective objective, Constraint constraint,
                           std::size_t restarts, std::uint64_t seed, const SeesawSettings& cfg = {}) {
  require(restarts >= 1, ErrorKind::kInvalidArgument, "at least one restart is required");
  SeesawResult result;
  detail::SeesawRun runner(sc, objective, constraint, cfg);
  for (std::size_t r = 0; r < restarts; ++r) {
    const std::uint64_t s = seed + r;
    const auto rec = runner.run(s, r == 0 && constraint == Constraint::kFree ? cfg.initial_measurements
                                                                             : std::nullopt);
    result.restarts.push_back(rec);
    if (rec.value > result.best_value || (rec.value == result.best_value && s > result.best_seed)) {
      result.best_value = rec.value;
      result.best_seed = s;
      result.ensemble = runner.best_ensemble();
      result.measurements = runner.best_measurements();
      result.parent = runner.best_parent();
    }
  }
  return result;
}

}  // namespace qrac
