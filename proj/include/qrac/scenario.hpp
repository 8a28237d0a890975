#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "qrac/config.hpp"
#include "qrac/error.hpp"

namespace qrac {

/// Random-access-code scenario: n input dits with alphabets d_y, a message of
/// dimension `dim`. Input strings are indexed in mixed radix with x_1 most
/// significant, so index order is lexicographic order.
class Scenario {
 public:
  static constexpr std::int64_t kMaxInputs = 10'000'000;

  Scenario(std::vector<int> outcome_profile, int dim)
      : outcomes_(std::move(outcome_profile)), dim_(dim) {
    require(!outcomes_.empty(), ErrorKind::kInvalidArgument, "scenario needs n >= 1");
    require(dim_ >= 2, ErrorKind::kInvalidArgument, "message dimension must be >= 2");
    inputs_ = 1;
    for (int d : outcomes_) {
      require(d >= 2, ErrorKind::kInvalidArgument, "every outcome count must be >= 2");
      require(inputs_ <= kMaxInputs / d, ErrorKind::kTooLarge,
              "input-string count exceeds " + std::to_string(kMaxInputs));
      inputs_ *= d;
    }
    strides_.assign(outcomes_.size(), 1);
    for (std::size_t y = outcomes_.size() - 1; y > 0; --y)
      strides_[y - 1] = strides_[y] * outcomes_[y];
  }

  /// n copies of the same outcome count.
  static Scenario uniform(int n, int outcomes, int dim) {
    require(n >= 1, ErrorKind::kInvalidArgument, "scenario needs n >= 1");
    return Scenario(std::vector<int>(static_cast<std::size_t>(n), outcomes), dim);
  }

  int n() const noexcept { return static_cast<int>(outcomes_.size()); }
  int dim() const noexcept { return dim_; }
  const std::vector<int>& outcome_profile() const noexcept { return outcomes_; }
  int outcomes(int y) const { return outcomes_.at(static_cast<std::size_t>(y)); }
  std::int64_t num_inputs() const noexcept { return inputs_; }
  int min_outcomes() const { return *std::min_element(outcomes_.begin(), outcomes_.end()); }
  int max_outcomes() const { return *std::max_element(outcomes_.begin(), outcomes_.end()); }
  bool equal_outcomes() const { return min_outcomes() == max_outcomes(); }

  /// y-th dit of input string x.
  int digit(std::int64_t x, int y) const {
    return static_cast<int>((x / strides_[static_cast<std::size_t>(y)]) %
                            outcomes_[static_cast<std::size_t>(y)]);
  }

  std::vector<int> digits(std::int64_t x) const {
    std::vector<int> out(outcomes_.size());
    for (int y = 0; y < n(); ++y) out[static_cast<std::size_t>(y)] = digit(x, y);
    return out;
  }

  std::int64_t index(std::span<const int> digits) const {
    require(digits.size() == outcomes_.size(), ErrorKind::kRangeViolation, "input length != n");
    std::int64_t x = 0;
    for (std::size_t y = 0; y < digits.size(); ++y) {
      require(digits[y] >= 0 && digits[y] < outcomes_[y], ErrorKind::kRangeViolation,
              "input dit out of range");
      x += digits[y] * strides_[y];
    }
    return x;
  }

  friend bool operator==(const Scenario& a, const Scenario& b) {
    return a.outcomes_ == b.outcomes_ && a.dim_ == b.dim_;
  }

 private:
  std::vector<int> outcomes_;
  int dim_;
  std::int64_t inputs_ = 1;
  std::vector<std::int64_t> strides_;
};

/// Deterministic classical strategy: encode[x] is the message for input x,
/// decode[y][m] is the guess for dit y on message m.
struct DeterministicStrategy {
  std::vector<int> encode;
  std::vector<std::vector<int>> decode;

  void validate(const Scenario& sc) const {
    require(static_cast<std::int64_t>(encode.size()) == sc.num_inputs(),
            ErrorKind::kRangeViolation, "encoding is not defined on every input");
    for (int m : encode)
      require(m >= 0 && m < sc.dim(), ErrorKind::kRangeViolation, "message out of range");
    require(static_cast<int>(decode.size()) == sc.n(), ErrorKind::kRangeViolation,
            "decoding needs one map per measurement");
    for (int y = 0; y < sc.n(); ++y) {
      const auto& row = decode[static_cast<std::size_t>(y)];
      require(static_cast<int>(row.size()) == sc.dim(), ErrorKind::kRangeViolation,
              "decoding is not defined on every message");
      for (int b : row)
        require(b >= 0 && b < sc.outcomes(y), ErrorKind::kRangeViolation, "guess out of range");
    }
  }

  friend bool operator==(const DeterministicStrategy&, const DeterministicStrategy&) = default;
};

/// Conditional probabilities p(b | x, y), stored with stride max_y d_y.
class ProbabilityTable {
 public:
  explicit ProbabilityTable(Scenario sc)
      : sc_(std::move(sc)),
        stride_(static_cast<std::size_t>(sc_.max_outcomes())),
        p_(static_cast<std::size_t>(sc_.num_inputs()) * static_cast<std::size_t>(sc_.n()) * stride_,
           0.0) {}

  const Scenario& scenario() const noexcept { return sc_; }

  double& at(std::int64_t x, int y, int b) { return p_[offset(x, y, b)]; }
  double at(std::int64_t x, int y, int b) const { return p_[offset(x, y, b)]; }

  /// Checks entries lie in [0,1] and rows sum to one.
  void validate(const ToleranceConfig& tol = default_tolerances()) const {
    for (std::int64_t x = 0; x < sc_.num_inputs(); ++x)
      for (int y = 0; y < sc_.n(); ++y) {
        double s = 0.0;
        for (int b = 0; b < sc_.outcomes(y); ++b) {
          const double v = at(x, y, b);
          require(v >= -tol.normalization && v <= 1.0 + tol.normalization,
                  ErrorKind::kRangeViolation, "probability outside [0,1]");
          s += v;
        }
        require(std::abs(s - 1.0) <= tol.normalization, ErrorKind::kRangeViolation,
                "probability row does not sum to one");
      }
  }

 private:
  std::size_t offset(std::int64_t x, int y, int b) const {
    return (static_cast<std::size_t>(x) * static_cast<std::size_t>(sc_.n()) +
            static_cast<std::size_t>(y)) *
               stride_ +
           static_cast<std::size_t>(b);
  }

  Scenario sc_;
  std::size_t stride_;
  std::vector<double> p_;
};

enum class Objective { kAverage, kWorst };

inline std::string_view to_string(Objective o) {
  return o == Objective::kAverage ? "avg" : "worst";
}

inline ProbabilityTable evaluate_strategy(const DeterministicStrategy& s, const Scenario& sc) {
  s.validate(sc);
  ProbabilityTable t(sc);
  for (std::int64_t x = 0; x < sc.num_inputs(); ++x) {
    const int m = s.encode[static_cast<std::size_t>(x)];
    for (int y = 0; y < sc.n(); ++y)
      t.at(x, y, s.decode[static_cast<std::size_t>(y)][static_cast<std::size_t>(m)]) = 1.0;
  }
  return t;
}

/// AVERAGE: mean over (x, y) of p(b_y = x_y | x, y). WORST: minimum over (x, y).
inline double score(const ProbabilityTable& t, Objective objective) {
  const Scenario& sc = t.scenario();
  double sum = 0.0;
  double worst = std::numeric_limits<double>::infinity();
  for (std::int64_t x = 0; x < sc.num_inputs(); ++x)
    for (int y = 0; y < sc.n(); ++y) {
      const double p = t.at(x, y, sc.digit(x, y));
      sum += p;
      worst = std::min(worst, p);
    }
  if (objective == Objective::kWorst) return worst;
  return sum / (static_cast<double>(sc.n()) * static_cast<double>(sc.num_inputs()));
}

/// General linear figure of merit sum_{x,y,b} c(x,y,b) p(b|x,y).
template <class Coefficients>
double linear_score(const ProbabilityTable& t, Coefficients&& c) {
  const Scenario& sc = t.scenario();
  double sum = 0.0;
  for (std::int64_t x = 0; x < sc.num_inputs(); ++x)
    for (int y = 0; y < sc.n(); ++y)
      for (int b = 0; b < sc.outcomes(y); ++b) sum += c(x, y, b) * t.at(x, y, b);
  return sum;
}

}  // namespace qrac
