#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qrac {

enum class ErrorKind {
  kNonHermitian,
  kNotPositive,
  kIncompleteSum,
  kConvergenceFailure,
  kNotUnitary,
  kRangeViolation,
  kTooLarge,
  kNotApplicable,
  kUnsupportedN,
  kIndexOutOfRange,
  kShapeMismatch,
  kBoundUnavailable,
  kInvalidArgument,
  kParse,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kNonHermitian: return "NonHermitian";
    case ErrorKind::kNotPositive: return "NotPositive";
    case ErrorKind::kIncompleteSum: return "IncompleteSum";
    case ErrorKind::kConvergenceFailure: return "ConvergenceFailure";
    case ErrorKind::kNotUnitary: return "NotUnitary";
    case ErrorKind::kRangeViolation: return "RangeViolation";
    case ErrorKind::kTooLarge: return "TooLarge";
    case ErrorKind::kNotApplicable: return "NotApplicable";
    case ErrorKind::kUnsupportedN: return "UnsupportedN";
    case ErrorKind::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::kShapeMismatch: return "ShapeMismatch";
    case ErrorKind::kBoundUnavailable: return "BoundUnavailable";
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
    case ErrorKind::kParse: return "Parse";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised by POVM validation when an effect has a negative eigenvalue.
class NotPositiveError : public Error {
 public:
  NotPositiveError(std::size_t effect_index, double min_eigenvalue)
      : Error(ErrorKind::kNotPositive,
              "effect " + std::to_string(effect_index) + " has minimum eigenvalue " +
                  std::to_string(min_eigenvalue)),
        effect_index_(effect_index),
        min_eigenvalue_(min_eigenvalue) {}

  std::size_t effect_index() const noexcept { return effect_index_; }
  double min_eigenvalue() const noexcept { return min_eigenvalue_; }

 private:
  std::size_t effect_index_;
  double min_eigenvalue_;
};

/// Raised by POVM validation when the effects do not sum to the identity.
class IncompleteSumError : public Error {
 public:
  explicit IncompleteSumError(double deviation)
      : Error(ErrorKind::kIncompleteSum,
              "effects deviate from identity by " + std::to_string(deviation) + " per entry"),
        deviation_(deviation) {}

  double deviation() const noexcept { return deviation_; }

 private:
  double deviation_;
};

inline void require(bool condition, ErrorKind kind, const std::string& what) {
  if (!condition) throw Error(kind, what);
}

}  // namespace qrac
