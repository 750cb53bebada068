#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ffdist {

enum class ErrorKind {
  kNotPrime,
  kUnsupportedModulus,
  kNotOrthogonal,
  kTooLarge,
  kTooSmall,
  kParseError,
  kRangeError,
  kDuplicatePoint,
  kFieldMismatch,
  kBudgetExceeded,
  kTransformCheckFailed,
  kNotOnAxis,
  kDegenerateLine,
  kSamePoint,
  kMultisetNotAllowed,
  kAssertionFailed,
  kWrongResidueClass,
  kEpsilonOutOfRange,
  kTooFewPoints,
  kConfigError,
  kIoError,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kNotPrime: return "NotPrime";
    case ErrorKind::kUnsupportedModulus: return "UnsupportedModulus";
    case ErrorKind::kNotOrthogonal: return "NotOrthogonal";
    case ErrorKind::kTooLarge: return "TooLarge";
    case ErrorKind::kTooSmall: return "TooSmall";
    case ErrorKind::kParseError: return "ParseError";
    case ErrorKind::kRangeError: return "RangeError";
    case ErrorKind::kDuplicatePoint: return "DuplicatePoint";
    case ErrorKind::kFieldMismatch: return "FieldMismatch";
    case ErrorKind::kBudgetExceeded: return "BudgetExceeded";
    case ErrorKind::kTransformCheckFailed: return "TransformCheckFailed";
    case ErrorKind::kNotOnAxis: return "NotOnAxis";
    case ErrorKind::kDegenerateLine: return "DegenerateLine";
    case ErrorKind::kSamePoint: return "SamePoint";
    case ErrorKind::kMultisetNotAllowed: return "MultisetNotAllowed";
    case ErrorKind::kAssertionFailed: return "AssertionFailed";
    case ErrorKind::kWrongResidueClass: return "WrongResidueClass";
    case ErrorKind::kEpsilonOutOfRange: return "EpsilonOutOfRange";
    case ErrorKind::kTooFewPoints: return "TooFewPoints";
    case ErrorKind::kConfigError: return "ConfigError";
    case ErrorKind::kIoError: return "IoError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-checkable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind) {}

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace ffdist
