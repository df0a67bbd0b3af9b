#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace taubethe {

enum class ErrorKind {
  InvalidInput,
  DegenerateInput,
  InsufficientTimes,
  NotSymmetric,
  SumRuleViolation,
  DimensionMismatch,
  SizeLimit,
  ZeroState,
  EmptyCoefficientZero,
  NoConvergence,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::DegenerateInput: return "DegenerateInput";
    case ErrorKind::InsufficientTimes: return "InsufficientTimes";
    case ErrorKind::NotSymmetric: return "NotSymmetric";
    case ErrorKind::SumRuleViolation: return "SumRuleViolation";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::SizeLimit: return "SizeLimit";
    case ErrorKind::ZeroState: return "ZeroState";
    case ErrorKind::EmptyCoefficientZero: return "EmptyCoefficientZero";
    case ErrorKind::NoConvergence: return "NoConvergence";
  }
  return "Unknown";
}

/// Exception carrying a machine-readable kind; every library failure throws this.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace taubethe
