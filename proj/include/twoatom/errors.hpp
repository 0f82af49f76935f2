#pragma once

#include <stdexcept>
#include <string>

namespace twoatom {

/// Invalid or inconsistent model configuration (bad key, bad value, violated invariant).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The requested truncation exceeds the configured dimension limit.
class DimensionOverflow : public std::runtime_error {
 public:
  DimensionOverflow(const std::string& what, long long requested, long long limit)
      : std::runtime_error(what), requested_(requested), limit_(limit) {}
  long long requested() const noexcept { return requested_; }
  long long limit() const noexcept { return limit_; }

 private:
  long long requested_;
  long long limit_;
};

/// A bare-state tuple lies outside the truncated basis.
class NotInBasis : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Iterative or quadrature routine failed to reach its tolerance.
/// Carries the residual (or achieved error) at the point of failure.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Argument outside the mathematical domain of an operation (e.g. Im z > 0).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace twoatom
