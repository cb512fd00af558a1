#pragma once

#include <stdexcept>
#include <string>

namespace rmp {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Index outside the valid range.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Problem too large (or too small) for the requested algorithm.
class SizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Malformed argument that is not a numeric domain problem (ordering, shape).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Requested a two-phase quantity at a temperature (or fugacity) where no
/// first-order transition exists.
class NoTransitionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Iterative solver failed. `diagnostic()` carries the last iterate.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, std::string diagnostic)
      : std::runtime_error(what), diagnostic_(std::move(diagnostic)) {}
  explicit ConvergenceError(const std::string& what)
      : std::runtime_error(what) {}

  const std::string& diagnostic() const noexcept { return diagnostic_; }

 private:
  std::string diagnostic_;
};

}  // namespace rmp
