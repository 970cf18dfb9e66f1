#pragma once

#include <stdexcept>
#include <string>

namespace covlab {

/// Input outside an operation's documented domain (bad parameter value,
/// zero matrix where a nonzero one is required, ...).
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Requested computation exceeds a hard size cap.
class SizeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An iterative numeric routine ran out of budget before reaching its
/// target accuracy. Carries the iteration count and the error estimate
/// at the point of failure when known.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
  NumericError(const std::string& what, long iterations, double achieved)
      : std::runtime_error(what), iterations(iterations), achieved(achieved) {}

  long iterations = -1;
  double achieved = 0.0;
};

/// Malformed configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Filesystem failure (CLI exit code 4).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace covlab
