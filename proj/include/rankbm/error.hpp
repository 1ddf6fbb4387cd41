#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace rankbm {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on user-supplied input was violated.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// The stability condition mean(g_1..g_k) > mean(g_1..g_N) fails at some k < N.
class StabilityError : public ValidationError {
 public:
  StabilityError(const std::string& what, std::size_t first_violation)
      : ValidationError(what), first_violation_(first_violation) {}

  /// 1-based rank index of the first violating k.
  std::size_t first_violation() const noexcept { return first_violation_; }

 private:
  std::size_t first_violation_;
};

/// The stationarity parameter a is at or below -2 inf_n mean(g_1..g_n).
class BoundError : public ValidationError {
 public:
  BoundError(const std::string& what, double bound)
      : ValidationError(what), bound_(bound) {}

  /// Exclusive lower bound on a.
  double bound() const noexcept { return bound_; }

 private:
  double bound_;
};

/// A trajectory diverged. Carries what is needed to replay it.
class SimulationError : public Error {
 public:
  SimulationError(const std::string& what, std::size_t trajectory,
                  std::uint64_t seed, std::uint64_t stream)
      : Error(what), trajectory_(trajectory), seed_(seed), stream_(stream) {}

  std::size_t trajectory() const noexcept { return trajectory_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

 private:
  std::size_t trajectory_;
  std::uint64_t seed_;
  std::uint64_t stream_;
};

/// Experiment configuration could not be parsed or validated.
class ConfigError : public ValidationError {
 public:
  ConfigError(const std::string& what, int line = -1)
      : ValidationError(line >= 0 ? "line " + std::to_string(line + 1) + ": " + what : what),
        line_(line) {}

  /// 0-based line of the offending node, or -1 when unknown.
  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace rankbm
