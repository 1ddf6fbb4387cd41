#pragma once

// Shared domain types for rank-based particle systems.
//
// Ranks and particle names are 0-based throughout the C++ API: drift(0) is
// the drift of the bottom-ranked particle, rates()[0] is the rate of the
// lowest gap.

#include <cstddef>
#include <span>
#include <vector>

#include "rankbm/error.hpp"
#include "rankbm/rng.hpp"

namespace rankbm {

/// Rank-based drift coefficients: an explicit finite prefix followed by a
/// constant tail value applied to every rank beyond it.
class DriftSpec {
 public:
  DriftSpec() = default;
  DriftSpec(std::vector<double> prefix, double tail);

  /// Unit drift on the bottom particle, all others driftless.
  static DriftSpec atlas();
  static DriftSpec driftless();
  /// Drift -1 on the bottom particle, all others driftless.
  static DriftSpec inverted_atlas();

  const std::vector<double>& prefix() const noexcept { return prefix_; }
  double tail() const noexcept { return tail_; }

  /// Drift of the rank-th particle (0-based rank).
  double drift(std::size_t rank) const noexcept {
    return rank < prefix_.size() ? prefix_[rank] : tail_;
  }

  /// g_1 + ... + g_count, exact for the prefix part plus a single product
  /// for the tail part.
  double partial_sum(std::size_t count) const noexcept;

  /// First `count` drift values as an explicit vector.
  std::vector<double> truncate(std::size_t count) const;

  bool operator==(const DriftSpec&) const = default;

 private:
  std::vector<double> prefix_;
  double tail_ = 0.0;
};

/// Averages of the first k drifts for k = 1..count.
std::vector<double> mean_drifts(const DriftSpec& spec, std::size_t count);

/// Partial sums g_1 + ... + g_k for k = 1..count.
std::vector<double> partial_sums(const DriftSpec& spec, std::size_t count);

/// inf over n >= 1 of the average of the first n drifts. Exact: beyond the
/// prefix the running average moves monotonically towards the tail value.
double inf_mean_drift(const DriftSpec& spec);

/// Product of independent exponential laws, one rate per gap.
class GapLaw {
 public:
  GapLaw() = default;
  explicit GapLaw(std::vector<double> rates);

  std::size_t size() const noexcept { return rates_.size(); }
  const std::vector<double>& rates() const noexcept { return rates_; }
  double rate(std::size_t k) const { return rates_.at(k); }
  double mean(std::size_t k) const { return 1.0 / rates_.at(k); }

  bool operator==(const GapLaw&) const = default;

 private:
  std::vector<double> rates_;
};

/// Named particle positions at one instant.
class ParticleState {
 public:
  ParticleState(double time, std::vector<double> positions);

  double time() const noexcept { return time_; }
  const std::vector<double>& positions() const noexcept { return positions_; }
  std::size_t size() const noexcept { return positions_.size(); }

 private:
  double time_;
  std::vector<double> positions_;
};

/// The m^2-particle finite system whose stationary gap law agrees with the
/// infinite-system law on the first m gaps. Built by stationary::approximant.
struct ApproximantSpec {
  DriftSpec base;
  double a = 0.0;
  std::size_t m = 0;
  /// Full drift vector, length m^2.
  std::vector<double> drifts;
  /// Common drift of ranks m+1..m^2.
  double tail_drift = 0.0;
  /// Stationary gap rates, length m^2 - 1.
  std::vector<double> rates;

  std::size_t particles() const noexcept { return m * m; }
  GapLaw law() const { return GapLaw(rates); }
};

/// Dense row-major matrix of doubles.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  std::span<double> row(std::size_t i) { return {data.data() + i * cols, cols}; }
  std::span<const double> row(std::size_t i) const { return {data.data() + i * cols, cols}; }
  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

  /// Copy of column j.
  std::vector<double> column(std::size_t j) const;
};

}  // namespace rankbm
