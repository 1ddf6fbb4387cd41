#pragma once

// Statistical verdicts for simulated and sampled gap configurations.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rankbm/core_types.hpp"

namespace rankbm::stats {

/// Euler-Mascheroni constant; E log X = -gamma for X ~ Exp(1).
inline constexpr double kEulerGamma = 0.5772156649015329;

struct ObservableSummary {
  std::string name;
  std::size_t count = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double standard_error = 0.0;
};

/// Sample mean, unbiased variance and SE = sqrt(variance / count).
ObservableSummary summarize(std::string name, std::span<const double> samples);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// sup |F_n(x) - (1 - exp(-rate x))|. Any nonempty sample.
double ks_statistic_exponential(std::span<const double> samples, double rate);

/// P(K > t) for the limiting Kolmogorov distribution.
double kolmogorov_survival(double t);

/// One-sample KS test against Exp(rate), asymptotic p-value. Needs at
/// least 10 samples, all positive.
KsResult ks_exponential(std::span<const double> samples, double rate);

struct GapFit {
  std::size_t gap = 0;  // 1-based gap index
  double rate = 0.0;
  KsResult ks;
};

/// Aggregates of one Monte Carlo ensemble.
struct EnsembleSummary {
  std::vector<ObservableSummary> observables;
  std::vector<GapFit> gap_fits;

  const ObservableSummary& at(const std::string& name) const;
};

/// #{i : positions_i <= x} for nondecreasing positions.
std::size_t particle_count(std::span<const double> positions, double x);

/// max_n |xi_n - Lambda_n| with Lambda_n = sum_{k<n} 1/lambda_k.
double position_deviation(std::span<const double> positions, const GapLaw& law);

/// sqrt(sum_k lambda_k^-2): standard deviation of the last position.
double deviation_scale(const GapLaw& law);

/// Least-squares slope of log N(x) against x on `points` equally spaced
/// x in [x_lo, x_hi]. positions must start at 0.
double growth_slope(std::span<const double> positions, double x_lo, double x_hi,
                    std::size_t points = 41);

/// Per-gap terms log(lambda_k Z_k) with lambda_k = 2(g_1 + ... + g_k) + k a.
/// Under the law with parameter a each lambda_k Z_k is Exp(1).
std::vector<double> singularity_terms(std::span<const double> gaps, const DriftSpec& spec,
                                      double a);

/// S_n: mean of singularity_terms. Converges to -gamma under the law with
/// parameter a, and to -gamma + log(a/a') under the law with parameter a'.
double singularity_statistic(std::span<const double> gaps, const DriftSpec& spec, double a);

/// One line of a verdict report.
struct TestVerdict {
  std::string name;
  double statistic = 0.0;
  double threshold = 0.0;
  std::uint64_t seed = 0;
  bool pass = false;
};

}  // namespace rankbm::stats
