#include "rankbm/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rankbm/io.hpp"
#include "rankbm/numeric.hpp"
#include "rankbm/stationary_laws.hpp"
#include "rankbm/trace.hpp"

namespace rankbm::stats {

ObservableSummary summarize(std::string name, std::span<const double> samples) {
  ObservableSummary out;
  out.name = std::move(name);
  out.count = samples.size();
  if (samples.empty()) return out;
  const double n = static_cast<double>(samples.size());
  out.mean = compensated_sum(samples) / n;
  if (samples.size() > 1) {
    CompensatedSum ss;
    for (double x : samples) ss.add((x - out.mean) * (x - out.mean));
    out.variance = ss.value() / (n - 1.0);
  }
  out.standard_error = std::sqrt(out.variance / n);
  return out;
}

double ks_statistic_exponential(std::span<const double> samples, double rate) {
  if (samples.empty()) throw ValidationError("KS statistic needs at least one sample");
  if (!(rate > 0.0)) throw ValidationError("KS reference rate must be positive");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double cdf = -std::expm1(-rate * sorted[i]);
    const double above = static_cast<double>(i + 1) / n - cdf;
    const double below = cdf - static_cast<double>(i) / n;
    d = std::max({d, above, below});
  }
  return d;
}

double kolmogorov_survival(double t) {
  if (!(t > 0.0)) return 1.0;
  constexpr int kTerms = 100;
  if (t < 1.18) {
    // Theta-function form; converges fast for small t.
    const double pi2 = std::numbers::pi * std::numbers::pi;
    double cdf = 0.0;
    for (int j = 1; j <= kTerms; ++j) {
      const double odd = 2.0 * j - 1.0;
      cdf += std::exp(-odd * odd * pi2 / (8.0 * t * t));
    }
    cdf *= std::sqrt(2.0 * std::numbers::pi) / t;
    return std::clamp(1.0 - cdf, 0.0, 1.0);
  }
  double sum = 0.0;
  for (int j = 1; j <= kTerms; ++j) {
    const double term = std::exp(-2.0 * j * j * t * t);
    sum += (j % 2 == 1) ? term : -term;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_exponential(std::span<const double> samples, double rate) {
  trace::mark(trace::Op::kKsExponential);
  if (samples.size() < 10) throw ValidationError("KS test needs at least 10 samples");
  for (double x : samples) {
    if (!(x > 0.0)) throw ValidationError("KS test against Exp needs positive samples");
  }
  KsResult out;
  out.statistic = ks_statistic_exponential(samples, rate);
  out.p_value = kolmogorov_survival(std::sqrt(static_cast<double>(samples.size())) * out.statistic);
  return out;
}

const ObservableSummary& EnsembleSummary::at(const std::string& name) const {
  for (const auto& o : observables) {
    if (o.name == name) return o;
  }
  throw ValidationError("no observable named " + name + " in ensemble summary");
}

std::size_t particle_count(std::span<const double> positions, double x) {
  trace::mark(trace::Op::kParticleCount);
  return static_cast<std::size_t>(std::upper_bound(positions.begin(), positions.end(), x) -
                                  positions.begin());
}

double position_deviation(std::span<const double> positions, const GapLaw& law) {
  trace::mark(trace::Op::kPositionDeviation);
  if (positions.size() > law.size() + 1) {
    throw ValidationError("more positions than the law's truncation depth supports");
  }
  double mean_path = 0.0;
  double worst = 0.0;
  for (std::size_t n = 0; n < positions.size(); ++n) {
    if (n > 0) mean_path += 1.0 / law.rates()[n - 1];
    worst = std::max(worst, std::abs(positions[n] - mean_path));
  }
  return worst;
}

double deviation_scale(const GapLaw& law) {
  CompensatedSum acc;
  for (double r : law.rates()) acc.add(1.0 / (r * r));
  return std::sqrt(acc.value());
}

double growth_slope(std::span<const double> positions, double x_lo, double x_hi,
                    std::size_t points) {
  if (points < 2 || !(x_hi > x_lo)) throw ValidationError("growth slope needs a nondegenerate x grid");
  if (positions.empty()) throw ValidationError("growth slope needs positions");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t j = 0; j < points; ++j) {
    const double x = x_lo + (x_hi - x_lo) * static_cast<double>(j) / static_cast<double>(points - 1);
    const auto count = particle_count(positions, x);
    if (count == 0) throw ValidationError("growth slope grid starts below the first particle");
    const double y = std::log(static_cast<double>(count));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double p = static_cast<double>(points);
  return (p * sxy - sx * sy) / (p * sxx - sx * sx);
}

std::vector<double> singularity_terms(std::span<const double> gaps, const DriftSpec& spec,
                                      double a) {
  if (gaps.empty()) throw ValidationError("singularity statistic needs at least one gap");
  const GapLaw law = stationary::infinite_rates(spec, a, gaps.size());
  std::vector<double> terms(gaps.size());
  for (std::size_t k = 0; k < gaps.size(); ++k) {
    if (!(gaps[k] > 0.0)) {
      throw ValidationError("gap " + std::to_string(k + 1) + " is not positive (" +
                            io::format_double(gaps[k]) + "); log undefined");
    }
    terms[k] = std::log(gaps[k] * law.rates()[k]);
  }
  return terms;
}

double singularity_statistic(std::span<const double> gaps, const DriftSpec& spec, double a) {
  trace::mark(trace::Op::kSingularityStatistic);
  const auto terms = singularity_terms(gaps, spec, a);
  return compensated_sum(terms) / static_cast<double>(terms.size());
}

}  // namespace rankbm::stats
