#include "rankbm/stationary_laws.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "rankbm/io.hpp"
#include "rankbm/numeric.hpp"
#include "rankbm/parallel.hpp"
#include "rankbm/trace.hpp"

namespace rankbm::stationary {
namespace {

// 2(S_k - k mean_N) for k = 1..N-1, with compensated partial sums.
std::vector<double> finite_rate_candidates(std::span<const double> drifts) {
  const std::size_t n = drifts.size();
  // 2k(mean_k - mean_N) = 2(N S_k - k S_N) / N: one rounding at the end.
  const double total = compensated_sum(drifts);
  const double size = static_cast<double>(n);
  std::vector<double> out(n - 1);
  CompensatedSum partial;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    partial.add(drifts[k]);
    out[k] = 2.0 * (size * partial.value() - static_cast<double>(k + 1) * total) / size;
  }
  return out;
}

void require_particles(std::size_t n) {
  if (n < 2) throw ValidationError("a finite system needs at least 2 particles");
}

std::string bound_message(double a, double bound) {
  return "stationarity parameter a = " + io::format_double(a) +
         " violates a > -2 inf mean drift, i.e. a > " + io::format_double(bound);
}

}  // namespace

bool stability_check(std::span<const double> drifts) {
  trace::mark(trace::Op::kStabilityCheck);
  require_particles(drifts.size());
  const auto candidates = finite_rate_candidates(drifts);
  return std::all_of(candidates.begin(), candidates.end(), [](double v) { return v > 0.0; });
}

bool stability_check(const DriftSpec& spec, std::size_t particles) {
  require_particles(particles);
  return stability_check(spec.truncate(particles));
}

GapLaw finite_stationary_rates(std::span<const double> drifts) {
  trace::mark(trace::Op::kFiniteStationaryRates);
  require_particles(drifts.size());
  auto rates = finite_rate_candidates(drifts);
  for (std::size_t k = 0; k < rates.size(); ++k) {
    if (!(rates[k] > 0.0)) {
      throw StabilityError("stability condition fails at k = " + std::to_string(k + 1) +
                               ": mean of the first k drifts does not exceed the mean of all " +
                               std::to_string(drifts.size()),
                           k + 1);
    }
  }
  return GapLaw(std::move(rates));
}

GapLaw finite_stationary_rates(const DriftSpec& spec, std::size_t particles) {
  require_particles(particles);
  return finite_stationary_rates(spec.truncate(particles));
}

double a_lower_bound(const DriftSpec& spec) { return -2.0 * inf_mean_drift(spec); }

bool degenerate_law_admissible(const DriftSpec& spec) {
  if (inf_mean_drift(spec) != 0.0) return false;
  double sum = 0.0;
  for (double g : spec.prefix()) {
    sum += g;
    if (!(sum > 0.0)) return false;
  }
  // inf == 0 with positive prefix sums forces a zero tail, so the partial
  // sums stay constant beyond the prefix.
  return sum > 0.0 && spec.tail() == 0.0;
}

GapLaw infinite_rates(const DriftSpec& spec, double a, std::size_t depth, bool allow_degenerate) {
  trace::mark(trace::Op::kInfiniteRates);
  if (!std::isfinite(a)) throw ValidationError("stationarity parameter a must be finite");
  if (depth == 0) throw ValidationError("truncation depth must be >= 1");
  const double bound = a_lower_bound(spec);
  if (!(a > bound)) {
    const bool degenerate_ok = allow_degenerate && a == 0.0 && degenerate_law_admissible(spec);
    if (!degenerate_ok) throw BoundError(bound_message(a, bound), bound);
  }
  const auto sums = partial_sums(spec, depth);
  std::vector<double> rates(depth);
  for (std::size_t k = 0; k < depth; ++k) {
    rates[k] = 2.0 * sums[k] + static_cast<double>(k + 1) * a;
  }
  return GapLaw(std::move(rates));
}

double approximant_tail_drift(const DriftSpec& spec, double a, std::size_t m) {
  if (m < 2) throw ValidationError("approximant needs m >= 2");
  const double mm = static_cast<double>(m);
  const double denom = mm * mm - mm;
  return -(mm * mm) / (2.0 * denom) * a - spec.partial_sum(m) / denom;
}

std::vector<double> approximant_closed_form_rates(const DriftSpec& spec, double a, std::size_t m) {
  if (m < 2) throw ValidationError("approximant needs m >= 2");
  const std::size_t total = m * m;
  const auto sums = partial_sums(spec, m);
  std::vector<double> rates(total - 1);
  for (std::size_t k = 0; k < m; ++k) {
    rates[k] = 2.0 * sums[k] + static_cast<double>(k + 1) * a;
  }
  const double mean_m = sums[m - 1] / static_cast<double>(m);
  const double scale = 2.0 * mean_m + a;
  for (std::size_t k = m; k + 1 < total; ++k) {
    rates[k] = static_cast<double>(total - (k + 1)) / static_cast<double>(m - 1) * scale;
  }
  return rates;
}

ApproximantSpec approximant(const DriftSpec& spec, double a, std::size_t m) {
  trace::mark(trace::Op::kApproximant);
  if (m < 2) throw ValidationError("approximant needs m >= 2");
  if (!std::isfinite(a)) throw ValidationError("stationarity parameter a must be finite");
  const double bound = a_lower_bound(spec);
  if (!(a > bound)) throw BoundError(bound_message(a, bound), bound);

  ApproximantSpec out;
  out.base = spec;
  out.a = a;
  out.m = m;
  out.tail_drift = approximant_tail_drift(spec, a, m);
  out.drifts = spec.truncate(m);
  out.drifts.resize(m * m, out.tail_drift);
  out.rates = approximant_closed_form_rates(spec, a, m);

  for (std::size_t k = 0; k < out.rates.size(); ++k) {
    if (!(out.rates[k] > 0.0)) {
      throw BoundError("approximant rate " + std::to_string(k + 1) + " is not positive; " +
                           bound_message(a, bound),
                       bound);
    }
  }

  // Closed forms must agree with the finite-system formula on the drift
  // vector, up to rounding in the partial sums.
  const auto direct = finite_rate_candidates(out.drifts);
  double scale = 1.0;
  for (double g : out.drifts) scale += std::abs(g);
  for (std::size_t k = 0; k < direct.size(); ++k) {
    if (std::abs(direct[k] - out.rates[k]) > 1e-12 * scale) {
      throw std::logic_error("approximant closed-form rate " + std::to_string(k + 1) +
                             " disagrees with direct evaluation");
    }
  }
  return out;
}

std::vector<double> sample_gap_row(const GapLaw& law, RandomStream& stream) {
  std::vector<double> row(law.size());
  for (std::size_t k = 0; k < law.size(); ++k) row[k] = stream.exponential(law.rates()[k]);
  return row;
}

Matrix sample_gaps(const GapLaw& law, std::size_t count, RngSpec rng) {
  trace::mark(trace::Op::kSampleGaps);
  if (count == 0) throw ValidationError("sample count must be >= 1");
  Matrix out(count, law.size());
  parallel_for(count, [&](std::size_t r) {
    RandomStream stream(rng, static_cast<std::uint32_t>(r));
    auto dst = out.row(r);
    for (std::size_t k = 0; k < law.size(); ++k) dst[k] = stream.exponential(law.rates()[k]);
  });
  return out;
}

std::vector<double> positions_from_gaps(std::span<const double> gaps) {
  trace::mark(trace::Op::kPositionsFromGaps);
  std::vector<double> xi(gaps.size() + 1, 0.0);
  for (std::size_t k = 0; k < gaps.size(); ++k) {
    if (!(gaps[k] >= 0.0) || !std::isfinite(gaps[k])) {
      throw ValidationError("gap " + std::to_string(k + 1) + " must be finite and >= 0");
    }
    xi[k + 1] = xi[k] + gaps[k];
  }
  return xi;
}

void write_law_csv(const GapLaw& law, std::ostream& out) {
  out << "k,lambda_k,mean_k\n";
  for (std::size_t k = 0; k < law.size(); ++k) {
    out << (k + 1) << ',' << io::format_double(law.rates()[k]) << ','
        << io::format_double(1.0 / law.rates()[k]) << '\n';
  }
}

}  // namespace rankbm::stationary
