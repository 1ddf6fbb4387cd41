#pragma once

// Stationary gap laws of rank-based particle systems.
//
// Finite N-particle system with drifts g_1..g_N: the gap process has a
// stationary law iff mean(g_1..g_k) > mean(g_1..g_N) for every k < N, and
// then it is the product of Exp(2k(mean_k - mean_N)).
//
// Infinite system: for every a > -2 inf_n mean(g_1..g_n) the product of
// Exp(2(g_1 + ... + g_k) + k a) is stationary. The m^2-particle approximant
// realises the first m of those rates exactly.

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "rankbm/core_types.hpp"

namespace rankbm::stationary {

/// Truncation depth used for infinite laws when the caller does not choose.
inline constexpr std::size_t kDefaultDepth = 1000;

/// True iff mean(g_1..g_k) > mean(g_1..g_N) for all k < N.
bool stability_check(const DriftSpec& spec, std::size_t particles);
bool stability_check(std::span<const double> drifts);

/// Unique stationary gap law of the finite system. Throws StabilityError
/// naming the first violating k (1-based) when the system is unstable.
GapLaw finite_stationary_rates(const DriftSpec& spec, std::size_t particles);
GapLaw finite_stationary_rates(std::span<const double> drifts);

/// Exclusive lower bound on a: -2 inf_n mean(g_1..g_n).
double a_lower_bound(const DriftSpec& spec);

/// Whether the a = 0 law exists for this spec: inf of the running means is
/// exactly 0 and every partial sum g_1 + ... + g_k is positive. Exact for
/// prefix-plus-tail drifts (beyond the prefix the partial sum is constant).
bool degenerate_law_admissible(const DriftSpec& spec);

/// First `depth` rates of the infinite-system law with parameter a.
/// a must exceed a_lower_bound(spec); with allow_degenerate, a == 0 is also
/// accepted when degenerate_law_admissible(spec) holds.
GapLaw infinite_rates(const DriftSpec& spec, double a, std::size_t depth = kDefaultDepth,
                      bool allow_degenerate = false);

/// The m^2-particle approximating system. Rates are stored in closed form
/// and cross-checked against direct evaluation of the finite-system formula
/// on the approximant's drift vector.
ApproximantSpec approximant(const DriftSpec& spec, double a, std::size_t m);

/// Tail drift b_m that makes the approximant's average drift equal -a/2.
double approximant_tail_drift(const DriftSpec& spec, double a, std::size_t m);

/// Closed-form approximant rates: the infinite-law rates for k <= m and
/// (m^2 - k)/(m - 1) (2 mean_m + a) for m < k < m^2.
std::vector<double> approximant_closed_form_rates(const DriftSpec& spec, double a, std::size_t m);

/// count x law.size() matrix of independent gap draws. Row r uses substream
/// r of the given stream, so rows can be generated in parallel.
Matrix sample_gaps(const GapLaw& law, std::size_t count, RngSpec rng);

/// One draw from the law using an existing stream.
std::vector<double> sample_gap_row(const GapLaw& law, RandomStream& stream);

/// Standardized configuration from gaps: xi_1 = 0, xi_{k+1} = xi_k + gap_k.
std::vector<double> positions_from_gaps(std::span<const double> gaps);

/// CSV export with header "k,lambda_k,mean_k", one row per gap (k 1-based).
void write_law_csv(const GapLaw& law, std::ostream& out);

}  // namespace rankbm::stationary
