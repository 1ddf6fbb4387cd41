#include <cmath>
#include <sstream>

#include "doctest.h"
#include "rankbm/experiments.hpp"
#include "rankbm/stationary_laws.hpp"
#include "rankbm/stats.hpp"

using namespace rankbm;
using doctest::Approx;
namespace st = rankbm::stationary;

namespace {

// Oracle: lambda_k = 2k(mean_k - mean_N) straight from running means.
std::vector<double> finite_oracle(const std::vector<double>& g) {
  const std::size_t n = g.size();
  long double total = 0;
  for (double v : g) total += v;
  std::vector<double> out;
  long double s = 0;
  for (std::size_t k = 1; k < n; ++k) {
    s += g[k - 1];
    out.push_back(static_cast<double>(2.0L * k * (s / k - total / n)));
  }
  return out;
}

}  // namespace

TEST_SUITE("stationary_laws") {

TEST_CASE("stability examples") {
  CHECK(st::stability_check(DriftSpec::atlas(), 3));
  CHECK_FALSE(st::stability_check(DriftSpec::driftless(), 4));
  CHECK_FALSE(st::stability_check(DriftSpec::inverted_atlas(), 2));
  CHECK_THROWS_AS(st::stability_check(DriftSpec::atlas(), 1), ValidationError);
}

TEST_CASE("finite stationary rates examples") {
  CHECK(st::finite_stationary_rates(DriftSpec::atlas(), 2).rates() == std::vector<double>{1.0});
  const auto r3 = st::finite_stationary_rates(DriftSpec::atlas(), 3).rates();
  CHECK(r3[0] == 4.0 / 3.0);
  CHECK(r3[1] == 2.0 / 3.0);
  try {
    st::finite_stationary_rates(DriftSpec::driftless(), 3);
    FAIL("expected a stability error");
  } catch (const StabilityError& e) {
    CHECK(e.first_violation() == 1);
  }
}

TEST_CASE("stability holds exactly when the rates exist") {
  RandomStream r({21, 0});
  int stable = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(r.uniform() * 10);
    std::vector<double> g(n);
    for (double& v : g) v = 4.0 * r.uniform() - 2.0;
    std::sort(g.begin(), g.end(), std::greater<>());  // favour stable vectors
    if (r.uniform() < 0.5) std::swap(g[0], g[n - 1]);
    const bool ok = st::stability_check(g);
    stable += ok;
    if (ok) {
      const auto rates = st::finite_stationary_rates(g).rates();
      const auto oracle = finite_oracle(g);
      for (std::size_t k = 0; k < rates.size(); ++k) CHECK(rates[k] == Approx(oracle[k]).epsilon(1e-12));
    } else {
      CHECK_THROWS_AS(st::finite_stationary_rates(g), StabilityError);
    }
  }
  CHECK(stable > 100);
  CHECK(stable < 400);
}

TEST_CASE("infinite rates examples") {
  CHECK(st::infinite_rates(DriftSpec::atlas(), 1.0, 4).rates() == std::vector<double>{3, 4, 5, 6});
  CHECK(st::infinite_rates(DriftSpec::driftless(), 2.0, 3).rates() == std::vector<double>{2, 4, 6});
  CHECK(st::infinite_rates(DriftSpec::inverted_atlas(), 3.0, 3).rates() == std::vector<double>{1, 4, 7});
  CHECK(st::infinite_rates(DriftSpec::atlas(), 1.0).size() == st::kDefaultDepth);
}

TEST_CASE("bound violations name the bound") {
  CHECK(st::a_lower_bound(DriftSpec::inverted_atlas()) == 2.0);
  CHECK(st::a_lower_bound(DriftSpec::atlas()) == 0.0);
  try {
    st::infinite_rates(DriftSpec::inverted_atlas(), 1.0, 10);
    FAIL("expected a bound error");
  } catch (const BoundError& e) {
    CHECK(e.bound() == 2.0);
    CHECK(std::string(e.what()).find("a > 2") != std::string::npos);
  }
  CHECK_THROWS_AS(st::infinite_rates(DriftSpec::inverted_atlas(), 2.0, 10), BoundError);
  CHECK_THROWS_AS(st::approximant(DriftSpec::atlas(), 0.0, 3), BoundError);
}

TEST_CASE("degenerate law at a = 0 needs the explicit flag") {
  CHECK_THROWS_AS(st::infinite_rates(DriftSpec::atlas(), 0.0, 5), BoundError);
  CHECK(st::infinite_rates(DriftSpec::atlas(), 0.0, 5, true).rates() == std::vector<double>(5, 2.0));
  CHECK(st::degenerate_law_admissible(DriftSpec::atlas()));
  CHECK_FALSE(st::degenerate_law_admissible(DriftSpec::driftless()));
  CHECK_FALSE(st::degenerate_law_admissible(DriftSpec({1.0, -1.0}, 0.0)));
  CHECK_THROWS_AS(st::infinite_rates(DriftSpec::driftless(), 0.0, 5, true), BoundError);
}

TEST_CASE("approximant examples") {
  const auto ap = st::approximant(DriftSpec::atlas(), 1.0, 2);
  CHECK(ap.tail_drift == -1.5);
  CHECK(ap.drifts == std::vector<double>{1.0, 0.0, -1.5, -1.5});
  CHECK(ap.rates == std::vector<double>{3.0, 4.0, 2.0});
  CHECK(ap.particles() == 4);
  double mean = 0.0;
  for (double g : ap.drifts) mean += g;
  CHECK(mean / 4.0 == -0.5);
}

TEST_CASE("approximant identities over random cases") {
  RandomStream r({22, 0});
  for (int trial = 0; trial < 200; ++trial) {
    const auto rc = experiments::random_case(r, 30);
    const auto ap = st::approximant(rc.drift, rc.a, rc.m);
    // Closed forms vs the finite-system formula on g^(m).
    const auto oracle = finite_oracle(ap.drifts);
    for (std::size_t k = 0; k < oracle.size(); ++k) REQUIRE(std::abs(ap.rates[k] - oracle[k]) <= 1e-10);
    // Drift balance.
    long double sum = 0;
    for (double g : ap.drifts) sum += g;
    CHECK(std::abs(static_cast<double>(sum / ap.drifts.size()) + rc.a / 2.0) <= 1e-12);
    // First m rates are the infinite-system rates, exactly.
    const auto inf = st::infinite_rates(rc.drift, rc.a, rc.m).rates();
    for (std::size_t k = 0; k < rc.m; ++k) REQUIRE(ap.rates[k] == inf[k]);
    // Smallest tail rate.
    const double mean_m = rc.drift.partial_sum(rc.m) / static_cast<double>(rc.m);
    CHECK(ap.rates.back() == Approx((2.0 * mean_m + rc.a) / static_cast<double>(rc.m - 1)).epsilon(1e-12));
    for (double l : ap.rates) REQUIRE(l > 0.0);
  }
}

TEST_CASE("sample_gaps means and determinism") {
  const GapLaw law({3.0, 4.0, 5.0});
  const Matrix a = st::sample_gaps(law, 100000, {9, 0});
  const Matrix b = st::sample_gaps(law, 100000, {9, 0});
  CHECK(a.data == b.data);
  for (std::size_t k = 0; k < 3; ++k) {
    const auto s = stats::summarize("gap", a.column(k));
    CHECK(std::abs(s.mean - law.mean(k)) <= 3.0 * s.standard_error);
  }
  const auto one = st::sample_gaps(GapLaw({1.0}), 200000, {10, 0});
  const auto s = stats::summarize("gap", one.data);
  CHECK(std::abs(s.mean - 1.0) <= 3.0 * s.standard_error);
  CHECK_THROWS_AS(st::sample_gaps(law, 0, {1, 0}), ValidationError);
  // Row r only depends on (seed, stream, r).
  const Matrix head = st::sample_gaps(law, 10, {9, 0});
  for (std::size_t i = 0; i < head.data.size(); ++i) CHECK(head.data[i] == a.data[i]);
}

TEST_CASE("positions from gaps") {
  CHECK(st::positions_from_gaps(std::vector<double>{1, 1, 1}) == std::vector<double>{0, 1, 2, 3});
  CHECK(st::positions_from_gaps(std::vector<double>{}) == std::vector<double>{0});
  CHECK_THROWS_AS(st::positions_from_gaps(std::vector<double>{1.0, -0.5}), ValidationError);

  std::vector<double> rates;
  for (int k = 3; k <= 102; ++k) rates.push_back(k);
  const GapLaw law(rates);
  double mean = 0.0, var = 0.0;
  for (double l : rates) {
    mean += 1.0 / l;
    var += 1.0 / (l * l);
  }
  const Matrix draws = st::sample_gaps(law, 200, {12, 0});
  int inside = 0;
  for (std::size_t r = 0; r < draws.rows; ++r) {
    const auto row = draws.row(r);
    const auto xi = st::positions_from_gaps({row.begin(), row.end()});
    inside += std::abs(xi.back() - mean) <= 3.0 * std::sqrt(var);
  }
  CHECK(inside >= 190);
}

TEST_CASE("law CSV export") {
  std::ostringstream out;
  st::write_law_csv(GapLaw({2.0, 4.0}), out);
  CHECK(out.str() == "k,lambda_k,mean_k\n1,2,0.5\n2,4,0.25\n");
}

}
