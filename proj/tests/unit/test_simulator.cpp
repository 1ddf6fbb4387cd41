#include <cmath>

#include "doctest.h"
#include "rankbm/simulator.hpp"
#include "rankbm/stationary_laws.hpp"

using namespace rankbm;
using doctest::Approx;

namespace {

sim::SimConfig atlas_config(std::size_t n, std::size_t m, double dt, std::uint64_t seed) {
  sim::SimConfig c;
  c.drifts = DriftSpec::atlas().truncate(n);
  c.initial_gaps = stationary::finite_stationary_rates(DriftSpec::atlas(), n);
  c.horizon = 1.0;
  c.dt = dt;
  c.trajectories = m;
  c.rng = {seed, 0};
  return c;
}

}  // namespace

TEST_SUITE("simulator") {

TEST_CASE("step examples") {
  const std::vector<double> atlas{1.0, 0.0};
  const std::vector<double> zero2{0.0, 0.0};
  auto x = sim::step(std::vector<double>{0.0, 1.0}, atlas, 0.1, zero2);
  CHECK(x[0] == Approx(0.1));
  CHECK(x[1] == 1.0);
  x = sim::step(std::vector<double>{1.0, 0.0}, atlas, 0.1, zero2);
  CHECK(x[0] == 1.0);
  CHECK(x[1] == Approx(0.1));
  const std::vector<double> g{0.3, -1.2, 2.0};
  x = sim::step(std::vector<double>{0.0, 1.0, 2.0}, std::vector<double>(3, 0.0), 1.0, g);
  CHECK(x[0] == 0.3);
  CHECK(x[1] == 1.0 - 1.2);
  CHECK(x[2] == 4.0);
  CHECK_THROWS_AS(sim::step(std::vector<double>{0.0, 1e9}, atlas, 1.0, std::vector<double>{0.0, 1.0}),
                  SimulationError);
}

TEST_CASE("config validation") {
  auto c = atlas_config(2, 1, 1e-3, 0);
  CHECK_NOTHROW(c.validate());
  c.drifts = {1.0};
  CHECK_THROWS_AS(c.validate(), ValidationError);
  c = atlas_config(2, 1, 2.0, 0);
  CHECK_THROWS_AS(c.validate(), ValidationError);
  c = atlas_config(2, 0, 1e-3, 0);
  CHECK_THROWS_AS(c.validate(), ValidationError);
  c = atlas_config(3, 1, 1e-3, 0);
  c.initial_gaps = std::vector<double>{1.0};
  CHECK_THROWS_AS(c.validate(), ValidationError);
}

TEST_CASE("time grid") {
  auto c = atlas_config(2, 1, 1e-3, 0);
  CHECK(c.steps() == 1000);
  c.dt = 0.3;
  CHECK(c.steps() == 4);
  c.record.path_every = 1;
  const auto traj = sim::simulate_trajectory(c, 0);
  CHECK(traj.times == std::vector<double>{0.0, 0.3, 0.6, 0.8999999999999999, 1.0});
  for (std::size_t s = 0; s + 1 < traj.times.size(); ++s) CHECK(traj.times[s] < traj.times[s + 1]);
}

TEST_CASE("recorded rankings are sorted") {
  auto c = atlas_config(6, 1, 1e-2, 3);
  c.record.path_every = 1;
  const auto traj = sim::simulate_trajectory(c, 0);
  for (std::size_t s = 0; s < traj.times.size(); ++s) {
    const auto& order = traj.orders[s];
    for (std::size_t k = 0; k + 1 < order.size(); ++k) {
      REQUIRE(traj.positions(s, order[k]) <= traj.positions(s, order[k + 1]));
    }
  }
}

TEST_CASE("ensembles are deterministic and independent of the worker count") {
  auto c = atlas_config(3, 1, 1e-2, 8);
  c.record.displacement_ranks = {0, 2};
  const auto a = sim::simulate_ensemble(c);
  const auto b = sim::simulate_ensemble(c);
  CHECK(a.raw.values.data == b.raw.values.data);
  CHECK(a.summary.observables.size() == 4);
  CHECK(a.summary.at("gap_1").mean == b.summary.at("gap_1").mean);

  c.trajectories = 64;
  const auto full = sim::simulate_ensemble(c);
  // Trajectory j of an ensemble equals a stand-alone run of index j.
  const auto single = sim::simulate_trajectory(c, 17);
  const auto& last = single.orders.back();
  CHECK(full.raw.values(17, 0) == single.positions(single.times.size() - 1, last[1]) -
                                      single.positions(single.times.size() - 1, last[0]));
}

TEST_CASE("overflow aborts with the replay seed") {
  sim::SimConfig c;
  c.drifts = {2e12, 0.0};
  c.initial_gaps = std::vector<double>{1.0};
  c.dt = 1e-3;
  c.rng = {99, 5};
  c.trajectories = 2;
  try {
    sim::simulate_ensemble(c);
    FAIL("expected divergence");
  } catch (const SimulationError& e) {
    CHECK(e.seed() == 99);
    CHECK(e.stream() == 5);
    CHECK(std::string(e.what()).find("seed 99") != std::string::npos);
  }
}

TEST_CASE("stationary gap of the N = 2 Atlas system") {
  const auto result = sim::simulate_ensemble(atlas_config(2, 10000, 1e-3, 42));
  const auto& s = result.summary.at("gap_1");
  CHECK(std::abs(s.mean - 1.0) <= 3.0 * s.standard_error + 0.05);
  REQUIRE(result.summary.gap_fits.size() == 1);
  CHECK(result.summary.gap_fits[0].ks.p_value >= 1e-3);
}

TEST_CASE("common drift of the N = 5 Atlas system") {
  auto c = atlas_config(5, 10000, 1e-3, 5);
  c.record.displacement_ranks = {2};
  const auto result = sim::simulate_ensemble(c);
  const auto& s = result.summary.at("displacement_3");
  CHECK(std::abs(s.mean - 0.2) <= 3.0 * s.standard_error);
}

TEST_CASE("sum identity: total displacement minus drift is N(0, N t)") {
  auto c = atlas_config(5, 10000, 1e-2, 6);
  c.record.final_gaps = false;
  c.record.displacement_ranks = {0, 1, 2, 3, 4};
  const auto result = sim::simulate_ensemble(c);
  std::vector<double> total(c.trajectories, 0.0);
  for (std::size_t j = 0; j < c.trajectories; ++j) {
    for (std::size_t k = 0; k < 5; ++k) total[j] += result.raw.values(j, k);
    total[j] -= 1.0;  // t * sum of drifts
  }
  const auto s = stats::summarize("total", total);
  CHECK(std::abs(s.mean) <= 3.0 * s.standard_error);
  const double var_se = 5.0 * std::sqrt(2.0 / static_cast<double>(total.size()));
  CHECK(std::abs(s.variance - 5.0) <= 3.0 * var_se);
}

TEST_CASE("halving dt moves the stationary mean by less than the 3 SE width") {
  const auto coarse = sim::simulate_ensemble(atlas_config(2, 10000, 1e-3, 42)).summary.at("gap_1");
  const auto fine = sim::simulate_ensemble(atlas_config(2, 10000, 5e-4, 42)).summary.at("gap_1");
  CHECK(std::abs(coarse.mean - fine.mean) < 3.0 * std::hypot(coarse.standard_error, fine.standard_error));
}

TEST_CASE("ranked decomposition: separated particles have no local time") {
  sim::SimConfig c;
  c.drifts = {1.0, 0.0};
  c.initial_gaps = std::vector<double>{50.0};
  c.horizon = 0.1;
  c.dt = 1e-4;
  c.record.path_every = 1;
  c.record.increments = true;
  const auto traj = sim::simulate_trajectory(c, 0);
  const auto dec = sim::reconstruct_ranked_decomposition(traj, c.drifts);
  const double tol = 10.0 * std::sqrt(c.dt);
  for (double l : dec.local_times.pair(1)) CHECK(std::abs(l) <= tol);
  for (double l : dec.local_times.pair(0)) CHECK(l == 0.0);
  for (double l : dec.local_times.pair(2)) CHECK(l == 0.0);
  CHECK(dec.closure_residual <= 1e-9);
}

TEST_CASE("ranked decomposition: monotone local times and Brownian quadratic variation") {
  auto c = atlas_config(3, 1, 1e-5, 13);
  c.record.path_every = 1;
  c.record.increments = true;
  const double tol = 10.0 * std::sqrt(c.dt);
  for (std::size_t j = 0; j < 10; ++j) {
    const auto traj = sim::simulate_trajectory(c, j);
    const auto dec = sim::reconstruct_ranked_decomposition(traj, c.drifts);
    for (std::size_t k = 1; k < 3; ++k) CHECK(dec.local_times.max_decrement(k) <= tol);
    for (std::size_t k = 0; k < 3; ++k) {
      double qv = 0.0;
      for (std::size_t s = 0; s + 1 < dec.times.size(); ++s) {
        const double db = dec.brownian(s + 1, k) - dec.brownian(s, k);
        qv += db * db;
      }
      CHECK(std::abs(qv - 1.0) <= 0.05);
    }
    CHECK(dec.closure_residual <= 1e-9);
  }
  auto bare = c;
  bare.record.increments = false;
  CHECK_THROWS_AS(sim::reconstruct_ranked_decomposition(sim::simulate_trajectory(bare, 0), c.drifts),
                  ValidationError);
}

}
