#include "rankbm/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rankbm/io.hpp"
#include "rankbm/parallel.hpp"
#include "rankbm/stationary_laws.hpp"
#include "rankbm/trace.hpp"

namespace rankbm::sim {
namespace {

// Relative slack when deciding whether dt divides the horizon.
constexpr double kGridSlack = 1e-9;

std::vector<double> initial_gaps(const SimConfig& config, std::size_t index) {
  if (const auto* law = std::get_if<GapLaw>(&config.initial_gaps)) {
    const Matrix draw = stationary::sample_gaps(*law, 1, config.trajectory_rng(index));
    return draw.data;
  }
  return std::get<std::vector<double>>(config.initial_gaps);
}

double step_length(const SimConfig& config, std::size_t s, std::size_t steps) {
  if (s + 1 < steps) return config.dt;
  return config.horizon - static_cast<double>(steps - 1) * config.dt;
}

void check_finite(std::span<const double> x, const SimConfig& config, std::size_t index,
                  std::size_t s) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || std::abs(x[i]) > kOverflowGuard) {
      const RngSpec rng = config.trajectory_rng(index);
      throw SimulationError("trajectory " + std::to_string(index) + " diverged at step " +
                                std::to_string(s + 1) + ": X_" + std::to_string(i + 1) + " = " +
                                io::format_double(x[i]) + "; replay with seed " +
                                std::to_string(rng.seed) + " stream " + std::to_string(rng.stream),
                            index, rng.seed, rng.stream);
    }
  }
}

// Core loop shared by ensemble and full-trajectory runs. `on_step(s, t)` is
// called after the ranking of step s has been refreshed.
template <class OnStep>
void integrate(const SimConfig& config, std::size_t index, std::vector<double>& x,
               ranking::RankPermutation& order, std::vector<double>& gaussians,
               OnStep&& on_step) {
  const std::size_t n = x.size();
  const std::size_t steps = config.steps();
  RandomStream stream(config.trajectory_rng(index), kIncrementSubstream);
  const auto& g = config.drifts;
  double t = 0.0;
  for (std::size_t s = 0; s < steps; ++s) {
    const double h = step_length(config, s, steps);
    const double root = std::sqrt(h);
    for (std::size_t i = 0; i < n; ++i) gaussians[i] = root * stream.gaussian();
    for (std::size_t k = 0; k < n; ++k) x[order[k]] += g[k] * h;
    for (std::size_t i = 0; i < n; ++i) x[i] += gaussians[i];
    check_finite(x, config, index, s);
    ranking::rerank(x, order);
    t = (s + 1 == steps) ? config.horizon : static_cast<double>(s + 1) * config.dt;
    on_step(s, t);
  }
}

}  // namespace

std::size_t SimConfig::steps() const {
  const double ratio = horizon / dt;
  const double nearest = std::round(ratio);
  if (std::abs(ratio - nearest) <= kGridSlack * std::max(1.0, ratio)) {
    return static_cast<std::size_t>(std::max(1.0, nearest));
  }
  return static_cast<std::size_t>(std::ceil(ratio));
}

void SimConfig::validate() const {
  if (drifts.size() < 2) throw ValidationError("simulation needs N >= 2 particles");
  for (double g : drifts) {
    if (!std::isfinite(g)) throw ValidationError("drifts must be finite");
  }
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw ValidationError("horizon T must be > 0");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("time step dt must be > 0");
  if (dt > horizon) throw ValidationError("time step dt must not exceed the horizon T");
  if (trajectories == 0) throw ValidationError("need at least one trajectory (M >= 1)");
  const std::size_t gaps = drifts.size() - 1;
  if (const auto* law = std::get_if<GapLaw>(&initial_gaps)) {
    if (law->size() != gaps) {
      throw ValidationError("initial gap law has " + std::to_string(law->size()) +
                            " rates, expected N - 1 = " + std::to_string(gaps));
    }
  } else {
    const auto& v = std::get<std::vector<double>>(initial_gaps);
    if (v.size() != gaps) {
      throw ValidationError("initial gap vector has length " + std::to_string(v.size()) +
                            ", expected N - 1 = " + std::to_string(gaps));
    }
    for (double z : v) {
      if (!(z >= 0.0) || !std::isfinite(z)) throw ValidationError("initial gaps must be >= 0");
    }
  }
  for (std::size_t k : record.displacement_ranks) {
    if (k >= drifts.size()) throw ValidationError("displacement rank out of range");
  }
  if (record.increments && record.path_every != 1) {
    throw ValidationError("recording increments requires a path recorded every step");
  }
}

std::vector<double> step(std::span<const double> positions, std::span<const double> drifts,
                         double dt, std::span<const double> gaussians) {
  trace::mark(trace::Op::kStep);
  if (positions.size() != drifts.size() || positions.size() != gaussians.size()) {
    throw ValidationError("step needs positions, drifts and gaussians of equal length");
  }
  if (!(dt > 0.0)) throw ValidationError("step needs dt > 0");
  const auto order = ranking::rank_permutation(positions);
  std::vector<double> out(positions.begin(), positions.end());
  const double root = std::sqrt(dt);
  for (std::size_t k = 0; k < out.size(); ++k) out[order[k]] += drifts[k] * dt;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += root * gaussians[i];
  for (double v : out) {
    if (!std::isfinite(v) || std::abs(v) > kOverflowGuard) {
      throw SimulationError("Euler step produced a non-finite or overflowing position", 0, 0, 0);
    }
  }
  return out;
}

Trajectory simulate_trajectory(const SimConfig& config, std::size_t index) {
  config.validate();
  trace::mark(trace::Op::kStep);
  const std::size_t n = config.particles();
  const std::size_t steps = config.steps();
  const std::size_t every = config.record.path_every;

  Trajectory traj;
  traj.index = index;
  traj.rng = config.trajectory_rng(index);

  std::vector<double> x = stationary::positions_from_gaps(initial_gaps(config, index));
  auto order = ranking::rank_permutation(x);
  std::vector<double> gaussians(n);

  std::vector<double> flat(x.begin(), x.end());
  traj.times.push_back(0.0);
  traj.orders.push_back(order);
  if (config.record.increments) traj.increments = Matrix(steps, n);

  integrate(config, index, x, order, gaussians, [&](std::size_t s, double t) {
    if (config.record.increments) std::copy(gaussians.begin(), gaussians.end(), traj.increments.row(s).begin());
    const bool last = s + 1 == steps;
    if (last || (every > 0 && (s + 1) % every == 0)) {
      traj.times.push_back(t);
      traj.orders.push_back(order);
      flat.insert(flat.end(), x.begin(), x.end());
    }
  });

  traj.positions.rows = traj.times.size();
  traj.positions.cols = n;
  traj.positions.data = std::move(flat);
  return traj;
}

std::vector<double> ObservableTable::column(const std::string& name) const {
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw ValidationError("no observable named " + name);
  return values.column(static_cast<std::size_t>(it - names.begin()));
}

std::string gap_observable(std::size_t k) { return "gap_" + std::to_string(k); }
std::string displacement_observable(std::size_t k) { return "displacement_" + std::to_string(k); }

EnsembleResult simulate_ensemble(const SimConfig& config) {
  trace::mark(trace::Op::kSimulateEnsemble);
  trace::mark(trace::Op::kStep);
  config.validate();
  const std::size_t n = config.particles();
  const auto& ranks = config.record.displacement_ranks;

  EnsembleResult result;
  auto& table = result.raw;
  if (config.record.final_gaps) {
    for (std::size_t k = 0; k + 1 < n; ++k) table.names.push_back(gap_observable(k + 1));
  }
  for (std::size_t k : ranks) table.names.push_back(displacement_observable(k + 1));
  table.values = Matrix(config.trajectories, table.names.size());

  parallel_for(config.trajectories, [&](std::size_t j) {
    std::vector<double> x = stationary::positions_from_gaps(initial_gaps(config, j));
    const std::vector<double> start = x;  // standardized, so also Y(0)
    auto order = ranking::rank_permutation(x);
    std::vector<double> gaussians(n);
    integrate(config, j, x, order, gaussians, [](std::size_t, double) {});

    auto row = table.values.row(j);
    std::size_t col = 0;
    if (config.record.final_gaps) {
      for (std::size_t k = 0; k + 1 < n; ++k) row[col++] = x[order[k + 1]] - x[order[k]];
    }
    for (std::size_t k : ranks) row[col++] = x[order[k]] - start[k];
  });

  for (std::size_t c = 0; c < table.names.size(); ++c) {
    result.summary.observables.push_back(stats::summarize(table.names[c], table.values.column(c)));
  }
  if (const auto* law = std::get_if<GapLaw>(&config.initial_gaps);
      law && config.record.final_gaps && config.trajectories >= 10) {
    for (std::size_t k = 0; k + 1 < n; ++k) {
      stats::GapFit fit;
      fit.gap = k + 1;
      fit.rate = law->rates()[k];
      fit.ks = stats::ks_exponential(table.values.column(k), fit.rate);
      result.summary.gap_fits.push_back(fit);
    }
  }
  return result;
}

double LocalTimeEstimate::max_decrement(std::size_t k) const {
  double worst = 0.0;
  for (std::size_t s = 0; s + 1 < values.rows; ++s) {
    worst = std::max(worst, values(s, k) - values(s + 1, k));
  }
  return worst;
}

RankedDecomposition reconstruct_ranked_decomposition(const Trajectory& trajectory,
                                                     std::span<const double> drifts) {
  trace::mark(trace::Op::kReconstructRankedDecomposition);
  const std::size_t n = drifts.size();
  const std::size_t rows = trajectory.times.size();
  if (trajectory.increments.rows == 0 || trajectory.increments.rows + 1 != rows) {
    throw ValidationError(
        "ranked decomposition needs per-step increments and a path recorded every step");
  }
  if (trajectory.positions.cols != n || trajectory.increments.cols != n ||
      trajectory.orders.size() != rows) {
    throw ValidationError("trajectory shape does not match the drift vector");
  }

  RankedDecomposition out;
  out.times = trajectory.times;
  out.brownian = Matrix(rows, n);
  out.local_times.values = Matrix(rows, n + 1);

  // B_k: increment of step s goes to the rank its particle held at t_s.
  for (std::size_t s = 0; s + 1 < rows; ++s) {
    const auto& order = trajectory.orders[s];
    for (std::size_t k = 0; k < n; ++k) {
      out.brownian(s + 1, k) = out.brownian(s, k) + trajectory.increments(s, order[k]);
    }
  }

  auto ranked = [&](std::size_t s, std::size_t k) {
    return trajectory.positions(s, trajectory.orders[s][k]);
  };
  for (std::size_t s = 0; s < rows; ++s) {
    const double t = out.times[s];
    double half_below = 0.0;  // L_{(k-1,k)} / 2
    for (std::size_t k = 0; k < n; ++k) {
      const double half =
          half_below - (ranked(s, k) - ranked(0, k)) + drifts[k] * t + out.brownian(s, k);
      if (k + 1 < n) {
        out.local_times.values(s, k + 1) = 2.0 * half;
      } else {
        out.closure_residual = std::max(out.closure_residual, std::abs(2.0 * half));
      }
      half_below = half;
    }
  }
  return out;
}

}  // namespace rankbm::sim
