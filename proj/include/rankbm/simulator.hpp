#pragma once

// Euler-Maruyama simulation of finite rank-based particle systems:
//
//   dX_i = g_{rank of i} dt + dW_i,
//
// with the drift frozen at the ranking of the step-start positions.
// Trajectories are independent work items; trajectory j draws from stream
// rng.stream + j, so ensembles reproduce regardless of scheduling.

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "rankbm/core_types.hpp"
#include "rankbm/ranking.hpp"
#include "rankbm/stats.hpp"

namespace rankbm::sim {

/// Positions beyond this magnitude abort the trajectory.
inline constexpr double kOverflowGuard = 1e9;

/// Substream carrying the Brownian increments of a trajectory. Substream 0
/// of the same stream draws its initial gaps.
inline constexpr std::uint32_t kIncrementSubstream = 1;

struct Recording {
  /// Record Z_k(T) for every k.
  bool final_gaps = true;
  /// 0-based ranks k whose displacement Y_k(T) - Y_k(0) is recorded.
  std::vector<std::size_t> displacement_ranks;
  /// Keep named positions and rankings every `path_every` steps (0: only the
  /// initial and final instants).
  std::size_t path_every = 0;
  /// Keep the per-step Gaussian increments (requires path_every == 1).
  bool increments = false;
};

struct SimConfig {
  /// Drift of each rank, length N >= 2.
  std::vector<double> drifts;
  /// Initial gaps: a law sampled independently per trajectory, or a fixed
  /// vector of length N - 1. The bottom particle starts at 0.
  std::variant<GapLaw, std::vector<double>> initial_gaps;
  double horizon = 1.0;
  double dt = 1e-3;
  std::size_t trajectories = 1;
  RngSpec rng;
  Recording record;

  std::size_t particles() const noexcept { return drifts.size(); }
  std::size_t steps() const;
  /// Throws ValidationError describing the first problem found.
  void validate() const;
  /// Stream spec for trajectory j.
  RngSpec trajectory_rng(std::size_t j) const noexcept {
    return {rng.seed, rng.stream + j};
  }
};

/// One Euler step. Particle i receives drifts[rank of i] dt + sqrt(dt) g_i,
/// ranks taken from the step-start positions.
std::vector<double> step(std::span<const double> positions, std::span<const double> drifts,
                         double dt, std::span<const double> gaussians);

struct Trajectory {
  std::size_t index = 0;
  RngSpec rng;
  /// Recorded instants, strictly increasing from 0 to the horizon.
  std::vector<double> times;
  /// Named positions at each recorded instant.
  Matrix positions;
  /// Rank permutation at each recorded instant.
  std::vector<ranking::RankPermutation> orders;
  /// Brownian increments per step, by name (empty unless requested).
  Matrix increments;
};

/// Runs trajectory `index` of the configuration and keeps what `record` asks.
Trajectory simulate_trajectory(const SimConfig& config, std::size_t index);

/// Per-trajectory observables, one row per trajectory.
struct ObservableTable {
  std::vector<std::string> names;
  Matrix values;

  std::vector<double> column(const std::string& name) const;
};

struct EnsembleResult {
  ObservableTable raw;
  stats::EnsembleSummary summary;
};

/// Observable names used in the table: "gap_k" and "displacement_k" (k 1-based).
std::string gap_observable(std::size_t k);
std::string displacement_observable(std::size_t k);

/// Runs every trajectory, then aggregates in trajectory order. When the
/// initial gaps come from a law and final gaps are recorded, each final gap
/// marginal is KS-tested against that law.
EnsembleResult simulate_ensemble(const SimConfig& config);

/// Local times L_{(k,k+1)} for k = 0..N; columns 0 and N are identically 0.
struct LocalTimeEstimate {
  Matrix values;  // times x (N + 1)

  std::size_t pairs() const noexcept { return values.cols; }
  std::vector<double> pair(std::size_t k) const { return values.column(k); }
  /// Largest drop L(t_s) - L(t_{s+1}) over the grid for pair k (0 if none).
  double max_decrement(std::size_t k) const;
};

struct RankedDecomposition {
  std::vector<double> times;
  /// Cumulative per-rank Brownian motions B_k, times x N.
  Matrix brownian;
  LocalTimeEstimate local_times;
  /// |L_{(N,N+1)}| before it is set to 0 by convention; rounding only.
  double closure_residual = 0.0;
};

/// Routes each named increment to the rank its particle held at step start,
/// then recovers local times from the ranked dynamics,
///   L_{(k,k+1)}/2 = L_{(k-1,k)}/2 - (Y_k(t) - Y_k(0)) + g_k t + B_k(t).
RankedDecomposition reconstruct_ranked_decomposition(const Trajectory& trajectory,
                                                     std::span<const double> drifts);

}  // namespace rankbm::sim
