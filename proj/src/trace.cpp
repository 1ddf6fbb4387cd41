#include "rankbm/trace.hpp"

#include <array>
#include <atomic>

namespace rankbm::trace {
namespace {

constexpr auto kOps = static_cast<std::size_t>(Op::kCount_);
std::array<std::atomic<std::uint64_t>, kOps> counters{};

}  // namespace

void mark(Op op) noexcept {
  counters[static_cast<std::size_t>(op)].fetch_add(1, std::memory_order_relaxed);
}

std::uint64_t count(Op op) noexcept {
  return counters[static_cast<std::size_t>(op)].load(std::memory_order_relaxed);
}

void reset() noexcept {
  for (auto& c : counters) c.store(0, std::memory_order_relaxed);
}

std::string name(Op op) {
  switch (op) {
    case Op::kStabilityCheck: return "stationary-laws.stability_check";
    case Op::kFiniteStationaryRates: return "stationary-laws.finite_stationary_rates";
    case Op::kInfiniteRates: return "stationary-laws.infinite_rates";
    case Op::kApproximant: return "stationary-laws.approximant";
    case Op::kSampleGaps: return "stationary-laws.sample_gaps";
    case Op::kPositionsFromGaps: return "stationary-laws.positions_from_gaps";
    case Op::kReflectionApply: return "rbm-algebra.reflection_apply";
    case Op::kParticularSolution: return "rbm-algebra.particular_solution";
    case Op::kGeneralSolutionResidual: return "rbm-algebra.general_solution_residual";
    case Op::kStep: return "simulator.step";
    case Op::kSimulateEnsemble: return "simulator.simulate_ensemble";
    case Op::kReconstructRankedDecomposition: return "simulator.reconstruct_ranked_decomposition";
    case Op::kKsExponential: return "stats.ks_exponential";
    case Op::kParticleCount: return "stats.particle_count";
    case Op::kPositionDeviation: return "stats.position_deviation";
    case Op::kSingularityStatistic: return "stats.singularity_statistic";
    case Op::kCount_: break;
  }
  return "unknown";
}

std::vector<Op> all_ops() {
  std::vector<Op> out;
  for (std::size_t i = 0; i < kOps; ++i) out.push_back(static_cast<Op>(i));
  return out;
}

}  // namespace rankbm::trace
