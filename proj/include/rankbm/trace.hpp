#pragma once

// Execution trace: counts how often each public operation ran. Used to check
// that an experiment suite actually exercises every operation.

#include <cstdint>
#include <string>
#include <vector>

namespace rankbm::trace {

enum class Op : int {
  kStabilityCheck,
  kFiniteStationaryRates,
  kInfiniteRates,
  kApproximant,
  kSampleGaps,
  kPositionsFromGaps,
  kReflectionApply,
  kParticularSolution,
  kGeneralSolutionResidual,
  kStep,
  kSimulateEnsemble,
  kReconstructRankedDecomposition,
  kKsExponential,
  kParticleCount,
  kPositionDeviation,
  kSingularityStatistic,
  kCount_,
};

void mark(Op op) noexcept;
std::uint64_t count(Op op) noexcept;
void reset() noexcept;

/// Qualified name, e.g. "stationary-laws.approximant".
std::string name(Op op);
std::vector<Op> all_ops();

}  // namespace rankbm::trace
