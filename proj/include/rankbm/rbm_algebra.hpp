#pragma once

// Linear algebra of the gap process viewed as a reflected Brownian motion in
// the orthant. The reflection matrix R is tridiagonal with 1 on the diagonal
// and -1/2 off it; stationary rates solve R lambda = mu with
// mu_k = g_k - g_{k+1}.
//
// Only truncations are ever handled. Row n of an n-truncation would need
// lambda_{n+1}, so residual checks stop at row n-1.

#include <cstddef>
#include <span>
#include <vector>

#include "rankbm/core_types.hpp"

namespace rankbm::rbm {

/// Implicit n x n truncation of the reflection matrix.
class TridiagonalReflection {
 public:
  explicit TridiagonalReflection(std::size_t dimension);

  std::size_t dimension() const noexcept { return n_; }

  /// R v. The last row is the truncation boundary: it omits the
  /// -v_{n+1}/2 term that the infinite matrix would contribute.
  std::vector<double> apply(std::span<const double> v) const;

 private:
  std::size_t n_;
};

/// R v for a truncation of dimension v.size().
std::vector<double> reflection_apply(std::span<const double> v);

/// lambda*_k = 2(g_1 + ... + g_k), k = 1..n.
std::vector<double> particular_solution(const DriftSpec& spec, std::size_t n);

/// eta = (1, 2, ..., n), spanning the null space of the interior rows.
std::vector<double> null_vector(std::size_t n);

/// lambda* + a eta.
std::vector<double> general_solution(const DriftSpec& spec, double a, std::size_t n);

/// mu_k = g_k - g_{k+1}, k = 1..n.
std::vector<double> reflection_rhs(const DriftSpec& spec, std::size_t n);

/// max over rows 1..n-1 of |(R lambda)_k - mu_k| for lambda = lambda* + a eta.
double general_solution_residual(const DriftSpec& spec, double a, std::size_t n);

}  // namespace rankbm::rbm
