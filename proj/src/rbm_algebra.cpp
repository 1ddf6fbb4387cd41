#include "rankbm/rbm_algebra.hpp"

#include <algorithm>
#include <cmath>

#include "rankbm/trace.hpp"

namespace rankbm::rbm {

TridiagonalReflection::TridiagonalReflection(std::size_t dimension) : n_(dimension) {
  if (n_ == 0) throw ValidationError("reflection matrix dimension must be >= 1");
}

std::vector<double> TridiagonalReflection::apply(std::span<const double> v) const {
  if (v.size() != n_) throw ValidationError("vector length does not match reflection dimension");
  std::vector<double> out(n_);
  for (std::size_t k = 0; k < n_; ++k) {
    double acc = v[k];
    if (k > 0) acc -= 0.5 * v[k - 1];
    if (k + 1 < n_) acc -= 0.5 * v[k + 1];
    out[k] = acc;
  }
  return out;
}

std::vector<double> reflection_apply(std::span<const double> v) {
  trace::mark(trace::Op::kReflectionApply);
  return TridiagonalReflection(v.size()).apply(v);
}

std::vector<double> particular_solution(const DriftSpec& spec, std::size_t n) {
  trace::mark(trace::Op::kParticularSolution);
  if (n == 0) throw ValidationError("particular solution needs n >= 1");
  auto out = partial_sums(spec, n);
  for (double& v : out) v *= 2.0;
  return out;
}

std::vector<double> null_vector(std::size_t n) {
  std::vector<double> eta(n);
  for (std::size_t k = 0; k < n; ++k) eta[k] = static_cast<double>(k + 1);
  return eta;
}

std::vector<double> general_solution(const DriftSpec& spec, double a, std::size_t n) {
  auto lambda = particular_solution(spec, n);
  for (std::size_t k = 0; k < n; ++k) lambda[k] += static_cast<double>(k + 1) * a;
  return lambda;
}

std::vector<double> reflection_rhs(const DriftSpec& spec, std::size_t n) {
  std::vector<double> mu(n);
  for (std::size_t k = 0; k < n; ++k) mu[k] = spec.drift(k) - spec.drift(k + 1);
  return mu;
}

double general_solution_residual(const DriftSpec& spec, double a, std::size_t n) {
  trace::mark(trace::Op::kGeneralSolutionResidual);
  if (n < 3) throw ValidationError("residual check needs n >= 3");
  const auto lambda = general_solution(spec, a, n);
  const auto r_lambda = reflection_apply(lambda);
  const auto mu = reflection_rhs(spec, n);
  double worst = 0.0;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    worst = std::max(worst, std::abs(r_lambda[k] - mu[k]));
  }
  return worst;
}

}  // namespace rankbm::rbm
