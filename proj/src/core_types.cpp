#include "rankbm/core_types.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rankbm {

DriftSpec::DriftSpec(std::vector<double> prefix, double tail)
    : prefix_(std::move(prefix)), tail_(tail) {
  if (!std::isfinite(tail_)) throw ValidationError("drift tail must be finite");
  for (std::size_t k = 0; k < prefix_.size(); ++k) {
    if (!std::isfinite(prefix_[k])) {
      throw ValidationError("drift prefix entry " + std::to_string(k + 1) + " is not finite");
    }
  }
}

DriftSpec DriftSpec::atlas() { return DriftSpec({1.0}, 0.0); }
DriftSpec DriftSpec::driftless() { return DriftSpec({}, 0.0); }
DriftSpec DriftSpec::inverted_atlas() { return DriftSpec({-1.0}, 0.0); }

double DriftSpec::partial_sum(std::size_t count) const noexcept {
  const std::size_t head = std::min(count, prefix_.size());
  double sum = 0.0;
  for (std::size_t k = 0; k < head; ++k) sum += prefix_[k];
  if (count > prefix_.size()) sum += static_cast<double>(count - prefix_.size()) * tail_;
  return sum;
}

std::vector<double> DriftSpec::truncate(std::size_t count) const {
  std::vector<double> out(count);
  for (std::size_t k = 0; k < count; ++k) out[k] = drift(k);
  return out;
}

std::vector<double> mean_drifts(const DriftSpec& spec, std::size_t count) {
  if (count == 0) throw ValidationError("mean_drifts needs n >= 1");
  std::vector<double> out(count);
  const std::size_t head = std::min(count, spec.prefix().size());
  double sum = 0.0;
  for (std::size_t k = 0; k < head; ++k) {
    sum += spec.prefix()[k];
    out[k] = sum / static_cast<double>(k + 1);
  }
  // Tail part: closed form keeps ḡ_n exact for huge n instead of summing.
  for (std::size_t k = head; k < count; ++k) {
    const double n = static_cast<double>(k + 1);
    out[k] = (sum + static_cast<double>(k + 1 - head) * spec.tail()) / n;
  }
  return out;
}

std::vector<double> partial_sums(const DriftSpec& spec, std::size_t count) {
  std::vector<double> out(count);
  const std::size_t head = std::min(count, spec.prefix().size());
  double sum = 0.0;
  for (std::size_t k = 0; k < head; ++k) {
    sum += spec.prefix()[k];
    out[k] = sum;
  }
  for (std::size_t k = head; k < count; ++k) {
    out[k] = sum + static_cast<double>(k + 1 - head) * spec.tail();
  }
  return out;
}

double inf_mean_drift(const DriftSpec& spec) {
  double best = spec.tail();
  double sum = 0.0;
  for (std::size_t k = 0; k < spec.prefix().size(); ++k) {
    sum += spec.prefix()[k];
    best = std::min(best, sum / static_cast<double>(k + 1));
  }
  return best;
}

GapLaw::GapLaw(std::vector<double> rates) : rates_(std::move(rates)) {
  for (std::size_t k = 0; k < rates_.size(); ++k) {
    if (!(rates_[k] > 0.0) || !std::isfinite(rates_[k])) {
      throw ValidationError("gap rate " + std::to_string(k + 1) +
                            " must be positive and finite, got " + std::to_string(rates_[k]));
    }
  }
}

ParticleState::ParticleState(double time, std::vector<double> positions)
    : time_(time), positions_(std::move(positions)) {
  if (!(time_ >= 0.0) || !std::isfinite(time_)) {
    throw ValidationError("particle state time must be finite and >= 0");
  }
  if (positions_.size() < 2) throw ValidationError("particle state needs at least 2 particles");
  for (double x : positions_) {
    if (!std::isfinite(x)) throw ValidationError("particle positions must be finite");
  }
}

std::vector<double> Matrix::column(std::size_t j) const {
  std::vector<double> out(rows);
  for (std::size_t i = 0; i < rows; ++i) out[i] = data[i * cols + j];
  return out;
}

}  // namespace rankbm
