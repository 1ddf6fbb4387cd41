#include "rankbm/rng.hpp"

#include <cmath>
#include <numbers>

namespace rankbm {
namespace philox {
namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53;
constexpr std::uint32_t kMul1 = 0xCD9E8D57;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& lo, std::uint32_t& hi) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  lo = static_cast<std::uint32_t>(p);
  hi = static_cast<std::uint32_t>(p >> 32);
}

inline Counter round(const Counter& c, const Key& k) {
  std::uint32_t lo0, hi0, lo1, hi1;
  mulhilo(kMul0, c[0], lo0, hi0);
  mulhilo(kMul1, c[2], lo1, hi1);
  return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

}  // namespace

Counter philox4x32_10(Counter ctr, Key key) noexcept {
  for (int r = 0; r < 10; ++r) {
    if (r > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    ctr = round(ctr, key);
  }
  return ctr;
}

}  // namespace philox

RandomStream::RandomStream(RngSpec spec, std::uint32_t substream) noexcept
    : spec_(spec), substream_(substream) {}

void RandomStream::refill() noexcept {
  const philox::Counter ctr{block_++, substream_, static_cast<std::uint32_t>(spec_.stream),
                            static_cast<std::uint32_t>(spec_.stream >> 32)};
  const philox::Key key{static_cast<std::uint32_t>(spec_.seed),
                        static_cast<std::uint32_t>(spec_.seed >> 32)};
  buffer_ = philox::philox4x32_10(ctr, key);
  words_left_ = 4;
}

std::uint64_t RandomStream::next_u64() noexcept {
  if (words_left_ < 2) refill();
  const int i = 4 - words_left_;
  words_left_ -= 2;
  return (static_cast<std::uint64_t>(buffer_[i]) << 32) | buffer_[i + 1];
}

double RandomStream::uniform() noexcept {
  // (k + 1/2) 2^-53 for k in [0, 2^53): never 0, never 1.
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RandomStream::gaussian() noexcept {
  if (has_spare_) {
    has_spare_ = false;
    return spare_gaussian_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_gaussian_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

}  // namespace rankbm
