#pragma once

// Counter-based random streams (Philox4x32-10).
//
// Every draw is a pure function of (seed, stream, substream, counter), so
// trajectories can be generated on any worker in any order and still
// reproduce bit-for-bit.

#include <array>
#include <cmath>
#include <cstdint>

namespace rankbm {

/// Identifies one independent random stream: a master seed and a stream id.
struct RngSpec {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  bool operator==(const RngSpec&) const = default;
};

namespace philox {

using Counter = std::array<std::uint32_t, 4>;
using Key = std::array<std::uint32_t, 2>;

/// Ten-round Philox4x32 bijection.
Counter philox4x32_10(Counter ctr, Key key) noexcept;

}  // namespace philox

/// Sequential view of one counter-based stream.
///
/// Counter layout: word 0 is the block index, word 1 the substream, words
/// 2-3 the 64-bit stream id. The key is the 64-bit seed.
class RandomStream {
 public:
  explicit RandomStream(RngSpec spec, std::uint32_t substream = 0) noexcept;

  RngSpec spec() const noexcept { return spec_; }
  std::uint32_t substream() const noexcept { return substream_; }

  /// Uniform on the open interval (0, 1) with 53 random bits.
  double uniform() noexcept;
  /// Standard normal via Box-Muller; one block yields two variates.
  double gaussian() noexcept;
  /// Exp(rate) by inversion: -log(U) / rate.
  double exponential(double rate) noexcept { return -std::log(uniform()) / rate; }

 private:
  std::uint64_t next_u64() noexcept;
  void refill() noexcept;

  RngSpec spec_;
  std::uint32_t substream_;
  std::uint32_t block_ = 0;
  philox::Counter buffer_{};
  int words_left_ = 0;
  double spare_gaussian_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace rankbm
