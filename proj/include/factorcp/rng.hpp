#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace fcp {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// A stream is identified by a 64-bit key (the seed) and a 64-bit stream id;
/// the remaining 64 bits of the counter index blocks within the stream.
/// Distinct (seed, stream id) pairs never overlap.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter ctr, Key key) noexcept;
};

/// UniformRandomBitGenerator over one Philox stream, yielding 64-bit words.
class PhiloxStream {
 public:
  using result_type = std::uint64_t;

  PhiloxStream(std::uint64_t seed, std::uint64_t stream_id) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept;

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

 private:
  Philox4x32::Key key_;
  std::uint64_t stream_id_;
  std::uint64_t block_index_ = 0;
  Philox4x32::Counter buffer_{};
  int used_ = 4;
};

/// Stream ids are namespaced by purpose so draws for different model
/// components stay independent under the same seed.
enum class StreamPurpose : std::uint32_t {
  Loadings = 1,
  Factors = 2,
  Noise = 3,
  CriticalValues = 4,
  Intervals = 5,
  Replication = 6,
  Projection = 7,
};

constexpr std::uint64_t stream_id(StreamPurpose purpose, std::uint32_t index = 0) noexcept {
  return (static_cast<std::uint64_t>(purpose) << 32) | index;
}

/// Derives an independent 64-bit seed, e.g. one per (cell, replication).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) noexcept;

}  // namespace fcp
