#pragma once

#include <array>
#include <cstdint>

namespace fdsa {

/// Identifies one reproducible uniform stream.
struct StreamKey {
  std::uint64_t master_seed = 0;
  std::uint64_t replication_index = 0;
  std::uint64_t substream_index = 0;

  friend bool operator==(const StreamKey&, const StreamKey&) = default;
};

/// Substream roles within one replication.
enum class Substream : std::uint64_t {
  crn = 0,                ///< shared randomness of a coupled pair
  independent_plus = 1,   ///< first measurement of an uncoupled difference
  independent_minus = 2,  ///< second measurement of an uncoupled difference
  retry = 3,              ///< regeneration draws of the coupled rejection sampler
};

/// SplitMix64 finalizer; a bijection on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// xoshiro256++ generator producing doubles in [0, 1).
///
/// Single-owner mutable state. Copying a stream forks an identical sequence,
/// which is how callers replay the same uniforms at several parameter values.
class UniformStream {
 public:
  explicit UniformStream(const std::array<std::uint64_t, 4>& state) noexcept : state_(state) {}

  /// Next raw 64-bit output.
  std::uint64_t next_u64() noexcept {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    ++draw_count_;
    return result;
  }

  /// Top 53 bits scaled by 2^-53.
  double next_uniform() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  std::uint64_t draw_count() const noexcept { return draw_count_; }
  const std::array<std::uint64_t, 4>& state() const noexcept { return state_; }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> state_;
  std::uint64_t draw_count_ = 0;
};

/// Pure function of the key: same key, same stream.
UniformStream derive_stream(const StreamKey& key) noexcept;

/// The four substreams used by one replication of an estimator or run.
struct StreamSet {
  UniformStream crn;
  UniformStream independent_plus;
  UniformStream independent_minus;
  UniformStream retry;

  static StreamSet derive(std::uint64_t master_seed, std::uint64_t replication_index) noexcept;
};

}  // namespace fdsa
