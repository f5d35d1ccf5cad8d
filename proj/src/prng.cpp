#include "fdsa/prng.hpp"

namespace fdsa {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

}  // namespace

UniformStream derive_stream(const StreamKey& key) noexcept {
  // Each field is folded through the finalizer so that no two fields can
  // cancel each other by simple XOR.
  std::uint64_t h = mix64(key.master_seed + kGolden);
  h = mix64(h ^ (key.replication_index + 2 * kGolden));
  h = mix64(h ^ (key.substream_index + 3 * kGolden));

  std::array<std::uint64_t, 4> state{};
  std::uint64_t x = h;
  for (auto& word : state) {
    x += kGolden;
    word = mix64(x);
  }
  // xoshiro must not start from the all-zero state.
  if ((state[0] | state[1] | state[2] | state[3]) == 0) state[0] = kGolden;
  return UniformStream(state);
}

StreamSet StreamSet::derive(std::uint64_t master_seed, std::uint64_t replication_index) noexcept {
  auto sub = [&](Substream s) {
    return derive_stream({master_seed, replication_index, static_cast<std::uint64_t>(s)});
  };
  return StreamSet{sub(Substream::crn), sub(Substream::independent_plus),
                   sub(Substream::independent_minus), sub(Substream::retry)};
}

}  // namespace fdsa
