// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace mmuplink {

/// SplitMix64 generator. Used for seed derivation and for keyed
/// (counter-based) draws where the value must not depend on query order.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// Combines a parent seed with a counter into an independent child seed.
inline std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t counter) {
  SplitMix64 a(parent);
  std::uint64_t h = a();
  SplitMix64 b(h ^ (counter * 0xd1b54a32d192ed03ULL + 0x8cb92ba72f3d8dd7ULL));
  return b();
}

inline std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t c1,
                                 std::uint64_t c2) {
  return derive_seed(derive_seed(parent, c1), c2);
}

/// Purpose tags for seed derivation. Two seeds a user sets to the same number
/// (layout_seed and seed, say) still give unrelated streams.
enum class Stream : std::uint64_t {
  Layout = 1,
  SectorOffsets,
  Trial,
  Shadowing,
  Links,
  Validation,
};

inline std::uint64_t stream_seed(std::uint64_t master, Stream s) {
  return derive_seed(master ^ 0x6a09e667f3bcc909ULL,
                     static_cast<std::uint64_t>(s));
}

/// Per-trial random stream.
using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32)};
  return Rng(seq);
}

}  // namespace mmuplink
