// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

namespace gstable {

/// SplitMix64: counter-style generator with an explicit seed.  Substreams are
/// derived by hashing (seed, index) so workers can own disjoint streams
/// without shared state.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform on the open interval (0, 1); safe to pass to log().
  double uniform_open() {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Derived substream seed for (seed, index) pairs.
  static std::uint64_t substream(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 h(seed ^ (0x9E3779B97F4A7C15ULL * (index + 1)));
    h.next();
    return h.next();
  }

 private:
  std::uint64_t state_;
};

}  // namespace gstable
