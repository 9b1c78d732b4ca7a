// SPDX-License-Identifier: Apache-2.0
#ifndef GFPL_RNG_HPP
#define GFPL_RNG_HPP

#include <cmath>
#include <cstdint>

namespace gfpl {

// SplitMix64 output function (Vigna's fixed-increment SplittableRandom).
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * UINT64_C(0xBF58476D1CE4E5B9);
  z = (z ^ (z >> 27)) * UINT64_C(0x94D049BB133111EB);
  return z ^ (z >> 31);
}

// Counter-based generator keyed by (seed, stream). Output j of stream i is
// mix64(state0(seed, i) + j * GOLDEN), so draws depend only on the key and
// the counter, never on which thread runs the stream.
class PathRng {
 public:
  PathRng(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t key = mix64(seed + UINT64_C(0x9E3779B97F4A7C15));
    state_ = mix64(key ^ (stream * UINT64_C(0xBF58476D1CE4E5B9) +
                          UINT64_C(0xD1B54A32D192ED03)));
  }

  std::uint64_t next_u64() {
    state_ += UINT64_C(0x9E3779B97F4A7C15);
    return mix64(state_);
  }

  // Uniform on the open interval (0, 1).
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double exponential(double rate) { return -std::log(uniform()) / rate; }

 private:
  std::uint64_t state_;
};

}  // namespace gfpl

#endif  // GFPL_RNG_HPP
