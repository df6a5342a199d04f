#ifndef LSSW_RNG_HPP
#define LSSW_RNG_HPP

#include <cstdint>

namespace lssw {

// Counter-based splittable generator (splitmix64 finalizer on seed/counter
// pairs). Draw i is a pure function of (seed, i), so streams can be split
// and replayed without shared state.
inline std::uint64_t mix_bits(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Uniform draw in the open interval (0,1).
inline double uniform01(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = mix_bits(mix_bits(seed) ^ (index * 0xD1342543DE82EF95ull + 1));
  return ((z >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace lssw

#endif
