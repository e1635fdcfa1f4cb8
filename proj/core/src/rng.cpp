#include "pun/rng.hpp"

#include <cmath>

namespace pun {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finaliser over seed and stream
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double uniform_open(Rng& rng) {
  // 53 random mantissa bits, shifted off zero by half an ulp of the grid.
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

double gumbel(Rng& rng) { return -std::log(-std::log(uniform_open(rng))); }

}  // namespace pun
