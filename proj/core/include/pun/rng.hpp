#pragma once

#include <cstdint>
#include <random>

namespace pun {

using Rng = std::mt19937_64;

/// Mixes a base seed with a stream tag so that independent components
/// (phantom, maps, mask, noise, ...) never share a random stream.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

inline Rng make_rng(std::uint64_t seed, std::uint64_t stream) {
  return Rng(derive_seed(seed, stream));
}

/// Uniform draw on the open interval (0, 1).
double uniform_open(Rng& rng);

/// Standard Gumbel draw, -log(-log(U)).
double gumbel(Rng& rng);

namespace streams {
inline constexpr std::uint64_t kPhantom = 1;
inline constexpr std::uint64_t kMaps = 2;
inline constexpr std::uint64_t kMask = 3;
inline constexpr std::uint64_t kNoise = 4;
inline constexpr std::uint64_t kInit = 5;
inline constexpr std::uint64_t kShuffle = 6;
inline constexpr std::uint64_t kGumbel = 7;
inline constexpr std::uint64_t kEval = 8;
}  // namespace streams

}  // namespace pun
