#pragma once

// Seed derivation for reproducible, order-independent random streams.
// Every consumer (support, values, matrix, noise) gets its own generator
// seeded from a hash of (seed, stream id), so trials can be executed in
// any order or on any thread without perturbing each other's draws.

#include <cstdint>
#include <initializer_list>
#include <random>

namespace modgamp {

using RngStream = std::mt19937_64;

enum class StreamId : std::uint64_t {
  kSupport = 1,
  kValues = 2,
  kMatrix = 3,
  kNoise = 4,
};

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Hashes a base seed together with an ordered list of indices.
constexpr std::uint64_t derive_seed(std::uint64_t base,
                                    std::initializer_list<std::uint64_t> keys) noexcept {
  std::uint64_t h = mix64(base);
  for (const std::uint64_t k : keys) h = mix64(h ^ mix64(k));
  return h;
}

inline RngStream make_stream(std::uint64_t seed, StreamId id) {
  return RngStream(derive_seed(seed, {static_cast<std::uint64_t>(id)}));
}

}  // namespace modgamp
