// Seed derivation. Every random stream in the library is an mt19937_64
// seeded from a user seed through this mixer, so that independent stages
// (init, shuffling, noise, task sampling) never share a stream.
#pragma once

#include <cstdint>
#include <random>

namespace docseg {

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  // splitmix64 finalizer over base offset by a per-stream golden-ratio step.
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::mt19937_64 make_rng(std::uint64_t base, std::uint64_t stream) {
  return std::mt19937_64(derive_seed(base, stream));
}

}  // namespace docseg
