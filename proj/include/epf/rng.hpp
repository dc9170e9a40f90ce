#pragma once

#include <cstdint>
#include <random>

namespace epf {

/// SplitMix64 step. Advances `state` and returns the next output word.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Derives an independent substream seed from a root seed and up to three
/// stream identifiers. Counter-based, so the derivation is order-free: workers
/// can pull their seeds in any schedule without changing the streams.
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t a = 0,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
  std::uint64_t s = root;
  splitmix64(s);
  s ^= a;
  splitmix64(s);
  s ^= b;
  splitmix64(s);
  s ^= c;
  return splitmix64(s);
}

/// Engine used throughout; one instance per logical stream, never shared.
inline std::mt19937_64 make_engine(std::uint64_t seed) {
  return std::mt19937_64(seed);
}

}  // namespace epf
