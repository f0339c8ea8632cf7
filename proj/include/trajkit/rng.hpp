#pragma once

#include <cstdint>
#include <random>

namespace trajkit {

using Rng = std::mt19937_64;

/// splitmix64 finalizer, used to decorrelate derived seeds.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for an independent stream identified by (seed, id). Work that fans
/// out per trajectory draws from derived_seed(seed, id) so results do not
/// depend on the execution schedule.
inline std::uint64_t derived_seed(std::uint64_t seed, std::uint64_t id) {
  return mix64(seed ^ mix64(id));
}

inline std::uint64_t derived_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return derived_seed(derived_seed(seed, a), b);
}

inline Rng make_rng(std::uint64_t seed) { return Rng(mix64(seed)); }

}  // namespace trajkit
