#pragma once

#include <cstdint>

namespace voxpose {

// splitmix64 step (Steele, Lea, Flood 2014). Used to spawn independent seeds
// from a master seed so each pose run is reproducible in isolation.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Seed for stream `stream` item `index`, derived from `master`.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                 std::uint64_t index) {
  std::uint64_t s = master;
  std::uint64_t a = splitmix64(s);
  s = a ^ (stream * 0xd1342543de82ef95ull + 0x2545f4914f6cdd1dull);
  std::uint64_t b = splitmix64(s);
  s = b ^ (index * 0xda942042e4dd58b5ull + 1);
  return splitmix64(s);
}

}  // namespace voxpose
