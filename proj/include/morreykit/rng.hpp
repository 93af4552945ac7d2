#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace morreykit {

// All randomness flows from one seed through labeled streams; a stream's
// draws depend only on (seed, label), never on draw order elsewhere.
inline std::mt19937_64 labeled_rng(std::uint64_t seed, const std::string& label) {
  std::uint64_t h = seed * 0x9e3779b97f4a7c15ull + 0x2545f4914f6cdd1dull;
  for (char c : label) {
    h ^= static_cast<std::uint64_t>(static_cast<unsigned char>(c));
    h *= 0x100000001b3ull;
    h ^= h >> 29;
  }
  // splitmix finalization
  h += 0x9e3779b97f4a7c15ull;
  h = (h ^ (h >> 30)) * 0xbf58476d1ce4e5b9ull;
  h = (h ^ (h >> 27)) * 0x94d049bb133111ebull;
  h = h ^ (h >> 31);
  return std::mt19937_64(h);
}

inline double uniform(std::mt19937_64& g, double lo, double hi) {
  // fixed 53-bit mapping, stable across standard library versions
  double u = static_cast<double>(g() >> 11) * 0x1p-53;
  return lo + (hi - lo) * u;
}

inline std::int64_t uniform_index(std::mt19937_64& g, std::int64_t n) {
  return static_cast<std::int64_t>(g() % static_cast<std::uint64_t>(n));
}

}  // namespace morreykit
