#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace glmdp {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// FNV-1a, used to turn stream names ("gpevi", "cv") into stream ids.
inline std::uint64_t hash_name(std::string_view name) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : name) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Derives an independent seed from a master seed and a path of stream ids.
// Streams with different paths do not shift each other.
inline std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
  std::uint64_t s = splitmix64(seed);
  for (std::uint64_t p : path) s = splitmix64(s ^ splitmix64(p + 0x632be59bd9b4e019ULL));
  return s;
}

inline Rng make_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> path = {}) {
  return Rng(derive_seed(seed, path));
}

inline double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

// Well-known stream ids.
namespace streams {
inline constexpr std::uint64_t kEpisode = 1;
inline constexpr std::uint64_t kEnvParams = 2;
inline constexpr std::uint64_t kPilot = 3;
inline constexpr std::uint64_t kFolds = 4;
inline constexpr std::uint64_t kRollout = 5;
inline constexpr std::uint64_t kTest = 6;
inline constexpr std::uint64_t kTrain = 7;
}  // namespace streams

}  // namespace glmdp
