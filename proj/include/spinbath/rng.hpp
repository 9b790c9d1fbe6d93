#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace spinbath {

// splitmix64: cheap, well-mixed 64-bit hash used to derive independent
// per-task streams from one root seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

// Deterministic seed for (root seed, task id). Every random draw in the
// project funnels through streams keyed this way, so results do not depend
// on scheduling or worker count.
inline std::uint64_t task_seed(std::uint64_t root, std::uint64_t task_id) {
  return splitmix64(root ^ splitmix64(task_id + 0x632be59bd9b4e019ULL));
}

inline std::uint64_t task_seed(std::uint64_t root, const std::string& task) {
  return task_seed(root, fnv1a64(task));
}

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed) { return Rng(splitmix64(seed)); }

}  // namespace spinbath
