#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace tgraph {

using Engine = std::mt19937_64;

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for trial `index` of stream `tag` under `master`. Depends only on the
/// three inputs, so trials can be scheduled in any order.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index,
                                    std::uint64_t tag = 0) noexcept {
  return mix64(mix64(mix64(master) ^ tag) + index);
}

/// Uniform double strictly inside (0,1), 53 bits of resolution.
inline double uniform_open(Engine& eng) {
  return (static_cast<double>(eng() >> 11) + 0.5) * 0x1.0p-53;
}

/// Number of failures before the first success of a Bernoulli(p) sequence,
/// 0 < p < 1.
inline std::uint64_t geometric_skip(Engine& eng, double log1m_p) {
  const double k = std::floor(std::log(uniform_open(eng)) / log1m_p);
  return k >= 1.8e19 ? UINT64_MAX : static_cast<std::uint64_t>(k);
}

inline std::uint64_t uniform_index(Engine& eng, std::uint64_t bound) {
  return std::uniform_int_distribution<std::uint64_t>(0, bound - 1)(eng);
}

}  // namespace tgraph
