#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace hmz {

inline std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Independent stream for one (seed, experiment, n, trial) cell.
inline std::mt19937_64 cell_rng(std::uint64_t seed, std::string_view experiment, std::uint64_t n, std::uint64_t trial) {
  const std::uint64_t id = fnv1a(experiment);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(id),   static_cast<std::uint32_t>(id >> 32),
                    static_cast<std::uint32_t>(n),    static_cast<std::uint32_t>(n >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace hmz
