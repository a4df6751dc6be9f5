#pragma once

#include <cstdint>
#include <random>

namespace spendnet {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed-splitting function: every independent random stream (null-model
// replica, generator stage, k-means restart) draws its seed as
// derive_seed(master, stream_id), which keeps parallel streams
// deterministic and decoupled.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream_id) {
  return splitmix64(master ^ splitmix64(stream_id));
}

inline std::mt19937_64 make_rng(std::uint64_t master, std::uint64_t stream_id) {
  return std::mt19937_64(derive_seed(master, stream_id));
}

}  // namespace spendnet
