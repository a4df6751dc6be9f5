#pragma once

#include <cstdint>
#include <tuple>
#include <vector>

namespace spendnet {

/// Undirected weighted graph over dense node indices, for community
/// detection. No self-loops in input.
struct WeightedGraph {
  std::size_t n = 0;
  std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> edges;
};

struct LouvainResult {
  std::vector<int> labels;              // per node, 0-based community
  double modularity = 0;
  std::vector<double> pass_modularity;  // non-decreasing across passes
};

/// Weighted-modularity Louvain. Node visiting order is a seeded shuffle,
/// gain ties go to the smallest community label, and `restarts` runs with
/// derived seeds keep the best modularity (ties to the lowest restart
/// index), so the result is deterministic under `seed`.
LouvainResult louvain(const WeightedGraph& g, std::uint64_t seed = 1, int restarts = 1);

/// Newman weighted modularity of a labeling.
double modularity_of(const WeightedGraph& g, const std::vector<int>& labels);

}  // namespace spendnet
