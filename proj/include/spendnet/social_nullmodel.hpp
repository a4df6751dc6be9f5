#pragma once

#include <cstdint>
#include <vector>

#include "spendnet/class_consumption.hpp"
#include "spendnet/socioeco.hpp"
#include "spendnet/types.hpp"

namespace spendnet {

struct SwapPlan {
  int swap_multiplier = 5;  // attempted double-edge swaps per edge
  int replicas = 100;
  std::uint64_t seed = 1;

  void validate() const;
};

struct SwapStats {
  std::uint64_t attempted = 0;
  std::uint64_t applied = 0;
  std::uint64_t rejected = 0;  // would create a self-loop or multi-edge
};

/// Degree-preserving configuration-model randomization: performs
/// swap_multiplier * |E| attempted double-edge swaps; swaps that would
/// create a self-loop or multi-edge are counted and skipped (rejections
/// count toward the attempted total). Deterministic given
/// (plan.seed, replica_index).
SocialGraph edge_swap_randomize(const SocialGraph& g, const SwapPlan& plan,
                                std::uint32_t replica_index, SwapStats* stats = nullptr);

/// d^k(s_i,s_j): average absolute per-component difference of spending
/// vectors over the edges whose endpoints lie in the class pair. Pairs
/// with no edges are undefined (flagged by edge count 0), never zero.
struct ClassPairDiff {
  int n_classes = 0;
  std::vector<std::string> components;      // non-cash group ids of the vector set
  std::vector<std::vector<double>> diff;    // [component][pair]
  std::vector<double> diff_cash;            // the cash scalar, per pair
  std::vector<std::uint32_t> edge_counts;   // per pair

  static std::size_t pair_index(int i, int j, int n) {
    // unordered (i, j), 1-based; upper triangle including diagonal
    if (i > j) std::swap(i, j);
    int a = i - 1, b = j - 1;
    return static_cast<std::size_t>(a) * n - a * (a - 1) / 2 + (b - a);
  }
  static std::size_t pair_count(int n) { return static_cast<std::size_t>(n) * (n + 1) / 2; }
  bool defined(int i, int j) const { return edge_counts[pair_index(i, j, n_classes)] > 0; }
};

ClassPairDiff class_pair_diff(const SocialGraph& g, const SpendingVectorSet& vectors,
                              const ClassPartition& partition);

/// L_k(s_i,s_j) = d^k / <d_rn^k>: observed inter-class difference over
/// its mean across `replicas` degree-preserving randomizations.
/// L_sv averages L_k over the non-cash components; L_cash is the cash
/// scalar ratio. `*_se` is the null-model spread of the statistic (the
/// standard error of a single realization under the null), estimated
/// from the retained per-replica diffs. Entries are NaN where undefined
/// (no edges, or null denominator 0).
struct LRatioResult {
  int n_classes = 0;
  std::vector<std::string> components;
  ClassPairDiff original;
  std::vector<ClassPairDiff> null_diffs;  // per replica, retained

  std::vector<std::vector<double>> null_mean, null_sd;  // [component][pair]
  std::vector<double> null_mean_cash, null_sd_cash;
  std::vector<std::uint32_t> null_defined;  // replicas with edges, per pair

  std::vector<std::vector<double>> l_k;  // [component][pair]
  std::vector<double> l_sv, l_sv_se;
  std::vector<double> l_cash, l_cash_se;
};

LRatioResult l_ratio(const SocialGraph& g, const SpendingVectorSet& vectors,
                     const ClassPartition& partition, const SwapPlan& plan);

void write_l_matrix_csv(const LRatioResult& r, bool cash, const std::string& path);
void write_null_stats_csv(const LRatioResult& r, const std::string& path);

}  // namespace spendnet
