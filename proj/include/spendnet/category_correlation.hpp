#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spendnet/louvain.hpp"
#include "spendnet/taxonomy.hpp"
#include "spendnet/types.hpp"

namespace spendnet {

/// Per-ego purchase distributions over retained merchant categories.
/// Cash and unknown mccs are excluded before normalization; categories
/// with fewer than `min_purchases` purchase rows corpus-wide are dropped.
struct PurchaseDistributionSet {
  std::vector<int> mccs;  // retained categories, ascending
  std::vector<std::string> egos;
  std::vector<std::vector<std::pair<std::uint32_t, double>>> entries;  // (cat index, r), per ego
  std::size_t excluded_egos = 0;              // no in-scope purchases
  std::map<int, std::uint64_t> dropped_low;   // category -> corpus purchase count

  std::size_t size() const { return egos.size(); }
  /// Validated single-ego view (core PurchaseDistribution contract).
  PurchaseDistribution at(std::size_t i, const CategoryTaxonomy* taxonomy = nullptr) const;
};

PurchaseDistributionSet purchase_distributions(const TransactionLedger& ledger,
                                               const CategoryTaxonomy& taxonomy,
                                               std::uint64_t min_purchases = 100);

/// rho(c_i, c_j) = n * sum_u r_i r_j / (sum_u r_i * sum_u r_j), the
/// co-spending correlation between categories. Symmetric by
/// construction; pairs with a zero denominator are NaN.
struct CorrelationMatrix {
  std::vector<int> mccs;  // ascending
  std::size_t n_egos = 0;
  std::vector<double> rho;                   // upper triangle incl. diagonal
  std::vector<std::uint32_t> common_counts;  // egos purchasing both
  std::vector<double> sums;                  // sum_u r_i(u) per category

  std::size_t tri(std::size_t i, std::size_t j) const {
    if (i > j) std::swap(i, j);
    return i * mccs.size() - i * (i - 1) / 2 + (j - i);
  }
  double rho_at(std::size_t i, std::size_t j) const { return rho[tri(i, j)]; }
  std::uint32_t common_at(std::size_t i, std::size_t j) const { return common_counts[tri(i, j)]; }
};

/// Sparse accumulation over each ego's nonzero categories.
CorrelationMatrix correlation_matrix(const PurchaseDistributionSet& dist);

/// Thresholded correlation graph: edges with rho > rho_min and at least
/// min_common common consumers; isolated nodes dropped. Communities are
/// empty until louvain_communities runs.
struct CategoryCorrelationGraph {
  std::vector<int> mccs;  // nodes, ascending
  std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> edges;
  std::vector<int> community;  // per node, 1-based; empty before detection
  double modularity = 0;
  std::uint64_t min_common_used = 0;
};

/// min_common defaults to max(10, 1000 * n / 3,680,652): the reference
/// corpus behind the >= 1000-consumer rule had 3,680,652 egos, so the
/// cutoff scales down for desk-size corpora.
CategoryCorrelationGraph build_graph(const CorrelationMatrix& m, double rho_min = 1.5,
                                     std::optional<std::uint64_t> min_common = std::nullopt);

/// Louvain over the rho-weighted graph. Community count is emergent.
void louvain_communities(CategoryCorrelationGraph& g, std::uint64_t seed = 1, int restarts = 1);

void write_rho_csv(const CorrelationMatrix& m, const std::string& path);
void write_graph_edges_csv(const CategoryCorrelationGraph& g, const std::string& path);
void write_communities_csv(const CategoryCorrelationGraph& g, const std::string& path);
CategoryCorrelationGraph load_graph_edges_csv(const std::string& path);

}  // namespace spendnet
