#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "spendnet/common.hpp"
#include "spendnet/taxonomy.hpp"

namespace spendnet {

struct EgoProfile {
  std::string id;
  int age = 0;                    // years, >= 0
  std::optional<Gender> gender;   // records without gender are excluded
                                  // from gender-weighted statistics only
  std::string zip;                // optional
};

using ProfileMap = std::map<std::string, EgoProfile>;

struct LedgerRow {
  int month = 0;  // flat month index, see parse_month
  int mcc = 0;
  Money amount;
};

/// Per-ego purchase records. Egos iterate in id order, so every
/// aggregation over the ledger is deterministic.
class TransactionLedger {
 public:
  void add(const std::string& ego, int month, int mcc, Money amount);
  bool empty() const { return rows_.empty(); }
  std::size_t ego_count() const { return rows_.size(); }
  std::size_t row_count() const;

  const std::map<std::string, std::vector<LedgerRow>>& by_ego() const { return rows_; }
  const std::vector<LedgerRow>* rows_for(const std::string& ego) const;

  /// Distinct months with at least one purchase.
  static int active_months(const std::vector<LedgerRow>& rows);

  /// Keeps only egos present in `keep`.
  TransactionLedger restricted_to(const std::vector<std::string>& keep) const;

 private:
  std::map<std::string, std::vector<LedgerRow>> rows_;
};

/// Undirected simple graph over ego identifiers. Nodes are dense
/// indices into `ids()`; edges are canonical (a < b), sorted, unique.
class SocialGraph {
 public:
  using Edge = std::pair<std::uint32_t, std::uint32_t>;

  /// Canonicalizes, deduplicates and validates raw edges. Self-loops are
  /// rejected. `ids` must be unique.
  static SocialGraph build(std::vector<std::string> ids, std::vector<Edge> edges);

  std::size_t node_count() const { return ids_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<std::string>& ids() const { return ids_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::optional<std::uint32_t> index_of(const std::string& id) const;

  std::vector<std::uint32_t> degrees() const;

  /// Compressed adjacency, built on demand.
  struct Adjacency {
    std::vector<std::uint32_t> offsets;  // node -> [offsets[n], offsets[n+1])
    std::vector<std::uint32_t> neighbors;
  };
  Adjacency adjacency() const;

  /// Induced subgraph on the given node indices (ids preserved).
  SocialGraph induced(const std::vector<std::uint32_t>& nodes) const;

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, std::uint32_t> index_;
  std::vector<Edge> edges_;
};

/// Numeric Pearson assortativity of an integer node attribute over the
/// edges of a graph (symmetrized). NaN if degenerate.
double attribute_assortativity(const SocialGraph& g, const std::vector<int>& value_of_node);

enum class SpendingVariant { excluding_cash, including_cash };

/// Fraction of spending per purchase-category group for one owner
/// (an ego or a class). Components cover exactly the variant's index
/// set: the non-cash groups for excluding_cash, all groups for
/// including_cash. `cash_share` is always the cash fraction of the
/// full-including-cash total.
struct SpendingVector {
  std::string owner;
  SpendingVariant variant = SpendingVariant::excluding_cash;
  std::map<std::string, double> components;
  double cash_share = 0.0;

  /// Validates the sum-to-one invariant (1e-9) and component bounds.
  static SpendingVector checked(std::string owner, SpendingVariant variant,
                                std::map<std::string, double> components, double cash_share);
};

/// Per-ego fraction of spending across individual merchant categories,
/// cash and invalid codes excluded before normalization.
struct PurchaseDistribution {
  std::string ego;
  std::vector<std::pair<int, double>> entries;  // (mcc, fraction), mcc ascending

  /// Validates normalization and, given a taxonomy, absence of cash mccs.
  static PurchaseDistribution checked(std::string ego, std::vector<std::pair<int, double>> entries,
                                      const CategoryTaxonomy* taxonomy = nullptr);
};

}  // namespace spendnet
