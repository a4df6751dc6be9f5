#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spendnet/common.hpp"

namespace spendnet {

struct MerchantCategory {
  int mcc = 0;
  std::string name;
  std::string pcg;  // purchase-category-group id; empty = unassigned
};

/// The merchant-category taxonomy: category codes, their names, and the
/// grouping into purchase category groups (PCGs). Exactly one group is
/// the designated cash/transfer group; its purchases are analyzed
/// separately from the rest and excluded from per-category
/// distributions. Immutable after load.
class CategoryTaxonomy {
 public:
  static CategoryTaxonomy load(const std::string& path);
  static CategoryTaxonomy from_rows(std::vector<MerchantCategory> categories,
                                    std::map<std::string, std::string> pcg_names,
                                    std::string cash_group);
  void save(const std::string& path) const;

  /// Group id for an mcc; nullopt for unknown codes or ungrouped rows.
  std::optional<std::string> pcg_of(int mcc) const;
  bool contains(int mcc) const { return by_mcc_.count(mcc) != 0; }
  bool is_cash_mcc(int mcc) const;
  const MerchantCategory* find(int mcc) const;

  const std::vector<MerchantCategory>& categories() const { return categories_; }
  const std::map<std::string, std::string>& pcg_names() const { return pcg_names_; }
  const std::string& cash_group() const { return cash_group_; }

  /// All group ids in natural order (k1, k2, ..., k10, ...); first the
  /// cash group, then the rest. This is the K_17-style full index set.
  std::vector<std::string> group_ids() const;
  /// Non-cash groups only (the K_2-17-style index set).
  std::vector<std::string> non_cash_group_ids() const;

  std::size_t non_cash_category_count() const;

  /// Path of the taxonomy bundled with the source tree.
  static std::string default_path();

 private:
  std::vector<MerchantCategory> categories_;  // sorted by mcc
  std::map<int, std::size_t> by_mcc_;
  std::map<std::string, std::string> pcg_names_;
  std::string cash_group_;
};

}  // namespace spendnet
