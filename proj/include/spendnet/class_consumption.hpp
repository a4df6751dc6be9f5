#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spendnet/socioeco.hpp"
#include "spendnet/taxonomy.hpp"
#include "spendnet/types.hpp"

namespace spendnet {

/// r(k, s_j): how each class's spending on group k splits the group's
/// total. Rows (fixed k) sum to 1 over classes.
struct GroupSpendingMatrix {
  std::vector<std::string> groups;  // full group index set, cash first
  int n_classes = 0;
  std::vector<double> shares;        // groups x classes, row-major
  std::vector<double> group_totals;  // group share of total spending
  std::vector<std::string> low_activity;  // flagged: combined share < threshold
  std::vector<std::string> omitted;       // zero total spending, row dropped

  double at(std::size_t group, int cls) const {
    return shares[group * n_classes + (cls - 1)];
  }
};

/// Every ego in the ledger must have a class. Groups whose combined
/// share of total spending stays under `low_share_threshold` are
/// reported in `low_activity` (they are kept in the matrix).
GroupSpendingMatrix group_spending_shares(const TransactionLedger& ledger,
                                          const ClassPartition& partition,
                                          const CategoryTaxonomy& taxonomy,
                                          double low_share_threshold = 0.003);

/// Dense per-ego spending vectors for one variant. Component order is
/// `group_ids`; `cash_share` is always the cash fraction of the
/// all-groups total.
class SpendingVectorSet {
 public:
  SpendingVariant variant = SpendingVariant::excluding_cash;
  std::vector<std::string> group_ids;
  std::vector<std::string> egos;  // ascending
  std::size_t excluded = 0;       // egos with no in-scope spending

  std::size_t size() const { return egos.size(); }
  std::size_t dims() const { return group_ids.size(); }
  const double* components(std::size_t i) const { return data_.data() + i * dims(); }
  double cash_share(std::size_t i) const { return cash_[i]; }
  std::optional<std::size_t> index_of(const std::string& ego) const;

  /// Validated single-ego view (core SpendingVector contract).
  SpendingVector at(std::size_t i) const;

  friend SpendingVectorSet spending_vectors(const TransactionLedger&, const CategoryTaxonomy&,
                                            SpendingVariant);
  friend SpendingVectorSet make_vector_set(SpendingVariant, std::vector<std::string>,
                                           std::vector<std::string>, std::vector<double>,
                                           std::vector<double>);

 private:
  std::vector<double> data_;  // egos x dims
  std::vector<double> cash_;
};

SpendingVectorSet spending_vectors(const TransactionLedger& ledger,
                                   const CategoryTaxonomy& taxonomy, SpendingVariant variant);

/// Test/support constructor from raw dense data (validates rows).
SpendingVectorSet make_vector_set(SpendingVariant variant, std::vector<std::string> group_ids,
                                  std::vector<std::string> egos, std::vector<double> data,
                                  std::vector<double> cash);

/// Per-class average vector, dispersion and entropy.
struct ClassVectorStats {
  SpendingVariant variant = SpendingVariant::excluding_cash;
  std::vector<std::string> group_ids;
  int n_classes = 0;
  std::vector<std::vector<double>> mean;  // per class (1-based -> index 0)
  std::vector<double> mean_cash;          // class mean of SV_1
  std::vector<std::size_t> members;       // egos per class
};

ClassVectorStats class_mean_vectors(const SpendingVectorSet& vectors,
                                    const ClassPartition& partition);

/// sigma_SV(s_j): mean Euclidean distance of member vectors to the class
/// mean. `.second` is the scalar version for the cash share.
std::pair<std::vector<double>, std::vector<double>> class_dispersion(
    const SpendingVectorSet& vectors, const ClassPartition& partition);

/// Shannon entropy of the class mean vector (natural log, 0 ln 0 = 0).
std::vector<double> class_entropy(const ClassVectorStats& stats);

/// Symmetric n x n matrix with zero diagonal.
struct ClassMatrix {
  int n = 0;
  std::vector<double> values;  // n x n
  double at(int i, int j) const { return values[(i - 1) * n + (j - 1)]; }
  double& at(int i, int j) { return values[(i - 1) * n + (j - 1)]; }
};

/// d_SV: Euclidean distance between class mean vectors.
ClassMatrix sv_distance_matrix(const ClassVectorStats& stats);
/// d_k1: absolute difference of class mean cash shares.
ClassMatrix cash_distance_matrix(const ClassVectorStats& stats);

void write_group_shares_csv(const GroupSpendingMatrix& m, const CategoryTaxonomy& taxonomy,
                            const std::string& path);
void write_class_means_csv(const ClassVectorStats& stats, const std::string& cash_group,
                           const std::string& path);
void write_distance_csv(const ClassMatrix& m, const std::string& path);
void write_dispersion_entropy_csv(const std::vector<double>& sigma_sv,
                                  const std::vector<double>& sigma_cash,
                                  const std::vector<double>& entropy_ex,
                                  const std::vector<double>& entropy_inc,
                                  const std::string& path);

}  // namespace spendnet
