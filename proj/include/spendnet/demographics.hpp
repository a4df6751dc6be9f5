#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spendnet/category_correlation.hpp"
#include "spendnet/kmeans.hpp"
#include "spendnet/socioeco.hpp"
#include "spendnet/types.hpp"

namespace spendnet {

/// Per-category weighted averages of purchaser age, gender and
/// socioeconomic group: purchasers are grouped by feature value, each
/// value weighted by its group's mean purchase fraction r(c_i, u).
/// Gender is encoded 0 = female, 1 = male; egos without gender are
/// excluded from the gender average only.
struct CategoryFeatureSet {
  struct Row {
    int key = 0;  // mcc (or community id for pooled variants)
    double age = 0;
    double gender = 0;  // in [0,1]; NaN when no gendered purchaser
    double seg = 0;     // in [1, n_classes]
    std::uint32_t purchasers = 0;
  };
  std::vector<Row> rows;          // ascending key
  std::vector<int> excluded;      // categories with no valid purchaser
};

CategoryFeatureSet afs(const PurchaseDistributionSet& dist, const ProfileMap& profiles,
                       const ClassPartition& partition);

/// Community-level variant: pools all purchases of a community's
/// categories, then applies the same weighted-average machinery.
CategoryFeatureSet community_afs(const PurchaseDistributionSet& dist,
                                 const CategoryCorrelationGraph& labeled_graph,
                                 const ProfileMap& profiles, const ClassPartition& partition);

struct PearsonResult {
  double r = 0;
  double p_value = 1;
  std::size_t n = 0;
};

/// Product-moment correlation with a two-sided p-value from the
/// t-distribution (n-2 degrees of freedom). Throws on length mismatch,
/// n < 3, or zero variance.
PearsonResult pearson(const std::vector<double>& x, const std::vector<double>& y);

void write_afs_csv(const CategoryFeatureSet& f, const std::string& key_column,
                   const std::string& path);
void write_clusters_csv(const CategoryFeatureSet& f, const ClusteringResult& clustering,
                        const std::string& path);
void write_selection_csv(const ClusteringResult& clustering, const std::string& path);

}  // namespace spendnet
