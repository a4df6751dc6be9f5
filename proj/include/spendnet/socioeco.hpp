#pragma once

#include <map>
#include <string>
#include <vector>

#include "spendnet/types.hpp"

namespace spendnet {

/// Per-ego average monthly purchase: total spending divided by the
/// number of months with at least one purchase.
struct AmpTable {
  struct Entry {
    double amp = 0;        // money per active month
    int active_months = 0; // >= 1
  };
  std::map<std::string, Entry> by_ego;
  std::size_t excluded = 0;  // egos with zero purchases
};

AmpTable compute_amp(const TransactionLedger& ledger);

/// Points of the normalized cumulative AMP curve: egos sorted ascending
/// by AMP (ties by id), f = fraction of egos, C = fraction of total AMP.
struct CurvePoint {
  double f = 0;
  double cumulative = 0;
};
std::vector<CurvePoint> cumulative_curve(const AmpTable& amp);

/// Gini coefficient from a cumulative curve (trapezoid rule with an
/// implicit (0,0) point; matches the pairwise-difference definition).
double gini_from_curve(const std::vector<CurvePoint>& curve);

/// Assignment of egos to `n` ordered socioeconomic classes, each holding
/// (up to one boundary ego) the same total AMP. Class 1 is the lowest.
struct ClassPartition {
  struct ClassInfo {
    std::size_t size = 0;
    double amp_sum = 0;
    double mean_amp = 0;
    double min_amp = 0;
    double max_amp = 0;
  };
  int n = 0;
  std::map<std::string, int> assignment;  // ego -> 1..n
  std::vector<ClassInfo> classes;         // index 0 = class 1

  int class_of(const std::string& ego) const;
};

/// Equal-total-AMP partitioning: egos sorted ascending by (AMP, id); an
/// ego whose inclusion first reaches or crosses the j-th cumulative
/// target j*(sum AMP)/n closes class j.
ClassPartition partition_classes(const AmpTable& amp, int n = 9);

void write_classes_csv(const AmpTable& amp, const ClassPartition& p, const std::string& path);
void write_curve_csv(const std::vector<CurvePoint>& curve, const std::string& path);
ClassPartition load_classes_csv(const std::string& path);

}  // namespace spendnet
