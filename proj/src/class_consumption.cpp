#include "spendnet/class_consumption.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "spendnet/csv.hpp"

namespace spendnet {

GroupSpendingMatrix group_spending_shares(const TransactionLedger& ledger,
                                          const ClassPartition& partition,
                                          const CategoryTaxonomy& taxonomy,
                                          double low_share_threshold) {
  GroupSpendingMatrix m;
  m.groups = taxonomy.group_ids();
  m.n_classes = partition.n;
  std::map<std::string, std::size_t> group_index;
  for (std::size_t k = 0; k < m.groups.size(); ++k) group_index.emplace(m.groups[k], k);

  // group x class totals in cents (order-independent)
  std::vector<std::int64_t> totals(m.groups.size() * partition.n, 0);
  std::vector<std::int64_t> group_cents(m.groups.size(), 0);
  for (const auto& [ego, rows] : ledger.by_ego()) {
    int cls = partition.class_of(ego);  // throws if unassigned (precondition)
    for (const auto& r : rows) {
      auto g = taxonomy.pcg_of(r.mcc);
      if (!g) continue;  // unknown mcc: not attributable to a group
      auto k = group_index.at(*g);
      totals[k * partition.n + (cls - 1)] += r.amount.cents();
      group_cents[k] += r.amount.cents();
    }
  }

  std::int64_t all_cents = std::accumulate(group_cents.begin(), group_cents.end(), std::int64_t{0});
  if (all_cents <= 0) throw Error("group_spending_shares: no attributable spending");

  m.shares.assign(totals.size(), 0.0);
  m.group_totals.resize(m.groups.size());
  for (std::size_t k = 0; k < m.groups.size(); ++k) {
    m.group_totals[k] = static_cast<double>(group_cents[k]) / static_cast<double>(all_cents);
    if (group_cents[k] == 0) {
      m.omitted.push_back(m.groups[k]);
      continue;
    }
    for (int j = 0; j < partition.n; ++j)
      m.shares[k * partition.n + j] =
          static_cast<double>(totals[k * partition.n + j]) / static_cast<double>(group_cents[k]);
  }

  // Low-activity flag: the largest set of smallest groups whose combined
  // share stays under the threshold.
  std::vector<std::size_t> by_total(m.groups.size());
  std::iota(by_total.begin(), by_total.end(), 0);
  std::sort(by_total.begin(), by_total.end(),
            [&](std::size_t a, std::size_t b) { return group_cents[a] < group_cents[b]; });
  double cum = 0;
  for (auto k : by_total) {
    if (group_cents[k] == 0) continue;  // already omitted
    cum += m.group_totals[k];
    if (cum >= low_share_threshold) break;
    m.low_activity.push_back(m.groups[k]);
  }
  std::sort(m.low_activity.begin(), m.low_activity.end());
  return m;
}

std::optional<std::size_t> SpendingVectorSet::index_of(const std::string& ego) const {
  auto it = std::lower_bound(egos.begin(), egos.end(), ego);
  if (it == egos.end() || *it != ego) return std::nullopt;
  return static_cast<std::size_t>(it - egos.begin());
}

SpendingVector SpendingVectorSet::at(std::size_t i) const {
  std::map<std::string, double> comp;
  const double* row = components(i);
  for (std::size_t k = 0; k < dims(); ++k) comp.emplace(group_ids[k], row[k]);
  return SpendingVector::checked(egos[i], variant, std::move(comp), cash_[i]);
}

SpendingVectorSet make_vector_set(SpendingVariant variant, std::vector<std::string> group_ids,
                                  std::vector<std::string> egos, std::vector<double> data,
                                  std::vector<double> cash) {
  SpendingVectorSet s;
  s.variant = variant;
  s.group_ids = std::move(group_ids);
  s.egos = std::move(egos);
  s.data_ = std::move(data);
  s.cash_ = std::move(cash);
  if (s.data_.size() != s.egos.size() * s.group_ids.size() || s.cash_.size() != s.egos.size())
    throw Error("make_vector_set: shape mismatch");
  for (std::size_t i = 0; i < s.size(); ++i) s.at(i);  // validate
  return s;
}

SpendingVectorSet spending_vectors(const TransactionLedger& ledger,
                                   const CategoryTaxonomy& taxonomy, SpendingVariant variant) {
  SpendingVectorSet set;
  set.variant = variant;
  set.group_ids = variant == SpendingVariant::excluding_cash ? taxonomy.non_cash_group_ids()
                                                             : taxonomy.group_ids();
  std::map<std::string, std::size_t> group_index;
  for (std::size_t k = 0; k < set.group_ids.size(); ++k)
    group_index.emplace(set.group_ids[k], k);

  const auto& cash_group = taxonomy.cash_group();
  for (const auto& [ego, rows] : ledger.by_ego()) {
    std::vector<std::int64_t> cents(set.group_ids.size(), 0);
    std::int64_t cash_cents = 0, full_total = 0, in_scope = 0;
    for (const auto& r : rows) {
      auto g = taxonomy.pcg_of(r.mcc);
      if (!g) continue;
      full_total += r.amount.cents();
      if (*g == cash_group) cash_cents += r.amount.cents();
      auto it = group_index.find(*g);
      if (it != group_index.end()) {
        cents[it->second] += r.amount.cents();
        in_scope += r.amount.cents();
      }
    }
    if (in_scope <= 0) {
      ++set.excluded;
      continue;
    }
    set.egos.push_back(ego);
    for (auto c : cents) set.data_.push_back(static_cast<double>(c) / static_cast<double>(in_scope));
    set.cash_.push_back(full_total > 0
                            ? static_cast<double>(cash_cents) / static_cast<double>(full_total)
                            : 0.0);
  }
  return set;
}

ClassVectorStats class_mean_vectors(const SpendingVectorSet& vectors,
                                    const ClassPartition& partition) {
  ClassVectorStats stats;
  stats.variant = vectors.variant;
  stats.group_ids = vectors.group_ids;
  stats.n_classes = partition.n;
  stats.mean.assign(partition.n, std::vector<double>(vectors.dims(), 0.0));
  stats.mean_cash.assign(partition.n, 0.0);
  stats.members.assign(partition.n, 0);
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    int cls = partition.class_of(vectors.egos[i]);
    const double* row = vectors.components(i);
    for (std::size_t k = 0; k < vectors.dims(); ++k) stats.mean[cls - 1][k] += row[k];
    stats.mean_cash[cls - 1] += vectors.cash_share(i);
    ++stats.members[cls - 1];
  }
  for (int j = 0; j < partition.n; ++j) {
    if (stats.members[j] == 0) continue;
    for (auto& v : stats.mean[j]) v /= static_cast<double>(stats.members[j]);
    stats.mean_cash[j] /= static_cast<double>(stats.members[j]);
  }
  return stats;
}

std::pair<std::vector<double>, std::vector<double>> class_dispersion(
    const SpendingVectorSet& vectors, const ClassPartition& partition) {
  auto stats = class_mean_vectors(vectors, partition);
  std::vector<double> sigma(partition.n, 0.0), sigma_cash(partition.n, 0.0);
  std::vector<std::size_t> count(partition.n, 0);
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    int cls = partition.class_of(vectors.egos[i]);
    const double* row = vectors.components(i);
    double ss = 0;
    for (std::size_t k = 0; k < vectors.dims(); ++k) {
      double d = row[k] - stats.mean[cls - 1][k];
      ss += d * d;
    }
    sigma[cls - 1] += std::sqrt(ss);
    sigma_cash[cls - 1] += std::abs(vectors.cash_share(i) - stats.mean_cash[cls - 1]);
    ++count[cls - 1];
  }
  for (int j = 0; j < partition.n; ++j) {
    if (count[j] == 0) continue;
    sigma[j] /= static_cast<double>(count[j]);
    sigma_cash[j] /= static_cast<double>(count[j]);
  }
  return {sigma, sigma_cash};
}

std::vector<double> class_entropy(const ClassVectorStats& stats) {
  std::vector<double> entropy(stats.n_classes, 0.0);
  for (int j = 0; j < stats.n_classes; ++j) {
    double s = 0;
    for (double v : stats.mean[j])
      if (v > 0) s -= v * std::log(v);
    entropy[j] = s;
  }
  return entropy;
}

ClassMatrix sv_distance_matrix(const ClassVectorStats& stats) {
  ClassMatrix m;
  m.n = stats.n_classes;
  m.values.assign(static_cast<std::size_t>(m.n) * m.n, 0.0);
  for (int i = 1; i <= m.n; ++i) {
    for (int j = i + 1; j <= m.n; ++j) {
      double ss = 0;
      for (std::size_t k = 0; k < stats.group_ids.size(); ++k) {
        double d = stats.mean[i - 1][k] - stats.mean[j - 1][k];
        ss += d * d;
      }
      m.at(i, j) = m.at(j, i) = std::sqrt(ss);
    }
  }
  return m;
}

ClassMatrix cash_distance_matrix(const ClassVectorStats& stats) {
  ClassMatrix m;
  m.n = stats.n_classes;
  m.values.assign(static_cast<std::size_t>(m.n) * m.n, 0.0);
  for (int i = 1; i <= m.n; ++i)
    for (int j = i + 1; j <= m.n; ++j)
      m.at(i, j) = m.at(j, i) = std::abs(stats.mean_cash[i - 1] - stats.mean_cash[j - 1]);
  return m;
}

void write_group_shares_csv(const GroupSpendingMatrix& m, const CategoryTaxonomy& taxonomy,
                            const std::string& path) {
  std::vector<std::string> header = {"pcg_id", "pcg_name", "total_share", "low_activity"};
  for (int j = 1; j <= m.n_classes; ++j) header.push_back("s" + std::to_string(j));
  CsvWriter w(path, header);
  for (std::size_t k = 0; k < m.groups.size(); ++k) {
    if (std::find(m.omitted.begin(), m.omitted.end(), m.groups[k]) != m.omitted.end()) continue;
    bool low = std::find(m.low_activity.begin(), m.low_activity.end(), m.groups[k]) !=
               m.low_activity.end();
    std::vector<std::string> row = {m.groups[k], taxonomy.pcg_names().at(m.groups[k]),
                                    format_double(m.group_totals[k]), low ? "1" : "0"};
    for (int j = 1; j <= m.n_classes; ++j) row.push_back(format_double(m.at(k, j)));
    w.row(row);
  }
}

void write_class_means_csv(const ClassVectorStats& stats, const std::string& cash_group,
                           const std::string& path) {
  CsvWriter w(path, {"class", "pcg_id", "mean_share"});
  for (int j = 1; j <= stats.n_classes; ++j) {
    for (std::size_t k = 0; k < stats.group_ids.size(); ++k)
      w.row({std::to_string(j), stats.group_ids[k], format_double(stats.mean[j - 1][k])});
    if (stats.variant == SpendingVariant::excluding_cash)
      w.row({std::to_string(j), cash_group, format_double(stats.mean_cash[j - 1])});
  }
}

void write_distance_csv(const ClassMatrix& m, const std::string& path) {
  CsvWriter w(path, {"class_i", "class_j", "d"});
  for (int i = 1; i <= m.n; ++i)
    for (int j = 1; j <= m.n; ++j)
      w.row({std::to_string(i), std::to_string(j), format_double(m.at(i, j))});
}

void write_dispersion_entropy_csv(const std::vector<double>& sigma_sv,
                                  const std::vector<double>& sigma_cash,
                                  const std::vector<double>& entropy_ex,
                                  const std::vector<double>& entropy_inc,
                                  const std::string& path) {
  CsvWriter w(path, {"class", "sigma_sv", "sigma_k1", "entropy_ex_cash", "entropy_inc_cash"});
  for (std::size_t j = 0; j < sigma_sv.size(); ++j)
    w.row({std::to_string(j + 1), format_double(sigma_sv[j]), format_double(sigma_cash[j]),
           format_double(entropy_ex[j]), format_double(entropy_inc[j])});
}

}  // namespace spendnet
