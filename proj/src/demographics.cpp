#include "spendnet/demographics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <boost/math/distributions/students_t.hpp>

#include "spendnet/csv.hpp"

namespace spendnet {

namespace {

// Weighted mean over distinct feature values: alpha(v) is the mean
// purchase fraction of the purchasers sharing value v.
std::optional<double> value_group_mean(const std::vector<std::pair<int, double>>& value_and_r) {
  if (value_and_r.empty()) return std::nullopt;
  std::map<int, std::pair<double, std::uint32_t>> groups;  // value -> (sum r, count)
  for (auto [v, r] : value_and_r) {
    auto& g = groups[v];
    g.first += r;
    g.second += 1;
  }
  double num = 0, den = 0;
  for (const auto& [v, g] : groups) {
    double alpha = g.first / g.second;
    num += alpha * v;
    den += alpha;
  }
  if (den <= 0) return std::nullopt;
  return num / den;
}

CategoryFeatureSet afs_impl(
    const std::vector<int>& keys,
    const std::vector<std::vector<std::pair<std::string, double>>>& purchasers,
    const ProfileMap& profiles, const ClassPartition& partition) {
  CategoryFeatureSet out;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    std::vector<std::pair<int, double>> ages, genders, segs;
    std::uint32_t n_valid = 0;
    for (const auto& [ego, r] : purchasers[i]) {
      auto pit = profiles.find(ego);
      auto cit = partition.assignment.find(ego);
      if (pit == profiles.end() || cit == partition.assignment.end()) continue;
      ++n_valid;
      ages.emplace_back(pit->second.age, r);
      segs.emplace_back(cit->second, r);
      if (pit->second.gender)
        genders.emplace_back(*pit->second.gender == Gender::male ? 1 : 0, r);
    }
    auto age = value_group_mean(ages);
    auto seg = value_group_mean(segs);
    if (!age || !seg) {
      out.excluded.push_back(keys[i]);
      continue;
    }
    CategoryFeatureSet::Row row;
    row.key = keys[i];
    row.age = *age;
    row.seg = *seg;
    auto gender = value_group_mean(genders);
    row.gender = gender ? *gender : std::nan("");
    row.purchasers = n_valid;
    out.rows.push_back(row);
  }
  return out;
}

}  // namespace

CategoryFeatureSet afs(const PurchaseDistributionSet& dist, const ProfileMap& profiles,
                       const ClassPartition& partition) {
  std::vector<std::vector<std::pair<std::string, double>>> purchasers(dist.mccs.size());
  for (std::size_t e = 0; e < dist.size(); ++e)
    for (auto [ci, r] : dist.entries[e]) purchasers[ci].emplace_back(dist.egos[e], r);
  return afs_impl(dist.mccs, purchasers, profiles, partition);
}

CategoryFeatureSet community_afs(const PurchaseDistributionSet& dist,
                                 const CategoryCorrelationGraph& labeled_graph,
                                 const ProfileMap& profiles, const ClassPartition& partition) {
  if (labeled_graph.community.empty())
    throw Error("community_afs: graph has no community labels");
  std::map<int, std::uint32_t> mcc_to_comm;
  int max_comm = 0;
  for (std::size_t v = 0; v < labeled_graph.mccs.size(); ++v) {
    mcc_to_comm.emplace(labeled_graph.mccs[v], labeled_graph.community[v]);
    max_comm = std::max(max_comm, labeled_graph.community[v]);
  }
  std::vector<int> keys;
  for (int c = 1; c <= max_comm; ++c) keys.push_back(c);

  std::vector<std::vector<std::pair<std::string, double>>> purchasers(keys.size());
  for (std::size_t e = 0; e < dist.size(); ++e) {
    std::map<int, double> pooled;  // community -> pooled r
    for (auto [ci, r] : dist.entries[e]) {
      auto it = mcc_to_comm.find(dist.mccs[ci]);
      if (it != mcc_to_comm.end()) pooled[it->second] += r;
    }
    for (auto [comm, r] : pooled) purchasers[comm - 1].emplace_back(dist.egos[e], r);
  }
  return afs_impl(keys, purchasers, profiles, partition);
}

PearsonResult pearson(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw Error("pearson: length mismatch");
  const std::size_t n = x.size();
  if (n < 3) throw Error("pearson: need at least 3 points");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0 || syy <= 0) throw Error("pearson: zero variance");
  PearsonResult res;
  res.n = n;
  res.r = sxy / std::sqrt(sxx * syy);
  double r2 = std::min(res.r * res.r, 1.0);
  if (r2 >= 1.0) {
    res.p_value = 0.0;
    return res;
  }
  double df = static_cast<double>(n - 2);
  double t = std::abs(res.r) * std::sqrt(df / (1.0 - r2));
  boost::math::students_t dist(df);
  res.p_value = 2.0 * boost::math::cdf(boost::math::complement(dist, t));
  return res;
}

void write_afs_csv(const CategoryFeatureSet& f, const std::string& key_column,
                   const std::string& path) {
  CsvWriter w(path, {key_column, "age", "gender", "seg", "n_purchasers"});
  for (const auto& row : f.rows)
    w.row({std::to_string(row.key), format_double(row.age),
           std::isnan(row.gender) ? "" : format_double(row.gender), format_double(row.seg),
           std::to_string(row.purchasers)});
}

void write_clusters_csv(const CategoryFeatureSet& f, const ClusteringResult& clustering,
                        const std::string& path) {
  CsvWriter w(path, {"mcc", "cluster"});
  for (std::size_t i = 0; i < f.rows.size(); ++i)
    w.row({std::to_string(f.rows[i].key), std::to_string(clustering.best.labels[i] + 1)});
}

void write_selection_csv(const ClusteringResult& clustering, const std::string& path) {
  CsvWriter w(path, {"k", "davies_bouldin", "calinski_harabasz", "gap", "gap_se"});
  for (const auto& s : clustering.scores)
    w.row({std::to_string(s.k), format_double(s.davies_bouldin),
           format_double(s.calinski_harabasz), format_double(s.gap), format_double(s.gap_se)});
}

}  // namespace spendnet
