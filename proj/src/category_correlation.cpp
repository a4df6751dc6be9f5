#include "spendnet/category_correlation.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "spendnet/csv.hpp"

namespace spendnet {

PurchaseDistribution PurchaseDistributionSet::at(std::size_t i,
                                                 const CategoryTaxonomy* taxonomy) const {
  std::vector<std::pair<int, double>> out;
  out.reserve(entries[i].size());
  for (auto [ci, r] : entries[i]) out.emplace_back(mccs[ci], r);
  return PurchaseDistribution::checked(egos[i], std::move(out), taxonomy);
}

PurchaseDistributionSet purchase_distributions(const TransactionLedger& ledger,
                                               const CategoryTaxonomy& taxonomy,
                                               std::uint64_t min_purchases) {
  // corpus-wide purchase counts per in-scope category
  std::map<int, std::uint64_t> counts;
  for (const auto& [ego, rows] : ledger.by_ego()) {
    for (const auto& r : rows) {
      if (!taxonomy.contains(r.mcc) || taxonomy.is_cash_mcc(r.mcc)) continue;
      ++counts[r.mcc];
    }
  }
  PurchaseDistributionSet set;
  std::unordered_map<int, std::uint32_t> cat_index;
  for (const auto& [mcc, cnt] : counts) {
    if (cnt < min_purchases) {
      set.dropped_low.emplace(mcc, cnt);
      continue;
    }
    cat_index.emplace(mcc, static_cast<std::uint32_t>(set.mccs.size()));
    set.mccs.push_back(mcc);
  }

  for (const auto& [ego, rows] : ledger.by_ego()) {
    std::map<std::uint32_t, std::int64_t> cents;
    std::int64_t total = 0;
    for (const auto& r : rows) {
      auto it = cat_index.find(r.mcc);
      if (it == cat_index.end()) continue;
      cents[it->second] += r.amount.cents();
      total += r.amount.cents();
    }
    if (total <= 0) {
      ++set.excluded_egos;
      continue;
    }
    std::vector<std::pair<std::uint32_t, double>> entry;
    entry.reserve(cents.size());
    for (auto [ci, c] : cents)
      if (c > 0) entry.emplace_back(ci, static_cast<double>(c) / static_cast<double>(total));
    set.egos.push_back(ego);
    set.entries.push_back(std::move(entry));
  }
  return set;
}

CorrelationMatrix correlation_matrix(const PurchaseDistributionSet& dist) {
  if (dist.size() < 2) throw Error("correlation_matrix: need at least 2 egos");
  CorrelationMatrix m;
  m.mccs = dist.mccs;
  m.n_egos = dist.size();
  const std::size_t c = m.mccs.size();
  const std::size_t tri_size = c * (c + 1) / 2;
  std::vector<double> cross(tri_size, 0.0);
  m.common_counts.assign(tri_size, 0);
  m.sums.assign(c, 0.0);

  for (const auto& entry : dist.entries) {
    for (std::size_t a = 0; a < entry.size(); ++a) {
      auto [i, ri] = entry[a];
      m.sums[i] += ri;
      for (std::size_t b = a; b < entry.size(); ++b) {
        auto [j, rj] = entry[b];
        auto t = m.tri(i, j);
        cross[t] += ri * rj;
        ++m.common_counts[t];
      }
    }
  }

  m.rho.assign(tri_size, std::nan(""));
  const double n = static_cast<double>(m.n_egos);
  for (std::size_t i = 0; i < c; ++i) {
    for (std::size_t j = i; j < c; ++j) {
      double denom = m.sums[i] * m.sums[j];
      if (denom > 0) m.rho[m.tri(i, j)] = n * cross[m.tri(i, j)] / denom;
    }
  }
  return m;
}

CategoryCorrelationGraph build_graph(const CorrelationMatrix& m, double rho_min,
                                     std::optional<std::uint64_t> min_common) {
  if (rho_min <= 0) throw Error("build_graph: rho_min must be positive");
  std::uint64_t mc = min_common.value_or(static_cast<std::uint64_t>(
      std::max(10.0, std::round(1000.0 * static_cast<double>(m.n_egos) / 3'680'652.0))));
  if (min_common && *min_common < 1) throw Error("build_graph: min_common must be positive");

  const std::size_t c = m.mccs.size();
  std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> kept;
  std::vector<char> used(c, 0);
  for (std::size_t i = 0; i < c; ++i) {
    for (std::size_t j = i + 1; j < c; ++j) {
      double rho = m.rho_at(i, j);
      if (std::isnan(rho) || rho <= rho_min) continue;
      if (m.common_at(i, j) < mc) continue;
      kept.emplace_back(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), rho);
      used[i] = used[j] = 1;
    }
  }

  CategoryCorrelationGraph g;
  g.min_common_used = mc;
  std::vector<std::uint32_t> remap(c, 0);
  for (std::size_t i = 0; i < c; ++i) {
    if (used[i]) {
      remap[i] = static_cast<std::uint32_t>(g.mccs.size());
      g.mccs.push_back(m.mccs[i]);
    }
  }
  g.edges.reserve(kept.size());
  for (auto& [a, b, w] : kept) g.edges.emplace_back(remap[a], remap[b], w);
  return g;
}

void louvain_communities(CategoryCorrelationGraph& g, std::uint64_t seed, int restarts) {
  if (g.edges.empty()) throw Error("louvain_communities: graph has no edges");
  WeightedGraph wg;
  wg.n = g.mccs.size();
  wg.edges = g.edges;
  auto res = louvain(wg, seed, restarts);
  g.community.resize(g.mccs.size());
  for (std::size_t v = 0; v < g.mccs.size(); ++v) g.community[v] = res.labels[v] + 1;
  g.modularity = res.modularity;
}

void write_rho_csv(const CorrelationMatrix& m, const std::string& path) {
  CsvWriter w(path, {"mcc_i", "mcc_j", "rho", "common_consumers"});
  const std::size_t c = m.mccs.size();
  for (std::size_t i = 0; i < c; ++i) {
    for (std::size_t j = i; j < c; ++j) {
      if (m.common_at(i, j) == 0) continue;  // sparse triplets only
      double rho = m.rho_at(i, j);
      w.row({std::to_string(m.mccs[i]), std::to_string(m.mccs[j]),
             std::isnan(rho) ? "" : format_double(rho), std::to_string(m.common_at(i, j))});
    }
  }
}

void write_graph_edges_csv(const CategoryCorrelationGraph& g, const std::string& path) {
  CsvWriter w(path, {"mcc_i", "mcc_j", "rho"});
  for (const auto& [a, b, rho] : g.edges)
    w.row({std::to_string(g.mccs[a]), std::to_string(g.mccs[b]), format_double(rho)});
}

void write_communities_csv(const CategoryCorrelationGraph& g, const std::string& path) {
  CsvWriter w(path, {"mcc", "community"});
  for (std::size_t v = 0; v < g.mccs.size(); ++v)
    w.row({std::to_string(g.mccs[v]), std::to_string(g.community[v])});
}

CategoryCorrelationGraph load_graph_edges_csv(const std::string& path) {
  CsvReader reader(path, {"mcc_i", "mcc_j", "rho"});
  std::vector<std::tuple<int, int, double>> raw;
  std::vector<std::string> f;
  std::map<int, std::uint32_t> index;
  while (reader.next(f)) {
    if (f.size() != 3) throw ParseError(path + ": bad edge row");
    int a = std::stoi(f[0]), b = std::stoi(f[1]);
    raw.emplace_back(a, b, std::stod(f[2]));
    index.emplace(a, 0);
    index.emplace(b, 0);
  }
  CategoryCorrelationGraph g;
  for (auto& [mcc, idx] : index) {
    idx = static_cast<std::uint32_t>(g.mccs.size());
    g.mccs.push_back(mcc);
  }
  for (const auto& [a, b, rho] : raw) g.edges.emplace_back(index.at(a), index.at(b), rho);
  return g;
}

}  // namespace spendnet
