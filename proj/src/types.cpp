#include "spendnet/types.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace spendnet {

void TransactionLedger::add(const std::string& ego, int month, int mcc, Money amount) {
  rows_[ego].push_back(LedgerRow{month, mcc, amount});
}

std::size_t TransactionLedger::row_count() const {
  std::size_t n = 0;
  for (const auto& [ego, rows] : rows_) n += rows.size();
  return n;
}

const std::vector<LedgerRow>* TransactionLedger::rows_for(const std::string& ego) const {
  auto it = rows_.find(ego);
  return it == rows_.end() ? nullptr : &it->second;
}

int TransactionLedger::active_months(const std::vector<LedgerRow>& rows) {
  std::set<int> months;
  for (const auto& r : rows) months.insert(r.month);
  return static_cast<int>(months.size());
}

TransactionLedger TransactionLedger::restricted_to(const std::vector<std::string>& keep) const {
  TransactionLedger out;
  for (const auto& id : keep) {
    auto it = rows_.find(id);
    if (it != rows_.end()) out.rows_[id] = it->second;
  }
  return out;
}

SocialGraph SocialGraph::build(std::vector<std::string> ids, std::vector<Edge> edges) {
  SocialGraph g;
  g.index_.reserve(ids.size());
  for (std::uint32_t i = 0; i < ids.size(); ++i) {
    if (!g.index_.emplace(ids[i], i).second)
      throw InvariantViolation("duplicate node id: " + ids[i]);
  }
  g.ids_ = std::move(ids);
  for (auto& [a, b] : edges) {
    if (a == b) throw InvariantViolation("self-loop on node " + g.ids_.at(a));
    if (a >= g.ids_.size() || b >= g.ids_.size())
      throw InvariantViolation("edge endpoint out of range");
    if (a > b) std::swap(a, b);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  g.edges_ = std::move(edges);
  return g;
}

std::optional<std::uint32_t> SocialGraph::index_of(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::uint32_t> SocialGraph::degrees() const {
  std::vector<std::uint32_t> deg(ids_.size(), 0);
  for (const auto& [a, b] : edges_) {
    ++deg[a];
    ++deg[b];
  }
  return deg;
}

SocialGraph::Adjacency SocialGraph::adjacency() const {
  Adjacency adj;
  adj.offsets.assign(ids_.size() + 1, 0);
  for (const auto& [a, b] : edges_) {
    ++adj.offsets[a + 1];
    ++adj.offsets[b + 1];
  }
  for (std::size_t i = 1; i < adj.offsets.size(); ++i) adj.offsets[i] += adj.offsets[i - 1];
  adj.neighbors.resize(2 * edges_.size());
  std::vector<std::uint32_t> fill(adj.offsets.begin(), adj.offsets.end() - 1);
  for (const auto& [a, b] : edges_) {
    adj.neighbors[fill[a]++] = b;
    adj.neighbors[fill[b]++] = a;
  }
  return adj;
}

SocialGraph SocialGraph::induced(const std::vector<std::uint32_t>& nodes) const {
  std::vector<std::uint32_t> remap(ids_.size(), UINT32_MAX);
  std::vector<std::string> new_ids;
  new_ids.reserve(nodes.size());
  for (auto n : nodes) {
    remap[n] = static_cast<std::uint32_t>(new_ids.size());
    new_ids.push_back(ids_[n]);
  }
  std::vector<Edge> new_edges;
  for (const auto& [a, b] : edges_) {
    if (remap[a] != UINT32_MAX && remap[b] != UINT32_MAX)
      new_edges.emplace_back(remap[a], remap[b]);
  }
  return build(std::move(new_ids), std::move(new_edges));
}

double attribute_assortativity(const SocialGraph& g, const std::vector<int>& value_of_node) {
  if (g.edge_count() == 0) return std::nan("");
  double sxy = 0, sx = 0, sxx = 0;
  const double m = static_cast<double>(2 * g.edge_count());
  for (const auto& [a, b] : g.edges()) {
    double x = value_of_node.at(a), y = value_of_node.at(b);
    sxy += 2 * x * y;
    sx += x + y;
    sxx += x * x + y * y;
  }
  double mean = sx / m;
  double var = sxx / m - mean * mean;
  double cov = sxy / m - mean * mean;
  if (var <= 0) return std::nan("");
  return cov / var;
}

SpendingVector SpendingVector::checked(std::string owner, SpendingVariant variant,
                                       std::map<std::string, double> components,
                                       double cash_share) {
  double sum = 0;
  for (const auto& [k, v] : components) {
    if (v < -1e-12 || v > 1.0 + 1e-9)
      throw InvariantViolation("spending vector component out of [0,1] for " + owner);
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw InvariantViolation("spending vector of " + owner + " does not sum to 1 (got " +
                             std::to_string(sum) + ")");
  if (cash_share < -1e-12 || cash_share > 1.0 + 1e-9)
    throw InvariantViolation("cash share out of [0,1] for " + owner);
  SpendingVector sv;
  sv.owner = std::move(owner);
  sv.variant = variant;
  sv.components = std::move(components);
  sv.cash_share = cash_share;
  return sv;
}

PurchaseDistribution PurchaseDistribution::checked(std::string ego,
                                                   std::vector<std::pair<int, double>> entries,
                                                   const CategoryTaxonomy* taxonomy) {
  std::sort(entries.begin(), entries.end());
  double sum = 0;
  int prev = -1;
  for (const auto& [mcc, r] : entries) {
    if (mcc == prev) throw InvariantViolation("duplicate mcc in purchase distribution of " + ego);
    prev = mcc;
    if (r < -1e-12) throw InvariantViolation("negative purchase fraction for " + ego);
    if (taxonomy && taxonomy->is_cash_mcc(mcc))
      throw InvariantViolation("cash mcc " + std::to_string(mcc) +
                               " in purchase distribution of " + ego);
    sum += r;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw InvariantViolation("purchase distribution of " + ego + " does not sum to 1");
  PurchaseDistribution pd;
  pd.ego = std::move(ego);
  pd.entries = std::move(entries);
  return pd;
}

}  // namespace spendnet
