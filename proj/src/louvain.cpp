#include "spendnet/louvain.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <unordered_map>

#include "spendnet/common.hpp"
#include "spendnet/rng.hpp"

namespace spendnet {

double modularity_of(const WeightedGraph& g, const std::vector<int>& labels) {
  if (labels.size() != g.n) throw Error("modularity_of: label size mismatch");
  double two_m = 0;
  std::unordered_map<int, double> tot;  // community -> weighted degree sum
  std::unordered_map<int, double> in;   // community -> 2 * internal weight
  for (const auto& [a, b, w] : g.edges) {
    two_m += 2 * w;
    tot[labels[a]] += w;
    tot[labels[b]] += w;
    if (labels[a] == labels[b]) in[labels[a]] += 2 * w;
  }
  if (two_m <= 0) throw Error("modularity_of: graph has no edge weight");
  double q = 0;
  for (const auto& [c, t] : tot) {
    double i = in.count(c) ? in.at(c) : 0.0;
    q += i / two_m - (t / two_m) * (t / two_m);
  }
  return q;
}

namespace {

struct LevelGraph {
  std::size_t n;
  std::vector<std::vector<std::pair<std::uint32_t, double>>> adj;  // excl. self
  std::vector<double> self_loop;  // full internal weight (counts twice in degree)
  std::vector<double> degree;     // weighted degree incl. 2*self_loop
  double two_m = 0;
};

LevelGraph make_level(std::size_t n,
                      const std::vector<std::tuple<std::uint32_t, std::uint32_t, double>>& edges) {
  LevelGraph g;
  g.n = n;
  g.adj.resize(n);
  g.self_loop.assign(n, 0.0);
  g.degree.assign(n, 0.0);
  for (const auto& [a, b, w] : edges) {
    if (a == b) {
      g.self_loop[a] += w;
      g.degree[a] += 2 * w;
      g.two_m += 2 * w;
    } else {
      g.adj[a].emplace_back(b, w);
      g.adj[b].emplace_back(a, w);
      g.degree[a] += w;
      g.degree[b] += w;
      g.two_m += 2 * w;
    }
  }
  return g;
}

// One local-moving phase; returns community labels on the level graph.
std::vector<int> local_phase(const LevelGraph& g, std::mt19937_64& rng) {
  std::vector<int> comm(g.n);
  std::iota(comm.begin(), comm.end(), 0);
  std::vector<double> tot(g.degree);  // community weighted degree sums

  std::vector<std::uint32_t> order(g.n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);

  std::unordered_map<int, double> weight_to;
  bool moved = true;
  int sweeps = 0;
  while (moved && sweeps < 128) {
    moved = false;
    ++sweeps;
    for (auto u : order) {
      weight_to.clear();
      for (const auto& [v, w] : g.adj[u]) weight_to[comm[v]] += w;

      int old_c = comm[u];
      tot[old_c] -= g.degree[u];
      double base = weight_to.count(old_c) ? weight_to[old_c] : 0.0;
      double best_gain = base - tot[old_c] * g.degree[u] / g.two_m;
      int best_c = old_c;
      for (const auto& [c, w] : weight_to) {
        if (c == old_c) continue;
        double gain = w - tot[c] * g.degree[u] / g.two_m;
        if (gain > best_gain + 1e-15 ||
            (std::abs(gain - best_gain) <= 1e-15 && c < best_c)) {
          best_gain = gain;
          best_c = c;
        }
      }
      tot[best_c] += g.degree[u];
      if (best_c != old_c) {
        comm[u] = best_c;
        moved = true;
      }
    }
  }
  return comm;
}

}  // namespace

LouvainResult louvain(const WeightedGraph& g, std::uint64_t seed, int restarts) {
  if (g.n == 0 || g.edges.empty()) throw Error("louvain: graph needs at least one edge");
  for (const auto& [a, b, w] : g.edges)
    if (w <= 0) throw Error("louvain: edge weights must be positive");

  LouvainResult best;
  best.modularity = -2;
  for (int attempt = 0; attempt < std::max(1, restarts); ++attempt) {
    auto rng = make_rng(seed, attempt);
    std::vector<int> node_comm(g.n);
    std::iota(node_comm.begin(), node_comm.end(), 0);

    LevelGraph level = make_level(g.n, g.edges);
    LouvainResult res;
    double prev_q = -2;
    for (;;) {
      auto comm = local_phase(level, rng);

      // compact labels in order of first appearance by node index
      std::unordered_map<int, int> remap;
      for (std::size_t v = 0; v < level.n; ++v)
        if (!remap.count(comm[v])) {
          int id = static_cast<int>(remap.size());
          remap[comm[v]] = id;
        }
      for (auto& c : comm) c = remap[c];
      for (auto& c : node_comm) c = comm[c];

      double q = modularity_of(g, node_comm);
      res.pass_modularity.push_back(q);
      if (q <= prev_q + 1e-12) break;
      prev_q = q;

      // aggregate
      std::size_t nc = remap.size();
      std::map<std::pair<std::uint32_t, std::uint32_t>, double> agg;
      for (std::size_t v = 0; v < level.n; ++v) {
        if (level.self_loop[v] > 0) {
          auto c = static_cast<std::uint32_t>(comm[v]);
          agg[{c, c}] += level.self_loop[v];
        }
        for (const auto& [w, wt] : level.adj[v]) {
          if (w < v) continue;  // each undirected edge once
          auto a = static_cast<std::uint32_t>(comm[v]);
          auto b = static_cast<std::uint32_t>(comm[w]);
          if (a > b) std::swap(a, b);
          agg[{a, b}] += wt;
        }
      }
      std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> agg_edges;
      agg_edges.reserve(agg.size());
      for (const auto& [e, w] : agg) agg_edges.emplace_back(e.first, e.second, w);
      level = make_level(nc, agg_edges);
    }
    res.labels = std::move(node_comm);
    res.modularity = res.pass_modularity.empty() ? modularity_of(g, res.labels)
                                                 : res.pass_modularity.back();
    if (res.modularity > best.modularity + 1e-15) best = std::move(res);
  }

  // relabel communities by smallest member node
  std::unordered_map<int, int> first;
  int next_id = 0;
  for (std::size_t v = 0; v < best.labels.size(); ++v)
    if (!first.count(best.labels[v])) first[best.labels[v]] = next_id++;
  for (auto& c : best.labels) c = first[c];
  return best;
}

}  // namespace spendnet
