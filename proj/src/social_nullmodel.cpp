#include "spendnet/social_nullmodel.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <thread>
#include <unordered_set>

#include "spendnet/csv.hpp"
#include "spendnet/rng.hpp"

namespace spendnet {

void SwapPlan::validate() const {
  if (swap_multiplier < 1) throw Error("swap plan: swap_multiplier must be >= 1");
  if (replicas < 1) throw Error("swap plan: replicas must be >= 1");
}

SocialGraph edge_swap_randomize(const SocialGraph& g, const SwapPlan& plan,
                                std::uint32_t replica_index, SwapStats* stats) {
  plan.validate();
  const std::size_t m = g.edge_count();
  if (m < 2) throw Error("edge_swap_randomize: need at least 2 edges");

  auto key = [](std::uint32_t a, std::uint32_t b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | b;
  };
  std::vector<SocialGraph::Edge> edges = g.edges();
  std::unordered_set<std::uint64_t> present;
  present.reserve(m * 2);
  for (const auto& [a, b] : edges) present.insert(key(a, b));

  auto rng = make_rng(plan.seed, replica_index);
  std::uniform_int_distribution<std::size_t> pick(0, m - 1);
  SwapStats local;
  const std::uint64_t total = static_cast<std::uint64_t>(plan.swap_multiplier) * m;
  for (std::uint64_t t = 0; t < total; ++t) {
    ++local.attempted;
    std::size_t ei = pick(rng);
    std::size_t ej = pick(rng);
    bool flip = (rng() & 1) != 0;
    if (ei == ej) {
      ++local.rejected;
      continue;
    }
    auto [a, b] = edges[ei];
    auto [c, d] = edges[ej];
    if (flip) std::swap(c, d);
    // proposed: (a,d), (c,b)
    if (a == d || c == b) {
      ++local.rejected;
      continue;
    }
    auto k1 = key(a, d), k2 = key(c, b);
    if (k1 == k2 || present.count(k1) || present.count(k2)) {
      ++local.rejected;
      continue;
    }
    present.erase(key(a, b));
    present.erase(key(edges[ej].first, edges[ej].second));
    present.insert(k1);
    present.insert(k2);
    edges[ei] = {std::min(a, d), std::max(a, d)};
    edges[ej] = {std::min(c, b), std::max(c, b)};
    ++local.applied;
  }
  if (stats) *stats = local;
  return SocialGraph::build(g.ids(), std::move(edges));
}

namespace {

struct Aligned {
  std::vector<int> class_of;          // per node
  std::vector<std::size_t> vec_of;    // per node, into the vector set
};

Aligned align(const SocialGraph& g, const SpendingVectorSet& vectors,
              const ClassPartition& partition) {
  Aligned a;
  a.class_of.resize(g.node_count());
  a.vec_of.resize(g.node_count());
  for (std::size_t v = 0; v < g.node_count(); ++v) {
    const auto& id = g.ids()[v];
    auto vi = vectors.index_of(id);
    if (!vi) throw InvariantViolation("class_pair_diff: node without spending vector: " + id);
    auto it = partition.assignment.find(id);
    if (it == partition.assignment.end())
      throw InvariantViolation("class_pair_diff: node without class: " + id);
    a.vec_of[v] = *vi;
    a.class_of[v] = it->second;
  }
  return a;
}

ClassPairDiff pair_diff_aligned(const std::vector<SocialGraph::Edge>& edges,
                                const SpendingVectorSet& vectors, const Aligned& a,
                                int n_classes) {
  ClassPairDiff d;
  d.n_classes = n_classes;
  d.components = vectors.group_ids;
  const std::size_t pairs = ClassPairDiff::pair_count(n_classes);
  const std::size_t dims = vectors.dims();
  d.diff.assign(dims, std::vector<double>(pairs, 0.0));
  d.diff_cash.assign(pairs, 0.0);
  d.edge_counts.assign(pairs, 0);

  for (const auto& [u, v] : edges) {
    auto p = ClassPairDiff::pair_index(a.class_of[u], a.class_of[v], n_classes);
    const double* xu = vectors.components(a.vec_of[u]);
    const double* xv = vectors.components(a.vec_of[v]);
    for (std::size_t k = 0; k < dims; ++k) d.diff[k][p] += std::abs(xu[k] - xv[k]);
    d.diff_cash[p] += std::abs(vectors.cash_share(a.vec_of[u]) - vectors.cash_share(a.vec_of[v]));
    ++d.edge_counts[p];
  }
  for (std::size_t p = 0; p < pairs; ++p) {
    if (d.edge_counts[p] == 0) {
      for (std::size_t k = 0; k < dims; ++k) d.diff[k][p] = std::nan("");
      d.diff_cash[p] = std::nan("");
      continue;
    }
    for (std::size_t k = 0; k < dims; ++k) d.diff[k][p] /= d.edge_counts[p];
    d.diff_cash[p] /= d.edge_counts[p];
  }
  return d;
}

}  // namespace

ClassPairDiff class_pair_diff(const SocialGraph& g, const SpendingVectorSet& vectors,
                              const ClassPartition& partition) {
  auto a = align(g, vectors, partition);
  return pair_diff_aligned(g.edges(), vectors, a, partition.n);
}

LRatioResult l_ratio(const SocialGraph& g, const SpendingVectorSet& vectors,
                     const ClassPartition& partition, const SwapPlan& plan) {
  plan.validate();
  auto aligned = align(g, vectors, partition);
  const int n = partition.n;
  const std::size_t pairs = ClassPairDiff::pair_count(n);
  const std::size_t dims = vectors.dims();

  LRatioResult r;
  r.n_classes = n;
  r.components = vectors.group_ids;
  r.original = pair_diff_aligned(g.edges(), vectors, aligned, n);

  // Replicas run concurrently with seeds derived from (seed, replica);
  // results land in a replica-indexed vector and all reductions walk it
  // in index order, which keeps floating-point output bit-stable.
  r.null_diffs.resize(plan.replicas);
  {
    const unsigned workers =
        std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                                        static_cast<unsigned>(plan.replicas)));
    std::atomic<int> next{0};
    auto worker = [&]() {
      for (;;) {
        int i = next.fetch_add(1);
        if (i >= plan.replicas) return;
        SocialGraph shuffled = edge_swap_randomize(g, plan, static_cast<std::uint32_t>(i));
        r.null_diffs[i] = pair_diff_aligned(shuffled.edges(), vectors, aligned, n);
      }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
  }

  r.null_mean.assign(dims, std::vector<double>(pairs, std::nan("")));
  r.null_sd.assign(dims, std::vector<double>(pairs, std::nan("")));
  r.null_mean_cash.assign(pairs, std::nan(""));
  r.null_sd_cash.assign(pairs, std::nan(""));
  r.null_defined.assign(pairs, 0);
  for (std::size_t p = 0; p < pairs; ++p) {
    std::uint32_t cnt = 0;
    for (const auto& nd : r.null_diffs)
      if (nd.edge_counts[p] > 0) ++cnt;
    r.null_defined[p] = cnt;
    if (cnt == 0) continue;
    for (std::size_t k = 0; k <= dims; ++k) {
      // k == dims addresses the cash scalar
      double sum = 0;
      for (const auto& nd : r.null_diffs)
        if (nd.edge_counts[p] > 0) sum += k < dims ? nd.diff[k][p] : nd.diff_cash[p];
      double mean = sum / cnt;
      double ss = 0;
      for (const auto& nd : r.null_diffs)
        if (nd.edge_counts[p] > 0) {
          double x = (k < dims ? nd.diff[k][p] : nd.diff_cash[p]) - mean;
          ss += x * x;
        }
      double sd = cnt > 1 ? std::sqrt(ss / (cnt - 1)) : 0.0;
      if (k < dims) {
        r.null_mean[k][p] = mean;
        r.null_sd[k][p] = sd;
      } else {
        r.null_mean_cash[p] = mean;
        r.null_sd_cash[p] = sd;
      }
    }
  }

  // ratios
  r.l_k.assign(dims, std::vector<double>(pairs, std::nan("")));
  r.l_sv.assign(pairs, std::nan(""));
  r.l_sv_se.assign(pairs, std::nan(""));
  r.l_cash.assign(pairs, std::nan(""));
  r.l_cash_se.assign(pairs, std::nan(""));
  const double fpc = std::sqrt(1.0 + 1.0 / plan.replicas);  // null-mean estimation noise
  for (std::size_t p = 0; p < pairs; ++p) {
    if (r.original.edge_counts[p] == 0 || r.null_defined[p] == 0) continue;

    std::vector<std::size_t> usable;  // components with a positive null mean
    for (std::size_t k = 0; k < dims; ++k) {
      if (r.null_mean[k][p] > 0) {
        r.l_k[k][p] = r.original.diff[k][p] / r.null_mean[k][p];
        usable.push_back(k);
      }
    }
    if (!usable.empty()) {
      double sum = 0;
      for (auto k : usable) sum += r.l_k[k][p];
      r.l_sv[p] = sum / usable.size();

      // Null spread of the averaged ratio, from the per-replica diffs.
      double lam_sum = 0, lam_ss = 0;
      std::uint32_t lam_n = 0;
      for (const auto& nd : r.null_diffs) {
        if (nd.edge_counts[p] == 0) continue;
        double lam = 0;
        for (auto k : usable) lam += nd.diff[k][p] / r.null_mean[k][p];
        lam /= usable.size();
        lam_sum += lam;
        lam_ss += lam * lam;
        ++lam_n;
      }
      if (lam_n > 1) {
        double mean = lam_sum / lam_n;
        double var = std::max(0.0, (lam_ss - lam_n * mean * mean) / (lam_n - 1));
        r.l_sv_se[p] = std::sqrt(var) * fpc;
      }
    }
    if (r.null_mean_cash[p] > 0) {
      r.l_cash[p] = r.original.diff_cash[p] / r.null_mean_cash[p];
      r.l_cash_se[p] = r.null_sd_cash[p] / r.null_mean_cash[p] * fpc;
    }
  }
  return r;
}

void write_l_matrix_csv(const LRatioResult& r, bool cash, const std::string& path) {
  CsvWriter w(path, {"class_i", "class_j", "L", "se", "edges"});
  for (int i = 1; i <= r.n_classes; ++i) {
    for (int j = i; j <= r.n_classes; ++j) {
      auto p = ClassPairDiff::pair_index(i, j, r.n_classes);
      double L = cash ? r.l_cash[p] : r.l_sv[p];
      double se = cash ? r.l_cash_se[p] : r.l_sv_se[p];
      w.row({std::to_string(i), std::to_string(j),
             std::isnan(L) ? "" : format_double(L), std::isnan(se) ? "" : format_double(se),
             std::to_string(r.original.edge_counts[p])});
    }
  }
}

void write_null_stats_csv(const LRatioResult& r, const std::string& path) {
  CsvWriter w(path, {"class_i", "class_j", "component", "observed", "null_mean", "null_sd",
                     "replicas_defined"});
  for (int i = 1; i <= r.n_classes; ++i) {
    for (int j = i; j <= r.n_classes; ++j) {
      auto p = ClassPairDiff::pair_index(i, j, r.n_classes);
      auto emit = [&](const std::string& comp, double obs, double mean, double sd) {
        w.row({std::to_string(i), std::to_string(j), comp, std::isnan(obs) ? "" : format_double(obs),
               std::isnan(mean) ? "" : format_double(mean), std::isnan(sd) ? "" : format_double(sd),
               std::to_string(r.null_defined[p])});
      };
      for (std::size_t k = 0; k < r.components.size(); ++k)
        emit(r.components[k], r.original.diff[k][p], r.null_mean[k][p], r.null_sd[k][p]);
      emit("cash", r.original.diff_cash[p], r.null_mean_cash[p], r.null_sd_cash[p]);
    }
  }
}

}  // namespace spendnet
