#include "spendnet/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "spendnet/csv.hpp"
#include "spendnet/rng.hpp"

namespace spendnet {

namespace {

constexpr double kBudgetScale = 50.0;    // Pareto scale (minimum monthly budget)
constexpr double kAttraction = 0.5;      // tie-level pull within adjacent classes, x homophily
constexpr double kRepulsion = 0.6;       // tie-level push across distant classes, x homophily
constexpr int kInfluenceRounds = 2;
constexpr double kKeepThreshold = 1e-7;  // sparse preference truncation

using SparseVec = std::vector<std::pair<std::uint16_t, double>>;  // (category index, weight)

void normalize_sparse(SparseVec& v) {
  double sum = 0;
  for (auto& [c, w] : v) sum += w;
  if (sum <= 0) return;
  SparseVec kept;
  kept.reserve(v.size());
  for (auto& [c, w] : v) {
    double x = w / sum;
    if (x >= kKeepThreshold) kept.emplace_back(c, x);
  }
  double kept_sum = 0;
  for (auto& [c, w] : kept) kept_sum += w;
  for (auto& [c, w] : kept) w /= kept_sum;
  v = std::move(kept);
}

// mean of a set of sparse vectors, as a dense scratch accumulation
SparseVec sparse_mean(const std::vector<const SparseVec*>& vecs,
                      std::unordered_map<std::uint16_t, double>& scratch) {
  scratch.clear();
  for (const auto* v : vecs)
    for (auto [c, w] : *v) scratch[c] += w;
  SparseVec out;
  out.reserve(scratch.size());
  const double inv = 1.0 / static_cast<double>(vecs.size());
  for (auto [c, w] : scratch) out.emplace_back(c, w * inv);
  std::sort(out.begin(), out.end());
  return out;
}

// u + step*(other - u), clamped to the non-negative orthant, renormalized
SparseVec move_toward(const SparseVec& u, const SparseVec& other, double step,
                      std::unordered_map<std::uint16_t, double>& scratch) {
  scratch.clear();
  for (auto [c, w] : u) scratch[c] += (1.0 - step) * w;
  for (auto [c, w] : other) scratch[c] += step * w;
  SparseVec out;
  out.reserve(scratch.size());
  for (auto [c, w] : scratch)
    if (w > 0) out.emplace_back(c, w);
  std::sort(out.begin(), out.end());
  normalize_sparse(out);
  return out;
}

}  // namespace

void SynthConfig::validate() const {
  if (n_egos < 2) throw Error("synth: n_egos must be >= 2");
  if (pareto_shape <= 0) throw Error("synth: pareto_shape must be positive");
  if (n_classes_planted < 1) throw Error("synth: n_classes_planted must be >= 1");
  if (homophily < 0 || homophily > 1) throw Error("synth: homophily must be in [0,1]");
  if (mean_degree <= 0) throw Error("synth: mean_degree must be positive");
  if (mean_degree >= n_egos) throw Error("synth: infeasible mean_degree >= n_egos");
  if (profile_concentration <= 0) throw Error("synth: profile_concentration must be positive");
  if (months < 1) throw Error("synth: months must be >= 1");
}

std::string synth_ego_id(std::uint32_t index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "e%07u", index);
  return buf;
}

SynthOutput generate(const SynthConfig& cfg, const CategoryTaxonomy& taxonomy) {
  cfg.validate();
  const std::uint32_t n = cfg.n_egos;
  const int n_cls = cfg.n_classes_planted;

  // Non-cash categories, grouped by PCG for hierarchical profiles.
  std::vector<int> cats;            // category index -> mcc
  std::vector<int> cat_group;       // category index -> group index
  std::vector<std::string> groups;  // non-cash group ids
  {
    std::map<std::string, int> group_index;
    for (const auto& g : taxonomy.non_cash_group_ids()) {
      group_index.emplace(g, static_cast<int>(groups.size()));
      groups.push_back(g);
    }
    for (const auto& mc : taxonomy.categories()) {
      if (mc.pcg.empty() || mc.pcg == taxonomy.cash_group()) continue;
      cats.push_back(mc.mcc);
      cat_group.push_back(group_index.at(mc.pcg));
    }
  }
  if (cats.empty()) throw Error("synth: taxonomy has no non-cash categories");
  int cash_mcc = 0;
  for (const auto& mc : taxonomy.categories())
    if (mc.pcg == taxonomy.cash_group()) cash_mcc = mc.mcc;
  const std::size_t n_cats = cats.size();
  const std::size_t n_groups = groups.size();

  // --- wealth -----------------------------------------------------------
  auto wealth_rng = make_rng(cfg.seed, 0);
  std::vector<double> budget(n);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (auto& w : budget) {
    double u = 1.0 - unif(wealth_rng);  // (0,1]
    w = kBudgetScale * std::pow(u, -1.0 / cfg.pareto_shape);
  }
  // rank in [0,1), planted class = equal-count quantile of budget
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (budget[a] != budget[b]) return budget[a] < budget[b];
    return a < b;
  });
  std::vector<double> rank(n);
  std::vector<int> planted(n);
  for (std::uint32_t pos = 0; pos < n; ++pos) {
    auto ego = order[pos];
    rank[ego] = (pos + 0.5) / n;
    planted[ego] = 1 + std::min<int>(n_cls - 1, static_cast<int>(rank[ego] * n_cls));
  }

  // --- class profiles ----------------------------------------------------
  // Group-level anchor per planted class: a spiky Dirichlet draw blended
  // toward uniform with weight rising by class, so planted entropy rises
  // and planted dispersion falls with rank. Categories split inside each
  // group by a per-class Dirichlet.
  auto anchor_rng = make_rng(cfg.seed, 1);
  std::gamma_distribution<double> spiky(0.2, 1.0);
  std::gamma_distribution<double> within(0.4, 1.0);
  std::vector<std::vector<double>> anchor(n_cls, std::vector<double>(n_cats, 0.0));
  for (int c = 0; c < n_cls; ++c) {
    std::vector<double> g(n_groups);
    double gs = 0;
    for (auto& x : g) {
      x = spiky(anchor_rng);
      gs += x;
    }
    double w_uniform =
        n_cls == 1 ? 0.5 : 0.08 + 0.78 * static_cast<double>(c) / (n_cls - 1);
    for (std::size_t k = 0; k < n_groups; ++k)
      g[k] = (1.0 - w_uniform) * (gs > 0 ? g[k] / gs : 0.0) + w_uniform / n_groups;

    std::vector<double> split(n_cats);
    std::vector<double> group_sum(n_groups, 0.0);
    for (std::size_t i = 0; i < n_cats; ++i) {
      split[i] = within(anchor_rng) + 1e-9;
      group_sum[cat_group[i]] += split[i];
    }
    for (std::size_t i = 0; i < n_cats; ++i)
      anchor[c][i] = g[cat_group[i]] * split[i] / group_sum[cat_group[i]];
  }
  // piecewise-linear profile path between class centers
  auto profile_at = [&](double x) {
    std::vector<double> q(n_cats);
    if (n_cls == 1) return anchor[0];
    double t = x * n_cls - 0.5;
    int lo = std::clamp(static_cast<int>(std::floor(t)), 0, n_cls - 1);
    int hi = std::min(lo + 1, n_cls - 1);
    double frac = std::clamp(t - lo, 0.0, 1.0);
    for (std::size_t i = 0; i < n_cats; ++i)
      q[i] = (1.0 - frac) * anchor[lo][i] + frac * anchor[hi][i];
    return q;
  };

  // --- per-ego preferences ------------------------------------------------
  auto pref_rng = make_rng(cfg.seed, 2);
  std::vector<SparseVec> pref(n);
  for (std::uint32_t ego = 0; ego < n; ++ego) {
    auto q = profile_at(rank[ego]);
    double kappa = cfg.profile_concentration * (1.0 + rank[ego]);
    SparseVec v;
    double sum = 0;
    for (std::size_t i = 0; i < n_cats; ++i) {
      std::gamma_distribution<double> gamma(kappa * q[i], 1.0);
      double x = gamma(pref_rng);
      if (x > 0) {
        v.emplace_back(static_cast<std::uint16_t>(i), x);
        sum += x;
      }
    }
    if (sum <= 0) {
      for (std::size_t i = 0; i < n_cats; ++i)
        v.emplace_back(static_cast<std::uint16_t>(i), q[i]);
    }
    normalize_sparse(v);
    pref[ego] = std::move(v);
  }

  // --- cash share ----------------------------------------------------------
  auto cash_rng = make_rng(cfg.seed, 3);
  std::normal_distribution<double> cash_noise(0.0, 0.07);
  std::vector<double> cash_share(n);
  for (std::uint32_t ego = 0; ego < n; ++ego)
    cash_share[ego] = std::clamp(0.72 - 0.45 * rank[ego] + cash_noise(cash_rng), 0.03, 0.97);

  // --- demographics ----------------------------------------------------------
  auto demo_rng = make_rng(cfg.seed, 4);
  ProfileMap profiles;
  for (std::uint32_t ego = 0; ego < n; ++ego) {
    EgoProfile p;
    p.id = synth_ego_id(ego);
    double u = unif(demo_rng);
    p.age = std::clamp(static_cast<int>(std::lround(18 + 52 * (0.45 * rank[ego] + 0.55 * u))), 18, 95);
    p.gender = unif(demo_rng) < 0.28 + 0.44 * rank[ego] ? Gender::male : Gender::female;
    char zip[16];
    std::snprintf(zip, sizeof(zip), "z%02d", static_cast<int>(rank[ego] * 20) + 10);
    p.zip = zip;
    profiles.emplace(p.id, std::move(p));
  }

  // --- social graph ----------------------------------------------------------
  auto graph_rng = make_rng(cfg.seed, 5);
  std::vector<std::vector<std::uint32_t>> class_members(n_cls);
  for (std::uint32_t ego = 0; ego < n; ++ego) class_members[planted[ego] - 1].push_back(ego);

  const std::uint64_t target_edges =
      static_cast<std::uint64_t>(std::llround(n * cfg.mean_degree / 2.0));
  std::unordered_set<std::uint64_t> edge_set;
  edge_set.reserve(target_edges * 2);
  std::vector<SocialGraph::Edge> edges;
  edges.reserve(target_edges);
  auto edge_key = [](std::uint32_t a, std::uint32_t b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | b;
  };
  std::uniform_int_distribution<std::uint32_t> pick_node(0, n - 1);
  std::uint64_t attempts = 0;
  const std::uint64_t max_attempts = 80 * target_edges + 1000;
  while (edges.size() < target_edges && attempts < max_attempts) {
    ++attempts;
    std::uint32_t u = pick_node(graph_rng);
    std::uint32_t v;
    if (unif(graph_rng) < cfg.homophily) {
      int lo = std::max(0, planted[u] - 2);
      int hi = std::min(n_cls - 1, planted[u]);
      std::size_t pool = 0;
      for (int c = lo; c <= hi; ++c) pool += class_members[c].size();
      std::uniform_int_distribution<std::size_t> pick(0, pool - 1);
      std::size_t at = pick(graph_rng);
      int c = lo;
      while (at >= class_members[c].size()) at -= class_members[c++].size();
      v = class_members[c][at];
    } else {
      v = pick_node(graph_rng);
    }
    if (u == v) continue;
    auto key = edge_key(u, v);
    if (edge_set.insert(key).second) edges.emplace_back(std::min(u, v), std::max(u, v));
  }
  // cleanup: no isolated nodes
  {
    std::vector<std::uint32_t> deg(n, 0);
    for (auto& [a, b] : edges) {
      ++deg[a];
      ++deg[b];
    }
    for (std::uint32_t ego = 0; ego < n; ++ego) {
      if (deg[ego] > 0) continue;
      for (int tries = 0; tries < 1000; ++tries) {
        const auto& pool = class_members[planted[ego] - 1];
        std::uint32_t v = pool.size() > 1
                              ? pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(graph_rng)]
                              : pick_node(graph_rng);
        if (v == ego) continue;
        if (edge_set.insert(edge_key(ego, v)).second) {
          edges.emplace_back(std::min(ego, v), std::max(ego, v));
          ++deg[ego];
          ++deg[v];
          break;
        }
      }
    }
  }

  // --- tie-level influence -----------------------------------------------------
  // Neighbors in the same/adjacent planted class pull preferences
  // together; neighbors three or more classes away push them apart. Both
  // scale with homophily, so homophily=0 leaves preferences i.i.d.
  const double pull = kAttraction * cfg.homophily;
  const double push = kRepulsion * cfg.homophily;
  if ((pull > 0 || push > 0) && !edges.empty()) {
    std::vector<std::vector<std::uint32_t>> adj(n);
    for (auto& [a, b] : edges) {
      adj[a].push_back(b);
      adj[b].push_back(a);
    }
    std::unordered_map<std::uint16_t, double> scratch;
    for (int round = 0; round < kInfluenceRounds; ++round) {
      std::vector<SparseVec> next(n);
      std::vector<double> next_cash(cash_share);
      for (std::uint32_t ego = 0; ego < n; ++ego) {
        std::vector<const SparseVec*> near, far;
        double near_cash = 0, far_cash = 0;
        for (auto w : adj[ego]) {
          if (std::abs(planted[w] - planted[ego]) <= 1) {
            near.push_back(&pref[w]);
            near_cash += cash_share[w];
          } else if (std::abs(planted[w] - planted[ego]) >= 3) {
            far.push_back(&pref[w]);
            far_cash += cash_share[w];
          }
        }
        SparseVec v = pref[ego];
        double c = cash_share[ego];
        if (!near.empty() && pull > 0) {
          auto mean = sparse_mean(near, scratch);
          v = move_toward(v, mean, pull, scratch);
          c += pull * (near_cash / near.size() - c);
        }
        if (!far.empty() && push > 0) {
          auto mean = sparse_mean(far, scratch);
          v = move_toward(v, mean, -push, scratch);
          c -= push * (far_cash / far.size() - c);
        }
        next[ego] = std::move(v);
        next_cash[ego] = std::clamp(c, 0.01, 0.99);
      }
      pref = std::move(next);
      cash_share = std::move(next_cash);
    }
  }

  // --- months and ledger -----------------------------------------------------
  auto month_rng = make_rng(cfg.seed, 6);
  const int base_month = 2016 * 12;  // ledger months start at 2016-01
  TransactionLedger ledger;
  std::geometric_distribution<int> skip_months(0.65);
  for (std::uint32_t ego = 0; ego < n; ++ego) {
    int n_active = std::max(1, cfg.months - skip_months(month_rng));
    std::vector<int> month_ids(cfg.months);
    std::iota(month_ids.begin(), month_ids.end(), 0);
    for (int i = 0; i < n_active; ++i) {
      std::uniform_int_distribution<int> pick(i, cfg.months - 1);
      std::swap(month_ids[i], month_ids[pick(month_rng)]);
    }
    month_ids.resize(n_active);
    std::sort(month_ids.begin(), month_ids.end());

    const auto id = synth_ego_id(ego);
    for (int m : month_ids) {
      std::int64_t cash_cents =
          std::llround(budget[ego] * cash_share[ego] * 100.0);
      bool wrote = false;
      if (cash_cents > 0) {
        ledger.add(id, base_month + m, cash_mcc, Money::from_cents(cash_cents));
        wrote = true;
      }
      double non_cash = budget[ego] * (1.0 - cash_share[ego]);
      for (auto [ci, w] : pref[ego]) {
        std::int64_t cents = std::llround(non_cash * w * 100.0);
        if (cents > 0) {
          ledger.add(id, base_month + m, cats[ci], Money::from_cents(cents));
          wrote = true;
        }
      }
      if (!wrote)  // degenerate rounding: keep the ego transactable
        ledger.add(id, base_month + m, cash_mcc, Money::from_cents(1));
    }
  }

  // --- assemble ----------------------------------------------------------------
  SynthOutput out;
  std::vector<std::string> ids(n);
  for (std::uint32_t ego = 0; ego < n; ++ego) ids[ego] = synth_ego_id(ego);
  out.graph = SocialGraph::build(std::move(ids), std::move(edges));
  out.profiles = std::move(profiles);
  out.ledger = std::move(ledger);
  for (std::uint32_t ego = 0; ego < n; ++ego)
    out.planted_class.emplace(synth_ego_id(ego), planted[ego]);
  out.spending_power = std::move(budget);
  return out;
}

void write_synth_csvs(const SynthOutput& out, const std::string& dir) {
  {
    CsvWriter w(dir + "/interactions.csv", {"caller_id", "callee_id", "timestamp", "kind", "duration"});
    std::int64_t t = 1451606400;
    std::size_t i = 0;
    for (const auto& [a, b] : out.graph.edges()) {
      const auto& ida = out.graph.ids()[a];
      const auto& idb = out.graph.ids()[b];
      bool sms = i % 3 == 0;
      int dur = sms ? 0 : 30 + static_cast<int>(i % 300);
      w.row({ida, idb, std::to_string(t), sms ? "sms" : "call", std::to_string(dur)});
      w.row({idb, ida, std::to_string(t + 60), sms ? "sms" : "call", std::to_string(dur)});
      t += 37;
      ++i;
    }
  }
  write_transactions(out.ledger, dir + "/transactions.csv");
  write_profiles(out.profiles, dir + "/profiles.csv");
  {
    CsvWriter w(dir + "/planted_classes.csv", {"ego_id", "class"});
    for (const auto& [ego, cls] : out.planted_class) w.row({ego, std::to_string(cls)});
  }
}

}  // namespace spendnet
