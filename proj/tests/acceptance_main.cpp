// Acceptance suite: runs every release criterion at its stated tolerance
// and prints one pass/fail line per criterion.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include "spendnet/category_correlation.hpp"
#include "spendnet/class_consumption.hpp"
#include "spendnet/demographics.hpp"
#include "spendnet/ingestion.hpp"
#include "spendnet/kmeans.hpp"
#include "spendnet/social_nullmodel.hpp"
#include "spendnet/socioeco.hpp"
#include "spendnet/synthgen.hpp"
#include "spendnet/taxonomy.hpp"

using namespace spendnet;
namespace fs = std::filesystem;

namespace {

struct Check {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
  void note(const std::string& text) {
    if (!detail.empty()) detail += "; ";
    detail += text;
  }
};

const CategoryTaxonomy& taxonomy() {
  static auto t = CategoryTaxonomy::load(CategoryTaxonomy::default_path());
  return t;
}

AmpTable table_of(const std::vector<double>& amps) {
  AmpTable t;
  for (std::size_t i = 0; i < amps.size(); ++i) {
    char id[16];
    std::snprintf(id, sizeof(id), "e%05zu", i);
    t.by_ego[id] = {amps[i], 1};
  }
  return t;
}

std::vector<double> pareto_draws(std::size_t n, double shape, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = 50.0 * std::pow(1.0 - unif(rng), -1.0 / shape);
  return v;
}

SocialGraph random_simple_graph(int n, int m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::string> ids;
  ids.reserve(n);
  for (int i = 0; i < n; ++i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "v%06d", i);
    ids.push_back(buf);
  }
  std::set<SocialGraph::Edge> edges;
  std::uniform_int_distribution<std::uint32_t> node(0, n - 1);
  while (static_cast<int>(edges.size()) < m) {
    auto a = node(rng), b = node(rng);
    if (a == b) continue;
    edges.insert({std::min(a, b), std::max(a, b)});
  }
  return SocialGraph::build(ids, {edges.begin(), edges.end()});
}

ClassPartition partition_from_amps(const SocialGraph& g, std::uint64_t seed, int n_classes) {
  AmpTable amp;
  auto draws = pareto_draws(g.node_count(), 2.0, seed);
  for (std::size_t i = 0; i < g.node_count(); ++i) amp.by_ego[g.ids()[i]] = {draws[i], 1};
  return partition_classes(amp, n_classes);
}

SpendingVectorSet iid_vectors(const SocialGraph& g, std::uint64_t seed, int dims) {
  std::mt19937_64 rng(seed);
  std::vector<std::string> egos(g.ids());
  std::sort(egos.begin(), egos.end());
  std::vector<std::string> groups;
  for (int k = 0; k < dims; ++k) groups.push_back("g" + std::to_string(k + 10));
  std::vector<double> data, cash;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (std::size_t e = 0; e < egos.size(); ++e) {
    std::vector<double> row(dims);
    double sum = 0;
    for (auto& x : row) {
      x = unif(rng);
      sum += x;
    }
    for (double x : row) data.push_back(x / sum);
    cash.push_back(unif(rng));
  }
  return make_vector_set(SpendingVariant::excluding_cash, groups, egos, data, cash);
}

// -------------------------------------------------------------------------

Check criterion1_equal_sum_partition() {
  Check c;
  auto t0 = std::chrono::steady_clock::now();
  auto amps = pareto_draws(10'000, 1.5, 101);
  auto table = table_of(amps);
  auto part = partition_classes(table, 9);

  double total = 0, max_amp = 0;
  for (double a : amps) {
    total += a;
    max_amp = std::max(max_amp, a);
  }
  double target = total / 9.0;
  for (const auto& info : part.classes)
    c.require(std::abs(info.amp_sum - target) <= max_amp + 1e-6,
              "class sum deviates by more than max AMP");
  for (int j = 1; j < 9; ++j)
    c.require(part.classes[j].mean_amp >= part.classes[j - 1].mean_amp,
              "class mean AMP not non-decreasing");

  for (double scale : {2.0, 0.5, 3.0}) {
    std::vector<double> scaled;
    scaled.reserve(amps.size());
    for (double a : amps) scaled.push_back(a * scale);
    auto rescaled = partition_classes(table_of(scaled), 9);
    c.require(rescaled.assignment == part.assignment,
              "assignment changed under uniform rescaling x" + std::to_string(scale));
  }

  double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  c.require(dt < 5.0, "runtime over 5s");
  char buf[64];
  std::snprintf(buf, sizeof(buf), "10k egos in %.2fs", dt);
  c.note(buf);
  return c;
}

Check criterion2_nullmodel_soundness() {
  Check c;
  auto t0 = std::chrono::steady_clock::now();

  // degree preservation and simplicity over 100 replicas
  auto g = random_simple_graph(10'000, 50'000, 201);
  auto degrees = g.degrees();
  SwapPlan plan;
  plan.seed = 202;
  for (std::uint32_t replica = 0; replica < 100; ++replica) {
    auto shuffled = edge_swap_randomize(g, plan, replica);
    c.require(shuffled.degrees() == degrees, "degree multiset changed in a replica");
    c.require(shuffled.edge_count() == g.edge_count(), "graph lost simplicity");
    if (!c.ok) break;
  }

  // topology-independent vectors: pooled over 20 seeds, at least 95% of
  // the defined L_SV entries lie within 3 null spreads of 1
  std::size_t checks = 0, within = 0;
  int seeds_all_within = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto graph = random_simple_graph(10'000, 50'000, 300 + seed);
    auto partition = partition_from_amps(graph, 400 + seed, 9);
    auto vectors = iid_vectors(graph, 500 + seed, 16);
    SwapPlan p;
    p.replicas = 40;
    p.seed = 600 + seed;
    auto r = l_ratio(graph, vectors, partition, p);
    bool all_in = true;
    for (std::size_t pair = 0; pair < r.l_sv.size(); ++pair) {
      if (std::isnan(r.l_sv[pair]) || std::isnan(r.l_sv_se[pair]) || r.l_sv_se[pair] == 0)
        continue;
      ++checks;
      if (std::abs(r.l_sv[pair] - 1.0) <= 3.0 * r.l_sv_se[pair])
        ++within;
      else
        all_in = false;
    }
    if (all_in) ++seeds_all_within;
  }
  double frac = checks ? static_cast<double>(within) / checks : 0.0;
  c.require(frac >= 0.95, "only " + std::to_string(frac) + " of entries within 3 null spreads");

  double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  c.require(dt < 120.0, "runtime over 2min");
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%.1f%% of %zu entries within 3se, %d/20 seeds fully in, %.0fs",
                100.0 * frac, checks, seeds_all_within, dt);
  c.note(buf);
  return c;
}

Check criterion3_homophily_detection() {
  Check c;
  int seeds_ok = 0;
  int min_diag = 9;
  double mean_far = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    SynthConfig cfg;
    cfg.n_egos = 8000;
    cfg.pareto_shape = 2.3;
    cfg.months = 4;
    cfg.mean_degree = 10;
    cfg.homophily = 0.85;
    cfg.profile_concentration = 12;
    cfg.seed = seed;
    auto out = generate(cfg, taxonomy());

    auto amp = compute_amp(out.ledger);
    auto partition = partition_classes(amp, 9);
    auto vectors = spending_vectors(out.ledger, taxonomy(), SpendingVariant::excluding_cash);

    // restrict to covered nodes (cash-only egos lack vectors)
    std::vector<std::uint32_t> covered;
    for (std::uint32_t v = 0; v < out.graph.node_count(); ++v)
      if (vectors.index_of(out.graph.ids()[v])) covered.push_back(v);
    SocialGraph graph =
        covered.size() == out.graph.node_count() ? out.graph : out.graph.induced(covered);

    SwapPlan plan;
    plan.replicas = 30;
    plan.seed = 9000 + seed;
    auto r = l_ratio(graph, vectors, partition, plan);

    int diag_below = 0;
    for (int j = 1; j <= 9; ++j) {
      double L = r.l_sv[ClassPairDiff::pair_index(j, j, 9)];
      if (!std::isnan(L) && L < 1.0) ++diag_below;
    }
    double far = r.l_sv[ClassPairDiff::pair_index(1, 9, 9)];
    min_diag = std::min(min_diag, diag_below);
    if (!std::isnan(far)) mean_far += far / 20.0;
    if (diag_below >= 8 && !std::isnan(far) && far > 1.0) ++seeds_ok;
  }
  c.require(seeds_ok >= 16, "pattern held in only " + std::to_string(seeds_ok) + "/20 seeds");
  char buf[120];
  std::snprintf(buf, sizeof(buf), "%d/20 seeds; min diag<1 count %d, mean L(1,9)=%.2f", seeds_ok,
                min_diag, mean_far);
  c.note(buf);
  return c;
}

Check criterion4_rho_oracle() {
  Check c;
  std::mt19937_64 rng(404);
  const int n_cats = 50, n_egos = 500;
  PurchaseDistributionSet dist;
  for (int i = 0; i < n_cats; ++i) dist.mccs.push_back(1000 + i);
  std::vector<std::vector<double>> dense(n_egos, std::vector<double>(n_cats, 0.0));
  for (int e = 0; e < n_egos; ++e) {
    char id[16];
    std::snprintf(id, sizeof(id), "e%04d", e);
    dist.egos.push_back(id);
    auto& row = dense[e];
    int nnz = 1 + static_cast<int>(rng() % 12);
    double sum = 0;
    for (int t = 0; t < nnz; ++t)
      row[rng() % n_cats] += std::uniform_real_distribution<>(0.05, 1.0)(rng);
    for (double v : row) sum += v;
    std::vector<std::pair<std::uint32_t, double>> entry;
    for (int cat = 0; cat < n_cats; ++cat) {
      row[cat] /= sum;
      if (row[cat] > 0) entry.emplace_back(static_cast<std::uint32_t>(cat), row[cat]);
    }
    dist.entries.push_back(entry);
  }
  auto m = correlation_matrix(dist);

  double worst = 0;
  for (int i = 0; i < n_cats; ++i) {
    for (int j = i; j < n_cats; ++j) {
      double cross = 0, si = 0, sj = 0;
      for (int e = 0; e < n_egos; ++e) {
        cross += dense[e][i] * dense[e][j];
        si += dense[e][i];
        sj += dense[e][j];
      }
      double want = n_egos * cross / (si * sj);
      worst = std::max(worst, std::abs(m.rho_at(i, j) - want));
    }
  }
  c.require(worst <= 1e-12, "sparse vs dense deviation " + std::to_string(worst));

  for (int i = 0; i < n_cats; ++i)
    for (int j = 0; j < n_cats; ++j)
      c.require(m.rho_at(i, j) == m.rho_at(j, i), "rho not exactly symmetric");

  // identical-distribution corpus: rho = 1 on all co-spent pairs
  PurchaseDistributionSet same;
  same.mccs = {1, 2, 3};
  for (int e = 0; e < 40; ++e) {
    same.egos.push_back("u" + std::to_string(e));
    same.entries.push_back({{0, 0.2}, {1, 0.3}, {2, 0.5}});
  }
  auto ms = correlation_matrix(same);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      c.require(std::abs(ms.rho_at(i, j) - 1.0) <= 1e-12, "identical corpus rho != 1");

  char buf[80];
  std::snprintf(buf, sizeof(buf), "max |sparse-dense| = %.2e", worst);
  c.note(buf);
  return c;
}

Check criterion5_entropy_dispersion() {
  Check c;
  // bounds on a few synthetic runs
  for (std::uint64_t seed : {1, 2, 3}) {
    SynthConfig cfg;
    cfg.n_egos = 800;
    cfg.months = 3;
    cfg.homophily = 0.6;
    cfg.seed = seed;
    auto out = generate(cfg, taxonomy());
    auto amp = compute_amp(out.ledger);
    auto part = partition_classes(amp, 9);
    auto vec = spending_vectors(out.ledger, taxonomy(), SpendingVariant::excluding_cash);
    for (double s : class_entropy(class_mean_vectors(vec, part))) {
      c.require(s >= 0.0, "entropy below 0");
      c.require(s <= std::log(16.0) + 1e-12, "entropy above ln 16");
    }
  }

  // single-group class: S = 0 and sigma = 0
  {
    std::vector<std::string> groups;
    for (int i = 0; i < 16; ++i) groups.push_back("g" + std::to_string(i));
    std::vector<double> data;
    for (int e = 0; e < 3; ++e)
      for (int k = 0; k < 16; ++k) data.push_back(k == 5 ? 1.0 : 0.0);
    auto set = make_vector_set(SpendingVariant::excluding_cash, groups, {"a", "b", "c"}, data,
                               {0.1, 0.1, 0.1});
    ClassPartition part;
    part.n = 1;
    part.classes.resize(1);
    for (const auto& ego : set.egos) part.assignment[ego] = 1;
    part.classes[0].size = 3;
    auto stats = class_mean_vectors(set, part);
    c.require(class_entropy(stats)[0] == 0.0, "single-group entropy not 0");
    auto [sigma, sigma_cash] = class_dispersion(set, part);
    c.require(sigma[0] == 0.0, "single-group dispersion not 0");
  }

  // concentration sweep: sigma -> 0, below 0.01 at 1e4
  double last_sigma = 0;
  {
    double prev = 1e18;
    for (double conc : {10.0, 100.0, 10'000.0}) {
      SynthConfig cfg;
      cfg.n_egos = 400;
      cfg.months = 3;
      cfg.n_classes_planted = 1;
      cfg.homophily = 0.0;
      cfg.profile_concentration = conc;
      cfg.seed = 55;
      auto out = generate(cfg, taxonomy());
      auto vec = spending_vectors(out.ledger, taxonomy(), SpendingVariant::excluding_cash);
      ClassPartition part;
      part.n = 1;
      part.classes.resize(1);
      for (const auto& ego : vec.egos) part.assignment[ego] = 1;
      part.classes[0].size = vec.size();
      auto [sigma, sigma_cash] = class_dispersion(vec, part);
      c.require(sigma[0] < prev, "dispersion not decreasing in concentration");
      prev = sigma[0];
      last_sigma = sigma[0];
    }
    c.require(last_sigma < 0.01, "sigma at concentration 1e4 is " + std::to_string(last_sigma));
  }
  char buf[80];
  std::snprintf(buf, sizeof(buf), "sigma(conc=1e4) = %.4f", last_sigma);
  c.note(buf);
  return c;
}

Check criterion6_louvain() {
  Check c;
  // exhaustive oracle on small graphs
  auto exhaustive_best = [](const WeightedGraph& g) {
    std::vector<int> labels(g.n, 0);
    double best = -2;
    std::function<void(std::size_t, int)> rec = [&](std::size_t i, int max_used) {
      if (i == g.n) {
        best = std::max(best, modularity_of(g, labels));
        return;
      }
      for (int cand = 0; cand <= max_used + 1; ++cand) {
        labels[i] = cand;
        rec(i + 1, std::max(max_used, cand));
      }
    };
    rec(1, 0);
    return best;
  };

  std::vector<WeightedGraph> graphs;
  {
    WeightedGraph two_triangles;
    two_triangles.n = 6;
    two_triangles.edges = {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}, {3, 4, 1.0},
                           {4, 5, 1.0}, {3, 5, 1.0}, {2, 3, 0.1}};
    graphs.push_back(two_triangles);
  }
  {
    WeightedGraph single_edge;
    single_edge.n = 2;
    single_edge.edges = {{0, 1, 1.0}};
    graphs.push_back(single_edge);
  }
  {
    WeightedGraph k8;
    k8.n = 8;
    for (std::uint32_t i = 0; i < 8; ++i)
      for (std::uint32_t j = i + 1; j < 8; ++j) k8.edges.push_back({i, j, 1.0});
    graphs.push_back(k8);
  }
  {
    WeightedGraph path7;
    path7.n = 7;
    for (std::uint32_t i = 0; i + 1 < 7; ++i) path7.edges.push_back({i, i + 1, 1.0});
    graphs.push_back(path7);
  }
  {
    WeightedGraph squares;
    squares.n = 8;
    squares.edges = {{0, 1, 2.0}, {1, 2, 2.0}, {2, 3, 2.0}, {0, 3, 2.0}, {4, 5, 1.5},
                     {5, 6, 1.5}, {6, 7, 1.5}, {4, 7, 1.5}, {3, 4, 0.2}};
    graphs.push_back(squares);
  }
  double worst = 0;
  for (const auto& g : graphs) {
    auto res = louvain(g, 1, 6);
    double gap = std::abs(res.modularity - exhaustive_best(g));
    worst = std::max(worst, gap);
    c.require(gap <= 1e-9, "louvain missed the exhaustive optimum by " + std::to_string(gap));
  }

  // monotone passes on larger planted-block graphs
  for (std::uint64_t seed : {1, 2, 3}) {
    std::mt19937_64 rng(seed);
    WeightedGraph g;
    g.n = 150;
    std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
    for (std::uint32_t block = 0; block < 5; ++block)
      for (std::uint32_t i = 0; i < 30; ++i)
        for (std::uint32_t j = i + 1; j < 30; ++j)
          if (rng() % 100 < 30) {
            auto a = block * 30 + i, b = block * 30 + j;
            if (seen.insert({a, b}).second) g.edges.push_back({a, b, 1.0});
          }
    for (int t = 0; t < 150; ++t) {
      auto a = static_cast<std::uint32_t>(rng() % 150);
      auto b = static_cast<std::uint32_t>(rng() % 150);
      if (a == b) continue;
      if (a > b) std::swap(a, b);
      if (seen.insert({a, b}).second) g.edges.push_back({a, b, 0.4});
    }
    auto res = louvain(g, seed, 1);
    for (std::size_t t = 1; t < res.pass_modularity.size(); ++t)
      c.require(res.pass_modularity[t] >= res.pass_modularity[t - 1] - 1e-12,
                "modularity decreased across passes");
  }
  char buf[80];
  std::snprintf(buf, sizeof(buf), "max gap to exhaustive optimum = %.1e", worst);
  c.note(buf);
  return c;
}

Check criterion7_kmeans_selection() {
  Check c;
  int total_ok = 0, total_runs = 0;
  for (int k_true : {3, 5, 15}) {
    int ok_seeds = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      std::mt19937_64 rng(seed * 1000 + k_true);
      // well-separated centers in [0,20]^3
      std::vector<std::vector<double>> centers;
      std::uniform_real_distribution<double> pos(0.0, 20.0);
      while (static_cast<int>(centers.size()) < k_true) {
        std::vector<double> cand = {pos(rng), pos(rng), pos(rng)};
        bool far_enough = true;
        for (const auto& ctr : centers) {
          double ss = 0;
          for (int d = 0; d < 3; ++d) ss += (cand[d] - ctr[d]) * (cand[d] - ctr[d]);
          if (std::sqrt(ss) < 5.0) far_enough = false;
        }
        if (far_enough) centers.push_back(cand);
      }
      std::vector<std::vector<double>> pts;
      std::normal_distribution<double> noise(0.0, 0.35);
      for (const auto& ctr : centers)
        for (int i = 0; i < 30; ++i)
          pts.push_back({ctr[0] + noise(rng), ctr[1] + noise(rng), ctr[2] + noise(rng)});

      auto res = kmeans_select(pts, 2, 18, seed, 6, 25, true);
      int agree = (res.best_db == k_true) + (res.best_ch == k_true) + (res.best_gap == k_true);
      if (agree >= 2) ++ok_seeds;

      for (std::size_t t = 1; t < res.best.inertia_trace.size(); ++t)
        c.require(res.best.inertia_trace[t] <= res.best.inertia_trace[t - 1] + 1e-9,
                  "inertia increased during Lloyd iterations");
    }
    total_ok += ok_seeds;
    total_runs += 20;
    c.require(ok_seeds >= 16, "k_true=" + std::to_string(k_true) +
                                  " selected by >=2 criteria in only " +
                                  std::to_string(ok_seeds) + "/20 seeds");
  }
  c.note(std::to_string(total_ok) + "/" + std::to_string(total_runs) + " runs agreed");
  return c;
}

Check criterion8_afs() {
  Check c;
  // oracle equivalence on a 1000-ego fixture
  std::mt19937_64 rng(808);
  std::vector<int> mccs = {111, 222, 333, 444, 555, 666, 777, 888};
  PurchaseDistributionSet dist;
  dist.mccs = mccs;
  ProfileMap profiles;
  ClassPartition part;
  part.n = 9;
  part.classes.resize(9);
  std::vector<std::vector<double>> dense;
  for (int e = 0; e < 1000; ++e) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "e%04d", e);
    std::string id = buf;
    dist.egos.push_back(id);
    std::vector<double> r(mccs.size(), 0.0);
    double sum = 0;
    for (int t = 0; t < 3; ++t)
      r[rng() % mccs.size()] += std::uniform_real_distribution<>(0.05, 1.0)(rng);
    for (double v : r) sum += v;
    std::vector<std::pair<std::uint32_t, double>> entry;
    for (std::size_t cat = 0; cat < mccs.size(); ++cat) {
      r[cat] /= sum;
      if (r[cat] > 0) entry.emplace_back(static_cast<std::uint32_t>(cat), r[cat]);
    }
    dense.push_back(r);
    dist.entries.push_back(entry);
    EgoProfile p;
    p.id = id;
    p.age = 18 + static_cast<int>(rng() % 60);
    p.gender = rng() % 2 ? Gender::male : Gender::female;
    profiles.emplace(id, p);
    int cls = 1 + static_cast<int>(rng() % 9);
    part.assignment[id] = cls;
    ++part.classes[cls - 1].size;
  }
  auto features = afs(dist, profiles, part);
  double worst = 0;
  for (const auto& row : features.rows) {
    std::size_t ci = std::find(mccs.begin(), mccs.end(), row.key) - mccs.begin();
    auto oracle = [&](auto value_of) {
      std::map<int, std::pair<long double, int>> groups;
      for (std::size_t e = 0; e < dist.egos.size(); ++e) {
        if (dense[e][ci] <= 0) continue;
        auto& g = groups[value_of(dist.egos[e])];
        g.first += dense[e][ci];
        g.second += 1;
      }
      long double num = 0, den = 0;
      for (const auto& [v, g] : groups) {
        long double alpha = g.first / g.second;
        num += alpha * v;
        den += alpha;
      }
      return static_cast<double>(num / den);
    };
    worst = std::max(worst, std::abs(row.age - oracle([&](const std::string& id) {
                                       return profiles.at(id).age;
                                     })));
    worst = std::max(worst, std::abs(row.seg - oracle([&](const std::string& id) {
                                       return part.assignment.at(id);
                                     })));
  }
  c.require(worst <= 1e-12, "afs oracle deviation " + std::to_string(worst));

  // planted age-wealth coupling: positive age-SEG correlation, p < 0.01
  SynthConfig cfg;
  cfg.n_egos = 4000;
  cfg.months = 3;
  cfg.homophily = 0.5;
  cfg.seed = 88;
  auto out = generate(cfg, taxonomy());
  auto amp = compute_amp(out.ledger);
  auto classes = partition_classes(amp, 9);
  auto d = purchase_distributions(out.ledger, taxonomy(), 100);
  auto f = afs(d, out.profiles, classes);
  std::vector<double> ages, segs;
  for (const auto& row : f.rows) {
    ages.push_back(row.age);
    segs.push_back(row.seg);
  }
  c.require(ages.size() >= 50, "too few categories survived for the correlation");
  auto res = pearson(ages, segs);
  c.require(res.r > 0, "age-SEG correlation not positive");
  c.require(res.p_value < 0.01, "age-SEG p-value " + std::to_string(res.p_value));
  char buf[120];
  std::snprintf(buf, sizeof(buf), "oracle gap %.1e; age-SEG r=%.2f (p=%.1e, %zu categories)",
                worst, res.r, res.p_value, ages.size());
  c.note(buf);
  return c;
}

Check criterion9_determinism_runtime() {
  Check c;
  std::string cli = SPENDNET_CLI_PATH;
  fs::path base = fs::temp_directory_path() / ("spendnet_accept9_" + std::to_string(::getpid()));
  fs::path corpus = base / "corpus";
  fs::path out = base / "out";
  fs::create_directories(corpus);
  auto run = [&](const std::string& args) {
    std::string cmd = cli + " " + args + " >/dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
  };

  c.require(run("generate --out-dir " + corpus.string() +
                " --seed 12 --n-egos 10000 --months 8 --mean-degree 10 --homophily 0.8") == 0,
            "generate failed");

  std::string all_args = "all --input-dir " + corpus.string() + " --out-dir " + out.string() +
                         " --seed 12 --replicas 100 --min-purchases 50";
  auto t0 = std::chrono::steady_clock::now();
  c.require(run(all_args) == 0, "first all run failed");
  double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  c.require(dt < 300.0, "all pipeline took over 5 minutes");

  auto hash_artifacts = [&]() {
    std::map<std::string, std::size_t> hashes;
    for (const auto& entry : fs::directory_iterator(out)) {
      std::ifstream in(entry.path(), std::ios::binary);
      std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
      hashes[entry.path().filename().string()] = std::hash<std::string>{}(bytes);
    }
    return hashes;
  };
  auto first = hash_artifacts();
  c.require(first.size() >= 19, "expected artifact set missing files");

  fs::remove_all(out);
  c.require(run(all_args) == 0, "second all run failed");
  auto second = hash_artifacts();
  c.require(first == second, "artifacts differ between identical runs");

  fs::remove_all(base);
  char buf[80];
  std::snprintf(buf, sizeof(buf), "%zu artifacts byte-identical, all ran in %.0fs", first.size(),
                dt);
  c.note(buf);
  return c;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Check()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "equal-sum partition", criterion1_equal_sum_partition},
      {2, "null-model soundness", criterion2_nullmodel_soundness},
      {3, "homophily detection", criterion3_homophily_detection},
      {4, "rho oracle equivalence", criterion4_rho_oracle},
      {5, "entropy/dispersion bounds and trends", criterion5_entropy_dispersion},
      {6, "louvain correctness at small scale", criterion6_louvain},
      {7, "k-means selection", criterion7_kmeans_selection},
      {8, "afs correctness", criterion8_afs},
      {9, "determinism and runtime", criterion9_determinism_runtime},
  };

  int failures = 0;
  for (const auto& criterion : criteria) {
    Check result;
    auto t0 = std::chrono::steady_clock::now();
    try {
      result = criterion.run();
    } catch (const std::exception& e) {
      result.ok = false;
      result.detail = std::string("exception: ") + e.what();
    }
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] criterion %d: %s (%s; %.1fs)\n", result.ok ? "PASS" : "FAIL", criterion.id,
                criterion.name, result.detail.empty() ? "-" : result.detail.c_str(), dt);
    std::fflush(stdout);
    if (!result.ok) ++failures;
  }
  if (failures) std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
