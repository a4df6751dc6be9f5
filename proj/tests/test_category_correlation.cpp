#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>
#include <set>

#include "spendnet/category_correlation.hpp"
#include "support.hpp"

using namespace spendnet;
using testsupport::bundled_taxonomy;

namespace {

PurchaseDistributionSet set_of(const std::vector<int>& mccs,
                               const std::vector<std::vector<double>>& rows) {
  PurchaseDistributionSet s;
  s.mccs = mccs;
  for (std::size_t e = 0; e < rows.size(); ++e) {
    s.egos.push_back("e" + std::to_string(e));
    std::vector<std::pair<std::uint32_t, double>> entry;
    for (std::size_t c = 0; c < rows[e].size(); ++c)
      if (rows[e][c] > 0) entry.emplace_back(static_cast<std::uint32_t>(c), rows[e][c]);
    s.entries.push_back(entry);
  }
  return s;
}

// enumerate set partitions of {0..n-1} (restricted growth strings)
void for_each_partition(int n, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> labels(n, 0);
  std::function<void(int, int)> rec = [&](int i, int max_used) {
    if (i == n) {
      fn(labels);
      return;
    }
    for (int c = 0; c <= max_used + 1; ++c) {
      labels[i] = c;
      rec(i + 1, std::max(max_used, c));
    }
  };
  rec(1, 0);  // labels[0] fixed to 0
}

double exhaustive_best_modularity(const WeightedGraph& g) {
  double best = -2;
  for_each_partition(static_cast<int>(g.n), [&](const std::vector<int>& labels) {
    best = std::max(best, modularity_of(g, labels));
  });
  return best;
}

}  // namespace

TEST_CASE("purchase_distributions") {
  const auto& tax = bundled_taxonomy();
  TransactionLedger ledger;
  // "solo" buys one category; "split" 25/75; cash must vanish
  ledger.add("solo", parse_month("2016-01"), 5411, Money::parse("50"));
  ledger.add("solo", parse_month("2016-01"), 24, Money::parse("100"));
  ledger.add("split", parse_month("2016-01"), 5411, Money::parse("25"));
  ledger.add("split", parse_month("2016-01"), 4814, Money::parse("75"));
  ledger.add("cash_only", parse_month("2016-01"), 24, Money::parse("10"));
  ledger.add("invalid_only", parse_month("2016-01"), 99999, Money::parse("10"));

  auto dist = purchase_distributions(ledger, tax, 1);
  CHECK(dist.excluded_egos == 2);
  REQUIRE(dist.size() == 2);

  auto solo = dist.at(0, &tax);
  CHECK(solo.ego == "solo");
  REQUIRE(solo.entries.size() == 1);
  CHECK(solo.entries[0].second == doctest::Approx(1.0));

  auto split = dist.at(1, &tax);
  REQUIRE(split.entries.size() == 2);
  CHECK(split.entries[0].second == doctest::Approx(0.75));  // 4814 sorts first
  CHECK(split.entries[1].second == doctest::Approx(0.25));

  SUBCASE("low-count categories are dropped, matching an independent count oracle") {
    TransactionLedger big;
    std::mt19937_64 rng(1);
    std::map<int, int> counts;
    std::vector<int> cats = {5411, 4814, 5812, 5999, 7832};
    for (int e = 0; e < 200; ++e) {
      std::string id = "u" + std::to_string(e);
      for (int r = 0; r < 4; ++r) {
        int mcc = cats[rng() % cats.size()];
        big.add(id, parse_month("2016-01"), mcc, Money::parse("10"));
        ++counts[mcc];
      }
    }
    const std::uint64_t cutoff = 150;
    auto d = purchase_distributions(big, tax, cutoff);
    for (int mcc : cats) {
      bool kept = std::find(d.mccs.begin(), d.mccs.end(), mcc) != d.mccs.end();
      CHECK(kept == (counts[mcc] >= static_cast<int>(cutoff)));
      if (!kept) CHECK(d.dropped_low.at(mcc) == static_cast<std::uint64_t>(counts[mcc]));
    }
  }
}

TEST_CASE("correlation_matrix") {
  SUBCASE("identical distributions give rho=1 on co-spent pairs") {
    auto dist = set_of({100, 200, 300}, {{0.2, 0.3, 0.5}, {0.2, 0.3, 0.5}, {0.2, 0.3, 0.5}});
    auto m = correlation_matrix(dist);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = i; j < 3; ++j)
        CHECK(m.rho_at(i, j) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("disjoint single categories give rho=0") {
    auto dist = set_of({100, 200}, {{1.0, 0.0}, {0.0, 1.0}});
    auto m = correlation_matrix(dist);
    CHECK(m.rho_at(0, 1) == doctest::Approx(0.0));
    CHECK(m.common_at(0, 1) == 0);
  }
  SUBCASE("worked 2-ego example: rho = 2/3") {
    auto dist = set_of({100, 200}, {{0.5, 0.5}, {1.0, 0.0}});
    auto m = correlation_matrix(dist);
    // n=2, cross=0.25, sums: 1.5 and 0.5 -> 2*0.25/(1.5*0.5) = 2/3
    CHECK(m.rho_at(0, 1) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  }
  SUBCASE("sparse accumulation equals dense brute force to 1e-12 (500 egos x 50 cats)") {
    std::mt19937_64 rng(42);
    const int n_cats = 50, n_egos = 500;
    std::vector<int> mccs;
    for (int c = 0; c < n_cats; ++c) mccs.push_back(1000 + c);
    std::vector<std::vector<double>> rows(n_egos, std::vector<double>(n_cats, 0.0));
    for (auto& row : rows) {
      int nnz = 1 + static_cast<int>(rng() % 10);
      double sum = 0;
      for (int t = 0; t < nnz; ++t) {
        int c = static_cast<int>(rng() % n_cats);
        double v = std::uniform_real_distribution<>(0.1, 1.0)(rng);
        row[c] += v;
        sum += v;
      }
      for (auto& v : row) v /= sum;
    }
    auto m = correlation_matrix(set_of(mccs, rows));

    // dense O(n.C^2) oracle
    for (int i = 0; i < n_cats; ++i) {
      for (int j = i; j < n_cats; ++j) {
        double cross = 0, si = 0, sj = 0;
        for (int e = 0; e < n_egos; ++e) {
          cross += rows[e][i] * rows[e][j];
          si += rows[e][i];
          sj += rows[e][j];
        }
        if (si > 0 && sj > 0) {
          CHECK(m.rho_at(i, j) ==
                doctest::Approx(n_egos * cross / (si * sj)).epsilon(1e-12));
        } else {
          CHECK(std::isnan(m.rho_at(i, j)));
        }
      }
    }
  }
  SUBCASE("rho is exactly symmetric and scale-invariant") {
    std::mt19937_64 rng(7);
    const int n_cats = 20, n_egos = 100;
    std::vector<int> mccs;
    for (int c = 0; c < n_cats; ++c) mccs.push_back(1000 + c);
    std::vector<std::vector<double>> rows(n_egos, std::vector<double>(n_cats, 0.0));
    for (auto& row : rows) {
      double sum = 0;
      for (int t = 0; t < 6; ++t) {
        int c = static_cast<int>(rng() % n_cats);
        row[c] += std::uniform_real_distribution<>(0.1, 1.0)(rng);
      }
      for (double v : row) sum += v;
      for (auto& v : row) v /= sum;
    }
    auto m = correlation_matrix(set_of(mccs, rows));
    for (int i = 0; i < n_cats; ++i)
      for (int j = 0; j < n_cats; ++j)
        CHECK(m.rho_at(i, j) == m.rho_at(j, i));  // same storage slot: identity, not epsilon
    // r is already normalized per ego, so per-ego raw-spend rescaling is a
    // no-op by construction; the matrix depends only on the r values.
  }
}

TEST_CASE("build_graph thresholds") {
  auto dist = set_of({100, 200, 300}, {{0.6, 0.4, 0.0}, {0.5, 0.5, 0.0}, {0.0, 0.1, 0.9}});
  auto m = correlation_matrix(dist);
  SUBCASE("rho_min above the maximum empties the graph") {
    auto g = build_graph(m, 1e9, 1);
    CHECK(g.mccs.empty());
    CHECK(g.edges.empty());
  }
  SUBCASE("rho exactly 1 does not pass the default 1.5 threshold") {
    auto uniform = set_of({100, 200}, {{0.5, 0.5}, {0.5, 0.5}});
    auto mu = correlation_matrix(uniform);
    CHECK(mu.rho_at(0, 1) == doctest::Approx(1.0));
    auto g = build_graph(mu, 1.5, 1);
    CHECK(g.edges.empty());
  }
  SUBCASE("min_common filters thin pairs") {
    auto g_all = build_graph(m, 0.01, 1);
    auto g_two = build_graph(m, 0.01, 2);
    CHECK(g_all.edges.size() >= g_two.edges.size());
    std::map<int, std::size_t> matrix_index;
    for (std::size_t i = 0; i < m.mccs.size(); ++i) matrix_index[m.mccs[i]] = i;
    for (const auto& [a, b, rho] : g_two.edges)
      CHECK(m.common_at(matrix_index.at(g_two.mccs[a]), matrix_index.at(g_two.mccs[b])) >= 2);
  }
  SUBCASE("auto min_common scales with corpus size") {
    auto g = build_graph(m, 0.01, std::nullopt);
    CHECK(g.min_common_used == 10);  // max(10, 1000*3/3680652)
  }
}

TEST_CASE("louvain matches the exhaustive-partition oracle on small graphs") {
  SUBCASE("two triangles joined by a light edge") {
    WeightedGraph g;
    g.n = 6;
    g.edges = {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}, {3, 4, 1.0},
               {4, 5, 1.0}, {3, 5, 1.0}, {2, 3, 0.1}};
    auto res = louvain(g, 1, 4);
    CHECK(res.modularity == doctest::Approx(exhaustive_best_modularity(g)).epsilon(1e-9));
    CHECK(res.labels[0] == res.labels[1]);
    CHECK(res.labels[1] == res.labels[2]);
    CHECK(res.labels[3] == res.labels[4]);
    CHECK(res.labels[4] == res.labels[5]);
    CHECK(res.labels[0] != res.labels[3]);
  }
  SUBCASE("single edge: the oracle decides") {
    WeightedGraph g;
    g.n = 2;
    g.edges = {{0, 1, 1.0}};
    auto res = louvain(g, 1, 2);
    CHECK(res.modularity == doctest::Approx(exhaustive_best_modularity(g)).epsilon(1e-9));
    CHECK(res.labels[0] == res.labels[1]);  // Q=0 beats the split's -0.5
  }
  SUBCASE("complete graphs, paths, stars up to 8 nodes") {
    std::vector<WeightedGraph> graphs;
    {
      WeightedGraph k5;
      k5.n = 5;
      for (std::uint32_t i = 0; i < 5; ++i)
        for (std::uint32_t j = i + 1; j < 5; ++j) k5.edges.push_back({i, j, 1.0});
      graphs.push_back(k5);
    }
    {
      WeightedGraph path;
      path.n = 8;
      for (std::uint32_t i = 0; i + 1 < 8; ++i) path.edges.push_back({i, i + 1, 1.0});
      graphs.push_back(path);
    }
    {
      WeightedGraph star;
      star.n = 7;
      for (std::uint32_t i = 1; i < 7; ++i) star.edges.push_back({0, i, 1.0});
      graphs.push_back(star);
    }
    {
      // two squares with a bridge, mixed weights
      WeightedGraph g;
      g.n = 8;
      g.edges = {{0, 1, 2.0}, {1, 2, 2.0}, {2, 3, 2.0}, {0, 3, 2.0}, {4, 5, 1.5},
                 {5, 6, 1.5}, {6, 7, 1.5}, {4, 7, 1.5}, {3, 4, 0.2}};
      graphs.push_back(g);
    }
    for (const auto& g : graphs) {
      auto res = louvain(g, 1, 6);
      CHECK(res.modularity == doctest::Approx(exhaustive_best_modularity(g)).epsilon(1e-9));
    }
  }
}

TEST_CASE("louvain modularity is non-decreasing across passes") {
  std::mt19937_64 rng(3);
  WeightedGraph g;
  g.n = 120;
  std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
  // planted blocks of 20 with sparse cross links
  for (std::uint32_t block = 0; block < 6; ++block) {
    for (std::uint32_t i = 0; i < 20; ++i) {
      for (std::uint32_t j = i + 1; j < 20; ++j) {
        if (rng() % 100 < 35) {
          auto a = block * 20 + i, b = block * 20 + j;
          if (seen.insert({a, b}).second) g.edges.push_back({a, b, 1.0});
        }
      }
    }
  }
  for (int t = 0; t < 80; ++t) {
    auto a = static_cast<std::uint32_t>(rng() % 120);
    auto b = static_cast<std::uint32_t>(rng() % 120);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    if (seen.insert({a, b}).second) g.edges.push_back({a, b, 0.5});
  }
  auto res = louvain(g, 5, 1);
  REQUIRE(!res.pass_modularity.empty());
  for (std::size_t t = 1; t < res.pass_modularity.size(); ++t)
    CHECK(res.pass_modularity[t] >= res.pass_modularity[t - 1] - 1e-12);
  // labels form a partition over all nodes
  for (int l : res.labels) CHECK(l >= 0);
}

TEST_CASE("louvain_communities labels the correlation graph deterministically") {
  auto dist = set_of({10, 20, 30, 40},
                     {{0.5, 0.5, 0.0, 0.0}, {0.6, 0.4, 0.0, 0.0}, {0.0, 0.0, 0.5, 0.5},
                      {0.0, 0.0, 0.4, 0.6}, {0.25, 0.25, 0.25, 0.25}});
  auto m = correlation_matrix(dist);
  auto g = build_graph(m, 1.0, 1);
  REQUIRE(!g.edges.empty());
  louvain_communities(g, 1, 2);
  CHECK(g.community.size() == g.mccs.size());
  for (int c : g.community) CHECK(c >= 1);
  auto g2 = build_graph(m, 1.0, 1);
  louvain_communities(g2, 1, 2);
  CHECK(g.community == g2.community);
  CHECK(g.modularity == doctest::Approx(g2.modularity));
}
