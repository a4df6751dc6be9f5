#include "spendnet/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "spendnet/common.hpp"
#include "spendnet/rng.hpp"

namespace spendnet {

namespace {

double sqdist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t d = 0; d < a.size(); ++d) {
    double x = a[d] - b[d];
    s += x * x;
  }
  return s;
}

KMeansResult kmeans_once(const std::vector<std::vector<double>>& pts, int k, std::mt19937_64& rng,
                         int max_iter) {
  const std::size_t n = pts.size();
  const std::size_t dim = pts[0].size();

  // k-means++ seeding
  std::vector<std::vector<double>> centroids;
  centroids.reserve(k);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  centroids.push_back(pts[pick(rng)]);
  std::vector<double> d2(n);
  for (int c = 1; c < k; ++c) {
    double total = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::max();
      for (const auto& ctr : centroids) best = std::min(best, sqdist(pts[i], ctr));
      d2[i] = best;
      total += best;
    }
    std::size_t chosen = 0;
    if (total > 0) {
      std::uniform_real_distribution<double> u(0.0, total);
      double target = u(rng), run = 0;
      for (std::size_t i = 0; i < n; ++i) {
        run += d2[i];
        if (run >= target) {
          chosen = i;
          break;
        }
      }
    } else {
      chosen = pick(rng);
    }
    centroids.push_back(pts[chosen]);
  }

  KMeansResult res;
  res.k = k;
  res.labels.assign(n, 0);
  for (int iter = 0; iter < max_iter; ++iter) {
    // assign
    bool changed = false;
    double inertia = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::max();
      int best_c = 0;
      for (int c = 0; c < k; ++c) {
        double d = sqdist(pts[i], centroids[c]);
        if (d < best) {
          best = d;
          best_c = c;
        }
      }
      if (res.labels[i] != best_c) {
        res.labels[i] = best_c;
        changed = true;
      }
      inertia += best;
    }
    res.inertia_trace.push_back(inertia);
    res.inertia = inertia;
    if (!changed && iter > 0) break;

    // update
    std::vector<std::vector<double>> sums(k, std::vector<double>(dim, 0.0));
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t d = 0; d < dim; ++d) sums[res.labels[i]][d] += pts[i][d];
      ++counts[res.labels[i]];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[c] == 0) {
        // reseed at the point farthest from its own centroid
        std::size_t far = 0;
        double far_d = -1;
        for (std::size_t i = 0; i < n; ++i) {
          double d = sqdist(pts[i], centroids[res.labels[i]]);
          if (d > far_d) {
            far_d = d;
            far = i;
          }
        }
        centroids[c] = pts[far];
        res.labels[far] = c;
      } else {
        for (std::size_t d = 0; d < dim; ++d)
          centroids[c][d] = sums[c][d] / static_cast<double>(counts[c]);
      }
    }
  }
  res.centroids = std::move(centroids);
  return res;
}

}  // namespace

KMeansResult kmeans(const std::vector<std::vector<double>>& points, int k, std::uint64_t seed,
                    int restarts, int max_iter) {
  if (points.empty()) throw Error("kmeans: no points");
  if (k < 1 || static_cast<std::size_t>(k) > points.size())
    throw Error("kmeans: k out of range");
  KMeansResult best;
  best.inertia = std::numeric_limits<double>::max();
  for (int r = 0; r < std::max(1, restarts); ++r) {
    auto rng = make_rng(seed, r);
    auto res = kmeans_once(points, k, rng, max_iter);
    if (res.inertia < best.inertia - 1e-12) best = std::move(res);
  }
  return best;
}

double davies_bouldin_index(const std::vector<std::vector<double>>& points,
                            const KMeansResult& km) {
  const int k = km.k;
  std::vector<double> scatter(k, 0.0);
  std::vector<std::size_t> counts(k, 0);
  for (std::size_t i = 0; i < points.size(); ++i) {
    scatter[km.labels[i]] += std::sqrt(sqdist(points[i], km.centroids[km.labels[i]]));
    ++counts[km.labels[i]];
  }
  for (int c = 0; c < k; ++c)
    if (counts[c]) scatter[c] /= static_cast<double>(counts[c]);
  double db = 0;
  for (int i = 0; i < k; ++i) {
    double worst = 0;
    for (int j = 0; j < k; ++j) {
      if (i == j) continue;
      double m = std::sqrt(sqdist(km.centroids[i], km.centroids[j]));
      if (m > 0) worst = std::max(worst, (scatter[i] + scatter[j]) / m);
    }
    db += worst;
  }
  return db / k;
}

double calinski_harabasz_index(const std::vector<std::vector<double>>& points,
                               const KMeansResult& km) {
  const std::size_t n = points.size();
  const std::size_t dim = points[0].size();
  const int k = km.k;
  if (k < 2 || n <= static_cast<std::size_t>(k)) return std::nan("");
  std::vector<double> grand(dim, 0.0);
  for (const auto& p : points)
    for (std::size_t d = 0; d < dim; ++d) grand[d] += p[d];
  for (auto& g : grand) g /= static_cast<double>(n);

  std::vector<std::size_t> counts(k, 0);
  for (auto l : km.labels) ++counts[l];
  double between = 0;
  for (int c = 0; c < k; ++c) between += counts[c] * sqdist(km.centroids[c], grand);
  double within = km.inertia;
  if (within <= 0) return std::numeric_limits<double>::infinity();
  return (between / (k - 1)) / (within / static_cast<double>(n - k));
}

ClusteringResult kmeans_select(const std::vector<std::vector<double>>& features, int k_min,
                               int k_max, std::uint64_t seed, int restarts, int gap_refs,
                               bool standardize) {
  if (features.empty()) throw Error("kmeans_select: no feature rows");
  const std::size_t n = features.size();
  const std::size_t dim = features[0].size();
  if (k_min < 2 || static_cast<std::size_t>(k_max) > n - 1 || k_min > k_max)
    throw Error("kmeans_select: k range must lie in [2, n_points-1]");

  // per-dimension standardization
  std::vector<std::vector<double>> pts = features;
  if (standardize) {
    for (std::size_t d = 0; d < dim; ++d) {
      double mean = 0;
      for (const auto& p : pts) mean += p[d];
      mean /= static_cast<double>(n);
      double var = 0;
      for (const auto& p : pts) var += (p[d] - mean) * (p[d] - mean);
      var /= static_cast<double>(n);
      double sd = std::sqrt(var);
      if (sd > 0)
        for (auto& p : pts) p[d] = (p[d] - mean) / sd;
      else
        for (auto& p : pts) p[d] = 0.0;
    }
  }
  {
    bool degenerate = true;
    for (std::size_t i = 1; i < n && degenerate; ++i)
      if (pts[i] != pts[0]) degenerate = false;
    if (degenerate) throw Error("kmeans_select: degenerate features (all points identical)");
  }

  // bounding box for the Gap reference distribution
  std::vector<double> lo(dim, std::numeric_limits<double>::max());
  std::vector<double> hi(dim, std::numeric_limits<double>::lowest());
  for (const auto& p : pts)
    for (std::size_t d = 0; d < dim; ++d) {
      lo[d] = std::min(lo[d], p[d]);
      hi[d] = std::max(hi[d], p[d]);
    }

  ClusteringResult out;
  out.standardized = standardize;
  std::vector<KMeansResult> fits;
  for (int k = k_min; k <= k_max; ++k) {
    auto km = kmeans(pts, k, derive_seed(seed, 1000 + k), restarts);
    SelectionScores s;
    s.k = k;
    s.davies_bouldin = davies_bouldin_index(pts, km);
    s.calinski_harabasz = calinski_harabasz_index(pts, km);

    // Gap statistic: log E[W_ref] - log W, reference points uniform in
    // the bounding box (fewer restarts; the references only need a
    // decent fit).
    std::vector<double> log_w(gap_refs);
    for (int b = 0; b < gap_refs; ++b) {
      auto rng = make_rng(seed, 50'000 + static_cast<std::uint64_t>(k) * 1000 + b);
      std::vector<std::vector<double>> ref(n, std::vector<double>(dim));
      for (auto& p : ref)
        for (std::size_t d = 0; d < dim; ++d)
          p[d] = std::uniform_real_distribution<double>(lo[d], hi[d])(rng);
      auto ref_km = kmeans(ref, k, derive_seed(seed, 90'000 + k * 1000 + b), 3);
      log_w[b] = std::log(std::max(ref_km.inertia, 1e-300));
    }
    double mean_lw = std::accumulate(log_w.begin(), log_w.end(), 0.0) / gap_refs;
    double sd = 0;
    for (double v : log_w) sd += (v - mean_lw) * (v - mean_lw);
    sd = std::sqrt(sd / gap_refs);
    s.gap = mean_lw - std::log(std::max(km.inertia, 1e-300));
    s.gap_se = sd * std::sqrt(1.0 + 1.0 / gap_refs);

    out.scores.push_back(s);
    fits.push_back(std::move(km));
  }

  // per-criterion picks
  out.best_db = out.scores[0].k;
  out.best_ch = out.scores[0].k;
  double db_best = out.scores[0].davies_bouldin, ch_best = out.scores[0].calinski_harabasz;
  for (const auto& s : out.scores) {
    if (s.davies_bouldin < db_best) {
      db_best = s.davies_bouldin;
      out.best_db = s.k;
    }
    if (s.calinski_harabasz > ch_best) {
      ch_best = s.calinski_harabasz;
      out.best_ch = s.k;
    }
  }
  // Gap rule: smallest k with Gap(k) >= Gap(k+1) - se(k+1); argmax fallback
  out.best_gap = 0;
  for (std::size_t i = 0; i + 1 < out.scores.size(); ++i) {
    if (out.scores[i].gap >= out.scores[i + 1].gap - out.scores[i + 1].gap_se) {
      out.best_gap = out.scores[i].k;
      break;
    }
  }
  if (out.best_gap == 0) {
    double g_best = out.scores[0].gap;
    out.best_gap = out.scores[0].k;
    for (const auto& s : out.scores)
      if (s.gap > g_best) {
        g_best = s.gap;
        out.best_gap = s.k;
      }
  }

  // consensus: two criteria agreeing win, Davies-Bouldin otherwise
  if (out.best_db == out.best_ch || out.best_db == out.best_gap)
    out.k_selected = out.best_db;
  else if (out.best_ch == out.best_gap)
    out.k_selected = out.best_ch;
  else
    out.k_selected = out.best_db;
  out.best = fits[out.k_selected - k_min];
  return out;
}

}  // namespace spendnet
