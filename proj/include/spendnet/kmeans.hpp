#pragma once

#include <cstdint>
#include <vector>

namespace spendnet {

struct KMeansResult {
  int k = 0;
  std::vector<int> labels;  // 0-based cluster per point
  std::vector<std::vector<double>> centroids;
  double inertia = 0;
  std::vector<double> inertia_trace;  // per Lloyd iteration, non-increasing
};

/// Lloyd's k-means with k-means++ seeding; `restarts` runs with derived
/// seeds keep the best inertia (ties to the lowest restart index).
/// Deterministic under `seed`. Empty clusters are reseeded at the point
/// farthest from its centroid.
KMeansResult kmeans(const std::vector<std::vector<double>>& points, int k, std::uint64_t seed,
                    int restarts = 10, int max_iter = 300);

struct SelectionScores {
  int k = 0;
  double davies_bouldin = 0;    // lower is better
  double calinski_harabasz = 0; // higher is better
  double gap = 0;
  double gap_se = 0;
};

struct ClusteringResult {
  int k_selected = 0;
  int best_db = 0, best_ch = 0, best_gap = 0;  // per-criterion choice
  std::vector<SelectionScores> scores;
  KMeansResult best;  // the run at k_selected
  bool standardized = true;
};

/// Runs k-means over k in [k_min, k_max] on (optionally per-dimension
/// standardized) features, scores every k with the Davies-Bouldin,
/// Calinski-Harabasz and Gap criteria, and picks the consensus k (two or
/// more criteria agreeing; Davies-Bouldin otherwise). The Gap statistic
/// uses `gap_refs` uniform reference draws over the feature bounding box.
ClusteringResult kmeans_select(const std::vector<std::vector<double>>& features, int k_min,
                               int k_max, std::uint64_t seed, int restarts = 10, int gap_refs = 50,
                               bool standardize = true);

double davies_bouldin_index(const std::vector<std::vector<double>>& points,
                            const KMeansResult& km);
double calinski_harabasz_index(const std::vector<std::vector<double>>& points,
                               const KMeansResult& km);

}  // namespace spendnet
