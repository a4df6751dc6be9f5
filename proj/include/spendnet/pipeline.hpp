#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "spendnet/synthgen.hpp"
#include "spendnet/types.hpp"

namespace spendnet {

/// Pipeline configuration. Defaults follow the reference analysis:
/// 9 classes, 5x|E| swap attempts, 100 replicas, rho > 1.5, auto-scaled
/// common-consumer cutoff. All randomness flows from `seed`.
struct RunConfig {
  std::string input_dir;
  std::string out_dir;
  std::string taxonomy_path;  // empty = bundled default

  std::uint64_t seed = 42;
  int n_classes = 9;
  int swap_multiplier = 5;
  int replicas = 100;
  double rho_min = 1.5;
  std::optional<std::uint64_t> min_common;  // auto-scaled when unset
  int k_min = 2;
  int k_max = 18;
  bool svg = false;
  SpendingVariant variant = SpendingVariant::excluding_cash;
  int min_active_months = 2;
  std::uint64_t min_purchases = 100;
  int kmeans_restarts = 10;
  int gap_refs = 50;
  bool standardize_features = true;

  SynthConfig synth;  // for the generate subcommand
};

/// Exit codes: 0 success, 2 missing input, 3 invariant violation,
/// 1 other failure.
int run_subcommand(const std::string& name, const RunConfig& cfg);

}  // namespace spendnet
