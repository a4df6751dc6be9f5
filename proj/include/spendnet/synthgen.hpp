#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "spendnet/ingestion.hpp"
#include "spendnet/types.hpp"

namespace spendnet {

/// Configuration for the synthetic population generator. Everything is
/// deterministic under `seed`.
struct SynthConfig {
  std::uint32_t n_egos = 10'000;
  double pareto_shape = 1.5;       // tail exponent of per-ego spending power
  int n_classes_planted = 9;       // ground-truth strata
  double homophily = 0.5;          // probability an edge stays within
                                   // the same or an adjacent planted class
  double mean_degree = 10.0;
  double profile_concentration = 10.0;  // sharpness of per-ego category
                                        // preferences around the class profile
  int months = 8;
  std::uint64_t seed = 42;

  void validate() const;
};

struct SynthOutput {
  SocialGraph graph;
  ProfileMap profiles;
  TransactionLedger ledger;
  std::map<std::string, int> planted_class;  // ego -> 1..n_classes_planted
  std::vector<double> spending_power;        // per ego index, monthly budget
};

/// Generates a population with planted structure so every downstream
/// measure has ground truth:
///  - per-ego monthly budgets are Pareto(pareto_shape) distributed;
///  - planted classes are equal-count budget quantiles, each with its own
///    category-preference profile; profile entropy rises and profile noise
///    falls with class rank;
///  - the cash share of spending falls with class rank;
///  - edges prefer same/adjacent planted classes with probability
///    `homophily`;
///  - connected egos in nearby classes pull their preference vectors
///    together while edges across distant classes push them apart, both
///    scaled by `homophily`, so tie-level similarity structure exists at
///    every class and distant-tie dissimilarity exceeds chance.
SynthOutput generate(const SynthConfig& cfg, const CategoryTaxonomy& taxonomy);

/// Writes interactions.csv, transactions.csv, profiles.csv and
/// planted_classes.csv into `dir` (the same schemas ingestion consumes).
void write_synth_csvs(const SynthOutput& out, const std::string& dir);

std::string synth_ego_id(std::uint32_t index);

}  // namespace spendnet
