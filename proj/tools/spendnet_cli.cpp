// spendnet: socioeconomic consumption analysis over interaction and
// transaction logs. Subcommands cover the whole pipeline from synthetic
// corpus generation to class partitioning, consumption statistics,
// null-model comparison, category correlation networks and demographic
// clustering.
#include <CLI11.hpp>

#include <string>

#include "spendnet/pipeline.hpp"

namespace {

std::pair<int, int> parse_k_range(const std::string& text) {
  auto sep = text.find_first_of(":-");
  if (sep == std::string::npos) throw CLI::ValidationError("--k-range expects LO:HI");
  int lo = std::stoi(text.substr(0, sep));
  int hi = std::stoi(text.substr(sep + 1));
  if (lo < 2 || hi < lo) throw CLI::ValidationError("--k-range expects 2 <= LO <= HI");
  return {lo, hi};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"socioeconomic consumption analysis pipeline"};
  app.set_config("--config", "", "flat key=value config file; flags win");
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  spendnet::RunConfig cfg;
  std::string k_range = "2:18";
  std::string variant = "ex-cash";
  std::int64_t min_common = -1;

  app.add_option("--input-dir", cfg.input_dir, "directory with the input CSVs");
  app.add_option("--out-dir", cfg.out_dir, "directory for artifacts")->required();
  app.add_option("--taxonomy", cfg.taxonomy_path, "taxonomy.csv override (default: bundled)");
  app.add_option("--seed", cfg.seed, "master seed; every random stream derives from it");
  app.add_option("--n-classes", cfg.n_classes, "socioeconomic class count")->check(CLI::PositiveNumber);
  app.add_option("--swap-mult", cfg.swap_multiplier, "attempted swaps per edge in the null model");
  app.add_option("--replicas", cfg.replicas, "null-model replicas");
  app.add_option("--rho-min", cfg.rho_min, "correlation graph edge threshold");
  app.add_option("--min-common", min_common, "common-consumer cutoff (default: auto-scaled)");
  app.add_option("--k-range", k_range, "k-means candidate range LO:HI");
  app.add_flag("--svg", cfg.svg, "also emit SVG figures");
  app.add_option("--variant", variant, "spending vector variant")
      ->check(CLI::IsMember({"ex-cash", "inc-cash"}));
  app.add_option("--min-active-months", cfg.min_active_months, "activity filter threshold");
  app.add_option("--min-purchases", cfg.min_purchases, "category purchase-count cutoff");
  bool no_standardize = false;
  app.add_flag("--no-standardize", no_standardize,
               "cluster raw feature values instead of per-dimension standardized ones");

  auto* gen = app.add_subcommand("generate", "write a synthetic corpus with planted structure");
  gen->add_option("--n-egos", cfg.synth.n_egos, "population size");
  gen->add_option("--pareto-shape", cfg.synth.pareto_shape, "spending tail exponent");
  gen->add_option("--n-planted", cfg.synth.n_classes_planted, "planted class count");
  gen->add_option("--homophily", cfg.synth.homophily, "edge class-locality in [0,1]");
  gen->add_option("--mean-degree", cfg.synth.mean_degree, "average degree");
  gen->add_option("--concentration", cfg.synth.profile_concentration,
                  "profile sharpness around the class preference");
  gen->add_option("--months", cfg.synth.months, "observation months");

  for (const char* name : {"ingest", "classes", "consumption", "nullmodel", "categories",
                           "communities", "demographics", "report", "all"})
    app.add_subcommand(name);

  CLI11_PARSE(app, argc, argv);

  auto [k_lo, k_hi] = parse_k_range(k_range);
  cfg.k_min = k_lo;
  cfg.k_max = k_hi;
  cfg.variant = variant == "inc-cash" ? spendnet::SpendingVariant::including_cash
                                      : spendnet::SpendingVariant::excluding_cash;
  if (min_common >= 0) cfg.min_common = static_cast<std::uint64_t>(min_common);
  cfg.standardize_features = !no_standardize;
  cfg.synth.seed = cfg.seed;

  return spendnet::run_subcommand(app.get_subcommands().front()->get_name(), cfg);
}
