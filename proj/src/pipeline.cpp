#include "spendnet/pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <json.hpp>

#include "spendnet/category_correlation.hpp"
#include "spendnet/class_consumption.hpp"
#include "spendnet/csv.hpp"
#include "spendnet/demographics.hpp"
#include "spendnet/ingestion.hpp"
#include "spendnet/social_nullmodel.hpp"
#include "spendnet/socioeco.hpp"
#include "spendnet/svg_report.hpp"

namespace spendnet {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

std::string taxonomy_path_of(const RunConfig& cfg) {
  return cfg.taxonomy_path.empty() ? CategoryTaxonomy::default_path() : cfg.taxonomy_path;
}

void require_file(const std::string& path) {
  if (!fs::exists(path)) throw MissingInputError("missing input: " + path);
}

json config_json(const RunConfig& cfg) {
  json j;
  j["input_dir"] = cfg.input_dir;
  j["out_dir"] = cfg.out_dir;
  j["taxonomy"] = taxonomy_path_of(cfg);
  j["seed"] = cfg.seed;
  j["n_classes"] = cfg.n_classes;
  j["swap_multiplier"] = cfg.swap_multiplier;
  j["replicas"] = cfg.replicas;
  j["rho_min"] = cfg.rho_min;
  if (cfg.min_common)
    j["min_common"] = *cfg.min_common;
  else
    j["min_common"] = "auto";
  j["k_range"] = std::to_string(cfg.k_min) + ":" + std::to_string(cfg.k_max);
  j["variant"] = cfg.variant == SpendingVariant::excluding_cash ? "ex-cash" : "inc-cash";
  j["min_active_months"] = cfg.min_active_months;
  j["min_purchases"] = cfg.min_purchases;
  j["svg"] = cfg.svg;
  j["standardize_features"] = cfg.standardize_features;
  j["kmeans_restarts"] = cfg.kmeans_restarts;
  j["gap_refs"] = cfg.gap_refs;
  j["synth"] = {{"n_egos", cfg.synth.n_egos},
                {"pareto_shape", cfg.synth.pareto_shape},
                {"n_classes_planted", cfg.synth.n_classes_planted},
                {"homophily", cfg.synth.homophily},
                {"mean_degree", cfg.synth.mean_degree},
                {"profile_concentration", cfg.synth.profile_concentration},
                {"months", cfg.synth.months},
                {"seed", cfg.synth.seed}};
  return j;
}

void update_report(const RunConfig& cfg, const std::string& stage, const json& section) {
  fs::create_directories(cfg.out_dir);
  std::string path = cfg.out_dir + "/report.json";
  json report;
  if (fs::exists(path)) {
    std::ifstream in(path);
    try {
      in >> report;
    } catch (...) {
      report = json::object();
    }
  }
  report["parameters"] = config_json(cfg);
  report["stages"][stage] = section;
  std::ofstream out(path);
  out << report.dump(2) << "\n";
}

/// Lazily loads shared inputs and intermediate artifacts, caching them so
/// the `all` subcommand runs each load once.
struct Context {
  const RunConfig& cfg;
  explicit Context(const RunConfig& c) : cfg(c) {}

  const CategoryTaxonomy& taxonomy() {
    if (!taxonomy_) taxonomy_ = CategoryTaxonomy::load(taxonomy_path_of(cfg));
    return *taxonomy_;
  }
  const TransactionLedger& active_ledger() {
    if (!ledger_) {
      require_file(cfg.input_dir + "/transactions.csv");
      ledger_ = filter_active(load_transactions(cfg.input_dir + "/transactions.csv"),
                              cfg.min_active_months);
    }
    return *ledger_;
  }
  const ProfileMap& profiles() {
    if (!profiles_) {
      require_file(cfg.input_dir + "/profiles.csv");
      profiles_ = load_profiles(cfg.input_dir + "/profiles.csv");
    }
    return *profiles_;
  }
  const JoinedDataset& joined() {
    if (!joined_) {
      require_file(cfg.input_dir + "/interactions.csv");
      auto events = load_event_graph(cfg.input_dir + "/interactions.csv", &parse_stats);
      auto pruned = prune_inactive(events);
      auto social = largest_connected_component(undirect(pruned));
      joined_ = join_datasets(social, profiles(), active_ledger());
    }
    return *joined_;
  }
  const AmpTable& amp() {
    if (!amp_) amp_ = compute_amp(active_ledger());
    return *amp_;
  }
  const ClassPartition& classes() {
    if (!classes_) {
      std::string path = cfg.out_dir + "/classes.csv";
      require_file(path);
      classes_ = load_classes_csv(path);
    }
    return *classes_;
  }
  void set_classes(ClassPartition p) { classes_ = std::move(p); }

  const PurchaseDistributionSet& distributions() {
    if (!dist_) dist_ = purchase_distributions(active_ledger(), taxonomy(), cfg.min_purchases);
    return *dist_;
  }

  ParseStats parse_stats;

 private:
  std::optional<CategoryTaxonomy> taxonomy_;
  std::optional<TransactionLedger> ledger_;
  std::optional<ProfileMap> profiles_;
  std::optional<JoinedDataset> joined_;
  std::optional<AmpTable> amp_;
  std::optional<ClassPartition> classes_;
  std::optional<PurchaseDistributionSet> dist_;
};

void stage_generate(Context& ctx) {
  const auto& cfg = ctx.cfg;
  fs::create_directories(cfg.out_dir);
  auto out = generate(cfg.synth, ctx.taxonomy());
  write_synth_csvs(out, cfg.out_dir);

  std::vector<int> planted(out.graph.node_count());
  for (std::size_t v = 0; v < out.graph.node_count(); ++v)
    planted[v] = out.planted_class.at(out.graph.ids()[v]);
  json section;
  section["egos"] = out.graph.node_count();
  section["edges"] = out.graph.edge_count();
  section["transactions"] = out.ledger.row_count();
  section["planted_assortativity"] = attribute_assortativity(out.graph, planted);
  update_report(cfg, "generate", section);
}

void stage_ingest(Context& ctx) {
  const auto& cfg = ctx.cfg;
  fs::create_directories(cfg.out_dir);
  const auto& joined = ctx.joined();
  {
    CsvWriter w(cfg.out_dir + "/joined_nodes.csv", {"ego_id"});
    for (const auto& id : joined.graph.ids()) w.row({id});
  }
  {
    CsvWriter w(cfg.out_dir + "/joined_edges.csv", {"ego_a", "ego_b"});
    for (const auto& [a, b] : joined.graph.edges())
      w.row({joined.graph.ids()[a], joined.graph.ids()[b]});
  }
  json section;
  section["interaction_rows"] = ctx.parse_stats.rows;
  section["interaction_events"] = ctx.parse_stats.events;
  section["malformed_rows"] = ctx.parse_stats.malformed;
  section["self_interactions"] = ctx.parse_stats.self_loops;
  section["joined_nodes"] = joined.graph.node_count();
  section["joined_edges"] = joined.graph.edge_count();
  section["dropped_nodes"] = joined.dropped_nodes;
  update_report(cfg, "ingest", section);
}

void stage_classes(Context& ctx) {
  const auto& cfg = ctx.cfg;
  fs::create_directories(cfg.out_dir);
  auto partition = partition_classes(ctx.amp(), cfg.n_classes);
  auto curve = cumulative_curve(ctx.amp());
  write_classes_csv(ctx.amp(), partition, cfg.out_dir + "/classes.csv");
  write_curve_csv(curve, cfg.out_dir + "/curve.csv");

  json section;
  section["egos"] = ctx.amp().by_ego.size();
  section["excluded_zero_purchase"] = ctx.amp().excluded;
  section["gini"] = gini_from_curve(curve);
  json sizes = json::array(), means = json::array();
  for (const auto& c : partition.classes) {
    sizes.push_back(c.size);
    means.push_back(c.mean_amp);
  }
  section["class_sizes"] = sizes;
  section["class_mean_amp"] = means;
  ctx.set_classes(std::move(partition));
  update_report(cfg, "classes", section);
}

void stage_consumption(Context& ctx) {
  const auto& cfg = ctx.cfg;
  fs::create_directories(cfg.out_dir);
  const auto& joined = ctx.joined();
  auto ds1_ledger = ctx.active_ledger().restricted_to(joined.graph.ids());
  const auto& partition = ctx.classes();

  auto shares = group_spending_shares(ds1_ledger, partition, ctx.taxonomy());
  write_group_shares_csv(shares, ctx.taxonomy(), cfg.out_dir + "/r_matrix.csv");

  auto vectors = spending_vectors(ds1_ledger, ctx.taxonomy(), cfg.variant);
  auto stats = class_mean_vectors(vectors, partition);
  write_class_means_csv(stats, ctx.taxonomy().cash_group(), cfg.out_dir + "/sv_class_means.csv");
  write_distance_csv(sv_distance_matrix(stats), cfg.out_dir + "/d_matrix_sv.csv");
  write_distance_csv(cash_distance_matrix(stats), cfg.out_dir + "/d_matrix_k1.csv");

  auto [sigma, sigma_cash] = class_dispersion(vectors, partition);
  auto vectors_ex = cfg.variant == SpendingVariant::excluding_cash
                        ? std::move(vectors)
                        : spending_vectors(ds1_ledger, ctx.taxonomy(),
                                           SpendingVariant::excluding_cash);
  auto vectors_inc = spending_vectors(ds1_ledger, ctx.taxonomy(), SpendingVariant::including_cash);
  auto entropy_ex = class_entropy(class_mean_vectors(vectors_ex, partition));
  auto entropy_inc = class_entropy(class_mean_vectors(vectors_inc, partition));
  write_dispersion_entropy_csv(sigma, sigma_cash, entropy_ex, entropy_inc,
                               cfg.out_dir + "/dispersion_entropy.csv");

  json section;
  section["ds1_egos"] = ds1_ledger.ego_count();
  section["vector_egos"] = vectors_ex.size();
  section["excluded_no_in_scope_spending"] = vectors_ex.excluded;
  section["low_activity_groups"] = shares.low_activity;
  section["omitted_groups"] = shares.omitted;
  update_report(cfg, "consumption", section);
}

void stage_nullmodel(Context& ctx) {
  const auto& cfg = ctx.cfg;
  fs::create_directories(cfg.out_dir);
  const SocialGraph& full = ctx.joined().graph;
  auto ds1_ledger = ctx.active_ledger().restricted_to(full.ids());
  auto vectors = spending_vectors(ds1_ledger, ctx.taxonomy(), cfg.variant);

  // Egos without an in-scope spending vector (e.g. cash-only) cannot
  // enter the comparison; restrict the graph to covered nodes.
  std::vector<std::uint32_t> covered;
  for (std::uint32_t v = 0; v < full.node_count(); ++v) {
    const auto& id = full.ids()[v];
    if (vectors.index_of(id) && ctx.classes().assignment.count(id)) covered.push_back(v);
  }
  SocialGraph induced_graph;
  const SocialGraph& graph =
      covered.size() == full.node_count() ? full : (induced_graph = full.induced(covered));

  SwapPlan plan;
  plan.swap_multiplier = cfg.swap_multiplier;
  plan.replicas = cfg.replicas;
  plan.seed = cfg.seed;
  auto result = l_ratio(graph, vectors, ctx.classes(), plan);

  write_l_matrix_csv(result, false, cfg.out_dir + "/L_sv.csv");
  write_l_matrix_csv(result, true, cfg.out_dir + "/L_k1.csv");
  write_null_stats_csv(result, cfg.out_dir + "/null_stats.csv");

  json section;
  section["replicas"] = cfg.replicas;
  section["swap_multiplier"] = cfg.swap_multiplier;
  section["graph_nodes"] = graph.node_count();
  section["graph_edges"] = graph.edge_count();
  int diag_below = 0, defined_diag = 0;
  for (int i = 1; i <= result.n_classes; ++i) {
    double L = result.l_sv[ClassPairDiff::pair_index(i, i, result.n_classes)];
    if (!std::isnan(L)) {
      ++defined_diag;
      if (L < 1) ++diag_below;
    }
  }
  section["diagonal_pairs_below_one"] = diag_below;
  section["diagonal_pairs_defined"] = defined_diag;
  update_report(cfg, "nullmodel", section);
}

void stage_categories(Context& ctx) {
  const auto& cfg = ctx.cfg;
  fs::create_directories(cfg.out_dir);
  const auto& dist = ctx.distributions();
  if (dist.size() < 2) throw InvariantViolation("categories: fewer than 2 egos with distributions");
  auto matrix = correlation_matrix(dist);
  write_rho_csv(matrix, cfg.out_dir + "/rho_matrix.csv");
  auto graph = build_graph(matrix, cfg.rho_min, cfg.min_common);
  if (graph.edges.empty())
    std::cerr << "warning: correlation graph is empty after thresholding\n";
  write_graph_edges_csv(graph, cfg.out_dir + "/graph_edges.csv");

  json section;
  section["egos"] = dist.size();
  section["excluded_egos"] = dist.excluded_egos;
  section["categories"] = dist.mccs.size();
  section["dropped_low_count_categories"] = dist.dropped_low.size();
  section["graph_nodes"] = graph.mccs.size();
  section["graph_edges"] = graph.edges.size();
  section["min_common_used"] = graph.min_common_used;
  update_report(cfg, "categories", section);
}

void stage_communities(Context& ctx) {
  const auto& cfg = ctx.cfg;
  require_file(cfg.out_dir + "/graph_edges.csv");
  auto graph = load_graph_edges_csv(cfg.out_dir + "/graph_edges.csv");
  if (graph.edges.empty()) throw MissingInputError("communities: correlation graph has no edges");
  louvain_communities(graph, cfg.seed, 4);
  write_communities_csv(graph, cfg.out_dir + "/communities.csv");
  if (cfg.svg) {
    auto matrix = correlation_matrix(ctx.distributions());
    write_rho_heatmap_svg(matrix, graph, cfg.out_dir + "/rho_heatmap.svg");
  }
  int count = 0;
  for (int c : graph.community) count = std::max(count, c);
  json section;
  section["communities"] = count;
  section["modularity"] = graph.modularity;
  update_report(cfg, "communities", section);
}

void stage_demographics(Context& ctx) {
  const auto& cfg = ctx.cfg;
  fs::create_directories(cfg.out_dir);
  const auto& dist = ctx.distributions();
  auto features = afs(dist, ctx.profiles(), ctx.classes());
  write_afs_csv(features, "mcc", cfg.out_dir + "/afs.csv");

  json section;
  section["categories"] = features.rows.size();
  section["excluded_categories"] = features.excluded.size();

  std::vector<double> ages, segs, genders, seg_for_gender;
  for (const auto& r : features.rows) {
    ages.push_back(r.age);
    segs.push_back(r.seg);
    if (!std::isnan(r.gender)) {
      genders.push_back(r.gender);
      seg_for_gender.push_back(r.seg);
    }
  }
  if (ages.size() >= 3) {
    auto age_seg = pearson(ages, segs);
    section["age_seg_pearson"] = age_seg.r;
    section["age_seg_p"] = age_seg.p_value;
  }
  if (genders.size() >= 3) {
    auto gender_seg = pearson(genders, seg_for_gender);
    section["gender_seg_pearson"] = gender_seg.r;
    section["gender_seg_p"] = gender_seg.p_value;
  }

  std::vector<std::vector<double>> points;
  for (const auto& r : features.rows)
    points.push_back({r.age, std::isnan(r.gender) ? 0.5 : r.gender, r.seg});
  int k_max = std::min<int>(cfg.k_max, static_cast<int>(points.size()) - 1);
  auto clustering = kmeans_select(points, cfg.k_min, k_max, cfg.seed, cfg.kmeans_restarts,
                                  cfg.gap_refs, cfg.standardize_features);
  write_clusters_csv(features, clustering, cfg.out_dir + "/clusters.csv");
  write_selection_csv(clustering, cfg.out_dir + "/selection.csv");
  section["k_selected"] = clustering.k_selected;
  section["k_best_davies_bouldin"] = clustering.best_db;
  section["k_best_calinski_harabasz"] = clustering.best_ch;
  section["k_best_gap"] = clustering.best_gap;

  require_file(cfg.out_dir + "/communities.csv");
  require_file(cfg.out_dir + "/graph_edges.csv");
  auto graph = load_graph_edges_csv(cfg.out_dir + "/graph_edges.csv");
  {
    CsvReader reader(cfg.out_dir + "/communities.csv", {"mcc", "community"});
    std::map<int, int> comm;
    std::vector<std::string> f;
    while (reader.next(f)) comm.emplace(std::stoi(f[0]), std::stoi(f[1]));
    graph.community.resize(graph.mccs.size());
    for (std::size_t v = 0; v < graph.mccs.size(); ++v)
      graph.community[v] = comm.at(graph.mccs[v]);
  }
  auto pooled = community_afs(dist, graph, ctx.profiles(), ctx.classes());
  write_afs_csv(pooled, "community", cfg.out_dir + "/community_afs.csv");

  if (cfg.svg) write_afs_scatter_svg(features, cfg.out_dir + "/afs_scatter.svg");
  update_report(cfg, "demographics", section);
}

void stage_report(Context& ctx) {
  const auto& cfg = ctx.cfg;
  fs::create_directories(cfg.out_dir);
  // Consolidation: echo parameters and inventory the artifacts present.
  json inventory = json::object();
  const char* names[] = {"classes.csv",     "curve.csv",          "r_matrix.csv",
                         "sv_class_means.csv", "d_matrix_sv.csv",  "d_matrix_k1.csv",
                         "dispersion_entropy.csv", "L_sv.csv",     "L_k1.csv",
                         "null_stats.csv",  "rho_matrix.csv",     "graph_edges.csv",
                         "communities.csv", "afs.csv",            "clusters.csv",
                         "selection.csv",   "community_afs.csv",  "joined_nodes.csv",
                         "joined_edges.csv"};
  for (const char* n : names) inventory[n] = fs::exists(cfg.out_dir + "/" + std::string(n));
  update_report(cfg, "report", inventory);
}

}  // namespace

int run_subcommand(const std::string& name, const RunConfig& cfg) {
  try {
    Context ctx(cfg);
    if (name == "generate") {
      stage_generate(ctx);
    } else if (name == "ingest") {
      stage_ingest(ctx);
    } else if (name == "classes") {
      stage_classes(ctx);
    } else if (name == "consumption") {
      stage_consumption(ctx);
    } else if (name == "nullmodel") {
      stage_nullmodel(ctx);
    } else if (name == "categories") {
      stage_categories(ctx);
    } else if (name == "communities") {
      stage_communities(ctx);
    } else if (name == "demographics") {
      stage_demographics(ctx);
    } else if (name == "report") {
      stage_report(ctx);
    } else if (name == "all") {
      stage_ingest(ctx);
      stage_classes(ctx);
      stage_consumption(ctx);
      stage_nullmodel(ctx);
      stage_categories(ctx);
      stage_communities(ctx);
      stage_demographics(ctx);
      stage_report(ctx);
    } else {
      std::cerr << "unknown subcommand: " << name << "\n";
      return 1;
    }
    return 0;
  } catch (const MissingInputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violated: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace spendnet
