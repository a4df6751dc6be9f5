#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "spendnet/types.hpp"

namespace spendnet {

struct InteractionEvent {
  std::string caller;
  std::string callee;
  std::int64_t timestamp = 0;  // epoch seconds
  bool is_sms = false;
  int duration = 0;  // seconds, 0 for sms
};

/// Directed interaction multigraph with per-node in/out degree counters.
class DirectedEventGraph {
 public:
  void add_event(const std::string& caller, const std::string& callee);

  std::size_t node_count() const { return ids_.size(); }
  const std::vector<std::string>& ids() const { return ids_; }
  // (src, dst) -> event count
  const std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t>& edge_counts() const {
    return edges_;
  }
  std::uint32_t in_degree(std::uint32_t node) const { return in_[node]; }
  std::uint32_t out_degree(std::uint32_t node) const { return out_[node]; }

  /// Degree counters must match the edge multiset; throws otherwise.
  void check_consistent() const;

 private:
  friend DirectedEventGraph prune_inactive(const DirectedEventGraph&);
  std::vector<std::string> ids_;
  std::unordered_map<std::string, std::uint32_t> index_;
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> edges_;
  std::vector<std::uint32_t> in_, out_;
  std::uint32_t intern(const std::string& id);
};

struct ParseStats {
  std::size_t rows = 0;       // data rows seen
  std::size_t events = 0;     // events yielded
  std::size_t malformed = 0;  // unparsable rows, skipped
  std::size_t self_loops = 0; // caller == callee, cleaned
};

/// Streams interactions.csv (caller_id,callee_id,timestamp,kind,duration)
/// into `sink`. Malformed rows are counted and skipped; self-interactions
/// are cleaned. Fatal if the file is unreadable or more than 10% of data
/// rows are malformed.
ParseStats parse_interactions(const std::string& path,
                              const std::function<void(const InteractionEvent&)>& sink);

/// Convenience: parse straight into a directed event graph.
DirectedEventGraph load_event_graph(const std::string& path, ParseStats* stats = nullptr);

/// Recursively removes nodes with in-degree 0 or out-degree 0 until every
/// remaining node has both. Work-queue algorithm, O(V+E); the result is
/// the unique maximal fixed point, independent of removal order.
DirectedEventGraph prune_inactive(const DirectedEventGraph& g);

/// Collapses the directed multigraph to an undirected simple graph: one
/// edge per unordered pair with at least one event in either direction.
SocialGraph undirect(const DirectedEventGraph& g);

/// Induced subgraph on the largest connected component. Ties between
/// equal-size components go to the one containing the smallest node id
/// (lexicographic).
SocialGraph largest_connected_component(const SocialGraph& g);

/// Keeps egos with at least `min_months` distinct active months.
TransactionLedger filter_active(const TransactionLedger& ledger, int min_months = 2);

struct JoinedDataset {
  SocialGraph graph;
  ProfileMap profiles;        // one entry per node
  TransactionLedger ledger;   // >= 1 transaction per node
  std::size_t dropped_nodes = 0;
};

/// Intersects the graph's ids with profile and ledger ids, induces the
/// subgraph, and repeatedly takes the largest connected component until
/// stable. The result satisfies every JoinedDataset invariant (checked).
JoinedDataset join_datasets(const SocialGraph& graph, const ProfileMap& profiles,
                            const TransactionLedger& ledger);

// CSV loaders for the other two input schemas.
TransactionLedger load_transactions(const std::string& path);
ProfileMap load_profiles(const std::string& path);

void write_transactions(const TransactionLedger& ledger, const std::string& path);
void write_profiles(const ProfileMap& profiles, const std::string& path);

}  // namespace spendnet
