#include "spendnet/ingestion.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <numeric>
#include <set>

#include "spendnet/csv.hpp"

namespace spendnet {

namespace {

template <typename T>
bool to_number(const std::string& s, T& out) {
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && p == s.data() + s.size();
}

}  // namespace

std::uint32_t DirectedEventGraph::intern(const std::string& id) {
  auto it = index_.find(id);
  if (it != index_.end()) return it->second;
  auto n = static_cast<std::uint32_t>(ids_.size());
  ids_.push_back(id);
  index_.emplace(id, n);
  in_.push_back(0);
  out_.push_back(0);
  return n;
}

void DirectedEventGraph::add_event(const std::string& caller, const std::string& callee) {
  auto s = intern(caller);
  auto d = intern(callee);
  ++edges_[{s, d}];
  ++out_[s];
  ++in_[d];
}

void DirectedEventGraph::check_consistent() const {
  std::vector<std::uint32_t> in(ids_.size(), 0), out(ids_.size(), 0);
  for (const auto& [e, n] : edges_) {
    out[e.first] += n;
    in[e.second] += n;
  }
  if (in != in_ || out != out_)
    throw InvariantViolation("directed event graph degree counters inconsistent with edges");
}

ParseStats parse_interactions(const std::string& path,
                              const std::function<void(const InteractionEvent&)>& sink) {
  CsvReader reader(path, {"caller_id", "callee_id", "timestamp", "kind", "duration"});
  ParseStats stats;
  std::vector<std::string> f;
  while (reader.next(f)) {
    ++stats.rows;
    InteractionEvent ev;
    bool ok = f.size() == 5 && !f[0].empty() && !f[1].empty();
    if (ok) {
      ev.caller = f[0];
      ev.callee = f[1];
      ok = to_number(f[2], ev.timestamp) && to_number(f[4], ev.duration) && ev.duration >= 0;
      if (f[3] == "sms")
        ev.is_sms = true;
      else if (f[3] != "call")
        ok = false;
    }
    if (!ok) {
      ++stats.malformed;
      continue;
    }
    if (ev.caller == ev.callee) {
      ++stats.self_loops;
      continue;
    }
    ++stats.events;
    sink(ev);
  }
  if (stats.rows > 0 && stats.malformed * 10 > stats.rows)
    throw ParseError("too many malformed rows in " + path + ": " + std::to_string(stats.malformed) +
                     " of " + std::to_string(stats.rows));
  return stats;
}

DirectedEventGraph load_event_graph(const std::string& path, ParseStats* stats) {
  DirectedEventGraph g;
  auto s = parse_interactions(path, [&](const InteractionEvent& ev) { g.add_event(ev.caller, ev.callee); });
  if (stats) *stats = s;
  return g;
}

DirectedEventGraph prune_inactive(const DirectedEventGraph& g) {
  const auto n = g.node_count();
  std::vector<std::int64_t> in(n, 0), out(n, 0);
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> out_adj(n), in_adj(n);
  for (const auto& [e, cnt] : g.edge_counts()) {
    out[e.first] += cnt;
    in[e.second] += cnt;
    out_adj[e.first].emplace_back(e.second, cnt);
    in_adj[e.second].emplace_back(e.first, cnt);
  }

  std::vector<char> dead(n, 0);
  std::deque<std::uint32_t> queue;
  for (std::uint32_t v = 0; v < n; ++v)
    if (in[v] == 0 || out[v] == 0) {
      dead[v] = 1;
      queue.push_back(v);
    }
  while (!queue.empty()) {
    auto v = queue.front();
    queue.pop_front();
    for (auto [w, cnt] : out_adj[v]) {
      if (dead[w]) continue;
      in[w] -= cnt;
      if (in[w] == 0) {
        dead[w] = 1;
        queue.push_back(w);
      }
    }
    for (auto [w, cnt] : in_adj[v]) {
      if (dead[w]) continue;
      out[w] -= cnt;
      if (out[w] == 0) {
        dead[w] = 1;
        queue.push_back(w);
      }
    }
  }

  DirectedEventGraph pruned;
  for (const auto& [e, cnt] : g.edge_counts()) {
    if (dead[e.first] || dead[e.second]) continue;
    const auto& src = g.ids()[e.first];
    const auto& dst = g.ids()[e.second];
    for (std::uint32_t i = 0; i < cnt; ++i) pruned.add_event(src, dst);
  }
  return pruned;
}

SocialGraph undirect(const DirectedEventGraph& g) {
  std::set<std::pair<std::uint32_t, std::uint32_t>> pairs;
  for (const auto& [e, cnt] : g.edge_counts()) {
    auto a = e.first, b = e.second;
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    pairs.insert({a, b});
  }
  std::vector<SocialGraph::Edge> edges(pairs.begin(), pairs.end());
  return SocialGraph::build(g.ids(), std::move(edges));
}

SocialGraph largest_connected_component(const SocialGraph& g) {
  if (g.node_count() == 0) return g;
  auto adj = g.adjacency();
  std::vector<std::int32_t> comp(g.node_count(), -1);
  std::vector<std::vector<std::uint32_t>> members;
  std::vector<std::uint32_t> stack;
  for (std::uint32_t s = 0; s < g.node_count(); ++s) {
    if (comp[s] >= 0) continue;
    auto c = static_cast<std::int32_t>(members.size());
    members.emplace_back();
    stack.push_back(s);
    comp[s] = c;
    while (!stack.empty()) {
      auto v = stack.back();
      stack.pop_back();
      members[c].push_back(v);
      for (auto i = adj.offsets[v]; i < adj.offsets[v + 1]; ++i) {
        auto w = adj.neighbors[i];
        if (comp[w] < 0) {
          comp[w] = c;
          stack.push_back(w);
        }
      }
    }
  }

  // Largest component; ties resolved by the smallest contained id.
  std::size_t best = 0;
  for (std::size_t c = 1; c < members.size(); ++c) {
    if (members[c].size() > members[best].size()) {
      best = c;
    } else if (members[c].size() == members[best].size()) {
      auto min_id = [&](const std::vector<std::uint32_t>& m) {
        const std::string* lo = &g.ids()[m[0]];
        for (auto v : m)
          if (g.ids()[v] < *lo) lo = &g.ids()[v];
        return lo;
      };
      if (*min_id(members[c]) < *min_id(members[best])) best = c;
    }
  }
  auto nodes = members[best];
  std::sort(nodes.begin(), nodes.end());
  return g.induced(nodes);
}

TransactionLedger filter_active(const TransactionLedger& ledger, int min_months) {
  if (min_months < 1) throw Error("min_months must be >= 1");
  TransactionLedger out;
  for (const auto& [ego, rows] : ledger.by_ego()) {
    if (TransactionLedger::active_months(rows) >= min_months)
      for (const auto& r : rows) out.add(ego, r.month, r.mcc, r.amount);
  }
  return out;
}

JoinedDataset join_datasets(const SocialGraph& graph, const ProfileMap& profiles,
                            const TransactionLedger& ledger) {
  std::vector<std::uint32_t> keep;
  for (std::uint32_t v = 0; v < graph.node_count(); ++v) {
    const auto& id = graph.ids()[v];
    if (profiles.count(id) && ledger.rows_for(id) != nullptr) keep.push_back(v);
  }
  if (keep.empty())
    throw MissingInputError(
        "join_datasets: no id appears in all of graph, profiles and ledger");

  SocialGraph g = graph.induced(keep);
  // Dropping unmatched nodes can split the component, so iterate LCC
  // until the node set is stable.
  for (;;) {
    SocialGraph lcc = largest_connected_component(g);
    if (lcc.node_count() == g.node_count()) {
      g = std::move(lcc);
      break;
    }
    g = std::move(lcc);
  }

  JoinedDataset out;
  out.dropped_nodes = graph.node_count() - g.node_count();
  out.ledger = g.node_count() ? ledger.restricted_to(g.ids()) : TransactionLedger{};
  for (const auto& id : g.ids()) out.profiles.emplace(id, profiles.at(id));
  out.graph = std::move(g);

  // Checked, not assumed.
  if (out.graph.node_count() == 0)
    throw InvariantViolation("joined dataset is empty");
  if (largest_connected_component(out.graph).node_count() != out.graph.node_count())
    throw InvariantViolation("joined dataset graph is not connected");
  for (const auto& id : out.graph.ids()) {
    if (!out.profiles.count(id))
      throw InvariantViolation("joined dataset node without profile: " + id);
    auto* rows = out.ledger.rows_for(id);
    if (rows == nullptr || rows->empty())
      throw InvariantViolation("joined dataset node without transactions: " + id);
  }
  return out;
}

TransactionLedger load_transactions(const std::string& path) {
  CsvReader reader(path, {"ego_id", "month", "amount", "mcc"});
  TransactionLedger ledger;
  std::vector<std::string> f;
  while (reader.next(f)) {
    if (f.size() != 4 || f[0].empty())
      throw ParseError(path + ":" + std::to_string(reader.line_number()) + ": bad transaction row");
    int mcc = 0;
    if (!to_number(f[3], mcc))
      throw ParseError(path + ":" + std::to_string(reader.line_number()) + ": bad mcc " + f[3]);
    ledger.add(f[0], parse_month(f[1]), mcc, Money::parse(f[2]));
  }
  return ledger;
}

ProfileMap load_profiles(const std::string& path) {
  CsvReader reader(path, {"ego_id", "age", "gender", "zip"});
  ProfileMap profiles;
  std::vector<std::string> f;
  while (reader.next(f)) {
    if (f.size() != 4 || f[0].empty())
      throw ParseError(path + ":" + std::to_string(reader.line_number()) + ": bad profile row");
    EgoProfile p;
    p.id = f[0];
    if (!to_number(f[1], p.age) || p.age < 0)
      throw ParseError(path + ":" + std::to_string(reader.line_number()) + ": bad age " + f[1]);
    if (f[2] == "F")
      p.gender = Gender::female;
    else if (f[2] == "M")
      p.gender = Gender::male;
    else if (!f[2].empty())
      throw ParseError(path + ":" + std::to_string(reader.line_number()) + ": bad gender " + f[2]);
    p.zip = f[3];
    if (!profiles.emplace(p.id, std::move(p)).second)
      throw ParseError(path + ": duplicate ego id " + f[0]);
  }
  return profiles;
}

void write_transactions(const TransactionLedger& ledger, const std::string& path) {
  CsvWriter w(path, {"ego_id", "month", "amount", "mcc"});
  for (const auto& [ego, rows] : ledger.by_ego())
    for (const auto& r : rows)
      w.row({ego, format_month(r.month), r.amount.str(), std::to_string(r.mcc)});
}

void write_profiles(const ProfileMap& profiles, const std::string& path) {
  CsvWriter w(path, {"ego_id", "age", "gender", "zip"});
  for (const auto& [id, p] : profiles) {
    std::string g = p.gender ? (*p.gender == Gender::male ? "M" : "F") : "";
    w.row({id, std::to_string(p.age), g, p.zip});
  }
}

}  // namespace spendnet
