#include "spendnet/socioeco.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "spendnet/csv.hpp"

namespace spendnet {

AmpTable compute_amp(const TransactionLedger& ledger) {
  if (ledger.empty()) throw Error("compute_amp: empty ledger");
  AmpTable table;
  for (const auto& [ego, rows] : ledger.by_ego()) {
    std::int64_t total_cents = 0;
    std::set<int> months;
    for (const auto& r : rows) {
      total_cents += r.amount.cents();
      months.insert(r.month);
    }
    if (total_cents <= 0 || months.empty()) {
      ++table.excluded;
      continue;
    }
    AmpTable::Entry e;
    e.active_months = static_cast<int>(months.size());
    e.amp = static_cast<double>(total_cents) / 100.0 / e.active_months;
    table.by_ego.emplace(ego, e);
  }
  return table;
}

namespace {

std::vector<std::pair<std::string, double>> sorted_amps(const AmpTable& amp) {
  std::vector<std::pair<std::string, double>> v;
  v.reserve(amp.by_ego.size());
  for (const auto& [ego, e] : amp.by_ego) v.emplace_back(ego, e.amp);
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second < b.second;
    return a.first < b.first;
  });
  return v;
}

}  // namespace

std::vector<CurvePoint> cumulative_curve(const AmpTable& amp) {
  if (amp.by_ego.empty()) throw Error("cumulative_curve: no egos");
  auto sorted = sorted_amps(amp);
  double total = 0;
  for (const auto& [ego, a] : sorted) total += a;
  std::vector<CurvePoint> curve(sorted.size());
  double run = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    run += sorted[i].second;
    curve[i].f = static_cast<double>(i + 1) / sorted.size();
    curve[i].cumulative = run / total;
  }
  curve.back().cumulative = 1.0;  // exact despite rounding
  return curve;
}

double gini_from_curve(const std::vector<CurvePoint>& curve) {
  double integral = 0;
  double prev_f = 0, prev_c = 0;
  for (const auto& p : curve) {
    integral += (p.cumulative + prev_c) / 2.0 * (p.f - prev_f);
    prev_f = p.f;
    prev_c = p.cumulative;
  }
  return 1.0 - 2.0 * integral;
}

int ClassPartition::class_of(const std::string& ego) const {
  auto it = assignment.find(ego);
  if (it == assignment.end())
    throw InvariantViolation("every ego must carry a class assignment; missing: " + ego);
  return it->second;
}

ClassPartition partition_classes(const AmpTable& amp, int n) {
  if (n < 1) throw Error("partition_classes: n must be >= 1");
  if (amp.by_ego.size() < static_cast<std::size_t>(n))
    throw Error("partition_classes: fewer egos than classes");
  auto sorted = sorted_amps(amp);
  double total = 0;
  for (const auto& [ego, a] : sorted) total += a;

  ClassPartition part;
  part.n = n;
  part.classes.resize(n);
  int cls = 1;
  double run = 0;
  // Relative tolerance keeps the boundary decision invariant under
  // uniform rescaling of all AMPs.
  const double eps = 1e-12 * total;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const auto& [ego, a] = sorted[i];
    // Never leave fewer egos than the classes still unfilled.
    std::size_t remaining_egos = sorted.size() - i;
    if (cls < n && remaining_egos == static_cast<std::size_t>(n - cls) &&
        part.classes[cls - 1].size > 0)
      ++cls;

    run += a;
    auto& info = part.classes[cls - 1];
    if (info.size == 0) info.min_amp = a;
    info.max_amp = a;
    info.amp_sum += a;
    ++info.size;
    part.assignment.emplace(ego, cls);

    double target = total * cls / n;
    if (cls < n && run >= target - eps) ++cls;
  }
  for (auto& info : part.classes)
    info.mean_amp = info.size ? info.amp_sum / static_cast<double>(info.size) : 0.0;
  return part;
}

void write_classes_csv(const AmpTable& amp, const ClassPartition& p, const std::string& path) {
  CsvWriter w(path, {"ego_id", "class", "amp"});
  for (const auto& [ego, cls] : p.assignment)
    w.row({ego, std::to_string(cls), format_double(amp.by_ego.at(ego).amp)});
}

void write_curve_csv(const std::vector<CurvePoint>& curve, const std::string& path) {
  CsvWriter w(path, {"f", "C"});
  for (const auto& pt : curve) w.row({format_double(pt.f), format_double(pt.cumulative)});
}

ClassPartition load_classes_csv(const std::string& path) {
  CsvReader reader(path, {"ego_id", "class", "amp"});
  ClassPartition p;
  std::vector<std::string> f;
  std::map<int, std::vector<double>> amps;
  while (reader.next(f)) {
    if (f.size() != 3) throw ParseError(path + ": bad class row");
    int cls = std::stoi(f[1]);
    p.assignment.emplace(f[0], cls);
    amps[cls].push_back(std::stod(f[2]));
    p.n = std::max(p.n, cls);
  }
  p.classes.resize(p.n);
  for (auto& [cls, v] : amps) {
    auto& info = p.classes[cls - 1];
    std::sort(v.begin(), v.end());
    info.size = v.size();
    for (double a : v) info.amp_sum += a;
    info.min_amp = v.front();
    info.max_amp = v.back();
    info.mean_amp = info.amp_sum / v.size();
  }
  return p;
}

}  // namespace spendnet
