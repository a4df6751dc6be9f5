#include "spendnet/taxonomy.hpp"

#include <algorithm>
#include <charconv>

#include "spendnet/csv.hpp"

namespace spendnet {

namespace {

int parse_int(const std::string& s, const char* what) {
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size())
    throw ParseError(std::string("bad ") + what + ": " + s);
  return v;
}

// "k2" < "k10": compare digit runs numerically, everything else bytewise.
bool natural_less(const std::string& a, const std::string& b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (std::isdigit(static_cast<unsigned char>(a[i])) &&
        std::isdigit(static_cast<unsigned char>(b[j]))) {
      std::size_t i2 = i, j2 = j;
      while (i2 < a.size() && std::isdigit(static_cast<unsigned char>(a[i2]))) ++i2;
      while (j2 < b.size() && std::isdigit(static_cast<unsigned char>(b[j2]))) ++j2;
      long long na = std::stoll(a.substr(i, i2 - i));
      long long nb = std::stoll(b.substr(j, j2 - j));
      if (na != nb) return na < nb;
      i = i2;
      j = j2;
    } else {
      if (a[i] != b[j]) return a[i] < b[j];
      ++i;
      ++j;
    }
  }
  return a.size() < b.size();
}

}  // namespace

CategoryTaxonomy CategoryTaxonomy::load(const std::string& path) {
  CsvReader reader(path, {"mcc", "name", "pcg_id", "pcg_name", "is_cash"});
  std::vector<MerchantCategory> cats;
  std::map<std::string, std::string> names;
  std::string cash;
  std::vector<std::string> f;
  while (reader.next(f)) {
    if (f.size() != 5)
      throw ParseError("taxonomy row " + std::to_string(reader.line_number()) + ": want 5 fields");
    MerchantCategory mc;
    mc.mcc = parse_int(f[0], "mcc");
    mc.name = f[1];
    mc.pcg = f[2];
    if (mc.name.empty()) throw ParseError("empty category name for mcc " + f[0]);
    if (!mc.pcg.empty()) {
      auto it = names.find(mc.pcg);
      if (it == names.end()) {
        names.emplace(mc.pcg, f[3]);
      } else if (it->second != f[3]) {
        throw ParseError("conflicting names for pcg " + mc.pcg);
      }
    }
    if (f[4] == "1") {
      if (mc.pcg.empty()) throw ParseError("cash row without pcg id (mcc " + f[0] + ")");
      if (!cash.empty() && cash != mc.pcg)
        throw ParseError("more than one cash group (" + cash + ", " + mc.pcg + ")");
      cash = mc.pcg;
    } else if (f[4] != "0") {
      throw ParseError("bad is_cash flag: " + f[4]);
    }
    cats.push_back(std::move(mc));
  }
  if (cats.empty()) throw ParseError("empty taxonomy: " + path);
  if (cash.empty()) throw ParseError("taxonomy declares no cash group");
  return from_rows(std::move(cats), std::move(names), std::move(cash));
}

CategoryTaxonomy CategoryTaxonomy::from_rows(std::vector<MerchantCategory> categories,
                                             std::map<std::string, std::string> pcg_names,
                                             std::string cash_group) {
  if (categories.empty()) throw ParseError("empty taxonomy");
  std::sort(categories.begin(), categories.end(),
            [](const auto& a, const auto& b) { return a.mcc < b.mcc; });
  CategoryTaxonomy t;
  for (std::size_t i = 0; i < categories.size(); ++i) {
    const auto& mc = categories[i];
    if (!t.by_mcc_.emplace(mc.mcc, i).second)
      throw ParseError("duplicate mcc in taxonomy: " + std::to_string(mc.mcc));
    if (!mc.pcg.empty() && pcg_names.count(mc.pcg) == 0)
      throw ParseError("unknown pcg id: " + mc.pcg);
  }
  if (pcg_names.count(cash_group) == 0)
    throw ParseError("cash group not present in pcg names: " + cash_group);
  t.categories_ = std::move(categories);
  t.pcg_names_ = std::move(pcg_names);
  t.cash_group_ = std::move(cash_group);
  return t;
}

void CategoryTaxonomy::save(const std::string& path) const {
  CsvWriter w(path, {"mcc", "name", "pcg_id", "pcg_name", "is_cash"});
  for (const auto& mc : categories_) {
    std::string pcg_name = mc.pcg.empty() ? "" : pcg_names_.at(mc.pcg);
    w.row({std::to_string(mc.mcc), mc.name, mc.pcg, pcg_name,
           (!mc.pcg.empty() && mc.pcg == cash_group_) ? "1" : "0"});
  }
}

std::optional<std::string> CategoryTaxonomy::pcg_of(int mcc) const {
  auto it = by_mcc_.find(mcc);
  if (it == by_mcc_.end()) return std::nullopt;
  const auto& pcg = categories_[it->second].pcg;
  if (pcg.empty()) return std::nullopt;
  return pcg;
}

bool CategoryTaxonomy::is_cash_mcc(int mcc) const {
  auto g = pcg_of(mcc);
  return g.has_value() && *g == cash_group_;
}

const MerchantCategory* CategoryTaxonomy::find(int mcc) const {
  auto it = by_mcc_.find(mcc);
  return it == by_mcc_.end() ? nullptr : &categories_[it->second];
}

std::vector<std::string> CategoryTaxonomy::group_ids() const {
  std::vector<std::string> ids;
  ids.push_back(cash_group_);
  for (const auto& [id, name] : pcg_names_)
    if (id != cash_group_) ids.push_back(id);
  std::sort(ids.begin() + 1, ids.end(), natural_less);
  return ids;
}

std::vector<std::string> CategoryTaxonomy::non_cash_group_ids() const {
  auto ids = group_ids();
  ids.erase(ids.begin());
  return ids;
}

std::size_t CategoryTaxonomy::non_cash_category_count() const {
  std::size_t n = 0;
  for (const auto& mc : categories_)
    if (mc.pcg != cash_group_) ++n;
  return n;
}

std::string CategoryTaxonomy::default_path() { return std::string(SPENDNET_DATA_DIR) + "/taxonomy.csv"; }

}  // namespace spendnet
