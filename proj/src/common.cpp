#include "spendnet/common.hpp"

#include <charconv>
#include <cstdio>

namespace spendnet {

Money Money::parse(std::string_view text) {
  if (text.empty()) throw ParseError("empty money value");
  std::size_t dot = text.find('.');
  std::string_view whole = text.substr(0, dot);
  std::string_view frac = dot == std::string_view::npos ? "" : text.substr(dot + 1);
  if (frac.size() > 2) throw ParseError("money has more than 2 fraction digits: " + std::string(text));

  std::int64_t w = 0;
  auto [p, ec] = std::from_chars(whole.begin(), whole.end(), w);
  if (ec != std::errc{} || p != whole.end()) throw ParseError("bad money value: " + std::string(text));
  if (w < 0 || whole.front() == '-') throw ParseError("negative money value: " + std::string(text));

  std::int64_t f = 0;
  if (!frac.empty()) {
    auto [pf, ecf] = std::from_chars(frac.begin(), frac.end(), f);
    if (ecf != std::errc{} || pf != frac.end()) throw ParseError("bad money value: " + std::string(text));
    if (frac.size() == 1) f *= 10;
  }
  return from_cents(w * 100 + f);
}

std::string Money::str() const {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%lld.%02lld", static_cast<long long>(cents_ / 100),
                static_cast<long long>(cents_ % 100));
  return buf;
}

int parse_month(std::string_view ym) {
  if (ym.size() != 7 || ym[4] != '-') throw ParseError("bad month (want YYYY-MM): " + std::string(ym));
  int year = 0, mon = 0;
  auto [p1, e1] = std::from_chars(ym.begin(), ym.begin() + 4, year);
  auto [p2, e2] = std::from_chars(ym.begin() + 5, ym.end(), mon);
  if (e1 != std::errc{} || e2 != std::errc{} || p1 != ym.begin() + 4 || p2 != ym.end() || mon < 1 ||
      mon > 12)
    throw ParseError("bad month (want YYYY-MM): " + std::string(ym));
  return year * 12 + (mon - 1);
}

std::string format_month(int month_index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d", month_index / 12, month_index % 12 + 1);
  return buf;
}

}  // namespace spendnet
