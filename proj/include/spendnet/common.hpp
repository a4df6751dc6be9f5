#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace spendnet {

class Error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A required input file or directory is absent or unreadable.
class MissingInputError : public Error {
  using Error::Error;
};

/// Malformed input content (bad CSV row, bad number, schema mismatch).
class ParseError : public Error {
  using Error::Error;
};

/// A documented data invariant was violated mid-pipeline. The message
/// names the invariant.
class InvariantViolation : public Error {
  using Error::Error;
};

/// Fixed-point money with two fraction digits. Sums are exact int64
/// arithmetic, so aggregation is order-independent.
class Money {
 public:
  Money() = default;
  static Money from_cents(std::int64_t c) {
    Money m;
    m.cents_ = c;
    return m;
  }
  // Parses "123.45", "0.5" (=0.50), "7" (=7.00). Rejects negatives and
  // more than two fraction digits.
  static Money parse(std::string_view text);

  std::int64_t cents() const { return cents_; }
  double value() const { return static_cast<double>(cents_) / 100.0; }
  std::string str() const;

  Money& operator+=(Money o) {
    cents_ += o.cents_;
    return *this;
  }
  friend Money operator+(Money a, Money b) { return from_cents(a.cents_ + b.cents_); }
  friend bool operator==(Money a, Money b) { return a.cents_ == b.cents_; }
  friend auto operator<=>(Money a, Money b) { return a.cents_ <=> b.cents_; }

 private:
  std::int64_t cents_ = 0;
};

enum class Gender { female, male };

// Calendar months are handled as a flat index (year*12 + month-1) so
// that distinct-month counting and ordering are plain integer ops.
int parse_month(std::string_view ym);          // "2016-03" -> index
std::string format_month(int month_index);     // index -> "2016-03"

}  // namespace spendnet
