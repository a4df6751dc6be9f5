#pragma once

#include <fstream>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "spendnet/common.hpp"

namespace spendnet {

// Minimal RFC-4180 style CSV: comma separated, double-quote quoting for
// fields containing commas/quotes. No multi-line fields.
std::vector<std::string> split_csv_line(std::string_view line);
std::string csv_quote(std::string_view field);

/// Streams a CSV file row by row. The header row is read eagerly and
/// validated against `expected_header` (exact match) when non-empty.
class CsvReader {
 public:
  CsvReader(const std::string& path, const std::vector<std::string>& expected_header = {});

  // Returns false at EOF. Blank lines are skipped.
  bool next(std::vector<std::string>& fields);
  const std::vector<std::string>& header() const { return header_; }
  std::size_t line_number() const { return line_; }

 private:
  std::ifstream in_;
  std::vector<std::string> header_;
  std::string buf_;
  std::size_t line_ = 0;
};

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);
  void row(const std::vector<std::string>& fields);
  void flush() { out_.flush(); }

 private:
  std::ofstream out_;
  std::size_t width_;
};

std::string format_double(double v);  // shortest round-trip, C locale

}  // namespace spendnet
