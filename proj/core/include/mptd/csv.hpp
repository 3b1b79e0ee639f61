#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mptd {

/// Shortest decimal form that parses back to the same double; non-finite
/// values become the tokens inf, -inf and nan.
std::string format_double(double x);

/// Inverse of format_double. Throws UsageError on malformed input.
double parse_double(const std::string& token);

/// Minimal comma-separated table: a header row plus string cells. Fields
/// never contain commas or quotes in this project, so no quoting is done.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of a header column; throws UsageError if missing.
  std::size_t column(const std::string& name) const;
};

void write_csv(std::ostream& out, const CsvTable& table);
void write_csv_file(const std::string& path, const CsvTable& table);
CsvTable read_csv_file(const std::string& path);

}  // namespace mptd
