#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hopf_flow::cli {

/// Numeric table: one header row, then rows of doubles.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// 17 significant digits, so that read_csv reproduces every value bit-exactly.
std::string format_number(double v);

void write_csv(std::ostream& os, const Table& t);

/// Inverse of write_csv. Throws UsageError on a malformed file.
Table read_csv(std::istream& is);

}  // namespace hopf_flow::cli
