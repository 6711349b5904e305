#pragma once

#include <string>
#include <vector>

namespace tradelab::csv {

// Minimal CSV: UTF-8, mandatory header row, comma separator, '.' decimal
// point, no quoting (fields must not contain commas or newlines).
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;    // -1 when absent
  int require(const std::string& name) const;   // throws IoError when absent
};

Table read_csv(const std::string& path);
void write_csv(const std::string& path, const Table& table);

// Locale-independent numeric formatting; round-trips doubles exactly.
std::string format_double(double x);
double parse_double(const std::string& s);
long long parse_int(const std::string& s);

}  // namespace tradelab::csv
