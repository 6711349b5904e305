#include "tradelab/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>

#include "tradelab/errors.hpp"

namespace tradelab::csv {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

}  // namespace

int Table::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  return -1;
}

int Table::require(const std::string& name) const {
  const int idx = column(name);
  if (idx < 0) throw IoError("missing CSV column: " + name);
  return idx;
}

Table read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open CSV file: " + path);
  Table table;
  std::string line;
  if (!std::getline(in, line)) throw IoError("CSV file has no header row: " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  table.header = split_line(line);
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_line(line);
    if (fields.size() != table.header.size())
      throw IoError("CSV row width mismatch in " + path + ": " + line);
    table.rows.push_back(std::move(fields));
  }
  return table;
}

void write_csv(const std::string& path, const Table& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write CSV file: " + path);
  std::string buffer;
  buffer.reserve(1 << 20);
  auto emit_row = [&](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) buffer += ',';
      buffer += row[i];
    }
    buffer += '\n';
    if (buffer.size() > (1 << 20) - 4096) {
      out.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
      buffer.clear();
    }
  };
  emit_row(table.header);
  for (const auto& row : table.rows) emit_row(row);
  out.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
  if (!out) throw IoError("short write on CSV file: " + path);
}

std::string format_double(double x) {
  char buf[40];
  // %.17g round-trips every finite double and keeps short forms short.
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  // Trim to the shortest representation that still parses back exactly.
  for (int prec = 1; prec < 17; ++prec) {
    char probe[40];
    std::snprintf(probe, sizeof(probe), "%.*g", prec, x);
    double back;
    const auto res = std::from_chars(probe, probe + std::char_traits<char>::length(probe), back);
    if (res.ec == std::errc() && back == x) return probe;
  }
  return buf;
}

double parse_double(const std::string& s) {
  double value = 0.0;
  const char* begin = s.data();
  const char* end = begin + s.size();
  const auto res = std::from_chars(begin, end, value);
  if (res.ec != std::errc() || res.ptr != end)
    throw IoError("cannot parse number: '" + s + "'");
  return value;
}

long long parse_int(const std::string& s) {
  long long value = 0;
  const char* begin = s.data();
  const char* end = begin + s.size();
  const auto res = std::from_chars(begin, end, value);
  if (res.ec != std::errc() || res.ptr != end)
    throw IoError("cannot parse integer: '" + s + "'");
  return value;
}

}  // namespace tradelab::csv
