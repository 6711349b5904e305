#include "tradelab/config.hpp"

#include <charconv>
#include <fstream>

#include "tradelab/csv.hpp"
#include "tradelab/errors.hpp"

namespace tradelab::config {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

KeyValues KeyValues::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return from_lines(lines);
}

KeyValues KeyValues::from_lines(const std::vector<std::string>& lines) {
  KeyValues kv;
  for (const auto& raw : lines) {
    std::string line = raw;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line is not key=value: " + raw);
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("config line has empty key: " + raw);
    kv.set(key, trim(line.substr(eq + 1)));
  }
  return kv;
}

void KeyValues::set(const std::string& key, const std::string& value) {
  values_[key] = value;
}

bool KeyValues::has(const std::string& key) const { return values_.count(key) > 0; }

std::string KeyValues::get_string(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double KeyValues::get_double(const std::string& key, double fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  try {
    return csv::parse_double(it->second);
  } catch (const Error&) {
    throw ConfigError("config key " + key + " is not numeric: " + it->second);
  }
}

long long KeyValues::get_int(const std::string& key, long long fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  try {
    return csv::parse_int(it->second);
  } catch (const Error&) {
    throw ConfigError("config key " + key + " is not an integer: " + it->second);
  }
}

bool KeyValues::get_bool(const std::string& key, bool fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const std::string& v = it->second;
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("config key " + key + " is not a boolean: " + v);
}

void KeyValues::require_known(const std::set<std::string>& known) const {
  std::string unknown;
  for (const auto& [key, value] : values_) {
    if (!known.count(key)) {
      if (!unknown.empty()) unknown += ", ";
      unknown += key;
    }
  }
  if (!unknown.empty()) throw ConfigError("unknown config keys: " + unknown);
}

std::vector<std::string> KeyValues::dump() const {
  std::vector<std::string> out;
  out.reserve(values_.size());
  for (const auto& [key, value] : values_) out.push_back(key + " = " + value);
  return out;
}

}  // namespace tradelab::config
