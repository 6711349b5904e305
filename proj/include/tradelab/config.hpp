#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

namespace tradelab::config {

// Flat key=value configuration with dotted namespaces. '#' starts a comment;
// blank lines ignored. Later assignments override earlier ones.
class KeyValues {
 public:
  static KeyValues from_file(const std::string& path);
  static KeyValues from_lines(const std::vector<std::string>& lines);

  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const;

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  long long get_int(const std::string& key, long long fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

  // Rejects keys outside the known set (ConfigError lists the offenders).
  void require_known(const std::set<std::string>& known) const;

  // Resolved configuration echo, sorted by key.
  std::vector<std::string> dump() const;

  const std::map<std::string, std::string>& items() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace tradelab::config
