#include "tradelab/namematch.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <tuple>

#include "tradelab/errors.hpp"

namespace tradelab::names {

namespace {

std::vector<std::string> tokenize(const std::string& s) {
  std::vector<std::string> tokens;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) tokens.push_back(tok);
  return tokens;
}

std::string join(const std::vector<std::string>& tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

// Remove every occurrence of a (possibly multi-word) phrase from the token
// sequence.
void remove_phrase(std::vector<std::string>& tokens, const std::vector<std::string>& phrase) {
  if (phrase.empty() || tokens.size() < phrase.size()) return;
  std::vector<std::string> out;
  out.reserve(tokens.size());
  std::size_t i = 0;
  while (i < tokens.size()) {
    bool match = i + phrase.size() <= tokens.size();
    for (std::size_t k = 0; match && k < phrase.size(); ++k)
      match = tokens[i + k] == phrase[k];
    if (match) {
      i += phrase.size();
    } else {
      out.push_back(tokens[i]);
      ++i;
    }
  }
  tokens = std::move(out);
}

// Union-find over dense indices.
class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), rank_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> rank_;
};

}  // namespace

CleanConfig default_clean_config() {
  CleanConfig cfg;
  cfg.country_tokens = {
      "UNITED STATES OF AMERICA", "UNITED STATES", "USA", "US",
      "UNITED KINGDOM", "UK", "GREAT BRITAIN",
      "GERMANY", "DEUTSCHLAND", "FRANCE", "ITALY", "ITALIA", "SPAIN", "ESPANA",
      "CHINA", "PRC", "JAPAN", "KOREA", "SOUTH KOREA", "INDIA", "BRAZIL", "BRASIL",
      "ARGENTINA", "CHILE", "URUGUAY", "PARAGUAY", "BOLIVIA", "PERU", "COLOMBIA",
      "MEXICO", "CANADA", "NETHERLANDS", "HOLLAND", "BELGIUM", "SWITZERLAND",
      "SWEDEN", "NORWAY", "DENMARK", "FINLAND", "AUSTRIA", "PORTUGAL", "POLAND",
      "RUSSIA", "TURKEY", "TAIWAN", "HONG KONG", "SINGAPORE", "AUSTRALIA",
      "NEW ZEALAND", "SOUTH AFRICA", "ISRAEL", "IRELAND", "CZECH REPUBLIC",
  };
  cfg.suffix_tokens = {
      "LLC", "LTD", "LTDA", "LIMITED", "SA", "SAS", "SAC", "SACI", "SRL", "SL",
      "GMBH", "AG", "INC", "INCORPORATED", "CORP", "CORPORATION", "CO", "CIA",
      "COMPANY", "BV", "NV", "PLC", "SPA", "KG", "OY", "AB", "AS", "PTY", "PTE",
      "SNC", "KK", "OOO", "ZAO", "EIRL",
  };
  cfg.aliases = {
      {"VOLKSWAGEN", "VOLKSWAGEN"}, {"VW", "VOLKSWAGEN"},
      {"MERCEDES", "MERCEDES BENZ"}, {"DAIMLER", "MERCEDES BENZ"},
      {"GENERAL MOTORS", "GENERAL MOTORS"}, {"GM", "GENERAL MOTORS"},
      {"TOYOTA", "TOYOTA"}, {"SIEMENS", "SIEMENS"}, {"BOSCH", "BOSCH"},
      {"BAYER", "BAYER"}, {"BASF", "BASF"}, {"SAMSUNG", "SAMSUNG"},
      {"MITSUBISHI", "MITSUBISHI"}, {"PHILIPS", "PHILIPS"},
  };
  return cfg;
}

std::vector<std::string> load_token_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open token list: " + path);
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line = line.substr(0, hash);
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    std::size_t start = line.find_first_not_of(' ');
    if (start == std::string::npos) continue;
    std::string tok = line.substr(start);
    std::transform(tok.begin(), tok.end(), tok.begin(),
                   [](unsigned char c) { return std::toupper(c); });
    tokens.push_back(tok);
  }
  return tokens;
}

std::vector<std::pair<std::string, std::string>> load_alias_table(const std::string& path) {
  std::vector<std::pair<std::string, std::string>> aliases;
  for (const auto& entry : load_token_list(path)) {
    const auto eq = entry.find('=');
    if (eq == std::string::npos)
      throw IoError("alias entry is not alias=canonical: " + entry);
    std::string alias = entry.substr(0, eq);
    std::string canonical = entry.substr(eq + 1);
    while (!alias.empty() && alias.back() == ' ') alias.pop_back();
    const auto start = canonical.find_first_not_of(' ');
    canonical = start == std::string::npos ? "" : canonical.substr(start);
    aliases.emplace_back(alias, canonical);
  }
  return aliases;
}

std::string normalize_name(const std::string& raw, const CleanConfig& config) {
  std::string upper;
  upper.reserve(raw.size());
  for (const unsigned char ch : raw) {
    const char up = static_cast<char>(std::toupper(ch));
    if ((up >= 'A' && up <= 'Z') || (up >= '0' && up <= '9'))
      upper += up;
    else if (up == ' ' || up == '\t')
      upper += ' ';
    // other characters are deleted outright so "S.A." collapses to "SA"
  }

  std::vector<std::string> tokens = tokenize(upper);
  for (const auto& country : config.country_tokens)
    remove_phrase(tokens, tokenize(country));
  for (const auto& suffix : config.suffix_tokens)
    remove_phrase(tokens, tokenize(suffix));
  return join(tokens);
}

std::string canonicalize_multinational(const std::string& normalized,
                                       const CleanConfig& config) {
  const std::vector<std::string> tokens = tokenize(normalized);
  for (const auto& [alias, canonical] : config.aliases) {
    const std::vector<std::string> pattern = tokenize(alias);
    if (pattern.empty() || pattern.size() > tokens.size()) continue;
    for (std::size_t i = 0; i + pattern.size() <= tokens.size(); ++i) {
      bool match = true;
      for (std::size_t k = 0; match && k < pattern.size(); ++k)
        match = tokens[i + k] == pattern[k];
      if (match) return canonical;
    }
  }
  return normalized;
}

std::vector<std::string> bigram_multiset(const std::string& normalized) {
  std::string squeezed;
  squeezed.reserve(normalized.size());
  for (const char ch : normalized)
    if (ch != ' ') squeezed += ch;
  std::vector<std::string> grams;
  if (squeezed.size() < 2) return grams;
  grams.reserve(squeezed.size() - 1);
  for (std::size_t i = 0; i + 1 < squeezed.size(); ++i)
    grams.push_back(squeezed.substr(i, 2));
  std::sort(grams.begin(), grams.end());
  return grams;
}

BigramFrequencies BigramFrequencies::build(const std::vector<std::string>& normalized_names) {
  BigramFrequencies freqs;
  for (const auto& name : normalized_names) {
    for (const auto& g : bigram_multiset(name)) {
      ++freqs.counts[g];
      ++freqs.total;
    }
  }
  return freqs;
}

double BigramFrequencies::weight(const std::string& bigram) const {
  const auto it = counts.find(bigram);
  const double freq = it == counts.end() ? 1.0 : static_cast<double>(it->second);
  const double n = std::max<double>(1.0, static_cast<double>(total));
  return std::log(1.0 + n / freq);
}

SimilarityScore similscore(const std::string& a, const std::string& b,
                           const BigramFrequencies& freqs) {
  const std::vector<std::string> ga = bigram_multiset(a);
  const std::vector<std::string> gb = bigram_multiset(b);
  SimilarityScore score;
  if (ga.empty() || gb.empty()) return score;

  std::vector<std::string> shared;
  std::set_intersection(ga.begin(), ga.end(), gb.begin(), gb.end(),
                        std::back_inserter(shared));

  score.simple = 2.0 * static_cast<double>(shared.size()) /
                 static_cast<double>(ga.size() + gb.size());

  double w_shared = 0.0, w_a = 0.0, w_b = 0.0;
  for (const auto& g : shared) w_shared += freqs.weight(g);
  for (const auto& g : ga) w_a += freqs.weight(g);
  for (const auto& g : gb) w_b += freqs.weight(g);
  score.logw = w_a + w_b > 0.0 ? 2.0 * w_shared / (w_a + w_b) : 0.0;
  return score;
}

bool high_similarity(const SimilarityScore& score) {
  if (score.simple > 0.65 && score.logw > 0.65) return true;
  const double hi = std::max(score.simple, score.logw);
  const double lo = std::min(score.simple, score.logw);
  return hi > 0.8 && lo > 0.35;
}

std::vector<CleanedRow> dedup_suppliers(const std::vector<SupplierRow>& rows,
                                        const CleanConfig& config) {
  // Aggregate duplicate (firm, raw-name) pairs; sort so the clustering and
  // the output never depend on input order.
  struct Entry {
    std::string firm_id;
    std::string raw;
    std::string cleaned;  // normalized + multinational canonicalization
    double value = 0.0;
  };
  std::map<std::pair<std::string, std::string>, Entry> merged;
  for (const auto& row : rows) {
    auto& e = merged[{row.firm_id, row.supplier_raw}];
    if (e.raw.empty()) {
      e.firm_id = row.firm_id;
      e.raw = row.supplier_raw;
      e.cleaned = canonicalize_multinational(normalize_name(row.supplier_raw, config), config);
    }
    e.value += row.value_usd;
  }

  std::vector<Entry> entries;
  entries.reserve(merged.size());
  for (auto& [key, e] : merged) entries.push_back(std::move(e));

  std::vector<std::string> cleaned_names;
  cleaned_names.reserve(entries.size());
  for (const auto& e : entries) cleaned_names.push_back(e.cleaned);
  const BigramFrequencies freqs = BigramFrequencies::build(cleaned_names);

  std::vector<CleanedRow> out;
  out.reserve(entries.size());
  std::int64_t next_cluster = 0;

  std::size_t group_begin = 0;
  while (group_begin < entries.size()) {
    std::size_t group_end = group_begin;
    while (group_end < entries.size() &&
           entries[group_end].firm_id == entries[group_begin].firm_id)
      ++group_end;
    const std::size_t n = group_end - group_begin;
    const std::string& firm_id = entries[group_begin].firm_id;
    const std::string firm_cleaned =
        canonicalize_multinational(normalize_name(firm_id, config), config);

    // Step 3: suppliers that look like the importer inherit its name.
    std::vector<std::string> names(n);
    for (std::size_t i = 0; i < n; ++i) {
      names[i] = entries[group_begin + i].cleaned;
      if (!firm_cleaned.empty() && !names[i].empty() &&
          high_similarity(similscore(names[i], firm_cleaned, freqs)))
        names[i] = firm_cleaned;
    }

    // Step 4: connected components under pairwise high similarity.
    DisjointSets sets(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (names[i].empty() || names[j].empty()) continue;
        if (names[i] == names[j] || high_similarity(similscore(names[i], names[j], freqs)))
          sets.unite(i, j);
      }
    }

    // Canonical member per component: largest value, ties lexicographic on
    // the cleaned name then the raw name.
    std::map<std::size_t, std::size_t> champion;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t root = sets.find(i);
      const auto it = champion.find(root);
      if (it == champion.end()) {
        champion[root] = i;
        continue;
      }
      const Entry& cur = entries[group_begin + it->second];
      const Entry& cand = entries[group_begin + i];
      const std::string& cur_name = names[it->second];
      const std::string& cand_name = names[i];
      if (cand.value > cur.value ||
          (cand.value == cur.value &&
           std::tie(cand_name, cand.raw) < std::tie(cur_name, cur.raw)))
        it->second = i;
    }

    std::map<std::size_t, std::int64_t> cluster_of_root;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t root = sets.find(i);
      auto [it, inserted] = cluster_of_root.try_emplace(root, next_cluster);
      if (inserted) ++next_cluster;
      const Entry& e = entries[group_begin + i];
      CleanedRow row;
      row.firm_id = e.firm_id;
      row.supplier_raw = e.raw;
      row.supplier_canonical = names[champion[root]];
      row.cluster_id = it->second;
      out.push_back(std::move(row));
    }
    group_begin = group_end;
  }
  return out;
}

}  // namespace tradelab::names
