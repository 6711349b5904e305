#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace tradelab::names {

struct NameRecord {
  std::string raw;
  std::string normalized;
  std::string canonical;  // empty until assigned
  std::int64_t cluster_id = -1;
};

struct SimilarityScore {
  double simple = 0.0;
  double logw = 0.0;
};

struct CleanConfig {
  std::vector<std::string> country_tokens;  // names and acronyms, may be multi-word
  std::vector<std::string> suffix_tokens;   // legal-form suffixes
  // alias token -> canonical name; first match in order wins
  std::vector<std::pair<std::string, std::string>> aliases;
};

// Editable shipped defaults.
CleanConfig default_clean_config();

// Token lists: one entry per line, '#' comments. Aliases: alias=canonical.
std::vector<std::string> load_token_list(const std::string& path);
std::vector<std::pair<std::string, std::string>> load_alias_table(const std::string& path);

// Uppercase, strip characters outside [A-Z0-9 ], collapse whitespace, drop
// country and suffix tokens. May return "" (callers flag empty results).
std::string normalize_name(const std::string& raw, const CleanConfig& config);

// Replace the whole name with the alias canonical when the alias appears as a
// word; otherwise pass through unchanged.
std::string canonicalize_multinational(const std::string& normalized,
                                       const CleanConfig& config);

// Bigrams of the space-stripped string, multiset semantics; sorted.
std::vector<std::string> bigram_multiset(const std::string& normalized);

// Per-corpus bigram frequencies for the log-weighted score.
struct BigramFrequencies {
  std::map<std::string, std::int64_t> counts;
  std::int64_t total = 0;

  static BigramFrequencies build(const std::vector<std::string>& normalized_names);
  double weight(const std::string& bigram) const;  // ln(1 + total/freq)
};

// Dice overlap of bigram multisets, unweighted and frequency-weighted.
SimilarityScore similscore(const std::string& a, const std::string& b,
                           const BigramFrequencies& freqs);

// Both above 0.65, or one above 0.8 with the other above 0.35 (strict).
bool high_similarity(const SimilarityScore& score);

struct SupplierRow {
  std::string firm_id;
  std::string supplier_raw;
  double value_usd = 0.0;
};

struct CleanedRow {
  std::string firm_id;
  std::string supplier_raw;
  std::string supplier_canonical;
  std::int64_t cluster_id = -1;
};

// Within-importer dedup: names matching the importer inherit its name, then
// connected components under high_similarity become clusters; the canonical
// name is the member with the largest import value (ties lexicographic).
// Output is sorted by (firm_id, supplier_raw) and independent of input order.
std::vector<CleanedRow> dedup_suppliers(const std::vector<SupplierRow>& rows,
                                        const CleanConfig& config);

}  // namespace tradelab::names
