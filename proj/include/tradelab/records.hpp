#pragma once

#include <map>
#include <string>
#include <vector>

namespace tradelab::records {

enum class Direction { import_flow, export_flow };

// One customs transaction, aggregated to the (firm, counterparty, product,
// country, year) cell.
struct TradeRecord {
  int year = 0;
  std::string firm_id;
  std::string counterparty;  // supplier on imports, blank on exports
  std::string product;       // 6-digit code
  std::string country;       // source on imports, destination on exports
  double value = 0.0;
  double quantity = 0.0;
  Direction direction = Direction::import_flow;
};

// Throws DomainError when value/quantity are not positive or the unit value
// is not finite.
void validate_record(const TradeRecord& record);

struct Corpus {
  std::vector<TradeRecord> imports;
  std::vector<TradeRecord> exports;
  std::map<std::string, std::string> country_income;  // country -> advanced|emerging
  // (scheme, product) -> differentiated|reference|homogeneous
  std::map<std::pair<std::string, std::string>, std::string> classifications;
};

// imports.csv / exports.csv / countries.csv / classifications.csv under dir.
void write_corpus(const Corpus& corpus, const std::string& directory);
Corpus read_corpus(const std::string& directory);

std::vector<TradeRecord> read_trade_csv(const std::string& path, Direction direction);
void write_trade_csv(const std::string& path, const std::vector<TradeRecord>& recs,
                     Direction direction);

}  // namespace tradelab::records
