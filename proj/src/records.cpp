#include "tradelab/records.hpp"

#include <cmath>
#include <filesystem>

#include "tradelab/csv.hpp"
#include "tradelab/errors.hpp"

namespace tradelab::records {

namespace fs = std::filesystem;

void validate_record(const TradeRecord& record) {
  if (!(record.value > 0.0))
    throw DomainError("trade record value must be positive (firm " + record.firm_id + ")");
  if (!(record.quantity > 0.0))
    throw DomainError("trade record quantity must be positive (firm " + record.firm_id + ")");
  if (!std::isfinite(record.value / record.quantity))
    throw DomainError("trade record unit value not finite (firm " + record.firm_id + ")");
}

std::vector<TradeRecord> read_trade_csv(const std::string& path, Direction direction) {
  const csv::Table table = csv::read_csv(path);
  const bool imports = direction == Direction::import_flow;
  const int c_year = table.require("year");
  const int c_firm = table.require("firm_id");
  const int c_supplier = imports ? table.require("supplier_id") : -1;
  const int c_product = table.require("product_hs6");
  const int c_country = table.require(imports ? "source_country" : "dest_country");
  const int c_value = table.require("value_usd");
  const int c_quantity = table.require("quantity");

  std::vector<TradeRecord> out;
  out.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    TradeRecord rec;
    rec.year = static_cast<int>(csv::parse_int(row[c_year]));
    rec.firm_id = row[c_firm];
    if (imports) rec.counterparty = row[c_supplier];
    rec.product = row[c_product];
    rec.country = row[c_country];
    rec.value = csv::parse_double(row[c_value]);
    rec.quantity = csv::parse_double(row[c_quantity]);
    rec.direction = direction;
    validate_record(rec);
    out.push_back(std::move(rec));
  }
  return out;
}

void write_trade_csv(const std::string& path, const std::vector<TradeRecord>& recs,
                     Direction direction) {
  const bool imports = direction == Direction::import_flow;
  csv::Table table;
  if (imports)
    table.header = {"year", "firm_id", "supplier_id", "product_hs6",
                    "source_country", "value_usd", "quantity"};
  else
    table.header = {"year", "firm_id", "product_hs6", "dest_country",
                    "value_usd", "quantity"};
  table.rows.reserve(recs.size());
  for (const auto& rec : recs) {
    std::vector<std::string> row;
    row.reserve(table.header.size());
    row.push_back(std::to_string(rec.year));
    row.push_back(rec.firm_id);
    if (imports) row.push_back(rec.counterparty);
    row.push_back(rec.product);
    row.push_back(rec.country);
    row.push_back(csv::format_double(rec.value));
    row.push_back(csv::format_double(rec.quantity));
    table.rows.push_back(std::move(row));
  }
  csv::write_csv(path, table);
}

void write_corpus(const Corpus& corpus, const std::string& directory) {
  fs::create_directories(directory);
  const fs::path dir(directory);
  write_trade_csv((dir / "imports.csv").string(), corpus.imports, Direction::import_flow);
  write_trade_csv((dir / "exports.csv").string(), corpus.exports, Direction::export_flow);

  csv::Table countries;
  countries.header = {"country", "income_group"};
  for (const auto& [country, group] : corpus.country_income)
    countries.rows.push_back({country, group});
  csv::write_csv((dir / "countries.csv").string(), countries);

  csv::Table classes;
  classes.header = {"product_hs6", "scheme", "class"};
  for (const auto& [key, cls] : corpus.classifications)
    classes.rows.push_back({key.second, key.first, cls});
  csv::write_csv((dir / "classifications.csv").string(), classes);
}

Corpus read_corpus(const std::string& directory) {
  const fs::path dir(directory);
  Corpus corpus;
  corpus.imports = read_trade_csv((dir / "imports.csv").string(), Direction::import_flow);
  corpus.exports = read_trade_csv((dir / "exports.csv").string(), Direction::export_flow);

  const csv::Table countries = csv::read_csv((dir / "countries.csv").string());
  const int cc = countries.require("country");
  const int cg = countries.require("income_group");
  for (const auto& row : countries.rows) corpus.country_income[row[cc]] = row[cg];

  const csv::Table classes = csv::read_csv((dir / "classifications.csv").string());
  const int cp = classes.require("product_hs6");
  const int cs = classes.require("scheme");
  const int cl = classes.require("class");
  for (const auto& row : classes.rows)
    corpus.classifications[{row[cs], row[cp]}] = row[cl];
  return corpus;
}

}  // namespace tradelab::records
