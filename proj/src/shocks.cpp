#include "tradelab/shocks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tradelab/csv.hpp"
#include "tradelab/errors.hpp"
#include "tradelab/util.hpp"

namespace tradelab::shocks {

namespace {

std::string bare_key(const records::TradeRecord& rec, ShockVariant variant) {
  switch (variant) {
    case ShockVariant::supplier_firm:
      return rec.firm_id + "|" + rec.counterparty + "|" + rec.product + "|" + rec.country;
    case ShockVariant::supplier_average:
    case ShockVariant::supplier_leave_one_out:
      return rec.counterparty + "|" + rec.product + "|" + rec.country;
    case ShockVariant::country_product:
      return rec.product + "|" + rec.country;
  }
  return {};
}

std::string loo_price_key(const std::string& firm_id, const std::string& key) {
  return firm_id + "#" + key;
}

struct Cell {
  util::KahanSum value;
  util::KahanSum quantity;
};

}  // namespace

const char* variant_name(ShockVariant v) {
  switch (v) {
    case ShockVariant::supplier_firm: return "supplier_firm";
    case ShockVariant::supplier_average: return "supplier_average";
    case ShockVariant::supplier_leave_one_out: return "supplier_loo";
    case ShockVariant::country_product: return "country_product";
  }
  return "supplier_average";
}

ShockVariant variant_from_name(const std::string& name) {
  if (name == "supplier_firm") return ShockVariant::supplier_firm;
  if (name == "supplier_average") return ShockVariant::supplier_average;
  if (name == "supplier_loo") return ShockVariant::supplier_leave_one_out;
  if (name == "country_product") return ShockVariant::country_product;
  throw ConfigError("unknown shock variant: " + name);
}

PriceTable unit_values(const std::vector<records::TradeRecord>& imports,
                       ShockVariant variant) {
  PriceTable prices;
  if (variant == ShockVariant::supplier_leave_one_out) {
    // Totals per key-year and per firm within the key, then subtract the
    // focal firm; a single-buyer cell leaves nothing and emits no row.
    std::map<std::pair<std::string, int>, Cell> totals;
    std::map<std::pair<std::string, int>, std::map<std::string, Cell>> by_firm;
    for (const auto& rec : imports) {
      const auto key = std::make_pair(bare_key(rec, variant), rec.year);
      totals[key].value.add(rec.value);
      totals[key].quantity.add(rec.quantity);
      auto& own = by_firm[key][rec.firm_id];
      own.value.add(rec.value);
      own.quantity.add(rec.quantity);
    }
    for (const auto& [key, firms] : by_firm) {
      const Cell& total = totals.at(key);
      for (const auto& [firm_id, own] : firms) {
        const double rest_value = total.value.value() - own.value.value();
        const double rest_quantity = total.quantity.value() - own.quantity.value();
        if (rest_quantity > 1e-12 && rest_value > 0.0)
          prices[{loo_price_key(firm_id, key.first), key.second}] = rest_value / rest_quantity;
      }
    }
    return prices;
  }

  std::map<std::pair<std::string, int>, Cell> cells;
  for (const auto& rec : imports) {
    auto& cell = cells[{bare_key(rec, variant), rec.year}];
    cell.value.add(rec.value);
    cell.quantity.add(rec.quantity);
  }
  for (const auto& [key, cell] : cells) {
    if (cell.quantity.value() > 0.0 && cell.value.value() > 0.0)
      prices[key] = cell.value.value() / cell.quantity.value();
  }
  return prices;
}

ShiftTable price_shifts(const PriceTable& prices) {
  ShiftTable shifts;
  for (const auto& [key, price] : prices) {
    const auto prev = prices.find({key.first, key.second - 1});
    if (prev == prices.end()) continue;
    if (!(price > 0.0) || !(prev->second > 0.0)) continue;
    shifts[key] = std::log(price) - std::log(prev->second);
  }
  return shifts;
}

std::map<std::string, double> lagged_shares(
    const std::vector<records::TradeRecord>& imports, const std::string& firm_id,
    int year, ShockVariant variant) {
  std::map<std::string, util::KahanSum> sums;
  util::KahanSum total;
  for (const auto& rec : imports) {
    if (rec.firm_id != firm_id || rec.year != year - 1) continue;
    sums[bare_key(rec, variant)].add(rec.value);
    total.add(rec.value);
  }
  if (sums.empty() || !(total.value() > 0.0))
    throw NoBaseYear("firm " + firm_id + " has no imports in year " +
                     std::to_string(year - 1));
  std::map<std::string, double> shares;
  for (const auto& [key, sum] : sums) shares[key] = sum.value() / total.value();
  return shares;
}

FirmShock combine_shock(const std::map<std::string, double>& shares,
                        const ShiftTable& shifts, const std::string& firm_id, int year,
                        ShockVariant variant, bool leave_one_out_keys) {
  FirmShock shock;
  shock.firm_id = firm_id;
  shock.year = year;
  shock.variant = variant;
  shock.n_links = static_cast<int>(shares.size());
  util::KahanSum value, imputed;
  for (const auto& [key, share] : shares) {
    const std::string price_key = leave_one_out_keys ? loo_price_key(firm_id, key) : key;
    const auto it = shifts.find({price_key, year});
    if (it == shifts.end())
      imputed.add(share);
    else
      value.add(share * it->second);
  }
  shock.value = value.value();
  shock.imputed_share = std::clamp(imputed.value(), 0.0, 1.0);
  return shock;
}

namespace {

ShiftTable variant_shifts(const std::vector<records::TradeRecord>& imports,
                          ShockVariant variant, const PriceTable* external_prices) {
  if (variant == ShockVariant::country_product && external_prices != nullptr)
    return price_shifts(*external_prices);
  return price_shifts(unit_values(imports, variant));
}

}  // namespace

FirmShock firm_shock(const std::vector<records::TradeRecord>& imports,
                     const std::string& firm_id, int year, ShockVariant variant,
                     const PriceTable* external_prices) {
  const auto shares = lagged_shares(imports, firm_id, year, variant);
  const auto shifts = variant_shifts(imports, variant, external_prices);
  return combine_shock(shares, shifts, firm_id, year, variant,
                       variant == ShockVariant::supplier_leave_one_out);
}

PriceTable read_price_table_csv(const std::string& path) {
  const csv::Table table = csv::read_csv(path);
  const int c_product = table.require("product_hs6");
  const int c_source = table.require("source_country");
  const int c_year = table.require("year");
  const int c_price = table.require("price");
  PriceTable prices;
  for (const auto& row : table.rows)
    prices[{row[c_product] + "|" + row[c_source],
            static_cast<int>(csv::parse_int(row[c_year]))}] =
        csv::parse_double(row[c_price]);
  return prices;
}

std::vector<FirmShock> build_shocks(const std::vector<records::TradeRecord>& imports,
                                    ShockVariant variant,
                                    const PriceTable* external_prices) {
  const ShiftTable shifts = variant_shifts(imports, variant, external_prices);

  // Firm-years eligible for a shock: the firm imported in the prior year and
  // the shock year is still inside the sample.
  std::map<std::string, std::map<int, std::map<std::string, util::KahanSum>>> values;
  int max_year = std::numeric_limits<int>::min();
  for (const auto& rec : imports) {
    values[rec.firm_id][rec.year][bare_key(rec, variant)].add(rec.value);
    max_year = std::max(max_year, rec.year);
  }

  std::vector<FirmShock> shocks;
  for (const auto& [firm_id, years] : values) {
    for (const auto& [base_year, keyed] : years) {
      if (base_year + 1 > max_year) continue;
      util::KahanSum total;
      for (const auto& [key, sum] : keyed) total.add(sum.value());
      if (!(total.value() > 0.0)) continue;
      std::map<std::string, double> shares;
      for (const auto& [key, sum] : keyed) shares[key] = sum.value() / total.value();
      shocks.push_back(combine_shock(shares, shifts, firm_id, base_year + 1, variant,
                                     variant == ShockVariant::supplier_leave_one_out));
    }
  }
  return shocks;
}

std::vector<FirmShock> build_all_shocks(const std::vector<records::TradeRecord>& imports,
                                        const PriceTable* external_prices) {
  std::vector<FirmShock> all;
  for (const ShockVariant v :
       {ShockVariant::supplier_firm, ShockVariant::supplier_average,
        ShockVariant::supplier_leave_one_out, ShockVariant::country_product}) {
    auto batch = build_shocks(imports, v, external_prices);
    all.insert(all.end(), batch.begin(), batch.end());
  }
  return all;
}

std::vector<ShockStats> shock_stats(const std::vector<FirmShock>& shocks,
                                    bool drop_loo_zeros) {
  std::vector<ShockStats> out;
  for (const ShockVariant v :
       {ShockVariant::supplier_firm, ShockVariant::supplier_average,
        ShockVariant::supplier_leave_one_out, ShockVariant::country_product}) {
    std::vector<double> values;
    for (const auto& s : shocks) {
      if (s.variant != v) continue;
      if (drop_loo_zeros && v == ShockVariant::supplier_leave_one_out && s.value == 0.0)
        continue;
      values.push_back(s.value);
    }
    if (values.empty()) continue;
    ShockStats stats;
    stats.variant = v;
    stats.n = values.size();
    stats.mean = util::mean(values);
    stats.p5 = util::quantile(values, 0.05);
    stats.p25 = util::quantile(values, 0.25);
    stats.p50 = util::quantile(values, 0.50);
    stats.p75 = util::quantile(values, 0.75);
    stats.p95 = util::quantile(values, 0.95);
    stats.sd = util::stddev(values);
    out.push_back(stats);
  }
  return out;
}

ShockCorrelation shock_correlation(const std::vector<FirmShock>& shocks) {
  std::map<ShockVariant, std::map<std::pair<std::string, int>, double>> by_variant;
  for (const auto& s : shocks) by_variant[s.variant][{s.firm_id, s.year}] = s.value;

  ShockCorrelation corr;
  for (const auto& [variant, table] : by_variant) corr.variants.push_back(variant);
  const std::size_t n = corr.variants.size();
  corr.matrix.assign(n, std::vector<double>(n, 1.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto& ta = by_variant.at(corr.variants[i]);
      const auto& tb = by_variant.at(corr.variants[j]);
      std::vector<double> a, b;
      for (const auto& [key, value] : ta) {
        const auto it = tb.find(key);
        if (it == tb.end()) continue;
        a.push_back(value);
        b.push_back(it->second);
      }
      corr.matrix[i][j] = corr.matrix[j][i] = util::correlation(a, b);
    }
  }
  return corr;
}

void write_shocks_csv(const std::string& path, const std::vector<FirmShock>& shocks) {
  csv::Table table;
  table.header = {"firm_id", "year", "variant", "value", "n_links", "imputed_share"};
  table.rows.reserve(shocks.size());
  for (const auto& s : shocks)
    table.rows.push_back({s.firm_id, std::to_string(s.year), variant_name(s.variant),
                          csv::format_double(s.value), std::to_string(s.n_links),
                          csv::format_double(s.imputed_share)});
  csv::write_csv(path, table);
}

std::vector<FirmShock> read_shocks_csv(const std::string& path) {
  const csv::Table table = csv::read_csv(path);
  const int c_firm = table.require("firm_id");
  const int c_year = table.require("year");
  const int c_variant = table.require("variant");
  const int c_value = table.require("value");
  const int c_links = table.require("n_links");
  const int c_imputed = table.require("imputed_share");
  std::vector<FirmShock> shocks;
  shocks.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    FirmShock s;
    s.firm_id = row[c_firm];
    s.year = static_cast<int>(csv::parse_int(row[c_year]));
    s.variant = variant_from_name(row[c_variant]);
    s.value = csv::parse_double(row[c_value]);
    s.n_links = static_cast<int>(csv::parse_int(row[c_links]));
    s.imputed_share = csv::parse_double(row[c_imputed]);
    shocks.push_back(std::move(s));
  }
  return shocks;
}

}  // namespace tradelab::shocks
