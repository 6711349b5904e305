#pragma once

#include <map>
#include <string>
#include <vector>

#include "tradelab/records.hpp"

namespace tradelab::shocks {

enum class ShockVariant {
  supplier_firm,           // own-link price, key (firm, supplier, product, source)
  supplier_average,        // supplier price to all buyers, key (supplier, product, source)
  supplier_leave_one_out,  // same key, focal firm's own flows excluded
  country_product,         // key (product, source)
};

const char* variant_name(ShockVariant v);
ShockVariant variant_from_name(const std::string& name);

// For supplier_leave_one_out the price key carries the focal firm as
// "firm#supplier|product|source"; other variants use the bare key.
using PriceTable = std::map<std::pair<std::string, int>, double>;
using ShiftTable = std::map<std::pair<std::string, int>, double>;

// Quantity-weighted unit values per key-year; cells with no records are
// simply absent. Leave-one-out cells with a single buyer are absent too.
PriceTable unit_values(const std::vector<records::TradeRecord>& imports,
                       ShockVariant variant);

// Consecutive-year log differences; missing either year means no row.
ShiftTable price_shifts(const PriceTable& prices);

// Lagged import-value shares over the variant's weight keys. Throws
// NoBaseYear when the firm has no imports in year-1.
std::map<std::string, double> lagged_shares(
    const std::vector<records::TradeRecord>& imports, const std::string& firm_id,
    int year, ShockVariant variant);

struct FirmShock {
  std::string firm_id;
  int year = 0;
  ShockVariant variant = ShockVariant::supplier_average;
  double value = 0.0;
  int n_links = 0;
  double imputed_share = 0.0;  // weight carried by keys with a missing shift
};

// Share-weighted sum of key shifts; missing shifts impute zero and their
// weight accumulates into imputed_share. For country_product an external
// rest-of-world price table (keys "product|source") may replace the
// customs-derived unit values; other variants ignore it.
FirmShock firm_shock(const std::vector<records::TradeRecord>& imports,
                     const std::string& firm_id, int year, ShockVariant variant,
                     const PriceTable* external_prices = nullptr);

// CSV with columns product_hs6,source_country,year,price.
PriceTable read_price_table_csv(const std::string& path);

// Same combination step on prebuilt tables (the algebraic core).
FirmShock combine_shock(const std::map<std::string, double>& shares,
                        const ShiftTable& shifts, const std::string& firm_id, int year,
                        ShockVariant variant, bool leave_one_out_keys);

// All firm-years with a base year, one FirmShock per (firm, year).
std::vector<FirmShock> build_shocks(const std::vector<records::TradeRecord>& imports,
                                    ShockVariant variant,
                                    const PriceTable* external_prices = nullptr);
std::vector<FirmShock> build_all_shocks(const std::vector<records::TradeRecord>& imports,
                                        const PriceTable* external_prices = nullptr);

struct ShockStats {
  ShockVariant variant;
  std::size_t n = 0;
  double mean = 0.0, p5 = 0.0, p25 = 0.0, p50 = 0.0, p75 = 0.0, p95 = 0.0, sd = 0.0;
};

// Per-variant summary; drop_loo_zeros removes exact zeros of the
// leave-one-out variant before summarizing it.
std::vector<ShockStats> shock_stats(const std::vector<FirmShock>& shocks,
                                    bool drop_loo_zeros = false);

struct ShockCorrelation {
  std::vector<ShockVariant> variants;
  std::vector<std::vector<double>> matrix;  // pairwise, common firm-year support
};

ShockCorrelation shock_correlation(const std::vector<FirmShock>& shocks);

// shocks.csv: firm_id,year,variant,value,n_links,imputed_share
void write_shocks_csv(const std::string& path, const std::vector<FirmShock>& shocks);
std::vector<FirmShock> read_shocks_csv(const std::string& path);

}  // namespace tradelab::shocks
