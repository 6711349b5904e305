#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tradelab/model.hpp"
#include "tradelab/records.hpp"
#include "tradelab/rng.hpp"

namespace tradelab::datagen {

struct WorldConfig {
  // counts
  int n_firms = 200;
  int n_suppliers = 400;
  int n_products = 40;
  int n_sources = 8;
  int n_destinations = 4;  // split evenly advanced / emerging
  int n_years = 4;
  int links_per_firm = 3;
  int export_products_per_firm = 2;

  // firm attribute and price-process parameters
  double z_sigma = 0.25;           // log-normal dispersion of process productivity
  double xi_sigma = 0.25;          // log-normal dispersion of product productivity
  double baseline_price_sd = 0.3;  // dispersion of initial log prices
  double price_walk_sd = 0.2;      // log random-walk innovation s.d.
  double dirichlet_alpha = 2.0;    // import share concentration

  // structural block; beta_true pins the common quality taste unless the
  // per-group zetas are set explicitly (>= 0)
  double rho = 2.0;
  double alpha = 0.5;
  double beta_true = -1.5;  // export semi-elasticity to the firm cost index
  double zeta_advanced = -1.0;
  double zeta_emerging = -1.0;

  // measurement noise on export log quantities: iid per cell-year plus a
  // firm-year component shared across a firm's export cells
  double noise_sd = 0.0;
  double cluster_noise_sd = 0.0;

  double attrition_hazard = 0.0;         // supplier link death hazard per year
  double export_attrition_hazard = 0.0;  // export cell death hazard per year

  // supplier-name corruption probabilities
  double p_char_drop = 0.5;
  double p_suffix = 0.3;
  double p_country_token = 0.3;

  std::uint64_t seed = 1;
  unsigned threads = 1;
};

struct Link {
  std::string supplier;
  std::string product;
  std::string source;
  double share = 0.0;   // baseline import share
  int death_year = 0;   // alive in years [0, death_year)
};

struct ExportProduct {
  std::string product;
  double weight = 1.0;  // fixed cell-level scale, absorbed by fixed effects
  int death_year = 0;   // per destination index: death_year[d] below
  std::vector<int> death_by_dest;
};

struct FirmProfile {
  std::string id;
  double z = 1.0;
  double xi = 1.0;
  std::vector<Link> links;
  std::vector<ExportProduct> exports;
};

struct World {
  WorldConfig config;
  model::ModelParams params;  // export destinations only, all fixed costs zero
  std::vector<FirmProfile> firms;
  // "supplier|product|source" -> log price per year
  std::map<std::string, std::vector<double>> log_prices;

  // Export semi-elasticity to the firm log import-price index for a
  // destination of the given group; the embedded ground truth.
  double true_beta(model::IncomeGroup group) const;
  // Firm log import-price index over alive links in a year.
  double price_index(const FirmProfile& firm, int year) const;
};

// Deterministic in config.seed. Throws ConfigError on invalid settings.
World generate_world(const WorldConfig& config);

// Imports realize baseline shares of the structural import bill; exports come
// from the closed-form line solutions at the share-weighted import price
// index, with log-normal measurement noise on quantities.
records::Corpus generate_transactions(const World& world);

// Supplier-name corruption for the cleaning pipeline: character drop, legal
// suffix, country token, each applied with its configured probability.
std::string corrupt_name(const std::string& clean, const WorldConfig& config,
                         rng::Stream& stream);

struct NameCorpusRow {
  std::string firm_id;
  std::string supplier_raw;
  double value_usd = 0.0;
  int source_index = -1;  // ground truth: which clean name it derives from
};

// n_sources distinct clean names, each followed by variants_per_source
// corrupted variants, all under one importer per source block.
std::vector<NameCorpusRow> generate_name_corpus(int n_sources, int variants_per_source,
                                                const WorldConfig& config);

}  // namespace tradelab::datagen
