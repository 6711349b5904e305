// tradelab: synthetic trade-pipeline laboratory.
//
// Subcommands: model-eval, heatmap, search-sim, gen, shocks, regress,
// clean-names. Every run is driven by a flat key=value config (file and/or
// repeated --set overrides) and writes its artifacts plus the fully resolved
// configuration under --out.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "tradelab/config.hpp"
#include "tradelab/csv.hpp"
#include "tradelab/datagen.hpp"
#include "tradelab/econ.hpp"
#include "tradelab/errors.hpp"
#include "tradelab/model.hpp"
#include "tradelab/namematch.hpp"
#include "tradelab/records.hpp"
#include "tradelab/search.hpp"
#include "tradelab/shocks.hpp"

namespace fs = std::filesystem;
using tradelab::config::KeyValues;

namespace {

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir = "out";
  long long seed = -1;
  int threads = 1;
};

void add_common_flags(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "Flat key=value config file");
  cmd->add_option("--set", args.overrides, "Override a config key, key=value (repeatable)");
  cmd->add_option("--out", args.out_dir, "Output directory (created if missing)");
  cmd->add_option("--seed", args.seed, "Random seed override");
  cmd->add_option("--threads", args.threads, "Worker threads, 0 = all cores");
}

KeyValues resolve_config(const CommonArgs& args) {
  KeyValues kv;
  if (!args.config_path.empty()) kv = KeyValues::from_file(args.config_path);
  for (const auto& item : args.overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      throw tradelab::ConfigError("--set expects key=value, got: " + item);
    kv.set(item.substr(0, eq), item.substr(eq + 1));
  }
  if (args.seed >= 0) kv.set("seed", std::to_string(args.seed));
  if (args.threads != 1) kv.set("threads", std::to_string(args.threads));
  return kv;
}

void write_resolved_config(const KeyValues& kv, const std::string& out_dir) {
  fs::create_directories(out_dir);
  std::ofstream out(fs::path(out_dir) / "run_config.txt");
  for (const auto& line : kv.dump()) {
    out << line << "\n";
    std::cout << line << "\n";
  }
}

// Keys outside the fixed set must match an allowed dotted prefix with a
// recognized trailing field.
void check_keys(const KeyValues& kv, std::set<std::string> fixed,
                const std::vector<std::pair<std::string, std::set<std::string>>>& prefixes) {
  std::string bad;
  for (const auto& [key, value] : kv.items()) {
    if (fixed.count(key)) continue;
    bool ok = false;
    for (const auto& [prefix, fields] : prefixes) {
      if (key.rfind(prefix, 0) != 0) continue;
      const auto dot = key.rfind('.');
      // prefix.<nonempty id>.<known field>
      if (dot != std::string::npos && dot > prefix.size() &&
          fields.count(key.substr(dot + 1)))
        ok = true;
      break;
    }
    if (!ok) {
      if (!bad.empty()) bad += ", ";
      bad += key;
    }
  }
  if (!bad.empty()) throw tradelab::ConfigError("unknown config keys: " + bad);
}

const std::set<std::string> kCommonKeys = {"seed", "threads"};
const std::set<std::string> kModelKeys = {"model.rho", "model.alpha", "model.wage",
                                          "model.f", "model.discount"};
const std::set<std::string> kDestFields = {"zeta", "income", "price_index",
                                           "fixed_cost", "group"};

tradelab::model::ModelParams parse_model(const KeyValues& kv) {
  tradelab::model::ModelParams params;
  params.rho = kv.get_double("model.rho", params.rho);
  params.alpha = kv.get_double("model.alpha", params.alpha);
  params.wage = kv.get_double("model.wage", params.wage);
  params.f = kv.get_double("model.f", params.f);
  params.discount = kv.get_double("model.discount", params.discount);

  std::set<std::string> ids;
  for (const auto& [key, value] : kv.items()) {
    if (key.rfind("dest.", 0) != 0) continue;
    const auto dot = key.rfind('.');
    if (dot > 5) ids.insert(key.substr(5, dot - 5));
  }
  for (const auto& id : ids) {
    tradelab::model::Destination dest;
    dest.id = id;
    dest.zeta = kv.get_double("dest." + id + ".zeta", 0.0);
    dest.income = kv.get_double("dest." + id + ".income", 1.0);
    dest.price_index = kv.get_double("dest." + id + ".price_index", 1.0);
    dest.fixed_cost = kv.get_double("dest." + id + ".fixed_cost", 0.0);
    const std::string group = kv.get_string("dest." + id + ".group", "emerging");
    if (group == "advanced")
      dest.income_group = tradelab::model::IncomeGroup::advanced;
    else if (group == "emerging")
      dest.income_group = tradelab::model::IncomeGroup::emerging;
    else if (group == "domestic")
      dest.income_group = tradelab::model::IncomeGroup::domestic;
    else
      throw tradelab::ConfigError("dest." + id + ".group must be advanced, emerging or domestic");
    params.destinations.push_back(std::move(dest));
  }
  if (params.destinations.empty())
    throw tradelab::ConfigError("no destinations configured (dest.<id>.* keys)");
  tradelab::model::validate_params(params);
  return params;
}

const std::set<std::string> kMarketKeys = {"market.family", "market.c_low",
                                           "market.c_high", "market.search_cost",
                                           "market.log_mu", "market.log_sigma"};

tradelab::search::SupplierMarket parse_market(const KeyValues& kv) {
  tradelab::search::SupplierMarket market;
  const std::string family = kv.get_string("market.family", "uniform");
  if (family == "uniform")
    market.family = tradelab::search::DistFamily::uniform;
  else if (family == "lognormal")
    market.family = tradelab::search::DistFamily::truncated_lognormal;
  else
    throw tradelab::ConfigError("market.family must be uniform or lognormal");
  market.c_low = kv.get_double("market.c_low", market.c_low);
  market.c_high = kv.get_double("market.c_high", market.c_high);
  market.search_cost = kv.get_double("market.search_cost", market.search_cost);
  market.log_mu = kv.get_double("market.log_mu", market.log_mu);
  market.log_sigma = kv.get_double("market.log_sigma", market.log_sigma);
  tradelab::search::validate_market(market);
  return market;
}

tradelab::datagen::WorldConfig parse_world(const KeyValues& kv) {
  tradelab::datagen::WorldConfig cfg;
  cfg.n_firms = static_cast<int>(kv.get_int("gen.n_firms", cfg.n_firms));
  cfg.n_suppliers = static_cast<int>(kv.get_int("gen.n_suppliers", cfg.n_suppliers));
  cfg.n_products = static_cast<int>(kv.get_int("gen.n_products", cfg.n_products));
  cfg.n_sources = static_cast<int>(kv.get_int("gen.n_sources", cfg.n_sources));
  cfg.n_destinations = static_cast<int>(kv.get_int("gen.n_destinations", cfg.n_destinations));
  cfg.n_years = static_cast<int>(kv.get_int("gen.n_years", cfg.n_years));
  cfg.links_per_firm = static_cast<int>(kv.get_int("gen.links_per_firm", cfg.links_per_firm));
  cfg.export_products_per_firm = static_cast<int>(
      kv.get_int("gen.export_products_per_firm", cfg.export_products_per_firm));
  cfg.z_sigma = kv.get_double("gen.z_sigma", cfg.z_sigma);
  cfg.xi_sigma = kv.get_double("gen.xi_sigma", cfg.xi_sigma);
  cfg.baseline_price_sd = kv.get_double("gen.baseline_price_sd", cfg.baseline_price_sd);
  cfg.price_walk_sd = kv.get_double("gen.price_walk_sd", cfg.price_walk_sd);
  cfg.dirichlet_alpha = kv.get_double("gen.dirichlet_alpha", cfg.dirichlet_alpha);
  cfg.rho = kv.get_double("gen.rho", cfg.rho);
  cfg.alpha = kv.get_double("gen.alpha", cfg.alpha);
  cfg.beta_true = kv.get_double("gen.beta_true", cfg.beta_true);
  cfg.zeta_advanced = kv.get_double("gen.zeta_advanced", cfg.zeta_advanced);
  cfg.zeta_emerging = kv.get_double("gen.zeta_emerging", cfg.zeta_emerging);
  cfg.noise_sd = kv.get_double("gen.noise_sd", cfg.noise_sd);
  cfg.cluster_noise_sd = kv.get_double("gen.cluster_noise_sd", cfg.cluster_noise_sd);
  cfg.attrition_hazard = kv.get_double("gen.attrition_hazard", cfg.attrition_hazard);
  cfg.export_attrition_hazard =
      kv.get_double("gen.export_attrition_hazard", cfg.export_attrition_hazard);
  cfg.p_char_drop = kv.get_double("gen.p_char_drop", cfg.p_char_drop);
  cfg.p_suffix = kv.get_double("gen.p_suffix", cfg.p_suffix);
  cfg.p_country_token = kv.get_double("gen.p_country_token", cfg.p_country_token);
  cfg.seed = static_cast<std::uint64_t>(kv.get_int("seed", 1));
  cfg.threads = static_cast<unsigned>(kv.get_int("threads", 1));
  return cfg;
}

const std::set<std::string> kGenKeys = {
    "gen.n_firms", "gen.n_suppliers", "gen.n_products", "gen.n_sources",
    "gen.n_destinations", "gen.n_years", "gen.links_per_firm",
    "gen.export_products_per_firm", "gen.z_sigma", "gen.xi_sigma",
    "gen.baseline_price_sd", "gen.price_walk_sd", "gen.dirichlet_alpha", "gen.rho",
    "gen.alpha", "gen.beta_true", "gen.zeta_advanced", "gen.zeta_emerging",
    "gen.noise_sd", "gen.cluster_noise_sd", "gen.attrition_hazard",
    "gen.export_attrition_hazard", "gen.p_char_drop", "gen.p_suffix",
    "gen.p_country_token"};

tradelab::econ::RegressionSpec parse_spec(const KeyValues& kv) {
  tradelab::econ::RegressionSpec spec;
  spec.outcome = tradelab::econ::outcome_from_name(kv.get_string("spec.outcome", "exports"));
  spec.horizon = static_cast<int>(kv.get_int("spec.horizon", spec.horizon));
  spec.variant =
      tradelab::shocks::variant_from_name(kv.get_string("spec.variant", "supplier_average"));
  spec.outcome_lags = static_cast<int>(kv.get_int("spec.outcome_lags", spec.outcome_lags));
  spec.shock_lags = static_cast<int>(kv.get_int("spec.shock_lags", spec.shock_lags));
  spec.differenced = kv.get_bool("spec.differenced", spec.differenced);
  spec.partition.scheme = kv.get_string("spec.partition.scheme", "");
  spec.partition.cls = kv.get_string("spec.partition.class", "");
  spec.partition.income_group = kv.get_string("spec.partition.income_group", "");
  spec.partition.size_side = kv.get_string("spec.partition.size", "");
  spec.partition.employment_csv = kv.get_string("spec.partition.employment_csv", "");
  spec.covariate_csv = kv.get_string("spec.covariate_csv", "");
  spec.covariate_lags = static_cast<int>(kv.get_int("spec.covariate_lags", spec.covariate_lags));
  spec.demean_tol = kv.get_double("spec.demean_tol", spec.demean_tol);
  spec.demean_max_iter = static_cast<int>(kv.get_int("spec.demean_max_iter", spec.demean_max_iter));
  return spec;
}

const std::set<std::string> kSpecKeys = {
    "spec.outcome", "spec.horizon", "spec.variant", "spec.outcome_lags",
    "spec.shock_lags", "spec.differenced", "spec.partition.scheme",
    "spec.partition.class", "spec.partition.income_group", "spec.partition.size",
    "spec.partition.employment_csv", "spec.covariate_csv", "spec.covariate_lags",
    "spec.demean_tol", "spec.demean_max_iter"};

std::set<std::string> with_common(std::set<std::string> keys) {
  keys.insert(kCommonKeys.begin(), kCommonKeys.end());
  return keys;
}

std::set<std::string> merge(std::set<std::string> a, const std::set<std::string>& b) {
  a.insert(b.begin(), b.end());
  return a;
}

int run_model_eval(const CommonArgs& args) {
  const KeyValues kv = resolve_config(args);
  check_keys(kv, with_common(merge(kModelKeys, {"firm.z", "firm.xi", "firm.c"})),
             {{"dest.", kDestFields}});
  const auto params = parse_model(kv);
  tradelab::model::Firm firm;
  firm.id = "firm";
  firm.z = kv.get_double("firm.z", 1.0);
  firm.xi = kv.get_double("firm.xi", 1.0);
  firm.c_current = kv.get_double("firm.c", 1.0);

  write_resolved_config(kv, args.out_dir);
  tradelab::csv::Table lines;
  lines.header = {"destination", "zeta", "quality", "quantity", "price", "profit", "active"};
  tradelab::csv::Table elasticities;
  elasticities.header = {"destination", "cost_elasticity"};
  for (const auto& dest : params.destinations) {
    const auto sol = tradelab::model::solve_line(params, dest, firm);
    lines.rows.push_back({dest.id, tradelab::csv::format_double(dest.zeta),
                          tradelab::csv::format_double(sol.quality),
                          tradelab::csv::format_double(sol.quantity),
                          tradelab::csv::format_double(sol.price),
                          tradelab::csv::format_double(sol.profit),
                          sol.active ? "1" : "0"});
    elasticities.rows.push_back(
        {dest.id, tradelab::csv::format_double(tradelab::model::cost_elasticity(params, dest))});
  }
  tradelab::csv::write_csv((fs::path(args.out_dir) / "lines.csv").string(), lines);
  tradelab::csv::write_csv((fs::path(args.out_dir) / "elasticities.csv").string(), elasticities);
  return 0;
}

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> grid(n);
  for (int i = 0; i < n; ++i)
    grid[i] = std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / std::max(1, n - 1));
  return grid;
}

int run_heatmap(const CommonArgs& args) {
  const KeyValues kv = resolve_config(args);
  check_keys(kv,
             with_common(merge(kModelKeys,
                               {"heatmap.z_min", "heatmap.z_max", "heatmap.xi_min",
                                "heatmap.xi_max", "heatmap.grid_n", "heatmap.c",
                                "heatmap.dest_first", "heatmap.dest_second"})),
             {{"dest.", kDestFields}});
  const auto params = parse_model(kv);

  tradelab::search::HeatmapConfig cfg;
  const int grid_n = static_cast<int>(kv.get_int("heatmap.grid_n", 100));
  cfg.z_grid = log_grid(kv.get_double("heatmap.z_min", 0.5),
                        kv.get_double("heatmap.z_max", 4.0), grid_n);
  cfg.xi_grid = log_grid(kv.get_double("heatmap.xi_min", 0.5),
                         kv.get_double("heatmap.xi_max", 4.0), grid_n);
  cfg.c_value = kv.get_double("heatmap.c", 1.0);
  cfg.dest_first = kv.get_string("heatmap.dest_first", "");
  cfg.dest_second = kv.get_string("heatmap.dest_second", "");
  cfg.threads = static_cast<unsigned>(kv.get_int("threads", 1));

  write_resolved_config(kv, args.out_dir);
  const auto cells = tradelab::search::scope_heatmap(params, cfg);
  auto label = [&](tradelab::search::ScopeCategory c) -> std::string {
    switch (c) {
      case tradelab::search::ScopeCategory::first_only: return cfg.dest_first;
      case tradelab::search::ScopeCategory::second_only: return cfg.dest_second;
      case tradelab::search::ScopeCategory::both: return "both";
      default: return "none";
    }
  };
  tradelab::csv::Table table;
  table.header = {"z", "xi", "scope"};
  table.rows.reserve(cells.size());
  for (const auto& cell : cells)
    table.rows.push_back({tradelab::csv::format_double(cell.z),
                          tradelab::csv::format_double(cell.xi), label(cell.category)});
  tradelab::csv::write_csv((fs::path(args.out_dir) / "heatmap.csv").string(), table);
  return 0;
}

int run_search_sim(const CommonArgs& args) {
  const KeyValues kv = resolve_config(args);
  check_keys(kv,
             with_common(merge(merge(kModelKeys, kMarketKeys),
                               {"sim.n_firms", "sim.horizon", "sim.firm_draw",
                                "sim.z_min", "sim.z_max", "sim.xi_min", "sim.xi_max",
                                "sim.z_sigma", "sim.xi_sigma"})),
             {{"dest.", kDestFields}});
  const auto params = parse_model(kv);
  const auto market = parse_market(kv);

  tradelab::search::SimConfig sim;
  sim.n_firms = static_cast<int>(kv.get_int("sim.n_firms", 1000));
  sim.horizon = static_cast<int>(kv.get_int("sim.horizon", 100));
  sim.seed = static_cast<std::uint64_t>(kv.get_int("seed", 1));
  sim.threads = static_cast<unsigned>(kv.get_int("threads", 1));

  std::vector<tradelab::model::Firm> firms(sim.n_firms);
  const std::string draw = kv.get_string("sim.firm_draw", "grid");
  if (draw == "grid") {
    const int side = std::max(1, static_cast<int>(std::round(std::sqrt(sim.n_firms))));
    const auto zs = log_grid(kv.get_double("sim.z_min", 0.5), kv.get_double("sim.z_max", 4.0), side);
    const auto xis =
        log_grid(kv.get_double("sim.xi_min", 0.5), kv.get_double("sim.xi_max", 4.0), side);
    for (int i = 0; i < sim.n_firms; ++i) {
      firms[i].z = zs[(i / side) % side];
      firms[i].xi = xis[i % side];
    }
  } else if (draw == "lognormal") {
    const double z_sigma = kv.get_double("sim.z_sigma", 0.3);
    const double xi_sigma = kv.get_double("sim.xi_sigma", 0.3);
    for (int i = 0; i < sim.n_firms; ++i) {
      tradelab::rng::Stream stream(sim.seed ^ 0x5151ULL, i);
      firms[i].z = stream.next_lognormal(0.0, z_sigma);
      firms[i].xi = stream.next_lognormal(0.0, xi_sigma);
    }
  } else {
    throw tradelab::ConfigError("sim.firm_draw must be grid or lognormal");
  }
  char buf[16];
  for (int i = 0; i < sim.n_firms; ++i) {
    std::snprintf(buf, sizeof(buf), "F%05d", i + 1);
    firms[i].id = buf;
    firms[i].c_current = market.c_high;
  }

  write_resolved_config(kv, args.out_dir);
  const auto panel = tradelab::search::simulate_panel(params, market, firms, sim);

  tradelab::csv::Table firm_table;
  firm_table.header = {"firm_id", "z", "xi"};
  for (const auto& firm : firms)
    firm_table.rows.push_back({firm.id, tradelab::csv::format_double(firm.z),
                               tradelab::csv::format_double(firm.xi)});
  tradelab::csv::write_csv((fs::path(args.out_dir) / "firms.csv").string(), firm_table);

  tradelab::csv::Table table;
  table.header = {"firm_id", "period", "c", "searched", "switched", "profit", "scope"};
  table.rows.reserve(panel.size());
  for (const auto& row : panel)
    table.rows.push_back({firms[row.firm].id, std::to_string(row.period),
                          tradelab::csv::format_double(row.c), row.searched ? "1" : "0",
                          row.switched ? "1" : "0", tradelab::csv::format_double(row.profit),
                          row.scope});
  tradelab::csv::write_csv((fs::path(args.out_dir) / "panel.csv").string(), table);
  return 0;
}

int run_gen(const CommonArgs& args) {
  const KeyValues kv = resolve_config(args);
  check_keys(kv, with_common(kGenKeys), {});
  const auto cfg = parse_world(kv);
  write_resolved_config(kv, args.out_dir);

  const auto world = tradelab::datagen::generate_world(cfg);
  const auto corpus = tradelab::datagen::generate_transactions(world);
  tradelab::records::write_corpus(corpus, args.out_dir);

  std::ofstream truth(fs::path(args.out_dir) / "truth.txt");
  truth << "beta_advanced = "
        << tradelab::csv::format_double(world.true_beta(tradelab::model::IncomeGroup::advanced))
        << "\n";
  truth << "beta_emerging = "
        << tradelab::csv::format_double(world.true_beta(tradelab::model::IncomeGroup::emerging))
        << "\n";
  for (const auto& dest : world.params.destinations)
    truth << "zeta." << dest.id << " = " << tradelab::csv::format_double(dest.zeta) << "\n";
  return 0;
}

int run_shocks(const CommonArgs& args, const std::string& imports_path,
               const std::string& row_prices_path) {
  const KeyValues kv = resolve_config(args);
  check_keys(kv, with_common({"shocks.drop_loo_zeros"}), {});
  write_resolved_config(kv, args.out_dir);

  const auto imports = tradelab::records::read_trade_csv(
      imports_path, tradelab::records::Direction::import_flow);
  tradelab::shocks::PriceTable row_prices;
  if (!row_prices_path.empty())
    row_prices = tradelab::shocks::read_price_table_csv(row_prices_path);
  const auto shocks = tradelab::shocks::build_all_shocks(
      imports, row_prices_path.empty() ? nullptr : &row_prices);
  tradelab::shocks::write_shocks_csv((fs::path(args.out_dir) / "shocks.csv").string(), shocks);

  const bool drop_zeros = kv.get_bool("shocks.drop_loo_zeros", false);
  const auto stats = tradelab::shocks::shock_stats(shocks, drop_zeros);
  tradelab::csv::Table stats_table;
  stats_table.header = {"variant", "n", "mean", "p5", "p25", "p50", "p75", "p95", "sd"};
  for (const auto& s : stats)
    stats_table.rows.push_back({tradelab::shocks::variant_name(s.variant),
                                std::to_string(s.n), tradelab::csv::format_double(s.mean),
                                tradelab::csv::format_double(s.p5),
                                tradelab::csv::format_double(s.p25),
                                tradelab::csv::format_double(s.p50),
                                tradelab::csv::format_double(s.p75),
                                tradelab::csv::format_double(s.p95),
                                tradelab::csv::format_double(s.sd)});
  tradelab::csv::write_csv((fs::path(args.out_dir) / "shock_stats.csv").string(), stats_table);

  const auto corr = tradelab::shocks::shock_correlation(shocks);
  tradelab::csv::Table corr_table;
  corr_table.header = {"variant"};
  for (const auto v : corr.variants)
    corr_table.header.push_back(tradelab::shocks::variant_name(v));
  for (std::size_t i = 0; i < corr.variants.size(); ++i) {
    std::vector<std::string> row{tradelab::shocks::variant_name(corr.variants[i])};
    for (std::size_t j = 0; j < corr.variants.size(); ++j)
      row.push_back(tradelab::csv::format_double(corr.matrix[i][j]));
    corr_table.rows.push_back(std::move(row));
  }
  tradelab::csv::write_csv((fs::path(args.out_dir) / "shock_corr.csv").string(), corr_table);
  return 0;
}

int run_regress(const CommonArgs& args, const std::string& corpus_dir,
                const std::string& shocks_path) {
  const KeyValues kv = resolve_config(args);
  check_keys(kv, with_common(kSpecKeys), {});
  const auto spec = parse_spec(kv);
  write_resolved_config(kv, args.out_dir);

  const auto corpus = tradelab::records::read_corpus(corpus_dir);
  std::vector<tradelab::shocks::FirmShock> shock_table;
  if (!shocks_path.empty())
    shock_table = tradelab::shocks::read_shocks_csv(shocks_path);
  else
    shock_table = tradelab::shocks::build_shocks(corpus.imports, spec.variant);

  const auto result = tradelab::econ::run_spec(corpus, shock_table, spec);

  std::ofstream out(fs::path(args.out_dir) / "results.txt");
  for (const auto& line : tradelab::econ::result_lines(spec, result)) {
    out << line << "\n";
    std::cout << line << "\n";
  }

  tradelab::csv::Table coef_table;
  coef_table.header = {"name", "estimate", "clustered_se", "t"};
  for (int i = 0; i < result.coef.size(); ++i) {
    const double se = result.se(i);
    coef_table.rows.push_back({result.names[i], tradelab::csv::format_double(result.coef(i)),
                               tradelab::csv::format_double(se),
                               tradelab::csv::format_double(se > 0 ? result.coef(i) / se : 0.0)});
  }
  tradelab::csv::write_csv((fs::path(args.out_dir) / "coefficients.csv").string(), coef_table);
  return 0;
}

int run_clean_names(const CommonArgs& args, const std::string& input_path,
                    const std::string& aliases_path, const std::string& countries_path,
                    const std::string& suffixes_path) {
  const KeyValues kv = resolve_config(args);
  check_keys(kv, with_common({}), {});
  write_resolved_config(kv, args.out_dir);

  tradelab::names::CleanConfig clean = tradelab::names::default_clean_config();
  if (!countries_path.empty())
    clean.country_tokens = tradelab::names::load_token_list(countries_path);
  if (!suffixes_path.empty())
    clean.suffix_tokens = tradelab::names::load_token_list(suffixes_path);
  if (!aliases_path.empty())
    clean.aliases = tradelab::names::load_alias_table(aliases_path);

  const tradelab::csv::Table input = tradelab::csv::read_csv(input_path);
  const int c_firm = input.require("firm_id");
  const int c_raw = input.require("supplier_raw");
  const int c_value = input.require("value_usd");
  std::vector<tradelab::names::SupplierRow> rows;
  rows.reserve(input.rows.size());
  for (const auto& row : input.rows)
    rows.push_back({row[c_firm], row[c_raw], tradelab::csv::parse_double(row[c_value])});

  const auto cleaned = tradelab::names::dedup_suppliers(rows, clean);
  tradelab::csv::Table out;
  out.header = {"firm_id", "supplier_raw", "supplier_canonical", "cluster_id"};
  out.rows.reserve(cleaned.size());
  for (const auto& row : cleaned)
    out.rows.push_back({row.firm_id, row.supplier_raw, row.supplier_canonical,
                        std::to_string(row.cluster_id)});
  tradelab::csv::write_csv((fs::path(args.out_dir) / "cleaned.csv").string(), out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tradelab: heterogeneous-firm trade model, synthetic customs data, "
               "shift-share shocks and panel regressions"};
  app.name("tradelab");
  app.require_subcommand(1);

  CommonArgs model_eval_args, heatmap_args, sim_args, gen_args, shocks_args,
      regress_args, clean_args;
  std::string imports_path, row_prices_path, corpus_dir, shocks_path, names_input,
      aliases_path, countries_path, suffixes_path;

  auto* cmd_model = app.add_subcommand("model-eval", "Per-destination line solutions and elasticities");
  add_common_flags(cmd_model, model_eval_args);

  auto* cmd_heatmap = app.add_subcommand("heatmap", "Export-scope categories over a (z, xi) grid");
  add_common_flags(cmd_heatmap, heatmap_args);

  auto* cmd_sim = app.add_subcommand("search-sim", "Supplier search panel simulation");
  add_common_flags(cmd_sim, sim_args);

  auto* cmd_gen = app.add_subcommand("gen", "Generate a synthetic customs corpus");
  add_common_flags(cmd_gen, gen_args);

  auto* cmd_shocks = app.add_subcommand("shocks", "Shift-share shocks, all variants, with statistics");
  add_common_flags(cmd_shocks, shocks_args);
  cmd_shocks->add_option("--imports", imports_path, "imports.csv path")->required();
  cmd_shocks->add_option("--row-prices", row_prices_path,
                         "Rest-of-world price table for the country_product variant "
                         "(product_hs6,source_country,year,price)");

  auto* cmd_regress = app.add_subcommand("regress", "Fixed-effects panel regression from a spec");
  add_common_flags(cmd_regress, regress_args);
  cmd_regress->add_option("--corpus", corpus_dir, "Corpus directory")->required();
  cmd_regress->add_option("--shocks", shocks_path, "shocks.csv (otherwise built from the corpus)");

  auto* cmd_clean = app.add_subcommand("clean-names", "Supplier name normalization and dedup");
  add_common_flags(cmd_clean, clean_args);
  cmd_clean->add_option("--input", names_input, "CSV with firm_id,supplier_raw,value_usd")->required();
  cmd_clean->add_option("--aliases", aliases_path, "Alias table, alias=canonical per line");
  cmd_clean->add_option("--countries", countries_path, "Country token list, one per line");
  cmd_clean->add_option("--suffixes", suffixes_path, "Suffix token list, one per line");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (cmd_model->parsed()) return run_model_eval(model_eval_args);
    if (cmd_heatmap->parsed()) return run_heatmap(heatmap_args);
    if (cmd_sim->parsed()) return run_search_sim(sim_args);
    if (cmd_gen->parsed()) return run_gen(gen_args);
    if (cmd_shocks->parsed()) return run_shocks(shocks_args, imports_path, row_prices_path);
    if (cmd_regress->parsed()) return run_regress(regress_args, corpus_dir, shocks_path);
    if (cmd_clean->parsed())
      return run_clean_names(clean_args, names_input, aliases_path, countries_path,
                             suffixes_path);
  } catch (const tradelab::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
