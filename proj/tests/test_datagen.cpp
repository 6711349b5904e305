#include <doctest.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <map>
#include <set>
#include <vector>

#include "tradelab/datagen.hpp"
#include "tradelab/errors.hpp"
#include "tradelab/records.hpp"
#include "tradelab/shocks.hpp"
#include "tradelab/util.hpp"

using namespace tradelab;
using datagen::WorldConfig;

namespace {

WorldConfig small_config() {
  WorldConfig cfg;
  cfg.n_firms = 40;
  cfg.n_suppliers = 80;
  cfg.n_products = 12;
  cfg.n_sources = 4;
  cfg.n_destinations = 2;
  cfg.n_years = 4;
  cfg.links_per_firm = 3;
  cfg.seed = 11;
  return cfg;
}

bool same_records(const std::vector<records::TradeRecord>& a,
                  const std::vector<records::TradeRecord>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].year != b[i].year || a[i].firm_id != b[i].firm_id ||
        a[i].counterparty != b[i].counterparty || a[i].product != b[i].product ||
        a[i].country != b[i].country || a[i].value != b[i].value ||
        a[i].quantity != b[i].quantity)
      return false;
  }
  return true;
}

}  // namespace

TEST_CASE("config validation") {
  WorldConfig cfg = small_config();
  cfg.n_firms = 0;
  CHECK_THROWS_AS(datagen::generate_world(cfg), ConfigError);
  cfg = small_config();
  cfg.price_walk_sd = -0.1;
  CHECK_THROWS_AS(datagen::generate_world(cfg), ConfigError);
  cfg = small_config();
  cfg.beta_true = -0.1;  // flatter than the zeta = 0 bound -(1 - alpha)
  CHECK_THROWS_AS(datagen::generate_world(cfg), ConfigError);
}

TEST_CASE("seeded determinism of world and transactions") {
  const WorldConfig cfg = small_config();
  const auto w1 = datagen::generate_world(cfg);
  const auto w2 = datagen::generate_world(cfg);
  REQUIRE(w1.firms.size() == w2.firms.size());
  for (std::size_t i = 0; i < w1.firms.size(); ++i) {
    CHECK(w1.firms[i].z == w2.firms[i].z);
    CHECK(w1.firms[i].xi == w2.firms[i].xi);
    REQUIRE(w1.firms[i].links.size() == w2.firms[i].links.size());
    for (std::size_t k = 0; k < w1.firms[i].links.size(); ++k) {
      CHECK(w1.firms[i].links[k].supplier == w2.firms[i].links[k].supplier);
      CHECK(w1.firms[i].links[k].share == w2.firms[i].links[k].share);
    }
  }
  CHECK(w1.log_prices == w2.log_prices);

  const auto c1 = datagen::generate_transactions(w1);
  const auto c2 = datagen::generate_transactions(w2);
  CHECK(same_records(c1.imports, c2.imports));
  CHECK(same_records(c1.exports, c2.exports));

  // Thread count must not change the output either.
  WorldConfig threaded = cfg;
  threaded.threads = 3;
  const auto c3 = datagen::generate_transactions(datagen::generate_world(threaded));
  CHECK(same_records(c1.imports, c3.imports));
  CHECK(same_records(c1.exports, c3.exports));

  WorldConfig other = cfg;
  other.seed = 12;
  const auto c4 = datagen::generate_transactions(datagen::generate_world(other));
  CHECK_FALSE(same_records(c1.imports, c4.imports));
}

TEST_CASE("zero innovation keeps every price path flat") {
  WorldConfig cfg = small_config();
  cfg.price_walk_sd = 0.0;
  const auto world = datagen::generate_world(cfg);
  for (const auto& [key, path] : world.log_prices)
    for (const double lp : path) CHECK(lp == path[0]);

  const auto corpus = datagen::generate_transactions(world);
  const auto shifts = shocks::price_shifts(
      shocks::unit_values(corpus.imports, shocks::ShockVariant::supplier_average));
  for (const auto& [key, shift] : shifts) CHECK(shift == 0.0);
}

TEST_CASE("price shift dispersion matches the configured innovation scale") {
  WorldConfig cfg = small_config();
  cfg.n_firms = 4000;
  cfg.n_suppliers = 20000;
  cfg.n_products = 200;
  cfg.n_sources = 20;
  cfg.n_years = 2;
  cfg.price_walk_sd = 0.2;
  cfg.threads = 2;
  const auto world = datagen::generate_world(cfg);

  std::vector<double> shifts;
  for (const auto& [key, path] : world.log_prices) shifts.push_back(path[1] - path[0]);
  REQUIRE(shifts.size() >= 10000);
  CHECK(util::stddev(shifts) == doctest::Approx(0.2).epsilon(0.05));
  CHECK(std::abs(util::mean(shifts)) < 0.01);
}

TEST_CASE("single-link zero-noise world: export growth regressed on price growth") {
  WorldConfig cfg;
  cfg.n_firms = 60;
  cfg.n_suppliers = 500;  // plenty of suppliers so links rarely collide
  cfg.n_products = 30;
  cfg.n_sources = 5;
  cfg.n_destinations = 1;
  cfg.n_years = 3;
  cfg.links_per_firm = 1;
  cfg.export_products_per_firm = 1;
  cfg.noise_sd = 0.0;
  cfg.cluster_noise_sd = 0.0;
  cfg.beta_true = -1.5;
  cfg.seed = 21;
  const auto world = datagen::generate_world(cfg);
  const auto corpus = datagen::generate_transactions(world);

  // Delta log exports on the firm's own delta log import price, plain OLS
  // through the origin.
  std::map<std::pair<std::string, int>, double> export_quantity;
  for (const auto& rec : corpus.exports)
    export_quantity[{rec.firm_id, rec.year}] = rec.quantity;
  std::map<std::pair<std::string, int>, double> import_price;
  for (const auto& rec : corpus.imports)
    import_price[{rec.firm_id, rec.year}] = rec.value / rec.quantity;

  double sxy = 0.0, sxx = 0.0;
  int n = 0;
  for (const auto& [key, quantity] : export_quantity) {
    const auto prev = export_quantity.find({key.first, key.second - 1});
    const auto price = import_price.find(key);
    const auto price_prev = import_price.find({key.first, key.second - 1});
    if (prev == export_quantity.end() || price == import_price.end() ||
        price_prev == import_price.end())
      continue;
    const double dy = std::log(quantity) - std::log(prev->second);
    const double dx = std::log(price->second) - std::log(price_prev->second);
    sxy += dx * dy;
    sxx += dx * dx;
    ++n;
  }
  REQUIRE(n > 50);
  const double slope = sxy / sxx;
  CHECK(slope == doctest::Approx(world.true_beta(model::IncomeGroup::advanced)).epsilon(1e-9));
  CHECK(world.true_beta(model::IncomeGroup::advanced) ==
        doctest::Approx(cfg.beta_true).epsilon(1e-12));
}

TEST_CASE("two-group worlds expose distinct true elasticities") {
  WorldConfig cfg = small_config();
  cfg.n_destinations = 4;
  cfg.zeta_advanced = 0.45;
  cfg.zeta_emerging = 0.05;
  const auto world = datagen::generate_world(cfg);
  const double beta_adv = world.true_beta(model::IncomeGroup::advanced);
  const double beta_em = world.true_beta(model::IncomeGroup::emerging);
  CHECK(std::abs(beta_adv) > std::abs(beta_em));
  CHECK(beta_adv == doctest::Approx(model::cost_elasticity(
                        world.params, world.params.destinations[0])));
}

TEST_CASE("full attrition kills every link after its first year") {
  WorldConfig cfg = small_config();
  cfg.attrition_hazard = 1.0;
  const auto corpus = datagen::generate_transactions(datagen::generate_world(cfg));
  std::map<std::string, std::set<int>> link_years;
  for (const auto& rec : corpus.imports)
    link_years[rec.firm_id + "|" + rec.counterparty + "|" + rec.product + "|" + rec.country]
        .insert(rec.year);
  REQUIRE_FALSE(link_years.empty());
  for (const auto& [link, years] : link_years) {
    for (const int y : years) CHECK(years.count(y + 1) == 0);
  }
}

TEST_CASE("every emitted record satisfies the invariants") {
  WorldConfig cfg = small_config();
  cfg.noise_sd = 0.3;
  cfg.cluster_noise_sd = 0.2;
  cfg.attrition_hazard = 0.15;
  cfg.export_attrition_hazard = 0.1;
  const auto corpus = datagen::generate_transactions(datagen::generate_world(cfg));
  REQUIRE_FALSE(corpus.imports.empty());
  REQUIRE_FALSE(corpus.exports.empty());
  for (const auto& rec : corpus.imports) CHECK_NOTHROW(records::validate_record(rec));
  for (const auto& rec : corpus.exports) CHECK_NOTHROW(records::validate_record(rec));
}

TEST_CASE("corpus round-trips through the writer and reader") {
  const auto dir = std::filesystem::temp_directory_path() / "tl_corpus_test";
  std::filesystem::remove_all(dir);
  const auto corpus = datagen::generate_transactions(datagen::generate_world(small_config()));
  records::write_corpus(corpus, dir.string());
  const auto back = records::read_corpus(dir.string());
  CHECK(same_records(corpus.imports, back.imports));
  CHECK(same_records(corpus.exports, back.exports));
  CHECK(corpus.country_income == back.country_income);
  CHECK(corpus.classifications == back.classifications);
  std::filesystem::remove_all(dir);
}

TEST_CASE("empty corpus writes header-only files") {
  const auto dir = std::filesystem::temp_directory_path() / "tl_empty_corpus";
  std::filesystem::remove_all(dir);
  records::write_corpus(records::Corpus{}, dir.string());
  const auto back = records::read_corpus(dir.string());
  CHECK(back.imports.empty());
  CHECK(back.exports.empty());
  std::filesystem::remove_all(dir);
}

TEST_CASE("the planted truth is the levels coefficient on the cost index") {
  WorldConfig cfg = small_config();
  cfg.noise_sd = 0.0;
  cfg.cluster_noise_sd = 0.0;
  cfg.n_destinations = 2;
  const auto world = datagen::generate_world(cfg);
  const auto corpus = datagen::generate_transactions(world);

  // Within each export cell, cell-total log quantity moves one-for-one with
  // beta times the firm's log import-price index.
  std::map<std::string, std::map<int, double>> cell_quantity;
  std::map<std::string, const datagen::FirmProfile*> firm_of;
  for (const auto& firm : world.firms) firm_of[firm.id] = &firm;
  for (const auto& rec : corpus.exports)
    cell_quantity[rec.firm_id + "|" + rec.product + "|" + rec.country][rec.year] +=
        rec.quantity;

  const double beta = world.true_beta(model::IncomeGroup::advanced);
  int checked = 0;
  for (const auto& [key, by_year] : cell_quantity) {
    const std::string firm_id = key.substr(0, key.find('|'));
    const auto* firm = firm_of.at(firm_id);
    const auto first = by_year.begin();
    const double index0 = world.price_index(*firm, first->first);
    for (auto it = std::next(first); it != by_year.end(); ++it) {
      const double dx = world.price_index(*firm, it->first) - index0;
      if (std::abs(dx) < 1e-9) continue;
      const double slope = (std::log(it->second) - std::log(first->second)) / dx;
      CHECK(slope == doctest::Approx(beta).epsilon(1e-9));
      ++checked;
    }
  }
  CHECK(checked > 50);
}

TEST_CASE("a million records round-trip inside the time budget") {
  using Clock = std::chrono::steady_clock;
  std::vector<records::TradeRecord> recs;
  recs.reserve(1000000);
  rng::Stream stream(3, 3);
  for (int i = 0; i < 1000000; ++i) {
    records::TradeRecord r;
    r.year = 2000 + i % 8;
    r.firm_id = "F" + std::to_string(i % 5000);
    r.counterparty = "S" + std::to_string(i % 20000);
    r.product = "100" + std::to_string(100 + i % 500);
    r.country = "C" + std::to_string(i % 40);
    r.value = 1.0 + stream.next_double();
    r.quantity = 0.5 + stream.next_double();
    recs.push_back(std::move(r));
  }
  const auto dir = std::filesystem::temp_directory_path() / "tl_bulk";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "imports.csv").string();
  const auto start = Clock::now();
  records::write_trade_csv(path, recs, records::Direction::import_flow);
  const auto back = records::read_trade_csv(path, records::Direction::import_flow);
  const double elapsed = std::chrono::duration<double>(Clock::now() - start).count();
  CHECK(back.size() == recs.size());
  CHECK(back[999999].value == recs[999999].value);
  CHECK(elapsed < 30.0);
  std::filesystem::remove_all(dir);
}

TEST_CASE("name corruption stays recognizable and seeded") {
  WorldConfig cfg = small_config();
  const auto rows1 = datagen::generate_name_corpus(30, 3, cfg);
  const auto rows2 = datagen::generate_name_corpus(30, 3, cfg);
  REQUIRE(rows1.size() == rows2.size());
  REQUIRE(rows1.size() == 30u * 4u);
  for (std::size_t i = 0; i < rows1.size(); ++i) {
    CHECK(rows1[i].supplier_raw == rows2[i].supplier_raw);
    CHECK(rows1[i].firm_id == rows2[i].firm_id);
  }
  // The clean source always heads its block.
  for (int s = 0; s < 30; ++s) CHECK(rows1[s * 4].value_usd > 100.0);
}
