#include "tradelab/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "tradelab/errors.hpp"
#include "tradelab/namematch.hpp"
#include "tradelab/util.hpp"

namespace tradelab::datagen {

namespace {

constexpr std::uint64_t kPriceStreamTag = 0x9000000000000000ULL;
constexpr std::uint64_t kWorldStreamTag = 0xa000000000000000ULL;
constexpr std::uint64_t kNameStreamTag = 0xb000000000000000ULL;

std::string padded(const char* prefix, int i, int width) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%0*d", prefix, width, i);
  return buf;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string link_key(const Link& link) {
  return link.supplier + "|" + link.product + "|" + link.source;
}

// Geometric death draw: the first year >= 1 the hazard fires, else horizon.
int draw_death_year(rng::Stream& stream, double hazard, int horizon) {
  if (hazard <= 0.0) return horizon;
  for (int t = 1; t < horizon; ++t)
    if (stream.next_double() < hazard) return t;
  return horizon;
}

double calibrated_zeta(double rho, double alpha, double beta_true) {
  // Invert beta = ((rho-1)/D - 1)(1-alpha) with D = (rho-1)zeta - 1.
  const double m = beta_true / (1.0 - alpha) + 1.0;
  if (!(m < 0.0))
    throw ConfigError("beta_true must be below -(1-alpha) to admit a quality taste");
  const double D = (rho - 1.0) / m;
  const double zeta = (D + 1.0) / (rho - 1.0);
  if (!(zeta >= 0.0))
    throw ConfigError("beta_true steeper than the zeta = 0 bound -rho*(1-alpha)");
  return zeta;
}

}  // namespace

double World::true_beta(model::IncomeGroup group) const {
  for (const auto& d : params.destinations)
    if (d.income_group == group) return model::cost_elasticity(params, d);
  throw ConfigError("no destination with the requested income group");
}

double World::price_index(const FirmProfile& firm, int year) const {
  double total_share = 0.0;
  double index = 0.0;
  for (const auto& link : firm.links) {
    if (year >= link.death_year) continue;
    index += link.share * log_prices.at(link_key(link))[year];
    total_share += link.share;
  }
  if (total_share <= 0.0) return std::nan("");
  return index / total_share;
}

World generate_world(const WorldConfig& config) {
  if (config.n_firms < 1 || config.n_suppliers < 1 || config.n_products < 1 ||
      config.n_sources < 1 || config.n_destinations < 1 || config.n_years < 1)
    throw ConfigError("all world counts must be at least 1");
  if (config.links_per_firm < 1)
    throw ConfigError("links_per_firm must be at least 1");
  if (config.z_sigma < 0.0 || config.xi_sigma < 0.0 || config.price_walk_sd < 0.0 ||
      config.baseline_price_sd < 0.0 || config.noise_sd < 0.0 ||
      config.cluster_noise_sd < 0.0)
    throw ConfigError("standard deviations must be nonnegative");
  if (!(config.dirichlet_alpha > 0.0))
    throw ConfigError("dirichlet_alpha must be positive");
  if (!(config.rho > 1.0) || !(config.alpha > 0.0 && config.alpha < 1.0))
    throw ConfigError("need rho > 1 and alpha in (0, 1)");

  World world;
  world.config = config;

  world.params.rho = config.rho;
  world.params.alpha = config.alpha;
  world.params.wage = 1.0;
  world.params.f = 1.0;
  world.params.discount = 0.9;

  const double zeta_common =
      (config.zeta_advanced >= 0.0 && config.zeta_emerging >= 0.0)
          ? -1.0
          : calibrated_zeta(config.rho, config.alpha, config.beta_true);
  for (int d = 0; d < config.n_destinations; ++d) {
    model::Destination dest;
    dest.id = padded("DST", d + 1, 2);
    dest.income_group = d % 2 == 0 ? model::IncomeGroup::advanced
                                   : model::IncomeGroup::emerging;
    dest.zeta = zeta_common >= 0.0 ? zeta_common
                : dest.income_group == model::IncomeGroup::advanced
                    ? config.zeta_advanced
                    : config.zeta_emerging;
    dest.income = 1.0;
    dest.price_index = 1.0;
    dest.fixed_cost = 0.0;
    world.params.destinations.push_back(std::move(dest));
  }
  model::validate_params(world.params);

  world.firms.resize(config.n_firms);
  util::parallel_for(config.n_firms, config.threads, [&](std::size_t fi) {
    rng::Stream stream(config.seed, fi);
    FirmProfile& firm = world.firms[fi];
    firm.id = padded("F", static_cast<int>(fi) + 1, 5);
    firm.z = stream.next_lognormal(0.0, config.z_sigma);
    firm.xi = stream.next_lognormal(0.0, config.xi_sigma);

    firm.links.resize(config.links_per_firm);
    for (auto& link : firm.links) {
      for (int attempt = 0; attempt < 64; ++attempt) {
        link.supplier = padded("SUP", static_cast<int>(stream.next_index(config.n_suppliers)) + 1, 6);
        link.product = padded("1", static_cast<int>(stream.next_index(config.n_products)), 5);
        link.source = padded("SRC", static_cast<int>(stream.next_index(config.n_sources)) + 1, 2);
        const bool duplicate = std::any_of(
            firm.links.begin(), firm.links.end(), [&](const Link& other) {
              return &other != &link && other.supplier == link.supplier &&
                     other.product == link.product && other.source == link.source;
            });
        if (!duplicate) break;
      }
      link.death_year = draw_death_year(stream, config.attrition_hazard, config.n_years);
    }
    const std::vector<double> shares =
        stream.next_dirichlet(config.dirichlet_alpha, firm.links.size());
    for (std::size_t k = 0; k < firm.links.size(); ++k) firm.links[k].share = shares[k];

    firm.exports.resize(config.export_products_per_firm);
    for (auto& ep : firm.exports) {
      ep.product = padded("1", static_cast<int>(stream.next_index(config.n_products)), 5);
      ep.weight = stream.next_lognormal(0.0, 0.3);
      ep.death_by_dest.resize(config.n_destinations);
      for (auto& death : ep.death_by_dest)
        death = draw_death_year(stream, config.export_attrition_hazard, config.n_years);
    }
  });

  // Price paths keyed by (supplier, product, source); the stream is derived
  // from the key so shared links agree no matter which firm touches them.
  for (const auto& firm : world.firms) {
    for (const auto& link : firm.links) {
      const std::string key = link_key(link);
      if (world.log_prices.count(key)) continue;
      rng::Stream stream(config.seed, kPriceStreamTag ^ fnv1a(key));
      std::vector<double> path(config.n_years);
      path[0] = config.baseline_price_sd * stream.next_normal();
      for (int t = 1; t < config.n_years; ++t)
        path[t] = path[t - 1] + config.price_walk_sd * stream.next_normal();
      world.log_prices.emplace(key, std::move(path));
    }
  }
  return world;
}

records::Corpus generate_transactions(const World& world) {
  const WorldConfig& config = world.config;
  const model::ModelParams& params = world.params;

  std::vector<std::vector<records::TradeRecord>> firm_imports(world.firms.size());
  std::vector<std::vector<records::TradeRecord>> firm_exports(world.firms.size());

  util::parallel_for(world.firms.size(), config.threads, [&](std::size_t fi) {
    const FirmProfile& firm = world.firms[fi];
    rng::Stream noise(config.seed, kWorldStreamTag ^ fi);
    const model::Firm model_firm{firm.id, firm.z, firm.xi, 1.0};

    for (int t = 0; t < config.n_years; ++t) {
      double total_share = 0.0;
      for (const auto& link : firm.links)
        if (t < link.death_year) total_share += link.share;

      const double firm_year_noise = config.cluster_noise_sd * noise.next_normal();

      if (total_share > 0.0) {
        // Composite supplier efficiency: share-weighted import price index.
        double log_index = 0.0;
        for (const auto& link : firm.links)
          if (t < link.death_year)
            log_index += link.share / total_share * world.log_prices.at(link_key(link))[t];
        const double c_tilde = std::exp(log_index);
        const double unit_cost = model::marginal_cost(params, firm.z, c_tilde);

        double import_bill = 0.0;
        std::vector<model::LineSolution> lines(params.destinations.size());
        for (std::size_t d = 0; d < params.destinations.size(); ++d) {
          lines[d] = model::solve_line_at(params, params.destinations[d], model_firm, c_tilde);
          import_bill += unit_cost * lines[d].quantity;
        }
        import_bill *= 1.0 - params.alpha;

        for (const auto& link : firm.links) {
          if (t >= link.death_year) continue;
          const double price = std::exp(world.log_prices.at(link_key(link))[t]);
          records::TradeRecord rec;
          rec.year = t;
          rec.firm_id = firm.id;
          rec.counterparty = link.supplier;
          rec.product = link.product;
          rec.country = link.source;
          rec.value = link.share / total_share * import_bill;
          rec.quantity = rec.value / price;
          rec.direction = records::Direction::import_flow;
          if (rec.value > 0.0 && rec.quantity > 0.0) firm_imports[fi].push_back(std::move(rec));
        }

        for (const auto& ep : firm.exports) {
          for (std::size_t d = 0; d < params.destinations.size(); ++d) {
            // Noise draws advance the stream even for dead cells so the
            // draw sequence is independent of attrition outcomes.
            const double eps = config.noise_sd * noise.next_normal() + firm_year_noise;
            if (t >= ep.death_by_dest[d]) continue;
            const double quantity = lines[d].quantity * ep.weight * std::exp(eps);
            if (!(quantity > 0.0)) continue;
            records::TradeRecord rec;
            rec.year = t;
            rec.firm_id = firm.id;
            rec.product = ep.product;
            rec.country = params.destinations[d].id;
            rec.quantity = quantity;
            rec.value = lines[d].price * quantity;
            rec.direction = records::Direction::export_flow;
            firm_exports[fi].push_back(std::move(rec));
          }
        }
      }
    }
  });

  records::Corpus corpus;
  for (auto& bucket : firm_imports)
    corpus.imports.insert(corpus.imports.end(), bucket.begin(), bucket.end());
  for (auto& bucket : firm_exports)
    corpus.exports.insert(corpus.exports.end(), bucket.begin(), bucket.end());

  for (const auto& d : params.destinations)
    corpus.country_income[d.id] =
        d.income_group == model::IncomeGroup::advanced ? "advanced" : "emerging";
  for (int s = 0; s < config.n_sources; ++s)
    corpus.country_income[padded("SRC", s + 1, 2)] = s % 2 == 0 ? "advanced" : "emerging";

  rng::Stream class_stream(config.seed, kWorldStreamTag ^ 0x517ULL);
  for (int p = 0; p < config.n_products; ++p) {
    const std::string product = padded("1", p, 5);
    for (const char* scheme : {"rauch_lib", "rauch_con", "bernini"}) {
      const double u = class_stream.next_double();
      std::string cls;
      if (std::string(scheme) == "bernini")
        cls = u < 0.55 ? "differentiated" : "homogeneous";
      else
        cls = u < 0.5 ? "differentiated" : u < 0.75 ? "reference" : "homogeneous";
      corpus.classifications[{scheme, product}] = cls;
    }
  }
  return corpus;
}

std::string corrupt_name(const std::string& clean, const WorldConfig& config,
                         rng::Stream& stream) {
  static const names::CleanConfig tokens = names::default_clean_config();
  std::string out = clean;
  if (stream.next_double() < config.p_char_drop && out.size() > 3) {
    std::size_t pos = stream.next_index(out.size());
    for (int tries = 0; tries < 8 && out[pos] == ' '; ++tries)
      pos = stream.next_index(out.size());
    if (out[pos] != ' ') out.erase(pos, 1);
  }
  if (stream.next_double() < config.p_suffix)
    out += " " + tokens.suffix_tokens[stream.next_index(tokens.suffix_tokens.size())];
  if (stream.next_double() < config.p_country_token)
    out += " " + tokens.country_tokens[stream.next_index(tokens.country_tokens.size())];
  return out;
}

std::vector<NameCorpusRow> generate_name_corpus(int n_sources, int variants_per_source,
                                                const WorldConfig& config) {
  rng::Stream stream(config.seed, kNameStreamTag);
  std::vector<std::string> sources;
  sources.reserve(n_sources);
  while (static_cast<int>(sources.size()) < n_sources) {
    const int words = 1 + static_cast<int>(stream.next_index(2));
    std::string name;
    for (int w = 0; w < words; ++w) {
      if (w) name += ' ';
      // Words long enough that a single-character typo stays recognizable
      // under the bigram thresholds.
      const int len = 7 + static_cast<int>(stream.next_index(4));
      for (int i = 0; i < len; ++i)
        name += static_cast<char>('A' + stream.next_index(26));
    }
    if (std::find(sources.begin(), sources.end(), name) == sources.end())
      sources.push_back(std::move(name));
  }

  std::vector<NameCorpusRow> rows;
  rows.reserve(static_cast<std::size_t>(n_sources) * (1 + variants_per_source));
  for (int s = 0; s < n_sources; ++s) {
    const std::string importer = padded("IMP", s / 50 + 1, 3);
    NameCorpusRow clean;
    clean.firm_id = importer;
    clean.supplier_raw = sources[s];
    clean.value_usd = 1000.0 + stream.next_double();
    clean.source_index = s;
    rows.push_back(std::move(clean));
    for (int v = 0; v < variants_per_source; ++v) {
      NameCorpusRow row;
      row.firm_id = importer;
      row.supplier_raw = corrupt_name(sources[s], config, stream);
      row.value_usd = 10.0 + stream.next_double();
      row.source_index = s;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace tradelab::datagen
