#include "tradelab/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tradelab/errors.hpp"
#include "tradelab/quadrature.hpp"
#include "tradelab/util.hpp"

namespace tradelab::search {

namespace {

double lognormal_z(const SupplierMarket& m, double c) {
  return (std::log(c) - m.log_mu) / m.log_sigma;
}

// Mass of the untruncated lognormal inside the support.
double lognormal_mass(const SupplierMarket& m) {
  return util::normal_cdf(lognormal_z(m, m.c_high)) -
         util::normal_cdf(lognormal_z(m, m.c_low));
}

}  // namespace

void validate_market(const SupplierMarket& market) {
  if (!(market.c_low > 0.0))
    throw InvalidParameter("c_low", market.c_low, "c_low > 0");
  if (!(market.c_high > market.c_low))
    throw InvalidParameter("c_high", market.c_high, "c_high > c_low");
  if (!(market.search_cost >= 0.0))
    throw InvalidParameter("search_cost", market.search_cost, "search_cost >= 0");
  if (market.family == DistFamily::truncated_lognormal) {
    if (!(market.log_sigma > 0.0))
      throw InvalidParameter("log_sigma", market.log_sigma, "log_sigma > 0");
    if (!(lognormal_mass(market) > 0.0))
      throw InvalidParameter("log_mu", market.log_mu,
                             "support mass positive under truncated-lognormal");
  }
  static const quad::GaussLegendre gl(64);
  const double mass =
      gl.integrate([&](double c) { return density(market, c); }, market.c_low, market.c_high);
  if (std::abs(mass - 1.0) > 1e-10)
    throw InvalidParameter("density", mass, "integrates to 1 on the support");
}

double density(const SupplierMarket& market, double c) {
  if (c < market.c_low || c > market.c_high) return 0.0;
  if (market.family == DistFamily::uniform)
    return 1.0 / (market.c_high - market.c_low);
  const double z = lognormal_z(market, c);
  const double phi = std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI);
  return phi / (c * market.log_sigma * lognormal_mass(market));
}

double match_probability(const SupplierMarket& market, double c) {
  if (c < market.c_low || c > market.c_high)
    throw DomainError("match_probability: efficiency outside the supplier support");
  if (market.family == DistFamily::uniform)
    return (c - market.c_low) / (market.c_high - market.c_low);
  return (util::normal_cdf(lognormal_z(market, c)) -
          util::normal_cdf(lognormal_z(market, market.c_low))) /
         lognormal_mass(market);
}

double sample_efficiency(const SupplierMarket& market, rng::Stream& stream) {
  const double u = stream.next_double();
  if (market.family == DistFamily::uniform)
    return market.c_low + u * (market.c_high - market.c_low);
  const double p_low = util::normal_cdf(lognormal_z(market, market.c_low));
  const double p = p_low + u * lognormal_mass(market);
  const double q = util::normal_inv(std::clamp(p, 1e-15, 1.0 - 1e-15));
  return std::clamp(std::exp(market.log_mu + market.log_sigma * q), market.c_low,
                    market.c_high);
}

ProfitProfile::ProfitProfile(const model::ModelParams& params, const model::Firm& firm) {
  const double rho = params.rho;
  const double one_minus_alpha = 1.0 - params.alpha;
  const double cost_at_unit_c = model::marginal_cost(params, firm.z, 1.0);

  lines_.reserve(params.destinations.size());
  for (const auto& d : params.destinations) {
    const double psi =
        (rho - 1.0) / rho * std::pow(d.income, 1.0 / rho) * d.price_index;
    Line line;
    line.id = d.id;
    line.domestic = d.income_group == model::IncomeGroup::domestic;
    line.fixed_cost = d.fixed_cost;
    if (d.zeta == 0.0) {
      // Gross profit of the CES corner: psi^rho C^(1-rho) / (rho-1).
      line.coef = std::pow(psi, rho) * std::pow(cost_at_unit_c, 1.0 - rho) / (rho - 1.0);
      line.expo = one_minus_alpha * (1.0 - rho);
    } else {
      const double D = (rho - 1.0) * d.zeta - 1.0;
      const double quality_cost = params.f / firm.xi;
      const double coef_in_C = std::pow(quality_cost / d.zeta, (D + 1.0) / D) *
                               std::pow(psi, -rho / D) * (1.0 / (rho - 1.0) - d.zeta);
      line.coef = coef_in_C * std::pow(cost_at_unit_c, (rho - 1.0) / D);
      line.expo = one_minus_alpha * (rho - 1.0) / D;
    }
    line.c_cut = line.fixed_cost == 0.0
                     ? std::numeric_limits<double>::infinity()
                     : std::pow(line.fixed_cost / line.coef, 1.0 / line.expo);
    lines_.push_back(std::move(line));
  }
}

double ProfitProfile::total(double c) const {
  double sum = 0.0;
  for (const auto& line : lines_)
    if (c <= line.c_cut) sum += line.coef * std::pow(c, line.expo) - line.fixed_cost;
  return sum;
}

int ProfitProfile::scope_count(double c) const {
  int n = 0;
  for (const auto& line : lines_)
    if (!line.domestic && c <= line.c_cut) ++n;
  return n;
}

std::string ProfitProfile::scope_label(double c) const {
  std::string label;
  for (const auto& line : lines_) {
    if (c <= line.c_cut) {
      if (!label.empty()) label += '+';
      label += line.id;
    }
  }
  return label;
}

std::vector<bool> ProfitProfile::active_lines(double c) const {
  std::vector<bool> active(lines_.size());
  for (std::size_t i = 0; i < lines_.size(); ++i) active[i] = c <= lines_[i].c_cut;
  return active;
}

std::vector<double> ProfitProfile::breakpoints_within(double lo, double hi) const {
  std::vector<double> cuts;
  for (const auto& line : lines_)
    if (line.c_cut > lo && line.c_cut < hi) cuts.push_back(line.c_cut);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  return cuts;
}

double total_profit(const model::ModelParams& params, const model::Firm& firm, double c) {
  double sum = 0.0;
  for (const auto& d : params.destinations)
    sum += model::solve_line_at(params, d, firm, c).profit;
  return sum;
}

namespace {

// Piecewise Gauss-Legendre evaluation of the search gain with the full-piece
// integrals of total-profit mass precomputed, so repeated evaluations (scan
// and bisection) only quadrate one partial piece each.
class GainEvaluator {
 public:
  GainEvaluator(const ProfitProfile& profile, const SupplierMarket& market,
                int nodes_per_piece)
      : profile_(profile), market_(market), gl_(std::max(nodes_per_piece, 64)) {
    boundaries_.push_back(market.c_low);
    for (double cut : profile.breakpoints_within(market.c_low, market.c_high))
      boundaries_.push_back(cut);
    boundaries_.push_back(market.c_high);
    prefix_.push_back(0.0);
    util::KahanSum acc;
    for (std::size_t i = 0; i + 1 < boundaries_.size(); ++i) {
      acc.add(gl_.integrate([&](double c) { return integrand(c); }, boundaries_[i],
                            boundaries_[i + 1]));
      prefix_.push_back(acc.value());
    }
  }

  double operator()(double c_tilde) const {
    if (c_tilde < market_.c_low || c_tilde > market_.c_high)
      throw DomainError("expected_gain: efficiency outside the supplier support");
    if (c_tilde <= market_.c_low) return 0.0;
    const auto upper =
        std::upper_bound(boundaries_.begin(), boundaries_.end(), c_tilde);
    const std::size_t piece = static_cast<std::size_t>(upper - boundaries_.begin()) - 1;
    double mass = prefix_[piece];
    if (c_tilde > boundaries_[piece])
      mass += gl_.integrate([&](double c) { return integrand(c); }, boundaries_[piece],
                            c_tilde);
    const double gain =
        mass - profile_.total(c_tilde) * match_probability(market_, c_tilde);
    return std::max(gain, 0.0);
  }

 private:
  double integrand(double c) const { return profile_.total(c) * density(market_, c); }

  const ProfitProfile& profile_;
  const SupplierMarket& market_;
  quad::GaussLegendre gl_;
  std::vector<double> boundaries_;
  std::vector<double> prefix_;
};

double expected_gain_profiled(const ProfitProfile& profile, const SupplierMarket& market,
                              double c_tilde, int nodes_per_piece) {
  return GainEvaluator(profile, market, nodes_per_piece)(c_tilde);
}

}  // namespace

double expected_gain(const model::ModelParams& params, const SupplierMarket& market,
                     const model::Firm& firm, double c_tilde, int nodes_per_piece) {
  return expected_gain_profiled(ProfitProfile(params, firm), market, c_tilde,
                                nodes_per_piece);
}

bool should_search(const model::ModelParams& params, const SupplierMarket& market,
                   const model::Firm& firm, double c_tilde) {
  return expected_gain(params, market, firm, c_tilde) / (1.0 - params.discount) >=
         market.search_cost;
}

namespace {

std::optional<double> threshold_profiled(const model::ModelParams& params,
                                         const ProfitProfile& profile,
                                         const SupplierMarket& market) {
  const double flow = 1.0 - params.discount;
  const GainEvaluator gain(profile, market, 64);
  auto residual = [&](double c) { return gain(c) / flow - market.search_cost; };

  if (residual(market.c_high) < 0.0) return std::nullopt;
  if (market.search_cost == 0.0) return market.c_low;

  // Bisection assumes the gain rises with c; scan for violations first.
  constexpr int kScan = 33;
  double prev = 0.0;
  double scale = 0.0;
  for (int i = 0; i < kScan; ++i) {
    const double c = market.c_low +
                     (market.c_high - market.c_low) * i / (kScan - 1);
    const double g = gain(c);
    scale = std::max(scale, std::abs(g));
    if (g < prev - 1e-9 * std::max(scale, 1.0))
      throw NonMonotoneGain("expected gain decreases in current efficiency");
    prev = g;
  }

  double lo = market.c_low, hi = market.c_high;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double r = residual(mid);
    if (std::abs(r) <= 1e-8 && hi - lo <= 1e-9 * (market.c_high - market.c_low))
      return mid;
    (r < 0.0 ? lo : hi) = mid;
    if (hi - lo < 4.0 * std::numeric_limits<double>::epsilon() * hi) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::optional<double> search_threshold(const model::ModelParams& params,
                                       const SupplierMarket& market,
                                       const model::Firm& firm) {
  return threshold_profiled(params, ProfitProfile(params, firm), market);
}

SearchEvent step_period(const model::ModelParams& params, const SupplierMarket& market,
                        model::Firm& firm, rng::Stream& stream) {
  SearchEvent event;
  if (!should_search(params, market, firm, firm.c_current)) return event;
  event.searched = true;
  event.cost_paid = market.search_cost;
  event.draw = sample_efficiency(market, stream);
  if (event.draw < firm.c_current) {
    firm.c_current = event.draw;
    event.switched = true;
  }
  return event;
}

namespace {

std::uint64_t id_hash(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

std::vector<PanelRow> simulate_panel(const model::ModelParams& params,
                                     const SupplierMarket& market,
                                     const std::vector<model::Firm>& firms,
                                     const SimConfig& config) {
  const int horizon = std::max(config.horizon, 1);
  std::vector<PanelRow> panel(firms.size() * static_cast<std::size_t>(horizon));

  util::parallel_for(firms.size(), config.threads, [&](std::size_t fi) {
    const ProfitProfile profile(params, firms[fi]);
    const std::optional<double> cutoff = threshold_profiled(params, profile, market);
    // Stream keyed by the firm's identity: scheduling and firm order never
    // change a firm's draw sequence.
    rng::Stream stream(config.seed, id_hash(firms[fi].id));
    double c = market.c_high;
    for (int t = 0; t < horizon; ++t) {
      bool searched = false, switched = false;
      if (cutoff && c > *cutoff) {
        searched = true;
        const double draw = sample_efficiency(market, stream);
        if (draw < c) {
          c = draw;
          switched = true;
        }
      }
      PanelRow& row = panel[fi * horizon + t];
      row.firm = static_cast<std::int32_t>(fi);
      row.period = t;
      row.c = c;
      row.searched = searched;
      row.switched = switched;
      row.profit = profile.total(c);
      row.scope = profile.scope_label(c);
    }
  });
  return panel;
}

std::vector<HeatmapCell> scope_heatmap(const model::ModelParams& params,
                                       const HeatmapConfig& config) {
  const model::Destination* first = params.find(config.dest_first);
  const model::Destination* second = params.find(config.dest_second);
  if (first == nullptr || second == nullptr)
    throw ConfigError("scope_heatmap: unknown destination id");

  const std::size_t nz = config.z_grid.size();
  const std::size_t nx = config.xi_grid.size();
  std::vector<HeatmapCell> cells(nz * nx);
  util::parallel_for(nz, config.threads, [&](std::size_t iz) {
    for (std::size_t ix = 0; ix < nx; ++ix) {
      model::Firm firm{"grid", config.z_grid[iz], config.xi_grid[ix], config.c_value};
      const bool in_first = model::solve_line(params, *first, firm).active;
      const bool in_second = model::solve_line(params, *second, firm).active;
      HeatmapCell& cell = cells[iz * nx + ix];
      cell.z = config.z_grid[iz];
      cell.xi = config.xi_grid[ix];
      cell.category = in_first && in_second ? ScopeCategory::both
                      : in_first           ? ScopeCategory::first_only
                      : in_second          ? ScopeCategory::second_only
                                           : ScopeCategory::none;
    }
  });
  return cells;
}

const char* category_name(ScopeCategory c) {
  switch (c) {
    case ScopeCategory::none: return "none";
    case ScopeCategory::first_only: return "first";
    case ScopeCategory::second_only: return "second";
    case ScopeCategory::both: return "both";
  }
  return "none";
}

}  // namespace tradelab::search
