#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tradelab/model.hpp"
#include "tradelab/rng.hpp"

namespace tradelab::search {

enum class DistFamily { uniform, truncated_lognormal };

struct SupplierMarket {
  DistFamily family = DistFamily::uniform;
  double c_low = 1.0;
  double c_high = 2.0;
  double search_cost = 0.0;  // F, paid per search
  double log_mu = 0.0;       // truncated-lognormal shape
  double log_sigma = 1.0;
};

// Bounds ordered, positive support, density integrates to 1 (checked by
// 64-node quadrature to 1e-10).
void validate_market(const SupplierMarket& market);

double density(const SupplierMarket& market, double c);

// G(c); throws DomainError outside the support.
double match_probability(const SupplierMarket& market, double c);

// Inverse-CDF draw from g.
double sample_efficiency(const SupplierMarket& market, rng::Stream& stream);

// Per-firm reduced form of the static problem: each line's net profit is
// coef * c^expo - fixed_cost while active, and the activity cutoff in c is
// closed-form. Makes profit evaluation along the c axis a single pow per line.
class ProfitProfile {
 public:
  ProfitProfile(const model::ModelParams& params, const model::Firm& firm);

  double total(double c) const;
  int scope_count(double c) const;               // active non-domestic lines
  std::string scope_label(double c) const;       // ids joined with '+'
  std::vector<bool> active_lines(double c) const;

  // Activity cutoffs strictly inside (lo, hi), sorted ascending.
  std::vector<double> breakpoints_within(double lo, double hi) const;

 private:
  struct Line {
    std::string id;
    bool domestic;
    double coef;
    double expo;
    double fixed_cost;
    double c_cut;  // active iff c <= c_cut
  };
  std::vector<Line> lines_;
};

// Sum over all destinations (domestic included) of the optimal line profit at
// supplier efficiency c.
double total_profit(const model::ModelParams& params, const model::Firm& firm, double c);

// Expected discounted flow gain of one search draw at current efficiency
// c_tilde: integral over better draws of the profit improvement, times match
// odds; piecewise Gauss-Legendre with nodes_per_piece nodes between activity
// cutoffs. Throws DomainError outside the support.
double expected_gain(const model::ModelParams& params, const SupplierMarket& market,
                     const model::Firm& firm, double c_tilde, int nodes_per_piece = 64);

// Search condition: expected_gain / (1 - discount) >= search_cost.
bool should_search(const model::ModelParams& params, const SupplierMarket& market,
                   const model::Firm& firm, double c_tilde);

// Indifference efficiency by bisection to |residual| <= 1e-8. nullopt means
// the firm never searches, even at c_high. A coarse scan guards the
// monotonicity bisection relies on and throws NonMonotoneGain on violation.
std::optional<double> search_threshold(const model::ModelParams& params,
                                       const SupplierMarket& market,
                                       const model::Firm& firm);

struct SearchEvent {
  bool searched = false;
  double draw = 0.0;      // meaningful only when searched
  bool switched = false;
  double cost_paid = 0.0;
};

// One period: search when the condition holds (pay F, draw, keep the better
// supplier), otherwise no change.
SearchEvent step_period(const model::ModelParams& params, const SupplierMarket& market,
                        model::Firm& firm, rng::Stream& stream);

struct SimConfig {
  int n_firms = 1000;
  int horizon = 100;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

struct PanelRow {
  std::int32_t firm = 0;  // index into the firms vector
  std::int32_t period = 0;
  double c = 0.0;
  bool searched = false;
  bool switched = false;
  double profit = 0.0;  // model profit; search costs reported via `searched`
  std::string scope;
};

// T-period simulation with per-firm counter-based streams; all firms start at
// c_high. Row order is (firm, period); identical seeds give identical panels
// no matter the thread count.
std::vector<PanelRow> simulate_panel(const model::ModelParams& params,
                                     const SupplierMarket& market,
                                     const std::vector<model::Firm>& firms,
                                     const SimConfig& config);

enum class ScopeCategory { none = 0, first_only = 1, second_only = 2, both = 3 };

struct HeatmapConfig {
  std::vector<double> z_grid;
  std::vector<double> xi_grid;
  double c_value = 1.0;
  std::string dest_first;   // e.g. the low-quality-taste market
  std::string dest_second;  // e.g. the high-quality-taste market
  unsigned threads = 1;
};

struct HeatmapCell {
  double z = 0.0;
  double xi = 0.0;
  ScopeCategory category = ScopeCategory::none;
};

// Export-scope category per (z, xi) grid cell at a fixed supplier efficiency.
std::vector<HeatmapCell> scope_heatmap(const model::ModelParams& params,
                                       const HeatmapConfig& config);

const char* category_name(ScopeCategory c);

}  // namespace tradelab::search
