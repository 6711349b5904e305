#pragma once

#include <string>
#include <vector>

namespace tradelab::model {

enum class IncomeGroup { advanced, emerging, domestic };

struct Destination {
  std::string id;
  double zeta = 0.0;         // taste for quality, zeta < 1/(rho-1)
  double income = 1.0;       // market size y_d
  double price_index = 1.0;  // quality-adjusted index P_d, exogenous
  double fixed_cost = 0.0;   // per-period market entry cost F_d
  IncomeGroup income_group = IncomeGroup::emerging;
};

struct ModelParams {
  double rho = 2.0;       // elasticity of substitution, > 1
  double alpha = 0.5;     // labor share in (0, 1)
  double wage = 1.0;
  double f = 1.0;         // quality cost scale
  double discount = 0.9;  // beta in (0, 1)
  std::vector<Destination> destinations;

  const Destination* find(const std::string& id) const;
};

struct Firm {
  std::string id;
  double z = 1.0;   // process productivity
  double xi = 1.0;  // product productivity (cheap quality)
  double c_current = 1.0;  // matched supplier efficiency
};

struct LineSolution {
  double quality = 0.0;
  double quantity = 0.0;
  double price = 0.0;
  double profit = 0.0;  // net of the market fixed cost
  bool active = false;
};

struct OracleSolution {
  LineSolution line;
  bool unbounded = false;
};

// Throws InvalidParameter on the first violated constraint. Enforces the
// strict second-order bound (rho-1)*zeta < 1 for every destination.
const ModelParams& validate_params(const ModelParams& params);

// Unit production cost (1/z) * w^alpha * c^(1-alpha) / (alpha^alpha (1-alpha)^(1-alpha)).
double marginal_cost(const ModelParams& params, double z, double c);

// Closed-form per-line optimum: quality and quantity from the two first-order
// conditions, CES corner at zeta = 0, participation by nonnegative net profit.
LineSolution solve_line(const ModelParams& params, const Destination& dest, const Firm& firm);

// As solve_line but with an explicit supplier efficiency instead of firm.c_current.
LineSolution solve_line_at(const ModelParams& params, const Destination& dest,
                           const Firm& firm, double c);

// Grid-then-polish maximization of the substituted profit objective. Log-spaced
// grid of grid_n x grid_n points spanning +-4 decades around the closed form,
// refined by coordinate descent to relative tolerance 1e-10. Reports unbounded
// when the grid maximum keeps improving into the upper boundary.
OracleSolution brute_force_profit_max(const ModelParams& params, const Destination& dest,
                                      const Firm& firm, int grid_n = 400);

// Substituted objective pi(x, lambda) before the participation decision,
// gross of the fixed cost. Exposed for derivative checks.
double line_objective(const ModelParams& params, const Destination& dest,
                      const Firm& firm, double quantity, double quality);

// d ln x* / d ln c = ((rho-1)/((rho-1)zeta - 1) - 1) * (1-alpha).
double cost_elasticity(const ModelParams& params, const Destination& dest);

// Ids of destinations with an active line at the firm's current supplier.
std::vector<std::string> export_scope(const ModelParams& params, const Firm& firm);

}  // namespace tradelab::model
