#include "tradelab/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tradelab/errors.hpp"

namespace tradelab::model {

namespace {

// Marginal-revenue scale psi = (rho-1)/rho * y^(1/rho) * P.
double revenue_scale(const ModelParams& p, const Destination& d) {
  return (p.rho - 1.0) / p.rho * std::pow(d.income, 1.0 / p.rho) * d.price_index;
}

}  // namespace

const Destination* ModelParams::find(const std::string& id) const {
  for (const auto& d : destinations)
    if (d.id == id) return &d;
  return nullptr;
}

const ModelParams& validate_params(const ModelParams& params) {
  if (!(params.rho > 1.0))
    throw InvalidParameter("rho", params.rho, "rho > 1");
  if (!(params.alpha > 0.0 && params.alpha < 1.0))
    throw InvalidParameter("alpha", params.alpha, "0 < alpha < 1");
  if (!(params.wage > 0.0))
    throw InvalidParameter("wage", params.wage, "wage > 0");
  if (!(params.f > 0.0))
    throw InvalidParameter("f", params.f, "f > 0");
  if (!(params.discount > 0.0 && params.discount < 1.0))
    throw InvalidParameter("discount", params.discount, "0 < discount < 1");
  for (const auto& d : params.destinations) {
    if (!(d.zeta >= 0.0))
      throw InvalidParameter(d.id + ".zeta", d.zeta, "zeta >= 0");
    if (!((params.rho - 1.0) * d.zeta < 1.0))
      throw InvalidParameter(d.id + ".zeta", d.zeta, "(rho-1)*zeta < 1");
    if (!(d.income > 0.0))
      throw InvalidParameter(d.id + ".income", d.income, "income > 0");
    if (!(d.price_index > 0.0))
      throw InvalidParameter(d.id + ".price_index", d.price_index, "price_index > 0");
    if (!(d.fixed_cost >= 0.0))
      throw InvalidParameter(d.id + ".fixed_cost", d.fixed_cost, "fixed_cost >= 0");
    if (d.income_group == IncomeGroup::domestic && d.fixed_cost != 0.0)
      throw InvalidParameter(d.id + ".fixed_cost", d.fixed_cost,
                             "domestic market has fixed_cost = 0");
  }
  return params;
}

double marginal_cost(const ModelParams& params, double z, double c) {
  if (!(z > 0.0)) throw DomainError("marginal_cost: z must be positive");
  if (!(c > 0.0)) throw DomainError("marginal_cost: c must be positive");
  const double a = params.alpha;
  const double cobb_douglas_scale = std::pow(a, a) * std::pow(1.0 - a, 1.0 - a);
  return (1.0 / z) * (1.0 / cobb_douglas_scale) * std::pow(params.wage, a) *
         std::pow(c, 1.0 - a);
}

LineSolution solve_line_at(const ModelParams& params, const Destination& dest,
                           const Firm& firm, double c) {
  const double rho = params.rho;
  const double zeta = dest.zeta;
  const double C = marginal_cost(params, firm.z, c);
  const double psi = revenue_scale(params, dest);

  LineSolution sol;
  if (zeta == 0.0) {
    // Quality FOC degenerates: corner at lambda = 0, standard CES quantity.
    sol.quality = 0.0;
    sol.quantity = std::pow(psi / C, rho);
    sol.price = rho / (rho - 1.0) * C;
    sol.profit = (sol.price - C) * sol.quantity - dest.fixed_cost;
  } else {
    // Interior solution of the two FOCs. With D = (rho-1)zeta - 1 < 0:
    //   lambda* = [psi^-1 (f/(xi zeta))^(1/rho)]^(rho/D) C^((rho-1)/D)
    //   x*      = f lambda* / (xi zeta C)
    const double D = (rho - 1.0) * zeta - 1.0;
    const double quality_cost = params.f / firm.xi;
    const double lambda =
        std::pow(psi, -rho / D) * std::pow(quality_cost / zeta, 1.0 / D) *
        std::pow(C, (rho - 1.0) / D);
    const double x = quality_cost * lambda / (zeta * C);
    sol.quality = lambda;
    sol.quantity = x;
    sol.price = std::pow(x, -1.0 / rho) * std::pow(dest.income, 1.0 / rho) *
                dest.price_index * std::pow(lambda, (rho - 1.0) * zeta / rho);
    sol.profit = (sol.price - C) * x - quality_cost * lambda - dest.fixed_cost;
  }

  sol.active = sol.profit >= 0.0;
  if (!sol.active) {
    sol = LineSolution{};  // zeroed, profit 0, inactive
  }
  return sol;
}

LineSolution solve_line(const ModelParams& params, const Destination& dest,
                        const Firm& firm) {
  return solve_line_at(params, dest, firm, firm.c_current);
}

double line_objective(const ModelParams& params, const Destination& dest,
                      const Firm& firm, double quantity, double quality) {
  const double rho = params.rho;
  const double zeta = dest.zeta;
  const double C = marginal_cost(params, firm.z, firm.c_current);
  if (quantity <= 0.0) return 0.0 - params.f / firm.xi * quality;
  const double revenue = std::pow(quantity, (rho - 1.0) / rho) *
                         std::pow(dest.income, 1.0 / rho) * dest.price_index *
                         std::pow(quality, (rho - 1.0) * zeta / rho);
  return revenue - C * quantity - params.f / firm.xi * quality;
}

namespace {

struct GridAxis {
  double log_center;
  double log_lo;
  double log_hi;
};

GridAxis make_axis(double center) {
  const double c = std::clamp(center, 1e-12, 1e12);
  const double lc = std::log(c);
  constexpr double kDecades = 4.0 * 2.302585092994046;  // +-4 orders of magnitude
  return {lc, lc - kDecades, lc + kDecades};
}

}  // namespace

OracleSolution brute_force_profit_max(const ModelParams& params, const Destination& dest,
                                      const Firm& firm, int grid_n) {
  grid_n = std::max(grid_n, 400);
  const double rho = params.rho;
  const double zeta = dest.zeta;
  const double C = marginal_cost(params, firm.z, firm.c_current);
  const double psi = revenue_scale(params, dest);

  // Grid center: the stationary point of the FOCs when it exists; for the
  // zeta = 0 corner center quality on an arbitrary unit scale (the quality
  // axis only matters through its lower edge there).
  double center_x, center_lambda;
  if (zeta == 0.0) {
    center_x = std::pow(psi / C, rho);
    center_lambda = 1.0;
  } else {
    const double D = (rho - 1.0) * zeta - 1.0;
    const double quality_cost = params.f / firm.xi;
    if (std::abs(D) < 1e-12) {
      center_x = std::pow(psi / C, rho);
      center_lambda = 1.0;
    } else {
      center_lambda = std::pow(psi, -rho / D) *
                      std::pow(quality_cost / zeta, 1.0 / D) *
                      std::pow(C, (rho - 1.0) / D);
      center_x = quality_cost * center_lambda / (zeta * C);
    }
  }

  const GridAxis ax = make_axis(center_x);
  const GridAxis al = make_axis(center_lambda);
  const double step_x = (ax.log_hi - ax.log_lo) / (grid_n - 1);
  const double step_l = (al.log_hi - al.log_lo) / (grid_n - 1);

  auto objective = [&](double lx, double ll) {
    return line_objective(params, dest, firm, std::exp(lx), std::exp(ll));
  };

  double best = -std::numeric_limits<double>::infinity();
  int best_i = 0, best_j = 0;
  for (int i = 0; i < grid_n; ++i) {
    const double lx = ax.log_lo + step_x * i;
    for (int j = 0; j < grid_n; ++j) {
      const double v = objective(lx, al.log_lo + step_l * j);
      if (v > best) {
        best = v;
        best_i = i;
        best_j = j;
      }
    }
  }

  OracleSolution out;
  // Monotone improvement into the upper grid edge means the objective is
  // unbounded along that direction (superlinear revenue beats linear cost).
  if (best_i == grid_n - 1 || (zeta > 0.0 && best_j == grid_n - 1)) {
    out.unbounded = true;
    return out;
  }
  // The grid window can miss superlinear growth that only dominates far
  // outside it. Along the diagonal ray x = q = e^r the per-scale profit
  // pi/e^r either decays (bounded problem) or grows without bound, so three
  // probes decide it numerically.
  if (zeta > 0.0) {
    auto per_scale = [&](double r) { return objective(r, r) * std::exp(-r); };
    const double p40 = per_scale(40.0);
    const double p80 = per_scale(80.0);
    const double p120 = per_scale(120.0);
    if (p120 > p80 && p80 > p40) {
      out.unbounded = true;
      return out;
    }
  }

  // Also consider the lambda = 0 boundary problem (1-D in x).
  auto corner_obj = [&](double lx) {
    const double x = std::exp(lx);
    if (zeta > 0.0) return -C * x;  // zero revenue at lambda = 0 when quality matters
    return objective(lx, al.log_lo);
  };

  // Coordinate descent with golden-section line searches in log space.
  constexpr double kGolden = 0.6180339887498949;
  auto golden = [&](auto&& f, double lo, double hi) {
    double a = lo, b = hi;
    double x1 = b - kGolden * (b - a);
    double x2 = a + kGolden * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > 1e-13) {
      if (f1 < f2) {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + kGolden * (b - a);
        f2 = f(x2);
      } else {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - kGolden * (b - a);
        f1 = f(x1);
      }
    }
    return 0.5 * (a + b);
  };

  double lx = ax.log_lo + step_x * best_i;
  double ll = al.log_lo + step_l * best_j;
  for (int pass = 0; pass < 200; ++pass) {
    const double lx_new = golden([&](double v) { return objective(v, ll); },
                                 lx - 2.0 * step_x, lx + 2.0 * step_x);
    const double ll_new = (zeta == 0.0)
                              ? ll
                              : golden([&](double v) { return objective(lx_new, v); },
                                       ll - 2.0 * step_l, ll + 2.0 * step_l);
    const double moved = std::abs(lx_new - lx) + std::abs(ll_new - ll);
    lx = lx_new;
    ll = ll_new;
    if (moved < 1e-10) break;
  }

  double x_star = std::exp(lx);
  double lambda_star = (zeta == 0.0) ? 0.0 : std::exp(ll);
  double profit = line_objective(params, dest, firm, x_star, lambda_star) - dest.fixed_cost;

  // lambda = 0 corner can dominate when quality is prohibitively costly.
  if (zeta == 0.0) {
    const double lx_corner = golden(corner_obj, ax.log_lo, ax.log_hi);
    const double corner_profit =
        line_objective(params, dest, firm, std::exp(lx_corner), 0.0) - dest.fixed_cost;
    if (corner_profit > profit) {
      x_star = std::exp(lx_corner);
      lambda_star = 0.0;
      profit = corner_profit;
    }
  }

  out.line.quantity = x_star;
  out.line.quality = lambda_star;
  out.line.price = std::pow(x_star, -1.0 / rho) * std::pow(dest.income, 1.0 / rho) *
                   dest.price_index *
                   (zeta == 0.0 ? 1.0 : std::pow(lambda_star, (rho - 1.0) * zeta / rho));
  out.line.profit = profit;
  out.line.active = profit >= 0.0;
  if (!out.line.active) out.line = LineSolution{};
  return out;
}

double cost_elasticity(const ModelParams& params, const Destination& dest) {
  const double D = (params.rho - 1.0) * dest.zeta - 1.0;
  return ((params.rho - 1.0) / D - 1.0) * (1.0 - params.alpha);
}

std::vector<std::string> export_scope(const ModelParams& params, const Firm& firm) {
  std::vector<std::string> scope;
  for (const auto& d : params.destinations) {
    if (solve_line(params, d, firm).active) scope.push_back(d.id);
  }
  return scope;
}

}  // namespace tradelab::model
