// Shared fixtures and independent oracles for the test suites. The oracles
// here deliberately avoid the library's own computation paths.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "tradelab/model.hpp"
#include "tradelab/rng.hpp"

namespace testutil {

// A validated parameter draw paired with one destination and a firm, kept
// inside ranges where profits are well scaled.
struct Draw {
  tradelab::model::ModelParams params;
  tradelab::model::Firm firm;
};

inline Draw random_draw(tradelab::rng::Stream& stream, bool with_fixed_cost = true) {
  using namespace tradelab::model;
  Draw d;
  d.params.rho = stream.next_uniform(1.5, 4.0);
  d.params.alpha = stream.next_uniform(0.2, 0.8);
  d.params.wage = stream.next_uniform(0.5, 2.0);
  d.params.f = stream.next_uniform(0.3, 3.0);
  d.params.discount = stream.next_uniform(0.8, 0.98);
  Destination dest;
  dest.id = "X";
  dest.zeta = stream.next_uniform(0.0, 0.9) / (d.params.rho - 1.0);
  dest.income = stream.next_uniform(0.5, 4.0);
  dest.price_index = stream.next_uniform(0.5, 2.0);
  dest.fixed_cost = with_fixed_cost ? stream.next_uniform(0.0, 0.05) : 0.0;
  d.params.destinations.push_back(dest);
  d.firm.id = "draw";
  d.firm.z = stream.next_uniform(0.5, 3.0);
  d.firm.xi = stream.next_uniform(0.5, 3.0);
  d.firm.c_current = stream.next_uniform(0.5, 2.0);
  validate_params(d.params);
  return d;
}

// Central-difference Hessian of the substituted profit objective in (x, q).
inline Eigen::Matrix2d objective_hessian(const tradelab::model::ModelParams& params,
                                         const tradelab::model::Destination& dest,
                                         const tradelab::model::Firm& firm, double x,
                                         double q) {
  auto f = [&](double xx, double qq) {
    return tradelab::model::line_objective(params, dest, firm, xx, qq);
  };
  const double hx = 1e-5 * x;
  const double hq = 1e-5 * q;
  Eigen::Matrix2d h;
  h(0, 0) = (f(x + hx, q) - 2.0 * f(x, q) + f(x - hx, q)) / (hx * hx);
  h(1, 1) = (f(x, q + hq) - 2.0 * f(x, q) + f(x, q - hq)) / (hq * hq);
  h(0, 1) = h(1, 0) = (f(x + hx, q + hq) - f(x + hx, q - hq) - f(x - hx, q + hq) +
                       f(x - hx, q - hq)) /
                      (4.0 * hx * hq);
  return h;
}

// Composite trapezoid rule, Kahan-compensated.
template <typename F>
double trapezoid(F&& f, double a, double b, long n) {
  const double h = (b - a) / static_cast<double>(n);
  double sum = 0.5 * (f(a) + f(b));
  double comp = 0.0;
  for (long i = 1; i < n; ++i) {
    const double y = f(a + h * static_cast<double>(i)) - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum * h;
}

// Dummy-variable least squares: regress y on [X, group dummies] and return
// the X coefficients. Independent oracle for the within-estimator.
inline Eigen::VectorXd dummy_ols(const Eigen::VectorXd& y, const Eigen::MatrixXd& X,
                                 const std::vector<std::vector<int>>& fe_groups) {
  const long n = y.size();
  long extra = 0;
  std::vector<int> sizes;
  for (const auto& groups : fe_groups) {
    int g = 0;
    for (const int label : groups) g = std::max(g, label + 1);
    sizes.push_back(g);
    extra += g;
  }
  Eigen::MatrixXd design(n, X.cols() + extra);
  design.leftCols(X.cols()) = X;
  long offset = X.cols();
  for (std::size_t dim = 0; dim < fe_groups.size(); ++dim) {
    Eigen::MatrixXd dummies = Eigen::MatrixXd::Zero(n, sizes[dim]);
    for (long i = 0; i < n; ++i) dummies(i, fe_groups[dim][i]) = 1.0;
    design.middleCols(offset, sizes[dim]) = dummies;
    offset += sizes[dim];
  }
  // Overlapping dummy blocks are collinear; the minimum-norm solution still
  // pins the X coefficients uniquely.
  const Eigen::VectorXd full =
      design.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(y);
  return full.head(X.cols());
}

// Textbook one-way cluster sandwich with the agreed finite-sample factor.
inline Eigen::MatrixXd one_way_cluster_oracle(const Eigen::VectorXd& u,
                                              const Eigen::MatrixXd& X,
                                              const std::vector<int>& labels) {
  const long n = X.rows();
  const long k = X.cols();
  const Eigen::MatrixXd bread = (X.transpose() * X).inverse();
  int g_max = 0;
  for (const int l : labels) g_max = std::max(g_max, l + 1);
  std::vector<Eigen::VectorXd> scores(g_max, Eigen::VectorXd::Zero(k));
  std::vector<bool> seen(g_max, false);
  for (long i = 0; i < n; ++i) {
    scores[labels[i]] += u(i) * X.row(i).transpose();
    seen[labels[i]] = true;
  }
  int g = 0;
  Eigen::MatrixXd meat = Eigen::MatrixXd::Zero(k, k);
  for (int i = 0; i < g_max; ++i) {
    if (!seen[i]) continue;
    ++g;
    meat += scores[i] * scores[i].transpose();
  }
  const double c = static_cast<double>(g) / (g - 1.0) * static_cast<double>(n - 1) /
                   static_cast<double>(n - k);
  return c * bread * meat * bread;
}

// HC1 heteroskedasticity-robust sandwich.
inline Eigen::MatrixXd hc1_oracle(const Eigen::VectorXd& u, const Eigen::MatrixXd& X) {
  const long n = X.rows();
  const long k = X.cols();
  const Eigen::MatrixXd bread = (X.transpose() * X).inverse();
  Eigen::MatrixXd meat = Eigen::MatrixXd::Zero(k, k);
  for (long i = 0; i < n; ++i)
    meat += u(i) * u(i) * X.row(i).transpose() * X.row(i);
  return static_cast<double>(n) / static_cast<double>(n - k) * bread * meat * bread;
}

}  // namespace testutil
