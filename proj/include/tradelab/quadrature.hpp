#pragma once

#include <cmath>
#include <vector>

namespace tradelab::quad {

// Gauss-Legendre nodes and weights on [-1, 1], Newton iteration on the
// Legendre recurrence. n up to a few thousand is fine.
class GaussLegendre {
 public:
  explicit GaussLegendre(int n) : nodes_(n), weights_(n) {
    for (int i = 0; i < n; ++i) {
      // Chebyshev-like initial guess for the i-th root.
      double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-15) break;
      }
      nodes_[i] = x;
      weights_[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
  }

  template <typename F>
  double integrate(F&& f, double a, double b) const {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double total = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i)
      total += weights_[i] * f(mid + half * nodes_[i]);
    return half * total;
  }

  int size() const { return static_cast<int>(nodes_.size()); }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

}  // namespace tradelab::quad
