#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace tradelab::rng {

// SplitMix64 finalizer; full-period mixing of a 64-bit counter.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Counter-based stream: each (seed, stream_id) pair owns an independent
// sequence, so per-firm streams give identical results under any scheduling.
class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t stream_id)
      : key_(mix64(mix64(seed) ^ (0x6a09e667f3bcc909ULL + stream_id))) {}

  std::uint64_t next_u64() { return mix64(key_ ^ mix64(counter_++)); }

  // Uniform on [0, 1), 53-bit mantissa; exact across platforms.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform on [lo, hi).
  double next_uniform(double lo, double hi) {
    return lo + (hi - lo) * next_double();
  }

  // Standard normal via Box-Muller on fresh uniforms (no cached spare, so
  // the draw count per call is fixed and streams stay reproducible).
  double next_normal() {
    double u1 = next_double();
    while (u1 <= 0.0) u1 = next_double();
    const double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

  double next_lognormal(double mu, double sigma) {
    return std::exp(mu + sigma * next_normal());
  }

  // Marsaglia-Tsang gamma; shape < 1 handled by the boost identity.
  double next_gamma(double shape) {
    if (shape < 1.0) {
      const double u = next_double();
      return next_gamma(shape + 1.0) * std::pow(u > 0.0 ? u : 1e-300, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x = next_normal();
      double v = 1.0 + c * x;
      if (v <= 0.0) continue;
      v = v * v * v;
      const double u = next_double();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  // Dirichlet with symmetric concentration over n categories.
  std::vector<double> next_dirichlet(double alpha, std::size_t n) {
    std::vector<double> w(n);
    double total = 0.0;
    for (auto& wi : w) {
      wi = next_gamma(alpha);
      total += wi;
    }
    if (total <= 0.0) {
      for (auto& wi : w) wi = 1.0 / static_cast<double>(n);
      return w;
    }
    for (auto& wi : w) wi /= total;
    return w;
  }

  // Index uniform on [0, n).
  std::size_t next_index(std::size_t n) {
    return static_cast<std::size_t>(next_double() * static_cast<double>(n)) % n;
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace tradelab::rng
