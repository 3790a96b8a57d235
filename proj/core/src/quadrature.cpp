#include "detail/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace ptwell::detail {

namespace {

QuadRule compute_gauss_legendre(int n) {
  QuadRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    // Chebyshev-like initial guess, then Newton on P_n(x).
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[n - 1 - i] = x;  // guesses run from +1 side; store ascending
    rule.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

}  // namespace

const QuadRule& gauss_legendre(int n) {
  static std::map<int, QuadRule> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gauss_legendre(n)).first;
  return it->second;
}

QuadRule chebyshev_first(int n) {
  QuadRule rule;
  rule.nodes.resize(n);
  rule.weights.assign(n, std::numbers::pi / n);
  for (int i = 1; i <= n; ++i)
    rule.nodes[n - i] = std::cos((2.0 * i - 1.0) / (2.0 * n) * std::numbers::pi);
  return rule;
}

QuadRule chebyshev_second(int n) {
  QuadRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 1; i <= n; ++i) {
    const double th = std::numbers::pi * i / (n + 1.0);
    rule.nodes[n - i] = std::cos(th);
    const double s = std::sin(th);
    rule.weights[n - i] = std::numbers::pi / (n + 1.0) * s * s;
  }
  return rule;
}

Complex continue_sqrt(Complex value, Complex prev, bool* ambiguous) {
  const Complex r = std::sqrt(value);
  const double dp = std::abs(r - prev);
  const double dm = std::abs(-r - prev);
  if (ambiguous) {
    const double scale = std::max({dp, dm, 1e-300});
    *ambiguous = std::abs(dp - dm) <= 1e-3 * scale;
  }
  return dp <= dm ? r : -r;
}

}  // namespace ptwell::detail
