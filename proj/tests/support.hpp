#pragma once

// Shared fixtures for the unit suites: the model potentials exercised across
// modules and a few small numeric helpers.

#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include <ptwell/errors.hpp>
#include <ptwell/potential.hpp>
#include <ptwell/types.hpp>

namespace ts {

using ptwell::Complex;

inline ptwell::Window wide_window() {
  return ptwell::Window{{-300.0, 300.0}, {-50.0, 50.0}};
}

// V0 = x^2, W = x.
inline ptwell::Potential harmonic(double e0 = 0.5) {
  return ptwell::Potential({{1.0, 2}}, {{1.0, 1}}, e0, wide_window());
}

// V0 = x^4, W = x^3.
inline ptwell::Potential quartic(double e0 = 0.3) {
  return ptwell::Potential({{1.0, 4}}, {{1.0, 3}}, e0, wide_window());
}

// V0 = x^2 + 0.1 x^4, W = x.
inline ptwell::Potential mixwell(double e0 = 0.2) {
  return ptwell::Potential({{1.0, 2}, {0.1, 4}}, {{1.0, 1}}, e0, wide_window());
}

// V0 = (x^2 - 1)^2: two wells, rejected by the single-well check at e0 = 0.5.
inline ptwell::Potential doublewell() {
  return ptwell::Potential({{1.0, 4}, {-2.0, 2}, {1.0, 0}}, {{1.0, 1}}, 0.5,
                           wide_window());
}

inline std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    out[static_cast<size_t>(i)] = a + (b - a) * i / (n - 1.0);
  return out;
}

// Least-squares slope of y against x.
inline double slope_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// Slope of log|y| against log x, for decay-rate fits.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx(x.size()), ly(y.size());
  for (size_t i = 0; i < x.size(); ++i) {
    lx[i] = std::log(x[i]);
    ly[i] = std::log(std::abs(y[i]));
  }
  return slope_fit(lx, ly);
}

// Averaged 4-point derivative of a holomorphic function on a circle of
// radius r: the mean of the real-direction and imaginary-direction central
// differences, accurate to O(r^2).
template <typename F>
Complex cderiv4(F&& f, Complex z0, double r) {
  const Complex dre = (f(z0 + r) - f(z0 - r)) / (2.0 * r);
  const Complex dim = (f(z0 + Complex(0.0, r)) - f(z0 - Complex(0.0, r))) /
                      Complex(0.0, 2.0 * r);
  return 0.5 * (dre + dim);
}

// Runs fn and reports which library error it raised, if any.
template <typename F>
std::optional<ptwell::ErrorCode> error_code_of(F&& fn) {
  try {
    std::forward<F>(fn)();
  } catch (const ptwell::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

}  // namespace ts
