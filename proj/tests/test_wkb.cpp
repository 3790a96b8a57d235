#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include <ptwell/turning.hpp>
#include <ptwell/wkb.hpp>

#include "support.hpp"

using ptwell::Complex;
using ptwell::ErrorCode;
using ptwell::PhaseFunction;
using ptwell::Side;
using ptwell::phase_at;
using ptwell::transport_coeffs;
using ptwell::wkb_eval;
using ptwell::wkb_residual_order;

namespace {

// integral from 1 to x of sqrt(t^2 - 1) dt, for the harmonic well at E = 1.
double harm_tail(double x) {
  return 0.5 * x * std::sqrt(x * x - 1.0) - 0.5 * std::log(x + std::sqrt(x * x - 1.0));
}

std::vector<double> geomspace(double a, double b, int n) {
  std::vector<double> out(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    out[static_cast<size_t>(i)] = a * std::pow(b / a, i / (n - 1.0));
  return out;
}

}  // namespace

TEST_SUITE("wkb") {

TEST_CASE("the phase has the harmonic closed form") {
  auto harm = ts::harmonic();
  const auto tp = ptwell::find_turning_pair(harm, 1.0, 0.0);
  PhaseFunction right(harm, 1.0, 0.0, tp, Side::Right);

  CHECK(std::abs(right.eval(right.base_point())) < 1e-14);
  CHECK(std::abs(right.eval(2.0) - Complex(0.0, harm_tail(2.0))) < 1e-11);
  CHECK(std::abs(right.eval(3.0) - Complex(0.0, harm_tail(3.0))) < 1e-11);

  // The even well makes the left phase the mirror of the right one.
  CHECK(std::abs(phase_at(harm, 1.0, 0.0, tp, -2.0, Side::Left) -
                 phase_at(harm, 1.0, 0.0, tp, 2.0, Side::Right)) < 1e-12);
}

TEST_CASE("the phase derivative solves the eiconal equation") {
  auto mix = ts::mixwell(0.5);
  const Complex e(0.5, 0.0);
  const double eps = 0.1;
  const auto tp = ptwell::find_turning_pair(mix, e, eps);
  const double fd_step = 1e-3;

  for (Side side : {Side::Right, Side::Left}) {
    PhaseFunction ph(mix, e, eps, tp, side);
    const double dir = side == Side::Right ? 1.0 : -1.0;
    for (double r : ts::linspace(1.3, 4.0, 50)) {
      for (double off : {0.0, 0.25}) {
        const Complex z(dir * r, off);
        const Complex der = ph.derivative(z);
        // Five-point stencil of eval() against the analytic derivative.
        const Complex fd = (ph.eval(z - 2.0 * fd_step) - 8.0 * ph.eval(z - fd_step) +
                            8.0 * ph.eval(z + fd_step) - ph.eval(z + 2.0 * fd_step)) /
                           (12.0 * fd_step);
        CHECK(std::abs(fd - der) < 1e-9 * (1.0 + std::abs(der)));
        const Complex v = mix.eval(z, eps);
        CHECK(std::abs(der * der + (v - e)) < 1e-10 * (1.0 + std::abs(v - e)));
        CHECK(std::abs(ph.sqrt_at(z) * ph.sqrt_at(z) - (v - e)) <
              1e-12 * (1.0 + std::abs(v - e)));
      }
    }
  }
}

TEST_CASE("the leading amplitude is (phi')^(-1/2)") {
  auto harm = ts::harmonic();
  const auto tp = ptwell::find_turning_pair(harm, 1.0, 0.0);
  const std::vector<double> grid{2.0, 3.0, 5.0, 8.0};
  const auto exp2 = transport_coeffs(harm, 1.0, 0.0, tp, 2, grid);

  REQUIRE(exp2.a_k_values.size() == 3);
  REQUIRE(exp2.f_k_values.size() == 3);
  // |a_0(2)| = |phi'(2)|^(-1/2) = 3^(-1/4).
  CHECK(std::abs(std::abs(exp2.a_k_values[0][0]) - std::pow(3.0, -0.25)) < 1e-12);
  for (size_t i = 0; i < grid.size(); ++i) {
    CHECK(std::abs(exp2.f_k_values[0][i] - Complex(1.0, 0.0)) < 1e-14);
    for (int k = 0; k <= 2; ++k)
      CHECK(std::abs(exp2.a_k_values[static_cast<size_t>(k)][i] -
                     exp2.f_k_values[static_cast<size_t>(k)][i] * exp2.a_k_values[0][i]) <
            1e-13);
  }
}

TEST_CASE("the evaluated wave has the exact decaying magnitude") {
  auto harm = ts::harmonic();
  const auto tp = ptwell::find_turning_pair(harm, 1.0, 0.0);
  PhaseFunction right(harm, 1.0, 0.0, tp, Side::Right);
  const auto exp0 = transport_coeffs(harm, 1.0, 0.0, tp, 0, {2.0, 3.0});

  // At order 0, |u(x)| = |a_0(x)| exp(-tail(x)/h) exactly.
  const double c = -0.25 * std::log(3.0);
  const auto v1 = wkb_eval(exp0, right, 2.0, 0.1);
  CHECK(std::abs(v1.log_abs - (c - harm_tail(2.0) / 0.1)) < 1e-9);
  CHECK(std::abs(v1.log_abs - (-11.010371663231717)) < 1e-9);
  CHECK(std::abs(std::abs(v1.value) - std::exp(v1.log_abs)) <
        1e-12 * std::exp(v1.log_abs));

  // Halving h doubles the exponent on the nose.
  const auto v2 = wkb_eval(exp0, right, 2.0, 0.05);
  CHECK(std::abs((v2.log_abs - c) - 2.0 * (v1.log_abs - c)) < 1e-12);
}

TEST_CASE("the Schroedinger residual improves like h^(N+2)") {
  auto harm = ts::harmonic();
  const auto tp = ptwell::find_turning_pair(harm, 1.0, 0.0);
  const std::vector<double> ladder{0.1, 0.05, 0.025};
  for (int n = 0; n <= 2; ++n) {
    const auto res = wkb_residual_order(harm, 1.0, 0.0, tp, n, ladder);
    REQUIRE(res.orders.size() == 2);
    CHECK(!res.floor_reached);
    for (double p : res.orders) {
      CAPTURE(n);
      CHECK(p > n + 2 - 0.5);
      CHECK(p < n + 2 + 0.5);
    }
  }
}

TEST_CASE("the transport integrator converges at fourth order") {
  auto harm = ts::harmonic();
  const auto tp = ptwell::find_turning_pair(harm, 1.0, 0.0);
  const std::vector<double> grid{2.0, 3.0, 5.0, 8.0};
  Complex f2[3];
  long n = 4096;
  for (int i = 0; i < 3; ++i, n *= 2) {
    const auto e = transport_coeffs(harm, 1.0, 0.0, tp, 2, grid, -1.0, 60.0, n);
    f2[i] = e.f_k_values[2][0];
    CHECK(std::isnan(e.step_check));  // fixed step skips the halving check
  }
  const double d12 = std::abs(f2[1] - f2[0]);
  const double d24 = std::abs(f2[2] - f2[1]);
  CHECK(d12 / d24 > 8.0);
  CHECK(d12 / d24 < 32.0);

  // The automatic step reports its convergence check instead.
  const auto autoe = transport_coeffs(harm, 1.0, 0.0, tp, 1, {2.0, 3.0});
  CHECK(autoe.delta > 0.0);
  CHECK(autoe.step_check < 1e-7);
}

TEST_CASE("amplitudes decay with the expected powers at infinity") {
  // For V ~ x^2: phi' ~ x gives a_0 ~ x^(-1/2), and each transport order
  // costs two more powers: a_1 ~ x^(-5/2), a_2 ~ x^(-9/2).
  auto harm = ts::harmonic();
  const auto tp = ptwell::find_turning_pair(harm, 1.0, 0.0);
  const auto grid = geomspace(2.0, 25.0, 40);
  const auto e = transport_coeffs(harm, 1.0, 0.0, tp, 2, grid, -1.0, 60.0);

  std::vector<double> absval(grid.size());
  auto fitted = [&](const std::vector<Complex>& vals) {
    for (size_t i = 0; i < grid.size(); ++i) absval[i] = std::abs(vals[i]);
    return ts::loglog_slope(grid, absval);
  };
  CHECK(std::abs(fitted(e.a_k_values[0]) - (-0.5)) < 0.15 * 0.5);
  CHECK(std::abs(fitted(e.a_k_values[1]) - (-2.5)) < 0.15 * 2.5);
  CHECK(std::abs(fitted(e.a_k_values[2]) - (-4.5)) < 0.15 * 4.5);
  CHECK(std::abs(fitted(e.f_k_values[1]) - (-2.0)) < 0.15 * 2.0);
  CHECK(std::abs(fitted(e.f_k_values[2]) - (-4.0)) < 0.15 * 4.0);

  // Anchor-shift estimates: pushing x_max out would change f_k(grid) little.
  REQUIRE(e.est_tail.size() == 2);
  CHECK(e.est_tail[0] < 1e-3);
  CHECK(e.est_tail[1] < 1e-6);
}

TEST_CASE("bad expansion requests are rejected") {
  auto harm = ts::harmonic();
  const auto tp = ptwell::find_turning_pair(harm, 1.0, 0.0);

  // Integrating the phase from base 1 to -2 would cross the other endpoint.
  CHECK(ts::error_code_of([&] { phase_at(harm, 1.0, 0.0, tp, -2.0, Side::Right); }) ==
        ErrorCode::PathThroughTurningPoint);

  CHECK(ts::error_code_of([&] {
          transport_coeffs(harm, 1.0, 0.0, tp, -1, {2.0, 3.0});
        }) == ErrorCode::BadInput);
  CHECK(ts::error_code_of([&] { transport_coeffs(harm, 1.0, 0.0, tp, 1, {}); }) ==
        ErrorCode::BadInput);
  CHECK(ts::error_code_of([&] {
          transport_coeffs(harm, 1.0, 0.0, tp, 1, {3.0, 2.0});
        }) == ErrorCode::BadInput);
  // Grid point before the offset gate at beta + delta0.
  CHECK(ts::error_code_of([&] {
          transport_coeffs(harm, 1.0, 0.0, tp, 1, {1.2, 3.0}, 0.5);
        }) == ErrorCode::BadInput);
  // Grid point past the anchor.
  CHECK(ts::error_code_of([&] {
          transport_coeffs(harm, 1.0, 0.0, tp, 1, {2.0, 11.0}, -1.0, 10.0);
        }) == ErrorCode::BadInput);
  // An offset so small the finest internal step cannot resolve it.
  CHECK(ts::error_code_of([&] {
          transport_coeffs(harm, 1.0, 0.0, tp, 1, {1.0 + 2e-6, 1.5}, 1e-6, 60.0);
        }) == ErrorCode::GridTooCoarse);
}

}  // TEST_SUITE
