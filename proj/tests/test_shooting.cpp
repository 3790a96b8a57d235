#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include <ptwell/action.hpp>
#include <ptwell/shooting.hpp>
#include <ptwell/turning.hpp>

#include "support.hpp"

using ptwell::Complex;
using ptwell::ErrorCode;
using ptwell::Interval;
using ptwell::ShotState;
using ptwell::Window;
using ptwell::auto_steps;
using ptwell::default_box;
using ptwell::integrate_decaying;
using ptwell::pt_partner;
using ptwell::real_eigen_scan;
using ptwell::wronskian;
using ptwell::zero_count_winding;

namespace {
const double kPi = std::acos(-1.0);
}

TEST_SUITE("shooting") {

TEST_CASE("the default box clears the well by the h-dependent margin") {
  auto harm = ts::harmonic();
  const auto well = harm.well_interval();
  CHECK(std::abs(default_box(harm, 0.1) -
                 (well.hi + 3.0 * well.length())) < 1e-12);
  CHECK(std::abs(default_box(harm, 1.0) -
                 (well.hi + 4.0 * well.length())) < 1e-12);

  const double box = default_box(harm, 0.1);
  CHECK(auto_steps(harm, 0.5, 0.0, 0.1, box) >= static_cast<long>(box / 0.01));
  CHECK(auto_steps(harm, 0.5, 0.0, 0.05, box) >
        auto_steps(harm, 0.5, 0.0, 0.1, box));
}

TEST_CASE("shots renormalize to the canonical scale at the matching point") {
  auto harm = ts::harmonic();
  for (double e : {0.1, 0.2, 0.3, 0.5}) {
    const ShotState s = integrate_decaying(harm, e, 0.0, 0.1, 0.0);
    CHECK(s.x == 0.0);
    CHECK(std::abs(std::max(std::abs(s.u), std::abs(0.1 * s.du)) - 1.0) < 1e-12);
    CHECK(s.log_scale > 1.0);  // the tail grew on the way in
  }
}

TEST_CASE("even and odd eigenstates show up in the shot at x = 0") {
  auto harm = ts::harmonic();
  const ShotState ground = integrate_decaying(harm, 0.1, 0.0, 0.1, 0.0);
  CHECK(std::abs(ground.du / ground.u) < 1e-3);

  const ShotState odd = integrate_decaying(harm, 0.3, 0.0, 0.1, 0.0);
  CHECK(std::abs(odd.u) < 1e-3);
}

TEST_CASE("a box that does not reach the forbidden region is refused") {
  CHECK(ts::error_code_of([] {
          integrate_decaying(ts::harmonic(), 1.0, 0.0, 0.1, 0.5);
        }) == ErrorCode::BoxTooSmall);
  CHECK(ts::error_code_of([] {
          // 10 steps over the default box violates the h/10 cap.
          integrate_decaying(ts::harmonic(), 0.5, 0.0, 0.1, 0.0, 10);
        }) == ErrorCode::BadInput);
}

TEST_CASE("pt_partner reflects the state") {
  ShotState s;
  s.u = Complex(1.0, 2.0);
  s.du = Complex(3.0, -1.0);
  s.log_scale = 7.0;
  const auto p = pt_partner(s);
  CHECK(p.v == Complex(1.0, -2.0));
  CHECK(p.dv == Complex(-3.0, -1.0));
  CHECK(p.log_scale == 7.0);
}

TEST_CASE("the Wronskian vanishes on eigenvalues and only there") {
  auto harm = ts::harmonic();
  const auto at = [&](double e, double eps) { return wronskian(harm, e, eps, 0.1, 0.0); };

  CHECK(std::abs(at(0.1, 0.0).w) < 1e-6);
  CHECK(std::abs(at(0.3, 0.0).w) < 1e-6);
  CHECK(std::abs(at(0.2, 0.0).w) > 1e-3);  // midgap
  CHECK(at(0.2, 0.0).w.imag() == 0.0);     // real E, real eps: real Wronskian

  CHECK(std::abs(at(0.11, 0.2).w) < 1e-5);

  // Real-axis value agrees with the one-shot formula 2 h Re(conj(u) u').
  const ShotState s = integrate_decaying(harm, 0.2, 0.0, 0.1, 0.0);
  const double direct = 2.0 * 0.1 * (std::conj(s.u) * s.du).real();
  CHECK(std::abs(at(0.2, 0.0).w.real() - direct) < 1e-14);
}

TEST_CASE("Schwarz reflection conj(w(conj E)) == w(E)") {
  auto harm = ts::harmonic();
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      const Complex e(0.3 + 0.4 * i / 4.0, -0.05 + 0.1 * j / 4.0);
      const Complex a = wronskian(harm, e, 0.1, 0.1, 0.0).w;
      const Complex b = wronskian(harm, std::conj(e), 0.1, 0.1, 0.0).w;
      CHECK(std::abs(std::conj(b) - a) < 1e-10 * (1.0 + std::abs(a)));
    }
  }
}

TEST_CASE("the eigenvalue scan finds the exact ladders") {
  const auto plain = real_eigen_scan(ts::harmonic(), 0.0, 0.1, {0.05, 0.65}, 0.0);
  REQUIRE(plain.size() == 3);
  for (int k = 0; k < 3; ++k) CHECK(std::abs(plain[k] - (2 * k + 1) * 0.1) < 1e-6);

  const auto shifted = real_eigen_scan(ts::harmonic(), 0.2, 0.1, {0.05, 0.65}, 0.0);
  REQUIRE(shifted.size() == 3);
  for (int k = 0; k < 3; ++k)
    CHECK(std::abs(shifted[k] - ((2 * k + 1) * 0.1 + 0.01)) < 1e-5);

  const auto quart = real_eigen_scan(ts::quartic(), 0.0, 0.1, {0.02, 0.1}, 0.0);
  REQUIRE(quart.size() == 1);
  CHECK(std::abs(quart[0] - 0.0492176484) < 1e-6);
}

TEST_CASE("scan results are stable under box growth and step refinement") {
  auto harm = ts::harmonic();
  const double box = default_box(harm, 0.1);
  const auto base = real_eigen_scan(harm, 0.1, 0.1, {0.05, 0.65}, box);
  const auto wider = real_eigen_scan(harm, 0.1, 0.1, {0.05, 0.65}, box + 1.0);
  REQUIRE(base.size() == wider.size());
  for (size_t i = 0; i < base.size(); ++i) CHECK(std::abs(base[i] - wider[i]) < 1e-8);

  const long steps = auto_steps(harm, 0.35, 0.1, 0.1, box);
  const auto finer = real_eigen_scan(harm, 0.1, 0.1, {0.05, 0.65}, box, 8, 2 * steps);
  REQUIRE(base.size() == finer.size());
  for (size_t i = 0; i < base.size(); ++i) CHECK(std::abs(base[i] - finer[i]) < 1e-8);
}

TEST_CASE("scan gaps follow 2 pi h / T") {
  for (const auto& pot : {ts::harmonic(), ts::mixwell(0.2)}) {
    const auto zeros = real_eigen_scan(pot, 0.1, 0.1, {0.05, 0.95}, 0.0);
    REQUIRE(zeros.size() >= 3);
    for (size_t i = 0; i + 1 < zeros.size(); ++i) {
      const double gap = zeros[i + 1] - zeros[i];
      const auto tp = ptwell::find_turning_pair(pot, zeros[i], 0.1);
      const double period =
          ptwell::action_integral(pot, zeros[i], 0.1, tp).period.real();
      CHECK(std::abs(gap - 2.0 * kPi * 0.1 / period) < 0.1 * gap);
    }
  }
}

TEST_CASE("the winding count matches the real scan") {
  auto harm = ts::harmonic();
  const Window rect{{0.05, 0.55}, {-0.1, 0.1}};
  CHECK(zero_count_winding(harm, 0.0, 0.1, rect, 0.0) == 3);
  CHECK(zero_count_winding(harm, 0.2, 0.1, rect, 0.0) == 3);
  // A deliberately coarse start still resolves the turns adaptively.
  CHECK(zero_count_winding(harm, 0.2, 0.1, rect, 0.0, 16) == 3);

  const Window midgap{{0.15, 0.25}, {-0.05, 0.05}};
  CHECK(zero_count_winding(harm, 0.0, 0.1, midgap, 0.0) == 0);

  const int counted = zero_count_winding(harm, 0.15, 0.1, rect, 0.0);
  const auto scanned = real_eigen_scan(harm, 0.15, 0.1, {0.05, 0.55}, 0.0);
  CHECK(counted == static_cast<int>(scanned.size()));
}

TEST_CASE("a zero on the contour is refused, not miscounted") {
  auto harm = ts::harmonic();
  // Polish the ground state zero well past the scan tolerance, then put a
  // rectangle corner right on it.
  double lo = 0.09, hi = 0.11;
  const auto w_at = [&](double e) { return wronskian(harm, e, 0.0, 0.1, 0.0).w.real(); };
  double wlo = w_at(lo);
  for (int i = 0; i < 60 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double wm = w_at(mid);
    if ((wm < 0.0) == (wlo < 0.0)) {
      lo = mid;
      wlo = wm;
    } else {
      hi = mid;
    }
  }
  const double zero = 0.5 * (lo + hi);
  const Window rect{{zero, zero + 0.15}, {0.0, 0.05}};
  CHECK(ts::error_code_of([&] { zero_count_winding(harm, 0.0, 0.1, rect, 0.0); }) ==
        ErrorCode::ZeroOnBoundary);

  CHECK(ts::error_code_of([&] {
          zero_count_winding(harm, 0.0, 0.1, {{0.3, 0.2}, {-0.1, 0.1}}, 0.0);
        }) == ErrorCode::EmptyWindow);
}

}  // TEST_SUITE
