#include "ptwell/shooting.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>

#include "ptwell/action.hpp"
#include "ptwell/errors.hpp"
#include "ptwell/parallel.hpp"
#include "ptwell/turning.hpp"

namespace ptwell {
namespace {

constexpr double kRenormHi = 1e2;
constexpr double kRenormLo = 1e-2;
constexpr double kStepErrTarget = 3e-10;  // relative error budget per integration

double max_mag(const ShotState& s) { return std::max(std::abs(s.u), std::abs(s.du)); }

}  // namespace

double default_box(const Potential& pot, double h) {
  const Interval well = pot.well_interval();
  return well.hi + std::max(3.0, 4.0 * std::sqrt(h)) * well.length();
}

long auto_steps(const Potential& pot, Complex E, Complex eps, double h, double box_l) {
  // Local RK4 error on u'' = lambda^2 u is ~(lambda dx)^5/120 per step, so the
  // accumulated relative error is dx^4/120 * integral lambda^5 dx.
  const int m = 512;
  double int_l5 = 0.0;
  for (int i = 0; i < m; ++i) {
    const double x = -box_l + box_l * (i + 0.5) / m;
    const double lam = std::sqrt(std::abs(pot.eval(x, eps) - E)) / h;
    int_l5 += std::pow(lam, 5) * (box_l / m);
  }
  const double dx_acc = std::pow(120.0 * kStepErrTarget / std::max(int_l5, 1e-30), 0.25);
  const double dx = std::min(h / 10.0, dx_acc);
  return std::max<long>(64, static_cast<long>(std::ceil(box_l / dx)));
}

ShotState integrate_decaying(const Potential& pot, Complex E, Complex eps, double h,
                             double box_l, long n_steps) {
  if (box_l <= 0.0) box_l = default_box(pot, h);
  const Complex v_edge = pot.eval(-box_l, eps);
  if (v_edge.real() - E.real() < 0.0)
    raise(ErrorCode::BoxTooSmall,
          "V(-box_l) below Re E: no classically forbidden region at the box edge");
  if (n_steps <= 0) n_steps = auto_steps(pot, E, eps, h, box_l);
  const double dx = box_l / static_cast<double>(n_steps);
  if (dx > h / 10.0 + 1e-15)
    raise(ErrorCode::BadInput, "step exceeds h/10; pass a larger n_steps");

  // Growth bound for the stability diagnostic: the scale can only grow like
  // exp(integral lambda dx) with lambda = sqrt|V - E| / h.
  double log_bound = 30.0;
  {
    const int m = 256;
    for (int i = 0; i < m; ++i) {
      const double x = -box_l + box_l * (i + 0.5) / m;
      log_bound += 1.5 * std::sqrt(std::abs(pot.eval(x, eps) - E)) / h * (box_l / m);
    }
  }

  ShotState s;
  s.x = -box_l;
  s.u = Complex(1.0, 0.0);
  s.du = std::sqrt(v_edge - E) / h * s.u;  // locally decaying WKB direction
  s.log_scale = 0.0;

  const double inv_h2 = 1.0 / (h * h);
  auto q2 = [&](double x) { return (pot.eval(x, eps) - E) * inv_h2; };

  for (long i = 0; i < n_steps; ++i) {
    const double x = -box_l + dx * static_cast<double>(i);
    const Complex q2a = q2(x);
    const Complex q2b = q2(x + 0.5 * dx);
    const Complex q2c = q2(x + dx);

    const Complex k1u = s.du, k1d = q2a * s.u;
    const Complex k2u = s.du + 0.5 * dx * k1d, k2d = q2b * (s.u + 0.5 * dx * k1u);
    const Complex k3u = s.du + 0.5 * dx * k2d, k3d = q2b * (s.u + 0.5 * dx * k2u);
    const Complex k4u = s.du + dx * k3d, k4d = q2c * (s.u + dx * k3u);

    s.u += dx / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
    s.du += dx / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);

    const double mag = max_mag(s);
    if (!std::isfinite(mag)) raise(ErrorCode::StepUnstable, "non-finite state");
    if (mag > kRenormHi || (mag < kRenormLo && mag > 0.0)) {
      s.u /= mag;
      s.du /= mag;
      s.log_scale += std::log(mag);
    }
    if (s.log_scale > log_bound)
      raise(ErrorCode::StepUnstable, "growth diagnostic exceeded the WKB bound");
  }
  s.x = 0.0;

  // Canonical normalization at the matching point.
  const double mag = std::max(std::abs(s.u), std::abs(h * s.du));
  if (mag == 0.0 || !std::isfinite(mag)) raise(ErrorCode::StepUnstable, "vanishing state at 0");
  s.u /= mag;
  s.du /= mag;
  s.log_scale += std::log(mag);
  return s;
}

PartnerState pt_partner(const ShotState& s) {
  return PartnerState{std::conj(s.u), -std::conj(s.du), s.log_scale};
}

WronskianSample wronskian(const Potential& pot, Complex E, Complex eps, double h,
                          double box_l, long n_steps) {
  WronskianSample out;
  out.E = E;
  if (E.imag() == 0.0 && eps.imag() == 0.0) {
    const ShotState s = integrate_decaying(pot, E, eps, h, box_l, n_steps);
    out.w = Complex(2.0 * h * (std::conj(s.u) * s.du).real(), 0.0);
    out.log_scale = 2.0 * s.log_scale;
    return out;
  }
  const ShotState su = integrate_decaying(pot, E, eps, h, box_l, n_steps);
  const ShotState sc = integrate_decaying(pot, std::conj(E), eps, h, box_l, n_steps);
  const PartnerState pv = pt_partner(sc);
  out.w = h * su.du * pv.v - su.u * h * pv.dv;
  out.log_scale = su.log_scale + pv.log_scale;
  return out;
}

std::vector<double> real_eigen_scan(const Potential& pot, double eps, double h,
                                    Interval window, double box_l, int grid_per_spacing,
                                    long n_steps) {
  if (window.hi <= window.lo) raise(ErrorCode::EmptyWindow, "empty scan window");
  grid_per_spacing = std::max(grid_per_spacing, 8);

  // Expected spacing 2 pi h / T at mid-window sets the grid resolution.
  const double e_mid = window.midpoint();
  const TurningPair tp = find_turning_pair(pot, e_mid, eps);
  const ActionValue av = action_integral(pot, e_mid, eps, tp);
  const double period = av.period.real();
  const double spacing = 2.0 * std::numbers::pi * h / std::max(period, 1e-6);
  const int n = std::max<int>(16, static_cast<int>(std::ceil(window.length() / spacing *
                                                             grid_per_spacing)));

  auto w_at = [&](double e) {
    const WronskianSample s = wronskian(pot, e, eps, h, box_l, n_steps);
    if (std::abs(s.w.imag()) > 1e-8 * std::max(std::abs(s.w), 1e-6))
      raise(ErrorCode::ImaginaryResidue, "Wronskian not real on the real axis");
    return s.w.real();
  };

  std::vector<double> ws(static_cast<size_t>(n) + 1);
  parallel_for(n + 1, [&](int i) {
    ws[static_cast<size_t>(i)] = w_at(window.lo + window.length() * i / n);
  });

  std::vector<double> roots;
  for (int i = 0; i < n; ++i) {
    double a = window.lo + window.length() * i / n;
    double b = window.lo + window.length() * (i + 1) / n;
    double fa = ws[static_cast<size_t>(i)], fb = ws[static_cast<size_t>(i) + 1];
    if (fa == 0.0) {
      roots.push_back(a);
      continue;
    }
    if ((fa < 0.0) == (fb < 0.0)) continue;
    while (b - a > 1e-11) {
      const double m = 0.5 * (a + b);
      const double fm = w_at(m);
      if (fm == 0.0) {
        a = b = m;
        fa = fb = 0.0;
        break;
      }
      if ((fa < 0.0) != (fm < 0.0)) {
        b = m;
        fb = fm;
      } else {
        a = m;
        fa = fm;
      }
    }
    // final secant polish
    double root = (fb != fa) ? a - fa * (b - a) / (fb - fa) : 0.5 * (a + b);
    if (!(root >= a && root <= b)) root = 0.5 * (a + b);
    roots.push_back(root);
  }
  return roots;
}

int zero_count_winding(const Potential& pot, double eps, double h, Window rect,
                       double box_l, int n_boundary, long n_steps) {
  if (rect.re.hi <= rect.re.lo || rect.im.hi <= rect.im.lo)
    raise(ErrorCode::EmptyWindow, "degenerate rectangle");
  n_boundary = std::max(n_boundary, 8);

  // Counterclockwise corner loop.
  const Complex c0(rect.re.lo, rect.im.lo), c1(rect.re.hi, rect.im.lo);
  const Complex c2(rect.re.hi, rect.im.hi), c3(rect.re.lo, rect.im.hi);
  const Complex corners[5] = {c0, c1, c2, c3, c0};

  std::vector<Complex> pts;
  for (int side = 0; side < 4; ++side)
    for (int i = 0; i < n_boundary; ++i)
      pts.push_back(corners[side] +
                    (corners[side + 1] - corners[side]) * (static_cast<double>(i) / n_boundary));
  pts.push_back(c0);

  std::vector<Complex> wvals(pts.size());
  parallel_for(static_cast<int>(pts.size()), [&](int i) {
    wvals[static_cast<size_t>(i)] = wronskian(pot, pts[static_cast<size_t>(i)], eps, h,
                                              box_l, n_steps)
                                        .w;
  });

  double wmax = 0.0;
  for (const auto& w : wvals) wmax = std::max(wmax, std::abs(w));
  if (wmax == 0.0) raise(ErrorCode::ZeroOnBoundary, "Wronskian vanishes on the contour");
  auto check_small = [&](Complex w) {
    if (std::abs(w) < 1e-10 * wmax)
      raise(ErrorCode::ZeroOnBoundary, "Wronskian ~0 on the contour; move the rectangle");
  };
  for (const auto& w : wvals) check_small(w);

  // Accumulate arg increments, bisecting any segment that turns by more than
  // pi/2 until the turn is resolved.
  double total = 0.0;
  const int max_depth = 14;
  std::function<double(Complex, Complex, Complex, Complex, int)> arc =
      [&](Complex ea, Complex wa, Complex eb, Complex wb, int depth) -> double {
    const double d = std::arg(wb / wa);
    if (std::abs(d) <= std::numbers::pi / 2.0) return d;
    if (depth >= max_depth)
      raise(ErrorCode::InsufficientResolution, "winding refinement hit depth limit");
    const Complex em = 0.5 * (ea + eb);
    const Complex wm = wronskian(pot, em, eps, h, box_l, n_steps).w;
    check_small(wm);
    return arc(ea, wa, em, wm, depth + 1) + arc(em, wm, eb, wb, depth + 1);
  };
  for (size_t i = 0; i + 1 < pts.size(); ++i)
    total += arc(pts[i], wvals[i], pts[i + 1], wvals[i + 1], 0);

  const double winding = total / (2.0 * std::numbers::pi);
  const long rounded = std::lround(winding);
  if (std::abs(winding - static_cast<double>(rounded)) > 0.1)
    raise(ErrorCode::InsufficientResolution,
          "winding " + std::to_string(winding) + " is not close to an integer");
  if (rounded < 0)
    raise(ErrorCode::InsufficientResolution, "negative winding: zero/pole confusion");
  return static_cast<int>(rounded);
}

}  // namespace ptwell
