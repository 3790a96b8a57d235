#include "ptwell/wkb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "detail/quadrature.hpp"
#include "ptwell/errors.hpp"

namespace ptwell {
namespace {

using detail::continue_sqrt;
using detail::gauss_legendre;

constexpr double kPhaseRelTol = 1e-12;
constexpr int kMaxPanels = 256;
constexpr double kStepCheckTol = 1e-7;
constexpr long kAutoCells = 16384;
constexpr long kMaxCells = 131072;
constexpr double kXmaxCap = 200.0;
constexpr double kTailTarget = 1e-8;

double segment_distance(Complex p, Complex a, Complex b) {
  Complex ab = b - a;
  double len2 = std::norm(ab);
  if (len2 == 0.0) return std::abs(p - a);
  double t = std::clamp(((p - a) * std::conj(ab)).real() / len2, 0.0, 1.0);
  return std::abs(p - (a + t * ab));
}

// Degree-5 Lagrange interpolation through six consecutive samples, the same
// window for every evaluation a caller makes near one location so the probe
// sees a single smooth polynomial.
Complex lagrange6(const std::vector<double>& xs, const std::vector<Complex>& ys,
                  long w0, double x) {
  Complex acc = 0.0;
  for (int i = 0; i < 6; ++i) {
    double li = 1.0;
    for (int j = 0; j < 6; ++j)
      if (j != i) li *= (x - xs[w0 + j]) / (xs[w0 + i] - xs[w0 + j]);
    acc += li * ys[w0 + i];
  }
  return acc;
}

// 4th-order first derivative of uniform samples, one-sided at the edges.
std::vector<Complex> derivative_5pt(const std::vector<Complex>& y, double delta) {
  long n = static_cast<long>(y.size());
  std::vector<Complex> d(n);
  double s = 1.0 / (12.0 * delta);
  d[0] = (-25.0 * y[0] + 48.0 * y[1] - 36.0 * y[2] + 16.0 * y[3] - 3.0 * y[4]) * s;
  d[1] = (-3.0 * y[0] - 10.0 * y[1] + 18.0 * y[2] - 6.0 * y[3] + y[4]) * s;
  for (long i = 2; i + 2 < n; ++i)
    d[i] = (y[i - 2] - 8.0 * y[i - 1] + 8.0 * y[i + 1] - y[i + 2]) * s;
  d[n - 2] =
      (3.0 * y[n - 1] + 10.0 * y[n - 2] - 18.0 * y[n - 3] + 6.0 * y[n - 4] - y[n - 5]) * s;
  d[n - 1] = (25.0 * y[n - 1] - 48.0 * y[n - 2] + 36.0 * y[n - 3] - 16.0 * y[n - 4] +
              3.0 * y[n - 5]) *
             s;
  return d;
}

// Antiderivative vanishing at the last sample, 4th-order cells: cubic through
// the four samples around each cell, Adams-Moulton weights at the ends.
std::vector<Complex> integrate_from_right(const std::vector<Complex>& g, double delta) {
  long n = static_cast<long>(g.size()) - 1;  // cells
  std::vector<Complex> F(n + 1);
  double c = delta / 24.0;
  auto cell = [&](long j) -> Complex {
    if (j == 0) return c * (9.0 * g[0] + 19.0 * g[1] - 5.0 * g[2] + g[3]);
    if (j == n - 1) return c * (9.0 * g[n] + 19.0 * g[n - 1] - 5.0 * g[n - 2] + g[n - 3]);
    return c * (-g[j - 1] + 13.0 * g[j] + 13.0 * g[j + 1] - g[j + 2]);
  };
  F[n] = 0.0;
  for (long j = n - 1; j >= 0; --j) F[j] = F[j + 1] - cell(j);
  return F;
}

struct TransportSolution {
  double delta = 0.0;
  std::vector<double> x;
  std::vector<Complex> q;
  std::vector<std::vector<Complex>> f;       // [k][i]
  std::vector<std::vector<Complex>> fprime;  // [k][i]
};

}  // namespace

PhaseFunction::PhaseFunction(const Potential& pot, Complex E, Complex eps,
                             const TurningPair& tp, Side side)
    : pot_(&pot), e_(E), eps_(eps), side_(side) {
  if (side == Side::Right) {
    base_ = tp.beta;
    other_ = tp.alpha;
    sign_ = 1;
  } else {
    base_ = tp.alpha;
    other_ = tp.beta;
    sign_ = -1;
  }
}

// Straight segment from the base turning point, desingularized by
// w(s) = base + (z - base) s^2 so the integrand is analytic in s, composite
// Gauss-Legendre with panel doubling.  The root is continued node to node,
// seeded by the local linear model (w - base) V'(base) whose principal root
// is the positive branch on the forbidden real side.
PhaseFunction::PathValue PhaseFunction::integrate(Complex z) const {
  Complex span = z - base_;
  if (std::abs(span) == 0.0) return {Complex(0.0), Complex(0.0)};
  if (segment_distance(other_, base_, z) < 1e-4)
    raise(ErrorCode::PathThroughTurningPoint,
          "integration path passes within 1e-4 of the other turning point");

  Complex dv = pot_->eval_d1(base_, eps_);
  Complex seed_root = std::sqrt(span * dv);
  const detail::QuadRule& rule = gauss_legendre(16);
  long n_nodes = static_cast<long>(rule.nodes.size());

  auto level = [&](int panels, bool* jump) -> PathValue {
    Complex total = 0.0;
    Complex prev = 0.0;
    bool have_prev = false;
    for (int p = 0; p < panels; ++p) {
      double s_lo = static_cast<double>(p) / panels;
      double s_hi = static_cast<double>(p + 1) / panels;
      double half = 0.5 * (s_hi - s_lo);
      double mid = 0.5 * (s_hi + s_lo);
      Complex acc = 0.0;
      for (long i = 0; i < n_nodes; ++i) {
        double s = mid + half * rule.nodes[i];
        Complex w = base_ + span * (s * s);
        Complex val = pot_->eval(w, eps_) - e_;
        bool amb = false;
        Complex q = continue_sqrt(val, have_prev ? prev : s * seed_root, &amb);
        if (amb) *jump = true;
        have_prev = true;
        prev = q;
        acc += rule.weights[i] * q * (2.0 * span * s);
      }
      total += half * acc;
    }
    bool amb = false;
    Complex q_end = continue_sqrt(pot_->eval(z, eps_) - e_, prev, &amb);
    if (amb) *jump = true;
    return {total, q_end};
  };

  Complex prev_total = 0.0;
  bool have_total = false;
  bool last_jump = false;
  for (int panels = 1; panels <= kMaxPanels; panels *= 2) {
    bool jump = false;
    PathValue pv = level(panels, &jump);
    last_jump = jump;
    if (jump) {
      have_total = false;  // a jumped level is not a trustworthy comparison point
      continue;
    }
    if (have_total &&
        std::abs(pv.integral - prev_total) < kPhaseRelTol * (1.0 + std::abs(pv.integral)))
      return pv;
    prev_total = pv.integral;
    have_total = true;
  }
  if (last_jump)
    raise(ErrorCode::BranchJump, "root continuation stayed ambiguous along the path");
  raise(ErrorCode::NotConverged, "phase quadrature did not converge at 256 panels");
}

Complex PhaseFunction::eval(Complex z) const {
  return Complex(0.0, 1.0) * static_cast<double>(sign_) * integrate(z).integral;
}

Complex PhaseFunction::sqrt_at(Complex z) const { return integrate(z).q_end; }

Complex PhaseFunction::derivative(Complex z) const {
  return Complex(0.0, 1.0) * static_cast<double>(sign_) * sqrt_at(z);
}

Complex phase_at(const Potential& pot, Complex E, Complex eps, const TurningPair& tp,
                 Complex z, Side side) {
  return PhaseFunction(pot, E, eps, tp, side).eval(z);
}

namespace {

// One transport solve on a fixed uniform grid.  f_0 = 1 and, for k >= 1,
//   f_k' = (f_{k-1}'' + 2 A1 f_{k-1}' + A2 f_{k-1}) / (2 q)
// with A1 = a0'/a0 and A2 = a0''/a0 expressed through V and its first two
// derivatives; f_{k-1}'' is a 5-point derivative of the stored f_{k-1}'.
TransportSolution transport_solve(const Potential& pot, Complex E, Complex eps, int N,
                                  double x_lo, double x_max, long n, Complex q_seed) {
  TransportSolution s;
  s.delta = (x_max - x_lo) / static_cast<double>(n);
  s.x.resize(n + 1);
  for (long i = 0; i <= n; ++i) s.x[i] = x_lo + s.delta * static_cast<double>(i);
  s.x[n] = x_max;

  std::vector<Complex> a1(n + 1), a2(n + 1);
  s.q.resize(n + 1);
  Complex prev = q_seed;
  for (long i = 0; i <= n; ++i) {
    Complex v = pot.eval(s.x[i], eps);
    Complex d1 = pot.eval_d1(s.x[i], eps);
    Complex d2 = pot.eval_d2(s.x[i], eps);
    Complex ve = v - E;
    if (std::abs(ve) < 1e-8)
      raise(ErrorCode::PathThroughTurningPoint,
            "transport grid point sits on a zero of V_eps - E");
    a1[i] = -d1 / (4.0 * ve);
    a2[i] = -d2 / (4.0 * ve) + (5.0 / 16.0) * (d1 / ve) * (d1 / ve);
    bool amb = false;
    s.q[i] = continue_sqrt(ve, prev, &amb);
    if (amb)
      raise(ErrorCode::BranchJump, "root continuation ambiguous along the transport grid");
    prev = s.q[i];
  }

  s.f.assign(N + 1, {});
  s.fprime.assign(N + 1, {});
  s.f[0].assign(n + 1, Complex(1.0, 0.0));
  s.fprime[0].assign(n + 1, Complex(0.0, 0.0));
  for (int k = 1; k <= N; ++k) {
    std::vector<Complex> fpp = derivative_5pt(s.fprime[k - 1], s.delta);
    std::vector<Complex> rhs(n + 1);
    for (long i = 0; i <= n; ++i)
      rhs[i] = (fpp[i] + 2.0 * a1[i] * s.fprime[k - 1][i] + a2[i] * s.f[k - 1][i]) /
               (2.0 * s.q[i]);
    s.fprime[k] = std::move(rhs);
    s.f[k] = integrate_from_right(s.fprime[k], s.delta);
  }
  return s;
}

double solution_difference(const TransportSolution& coarse, const TransportSolution& fine) {
  double worst = 0.0;
  for (size_t k = 0; k < coarse.f.size(); ++k)
    for (size_t i = 0; i < coarse.f[k].size(); ++i) {
      Complex ref = fine.f[k][2 * i];
      double d = std::abs(coarse.f[k][i] - ref) / (1.0 + std::abs(ref));
      worst = std::max(worst, d);
    }
  return worst;
}

}  // namespace

WKBExpansion transport_coeffs(const Potential& pot, Complex E, Complex eps,
                              const TurningPair& tp, int N,
                              const std::vector<double>& grid, double delta0,
                              double x_max, long n_internal) {
  if (N < 0) raise(ErrorCode::BadInput, "expansion order must be nonnegative");
  if (grid.empty()) raise(ErrorCode::BadInput, "empty expansion grid");
  for (size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1]))
      raise(ErrorCode::BadInput, "expansion grid must be strictly increasing");

  // The exclusion zone is set by the real turning points of V0 at this
  // energy, not by the reference well at e0.
  TurningPair tp0 = find_turning_pair(pot, Complex(E.real(), 0.0), 0.0);
  double beta0 = tp0.beta.real();
  double width = tp0.beta.real() - tp0.alpha.real();
  if (delta0 < 0.0) delta0 = 0.25 * width;
  if (!(delta0 > 0.0)) raise(ErrorCode::BadInput, "grid offset delta0 must be positive");
  double x_lo_min = beta0 + delta0;
  if (grid.front() < x_lo_min - 1e-12 * (1.0 + std::abs(x_lo_min)))
    raise(ErrorCode::BadInput, "expansion grid must start at least delta0 past the well");

  double cap = std::min(kXmaxCap, pot.window().re.hi);
  if (grid.back() > cap)
    raise(ErrorCode::BadInput, "expansion grid extends past the analytic window");
  if (x_max > 0.0) {
    if (x_max < grid.back())
      raise(ErrorCode::BadInput, "anchor x_max lies inside the requested grid");
    if (x_max > pot.window().re.hi)
      raise(ErrorCode::BadInput, "anchor x_max extends past the analytic window");
  } else {
    // Tail estimate |f_1(x)| ~ |f_1'(x)| x / (1 + m0/2) from the power decay.
    auto tail1 = [&](double x) {
      Complex v = pot.eval(x, eps);
      Complex d1 = pot.eval_d1(x, eps);
      Complex d2 = pot.eval_d2(x, eps);
      Complex ve = v - E;
      Complex a2 = -d2 / (4.0 * ve) + (5.0 / 16.0) * (d1 / ve) * (d1 / ve);
      double q = std::sqrt(std::abs(ve));
      return std::abs(a2) / (2.0 * q) * x / (1.0 + 0.5 * pot.m0());
    };
    x_max = std::max(grid.back(), beta0 + 5.0 * width);
    x_max = std::min(x_max, cap);
    while (x_max < cap && tail1(x_max) > kTailTarget)
      x_max = std::min(cap, 1.5 * x_max);
  }

  double x_lo = grid.front();
  Complex q_seed = PhaseFunction(pot, E, eps, tp, Side::Right).sqrt_at(x_lo);

  TransportSolution sol;
  double step_check = std::numeric_limits<double>::quiet_NaN();
  if (n_internal > 0) {
    if (n_internal < 8) raise(ErrorCode::BadInput, "internal grid needs at least 8 cells");
    sol = transport_solve(pot, E, eps, N, x_lo, x_max, n_internal, q_seed);
  } else {
    long n = kAutoCells;
    TransportSolution coarse = transport_solve(pot, E, eps, N, x_lo, x_max, n, q_seed);
    for (;;) {
      TransportSolution fine = transport_solve(pot, E, eps, N, x_lo, x_max, 2 * n, q_seed);
      step_check = solution_difference(coarse, fine);
      if (step_check <= kStepCheckTol) {
        sol = std::move(fine);
        break;
      }
      if (2 * n >= kMaxCells)
        raise(ErrorCode::GridTooCoarse,
              "transport step halving did not converge below 1e-7");
      n *= 2;
      coarse = std::move(fine);
    }
  }

  WKBExpansion out;
  out.grid = grid;
  out.h_order = N;
  out.x_max = x_max;
  out.delta = sol.delta;
  out.step_check = step_check;
  for (int k = 1; k <= N; ++k)
    out.est_tail.push_back(std::abs(sol.fprime[k].back()) * x_max /
                           (k * (1.0 + 0.5 * pot.m0())));

  long n = static_cast<long>(sol.x.size()) - 1;
  out.f_k_values.assign(N + 1, std::vector<Complex>(grid.size()));
  out.a_k_values.assign(N + 1, std::vector<Complex>(grid.size()));
  Complex root_prev = 0.0;
  bool have_root = false;
  for (size_t gi = 0; gi < grid.size(); ++gi) {
    double x = grid[gi];
    long c = std::lround((x - x_lo) / sol.delta);
    c = std::clamp(c, 2L, n - 3);
    long w0 = c - 2;
    // exact q at x, branch guided by the nearest internal sample
    bool amb = false;
    Complex q = continue_sqrt(pot.eval(x, eps) - E, sol.q[c], &amb);
    if (amb) raise(ErrorCode::BranchJump, "root ambiguous at an output grid point");
    Complex phip = Complex(0.0, 1.0) * q;  // right-side phase derivative
    Complex root = have_root ? continue_sqrt(phip, root_prev, &amb) : std::sqrt(phip);
    if (amb) raise(ErrorCode::BranchJump, "amplitude branch ambiguous along the grid");
    root_prev = root;
    have_root = true;
    Complex a0 = 1.0 / root;
    for (int k = 0; k <= N; ++k) {
      Complex fk = k == 0 ? Complex(1.0, 0.0) : lagrange6(sol.x, sol.f[k], w0, x);
      out.f_k_values[k][gi] = fk;
      out.a_k_values[k][gi] = fk * a0;
    }
  }

  out.fine_x = std::move(sol.x);
  out.fine_f = std::move(sol.f);
  out.fine_q = std::move(sol.q);
  return out;
}

WKBValue wkb_eval(const WKBExpansion& expansion, const PhaseFunction& phase,
                  double z_on_grid, double h) {
  if (!(h > 0.0)) raise(ErrorCode::BadInput, "h must be positive");
  double tol = 1e-9 * (1.0 + std::abs(z_on_grid));
  auto it = std::lower_bound(expansion.grid.begin(), expansion.grid.end(),
                             z_on_grid - tol);
  if (it == expansion.grid.end() || std::abs(*it - z_on_grid) > tol)
    raise(ErrorCode::BadInput, "evaluation point is not on the expansion grid");
  size_t i = static_cast<size_t>(it - expansion.grid.begin());

  Complex s = 0.0;
  double hp = 1.0;
  for (int k = 0; k <= expansion.h_order; ++k) {
    s += expansion.a_k_values[k][i] * hp;
    hp *= h;
  }
  Complex phi = phase.eval(z_on_grid);
  WKBValue out;
  out.log_abs = std::log(std::abs(s)) - phi.imag() / h;
  out.value = s * std::exp(Complex(0.0, 1.0) * phi / h);
  return out;
}

ResidualOrders wkb_residual_order(const Potential& pot, Complex E, Complex eps,
                                  const TurningPair& tp, int N,
                                  const std::vector<double>& h_list) {
  if (h_list.size() < 2) raise(ErrorCode::BadInput, "need at least two h values");
  for (size_t i = 0; i < h_list.size(); ++i) {
    if (!(h_list[i] > 0.0)) raise(ErrorCode::BadInput, "h values must be positive");
    if (i > 0 && !(h_list[i] < h_list[i - 1]))
      raise(ErrorCode::BadInput, "h values must decrease");
  }

  TurningPair tp0 = find_turning_pair(pot, Complex(E.real(), 0.0), 0.0);
  double width = tp0.beta.real() - tp0.alpha.real();
  double x_lo = tp0.beta.real() + 0.25 * width;
  // Probes stay close to the well so the phase derivative (hence the finite
  // difference truncation term) stays moderate.
  double band = 0.5 * width;
  WKBExpansion expn = transport_coeffs(pot, E, eps, tp, N, {x_lo, x_lo + band + 0.1 * width});

  const detail::QuadRule& rule = gauss_legendre(16);
  long n_fine = static_cast<long>(expn.fine_x.size()) - 1;

  constexpr int kProbes = 8;
  ResidualOrders out;
  out.h_list = h_list;

  for (double h : h_list) {
    double dx = h / 128.0;
    double worst = 0.0;
    for (int pi = 0; pi < kProbes; ++pi) {
      double xp = x_lo + (pi + 0.5) / kProbes * band;
      long c = std::clamp(std::lround((xp - expn.fine_x.front()) / expn.delta), 2L,
                          n_fine - 3);
      long w0 = c - 2;

      Complex u[5];
      for (int m = -2; m <= 2; ++m) {
        double x = xp + m * dx;
        bool amb = false;
        Complex q = continue_sqrt(pot.eval(x, eps) - E, expn.fine_q[c], &amb);
        Complex a0 = 1.0 / std::sqrt(Complex(0.0, 1.0) * q);
        Complex s = 0.0;
        double hp = 1.0;
        for (int k = 0; k <= N; ++k) {
          s += (k == 0 ? Complex(1.0, 0.0) : lagrange6(expn.fine_x, expn.fine_f[k], w0, x)) *
               hp;
          hp *= h;
        }
        // relative phase on the short segment [xp, x]: one Gauss panel is
        // exact to roundoff, and the common factor exp(i phi(xp)/h) cancels
        // from the normalized residual
        Complex rel = 0.0;
        if (m != 0) {
          double half = 0.5 * (x - xp);
          double mid = 0.5 * (x + xp);
          Complex prev = expn.fine_q[c];
          for (size_t i = 0; i < rule.nodes.size(); ++i) {
            Complex qi =
                continue_sqrt(pot.eval(mid + half * rule.nodes[i], eps) - E, prev, &amb);
            prev = qi;
            rel += rule.weights[i] * qi;
          }
          rel *= half;
        }
        u[m + 2] = s * a0 * std::exp(-rel / h);
      }
      Complex d2 = (-u[0] + 16.0 * u[1] - 30.0 * u[2] + 16.0 * u[3] - u[4]) /
                   (12.0 * dx * dx);
      Complex res = -h * h * d2 + (pot.eval(xp, eps) - E) * u[2];
      worst = std::max(worst, std::abs(res) / std::abs(u[2]));
    }
    out.residuals.push_back(worst);
    double floor_est = 3e-16 * (h / dx) * (h / dx) * 64.0 / 12.0;
    if (worst < 10.0 * floor_est) out.floor_reached = true;
  }

  for (size_t i = 0; i + 1 < h_list.size(); ++i)
    out.orders.push_back(std::log(out.residuals[i] / out.residuals[i + 1]) /
                         std::log(h_list[i] / h_list[i + 1]));
  return out;
}

}  // namespace ptwell
