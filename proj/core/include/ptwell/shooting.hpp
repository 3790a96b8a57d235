#pragma once

#include <vector>

#include "ptwell/potential.hpp"
#include "ptwell/types.hpp"

namespace ptwell {

// State of the renormalized initial value problem -h^2 u'' + (V_eps - E) u = 0
// integrated rightward from x = -box_l with the locally decaying direction.
// The true solution at x is (u, du) * exp(log_scale).
struct ShotState {
  Complex u;
  Complex du;  // du/dx (true derivative, not h-scaled)
  double log_scale = 0.0;
  double x = 0.0;
};

// PT reflection v(x) = conj(u(-conj x)) of a state integrated at conj(E):
// the solution decaying at +infinity, evaluated at x = 0.
struct PartnerState {
  Complex v;
  Complex dv;
  double log_scale = 0.0;
};

// w = h u'(0) v(0) - u(0) h v'(0), where u decays to the left at energy E and
// v decays to the right, built from the PT partner of the run at conj(E).
// Both states are normalized to max(|u|, |h u'|) = 1 at x = 0, so w itself is
// scale free: its zeros in E are the eigenvalues, and exp(log_scale) restores
// the raw magnitude.
struct WronskianSample {
  Complex E;
  Complex w;
  double log_scale = 0.0;
};

// box_l so that the classically forbidden tail beyond the well kills the
// growing admixture: beta0 + max(3, 4 sqrt(h)) * well widths.
double default_box(const Potential& pot, double h);

// Step count of the accuracy model (4th-order local error balanced against a
// 3e-10 relative target), never coarser than h/10 per step.
long auto_steps(const Potential& pot, Complex E, Complex eps, double h, double box_l);

ShotState integrate_decaying(const Potential& pot, Complex E, Complex eps, double h,
                             double box_l, long n_steps = 0);

PartnerState pt_partner(const ShotState& state_at_zero_conj_e);

WronskianSample wronskian(const Potential& pot, Complex E, Complex eps, double h,
                          double box_l, long n_steps = 0);

// All zeros of the (real) Wronskian in [window.lo, window.hi] for real eps:
// sign-change bracketing on a grid of >= grid_per_spacing points per expected
// eigenvalue spacing 2 pi h / T, refined to |dE| < 1e-10.
std::vector<double> real_eigen_scan(const Potential& pot, double eps, double h,
                                    Interval window, double box_l, int grid_per_spacing = 8,
                                    long n_steps = 0);

// Argument-principle count of Wronskian zeros inside the rectangle, from the
// winding of w along the adaptively refined boundary.
int zero_count_winding(const Potential& pot, double eps, double h, Window rect,
                       double box_l, int n_boundary = 64, long n_steps = 0);

}  // namespace ptwell
