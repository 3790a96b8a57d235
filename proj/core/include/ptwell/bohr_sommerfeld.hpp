#pragma once

#include <optional>
#include <vector>

#include "ptwell/potential.hpp"
#include "ptwell/types.hpp"

namespace ptwell {

// One quantization solution of I(E, eps) = (k + 1/2) 2 pi h.
struct EigenvalueRecord {
  int k = 0;
  Complex e_bs;
  std::optional<double> e_shoot;  // matching Wronskian zero, when computed
  double im_abs = 0.0;            // |Im e_bs|
  double bs_residual = 0.0;       // |I(e_bs) - (k+1/2) 2 pi h|
};

struct CorrectionEstimate {
  double r = 0.0;          // (I(e_shoot) - (k+1/2) 2 pi h) / h^2
  double stability = 0.0;  // relative change of r when h is halved (same k)
  double e_shoot = 0.0;
  double e_shoot_half = 0.0;
};

// Indices k whose targets (k+1/2) 2 pi h land inside [Re I(E_min), Re I(E_max)].
std::vector<int> bs_targets(const Potential& pot, Complex eps, double h, Interval window);

// Newton on E -> I(E) with the period as exact derivative, seeded by inverse
// linear interpolation on a 17-point coarse action grid over the window.
std::vector<EigenvalueRecord> solve_bs(const Potential& pot, Complex eps, double h,
                                       Interval window, int nodes = 64);

EigenvalueRecord solve_bs_single(const Potential& pot, Complex eps, double h, int k,
                                 int nodes = 64);

// Runs the shooting oracle over the window and attaches the nearest Wronskian
// zero to each record (within 0.45 expected spacings).
void attach_shooting(std::vector<EigenvalueRecord>& records, const Potential& pot,
                     double eps, double h, Interval window, double box_l = 0.0);

// h^2-correction estimate from the defect of the shooting eigenvalue in the
// quantization condition, with a same-k h-halving stability probe.
CorrectionEstimate estimate_correction(const Potential& pot, double eps, double h, int k,
                                       double box_l = 0.0);

}  // namespace ptwell
