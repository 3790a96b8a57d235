#include "ptwell/bohr_sommerfeld.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include "ptwell/action.hpp"
#include "ptwell/errors.hpp"
#include "ptwell/shooting.hpp"
#include "ptwell/turning.hpp"

namespace ptwell {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double target_of(int k, double h) { return (k + 0.5) * kTwoPi * h; }

struct ActionEval {
  Complex action;
  Complex period;
  TurningSeed seed;
};

ActionEval eval_action(const Potential& pot, Complex E, Complex eps, int nodes,
                       std::optional<TurningSeed> seed) {
  TurningPair tp = find_turning_pair(pot, E, eps, seed);
  ActionValue av = action_integral(pot, E, eps, tp, nodes);
  return {av.action, av.period, TurningSeed{tp.alpha, tp.beta}};
}

// Newton on I(E) = target; the period is the exact derivative dI/dE.  Seeds
// chain from step to step so the turning roots never restart continuation.
Complex newton_quantize(const Potential& pot, Complex eps, int nodes, double target,
                        Complex e_start, std::optional<TurningSeed> seed,
                        Complex* final_residual) {
  Complex e = e_start;
  for (int it = 0; it < 30; ++it) {
    ActionEval ae = eval_action(pot, e, eps, nodes, seed);
    seed = ae.seed;
    Complex de = (ae.action - target) / ae.period;
    e -= de;
    if (!std::isfinite(e.real()) || !std::isfinite(e.imag()))
      raise(ErrorCode::NewtonDivergence, "quantization Newton produced a non-finite energy");
    if (std::abs(de) < 1e-10 * (1.0 + std::abs(e))) {
      ActionEval fin = eval_action(pot, e, eps, nodes, seed);
      *final_residual = fin.action - target;
      return e;
    }
  }
  raise(ErrorCode::NewtonDivergence, "quantization Newton did not settle in 30 iterations");
}

EigenvalueRecord make_record(int k, Complex e, Complex residual) {
  EigenvalueRecord rec;
  rec.k = k;
  rec.e_bs = e;
  rec.im_abs = std::abs(e.imag());
  rec.bs_residual = std::abs(residual);
  return rec;
}

}  // namespace

std::vector<int> bs_targets(const Potential& pot, Complex eps, double h, Interval window) {
  if (!(window.length() > 0.0))
    raise(ErrorCode::EmptyWindow, "energy window has no interior");
  double i_lo = eval_action(pot, window.lo, eps, 64, std::nullopt).action.real();
  double i_hi = eval_action(pot, window.hi, eps, 64, std::nullopt).action.real();
  if (i_hi < i_lo) std::swap(i_lo, i_hi);
  int k_min = std::max(0, static_cast<int>(std::ceil(i_lo / (kTwoPi * h) - 0.5)));
  int k_max = static_cast<int>(std::floor(i_hi / (kTwoPi * h) - 0.5));
  std::vector<int> ks;
  for (int k = k_min; k <= k_max; ++k) ks.push_back(k);
  return ks;
}

std::vector<EigenvalueRecord> solve_bs(const Potential& pot, Complex eps, double h,
                                       Interval window, int nodes) {
  std::vector<int> ks = bs_targets(pot, eps, h, window);
  std::vector<EigenvalueRecord> out;
  if (ks.empty()) return out;

  // Coarse action profile over the window; Re I is increasing in E, so
  // inverse linear interpolation gives a Newton seed per index.
  constexpr int kGrid = 17;
  double eg[kGrid];
  double ig[kGrid];
  TurningSeed seeds[kGrid];
  std::optional<TurningSeed> chain;
  for (int j = 0; j < kGrid; ++j) {
    eg[j] = window.lo + window.length() * j / (kGrid - 1);
    ActionEval ae = eval_action(pot, eg[j], eps, nodes, chain);
    ig[j] = ae.action.real();
    seeds[j] = ae.seed;
    chain = ae.seed;
  }

  for (int k : ks) {
    double target = target_of(k, h);
    int j = 0;
    while (j + 2 < kGrid && ig[j + 1] < target) ++j;
    double run = ig[j + 1] - ig[j];
    double f = run > 0.0 ? std::clamp((target - ig[j]) / run, 0.0, 1.0) : 0.5;
    Complex e_seed = eg[j] + f * (eg[j + 1] - eg[j]);
    Complex residual;
    Complex e = newton_quantize(pot, eps, nodes, target, e_seed, seeds[j], &residual);
    out.push_back(make_record(k, e, residual));
  }
  return out;
}

EigenvalueRecord solve_bs_single(const Potential& pot, Complex eps, double h, int k,
                                 int nodes) {
  if (k < 0) raise(ErrorCode::BadInput, "quantization index must be nonnegative");
  double target = target_of(k, h);
  double e0 = pot.e0();

  // Energies may not descend to the well bottom, where the turning points
  // collide and the continuation degenerates; keep a thin safety margin.
  const Interval well = pot.well_interval();
  double v_min = e0;
  for (int i = 0; i <= 64; ++i)
    v_min = std::min(v_min, pot.v0_real(well.lo + well.length() * i / 64.0));
  const double e_floor = v_min + 1e-3 * (e0 - v_min) + 1e-12;

  // Bracket Re I(E) = target by doubling away from the reference level, then
  // bisect to a seed safely inside Newton's basin.
  double lo = e0, hi = e0;
  double d = std::max(0.05 * (1.0 + std::abs(e0)), h);
  if (eval_action(pot, e0, eps, nodes, std::nullopt).action.real() < target) {
    for (int g = 0;; ++g) {
      if (g > 60)
        raise(ErrorCode::NewtonDivergence, "could not bracket the quantization target");
      hi = e0 + d;
      if (eval_action(pot, hi, eps, nodes, std::nullopt).action.real() >= target) break;
      lo = hi;
      d *= 2.0;
    }
  } else {
    // Descending probes can leave the computable range: with a complex
    // deformation the roots collide at the effective bottom, above v_min.
    // A throwing probe therefore just means "too low" - pull the edge up
    // and keep bisecting between it and the last energy still above target.
    double bad = e_floor;
    bool bracketed = false;
    for (int g = 0; g < 80 && !bracketed; ++g) {
      double cand = std::max(bad, hi - d);
      if (!(cand < hi)) cand = 0.5 * (bad + hi);
      if (!(cand < hi)) break;
      bool computable = true;
      double i_cand = 0.0;
      try {
        i_cand = eval_action(pot, cand, eps, nodes, std::nullopt).action.real();
      } catch (const Error&) {
        computable = false;
      }
      if (!computable) {
        bad = cand;
        d *= 0.5;
      } else if (i_cand <= target) {
        lo = cand;
        bracketed = true;
      } else {
        hi = cand;
        d *= 2.0;
      }
      if (hi - bad < 1e-12 * (1.0 + std::abs(hi))) break;
    }
    if (!bracketed)
      raise(ErrorCode::NewtonDivergence,
            "quantization target lies below the action at the well bottom");
  }
  for (int it = 0; it < 24; ++it) {
    double mid = 0.5 * (lo + hi);
    if (eval_action(pot, mid, eps, nodes, std::nullopt).action.real() < target)
      lo = mid;
    else
      hi = mid;
  }
  Complex residual;
  Complex e =
      newton_quantize(pot, eps, nodes, target, 0.5 * (lo + hi), std::nullopt, &residual);
  return make_record(k, e, residual);
}

void attach_shooting(std::vector<EigenvalueRecord>& records, const Potential& pot,
                     double eps, double h, Interval window, double box_l) {
  if (records.empty()) return;
  if (box_l <= 0.0) box_l = default_box(pot, h);
  std::vector<double> zeros = real_eigen_scan(pot, eps, h, window, box_l);
  for (auto& rec : records) {
    ActionEval ae =
        eval_action(pot, rec.e_bs.real(), Complex(eps, 0.0), 64, std::nullopt);
    double spacing = kTwoPi * h / std::abs(ae.period);
    double best = std::numeric_limits<double>::infinity();
    double best_z = 0.0;
    for (double z : zeros) {
      double dist = std::abs(z - rec.e_bs.real());
      if (dist < best) {
        best = dist;
        best_z = z;
      }
    }
    if (best <= 0.45 * spacing) rec.e_shoot = best_z;
  }
}

CorrectionEstimate estimate_correction(const Potential& pot, double eps, double h, int k,
                                       double box_l) {
  auto defect = [&](double hh, double* e_out) {
    EigenvalueRecord rec = solve_bs_single(pot, Complex(eps, 0.0), hh, k);
    double e_bs = rec.e_bs.real();
    ActionEval ae = eval_action(pot, e_bs, Complex(eps, 0.0), 64, std::nullopt);
    double spacing = kTwoPi * hh / std::abs(ae.period);
    // Symmetric window: the scan's internal period estimate then sits at
    // e_bs, which certainly has turning points.  Grid energies below the
    // well bottom are harmless for the Wronskian itself.
    Interval win{e_bs - 0.6 * spacing, e_bs + 0.6 * spacing};
    double bl = box_l > 0.0 ? box_l : default_box(pot, hh);
    std::vector<double> zeros = real_eigen_scan(pot, eps, hh, win, bl);
    double best = std::numeric_limits<double>::infinity();
    double e_shoot = 0.0;
    for (double z : zeros) {
      double dist = std::abs(z - e_bs);
      if (dist < best) {
        best = dist;
        e_shoot = z;
      }
    }
    if (!(best <= 0.45 * spacing))
      raise(ErrorCode::OracleMissing, "no Wronskian zero near the predicted eigenvalue");
    ActionEval as = eval_action(pot, e_shoot, Complex(eps, 0.0), 64, std::nullopt);
    *e_out = e_shoot;
    return (as.action.real() - target_of(k, hh)) / (hh * hh);
  };

  CorrectionEstimate ce;
  double r_full = defect(h, &ce.e_shoot);
  double r_half = defect(0.5 * h, &ce.e_shoot_half);
  ce.r = r_full;
  ce.stability = std::abs(r_half - r_full) / std::max(std::abs(r_full), 1e-300);
  return ce;
}

}  // namespace ptwell
