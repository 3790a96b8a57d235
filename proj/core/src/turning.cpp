#include "ptwell/turning.hpp"

#include <cmath>
#include <string>

#include "ptwell/errors.hpp"

namespace ptwell {
namespace {

constexpr double kNewtonTol = 1e-12;
constexpr int kNewtonMaxIter = 50;
constexpr double kSegment = 0.05;        // parameter-space continuation step
constexpr double kSimpleSlope = 1e-6;    // |V'| below this is a non-simple root
constexpr double kCollision = 1e-8;      // alpha/beta closer than this collide

Complex newton_root(const Potential& pot, Complex E, Complex eps, Complex seed) {
  Complex z = seed;
  for (int it = 0; it < kNewtonMaxIter; ++it) {
    const Complex f = pot.eval(z, eps) - E;
    if (std::abs(f) < kNewtonTol) return z;
    const Complex d = pot.eval_d1(z, eps);
    if (std::abs(d) < kSimpleSlope)
      raise(ErrorCode::NonSimpleTurningPoint,
            "|V_eps'| = " + std::to_string(std::abs(d)) + " during Newton iteration");
    const Complex step = f / d;
    z -= step;
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      raise(ErrorCode::NewtonDivergence, "turning point iterate left the finite plane");
  }
  if (std::abs(pot.eval(z, eps) - E) < kNewtonTol) return z;
  raise(ErrorCode::NewtonDivergence, "no convergence in 50 Newton iterations");
}

TurningPair solve_at(const Potential& pot, Complex E, Complex eps, Complex sa, Complex sb) {
  TurningPair tp;
  tp.alpha = newton_root(pot, E, eps, sa);
  tp.beta = newton_root(pot, E, eps, sb);
  if (std::abs(tp.alpha - tp.beta) < kCollision)
    raise(ErrorCode::RootCollision, "turning points collided");
  tp.residual_alpha = std::abs(pot.eval(tp.alpha, eps) - E);
  tp.residual_beta = std::abs(pot.eval(tp.beta, eps) - E);
  tp.slope_alpha = pot.eval_d1(tp.alpha, eps);
  tp.slope_beta = pot.eval_d1(tp.beta, eps);
  if (std::abs(tp.slope_alpha) < kSimpleSlope || std::abs(tp.slope_beta) < kSimpleSlope)
    raise(ErrorCode::NonSimpleTurningPoint, "turning point is not simple");
  return tp;
}

}  // namespace

TurningPair find_turning_pair(const Potential& pot, Complex E, Complex eps,
                              std::optional<TurningSeed> seed) {
  if (seed) return solve_at(pot, E, eps, seed->alpha, seed->beta);

  const Interval well = pot.well_interval();
  Complex a(well.lo, 0.0), b(well.hi, 0.0);
  const Complex e_start(pot.e0(), 0.0);

  const double dist = std::abs(E - e_start) + std::abs(eps);
  const int n_seg = std::max(1, static_cast<int>(std::ceil(dist / kSegment)));
  TurningPair tp{a, b, 0, 0, {}, {}};
  for (int s = 1; s <= n_seg; ++s) {
    const double t = static_cast<double>(s) / n_seg;
    const Complex Et = e_start + t * (E - e_start);
    const Complex et = t * eps;
    tp = solve_at(pot, Et, et, a, b);
    a = tp.alpha;
    b = tp.beta;
  }
  return tp;
}

}  // namespace ptwell
