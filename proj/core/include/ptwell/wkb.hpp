#pragma once

#include <vector>

#include "ptwell/potential.hpp"
#include "ptwell/turning.hpp"
#include "ptwell/types.hpp"

namespace ptwell {

enum class Side { Left, Right };

// phi(z) = i * branch_sign * integral from base to z of (V_eps - E)^{1/2},
// along the straight segment, with the square root continued from the branch
// that is positive on the forbidden real side of the well at (e0, 0).  With
// branch_sign = +1 on the right of beta and -1 on the left of alpha,
// exp(i phi / h) decays away from the well on the chosen side.
class PhaseFunction {
 public:
  PhaseFunction(const Potential& pot, Complex E, Complex eps, const TurningPair& tp,
                Side side);

  Complex base_point() const { return base_; }
  Complex other_point() const { return other_; }
  int branch_sign() const { return sign_; }
  Side side() const { return side_; }

  Complex eval(Complex z) const;        // phi(z); phi(base) == 0
  Complex sqrt_at(Complex z) const;     // the continued root (V_eps - E)^{1/2} at z
  Complex derivative(Complex z) const;  // phi'(z) = i * branch_sign * sqrt_at(z)

 private:
  struct PathValue {
    Complex integral;
    Complex q_end;
  };
  PathValue integrate(Complex z) const;

  const Potential* pot_;
  Complex e_, eps_;
  Complex base_, other_;
  int sign_ = 1;
  Side side_ = Side::Right;
};

Complex phase_at(const Potential& pot, Complex E, Complex eps, const TurningPair& tp,
                 Complex z, Side side);

// Amplitude tables on a real grid right of the well: a_0 = (phi')^{-1/2},
// a_k = f_k * a_0 with f_0 = 1 and each f_k integrated inward from the anchor
// f_k(x_max) = 0.  The internal uniform data stays attached so callers can
// probe the coefficients between grid points.
struct WKBExpansion {
  std::vector<double> grid;
  std::vector<std::vector<Complex>> a_k_values;  // [k][grid index], k = 0..N
  std::vector<std::vector<Complex>> f_k_values;
  int h_order = 0;

  double x_max = 0.0;
  double delta = 0.0;       // internal step of the accepted solve
  double step_check = 0.0;  // relative f_k change on the last step halving (NaN if fixed)
  std::vector<double> est_tail;  // anchor-shift estimate |f_k(x_max)| for k = 1..N

  std::vector<double> fine_x;
  std::vector<std::vector<Complex>> fine_f;
  std::vector<Complex> fine_q;
};

// delta0 < 0 picks the default 0.25 * well width; x_max = 0 grows the anchor
// point until the tail estimate drops below 1e-8, capped by the analytic
// window and by 200; n_internal = 0 chooses the step by a halving convergence
// check (GridTooCoarse when even the finest step fails).
WKBExpansion transport_coeffs(const Potential& pot, Complex E, Complex eps,
                              const TurningPair& tp, int N,
                              const std::vector<double>& grid, double delta0 = -1.0,
                              double x_max = 0.0, long n_internal = 0);

struct WKBValue {
  Complex value;
  double log_abs = 0.0;  // log |u|, reliable even when value underflows
};

// (sum of a_k(z) h^k) * exp(i phi(z) / h) at a grid point of the expansion.
WKBValue wkb_eval(const WKBExpansion& expansion, const PhaseFunction& phase,
                  double z_on_grid, double h);

struct ResidualOrders {
  std::vector<double> h_list;
  std::vector<double> residuals;  // max over probe points of |P u| / |u|
  std::vector<double> orders;     // exponents between successive h values
  bool floor_reached = false;     // some residual sat at the rounding floor
};

// Applies -h^2 u'' + (V_eps - E) u to the order-N truncation via 5-point
// finite differences (stencil step h/128) and reports the decay exponents;
// the expected order is N + 2.
ResidualOrders wkb_residual_order(const Potential& pot, Complex E, Complex eps,
                                  const TurningPair& tp, int N,
                                  const std::vector<double>& h_list);

}  // namespace ptwell
