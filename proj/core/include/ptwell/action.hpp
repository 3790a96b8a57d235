#pragma once

#include <vector>

#include "ptwell/potential.hpp"
#include "ptwell/turning.hpp"
#include "ptwell/types.hpp"

namespace ptwell {

// Action integral I(E, eps) = 2 * integral_alpha^beta (E - V_eps)^(1/2) dz on
// the straight segment, with the branch that is positive on the real well at
// (e0, 0), plus the energy derivative T = dI/dE (the classical period).
struct ActionValue {
  Complex action;
  Complex period;
  int nodes_used = 0;
  bool converged = false;
  double est_error = 0.0;  // |I_2n - I_n| from the final node doubling
  std::vector<double> doubling_steps;  // every |I_2n - I_n| along the way
};

// Gauss-Chebyshev quadrature on E - V_eps = (z-alpha)(beta-z) g(z): second
// kind for the action, first kind for the period.  Node counts double until
// |I_2n - I_n| < 1e-10 * (1 + |I|); with require_converged the failure to
// reach that raises NotConverged instead of returning converged == false.
ActionValue action_integral(const Potential& pot, Complex E, Complex eps,
                            const TurningPair& tp, int n_nodes = 64,
                            bool require_converged = false);

}  // namespace ptwell
