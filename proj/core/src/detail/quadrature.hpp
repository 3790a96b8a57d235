#pragma once

#include <vector>

#include "ptwell/types.hpp"

namespace ptwell::detail {

struct QuadRule {
  std::vector<double> nodes;    // ascending in [-1, 1]
  std::vector<double> weights;
};

// Gauss-Legendre rule, nodes from Newton iteration on P_n.  Cached per n.
const QuadRule& gauss_legendre(int n);

// Gauss-Chebyshev rules on [-1,1]:
//   first kind:  integral f(t) (1-t^2)^(-1/2) dt  ~  sum w_i f(t_i)
//   second kind: integral f(t) (1-t^2)^(+1/2) dt  ~  sum w_i f(t_i)
QuadRule chebyshev_first(int n);
QuadRule chebyshev_second(int n);

// Square root continued along a sequence of evaluations: picks the root of
// `value` closest to `prev`.  Flags an ambiguous choice (the two candidates
// nearly equidistant from prev, i.e. the branch rotated by ~pi/2 between
// nodes) through *ambiguous rather than deciding silently.
Complex continue_sqrt(Complex value, Complex prev, bool* ambiguous);

}  // namespace ptwell::detail
