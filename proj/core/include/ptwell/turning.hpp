#pragma once

#include <optional>

#include "ptwell/potential.hpp"
#include "ptwell/types.hpp"

namespace ptwell {

// The pair of simple complex roots of V_eps(z) = E that deform the real well
// endpoints.  alpha continues the left endpoint, beta the right one; for real
// (E, eps) PT symmetry forces beta == -conj(alpha).
struct TurningPair {
  Complex alpha;
  Complex beta;
  double residual_alpha = 0.0;  // |V_eps(alpha) - E|
  double residual_beta = 0.0;
  Complex slope_alpha;  // V_eps'(alpha)
  Complex slope_beta;
};

struct TurningSeed {
  Complex alpha;
  Complex beta;
};

// Newton root finding seeded at the unperturbed well endpoints, walking from
// (e0, 0) to (E, eps) in straight parameter segments of length <= 0.05 so the
// two roots are followed on their own branches and never swapped.
TurningPair find_turning_pair(const Potential& pot, Complex E, Complex eps,
                              std::optional<TurningSeed> seed = std::nullopt);

}  // namespace ptwell
