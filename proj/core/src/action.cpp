#include "ptwell/action.hpp"

#include <cmath>
#include <vector>

#include "detail/quadrature.hpp"
#include "ptwell/errors.hpp"

namespace ptwell {
namespace {

constexpr double kRelTol = 1e-10;
constexpr int kMaxNodes = 1 << 15;

struct Factored {
  const Potential* pot;
  Complex E, eps, alpha, beta, m, r;

  // g(z) = (E - V_eps(z)) / ((z-alpha)(beta-z)), with the analytic limits
  // g(alpha) = -V'(alpha)/(beta-alpha), g(beta) = V'(beta)/(beta-alpha)
  // taking over next to the (numerically exact) roots of the numerator.
  Complex g(double t) const {
    const Complex z = m + r * t;
    const Complex denom = (z - alpha) * (beta - z);
    const double scale = std::abs(beta - alpha);
    if (std::abs(z - alpha) < 1e-8 * scale)
      return -pot->eval_d1(alpha, eps) / (beta - alpha);
    if (std::abs(z - beta) < 1e-8 * scale)
      return pot->eval_d1(beta, eps) / (beta - alpha);
    return (E - pot->eval(z, eps)) / denom;
  }
};

// sqrt(g) at every node, branch anchored to the principal root at the node
// closest to t = 0 and continued outward node by node.
std::vector<Complex> sqrt_g_along(const Factored& fac, const std::vector<double>& nodes) {
  const int n = static_cast<int>(nodes.size());
  int mid = 0;
  for (int i = 1; i < n; ++i)
    if (std::abs(nodes[i]) < std::abs(nodes[mid])) mid = i;

  std::vector<Complex> s(n);
  s[mid] = std::sqrt(fac.g(nodes[mid]));
  bool ambiguous = false;
  for (int i = mid + 1; i < n; ++i) {
    s[i] = detail::continue_sqrt(fac.g(nodes[i]), s[i - 1], &ambiguous);
    if (ambiguous) raise(ErrorCode::BranchJump, "ambiguous sqrt(g) continuation");
  }
  for (int i = mid - 1; i >= 0; --i) {
    s[i] = detail::continue_sqrt(fac.g(nodes[i]), s[i + 1], &ambiguous);
    if (ambiguous) raise(ErrorCode::BranchJump, "ambiguous sqrt(g) continuation");
  }
  return s;
}

Complex action_at(const Factored& fac, int n) {
  const auto rule = detail::chebyshev_second(n);
  const auto s = sqrt_g_along(fac, rule.nodes);
  Complex acc(0.0);
  for (int i = 0; i < n; ++i) acc += rule.weights[i] * s[i];
  return 2.0 * fac.r * fac.r * acc;
}

Complex period_at(const Factored& fac, int n) {
  const auto rule = detail::chebyshev_first(n);
  const auto s = sqrt_g_along(fac, rule.nodes);
  Complex acc(0.0);
  for (int i = 0; i < n; ++i) acc += rule.weights[i] / s[i];
  return acc;
}

}  // namespace

ActionValue action_integral(const Potential& pot, Complex E, Complex eps,
                            const TurningPair& tp, int n_nodes, bool require_converged) {
  if (n_nodes < 4) raise(ErrorCode::BadInput, "need at least 4 quadrature nodes");
  Factored fac{&pot, E, eps, tp.alpha, tp.beta, 0.5 * (tp.alpha + tp.beta),
               0.5 * (tp.beta - tp.alpha)};
  if (std::abs(fac.r) < 1e-10) raise(ErrorCode::RootCollision, "degenerate segment");

  ActionValue out;
  Complex prev = action_at(fac, n_nodes);
  int n = n_nodes;
  while (n <= kMaxNodes / 2) {
    n *= 2;
    const Complex cur = action_at(fac, n);
    out.est_error = std::abs(cur - prev);
    out.doubling_steps.push_back(out.est_error);
    out.action = cur;
    out.nodes_used = n;
    if (out.est_error < kRelTol * (1.0 + std::abs(cur))) {
      out.converged = true;
      break;
    }
    prev = cur;
  }
  if (!out.converged && require_converged)
    raise(ErrorCode::NotConverged,
          "action quadrature stalled at est_error " + std::to_string(out.est_error));
  out.period = period_at(fac, n);
  return out;
}

}  // namespace ptwell
