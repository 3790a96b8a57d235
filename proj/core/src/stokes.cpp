#include "ptwell/stokes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "detail/quadrature.hpp"
#include "ptwell/errors.hpp"
#include "ptwell/parallel.hpp"

namespace ptwell {
namespace {

using detail::continue_sqrt;

constexpr double kTpDisk = 1e-3;
constexpr long kMaxPoints = 2'000'000;

}  // namespace

std::vector<double> StokesPolyline::phase_along() const {
  std::vector<double> out(phase.size());
  for (size_t i = 0; i < phase.size(); ++i)
    out[i] = kind == LineKind::Stokes ? phase[i].real() : phase[i].imag();
  return out;
}

double StokesPolyline::stokes_defect() const {
  double worst = 0.0;
  for (const Complex& p : phase)
    worst = std::max(worst, std::abs(kind == LineKind::Stokes ? p.imag() : p.real()));
  return worst;
}

std::array<Complex, 3> initial_directions(const Potential& pot, Complex E, Complex eps,
                                          Complex tp_point, LineKind kind) {
  if (std::abs(pot.eval(tp_point, eps) - E) > 1e-6 * (1.0 + std::abs(E)))
    raise(ErrorCode::BadInput, "point is not a turning point at this (E, eps)");
  Complex slope = pot.eval_d1(tp_point, eps);
  if (std::abs(slope) < 1e-6)
    raise(ErrorCode::NonSimpleTurningPoint, "turning point has (nearly) vanishing slope");

  // Local phase (2/3)(-V')^{1/2}(z-tp)^{3/2}: real along the Stokes angles
  // {-pi/3, pi/3, pi} - arg(V')/3, imaginary a further pi/3 over.
  double gamma = std::arg(slope);
  double base = -gamma / 3.0 + (kind == LineKind::AntiStokes ? std::numbers::pi / 3.0 : 0.0);
  std::array<Complex, 3> dirs;
  dirs[0] = std::polar(1.0, base - std::numbers::pi / 3.0);
  dirs[1] = std::polar(1.0, base + std::numbers::pi / 3.0);
  dirs[2] = std::polar(1.0, base + std::numbers::pi);
  return dirs;
}

StokesPolyline trace_line(const Potential& pot, Complex E, Complex eps,
                          const TurningPair& tp, Complex start, Complex dir,
                          LineKind kind, double max_len, Window window,
                          double max_step) {
  if (!(max_len > 0.0)) raise(ErrorCode::BadInput, "max_len must be positive");
  if (!(max_step > 0.0)) raise(ErrorCode::BadInput, "max_step must be positive");
  double dn = std::abs(dir);
  if (!(dn > 0.0)) raise(ErrorCode::BadInput, "zero direction");
  dir /= dn;

  double da = std::abs(start - tp.alpha);
  double db = std::abs(start - tp.beta);
  Complex home = da <= db ? tp.alpha : tp.beta;
  Complex other = da <= db ? tp.beta : tp.alpha;
  bool other_is_beta = da <= db;
  double d_home = std::min(da, db);
  double pair_gap = std::abs(tp.beta - tp.alpha);
  if (d_home < 1e-6 || d_home > 0.1 * pair_gap)
    raise(ErrorCode::BadInput, "start must sit just off one turning point");

  StokesPolyline line;
  line.kind = kind;
  line.start_direction = dir;
  line.closest_other = std::abs(start - other);

  auto q_of = [&](Complex z, Complex prev, bool* bad) {
    bool amb = false;
    Complex q = continue_sqrt(-(pot.eval(z, eps) - E), prev, &amb);
    if (amb) *bad = true;
    return q;
  };

  // Branch seed from the local linear model -(V - E) ~ -V'(home) (z - home).
  bool bad = false;
  Complex q = q_of(start, std::sqrt(-pot.eval_d1(home, eps) * (start - home)), &bad);
  if (bad) raise(ErrorCode::BranchJump, "root ambiguous at the trace start");

  Complex u = kind == LineKind::Stokes ? Complex(1.0, 0.0) : Complex(0.0, 1.0);
  Complex v0 = u / q;
  double sigma = ((std::conj(dir) * v0).real() > 0.0) ? 1.0 : -1.0;

  line.points.push_back(start);
  line.phase.push_back(0.0);
  Complex z = start;
  Complex phi = 0.0;
  bool escaped_home = false;

  // Bisect the last chord to the boundary of the termination disk, and close
  // the phase with a Simpson increment to the refined endpoint.
  auto finish_at_disk = [&](Complex z_new, Complex center, Termination term) {
    double t_lo = 0.0, t_hi = 1.0;
    for (int i = 0; i < 40; ++i) {
      double tm = 0.5 * (t_lo + t_hi);
      if (std::abs(z + tm * (z_new - z) - center) < kTpDisk)
        t_hi = tm;
      else
        t_lo = tm;
    }
    Complex z_end = z + t_hi * (z_new - z);
    bool b = false;
    Complex q_mid = q_of(0.5 * (z + z_end), q, &b);
    Complex q_end = q_of(z_end, q, &b);
    if (b) {
      line.termination = Termination::BranchJump;
      return;
    }
    phi += (q + 4.0 * q_mid + q_end) / 6.0 * (z_end - z);
    line.arclength += std::abs(z_end - z);
    line.points.push_back(z_end);
    line.phase.push_back(phi);
    line.closest_other = std::min(line.closest_other, std::abs(z_end - other));
    line.termination = term;
  };

  for (long it = 0;; ++it) {
    if (it >= kMaxPoints)
      raise(ErrorCode::StalledStep, "tracer exceeded the point budget");
    double d_near = std::min(std::abs(z - tp.alpha), std::abs(z - tp.beta));
    double gstep = std::min(max_step, 0.25 * d_near);
    double ds = gstep * std::abs(q);

    bad = false;
    Complex k1 = sigma * u / q;
    Complex k2 = sigma * u / q_of(z + 0.5 * ds * k1, q, &bad);
    Complex k3 = sigma * u / q_of(z + 0.5 * ds * k2, q, &bad);
    Complex k4 = sigma * u / q_of(z + ds * k3, q, &bad);
    Complex z_new = z + ds / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    Complex q_mid = q_of(0.5 * (z + z_new), q, &bad);
    Complex q_new = q_of(z_new, q, &bad);
    if (bad) {
      line.termination = Termination::BranchJump;
      break;
    }
    double step_len = std::abs(z_new - z);
    if (step_len < 1e-14 * (1.0 + std::abs(z)))
      raise(ErrorCode::StalledStep, "tracer step underflowed");

    if (!escaped_home && std::abs(z_new - home) > 2.0 * kTpDisk) escaped_home = true;

    if (std::abs(z_new - other) < kTpDisk) {
      finish_at_disk(z_new, other,
                     other_is_beta ? Termination::NearBeta : Termination::NearAlpha);
      break;
    }
    if (escaped_home && std::abs(z_new - home) < kTpDisk) {
      finish_at_disk(z_new, home,
                     other_is_beta ? Termination::NearAlpha : Termination::NearBeta);
      break;
    }

    phi += (q + 4.0 * q_mid + q_new) / 6.0 * (z_new - z);
    line.arclength += step_len;
    line.points.push_back(z_new);
    line.phase.push_back(phi);
    line.closest_other = std::min(line.closest_other, std::abs(z_new - other));
    z = z_new;
    q = q_new;

    if (!window.contains(z)) {
      line.termination = Termination::LeftWindow;
      break;
    }
    if (line.arclength >= max_len) {
      line.termination = Termination::MaxLength;
      break;
    }
  }
  return line;
}

StokesGraph stokes_graph(const Potential& pot, Complex E, Complex eps, Window window,
                         double max_len, double max_step) {
  StokesGraph g;
  g.tp = find_turning_pair(pot, E, eps);
  std::array<Complex, 3> da = initial_directions(pot, E, eps, g.tp.alpha);
  std::array<Complex, 3> db = initial_directions(pot, E, eps, g.tp.beta);

  g.lines.resize(6);
  parallel_for(6, [&](int i) {
    Complex tp_pt = i < 3 ? g.tp.alpha : g.tp.beta;
    Complex dir = i < 3 ? da[i] : db[i - 3];
    g.lines[i] = trace_line(pot, E, eps, g.tp, tp_pt + kTpDisk * dir, dir,
                            LineKind::Stokes, max_len, window, max_step);
  });

  g.closest_approach = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 6; ++i) {
    const StokesPolyline& ln = g.lines[i];
    g.closest_approach = std::min(g.closest_approach, ln.closest_other);
    if (i < 3 && ln.termination == Termination::NearBeta) ++g.alpha_connecting;
    if (i >= 3 && ln.termination == Termination::NearAlpha) ++g.beta_connecting;
  }
  g.connections = std::max(g.alpha_connecting, g.beta_connecting);
  return g;
}

}  // namespace ptwell
