#pragma once

#include <array>
#include <vector>

#include "ptwell/potential.hpp"
#include "ptwell/turning.hpp"
#include "ptwell/types.hpp"

namespace ptwell {

enum class LineKind { Stokes, AntiStokes };

enum class Termination { LeftWindow, MaxLength, NearAlpha, NearBeta, BranchJump };

// A traced level curve of phi(z) = integral (-(V_eps - E))^{1/2} dz: constant
// Im phi for a Stokes line, constant Re phi for an anti-Stokes line.
struct StokesPolyline {
  LineKind kind = LineKind::Stokes;
  std::vector<Complex> points;
  Complex start_direction;
  Termination termination = Termination::MaxLength;
  std::vector<Complex> phase;  // accumulated integral of q dz at each point
  double arclength = 0.0;
  double closest_other = 0.0;  // nearest approach to the non-start turning point

  // The component of the phase that grows along the line.
  std::vector<double> phase_along() const;
  // Largest excursion of the component that should stay constant (= 0).
  double stokes_defect() const;
};

// Directions of the three Stokes (or anti-Stokes) lines leaving a simple
// turning point, 2 pi / 3 apart: the angles where the local phase increment
// (-V_eps'(tp))^{1/2} (z - tp)^{3/2} is real (resp. imaginary).
std::array<Complex, 3> initial_directions(const Potential& pot, Complex E, Complex eps,
                                          Complex tp_point,
                                          LineKind kind = LineKind::Stokes);

// Integrates dz/ds = sigma/q (Stokes) or sigma*i/q (anti-Stokes) with the
// root branch-tracked step to step, geometric steps bounded by max_step and a
// quarter of the distance to the nearest turning point.  start should sit
// just off a turning point along dir (the usual offset is 1e-3).
StokesPolyline trace_line(const Potential& pot, Complex E, Complex eps,
                          const TurningPair& tp, Complex start, Complex dir,
                          LineKind kind, double max_len, Window window,
                          double max_step = 1e-2);

struct StokesGraph {
  TurningPair tp;
  std::vector<StokesPolyline> lines;  // alpha's three lines, then beta's three
  int alpha_connecting = 0;           // lines from alpha reaching beta
  int beta_connecting = 0;
  int connections = 0;        // distinct connecting curves, max of the two counts
  double closest_approach = 0.0;  // min over lines of closest_other
};

StokesGraph stokes_graph(const Potential& pot, Complex E, Complex eps, Window window,
                         double max_len = 50.0, double max_step = 1e-2);

}  // namespace ptwell
