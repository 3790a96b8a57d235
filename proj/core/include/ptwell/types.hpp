#pragma once

#include <complex>

namespace ptwell {

using Complex = std::complex<double>;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  double midpoint() const { return 0.5 * (lo + hi); }
  bool contains(double x) const { return x >= lo && x <= hi; }
};

// Axis-aligned rectangle in the complex plane.  Used both as the analyticity
// window of a potential and as the contour box for zero counting.
struct Window {
  Interval re;
  Interval im;

  bool contains(Complex z) const { return re.contains(z.real()) && im.contains(z.imag()); }
};

}  // namespace ptwell
