#pragma once

#include <string>
#include <vector>

#include "ptwell/types.hpp"

namespace ptwell {

// One monomial c * x^p of the real polynomial data defining the operator.
struct Term {
  double coeff = 0.0;
  int power = 0;
};

struct HypothesisCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct HypothesisReport {
  std::vector<HypothesisCheck> checks;
  std::vector<std::string> warnings;

  bool all_passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }
};

// Family V_eps(x) = V0(x) + i*eps*W(x) with V0 even and W odd, both real
// polynomials, so that conj(V_eps(-conj z)) == V_eps(z).  e0 is the reference
// energy in the well and the analytic window bounds every complex evaluation
// the library performs (turning points, Stokes lines, quadrature paths).
class Potential {
 public:
  Potential(std::vector<Term> v0_terms, std::vector<Term> w_terms, double e0, Window window);

  // File format: {"v0":[[c,p],...],"w":[[c,p],...],"e0":num,
  //               "window":{"re":[a,b],"im":[c,d]}}
  static Potential from_json_text(const std::string& text);
  static Potential from_json_file(const std::string& path);
  std::string to_json_text() const;

  Complex eval(Complex z, Complex eps) const;     // V0(z) + i*eps*W(z)
  Complex eval_d1(Complex z, Complex eps) const;  // d/dz of the above
  Complex eval_d2(Complex z, Complex eps) const;

  double v0_real(double x) const;
  double v0_real_d1(double x) const;

  double e0() const { return e0_; }
  int m0() const { return m0_; }
  const Window& window() const { return window_; }
  const std::vector<Term>& v0_terms() const { return v0_terms_; }
  const std::vector<Term>& w_terms() const { return w_terms_; }

  // The two simple real roots of V0(x) = e0 bounding the well, to 1e-12.
  Interval well_interval() const;

  HypothesisReport verify_hypotheses(int sample_count = 256) const;

 private:
  std::vector<Term> v0_terms_;
  std::vector<Term> w_terms_;
  double e0_ = 0.0;
  int m0_ = 0;
  Window window_;

  // Dense coefficient tables (index = power) for Horner evaluation of the
  // polynomials and their first two derivatives.
  std::vector<double> v0_c_, v0_d1_, v0_d2_;
  std::vector<double> w_c_, w_d1_, w_d2_;
};

}  // namespace ptwell
