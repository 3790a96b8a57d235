#include "ptwell/potential.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "ptwell/errors.hpp"

namespace ptwell {
namespace {

std::vector<double> dense_coeffs(const std::vector<Term>& terms) {
  int deg = 0;
  for (const auto& t : terms) deg = std::max(deg, t.power);
  std::vector<double> c(static_cast<size_t>(deg) + 1, 0.0);
  for (const auto& t : terms) c[static_cast<size_t>(t.power)] += t.coeff;
  return c;
}

std::vector<double> derivative(const std::vector<double>& c) {
  if (c.size() <= 1) return {0.0};
  std::vector<double> d(c.size() - 1, 0.0);
  for (size_t k = 1; k < c.size(); ++k) d[k - 1] = static_cast<double>(k) * c[k];
  return d;
}

template <typename T>
T horner(const std::vector<double>& c, T z) {
  T acc(0.0);
  for (size_t k = c.size(); k-- > 0;) acc = acc * z + c[k];
  return acc;
}

int degree_of(const std::vector<Term>& terms) {
  int deg = -1;
  for (const auto& t : terms)
    if (t.coeff != 0.0) deg = std::max(deg, t.power);
  return deg;  // -1 when identically zero
}

double leading_coeff(const std::vector<Term>& terms, int deg) {
  double c = 0.0;
  for (const auto& t : terms)
    if (t.power == deg) c += t.coeff;
  return c;
}

}  // namespace

Potential::Potential(std::vector<Term> v0_terms, std::vector<Term> w_terms, double e0,
                     Window window)
    : v0_terms_(std::move(v0_terms)), w_terms_(std::move(w_terms)), e0_(e0), window_(window) {
  if (v0_terms_.empty() && w_terms_.empty())
    raise(ErrorCode::EmptySpec, "potential has no V0 and no W terms");
  for (const auto& t : v0_terms_) {
    if (t.power < 0) raise(ErrorCode::BadInput, "negative power in V0");
    if (t.power % 2 != 0)
      raise(ErrorCode::ParityViolation,
            "V0 must be even; found power " + std::to_string(t.power));
  }
  for (const auto& t : w_terms_) {
    if (t.power < 0) raise(ErrorCode::BadInput, "negative power in W");
    if (t.power % 2 != 1)
      raise(ErrorCode::ParityViolation,
            "W must be odd; found power " + std::to_string(t.power));
  }
  if (!std::isfinite(e0_)) raise(ErrorCode::BadInput, "e0 is not finite");
  if (window_.re.hi <= window_.re.lo || window_.im.hi < window_.im.lo)
    raise(ErrorCode::BadInput, "empty analytic window");

  const int deg_v = degree_of(v0_terms_);
  const int deg_w = degree_of(w_terms_);
  if (deg_v >= 1 && leading_coeff(v0_terms_, deg_v) <= 0.0)
    raise(ErrorCode::HypothesisViolation, "leading V0 coefficient must be positive");
  m0_ = std::max({deg_v, deg_w, 0});

  v0_c_ = dense_coeffs(v0_terms_);
  v0_d1_ = derivative(v0_c_);
  v0_d2_ = derivative(v0_d1_);
  w_c_ = dense_coeffs(w_terms_);
  w_d1_ = derivative(w_c_);
  w_d2_ = derivative(w_d1_);
}

Complex Potential::eval(Complex z, Complex eps) const {
  return horner(v0_c_, z) + Complex(0, 1) * eps * horner(w_c_, z);
}

Complex Potential::eval_d1(Complex z, Complex eps) const {
  return horner(v0_d1_, z) + Complex(0, 1) * eps * horner(w_d1_, z);
}

Complex Potential::eval_d2(Complex z, Complex eps) const {
  return horner(v0_d2_, z) + Complex(0, 1) * eps * horner(w_d2_, z);
}

double Potential::v0_real(double x) const { return horner(v0_c_, x); }
double Potential::v0_real_d1(double x) const { return horner(v0_d1_, x); }

Interval Potential::well_interval() const {
  const double lo = window_.re.lo;
  const double hi = window_.re.hi;
  const int n = 4096;
  const double dx = (hi - lo) / n;

  auto f = [&](double x) { return v0_real(x) - e0_; };

  std::vector<double> roots;
  double prev_x = lo, prev_f = f(lo);
  double min_abs = std::abs(prev_f), min_x = lo;
  for (int i = 1; i <= n; ++i) {
    const double x = lo + i * dx;
    const double fx = f(x);
    if (std::abs(fx) < min_abs && i < n) {
      min_abs = std::abs(fx);
      min_x = x;
    }
    if (fx == 0.0) {
      roots.push_back(x);
    } else if (prev_f == 0.0) {
      // handled when prev sample was pushed
    } else if ((prev_f < 0.0) != (fx < 0.0)) {
      double a = prev_x, b = x, fa = prev_f;
      while (b - a > 1e-13) {
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        if (fm == 0.0) {
          a = b = m;
          break;
        }
        if ((fa < 0.0) != (fm < 0.0))
          b = m;
        else {
          a = m;
          fa = fm;
        }
      }
      roots.push_back(0.5 * (a + b));
    }
    prev_x = x;
    prev_f = fx;
  }

  if (roots.size() != 2) {
    // A sign-definite graze of the level e0 means a turning point with
    // vanishing slope rather than a missing well.  Polish the closest
    // approach with Newton on V0' before judging.
    double x_star = roots.size() == 1 ? roots[0] : min_x;
    for (int it = 0; it < 30; ++it) {
      const double d2 = horner(v0_d2_, x_star);
      if (d2 == 0.0) break;
      x_star -= v0_real_d1(x_star) / d2;
    }
    if (std::abs(f(x_star)) < 1e-9 * (1.0 + std::abs(e0_)) &&
        std::abs(v0_real_d1(x_star)) < 1e-8)
      raise(ErrorCode::DegenerateTurningPoint,
            "V0 - e0 grazes zero with vanishing slope near x=" + std::to_string(x_star));
    raise(ErrorCode::SingleWellViolation,
          "expected exactly 2 real roots of V0(x)=e0 in the window, found " +
              std::to_string(roots.size()));
  }

  std::sort(roots.begin(), roots.end());
  const double sl = v0_real_d1(roots[0]);
  const double sr = v0_real_d1(roots[1]);
  if (std::abs(sl) < 1e-8 || std::abs(sr) < 1e-8)
    raise(ErrorCode::DegenerateTurningPoint, "|V0'| < 1e-8 at a well endpoint");
  if (sl >= 0.0 || sr <= 0.0)
    raise(ErrorCode::SingleWellViolation, "slope signs at the roots do not bound a well");
  return Interval{roots[0], roots[1]};
}

HypothesisReport Potential::verify_hypotheses(int sample_count) const {
  HypothesisReport rep;
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> ux(window_.re.lo, window_.re.hi);
  std::uniform_real_distribution<double> uy(window_.im.lo, window_.im.hi);

  // Parity of the data: V0 even, W odd, checked numerically on samples.
  {
    double worst = 0.0;
    for (int i = 0; i < sample_count; ++i) {
      const double x = ux(rng);
      const double scale = 1.0 + std::abs(v0_real(x));
      worst = std::max(worst, std::abs(v0_real(-x) - v0_real(x)) / scale);
      const double w = horner(w_c_, x);
      worst = std::max(worst, std::abs(horner(w_c_, -x) + w) / (1.0 + std::abs(w)));
    }
    rep.checks.push_back({"parity", worst < 1e-13,
                          "max relative parity defect " + std::to_string(worst)});
  }

  // PT identity conj(V_eps(-conj z)) == V_eps(z) on random complex samples.
  {
    double worst = 0.0;
    const double eps_set[] = {0.0, 0.1, 0.3};
    for (int i = 0; i < sample_count; ++i) {
      const Complex z(ux(rng), uy(rng));
      for (double eps : eps_set) {
        const Complex v = eval(z, eps);
        const Complex defect = std::conj(eval(-std::conj(z), eps)) - v;
        worst = std::max(worst, std::abs(defect) / (1.0 + std::abs(v)));
      }
    }
    rep.checks.push_back({"pt-identity", worst < 1e-13,
                          "max relative PT defect " + std::to_string(worst)});
  }

  // Single well at level e0 with simple turning points of the right slopes.
  {
    bool ok = true;
    std::string detail;
    try {
      const Interval well = well_interval();
      std::ostringstream os;
      os << "well (" << well.lo << ", " << well.hi << "), slopes " << v0_real_d1(well.lo)
         << " / " << v0_real_d1(well.hi);
      detail = os.str();
    } catch (const Error& e) {
      ok = false;
      detail = e.what();
    }
    rep.checks.push_back({"single-well", ok, detail});
  }

  // Polynomial growth |d^a V0(x)| <= C (1+|x|)^(m0-a) for a = 0,1,2, sampled.
  {
    const std::vector<double>* tables[] = {&v0_c_, &v0_d1_, &v0_d2_};
    std::ostringstream os;
    bool ok = true;
    for (int a = 0; a <= 2; ++a) {
      double c_emp = 0.0;
      for (int i = 0; i <= sample_count; ++i) {
        const double x = window_.re.lo + (window_.re.hi - window_.re.lo) * i / sample_count;
        const double bound = std::pow(1.0 + std::abs(x), m0_ - a);
        c_emp = std::max(c_emp, std::abs(horner(*tables[a], x)) / bound);
      }
      if (!std::isfinite(c_emp)) ok = false;
      os << "C_" << a << "=" << c_emp << (a < 2 ? " " : "");
    }
    rep.checks.push_back({"growth-bound", ok, os.str()});
  }

  if (degree_of(w_terms_) > degree_of(v0_terms_))
    rep.warnings.push_back(
        "deg W > deg V0: perturbation is not relatively bounded at infinity; "
        "growth bound uses m0 = deg W");

  return rep;
}

Potential Potential::from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorCode::BadInput, std::string("invalid JSON: ") + e.what());
  }
  try {
    auto parse_terms = [](const nlohmann::json& arr) {
      std::vector<Term> terms;
      for (const auto& t : arr)
        terms.push_back({t.at(0).get<double>(), t.at(1).get<int>()});
      return terms;
    };
    const auto& w = j.at("window");
    Window window{{w.at("re").at(0).get<double>(), w.at("re").at(1).get<double>()},
                  {w.at("im").at(0).get<double>(), w.at("im").at(1).get<double>()}};
    return Potential(parse_terms(j.at("v0")), parse_terms(j.at("w")),
                     j.at("e0").get<double>(), window);
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorCode::BadInput, std::string("potential spec missing field: ") + e.what());
  }
}

Potential Potential::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::BadInput, "cannot open potential spec '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str());
}

std::string Potential::to_json_text() const {
  nlohmann::json j;
  j["v0"] = nlohmann::json::array();
  for (const auto& t : v0_terms_) j["v0"].push_back({t.coeff, t.power});
  j["w"] = nlohmann::json::array();
  for (const auto& t : w_terms_) j["w"].push_back({t.coeff, t.power});
  j["e0"] = e0_;
  j["window"] = {{"re", {window_.re.lo, window_.re.hi}}, {"im", {window_.im.lo, window_.im.hi}}};
  return j.dump(2) + "\n";
}

}  // namespace ptwell
