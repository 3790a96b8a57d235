// Command line front end: spectrum | action | wkb | stokes | certify.
// All numeric output is printed with %.17g so repeated runs are
// byte-identical; results go to --out when given, stdout otherwise.
// Exit codes: 0 success, 2 hypothesis violation, 3 numerical failure.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ptwell/action.hpp"
#include "ptwell/bohr_sommerfeld.hpp"
#include "ptwell/errors.hpp"
#include "ptwell/potential.hpp"
#include "ptwell/shooting.hpp"
#include "ptwell/stokes.hpp"
#include "ptwell/turning.hpp"
#include "ptwell/types.hpp"
#include "ptwell/wkb.hpp"

using namespace ptwell;

namespace {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Output destination: a file when --out is set, stdout otherwise.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) raise(ErrorCode::BadInput, "cannot open output file: " + path);
      os_ = &file_;
    }
  }
  std::ostream& out() { return *os_; }

 private:
  std::ofstream file_;
  std::ostream* os_ = &std::cout;
};

Potential load_spec(const std::string& path) { return Potential::from_json_file(path); }

// Every subcommand starts by validating the structural hypotheses of the
// operator family; a failed check is a usage error, not a numerical one.
void require_hypotheses(const Potential& pot) {
  const HypothesisReport rep = pot.verify_hypotheses();
  for (const auto& w : rep.warnings) std::cerr << "warning: " << w << "\n";
  if (rep.all_passed()) return;
  for (const auto& c : rep.checks)
    if (!c.passed) raise(ErrorCode::HypothesisViolation, c.name + ": " + c.detail);
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> xs(n);
  for (int i = 0; i < n; ++i)
    xs[i] = (n == 1) ? lo : lo + (hi - lo) * static_cast<double>(i) / (n - 1);
  return xs;
}

struct SpectrumOpts {
  std::string spec, out;
  double eps = 0.0, h = 0.0, box_l = 0.0;
  std::vector<double> window;
  int nodes = 64;
};

void run_spectrum(const SpectrumOpts& o) {
  if (!(o.h > 0.0)) raise(ErrorCode::BadInput, "h must be positive");
  if (!(o.window[0] < o.window[1])) raise(ErrorCode::BadInput, "window must be nonempty");
  const Potential pot = load_spec(o.spec);
  require_hypotheses(pot);
  const Interval win{o.window[0], o.window[1]};
  std::vector<EigenvalueRecord> recs = solve_bs(pot, Complex(o.eps, 0.0), o.h, win, o.nodes);
  attach_shooting(recs, pot, o.eps, o.h, win, o.box_l);

  Sink sink(o.out);
  sink.out() << "k,E_bs_re,E_bs_im,E_shoot_re,E_shoot_im,bs_residual,im_abs\n";
  for (const auto& r : recs) {
    sink.out() << r.k << ',' << g17(r.e_bs.real()) << ',' << g17(r.e_bs.imag()) << ',';
    if (r.e_shoot)
      sink.out() << g17(*r.e_shoot) << ',' << g17(0.0) << ',';
    else
      sink.out() << ",,";
    sink.out() << g17(r.bs_residual) << ',' << g17(r.im_abs) << '\n';
  }
}

struct ActionOpts {
  std::string spec, out;
  double eps = 0.0, energy = 0.0, energy_im = 0.0;
  std::vector<double> window;
  int grid_n = 9, nodes = 64;
  bool sweep = false;
};

void run_action(const ActionOpts& o) {
  if (o.sweep && !(o.window[0] < o.window[1]))
    raise(ErrorCode::BadInput, "window must be nonempty");
  const Potential pot = load_spec(o.spec);
  require_hypotheses(pot);
  std::vector<Complex> energies;
  if (o.sweep) {
    for (double e : linspace(o.window[0], o.window[1], o.grid_n)) energies.emplace_back(e, 0.0);
  } else {
    energies.emplace_back(o.energy, o.energy_im);
  }

  Sink sink(o.out);
  sink.out() << "E_re,E_im,eps,I_re,I_im,T_re,T_im,nodes,est_error\n";
  std::optional<TurningSeed> seed;
  for (const Complex e : energies) {
    const TurningPair tp = find_turning_pair(pot, e, Complex(o.eps, 0.0), seed);
    seed = TurningSeed{tp.alpha, tp.beta};
    const ActionValue av = action_integral(pot, e, Complex(o.eps, 0.0), tp, o.nodes);
    sink.out() << g17(e.real()) << ',' << g17(e.imag()) << ',' << g17(o.eps) << ','
               << g17(av.action.real()) << ',' << g17(av.action.imag()) << ','
               << g17(av.period.real()) << ',' << g17(av.period.imag()) << ','
               << av.nodes_used << ',' << g17(av.est_error) << '\n';
  }
}

struct WkbOpts {
  std::string spec, out;
  double eps = 0.0, energy = 0.0, energy_im = 0.0, h = 0.0;
  double grid_lo = 0.0, grid_hi = 0.0;
  bool have_lo = false, have_hi = false;
  int order = 2, grid_n = 16;
};

void run_wkb(const WkbOpts& o) {
  if (!(o.h > 0.0)) raise(ErrorCode::BadInput, "h must be positive");
  const Potential pot = load_spec(o.spec);
  require_hypotheses(pot);
  const Complex e(o.energy, o.energy_im);
  const Complex eps(o.eps, 0.0);
  const TurningPair tp = find_turning_pair(pot, e, eps);

  // Default grid: a one-width band starting a quarter width past the real
  // turning point at Re E, the region where the expansion is uniformly valid.
  const TurningPair tp0 = find_turning_pair(pot, Complex(e.real(), 0.0), Complex(0.0, 0.0));
  const double width = tp0.beta.real() - tp0.alpha.real();
  const double lo = o.have_lo ? o.grid_lo : tp0.beta.real() + 0.25 * width;
  const double hi = o.have_hi ? o.grid_hi : lo + width;
  if (!(hi > lo)) raise(ErrorCode::BadInput, "wkb grid range must be increasing");
  const std::vector<double> grid = linspace(lo, hi, std::max(2, o.grid_n));

  const WKBExpansion ex = transport_coeffs(pot, e, eps, tp, o.order, grid);
  const PhaseFunction phase(pot, e, eps, tp, Side::Right);

  Sink sink(o.out);
  sink.out() << "x";
  for (int k = 0; k <= o.order; ++k) sink.out() << ",a" << k << "_re,a" << k << "_im";
  sink.out() << ",phi_re,phi_im\n";
  for (std::size_t i = 0; i < ex.grid.size(); ++i) {
    sink.out() << g17(ex.grid[i]);
    for (int k = 0; k <= o.order; ++k)
      sink.out() << ',' << g17(ex.a_k_values[k][i].real()) << ','
                 << g17(ex.a_k_values[k][i].imag());
    const Complex phi = phase.eval(ex.grid[i]);
    sink.out() << ',' << g17(phi.real()) << ',' << g17(phi.imag()) << '\n';
  }

  const ResidualOrders ro =
      wkb_residual_order(pot, e, eps, tp, o.order, {o.h, o.h / 2.0, o.h / 4.0});
  sink.out() << "h,residual,order\n";
  for (std::size_t i = 0; i < ro.h_list.size(); ++i) {
    sink.out() << g17(ro.h_list[i]) << ',' << g17(ro.residuals[i]) << ',';
    if (i > 0) sink.out() << g17(ro.orders[i - 1]);
    sink.out() << '\n';
  }
}

struct StokesOpts {
  std::string spec, out;
  double eps = 0.0, energy = 0.0, energy_im = 0.0, max_len = 50.0;
  std::vector<double> rect;
};

const char* kind_name(LineKind k) { return k == LineKind::Stokes ? "stokes" : "anti_stokes"; }

const char* termination_name(Termination t) {
  switch (t) {
    case Termination::LeftWindow: return "left_window";
    case Termination::MaxLength: return "max_length";
    case Termination::NearAlpha: return "near_alpha";
    case Termination::NearBeta: return "near_beta";
    case Termination::BranchJump: return "branch_jump";
  }
  return "unknown";
}

std::string pair_json(Complex z) {
  return "[" + g17(z.real()) + "," + g17(z.imag()) + "]";
}

void run_stokes(const StokesOpts& o) {
  const Potential pot = load_spec(o.spec);
  require_hypotheses(pot);
  Window win = pot.window();
  if (!o.rect.empty()) win = Window{{o.rect[0], o.rect[1]}, {o.rect[2], o.rect[3]}};
  const StokesGraph g = stokes_graph(pot, Complex(o.energy, o.energy_im),
                                     Complex(o.eps, 0.0), win, o.max_len);

  Sink sink(o.out);
  std::ostream& os = sink.out();
  os << "{\n";
  os << "  \"alpha\": " << pair_json(g.tp.alpha) << ",\n";
  os << "  \"beta\": " << pair_json(g.tp.beta) << ",\n";
  os << "  \"connections\": " << g.connections << ",\n";
  os << "  \"closest_approach\": " << g17(g.closest_approach) << ",\n";
  os << "  \"lines\": [\n";
  for (std::size_t i = 0; i < g.lines.size(); ++i) {
    const StokesPolyline& ln = g.lines[i];
    os << "    {\"kind\": \"" << kind_name(ln.kind) << "\", \"start\": "
       << pair_json(ln.points.front()) << ", \"dir\": " << pair_json(ln.start_direction)
       << ", \"termination\": \"" << termination_name(ln.termination)
       << "\", \"arclength\": " << g17(ln.arclength)
       << ", \"stokes_defect\": " << g17(ln.stokes_defect()) << ", \"points\": [";
    for (std::size_t j = 0; j < ln.points.size(); ++j) {
      if (j) os << ',';
      os << pair_json(ln.points[j]);
    }
    os << "]}" << (i + 1 < g.lines.size() ? "," : "") << "\n";
  }
  os << "  ]\n}\n";
}

struct CertifyOpts {
  std::string spec, out;
  double eps = 0.0, h = 0.0, box_l = 0.0;
  std::vector<double> rect;
  int boundary_n = 64;
};

void run_certify(const CertifyOpts& o) {
  if (!(o.h > 0.0)) raise(ErrorCode::BadInput, "h must be positive");
  if (o.eps < 0.0) raise(ErrorCode::BadInput, "certify needs eps >= 0 (reality claims)");
  if (!(o.rect[0] < o.rect[1]) || !(o.rect[2] < o.rect[3]))
    raise(ErrorCode::BadInput, "rect must be nonempty");
  const Potential pot = load_spec(o.spec);
  require_hypotheses(pot);
  const Window rect{{o.rect[0], o.rect[1]}, {o.rect[2], o.rect[3]}};
  const int count = zero_count_winding(pot, o.eps, o.h, rect, o.box_l, o.boundary_n);
  const std::vector<double> zeros =
      real_eigen_scan(pot, o.eps, o.h, rect.re, o.box_l);

  Sink sink(o.out);
  std::ostream& os = sink.out();
  os << "{\n";
  os << "  \"rect\": [" << g17(o.rect[0]) << ',' << g17(o.rect[1]) << ',' << g17(o.rect[2])
     << ',' << g17(o.rect[3]) << "],\n";
  os << "  \"zero_count\": " << count << ",\n";
  os << "  \"real_zeros\": [";
  for (std::size_t i = 0; i < zeros.size(); ++i) {
    if (i) os << ',';
    os << g17(zeros[i]);
  }
  os << "],\n";
  os << "  \"match\": " << (count == static_cast<int>(zeros.size()) ? "true" : "false")
     << "\n}\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semiclassical spectra of complex-deformed single-well operators"};
  app.require_subcommand(1);
  // --h is a numeric option here, so the short help alias must go.
  app.set_help_flag("--help", "print help and exit");

  SpectrumOpts so;
  CLI::App* sp = app.add_subcommand(
      "spectrum", "Quantization-rule eigenvalues with shooting cross-check (CSV)");
  sp->set_help_flag("--help", "print help and exit");
  sp->add_option("--spec", so.spec, "potential description (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  sp->add_option("--eps", so.eps, "deformation strength");
  sp->add_option("--h", so.h, "semiclassical parameter")->required();
  sp->add_option("--window", so.window, "real energy window: lo hi")
      ->expected(2)
      ->required();
  sp->add_option("--nodes", so.nodes, "starting quadrature node count");
  sp->add_option("--box-l", so.box_l, "shooting box half-length (0 = auto)");
  sp->add_option("--out", so.out, "output file (default stdout)");

  ActionOpts ao;
  CLI::App* ac = app.add_subcommand("action", "Action integral and period (CSV)");
  ac->set_help_flag("--help", "print help and exit");
  ac->add_option("--spec", ao.spec, "potential description (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  ac->add_option("--eps", ao.eps, "deformation strength");
  ac->add_option("--energy", ao.energy, "real part of the energy");
  ac->add_option("--energy-im", ao.energy_im, "imaginary part of the energy");
  CLI::Option* ac_win =
      ac->add_option("--window", ao.window, "sweep real energies: lo hi")->expected(2);
  ac->add_option("--grid-n", ao.grid_n, "sweep point count")->check(CLI::PositiveNumber);
  ac->add_option("--nodes", ao.nodes, "starting quadrature node count");
  ac->add_option("--out", ao.out, "output file (default stdout)");

  WkbOpts wo;
  CLI::App* wk = app.add_subcommand(
      "wkb", "Expansion coefficients, phase, and residual orders (CSV)");
  wk->set_help_flag("--help", "print help and exit");
  wk->add_option("--spec", wo.spec, "potential description (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  wk->add_option("--eps", wo.eps, "deformation strength");
  wk->add_option("--energy", wo.energy, "real part of the energy")->required();
  wk->add_option("--energy-im", wo.energy_im, "imaginary part of the energy");
  wk->add_option("--h", wo.h, "base semiclassical parameter for the residual ladder")
      ->required();
  wk->add_option("--order", wo.order, "truncation order N")->check(CLI::NonNegativeNumber);
  wk->add_option("--grid-n", wo.grid_n, "output grid point count");
  CLI::Option* wk_lo = wk->add_option("--grid-lo", wo.grid_lo, "output grid start");
  CLI::Option* wk_hi = wk->add_option("--grid-hi", wo.grid_hi, "output grid end");
  wk->add_option("--out", wo.out, "output file (default stdout)");

  StokesOpts to;
  CLI::App* st = app.add_subcommand("stokes", "Stokes and anti-Stokes geometry (JSON)");
  st->set_help_flag("--help", "print help and exit");
  st->add_option("--spec", to.spec, "potential description (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  st->add_option("--eps", to.eps, "deformation strength");
  st->add_option("--energy", to.energy, "real part of the energy")->required();
  st->add_option("--energy-im", to.energy_im, "imaginary part of the energy");
  st->add_option("--max-len", to.max_len, "arclength budget per line");
  st->add_option("--rect", to.rect, "tracing window: re_lo re_hi im_lo im_hi")->expected(4);
  st->add_option("--out", to.out, "output file (default stdout)");

  CertifyOpts co;
  CLI::App* ce = app.add_subcommand(
      "certify", "Winding count vs real zero scan over a rectangle (JSON)");
  ce->set_help_flag("--help", "print help and exit");
  ce->add_option("--spec", co.spec, "potential description (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  ce->add_option("--eps", co.eps, "deformation strength");
  ce->add_option("--h", co.h, "semiclassical parameter")->required();
  ce->add_option("--rect", co.rect, "energy rectangle: re_lo re_hi im_lo im_hi")
      ->expected(4)
      ->required();
  ce->add_option("--box-l", co.box_l, "shooting box half-length (0 = auto)");
  ce->add_option("--boundary-n", co.boundary_n, "initial boundary sample count");
  ce->add_option("--out", co.out, "output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sp) {
      run_spectrum(so);
    } else if (*ac) {
      ao.sweep = ac_win->count() > 0;
      if (!ao.sweep && ac->count("--energy") == 0)
        raise(ErrorCode::BadInput, "action needs --energy or --window");
      run_action(ao);
    } else if (*wk) {
      wo.have_lo = wk_lo->count() > 0;
      wo.have_hi = wk_hi->count() > 0;
      run_wkb(wo);
    } else if (*st) {
      run_stokes(to);
    } else if (*ce) {
      run_certify(co);
    }
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return e.hypothesis_violation() ? 2 : 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
