#pragma once

#include <complex>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cwl/execution.hpp"
#include "cwl/opdam_kernel.hpp"
#include "cwl/plancherel.hpp"
#include "cwl/quadrature.hpp"

namespace cwl {

// Smooth function on the line with a value evaluator, an optional analytic
// derivative (else an 8th-order central stencil) and a support radius:
// values vanish for |x| > support.
class Function1D {
 public:
  using Eval = std::function<cplx(double)>;

  Function1D() = default;
  Function1D(Eval value, Eval derivative, double support, std::string name = {});

  cplx operator()(double x) const { return value_(x); }
  cplx derivative(double x) const;
  double support() const { return support_; }
  const std::string& name() const { return name_; }
  bool has_analytic_derivative() const { return static_cast<bool>(derivative_); }

  // x -> f(-x).
  Function1D reflected() const;
  Function1D scaled(cplx a) const;
  // a f + b g.
  static Function1D combine(cplx a, const Function1D& f, cplx b, const Function1D& g);

 private:
  Eval value_, derivative_;
  double support_ = 0.0;
  std::string name_;
};

// (a0 + a1 x) e^{i omega x} (1 - ((x - c)/w)^2)_+^m with analytic derivative.
Function1D bump(double center, double half_width, int order, cplx a0 = 1.0, cplx a1 = 0.0, double omega = 0.0);

// Five smooth compactly supported test functions inside [-R, R]: centered
// even bump, off-center bump, complex modulated bump, linear-weighted bump,
// narrow bump.
std::vector<Function1D> bump_suite(double radius);

// Symmetric x quadrature on [-R, R]: graded Gauss-Legendre panels on
// [0, R] mirrored to [-R, 0], nodes stored for r > 0 only.
struct XGrid {
  std::vector<double> r;        // positive half nodes
  std::vector<double> weights;  // matching weights
  double radius = 0.0;
  double panel_length = 0.0;
  int order = 0;
  int levels = 0;

  static XGrid symmetric(double radius, double panel_length, int order, int levels);
  XGrid refined() const { return symmetric(radius, 0.5 * panel_length, order, levels + 1); }
  std::size_t half_size() const { return r.size(); }
};

// Values of a function on a symmetric grid, with its evaluator when known.
struct SampledFunction {
  std::vector<double> x;
  std::vector<cplx> values;
  double support = 0.0;
  std::optional<Function1D> evaluator;

  static SampledFunction sample(const Function1D& f, const std::vector<double>& x);
};

// Real symmetric lambda quadrature: composite Gauss-Legendre on [0, Lambda]
// mirrored to negative lambda.
struct SpectralGrid {
  std::vector<double> lambda;
  std::vector<double> weights;
  double cutoff = 0.0;

  static SpectralGrid symmetric(double cutoff, double panel_length, int order);
  std::size_t size() const { return lambda.size(); }
};

struct SpectralFunction {
  std::vector<double> lambda;
  std::vector<double> weights;  // quadrature weights when sampled on a SpectralGrid
  std::vector<cplx> values;
  double pw_radius = 0.0;
  double decay_exponent = 0.0;  // fitted log-log slope of |values| on the outer third
};

// T f(x) = f'(x) - rho f(x) + sum_j k_j beta_j (f(x) - f(-x)) / (1 - e^{-beta_j x}).
// For |x| < 1e-5 the quotient uses Simpson's rule for f(x) - f(-x); at
// x = 0 this is the l'Hopital limit 2 f'(0) / beta_j, so
// T f(0) = (1 + 2 sum k_j) f'(0) - rho f(0).
cplx apply_T(const RankOneConfig& cfg, const Function1D& f, double x);
// L f = T(T f), the inner derivative by an 8th-order stencil.
cplx apply_L(const RankOneConfig& cfg, const Function1D& f, double x);
// T f as a function (stencil derivative).
Function1D T_function(const RankOneConfig& cfg, const Function1D& f);

struct TransformOptions {
  double x_panel = 0.05;
  int x_order = 16;
  int graded_levels = 8;
  // Relative change tolerated between a grid and its refinement.
  double refine_tolerance = 1e-9;
};

struct TransformPair {
  cplx forward;  // F f(lambda) = int f(x) G_{i lambda}(-x) mu(x) dx
  cplx tilde;    // F~ f(lambda) = int conj(f(x)) G_{i lambda}(x) mu(x) dx
};

// Rank-one Dunkl-Cherednik transform for functions supported in [-R, R]
// (w0 = -1, so G_{-i w0 lambda}(w0 x) = G_{i lambda}(-x)).
class RankOneTransform {
 public:
  RankOneTransform(const RootSystem& rs, double support_radius, const TransformOptions& opts = {});

  const RootSystem& root_system() const { return density_.root_system(); }
  const RankOneConfig& config() const { return cfg_; }
  const SpectralDensity& density() const { return density_; }
  const XGrid& grid() const { return grid_; }
  double support_radius() const { return radius_; }

  // nu at real lambda (A1/BC1 coordinate).
  cplx nu(double lambda) const;

  // Transforms of every function at every lambda: result[i][f].
  std::vector<std::vector<TransformPair>> transform_many(const std::vector<Function1D>& fs,
                                                         const std::vector<cplx>& lambdas,
                                                         Exec exec = Exec::parallel) const;
  TransformPair transform_at(const Function1D& f, cplx lambda) const;

  SpectralFunction forward(const Function1D& f, const SpectralGrid& grid, Exec exec = Exec::parallel) const;
  SpectralFunction tilde(const Function1D& g, const SpectralGrid& grid, Exec exec = Exec::parallel) const;

  // f(x) = c0 int h(lambda) G_{i lambda}(x) nu(lambda) dlambda with h sampled
  // on a SpectralGrid (weights required).
  SampledFunction inverse(const SpectralFunction& h, const std::vector<double>& xs, double c0,
                          Exec exec = Exec::parallel) const;

  // Largest relative change of F f over `lambdas` when the x grid is refined
  // once; ConvergenceError above opts.refine_tolerance.
  double refinement_check(const Function1D& f, const std::vector<cplx>& lambdas) const;

  // Smallest cutoff Lambda with
  //   Lambda * max_{[Lambda, 2 Lambda]} (1 + lambda^2) |F f F~ f nu| < tol * scale
  // for every f; probes lambda in steps of 2 up to `limit`. BudgetError if none.
  double suggest_cutoff(const std::vector<Function1D>& fs, double tol = 1e-13, double limit = 200.0) const;

  // int f conj(g) mu dx on the transform's x grid.
  cplx inner(const Function1D& f, const Function1D& g) const;

 private:
  RankOneConfig cfg_;
  SpectralDensity density_;
  double radius_;
  TransformOptions opts_;
  XGrid grid_;
  std::vector<double> mu_;  // mu at the positive nodes (mu is even)
};

struct C0Calibration {
  double first = 0.0;   // from the wider reference bump (0.8 R)
  double second = 0.0;  // from the narrower one (0.5 R)
  double c0 = 0.0;
  double relative_spread = 0.0;
  bool consistent = false;  // spread <= 1e-8
};

// c0 minimizing the L2 round-trip error for two reference bumps.
C0Calibration calibrate_c0(const RankOneTransform& tr, const SpectralGrid& grid, Exec exec = Exec::parallel);

struct PlancherelDefect {
  cplx lhs, rhs;
  double defect = 0.0;  // |lhs - rhs| / max(|lhs|, ||f|| ||g||)
};
PlancherelDefect plancherel_check(const RankOneTransform& tr, const Function1D& f, const Function1D& g,
                                  const SpectralGrid& grid, double c0, Exec exec = Exec::parallel);

struct DiagonalizationDefect {
  double T = 0.0;  // sup |F(Tf) - i lambda F f| / ((1 + |lambda|) ||f||)
  double L = 0.0;  // sup |F(Lf) + lambda^2 F f| / ((1 + |lambda|)^2 ||f||)
};
DiagonalizationDefect diagonalization_check(const RankOneTransform& tr, const Function1D& f,
                                            const std::vector<double>& lambdas, Exec exec = Exec::parallel);

// |<T f, g> - <f, w0 T w0 g>| / (||T f|| ||g|| + ||f|| ||T w0 g||); in rank
// one -w0 T_{w0 xi} w0 = w0 T_xi w0.
double skew_adjointness_defect(const RankOneTransform& tr, const Function1D& f, const Function1D& g);

// sup_lambda |F~ g(lambda) - conj(F(w0 g)(w0 lambda))| / sup |F~ g|.
double tilde_consistency_defect(const RankOneTransform& tr, const Function1D& g,
                                const std::vector<double>& lambdas, Exec exec = Exec::parallel);

struct PaleyWienerReport {
  int exponent = 0;
  double sup_inner = 0.0;  // sup of (1 + |lambda|)^N e^{-R |Im lambda|} |F f|, |Re lambda| < cutoff/2
  double sup_tail = 0.0;   // same over the outer half of the rays
  bool bounded = false;    // finite and sup_tail <= sup_inner
};
PaleyWienerReport paley_wiener_check(const RankOneTransform& tr, const Function1D& f, int exponent,
                                     double cutoff, const std::vector<double>& imag_offsets,
                                     Exec exec = Exec::parallel);

// L2(mu) relative error of inverse(forward f) on the transform's grid.
double roundtrip_error(const RankOneTransform& tr, const Function1D& f, const SpectralGrid& grid, double c0,
                       Exec exec = Exec::parallel);

void write_csv(const SampledFunction& f, std::ostream& out);
void write_csv(const SpectralFunction& f, std::ostream& out);

}  // namespace cwl
