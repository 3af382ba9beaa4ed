#pragma once

#include <complex>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "cwl/execution.hpp"
#include "cwl/root_system.hpp"

namespace cwl {

using cplx = std::complex<double>;

// Rank-one data in the coordinate x along the unit vector of the positive
// roots: positive roots beta_j x with multiplicities k_j. A1 has one root
// (sqrt 2), BC1 two (1 and 2).
struct RankOneConfig {
  std::vector<double> betas;
  std::vector<double> ks;
  double rho = 0.0;  // (1/2) sum k_j beta_j
  int weyl_order = 2;

  static RankOneConfig from(const RootSystem& rs);
  double total_k() const;
};

// Taylor jet at x = 0 of p = u + v and w = u - v, where u(x) = G(x) and
// v(x) = G(-x). They solve
//   p' = (lambda - rho) w,
//   w' = (lambda + rho) p - sum_j k_j beta_j coth(beta_j x / 2) w,
// which is T G = lambda G with the reflection term written through coth.
struct KernelJet {
  std::vector<cplx> p, w;
  // Coefficients of u and v in powers of x.
  std::vector<cplx> u() const;
  std::vector<cplx> v() const;
};

// Recursion (n + q0) w_n = (lambda + rho) p_{n-1} - sum_{m>=1} q_m w_{n-m},
// n p_n = (lambda - rho) w_{n-1}, where x sum k beta coth(beta x/2) =
// sum q_m x^m and q0 = 2 sum k_j. The denominators n + q0 never vanish for
// k >= 0; order < 4 is rejected.
KernelJet seed_series(const RankOneConfig& cfg, cplx lambda, int order);

struct KernelOptions {
  double tolerance = 1e-13;  // local relative error per step
  int taylor_order = 30;
  bool lambda_derivative = false;  // also integrate d/dlambda
};

// G_lambda on [-x_max, x_max] from one pass of the coupled system. The seed
// series covers [0, x0]; beyond it a Taylor-series integrator with step
// control runs to x_max. Dense output through the stored step polynomials.
class KernelSolution {
 public:
  KernelSolution(const RankOneConfig& cfg, cplx lambda, double x_max, const KernelOptions& opts = {});

  cplx operator()(double x) const { return eval(x); }
  cplx eval(double x) const;
  // (G(r), G(-r)) for r >= 0 from one dense-output lookup.
  std::pair<cplx, cplx> eval_pair(double r) const;
  // Accumulated error estimate at x (absolute).
  double error(double x) const;
  // d/dx G_lambda(x).
  cplx derivative(double x) const;
  // d/dlambda G_lambda(x); needs opts.lambda_derivative.
  cplx lambda_derivative(double x) const;

  cplx lambda() const { return lambda_; }
  double x_max() const { return x_max_; }
  double seed_radius() const { return x0_; }
  int seed_order() const { return static_cast<int>(seed_.p.size()) - 1; }
  std::size_t steps() const { return segments_.size(); }

 private:
  struct Segment {
    double a = 0.0, h = 0.0;
    std::vector<cplx> p, w, pl, wl;
    double err = 0.0;  // accumulated absolute error at a + h
  };
  struct Local {
    cplx p, w, dp, dw, pl, wl;
    double err;
  };
  Local local(double r) const;

  RankOneConfig cfg_;
  cplx lambda_;
  double x_max_;
  bool with_dl_;
  double x0_ = 0.0;
  KernelJet seed_, seed_dl_;
  double seed_err_ = 0.0;
  std::vector<Segment> segments_;
};

// Single evaluation; solves on [0, |x|].
cplx eval_kernel_rank1(const RankOneConfig& cfg, cplx lambda, double x, const KernelOptions& opts = {});

struct KernelTable {
  RankOneConfig config;
  std::vector<cplx> lambdas;
  std::vector<double> xs;
  std::vector<cplx> values;     // row-major: values[i * xs.size() + j]
  std::vector<double> errors;   // same layout
  double x_max = 0.0;

  cplx at(std::size_t i, std::size_t j) const { return values[i * xs.size() + j]; }
  std::size_t size() const { return values.size(); }
};

// One kernel solve per lambda (parallel map), evaluation at every x.
// ConvergenceError when an error estimate exceeds `tolerance` relative to
// max(1, |G(x)|, |G(-x)|).
KernelTable build_kernel_table(const RankOneConfig& cfg, const std::vector<cplx>& lambdas,
                               const std::vector<double>& xs, double x_max, Exec exec = Exec::parallel,
                               double tolerance = 1e-10);

struct KernelBoundReport {
  std::size_t entries = 0;
  std::size_t violations = 0;
  std::size_t nonunit_origin = 0;  // entries at x = 0 with |G - 1| > 1e-12
  double min_margin = 0.0;         // min of log10(bound / |G|)
  std::vector<double> histogram_edges;
  std::vector<std::size_t> histogram;
};

// Checks |G_lambda(x)| <= |W|^{1/2} e^{|Re lambda| |x|} on every entry.
KernelBoundReport verify_kernel_bound(const KernelTable& table);

// CSV cache: lambda_re, lambda_im, x, G_re, G_im, err.
void write_kernel_csv(const KernelTable& table, std::ostream& out);
KernelTable read_kernel_csv(std::istream& in, const RankOneConfig& cfg);

}  // namespace cwl
