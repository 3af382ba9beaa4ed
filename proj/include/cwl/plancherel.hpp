#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <vector>

#include "cwl/execution.hpp"
#include "cwl/root_system.hpp"

namespace cwl {

using cplx = std::complex<double>;

// Per indivisible positive root data entering the density.
struct DensityRoot {
  int root_index = 0;
  Vec coroot;
  double k = 0.0;   // k_alpha
  double k2 = 0.0;  // k_{2 alpha}, zero when 2 alpha is not a root
};

enum class DensityMode { gamma_product, integer_polynomial };

// nu(lambda) = prod over indivisible positive roots of
//   Gamma(iz + k)/Gamma(iz) * Gamma((iz+k)/2 + k2)/Gamma((iz+k)/2)
//   * Gamma(-iz + k)/Gamma(-iz + 1) * Gamma((-iz+k)/2 + k2 + 1)/Gamma((-iz+k)/2),
// z = <lambda, coroot>. Also nu = const * pi * nu~ with pi = prod z and nu~
// the same product with Gamma(iz+1) in the first denominator.
class SpectralDensity {
 public:
  explicit SpectralDensity(const RootSystem& rs, DensityMode mode = DensityMode::gamma_product);

  // Density in the configured mode. Throws PoleError (factor = 4*root+ratio,
  // index = progression index) when lambda sits on a pole.
  cplx operator()(const CVec& lambda) const;
  cplx operator()(const Vec& lambda) const { return (*this)(CVec(lambda.cast<cplx>())); }

  cplx gamma_form(const CVec& lambda) const;
  // pi(lambda) = prod <lambda, coroot>.
  cplx pi(const CVec& lambda) const;
  // nu~(lambda).
  cplx reduced(const CVec& lambda) const;
  // const in nu = const * pi * nu~, matched against the Gamma form at
  // lambda* = rho + (1,..,1)/sqrt(d) (nudged if pi vanishes there).
  cplx factor_constant() const { return factor_constant_; }

  const RootSystem& root_system() const { return rs_; }
  const std::vector<DensityRoot>& roots() const { return roots_; }
  DensityMode mode() const { return mode_; }
  int dim() const { return rs_.dim(); }
  // D = |R0+|.
  int indivisible_count() const { return static_cast<int>(roots_.size()); }
  // |k| = sum over R+ of k_alpha.
  double total_multiplicity() const { return rs_.total_multiplicity(); }
  // k_alpha positive integers and k_{2alpha} nonnegative integers.
  bool polynomial_applies() const;

 private:
  RootSystem rs_;
  DensityMode mode_;
  std::vector<DensityRoot> roots_;
  cplx factor_constant_{1.0, 0.0};
};

// Closed form for integer multiplicities:
//   prod 2^{-(1+2k2)} z (z + i(k+2k2)) prod_{0<j<k} (z^2 + j^2)
//        prod_{0<=j<k2} (z^2 + (k+2j)^2).
class IntegerPolynomialDensity {
 public:
  // DomainError unless polynomial_applies().
  explicit IntegerPolynomialDensity(const SpectralDensity& density);
  cplx operator()(const CVec& lambda) const;
  // Total degree 2|k|.
  int degree() const { return degree_; }
  double constant() const { return constant_; }

 private:
  std::vector<DensityRoot> roots_;
  double constant_ = 1.0;
  int degree_ = 0;
};

inline IntegerPolynomialDensity integer_polynomial_density(const SpectralDensity& d) {
  return IntegerPolynomialDensity(d);
}

// Candidate singular heights of one root's factor along z = <lambda,coroot> = i y.
struct PoleCandidate {
  double y = 0.0;
  int numerator_poles = 0;
  int denominator_poles = 0;
  bool retained() const { return numerator_poles > denominator_poles; }
};

struct RootPoles {
  int root_index = 0;
  double coroot_norm = 0.0;
  std::vector<PoleCandidate> candidates;  // sorted by |y|
  // Smallest |y| of a retained pole, +inf when none in range.
  double first_height = std::numeric_limits<double>::infinity();
};

struct PoleLedger {
  std::vector<RootPoles> roots;
  double max_height = 0.0;
  // Strip half-width gamma0 = min over roots of first_height / |coroot|.
  double gamma0 = std::numeric_limits<double>::infinity();
  int minimizing_root = -1;
  Vec probe_direction;      // near-minimizing generic direction
  double probe_height = 0;  // Im of the probed pole along probe_direction
  // |nu| ratio at distances 1e-4 and 1e-3 from the pole (about 10 for a
  // simple pole).
  double residue_ratio = 0.0;
  bool residue_confirmed = false;
  // Sphere-sampled minimum, an upper bound approaching gamma0.
  double sampled_gamma0 = std::numeric_limits<double>::infinity();
};

// Symbolic enumeration of the Gamma-factor pole progressions up to |y| <=
// max_height, cancellation against denominator poles, and a numeric residue
// probe at the nearest retained pole.
PoleLedger pole_ledger(const SpectralDensity& density, double max_height = 40.0, int sphere_samples = 720);

// gamma0; +inf when the multiplicities are integers.
double strip_width(const SpectralDensity& density, int sphere_samples = 720);

struct GrowthProbe {
  double large_slope = 0.0;  // d log|nu| / d log|z| for |z| in [20, 2000]
  double small_slope = 0.0;  // same for real z in [1e-4, 1e-2]
  double expected_large = 0.0;  // 2|k|
  int expected_small = 0;       // |R0+|
};

// Least-squares slopes of log|nu(z sigma)| against log|z|; large |z| along
// Im z = gamma. Grid points landing on a pole are jittered using `seed`.
GrowthProbe growth_exponent_probe(const SpectralDensity& density, const Vec& sigma, double gamma,
                                  std::uint64_t seed = 1);

// Gamma form against the integer closed form at `count` random complex
// points, lambda = x + i y with x in [-box, box]^d, y in [-box/4, box/4]^d.
struct FormAgreement {
  int points = 0;
  double max_relative = 0.0;  // |gamma - poly| / max(|gamma|, |poly|)
  CVec worst;
};
// DomainError unless polynomial_applies().
FormAgreement density_form_agreement(const SpectralDensity& density, int count, std::uint64_t seed,
                                     double box = 10.0, Exec exec = Exec::parallel);

// Sphere rule on S^{d-1} with unnormalized surface weights (d = 1, 2, 3).
struct SphereRule {
  std::vector<Vec> directions;
  std::vector<double> weights;
  std::size_t size() const { return directions.size(); }
};
SphereRule sphere_rule(int dim, int resolution);

// Circle rule at radius r (d = 2): Gauss panels on every arc between walls,
// graded geometrically toward each wall from a first panel of 0.5/r, so the
// 1/r-wide wall layers of nu are resolved.
SphereRule wall_graded_circle(const SpectralDensity& density, double r, int order = 16);

// n(r) = int_{S^{d-1}} nu(r sigma) dsigma on [0, cutoff], tabulated on
// Chebyshev panels and evaluated by barycentric interpolation. d = 2 uses
// wall_graded_circle, d = 3 uses sphere_rule(3, resolution).
class FoldedDensity {
 public:
  FoldedDensity(const SpectralDensity& density, double cutoff, int sphere_resolution = 32, double panel = 0.25,
                int order = 20, Exec exec = Exec::parallel);
  cplx operator()(double r) const;
  // Direct sphere quadrature at r (no interpolation).
  cplx direct(double r) const;
  double cutoff() const { return cutoff_; }
  // Largest relative |interp - direct| at one off-node point per panel.
  double interpolation_error() const { return interp_error_; }

 private:
  const SpectralDensity* density_;
  double cutoff_, panel_;
  int order_;
  SphereRule sphere_;
  std::vector<double> nodes_;  // Chebyshev points on [-1, 1]
  std::vector<double> bary_;
  std::vector<cplx> values_;   // [panel * (order + 1) + j]
  double interp_error_ = 0.0;
};

// Least-squares slope and R^2 of y against x.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace cwl
