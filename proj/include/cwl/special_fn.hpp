#pragma once

#include <complex>
#include <span>
#include <vector>

#include "cwl/root_system.hpp"

namespace cwl {

using cplx = std::complex<double>;

// Principal branch of log Gamma (analytic on C minus (-inf, 0], limit from
// above on the negative axis). Reflection for Re z < 1/2, upward recurrence to
// |z| >= 10, then the Stirling series through the B_20 term.
// Throws PoleError carrying n when z = -n.
cplx log_gamma(cplx z);

// 1/Gamma(z); exactly zero at the poles.
cplx rgamma(cplx z);

// prod Gamma(numer) / prod Gamma(denom). Poles in the denominator give 0,
// poles in the numerator throw PoleError with the factor index.
cplx gamma_ratio(std::span<const cplx> numer, std::span<const cplx> denom);

// Certified upper bound on |prod Gamma(numer) / prod Gamma(denom)| from the
// leading Stirling term and the remainder bound
//   |R(xi)| <= sec^2(arg(xi)/2) / (12 |xi|),
// valid for |arg xi| < pi. Every argument must satisfy |xi| >= 1 and
// |arg xi| <= pi - sector_margin, otherwise DomainError.
double stirling_ratio_bound(std::span<const cplx> numer, std::span<const cplx> denom,
                            double sector_margin = 0.1);

// Gauss hypergeometric 2F1(a, b; c; z). Direct series for |z| <= 0.8, then
// the Pfaff map z -> z/(z-1) and the 1-z connection formula. When c-a-b is
// within 1e-6 of an integer the connection formula is evaluated at b±delta
// and b±2 delta and Richardson-combined (delta = 1e-4).
cplx gauss_2f1(cplx a, cplx b, cplx c, cplx z);

// Symmetric rank-one hypergeometric (Jacobi) function for roots ±s (mult.
// k1) and ±2s (mult. k2), normalized to 1 at x = 0:
//   2F1(rho/2 + lambda/s, rho/2 - lambda/s; k1 + k2 + 1/2; -sinh^2(s x / 2)),
// rho = k1 + 2 k2. It is the even part of the rank-one kernel G_lambda.
cplx jacobi_function(double k1, double k2, double s, cplx lambda, double x);

// Taylor coefficients of y coth(y) = sum_n c_n y^{2n}, n = 0..count-1.
std::vector<double> ycoth_coefficients(int count);

// Euclidean Fourier transform of the radial bump (1 - |x|^2/R^2)_+^m in
// dimension d:
//   h(lambda) = R^d pi^{d/2} Gamma(m+1) sum_j (-R^2 s/4)^j / (j! Gamma(j+m+d/2+1)),
// s = <lambda, lambda>. Entire in s, of exponential type R, decaying like
// r^{-(m+(d+1)/2)} on real rays.
class RadialProfile {
 public:
  // decay_budget N0: require m + (d+1)/2 > N0, else DomainError.
  RadialProfile(double radius, int order, int dim, int decay_budget = 0);

  // Real ray; even in r. Series for small R r, Bessel J beyond.
  double operator()(double r) const;
  // Entire continuation through s = <lambda, lambda> (power series).
  cplx at_square(cplx s) const;
  cplx operator()(const CVec& lambda) const;

  double radius() const { return radius_; }
  int order() const { return order_; }
  int dim() const { return dim_; }
  // Real-ray decay exponent m + (d+1)/2.
  double decay_exponent() const { return order_ + 0.5 * (dim_ + 1); }
  double value_at_origin() const { return prefactor_ / std::tgamma(nu_ + 1.0); }

 private:
  double radius_;
  int order_;
  int dim_;
  double nu_;
  double prefactor_;  // R^d pi^{d/2} Gamma(m+1)
};

inline RadialProfile pw_radial_profile(double radius, int order, int dim, int decay_budget = 0) {
  return RadialProfile(radius, order, dim, decay_budget);
}

}  // namespace cwl
