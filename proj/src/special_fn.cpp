#include "cwl/special_fn.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "cwl/errors.hpp"

namespace cwl {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfLog2Pi = 0.91893853320467274178;

// B_{2n} / (2n (2n-1)), n = 1..10.
constexpr std::array<double, 10> kStirling = {
    1.0 / 12.0,         -1.0 / 360.0,         1.0 / 1260.0,           -1.0 / 1680.0,       1.0 / 1188.0,
    -691.0 / 360360.0,  1.0 / 156.0,          -3617.0 / 122400.0,     43867.0 / 244188.0,  -174611.0 / 125400.0};

bool is_nonpositive_integer(cplx z) {
  return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real());
}

cplx stirling(cplx z) {
  cplx sum = (z - 0.5) * std::log(z) - z + kHalfLog2Pi;
  const cplx inv = 1.0 / z;
  const cplx inv2 = inv * inv;
  cplx p = inv;
  for (double c : kStirling) {
    sum += c * p;
    p *= inv2;
  }
  return sum;
}

// Re z >= 1/2.
cplx log_gamma_right(cplx z) {
  // Factors have Re > 0, so a product of two stays on the principal branch
  // and one log per pair suffices.
  cplx shift_sum{};
  while (std::abs(z) < 8.0) {
    if (std::abs(z + 1.0) < 8.0) {
      shift_sum += std::log(z * (z + 1.0));
      z += 2.0;
    } else {
      shift_sum += std::log(z);
      z += 1.0;
    }
  }
  return stirling(z) - shift_sum;
}

// log sin(pi z) on the branch continuous in Im z >= 0 that vanishes at 1/2:
//   -log 2 + i pi/2 - i pi z + log(1 - e^{2 pi i z}).
cplx log_sin_pi_upper(cplx z) {
  const double x = z.real(), y = z.imag();
  const double r = x - std::nearbyint(x);
  const double a = -2.0 * kPi * y;
  const double b = 2.0 * kPi * r;
  // 1 - e^{a+ib} without cancellation near a = b = 0.
  const double s = std::sin(0.5 * b);
  const double em1 = std::expm1(a);
  const cplx one_minus(-(em1 * std::cos(b) - 2.0 * s * s), -std::exp(a) * std::sin(b));
  return cplx(-std::log(2.0), 0.5 * kPi) - cplx(0.0, kPi) * z + std::log(one_minus);
}

cplx series_2f1(cplx a, cplx b, cplx c, cplx z) {
  cplx term{1.0, 0.0}, sum{1.0, 0.0};
  int small = 0;
  for (int n = 0; n < 20000; ++n) {
    const cplx num = (a + double(n)) * (b + double(n));
    if (num == cplx{}) return sum;
    term *= num / ((c + double(n)) * double(n + 1)) * z;
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum)) {
      if (++small == 3) return sum;
    } else {
      small = 0;
    }
  }
  throw ConvergenceError("gauss_2f1: series did not converge");
}

// Connection formula around z = 1, requires c-a-b away from integers.
cplx connection_1mz(cplx a, cplx b, cplx c, cplx z) {
  const cplx w = 1.0 - z;
  const cplx s = c - a - b;
  const std::array<cplx, 2> n1{c, s}, d1{c - a, c - b};
  const std::array<cplx, 2> n2{c, -s}, d2{a, b};
  cplx total{};
  const cplx g1 = gamma_ratio(n1, d1);
  if (g1 != cplx{}) total += g1 * series_2f1(a, b, 1.0 - s, w);
  const cplx g2 = gamma_ratio(n2, d2);
  if (g2 != cplx{}) total += g2 * std::pow(w, s) * series_2f1(c - a, c - b, s + 1.0, w);
  return total;
}

cplx around_one(cplx a, cplx b, cplx c, cplx z) {
  const cplx s = c - a - b;
  const double dist = std::abs(s - std::round(s.real()));
  if (dist > 1e-6) return connection_1mz(a, b, c, z);
  // Perturb b symmetrically; the average cancels the odd terms and two
  // Richardson levels the delta^2 and delta^4 terms. A larger delta keeps
  // the cancellation between the two connection terms (~eps/delta) small.
  constexpr double delta = 2e-3;
  auto sym = [&](double h) { return 0.5 * (connection_1mz(a, b + h, c, z) + connection_1mz(a, b - h, c, z)); };
  const cplx s1 = sym(delta), s2 = sym(2.0 * delta), s4 = sym(4.0 * delta);
  const cplx r1 = (4.0 * s1 - s2) / 3.0, r2 = (4.0 * s2 - s4) / 3.0;
  return (16.0 * r1 - r2) / 15.0;
}

}  // namespace

cplx log_gamma(cplx z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw DomainError("log_gamma: non-finite argument");
  if (is_nonpositive_integer(z)) {
    const long n = static_cast<long>(-z.real());
    throw PoleError("log_gamma: pole at z = " + std::to_string(-n), n);
  }
  if (z.real() >= 0.5) return log_gamma_right(z);
  if (z.imag() < 0.0) return std::conj(log_gamma(std::conj(z)));
  return std::log(kPi) - log_sin_pi_upper(z) - log_gamma_right(1.0 - z);
}

cplx rgamma(cplx z) {
  if (is_nonpositive_integer(z)) return {};
  return std::exp(-log_gamma(z));
}

cplx gamma_ratio(std::span<const cplx> numer, std::span<const cplx> denom) {
  cplx acc{};
  for (const cplx& d : denom)
    if (is_nonpositive_integer(d)) return {};
  for (std::size_t i = 0; i < numer.size(); ++i) {
    if (is_nonpositive_integer(numer[i]))
      throw PoleError("gamma_ratio: numerator factor on a pole", static_cast<long>(-numer[i].real()),
                      static_cast<int>(i));
    acc += log_gamma(numer[i]);
  }
  for (const cplx& d : denom) acc -= log_gamma(d);
  return std::exp(acc);
}

double stirling_ratio_bound(std::span<const cplx> numer, std::span<const cplx> denom, double sector_margin) {
  auto check = [&](cplx xi) {
    if (std::abs(xi) < 1.0 || std::abs(std::arg(xi)) > kPi - sector_margin) {
      std::ostringstream msg;
      msg << "stirling_ratio_bound: argument " << xi << " outside the Stirling sector";
      throw DomainError(msg.str());
    }
  };
  auto leading = [](cplx xi) { return ((xi - 0.5) * std::log(xi) - xi).real() + kHalfLog2Pi; };
  auto remainder = [](cplx xi) {
    const double c = std::cos(0.5 * std::arg(xi));
    return 1.0 / (12.0 * std::abs(xi) * c * c);
  };
  double log_bound = 0.0;
  for (const cplx& xi : numer) {
    check(xi);
    log_bound += leading(xi) + remainder(xi);
  }
  for (const cplx& xi : denom) {
    check(xi);
    log_bound -= leading(xi) - remainder(xi);
  }
  return std::exp(log_bound);
}

cplx gauss_2f1(cplx a, cplx b, cplx c, cplx z) {
  if (is_nonpositive_integer(c)) throw PoleError("gauss_2f1: c is a pole", static_cast<long>(-c.real()));
  if (a == cplx{} || b == cplx{} || z == cplx{}) return {1.0, 0.0};
  // Terminating series are polynomials; sum directly for any z.
  if (is_nonpositive_integer(a) || is_nonpositive_integer(b)) return series_2f1(a, b, c, z);
  if (std::abs(z) <= 0.8) return series_2f1(a, b, c, z);
  const cplx w = z / (z - 1.0);
  const cplx pfaff = std::pow(1.0 - z, -a);
  if (std::abs(w) <= 0.8) return pfaff * series_2f1(a, c - b, c, w);
  if (std::abs(1.0 - z) <= 0.8) return around_one(a, b, c, z);
  if (std::abs(1.0 - w) <= 0.8) return pfaff * around_one(a, c - b, c, w);
  std::ostringstream msg;
  msg << "gauss_2f1: no convergent representation for z = " << z;
  throw ConvergenceError(msg.str());
}

cplx jacobi_function(double k1, double k2, double s, cplx lambda, double x) {
  const double rho = k1 + 2.0 * k2;
  const double sh = std::sinh(0.5 * s * x);
  return gauss_2f1(0.5 * rho + lambda / s, 0.5 * rho - lambda / s, k1 + k2 + 0.5, -sh * sh);
}

std::vector<double> ycoth_coefficients(int count) {
  // g(y) = coth y - 1/y = sum g_n y^{2n+1} solves g' = 1 - g^2 - 2g/y, so
  // (2n+3) g_n = [n==0] - sum_{a+b=n-1} g_a g_b.
  std::vector<double> g(std::max(count - 1, 0));
  for (std::size_t n = 0; n < g.size(); ++n) {
    double conv = 0.0;
    for (std::size_t a = 0; a + 1 <= n; ++a) conv += g[a] * g[n - 1 - a];
    g[n] = ((n == 0 ? 1.0 : 0.0) - conv) / (2.0 * n + 3.0);
  }
  std::vector<double> c(count);
  if (count > 0) c[0] = 1.0;
  for (int n = 1; n < count; ++n) c[n] = g[n - 1];
  return c;
}

RadialProfile::RadialProfile(double radius, int order, int dim, int decay_budget)
    : radius_(radius), order_(order), dim_(dim), nu_(order + 0.5 * dim) {
  if (!(radius > 0.0)) throw DomainError("pw_radial_profile: radius must be positive");
  if (order < 1 || dim < 1) throw DomainError("pw_radial_profile: need m >= 1 and d >= 1");
  if (decay_exponent() <= decay_budget) {
    std::ostringstream msg;
    msg << "pw_radial_profile: order m=" << order << " decays like r^-" << decay_exponent()
        << ", not enough for the decay budget N0=" << decay_budget;
    throw DomainError(msg.str());
  }
  prefactor_ = std::pow(radius, dim) * std::pow(kPi, 0.5 * dim) * std::tgamma(order + 1.0);
}

cplx RadialProfile::at_square(cplx s) const {
  const cplx step = -radius_ * radius_ * s / 4.0;
  cplx term = 1.0 / std::tgamma(nu_ + 1.0);
  cplx sum = term;
  for (int j = 0; j < 4000; ++j) {
    term *= step / ((j + 1.0) * (j + 1.0 + nu_));
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum) && j > std::abs(step)) break;
  }
  return prefactor_ * sum;
}

double RadialProfile::operator()(double r) const {
  const double x = radius_ * std::abs(r);
  if (x * x <= 4.0 * (nu_ + 1.0)) return at_square(cplx(r * r, 0.0)).real();
  return prefactor_ * std::pow(2.0 / x, nu_) * std::cyl_bessel_j(nu_, x);
}

cplx RadialProfile::operator()(const CVec& lambda) const {
  cplx s{};
  for (Eigen::Index i = 0; i < lambda.size(); ++i) s += lambda[i] * lambda[i];
  if (s.imag() == 0.0 && s.real() >= 0.0) return (*this)(std::sqrt(s.real()));
  return at_square(s);
}

}  // namespace cwl
