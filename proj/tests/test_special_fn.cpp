#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "cwl/errors.hpp"
#include "cwl/special_fn.hpp"

using namespace cwl;

namespace {

constexpr double kPi = std::numbers::pi;

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_CASE("log_gamma on integers and half-integers") {
  CHECK(std::abs(log_gamma(1.0)) < 1e-15);
  CHECK(std::abs(log_gamma(2.0)) < 1e-15);
  CHECK(log_gamma(5.0).real() == doctest::Approx(std::log(24.0)).epsilon(1e-15));
  CHECK(log_gamma(0.5).real() == doctest::Approx(0.5 * std::log(kPi)).epsilon(1e-15));
}

TEST_CASE("log_gamma recurrence holds modulo 2 pi i") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-30.0, 30.0);
  for (int t = 0; t < 200; ++t) {
    const cplx z(u(rng), u(rng));
    const cplx d = log_gamma(z + 1.0) - log_gamma(z) - std::log(z);
    CHECK(std::abs(d.real()) < 1e-11 * std::max(1.0, std::abs(log_gamma(z))));
    const double turns = d.imag() / (2 * kPi);
    CHECK(std::abs(turns - std::round(turns)) < 1e-11 * std::max(1.0, std::abs(log_gamma(z))));
  }
}

TEST_CASE("reflection formula through rgamma") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (int t = 0; t < 100; ++t) {
    const cplx z(u(rng), u(rng));
    // 1/(Gamma(z) Gamma(1-z)) = sin(pi z) / pi
    CHECK(rel(rgamma(z) * rgamma(1.0 - z), std::sin(kPi * z) / kPi) < 1e-12);
  }
}

TEST_CASE("poles") {
  CHECK(rgamma(-3.0) == cplx(0.0));
  try {
    log_gamma(-4.0);
    FAIL("expected a pole");
  } catch (const PoleError& e) {
    CHECK(e.index() == 4);
  }
  const cplx num[] = {1.5};
  const cplx den[] = {-2.0};
  CHECK(gamma_ratio(num, den) == cplx(0.0));
  const cplx bad[] = {0.0};
  const cplx one[] = {1.0};
  CHECK_THROWS_AS(gamma_ratio(bad, one), PoleError);
}

TEST_CASE("gamma_ratio against tgamma") {
  const cplx num[] = {3.5, 0.25};
  const cplx den[] = {2.0, 1.75};
  const double want = std::tgamma(3.5) * std::tgamma(0.25) / (std::tgamma(2.0) * std::tgamma(1.75));
  CHECK(rel(gamma_ratio(num, den), want) < 1e-14);
}

TEST_CASE("Stirling ratio bound dominates the ratio") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> re(1.0, 40.0), im(-40.0, 40.0);
  for (int t = 0; t < 200; ++t) {
    const cplx num[] = {cplx(re(rng), im(rng)), cplx(re(rng), im(rng))};
    const cplx den[] = {cplx(re(rng), im(rng))};
    const double bound = stirling_ratio_bound(num, den);
    CHECK(std::abs(gamma_ratio(num, den)) <= bound * (1.0 + 1e-12));
  }
  const cplx small[] = {0.5};
  CHECK_THROWS_AS(stirling_ratio_bound(small, {}), DomainError);
}

TEST_CASE("2F1 special values") {
  CHECK(rel(gauss_2f1(0.3, 0.7, 1.5, 0.0), 1.0) < 1e-16);
  // 2F1(a, b; b; z) = (1 - z)^{-a}
  for (double z : {-0.5, 0.3, 0.85, -4.0, -60.0})
    CHECK(rel(gauss_2f1(0.7, 1.3, 1.3, z), std::pow(1.0 - z, -0.7)) < 1e-12);
  // 2F1(1, 1; 2; z) = -log(1 - z) / z
  for (double z : {-0.2, 0.5, -3.0, -50.0}) CHECK(rel(gauss_2f1(1.0, 1.0, 2.0, z), -std::log1p(-z) / z) < 1e-12);
}

TEST_CASE("2F1 Euler transformation") {
  // 2F1(a,b;c;z) = (1-z)^{c-a-b} 2F1(c-a, c-b; c; z)
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> p(0.1, 2.0), zs(-8.0, 0.7);
  for (int t = 0; t < 50; ++t) {
    const double a = p(rng), b = p(rng), c = p(rng) + 0.3, z = zs(rng);
    const cplx lhs = gauss_2f1(a, b, c, z);
    const cplx rhs = std::pow(1.0 - z, c - a - b) * gauss_2f1(c - a, c - b, c, z);
    CHECK(rel(lhs, rhs) < 1e-10);
  }
}

TEST_CASE("Jacobi function normalization") {
  CHECK(rel(jacobi_function(0.5, 0.0, std::sqrt(2.0), cplx(0.3, 2.0), 0.0), 1.0) < 1e-15);
  // k = 0: cosh(lambda x) for s = sqrt 2
  const cplx lam(0.4, 1.7);
  CHECK(rel(jacobi_function(0.0, 0.0, std::sqrt(2.0), lam, 1.3), std::cosh(lam * 1.3)) < 1e-12);
}

TEST_CASE("y coth y coefficients") {
  const auto c = ycoth_coefficients(4);
  REQUIRE(c.size() == 4);
  CHECK(c[0] == doctest::Approx(1.0));
  CHECK(c[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(c[2] == doctest::Approx(-1.0 / 45.0).epsilon(1e-15));
  CHECK(c[3] == doctest::Approx(2.0 / 945.0).epsilon(1e-15));
}

TEST_CASE("radial profile value at the origin is the bump's integral") {
  // int_{-1}^{1} (1 - x^2)^2 dx = 16/15
  CHECK(RadialProfile(1.0, 2, 1)(0.0) == doctest::Approx(16.0 / 15.0).epsilon(1e-14));
  // disk: int (1 - |x|^2)^m = pi / (m + 1)
  CHECK(RadialProfile(1.0, 3, 2)(0.0) == doctest::Approx(kPi / 4.0).epsilon(1e-14));
  // scaling: R^d
  CHECK(RadialProfile(2.0, 3, 2)(0.0) == doctest::Approx(4.0 * kPi / 4.0).epsilon(1e-14));
}

TEST_CASE("radial profile: series and Bessel branches agree and continuation matches") {
  const RadialProfile h(1.5, 6, 3);
  for (double r : {0.5, 2.0, 5.0, 9.0, 17.0}) {
    CHECK(std::abs(h.at_square(r * r).real() - h(r)) < 1e-9 * std::max(1.0, std::abs(h(0.0))));
    CVec l(3);
    l << r * 0.6, r * 0.8, 0.0;
    CHECK(std::abs(h(l) - h(r)) < 1e-9 * std::abs(h(0.0)));
  }
  CHECK(h(-2.0) == doctest::Approx(h(2.0)));
  CHECK_THROWS_AS(RadialProfile(1.0, 2, 2, 8), DomainError);
}

TEST_CASE("radial profile decay") {
  // |h(r)| r^{m + (d+1)/2} stays bounded
  const RadialProfile h(1.0, 4, 1);
  double big = 0.0;
  for (double r = 50.0; r < 400.0; r += 3.7) big = std::max(big, std::abs(h(r)) * std::pow(r, h.decay_exponent()));
  double mid = 0.0;
  for (double r = 10.0; r < 50.0; r += 3.7) mid = std::max(mid, std::abs(h(r)) * std::pow(r, h.decay_exponent()));
  CHECK(big < 3.0 * mid);
}
