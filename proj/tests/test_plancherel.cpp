#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "cwl/errors.hpp"
#include "cwl/plancherel.hpp"

using namespace cwl;

namespace {

constexpr double kPi = std::numbers::pi;

RootSystem make(const char* fam, std::vector<double> k) { return RootSystem::build(parse_family(fam), k); }

CVec point(std::initializer_list<cplx> v) {
  CVec x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (cplx c : v) x[i++] = c;
  return x;
}

}  // namespace

TEST_CASE("integer configurations: Gamma form equals the closed form") {
  const std::vector<RootSystem> cases{make("A1", {1}), make("A1", {3}), make("BC1", {1, 1}), make("BC1", {2, 0}),
                                      make("A2", {1}), make("A2", {2}), make("B2", {1, 1}), make("B2", {2, 1})};
  for (const auto& rs : cases) {
    CAPTURE(rs.name());
    const SpectralDensity d(rs);
    REQUIRE(d.polynomial_applies());
    CHECK(density_form_agreement(d, 100, 3).max_relative < 1e-10);
    CHECK(IntegerPolynomialDensity(d).degree() == static_cast<int>(std::lround(2 * rs.total_multiplicity())));
  }
  CHECK_THROWS_AS(IntegerPolynomialDensity(SpectralDensity(make("A1", {0.5}))), DomainError);
}

TEST_CASE("A1 k = 1 density is z(z + i)/2 up to the constant") {
  const SpectralDensity d(make("A1", {1}));
  for (double l : {0.3, 1.7, 6.0}) {
    const cplx z = std::sqrt(2.0) * l;
    const cplx want = z * (z + cplx(0, 1)) / 2.0;
    CHECK(std::abs(d(point({l})) - want) < 1e-12 * std::abs(want));
  }
}

TEST_CASE("conjugate symmetry on real lambda") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-8.0, 8.0);
  for (const auto& rs : {make("A1", {0.5}), make("BC1", {0.5, 1.5}), make("A2", {0.75}), make("B2", {0.5, 0.25})}) {
    const SpectralDensity d(rs);
    for (int t = 0; t < 30; ++t) {
      Vec l(rs.dim());
      for (int j = 0; j < rs.dim(); ++j) l[j] = u(rng);
      const cplx a = d(l), b = d(Vec(-l));
      CHECK(std::abs(b - std::conj(a)) <= 1e-13 * std::abs(a));
    }
  }
}

TEST_CASE("density vanishes to order |R0+| at the origin") {
  for (const auto& rs : {make("A1", {0.5}), make("A2", {1}), make("B2", {0.5, 0.5})}) {
    const SpectralDensity d(rs);
    Vec s = Vec::Ones(rs.dim());
    s[0] = 0.3;
    const GrowthProbe g = growth_exponent_probe(d, s, 0.1);
    CHECK(g.small_slope == doctest::Approx(g.expected_small).epsilon(1e-2));
    CHECK(g.large_slope == doctest::Approx(g.expected_large).epsilon(2e-2));
  }
}

TEST_CASE("strip width") {
  CHECK(strip_width(SpectralDensity(make("A1", {0.5}))) == doctest::Approx(0.5 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(std::isinf(strip_width(SpectralDensity(make("A1", {2})))));
  // first retained pole of Gamma(-iz + k)/Gamma(-iz + 1) sits at y = k for 0 < k < 1,
  // so the width grows with k there: k / |coroot|
  double prev = 0.0;
  for (double k : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    const double w = strip_width(SpectralDensity(make("A1", {k})));
    CHECK(w == doctest::Approx(k / std::sqrt(2.0)).epsilon(1e-14));
    CHECK(w >= prev);
    prev = w;
  }
  // B2 short coroots 2 e_i have length 2
  for (double k : {0.2, 0.4, 0.6}) CHECK(strip_width(SpectralDensity(make("B2", {k, 1.0}))) == doctest::Approx(k / 2.0));
}

TEST_CASE("pole ledger: residue probe confirms simple poles") {
  for (const auto& rs : {make("A1", {0.5}), make("BC1", {0.5, 0.5}), make("A2", {0.5}), make("B2", {0.5, 0.5})}) {
    CAPTURE(rs.name());
    const PoleLedger L = pole_ledger(SpectralDensity(rs));
    CHECK(L.residue_confirmed);
    // 10 for a simple pole, 100 where two progressions meet (BC1 at k = (1/2, 1/2))
    const double order = std::log10(L.residue_ratio);
    CHECK(std::abs(order - std::round(order)) < 0.02);
    CHECK(order >= 0.98);
    CHECK(L.sampled_gamma0 >= L.gamma0 * (1 - 1e-12));
    CHECK(L.sampled_gamma0 <= L.gamma0 * 1.01);
  }
}

TEST_CASE("pole at the ledger height is genuine") {
  const SpectralDensity d(make("A1", {0.5}));
  const PoleLedger L = pole_ledger(d);
  // along lambda = i y, |nu| grows without bound toward the first retained pole
  const double y = L.gamma0;
  const double near = std::abs(d(point({cplx(0.0, -y + 1e-6)})));
  const double far = std::abs(d(point({cplx(0.0, -0.5 * y)})));
  const double other = std::abs(d(point({cplx(0.0, y - 1e-6)})));
  CHECK(std::max(near, other) > 1e4 * far);
}

TEST_CASE("sphere rules integrate constants") {
  auto total = [](const SphereRule& s) {
    double w = 0;
    for (double x : s.weights) w += x;
    return w;
  };
  CHECK(total(sphere_rule(1, 8)) == doctest::Approx(2.0));
  CHECK(total(sphere_rule(2, 17)) == doctest::Approx(2 * kPi));
  CHECK(total(sphere_rule(3, 12)) == doctest::Approx(4 * kPi));
  CHECK_THROWS_AS(sphere_rule(4, 8), DomainError);
}

TEST_CASE("wall-graded circle matches the uniform rule on smooth integrands") {
  const SpectralDensity d(make("B2", {0.5, 0.5}));
  for (double r : {0.5, 5.0, 40.0}) {
    const SphereRule g = wall_graded_circle(d, r);
    const SphereRule u = sphere_rule(2, 400);
    auto integrate = [](const SphereRule& s, auto&& f) {
      double acc = 0;
      for (std::size_t i = 0; i < s.size(); ++i) acc += s.weights[i] * f(s.directions[i]);
      return acc;
    };
    auto f = [](const Vec& v) { return std::exp(v[0]) * std::cos(3 * v[1]) + v[0] * v[0]; };
    CHECK(integrate(g, f) == doctest::Approx(integrate(u, f)).epsilon(1e-12));
    double w = 0;
    for (double x : g.weights) w += x;
    CHECK(w == doctest::Approx(2 * kPi).epsilon(1e-14));
  }
}

TEST_CASE("wall-graded circle beats the uniform rule on nu at large radius") {
  const SpectralDensity d(make("A2", {0.5}));
  const double r = 60.0;
  auto integrate = [&](const SphereRule& s) {
    cplx acc = 0;
    for (std::size_t i = 0; i < s.size(); ++i) acc += s.weights[i] * d(Vec(r * s.directions[i]));
    return acc;
  };
  const cplx ref = integrate(wall_graded_circle(d, r, 32));
  const cplx graded = integrate(wall_graded_circle(d, r, 16));
  const cplx uniform = integrate(sphere_rule(2, static_cast<int>(wall_graded_circle(d, r, 16).size())));
  CHECK(std::abs(graded - ref) < 1e-11 * std::abs(ref));
  CHECK(std::abs(uniform - ref) > 10 * std::abs(graded - ref));
}

TEST_CASE("folded density interpolates the direct sphere quadrature") {
  const SpectralDensity d(make("B2", {0.5, 0.5}));
  const FoldedDensity n(d, 12.0, 24, 0.25, 24);
  CHECK(n.interpolation_error() < 1e-10);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 12.0);
  for (int t = 0; t < 20; ++t) {
    const double r = u(rng);
    const cplx a = n(r), b = n.direct(r);
    CHECK(std::abs(a - b) <= 1e-10 * std::max(std::abs(b), 1e-300) + 1e-300);
  }
  CHECK_THROWS_AS(n(12.5), DomainError);
  CHECK_THROWS_AS(n(-0.1), DomainError);
}

TEST_CASE("fit_line recovers an exact line") {
  const std::vector<double> x{0, 1, 2, 3}, y{1, 3, 5, 7};
  const LineFit f = fit_line(x, y);
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
  CHECK(f.r_squared == doctest::Approx(1.0));
}
