#include <doctest.h>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <deque>

#include "cwl/opdam_kernel.hpp"
#include "cwl/plancherel.hpp"
#include "cwl/special_fn.hpp"
#include "cwl/wave_energy.hpp"
#include "oracles/frozen_values.hpp"

// Reference values computed independently: frozen 40-digit tables, 50-digit
// Boost arithmetic, brute-force group closure and finite differences.

using namespace cwl;
using Big = boost::multiprecision::cpp_bin_float_50;

namespace {

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

RootSystem make(const char* fam, std::vector<double> k) { return RootSystem::build(parse_family(fam), k); }

}  // namespace

TEST_CASE("log_gamma against frozen values") {
  for (const auto& c : frozen::log_gamma_cases) {
    CAPTURE(c.z);
    CHECK(std::abs(log_gamma(c.z) - c.value) <= 2e-14 * std::max(1.0, std::abs(c.value)));
  }
}

TEST_CASE("log_gamma against 50-digit lgamma on the real axis") {
  for (double x : {0.013, 0.5, 1.7, 3.25, 9.9, 17.5, 88.0, 1234.5}) {
    const double want = static_cast<double>(boost::math::lgamma(Big(x)));
    CHECK(std::abs(log_gamma(x).real() - want) <= 5e-15 * std::max(1.0, std::abs(want)));
    CHECK(log_gamma(x).imag() == 0.0);
  }
}

TEST_CASE("2F1 against frozen values") {
  for (const auto& c : frozen::hyp2f1_cases) {
    CAPTURE(c.z);
    CHECK(rel(gauss_2f1(c.a, c.b, c.c, c.z), c.value) < 1e-12);
  }
}

TEST_CASE("2F1 against a 50-digit series") {
  const double params[][4] = {{0.3, 0.7, 1.5, 0.4}, {1.25, -0.5, 0.75, -0.45}, {2.5, 1.5, 3.25, 0.3}};
  for (const auto& p : params) {
    Big a = p[0], b = p[1], c = p[2], z = p[3], term = 1, sum = 1;
    for (int n = 0; n < 400; ++n) {
      term *= (a + n) * (b + n) / ((c + n) * (n + 1)) * z;
      sum += term;
    }
    CHECK(rel(gauss_2f1(p[0], p[1], p[2], p[3]), static_cast<double>(sum)) < 1e-14);
  }
}

TEST_CASE("Jacobi function against frozen values") {
  for (const auto& c : frozen::jacobi_cases) {
    CAPTURE(c.lambda);
    CHECK(std::abs(jacobi_function(c.k1, c.k2, c.s, c.lambda, c.x) - c.value) <= 1e-12 * std::max(1.0, std::abs(c.value)));
  }
}

TEST_CASE("even part of the kernel against frozen Jacobi values") {
  for (const auto& c : frozen::jacobi_cases) {
    const bool a1 = c.k2 == 0.0 && std::abs(c.s - std::sqrt(2.0)) < 1e-15;
    const bool bc1 = c.s == 1.0;
    if (!a1 && !bc1) continue;
    const RankOneConfig cfg =
        RankOneConfig::from(a1 ? make("A1", {c.k1}) : make("BC1", {c.k1, c.k2}));
    const KernelSolution s(cfg, c.lambda, c.x);
    const cplx even = 0.5 * (s(c.x) + s(-c.x));
    CHECK(std::abs(even - c.value) <= 1e-9 * std::max(1.0, std::abs(c.value)));
  }
}

TEST_CASE("A1 density against frozen values") {
  for (const auto& c : frozen::a1_density_cases) {
    CAPTURE(c.lambda);
    const SpectralDensity d(make("A1", {c.k}));
    CVec l(1);
    l[0] = c.lambda;
    CHECK(rel(d.gamma_form(l), c.value) < 1e-12);
    CHECK(rel(d(l), c.value) < 1e-12);
  }
}

TEST_CASE("Weyl groups against brute-force closure of root reflections") {
  for (const auto& rs : {make("A1", {1}), make("BC1", {1, 1}), make("A2", {1}), make("B2", {1, 1}),
                         make("BC2", {1, 1, 1}), make("A1^3", {1})}) {
    CAPTURE(rs.name());
    std::vector<Mat> group{Mat::Identity(rs.dim(), rs.dim())};
    std::deque<Mat> todo{group.front()};
    auto known = [&](const Mat& m) {
      for (const auto& g : group)
        if ((g - m).norm() < 1e-9) return true;
      return false;
    };
    while (!todo.empty()) {
      const Mat g = todo.front();
      todo.pop_front();
      for (const auto& a : rs.roots()) {
        const Mat h = reflection_matrix(a.vector) * g;
        if (!known(h)) {
          group.push_back(h);
          todo.push_back(h);
        }
      }
    }
    REQUIRE(group.size() == rs.weyl_group().size());
    for (const auto& w : rs.weyl_group()) CHECK(known(w));
  }
}

TEST_CASE("kernel jet against finite differences") {
  // A1, k = 1, lambda = i: second Taylor coefficient of G at 0 by Richardson
  const RankOneConfig cfg = RankOneConfig::from(make("A1", {1}));
  const cplx lam(0.0, 1.0);
  const KernelJet jet = seed_series(cfg, lam, 8);
  const KernelSolution s(cfg, lam, 1.0);
  auto second = [&](double h) { return (s(h) - 2.0 * s(0.0) + s(-h)) / (h * h); };
  const double h = 0.02;
  const cplx rich = (4.0 * second(h / 2) - second(h)) / 3.0;
  CHECK(std::abs(jet.u()[2] - 0.5 * rich) < 1e-8);
  auto first = [&](double hh) { return (s(hh) - s(-hh)) / (2.0 * hh); };
  const cplx rich1 = (4.0 * first(h / 2) - first(h)) / 3.0;
  CHECK(std::abs(jet.u()[1] - rich1) < 1e-8);
  // G'(0) solves T G = lambda G at 0: (1 + 2k) G'(0) - rho = lambda
  CHECK(std::abs(jet.u()[1] - (lam + cfg.rho) / 3.0) < 1e-14);
}

TEST_CASE("d'Alembert energies against closed forms") {
  // f = (1 - x^2)^2 on [-1, 1], g = 0; for t >= 1 the halves separate and K = P = E/2
  const Function1D f = bump(0.0, 1.0, 2);
  // int (f')^2 = int 16 x^2 (1 - x^2)^2 = 256/105
  const double E = 0.5 * 256.0 / 105.0;
  const ClassicalEnergies e0 = dalembert_energies(f, std::nullopt, 0.0);
  CHECK(e0.P == doctest::Approx(E).epsilon(1e-14));
  const ClassicalEnergies e2 = dalembert_energies(f, std::nullopt, 2.0);
  CHECK(e2.K == doctest::Approx(E / 2).epsilon(1e-14));
  CHECK(e2.P == doctest::Approx(E / 2).epsilon(1e-14));
  // t = 1/2: overlap of f'(x + t) and f'(x - t) gives P - K = (1/2) int f'(x + t) f'(x - t) dx
  const double t = 0.5;
  const ClassicalEnergies e = dalembert_energies(f, std::nullopt, t);
  Big acc = 0;
  const int n = 20000;
  // midpoint rule on the polynomial overlap [-1 + t, 1 - t], error far below the tolerance
  const Big a = Big(-1) + t, b = Big(1) - t, hstep = (b - a) / n;
  for (int i = 0; i < n; ++i) {
    const Big x = a + (Big(i) + 0.5) * hstep;
    const Big u = x + t, v = x - t;
    acc += (-4 * u * (1 - u * u)) * (-4 * v * (1 - v * v));
  }
  const double overlap = static_cast<double>(acc * hstep);
  CHECK(e.P - e.K == doctest::Approx(0.5 * overlap).epsilon(1e-7));
}
