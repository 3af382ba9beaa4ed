#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cwl/wave_energy.hpp"

using namespace cwl;

namespace {

RootSystem a1(double k) {
  double ks[] = {k};
  return RootSystem::build(parse_family("A1"), ks);
}

ModelProfileSource model(double k, bool with_g = true) {
  std::optional<RadialProfile> g;
  if (with_g) g = RadialProfile(0.8, 12, 1);
  return ModelProfileSource(a1(k), RadialProfile(1.0, 12, 1), g);
}

}  // namespace

TEST_CASE("oscillatory panel") {
  CHECK(oscillatory_panel(0.0) == 0.5);
  CHECK(oscillatory_panel(8.0) == doctest::Approx(std::numbers::pi / 34.0));
}

TEST_CASE("propagation at t = 0 returns the data") {
  const ModelProfileSource src = model(0.5);
  const SpectralState s = build_state(src, GridSpec{10.0, 0.5, 8, 8});
  REQUIRE(s.nodes() > 0);
  const Propagated p = propagate(s, 0.0);
  for (std::size_t n = 0; n < s.nodes(); ++n) {
    CHECK(p.Fu[n] == s.samples[n].Ff);
    CHECK(p.dFu[n] == s.samples[n].Fg);
    CHECK(p.Ftu[n] == s.samples[n].Ftf);
  }
  // u_t = -r sin(tr) Ff + cos(tr) Fg
  const double t = 0.7;
  const Propagated q = propagate(s, t);
  const std::size_t n = s.nodes() / 2;
  const double r = s.r[n / s.sphere.size()];
  CHECK(std::abs(q.dFu[n] - (-r * std::sin(t * r) * s.samples[n].Ff + std::cos(t * r) * s.samples[n].Fg)) < 1e-14);
}

TEST_CASE("model energies: K(0) vanishes without g, energy is conserved") {
  const ModelProfileSource src = model(0.5, false);
  const SpectralState s = build_state(src, GridSpec{30.0, oscillatory_panel(6.0), 16, 8});
  const Energies e0 = energies(s, 0.0);
  CHECK(e0.K == 0.0);
  CHECK(e0.P > 0.0);
  for (double t : {0.5, 2.0, 6.0}) {
    const Energies e = energies(s, t);
    CHECK(std::abs(e.E - e0.E) < 1e-8 * e0.E);
  }
}

TEST_CASE("energy trace: both paths agree") {
  const ModelProfileSource src = model(0.5);
  const GridSpec grid{30.0, oscillatory_panel(4.0), 16, 8};
  const SpectralState s = build_state(src, grid);
  const RadialDensities d = radial_densities(src, grid);
  std::vector<double> times;
  for (int i = 0; i <= 8; ++i) times.push_back(0.5 * i);
  const EnergyTrace tr = energy_trace(s, d, times);
  CHECK(tr.t == times);
  CHECK(tr.max_drift < 1e-8);
  CHECK(tr.dual_path < 1e-8);
  CHECK(tr.filon_path < 1e-8);
  for (std::size_t i = 0; i < times.size(); ++i) {
    CHECK(tr.diff[i] == doctest::Approx(tr.P[i] - tr.K[i]).epsilon(1e-12));
    CHECK(tr.E[i] == doctest::Approx(tr.K[i] + tr.P[i]).epsilon(1e-14));
  }
  // Phi is even in r
  const RadialDensities m = radial_densities_reflected(src, d, grid.sphere_resolution);
  for (std::size_t i = 0; i < d.r.size(); i += 7) CHECK(std::abs(m.Phi[i] - d.Phi[i]) <= 1e-12 * std::abs(d.Phi[i]) + 1e-300);
}

TEST_CASE("folded density cache") {
  const ModelProfileSource src(RootSystem::build(parse_family("A2"), std::vector<double>{0.5}),
                               RadialProfile(1.0, 12, 2), std::nullopt);
  const auto a = src.folded(8.0, 12, Exec::serial);
  const auto b = src.folded(6.0, 12, Exec::serial);
  CHECK(a.get() == b.get());
  const auto c = src.folded(8.0, 16, Exec::serial);
  CHECK(c.get() != a.get());
}

TEST_CASE("d'Alembert energies") {
  const Function1D f = bump(0.0, 1.0, 4);
  const Function1D g = bump(0.2, 0.5, 4);
  // int ((1 - x^2)^4)'^2 = 64 B(3/2, 7) = 64 * 92160/2027025, int (1 - x^2)^8 = B(1/2, 9) = 20643840/34459425
  const ClassicalEnergies e0 = dalembert_energies(f, std::nullopt, 0.0);
  CHECK(e0.K == doctest::Approx(0.0));
  CHECK(e0.P == doctest::Approx(0.5 * 64.0 * 92160.0 / 2027025.0).epsilon(1e-13));
  const ClassicalEnergies eg = dalembert_energies(f, g, 0.0);
  CHECK(eg.K == doctest::Approx(0.5 * 0.5 * 20643840.0 / 34459425.0).epsilon(1e-13));
  const double E0 = eg.K + eg.P;
  for (double t : {0.3, 1.0, 1.5, 4.0}) {
    const ClassicalEnergies e = dalembert_energies(f, g, t);
    CHECK(e.K + e.P == doctest::Approx(E0).epsilon(1e-12));
    // the two travelling halves separate once t exceeds the support
    if (t >= 1.0) CHECK(e.K == doctest::Approx(e.P).epsilon(1e-12));
  }
}

TEST_CASE("k = 0 rank-one energies match d'Alembert") {
  auto tr = std::make_shared<const RankOneTransform>(a1(0.0), 1.0);
  const Function1D f = bump(0.1, 0.8, 8);
  const Function1D g = bump(-0.2, 0.6, 8, 0.5);
  const RankOneTransformSource src(tr, f, g, 1.0 / std::numbers::pi);
  const double cut = tr->suggest_cutoff({f, g});
  const SpectralState s = build_state(src, GridSpec{cut, oscillatory_panel(2.0), 16, 8});
  for (double t : {0.0, 0.4, 2.0}) {
    const Energies e = energies(s, t);
    const ClassicalEnergies c = dalembert_energies(f, g, t);
    CHECK(e.K == doctest::Approx(c.K).epsilon(1e-9));
    CHECK(e.P == doctest::Approx(c.P).epsilon(1e-9));
  }
}
