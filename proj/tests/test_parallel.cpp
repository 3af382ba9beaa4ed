#include <doctest.h>

#include <omp.h>

#include <cstring>

#include "cwl/experiments.hpp"
#include "cwl/opdam_kernel.hpp"
#include "cwl/plancherel.hpp"
#include "cwl/wave_energy.hpp"

// Every parallel kernel must reproduce its serial reference bit for bit.

using namespace cwl;

namespace {

struct Threads {
  Threads() { omp_set_num_threads(4); }
};
const Threads force_threads;

RootSystem make(const char* fam, std::vector<double> k) { return RootSystem::build(parse_family(fam), k); }

bool same(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }
bool same(cplx a, cplx b) { return same(a.real(), b.real()) && same(a.imag(), b.imag()); }

template <class T>
bool same(const std::vector<T>& a, const std::vector<T>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!same(a[i], b[i])) return false;
  return true;
}

}  // namespace

TEST_CASE("density agreement sampling") {
  const SpectralDensity d(make("B2", {1, 2}));
  const FormAgreement s = density_form_agreement(d, 200, 5, 10.0, Exec::serial);
  const FormAgreement p = density_form_agreement(d, 200, 5, 10.0, Exec::parallel);
  CHECK(same(s.max_relative, p.max_relative));
  CHECK(s.worst == p.worst);
}

TEST_CASE("kernel table") {
  const RankOneConfig c = RankOneConfig::from(make("BC1", {0.5, 1.5}));
  std::vector<cplx> lambdas;
  for (int i = 0; i < 16; ++i) lambdas.emplace_back(0.7 * i - 5.0, 3.0 - 0.4 * i);
  std::vector<double> xs;
  for (int j = -10; j <= 10; ++j) xs.push_back(0.3 * j);
  const KernelTable s = build_kernel_table(c, lambdas, xs, 3.0, Exec::serial);
  const KernelTable p = build_kernel_table(c, lambdas, xs, 3.0, Exec::parallel);
  CHECK(same(s.values, p.values));
  CHECK(same(s.errors, p.errors));
}

TEST_CASE("transform_many") {
  const RankOneTransform tr(make("A1", {0.5}), 1.0);
  const auto suite = bump_suite(1.0);
  std::vector<cplx> lambdas;
  for (int i = 0; i < 24; ++i) lambdas.emplace_back(0.9 * i, 0.1 * (i % 3));
  const auto s = tr.transform_many(suite, lambdas, Exec::serial);
  const auto p = tr.transform_many(suite, lambdas, Exec::parallel);
  REQUIRE(s.size() == p.size());
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t f = 0; f < suite.size(); ++f) {
      CHECK(same(s[i][f].forward, p[i][f].forward));
      CHECK(same(s[i][f].tilde, p[i][f].tilde));
    }
}

TEST_CASE("spectral state, radial densities and energy trace") {
  const ModelProfileSource src(make("A1", {0.5}), RadialProfile(1.0, 12, 1), RadialProfile(0.8, 12, 1));
  const GridSpec grid{30.0, oscillatory_panel(4.0), 16, 8};
  const SpectralState s = build_state(src, grid, Exec::serial);
  const SpectralState p = build_state(src, grid, Exec::parallel);
  CHECK(same(s.nu, p.nu));
  const RadialDensities ds = radial_densities(src, grid, Exec::serial);
  const RadialDensities dp = radial_densities(src, grid, Exec::parallel);
  CHECK(same(ds.Phi, dp.Phi));
  CHECK(same(ds.Psi, dp.Psi));
  const auto times = linear_times(0.0, 4.0, 9);
  const EnergyTrace ts = energy_trace(s, ds, times, Exec::serial);
  const EnergyTrace tp = energy_trace(s, ds, times, Exec::parallel);
  CHECK(same(ts.K, tp.K));
  CHECK(same(ts.P, tp.P));
  CHECK(same(ts.diff_radial, tp.diff_radial));
  CHECK(same(ts.diff_filon, tp.diff_filon));
  CHECK(same(ts.max_drift, tp.max_drift));
}

TEST_CASE("folded density") {
  const SpectralDensity d(make("A2", {0.5}));
  const FoldedDensity s(d, 6.0, 16, 0.5, 24, Exec::serial);
  const FoldedDensity p(d, 6.0, 16, 0.5, 24, Exec::parallel);
  for (double r : {0.0, 0.37, 2.5, 5.99}) CHECK(same(s(r), p(r)));
  CHECK(same(s.interpolation_error(), p.interpolation_error()));
}
