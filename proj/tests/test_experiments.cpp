#include <doctest.h>

#include <cmath>

#include "cwl/errors.hpp"
#include "cwl/experiments.hpp"

using namespace cwl;

namespace {

RootSystem a1(double k) {
  double ks[] = {k};
  return RootSystem::build(parse_family("A1"), ks);
}

EnergyTrace synthetic(double floor) {
  EnergyTrace tr;
  for (int i = 0; i <= 40; ++i) {
    const double t = 0.5 * i;
    // oscillating transient, then a clean exponential
    const double d = t <= 3.0 ? (i % 2 ? -1.0 : 1.0) * 0.01 : std::exp(-t);
    tr.t.push_back(t);
    tr.diff.push_back(d);
    tr.diff_radial.push_back(d);
    tr.E.push_back(1.0);
  }
  tr.E0 = 1.0;
  tr.floor = floor;
  return tr;
}

}  // namespace

TEST_CASE("check helpers") {
  CHECK(check_le("a", 1.0, 1.0).pass);
  CHECK_FALSE(check_le("a", 1.1, 1.0).pass);
  CHECK(check_ge("b", 2.0, 2.0).pass);
  CHECK_FALSE(check_gt("c", 2.0, 2.0).pass);
  CHECK(check_gt("c", 2.1, 2.0).relation == ">");
  // NaN never passes
  CHECK_FALSE(check_le("n", std::nan(""), 1.0).pass);
  CHECK_FALSE(check_ge("n", std::nan(""), 1.0).pass);
}

TEST_CASE("report pass and metric lookup") {
  ExperimentReport r;
  CHECK_FALSE(r.pass());
  r.checks.push_back(check_le("x", 0.0, 1.0));
  r.metric("m", 2.5);
  CHECK(r.pass());
  CHECK(r.metric("m") == 2.5);
  r.checks.push_back(check_ge("y", 0.0, 1.0));
  CHECK_FALSE(r.pass());
}

TEST_CASE("time grids") {
  const auto lin = linear_times(0.0, 8.0, 5);
  CHECK(lin == std::vector<double>{0.0, 2.0, 4.0, 6.0, 8.0});
  const auto geo = geometric_times(1.0, 60.0, 1.1);
  CHECK(geo.front() == 1.0);
  CHECK(geo.back() <= 60.0);
  CHECK(geo.back() * 1.1 > 60.0);
  for (std::size_t i = 1; i < geo.size(); ++i) CHECK(geo[i] / geo[i - 1] == doctest::Approx(1.1));
  CHECK_THROWS_AS(linear_times(0.0, 1.0, 1), DomainError);
  CHECK_THROWS_AS(geometric_times(0.0, 1.0, 2.0), DomainError);
  CHECK_THROWS_AS(geometric_times(1.0, 2.0, 1.0), DomainError);
}

TEST_CASE("decay window skips the transient and stops at the floor") {
  const FitWindow w = decay_window(synthetic(1e-9), 0.0, false);
  REQUIRE(w.valid);
  CHECK(w.t.front() == doctest::Approx(3.5));
  // 100 * floor = 1e-7 cuts at e^{-t} >= 1e-7, t <= 16.1
  CHECK(w.t.back() == doctest::Approx(16.0));
  CHECK(w.fit.slope == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(w.fit.r_squared == doctest::Approx(1.0));
  // nothing above the floor: no window
  CHECK_FALSE(decay_window(synthetic(1.0), 0.0, false).valid);
}

TEST_CASE("model cutoff grows as the tolerance tightens") {
  const SpectralDensity d(a1(0.5));
  const RadialProfile f(1.0, 12, 1);
  const double loose = model_cutoff(d, f, std::nullopt, 1e-6);
  const double tight = model_cutoff(d, f, std::nullopt, 1e-13);
  CHECK(loose > 0.0);
  CHECK(tight > loose);
  CHECK(tight == std::round(tight));
  CHECK_THROWS_AS(model_cutoff(d, f, std::nullopt, 1e-300, 30.0), BudgetError);
}

TEST_CASE("mode names") {
  CHECK(parse_mode("model-profile") == DataMode::model_profile);
  CHECK(mode_name(DataMode::rank_one_transform) == "rank-one-transform");
  CHECK_THROWS_AS(parse_mode("bogus"), DomainError);
}

TEST_CASE("model pipeline: conservation and strict equipartition at k = 1") {
  const RootSystem rs = a1(1.0);
  PipelineSpec spec;
  spec.mode = DataMode::model_profile;
  spec.t_max = 4.0;
  const Pipeline p = build_pipeline(rs, spec);
  CHECK(p.fold_error < 1e-10);
  const auto times = linear_times(0.0, 4.0, 17);
  const ExperimentReport c = conservation_experiment(rs, p, times);
  CHECK(c.pass());
  CHECK(c.trace.has_value());
  const ExperimentReport e = strict_equipartition_experiment(rs, p, times);
  CHECK(e.pass());
}

TEST_CASE("rank-one mode refuses a rank-two family") {
  PipelineSpec spec;
  CHECK_THROWS_AS(build_pipeline(RootSystem::build(parse_family("A2"), std::vector<double>{1.0}), spec), DomainError);
}
