#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cwl/cherednik_transform.hpp"
#include "cwl/execution.hpp"
#include "cwl/plancherel.hpp"
#include "cwl/wave_energy.hpp"

namespace cwl {

// One named comparison in a report.
struct Check {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  std::string relation;  // "<=", ">=", ">"
  bool pass = false;
};
Check check_le(std::string name, double value, double threshold);
Check check_ge(std::string name, double value, double threshold);
Check check_gt(std::string name, double value, double threshold);

struct Metric {
  std::string name;
  double value = 0.0;
};

enum class DataMode { rank_one_transform, model_profile };
std::string mode_name(DataMode mode);
DataMode parse_mode(const std::string& text);

// Everything needed to put initial data on the spectral side.
struct PipelineSpec {
  DataMode mode = DataMode::rank_one_transform;
  double radius = 1.0;        // Paley-Wiener radius R of (f, g)
  int profile_order = 12;     // model mode only
  double cutoff = 0.0;        // Lambda_max; 0 picks one from the data
  double cutoff_tolerance = 1e-13;
  double t_max = 8.0;         // largest |t| the oscillatory panels must resolve
  int order_a = 16;           // Gauss order on the energy grid
  int order_b = 12;           // Gauss order on the radial-density grid
  int sphere_resolution = 24; // d = 3 tensor rule; d = 2 uses the wall-graded rule
};

// Default rank-one data in [-R, R]: f = bump(0.1R, 0.9R, 12),
// g = bump(-0.15R, 0.85R, 12).
Function1D default_f(double radius);
Function1D default_g(double radius);

struct Pipeline {
  std::shared_ptr<const SpectralSource> source;
  std::shared_ptr<const RankOneTransform> transform;  // rank-one mode only
  std::optional<C0Calibration> calibration;
  std::optional<Function1D> f, g;                     // rank-one data
  GridSpec grid_a, grid_b;
  SpectralState state;
  RadialDensities densities;
  double fold_error = 0.0;  // model mode: folded density interpolation check
  double setup_seconds = 0.0;
};

// Rank-one mode needs d = 1; model mode takes any family with d <= 3.
Pipeline build_pipeline(const RootSystem& rs, const PipelineSpec& spec, Exec exec = Exec::parallel);
// Rank-one mode with caller data.
Pipeline build_pipeline(const RootSystem& rs, const PipelineSpec& spec, Function1D f, std::optional<Function1D> g,
                        Exec exec = Exec::parallel);

// Smallest Lambda (integer steps) with Lambda max_{[Lambda, 2 Lambda]} e(r) <
// tol int_0^Lambda e(r), e = (r^2 h_f^2 + h_g^2) |nu(r sigma)| r^{d-1} along a
// generic direction. BudgetError past `limit`.
double model_cutoff(const SpectralDensity& density, const RadialProfile& f, const std::optional<RadialProfile>& g,
                    double tol, double limit = 400.0);

std::vector<double> linear_times(double t0, double t1, int count);
std::vector<double> geometric_times(double t0, double t1, double ratio);

struct FitWindow {
  std::vector<double> t, value;  // samples used, |P - K| / E
  LineFit fit;
  bool valid = false;
};

struct ExperimentReport {
  std::string experiment;
  std::string family;
  std::vector<double> k;
  std::string mode;
  std::vector<Metric> metrics;
  std::vector<Check> checks;
  std::vector<std::string> notes;
  std::optional<EnergyTrace> trace;
  std::optional<FitWindow> window;
  std::vector<ClassicalEnergies> classical;  // parallel to trace->t when present
  std::vector<std::pair<double, SampledFunction>> profiles;
  double seconds = 0.0;

  bool pass() const;
  void metric(std::string name, double value) { metrics.push_back({std::move(name), value}); }
  double metric(const std::string& name) const;
};

// max |E(t) - E(0)| / E(0) <= tol over `times`, dual path <= tol, and
// K(-t) = K(t), P(-t) = P(t) at the largest time for the g = 0 part of the data.
ExperimentReport conservation_experiment(const RootSystem& rs, const Pipeline& p, const std::vector<double>& times,
                                         double tol = 1e-8, Exec exec = Exec::parallel);

// d odd, integer k: |P - K| / E <= tol for |t| >= (1 + margin) R, and some
// |t| < R with |P - K| / E > 10 tol.
ExperimentReport strict_equipartition_experiment(const RootSystem& rs, const Pipeline& p,
                                                 const std::vector<double>& times, double tol = 1e-6,
                                                 double margin = 0.05, Exec exec = Exec::parallel);

// d odd, non-integer k: linear fit of log |P - K| against t. The rate must
// reach 2 rate_factor gamma0 and 2 gamma_fit >= 2 * 0.9 * gamma_test for
// every gamma_test in test_fractions * gamma0.
ExperimentReport exponential_decay_experiment(const RootSystem& rs, const Pipeline& p,
                                              const std::vector<double>& times, double rate_factor = 0.81,
                                              double min_r_squared = 0.98,
                                              const std::vector<double>& test_fractions = {0.25, 0.5, 0.75, 0.9},
                                              Exec exec = Exec::parallel);

// d even: log-log slope of |P - K| <= -(d + D) + slack over the fit window,
// reported against -d - 2D as well.
ExperimentReport polynomial_decay_experiment(const RootSystem& rs, const Pipeline& p,
                                             const std::vector<double>& times, double slack = 0.5,
                                             Exec exec = Exec::parallel);

// k = 0, d = 1: energies against d'Alembert, and P = K exactly for |t| >= R.
ExperimentReport classical_oracle_experiment(const RootSystem& rs, const Pipeline& p,
                                             const std::vector<double>& times, double tol = 1e-6,
                                             Exec exec = Exec::parallel);

// Rank one: sup |u(t, x)| over |x| >= R + |t| + 3 dx below tol sup |u(t, .)|.
ExperimentReport finite_propagation_check(const RootSystem& rs, const Pipeline& p, const std::vector<double>& times,
                                          double dx = 0.02, double tol = 1e-6, Exec exec = Exec::parallel);

// Fit window for decay fits: samples with |P - K| >= 100 floor, from the
// largest |P - K| after the last sign change onward. Power laws and
// exponentials are asymptotic statements, so the transient before the last
// zero crossing is left out.
FitWindow decay_window(const EnergyTrace& trace, double t_min, bool log_time);

}  // namespace cwl
