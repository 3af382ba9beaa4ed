#pragma once

#include <complex>
#include <iosfwd>
#include <limits>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "cwl/cherednik_transform.hpp"
#include "cwl/execution.hpp"
#include "cwl/plancherel.hpp"
#include "cwl/special_fn.hpp"

namespace cwl {

// Spectral data of the initial pair (f, g) at one lambda.
struct SpectralSample {
  cplx Ff, Fg;    // F f, F g
  cplx Ftf, Ftg;  // F~ f, F~ g
};

// Where spectral data comes from. Implementations are immutable and safe to
// sample concurrently.
class SpectralSource {
 public:
  virtual ~SpectralSource() = default;
  virtual int dim() const = 0;
  // Paley-Wiener radius of the data.
  virtual double radius() const = 0;
  virtual double c0() const = 0;
  virtual std::string provenance() const = 0;
  virtual const SpectralDensity& density() const = 0;
  // Radial sources return the sphere-folded density covering [0, cutoff];
  // the state then carries one pseudo-direction. Others return null.
  virtual std::shared_ptr<const FoldedDensity> folded(double cutoff, int sphere_resolution, Exec exec) const {
    (void)cutoff, (void)sphere_resolution, (void)exec;
    return nullptr;
  }
  // Samples at lambda = r_i sigma_j, laid out [i * dirs.size() + j].
  virtual std::vector<SpectralSample> sample(const std::vector<double>& r, const SphereRule& dirs,
                                             Exec exec) const = 0;
};

// Rank-one transform mode: genuine F, F~ of compactly supported (f, g).
class RankOneTransformSource final : public SpectralSource {
 public:
  RankOneTransformSource(std::shared_ptr<const RankOneTransform> tr, Function1D f, std::optional<Function1D> g,
                         double c0);
  int dim() const override { return 1; }
  double radius() const override;
  double c0() const override { return c0_; }
  std::string provenance() const override { return "rank-one-transform"; }
  const SpectralDensity& density() const override { return tr_->density(); }
  std::vector<SpectralSample> sample(const std::vector<double>& r, const SphereRule& dirs, Exec exec) const override;

  const RankOneTransform& transform() const { return *tr_; }
  const Function1D& f() const { return f_; }
  const std::optional<Function1D>& g() const { return g_; }

 private:
  std::shared_ptr<const RankOneTransform> tr_;
  Function1D f_;
  std::optional<Function1D> g_;
  double c0_;
};

// Model-profile mode: real W-invariant radial Paley-Wiener profiles, so
// F~ = conj(F) = F. The transform constant is taken as c0 = 1.
class ModelProfileSource final : public SpectralSource {
 public:
  ModelProfileSource(const RootSystem& rs, std::optional<RadialProfile> f, std::optional<RadialProfile> g);
  int dim() const override { return density_.dim(); }
  double radius() const override;
  double c0() const override { return 1.0; }
  std::string provenance() const override { return "model-profile"; }
  const SpectralDensity& density() const override { return density_; }
  std::shared_ptr<const FoldedDensity> folded(double cutoff, int sphere_resolution, Exec exec) const override;
  std::vector<SpectralSample> sample(const std::vector<double>& r, const SphereRule& dirs, Exec exec) const override;

 private:
  SpectralDensity density_;
  std::optional<RadialProfile> f_, g_;
  // reused between grids; rebuilt when a larger cutoff or another resolution is asked for
  mutable std::mutex cache_mutex_;
  mutable std::shared_ptr<const FoldedDensity> cache_;
  mutable int cache_resolution_ = 0;
};

// Radial-times-spherical spectral grid with the data and nu at every node.
struct SpectralState {
  int dim = 1;
  std::vector<double> r, r_weights;
  SphereRule sphere;
  std::vector<SpectralSample> samples;  // [i * sphere.size() + j]
  std::vector<cplx> nu;
  double c0 = 1.0;
  double radius = 0.0;
  double cutoff = 0.0;
  std::string provenance;

  std::size_t nodes() const { return samples.size(); }
  // Weight of node (i, j) in the lambda integral: w_i r_i^{d-1} s_j.
  double weight(std::size_t i, std::size_t j) const;
};

struct GridSpec {
  double cutoff = 40.0;
  double panel_length = 0.5;
  int order = 16;
  int sphere_resolution = 64;  // ignored for d = 1
};

// Panel length resolving cos(2 t r) up to t_max: min(pi / (2 (1 + 2 t_max)), 0.5).
double oscillatory_panel(double t_max);

SpectralState build_state(const SpectralSource& source, const GridSpec& grid, Exec exec = Exec::parallel);

struct Propagated {
  std::vector<cplx> Fu, dFu, Ftu, dFtu;
};
// F u(t) = cos(t r) F f + sin(t r)/r F g (limit t at r = 0), same for F~.
Propagated propagate(const SpectralState& state, double t);

struct Energies {
  double K = 0.0, P = 0.0, E = 0.0;
  double imag = 0.0;  // largest imaginary part dropped from K or P
};
// Expanded spectral integrals:
//   P = c0/2 int [r^2 cos^2 Ff F~f + sin^2 Fg F~g + (r/2) sin(2tr) C] nu,
//   K = c0/2 int [r^2 sin^2 Ff F~f + cos^2 Fg F~g - (r/2) sin(2tr) C] nu,
// C = Ff F~g + Fg F~f.
Energies energies(const SpectralState& state, double t);

// Phi(r), Psi(r): sphere integrals of {r^2 Ff F~f - Fg F~g} nu and
// {Ff F~g + Fg F~f} nu, on a panel grid with `order` nodes per panel.
struct RadialDensities {
  int dim = 1;
  int indivisible = 0;  // D
  int order = 16;
  std::vector<double> panel_edges;
  std::vector<double> r, weights;
  std::vector<cplx> Phi, Psi;
  std::vector<double> Phi_scaled, Psi_scaled;  // |Phi| / r^D, |Psi| / r^D
  double c0 = 1.0;
};
RadialDensities radial_densities(const SpectralSource& source, const GridSpec& grid, Exec exec = Exec::parallel);
// Phi and Psi at -r (directions sigma -> -sigma); for the evenness check.
RadialDensities radial_densities_reflected(const SpectralSource& source, const RadialDensities& base,
                                           int sphere_resolution, Exec exec = Exec::parallel);

// P - K = c0/2 int_0^inf {cos(2tr) Phi + sin(2tr) r Psi} r^{d-1} dr.
double energy_difference(const RadialDensities& dens, double t);
// Same integral with the Legendre-Filon product rule on each panel.
double energy_difference_filon(const RadialDensities& dens, double t);

struct EnergyTrace {
  std::vector<double> t, K, P, E, diff, diff_radial, diff_filon;  // diff_filon NaN where skipped
  double E0 = 0.0;
  double max_drift = 0.0;     // max |E(t) - E(0)| / E(0)
  double dual_path = 0.0;     // max |diff - diff_radial| / E0
  double filon_path = 0.0;    // max |diff_radial - diff_filon| / E0 where computed
  double floor = 0.0;         // absolute quadrature floor estimate for P - K
  double max_imag = 0.0;
};

// Parallel map over t. The Filon cross-check runs at the `filon_count`
// largest |t|.
EnergyTrace energy_trace(const SpectralState& state, const RadialDensities& dens, const std::vector<double>& times,
                         Exec exec = Exec::parallel, int filon_count = 3);

void write_csv(const EnergyTrace& trace, std::ostream& out);

// Classical k = 0 energies from u = (f(x+t) + f(x-t))/2 + (1/2) int g:
//   K = 1/2 int |u_t|^2, P = 1/2 int |u_x|^2.
struct ClassicalEnergies {
  double K = 0.0, P = 0.0;
};
ClassicalEnergies dalembert_energies(const Function1D& f, const std::optional<Function1D>& g, double t,
                                     double panel_length = 0.02, int order = 16);

// u(t, x) in rank one by inverse transform of the propagated data on `grid`.
SampledFunction reconstruct_solution(const RankOneTransformSource& source, const SpectralGrid& grid, double t,
                                     const std::vector<double>& xs, Exec exec = Exec::parallel);

}  // namespace cwl
