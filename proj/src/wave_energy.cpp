#include "cwl/wave_energy.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>

#include "cwl/errors.hpp"
#include "cwl/quadrature.hpp"

namespace cwl {

namespace {

const cplx kI{0.0, 1.0};

double sinc_t(double t, double r) { return r == 0.0 ? t : std::sin(t * r) / r; }

}  // namespace

RankOneTransformSource::RankOneTransformSource(std::shared_ptr<const RankOneTransform> tr, Function1D f,
                                               std::optional<Function1D> g, double c0)
    : tr_(std::move(tr)), f_(std::move(f)), g_(std::move(g)), c0_(c0) {
  if (!tr_) throw DomainError("rank-one source: missing transform");
  if (!(c0 > 0.0)) throw DomainError("rank-one source: c0 must be positive");
}

double RankOneTransformSource::radius() const {
  return std::max(f_.support(), g_ ? g_->support() : 0.0);
}

std::vector<SpectralSample> RankOneTransformSource::sample(const std::vector<double>& r, const SphereRule& dirs,
                                                           Exec exec) const {
  std::vector<cplx> lambdas;
  lambdas.reserve(r.size() * dirs.size());
  for (double ri : r)
    for (const Vec& s : dirs.directions) lambdas.emplace_back(ri * s[0]);
  std::vector<Function1D> fs{f_};
  if (g_) fs.push_back(*g_);
  const auto t = tr_->transform_many(fs, lambdas, exec);
  std::vector<SpectralSample> out(lambdas.size());
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    out[i].Ff = t[i][0].forward;
    out[i].Ftf = t[i][0].tilde;
    if (g_) {
      out[i].Fg = t[i][1].forward;
      out[i].Ftg = t[i][1].tilde;
    }
  }
  return out;
}

ModelProfileSource::ModelProfileSource(const RootSystem& rs, std::optional<RadialProfile> f,
                                       std::optional<RadialProfile> g)
    : density_(rs), f_(std::move(f)), g_(std::move(g)) {
  if (!f_ && !g_) throw DomainError("model source: need at least one profile");
  for (const auto* p : {&f_, &g_})
    if (*p && (*p)->dim() != rs.dim()) throw DomainError("model source: profile dimension mismatch");
}

double ModelProfileSource::radius() const {
  return std::max(f_ ? f_->radius() : 0.0, g_ ? g_->radius() : 0.0);
}

std::vector<SpectralSample> ModelProfileSource::sample(const std::vector<double>& r, const SphereRule& dirs,
                                                       Exec exec) const {
  std::vector<SpectralSample> out(r.size() * dirs.size());
  for_each_index(exec, r.size(), [&](std::size_t i) {
    const double hf = f_ ? (*f_)(r[i]) : 0.0;
    const double hg = g_ ? (*g_)(r[i]) : 0.0;
    for (std::size_t j = 0; j < dirs.size(); ++j) out[i * dirs.size() + j] = {hf, hg, hf, hg};
  });
  return out;
}

std::shared_ptr<const FoldedDensity> ModelProfileSource::folded(double cutoff, int sphere_resolution,
                                                                Exec exec) const {
  std::lock_guard<std::mutex> lock(cache_mutex_);
  if (!cache_ || cache_->cutoff() < cutoff || cache_resolution_ != sphere_resolution) {
    // the folded density is holomorphic for |Im r| < gamma0; panels of
    // 0.75 gamma0 keep the Chebyshev error near rounding
    const double panel = std::min(0.5, 0.75 * strip_width(density_, 720));
    cache_ = std::make_shared<FoldedDensity>(density_, cutoff, sphere_resolution, panel, 24, exec);
    cache_resolution_ = sphere_resolution;
  }
  return cache_;
}

double SpectralState::weight(std::size_t i, std::size_t j) const {
  return r_weights[i] * std::pow(r[i], dim - 1) * sphere.weights[j];
}

double oscillatory_panel(double t_max) {
  return std::min(std::numbers::pi / (2.0 * (1.0 + 2.0 * std::abs(t_max))), 0.5);
}

namespace {

std::vector<cplx> density_at_nodes(const SpectralDensity& density, const std::vector<double>& r,
                                   const SphereRule& dirs, Exec exec) {
  std::vector<cplx> nu(r.size() * dirs.size());
  for_each_index(exec, r.size(), [&](std::size_t i) {
    for (std::size_t j = 0; j < dirs.size(); ++j)
      nu[i * dirs.size() + j] = density(CVec((r[i] * dirs.directions[j]).cast<cplx>()));
  });
  return nu;
}

SphereRule single_direction(int dim) {
  SphereRule one;
  one.directions = {Vec::Unit(dim, 0)};
  one.weights = {1.0};
  return one;
}

struct NodeData {
  SphereRule dirs;
  std::vector<SpectralSample> samples;
  std::vector<cplx> nu;
};

NodeData node_data(const SpectralSource& source, const std::vector<double>& r, const SphereRule& dirs, int resolution,
                   double cutoff, Exec exec) {
  NodeData d;
  if (auto fold = source.folded(cutoff, resolution, exec)) {
    d.dirs = single_direction(source.dim());
    d.nu.resize(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) d.nu[i] = (*fold)(r[i]);
  } else {
    d.dirs = dirs;
    d.nu = density_at_nodes(source.density(), r, dirs, exec);
  }
  d.samples = source.sample(r, d.dirs, exec);
  return d;
}

}  // namespace

SpectralState build_state(const SpectralSource& source, const GridSpec& grid, Exec exec) {
  SpectralState s;
  s.dim = source.dim();
  const QuadRule q = composite_gauss(0.0, grid.cutoff, grid.panel_length, grid.order);
  s.r = q.nodes;
  s.r_weights = q.weights;
  NodeData nd = node_data(source, s.r, sphere_rule(s.dim, grid.sphere_resolution), grid.sphere_resolution, grid.cutoff, exec);
  s.sphere = std::move(nd.dirs);
  s.samples = std::move(nd.samples);
  s.nu = std::move(nd.nu);
  s.c0 = source.c0();
  s.radius = source.radius();
  s.cutoff = grid.cutoff;
  s.provenance = source.provenance();
  return s;
}

Propagated propagate(const SpectralState& state, double t) {
  Propagated p;
  const std::size_t nd = state.sphere.size();
  const std::size_t n = state.nodes();
  p.Fu.resize(n);
  p.dFu.resize(n);
  p.Ftu.resize(n);
  p.dFtu.resize(n);
  for (std::size_t i = 0; i < state.r.size(); ++i) {
    const double r = state.r[i];
    const double c = std::cos(t * r), s = std::sin(t * r), sc = sinc_t(t, r);
    for (std::size_t j = 0; j < nd; ++j) {
      const SpectralSample& x = state.samples[i * nd + j];
      p.Fu[i * nd + j] = c * x.Ff + sc * x.Fg;
      p.dFu[i * nd + j] = -r * s * x.Ff + c * x.Fg;
      p.Ftu[i * nd + j] = c * x.Ftf + sc * x.Ftg;
      p.dFtu[i * nd + j] = -r * s * x.Ftf + c * x.Ftg;
    }
  }
  return p;
}

Energies energies(const SpectralState& state, double t) {
  const std::size_t nd = state.sphere.size();
  CompensatedSum<cplx> K, P;
  for (std::size_t i = 0; i < state.r.size(); ++i) {
    const double r = state.r[i];
    const double c = std::cos(t * r), s = std::sin(t * r), s2 = std::sin(2.0 * t * r);
    for (std::size_t j = 0; j < nd; ++j) {
      const SpectralSample& x = state.samples[i * nd + j];
      const cplx wn = state.weight(i, j) * state.nu[i * nd + j];
      const cplx A = r * r * x.Ff * x.Ftf;
      const cplx B = x.Fg * x.Ftg;
      const cplx C = 0.5 * r * s2 * (x.Ff * x.Ftg + x.Fg * x.Ftf);
      P.add(wn * (c * c * A + s * s * B + C));
      K.add(wn * (s * s * A + c * c * B - C));
    }
  }
  const cplx k = 0.5 * state.c0 * K.value(), p = 0.5 * state.c0 * P.value();
  Energies e;
  e.K = k.real();
  e.P = p.real();
  e.E = e.K + e.P;
  e.imag = std::max(std::abs(k.imag()), std::abs(p.imag()));
  return e;
}

namespace {

void fill_densities(RadialDensities& d, const std::vector<SpectralSample>& samples, const std::vector<cplx>& nu,
                    const SphereRule& dirs, bool reflected) {
  const std::size_t nd = dirs.size();
  d.Phi.assign(d.r.size(), cplx{});
  d.Psi.assign(d.r.size(), cplx{});
  d.Phi_scaled.assign(d.r.size(), 0.0);
  d.Psi_scaled.assign(d.r.size(), 0.0);
  for (std::size_t i = 0; i < d.r.size(); ++i) {
    const double r = reflected ? -d.r[i] : d.r[i];
    CompensatedSum<cplx> phi, psi;
    for (std::size_t j = 0; j < nd; ++j) {
      const SpectralSample& x = samples[i * nd + j];
      const cplx n = dirs.weights[j] * nu[i * nd + j];
      phi.add(n * (r * r * x.Ff * x.Ftf - x.Fg * x.Ftg));
      psi.add(n * (x.Ff * x.Ftg + x.Fg * x.Ftf));
    }
    d.Phi[i] = phi.value();
    d.Psi[i] = psi.value();
    const double rd = std::pow(std::abs(r), d.indivisible);
    d.Phi_scaled[i] = std::abs(d.Phi[i]) / rd;
    d.Psi_scaled[i] = std::abs(d.Psi[i]) / rd;
  }
}

}  // namespace

RadialDensities radial_densities(const SpectralSource& source, const GridSpec& grid, Exec exec) {
  RadialDensities d;
  d.dim = source.dim();
  d.indivisible = source.density().indivisible_count();
  d.order = grid.order;
  d.c0 = source.c0();
  const QuadRule q = composite_gauss(0.0, grid.cutoff, grid.panel_length, grid.order);
  d.r = q.nodes;
  d.weights = q.weights;
  const std::size_t panels = q.size() / static_cast<std::size_t>(grid.order);
  const double h = grid.cutoff / static_cast<double>(panels);
  for (std::size_t p = 0; p <= panels; ++p) d.panel_edges.push_back(h * static_cast<double>(p));
  d.panel_edges.back() = grid.cutoff;
  const NodeData nd = node_data(source, d.r, sphere_rule(d.dim, grid.sphere_resolution), grid.sphere_resolution, grid.cutoff, exec);
  fill_densities(d, nd.samples, nd.nu, nd.dirs, false);
  return d;
}

RadialDensities radial_densities_reflected(const SpectralSource& source, const RadialDensities& base,
                                           int sphere_resolution, Exec exec) {
  RadialDensities d = base;
  SphereRule dirs = sphere_rule(d.dim, sphere_resolution);
  for (Vec& s : dirs.directions) s = -s;
  const NodeData nd = node_data(source, d.r, dirs, sphere_resolution, d.panel_edges.back(), exec);
  fill_densities(d, nd.samples, nd.nu, nd.dirs, true);
  return d;
}

double energy_difference(const RadialDensities& dens, double t) {
  CompensatedSum<cplx> s;
  for (std::size_t i = 0; i < dens.r.size(); ++i) {
    const double r = dens.r[i];
    const double w = dens.weights[i] * std::pow(r, dens.dim - 1);
    s.add(w * (std::cos(2.0 * t * r) * dens.Phi[i] + std::sin(2.0 * t * r) * r * dens.Psi[i]));
  }
  return 0.5 * dens.c0 * s.value().real();
}

double energy_difference_filon(const RadialDensities& dens, double t) {
  const std::size_t n = static_cast<std::size_t>(dens.order);
  const double omega = 2.0 * t;
  std::vector<cplx> a(n), b(n);
  CompensatedSum<cplx> s;
  for (std::size_t p = 0; p + 1 < dens.panel_edges.size(); ++p) {
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t i = p * n + k;
      const double r = dens.r[i];
      const double rd = std::pow(r, dens.dim - 1);
      a[k] = dens.Phi[i] * rd;
      b[k] = r * dens.Psi[i] * rd;
    }
    const double lo = dens.panel_edges[p], hi = dens.panel_edges[p + 1];
    const cplx ap = filon_legendre(lo, hi, a, omega), am = filon_legendre(lo, hi, a, -omega);
    const cplx bp = filon_legendre(lo, hi, b, omega), bm = filon_legendre(lo, hi, b, -omega);
    s.add(0.5 * (ap + am) + (bp - bm) / (2.0 * kI));
  }
  return 0.5 * dens.c0 * s.value().real();
}

EnergyTrace energy_trace(const SpectralState& state, const RadialDensities& dens, const std::vector<double>& times,
                         Exec exec, int filon_count) {
  EnergyTrace tr;
  const std::size_t n = times.size();
  tr.t = times;
  tr.K.resize(n);
  tr.P.resize(n);
  tr.E.resize(n);
  tr.diff.resize(n);
  tr.diff_radial.resize(n);
  tr.diff_filon.assign(n, std::numeric_limits<double>::quiet_NaN());
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return std::abs(times[a]) > std::abs(times[b]); });
  std::vector<char> filon(n, 0);
  for (std::size_t i = 0; i < std::min<std::size_t>(n, static_cast<std::size_t>(std::max(0, filon_count))); ++i)
    filon[order[i]] = 1;
  std::vector<double> imag(n, 0.0);
  for_each_index(exec, n, [&](std::size_t i) {
    const Energies e = energies(state, times[i]);
    tr.K[i] = e.K;
    tr.P[i] = e.P;
    tr.E[i] = e.E;
    imag[i] = e.imag;
    tr.diff[i] = e.P - e.K;
    tr.diff_radial[i] = energy_difference(dens, times[i]);
    if (filon[i]) tr.diff_filon[i] = energy_difference_filon(dens, times[i]);
  });
  if (n == 0) return tr;
  tr.E0 = tr.E[0];
  double abs_floor = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    tr.max_drift = std::max(tr.max_drift, std::abs(tr.E[i] - tr.E0) / std::abs(tr.E0));
    const double dp = std::abs(tr.diff[i] - tr.diff_radial[i]);
    tr.dual_path = std::max(tr.dual_path, dp / std::abs(tr.E0));
    abs_floor = std::max(abs_floor, dp);
    if (filon[i]) {
      const double fp = std::abs(tr.diff_radial[i] - tr.diff_filon[i]);
      tr.filon_path = std::max(tr.filon_path, fp / std::abs(tr.E0));
      abs_floor = std::max(abs_floor, fp);
    }
    tr.max_imag = std::max(tr.max_imag, imag[i]);
  }
  tr.floor = std::max(abs_floor, 1e-15 * std::abs(tr.E0));
  return tr;
}

void write_csv(const EnergyTrace& trace, std::ostream& out) {
  out << "t,K,P,E,P_minus_K,P_minus_K_radial,P_minus_K_filon\n" << std::setprecision(17);
  for (std::size_t i = 0; i < trace.t.size(); ++i) {
    out << trace.t[i] << ',' << trace.K[i] << ',' << trace.P[i] << ',' << trace.E[i] << ',' << trace.diff[i] << ','
        << trace.diff_radial[i] << ',';
    if (!std::isnan(trace.diff_filon[i])) out << trace.diff_filon[i];
    out << '\n';
  }
}

ClassicalEnergies dalembert_energies(const Function1D& f, const std::optional<Function1D>& g, double t,
                                     double panel_length, int order) {
  const double S = std::max(f.support(), g ? g->support() : 0.0);
  const double X = S + std::abs(t);
  const QuadRule q = composite_gauss(-X, X, panel_length, order);
  CompensatedSum<double> K, P;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double x = q.nodes[i];
    cplx ut = 0.5 * (f.derivative(x + t) - f.derivative(x - t));
    cplx ux = 0.5 * (f.derivative(x + t) + f.derivative(x - t));
    if (g) {
      const cplx gp = (*g)(x + t), gm = (*g)(x - t);
      ut += 0.5 * (gp + gm);
      ux += 0.5 * (gp - gm);
    }
    K.add(0.5 * q.weights[i] * std::norm(ut));
    P.add(0.5 * q.weights[i] * std::norm(ux));
  }
  return {K.value(), P.value()};
}

SampledFunction reconstruct_solution(const RankOneTransformSource& source, const SpectralGrid& grid, double t,
                                     const std::vector<double>& xs, Exec exec) {
  SphereRule one;
  one.directions = {Vec::Constant(1, 1.0)};
  one.weights = {1.0};
  const auto samples = source.sample(grid.lambda, one, exec);
  SpectralFunction h;
  h.lambda = grid.lambda;
  h.weights = grid.weights;
  h.pw_radius = source.radius() + std::abs(t);
  for (std::size_t i = 0; i < grid.lambda.size(); ++i) {
    const double r = std::abs(grid.lambda[i]);
    h.values.push_back(std::cos(t * r) * samples[i].Ff + sinc_t(t, r) * samples[i].Fg);
  }
  return source.transform().inverse(h, xs, source.c0(), exec);
}

}  // namespace cwl
