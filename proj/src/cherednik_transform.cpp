#include "cwl/cherednik_transform.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "cwl/errors.hpp"

namespace cwl {

namespace {

const cplx kI{0.0, 1.0};
constexpr double kStencilStep = 2e-3;
constexpr double kWallCutoff = 1e-5;

cplx stencil_derivative(const Function1D::Eval& f, double x) {
  constexpr double c[4] = {4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0};
  const double h = kStencilStep;
  cplx acc{};
  for (int j = 0; j < 4; ++j) acc += c[j] * (f(x + (j + 1) * h) - f(x - (j + 1) * h));
  return acc / h;
}

double fit_decay(const std::vector<double>& lambda, const std::vector<cplx>& values) {
  double lmax = 0.0;
  for (double l : lambda) lmax = std::max(lmax, std::abs(l));
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    const double a = std::abs(lambda[i]);
    if (a >= 2.0 * lmax / 3.0 && std::abs(values[i]) > 0.0) {
      lx.push_back(std::log(a));
      ly.push_back(std::log(std::abs(values[i])));
    }
  }
  if (lx.size() < 2) return 0.0;
  return fit_line(lx, ly).slope;
}

}  // namespace

Function1D::Function1D(Eval value, Eval derivative, double support, std::string name)
    : value_(std::move(value)), derivative_(std::move(derivative)), support_(support), name_(std::move(name)) {
  if (!value_) throw DomainError("Function1D: missing value evaluator");
}

cplx Function1D::derivative(double x) const {
  if (derivative_) return derivative_(x);
  return stencil_derivative(value_, x);
}

Function1D Function1D::reflected() const {
  Eval v = value_, d = derivative_;
  Eval dr;
  if (d) dr = [d](double x) { return -d(-x); };
  return Function1D([v](double x) { return v(-x); }, dr, support_, name_ + "(-x)");
}

Function1D Function1D::scaled(cplx a) const {
  Eval v = value_, d = derivative_;
  Eval ds;
  if (d) ds = [d, a](double x) { return a * d(x); };
  return Function1D([v, a](double x) { return a * v(x); }, ds, support_, name_);
}

Function1D Function1D::combine(cplx a, const Function1D& f, cplx b, const Function1D& g) {
  Eval d;
  if (f.derivative_ && g.derivative_) d = [a, b, f, g](double x) { return a * f.derivative_(x) + b * g.derivative_(x); };
  return Function1D([a, b, f, g](double x) { return a * f(x) + b * g(x); }, d, std::max(f.support_, g.support_),
                    f.name_ + "+" + g.name_);
}

Function1D bump(double center, double half_width, int order, cplx a0, cplx a1, double omega) {
  if (!(half_width > 0.0) || order < 1) throw DomainError("bump: need positive width and order >= 1");
  const double c = center, w = half_width;
  const int m = order;
  auto base = [=](double x, cplx& b, cplx& db) {
    const double s = (x - c) / w;
    if (std::abs(s) >= 1.0) {
      b = db = 0.0;
      return false;
    }
    const double q = 1.0 - s * s;
    const double qm1 = std::pow(q, m - 1);
    b = qm1 * q;
    db = -2.0 * m * s * qm1 / w;
    return true;
  };
  auto value = [=](double x) -> cplx {
    cplx b, db;
    if (!base(x, b, db)) return 0.0;
    return (a0 + a1 * x) * std::exp(kI * (omega * x)) * b;
  };
  auto deriv = [=](double x) -> cplx {
    cplx b, db;
    if (!base(x, b, db)) return 0.0;
    const cplx e = std::exp(kI * (omega * x));
    const cplx g = (a0 + a1 * x) * e;
    const cplx dg = a1 * e + kI * omega * g;
    return dg * b + g * db;
  };
  std::ostringstream name;
  name << "bump(c=" << center << ",w=" << half_width << ",m=" << order << ")";
  return Function1D(value, deriv, std::abs(center) + half_width, name.str());
}

std::vector<Function1D> bump_suite(double radius) {
  const double R = radius;
  return {bump(0.0, 0.9 * R, 12),
          bump(0.3 * R, 0.6 * R, 12),
          bump(-0.2 * R, 0.7 * R, 12, 1.0, 0.0, 3.0),
          bump(0.1 * R, 0.8 * R, 12, 1.0, cplx(0.5, 0.25)),
          bump(0.35 * R, 0.45 * R, 10)};
}

XGrid XGrid::symmetric(double radius, double panel_length, int order, int levels) {
  if (!(radius > 0.0)) throw DomainError("XGrid: radius must be positive");
  const QuadRule q = graded_gauss(radius, panel_length, order, levels);
  XGrid g;
  g.r = q.nodes;
  g.weights = q.weights;
  g.radius = radius;
  g.panel_length = panel_length;
  g.order = order;
  g.levels = levels;
  return g;
}

SampledFunction SampledFunction::sample(const Function1D& f, const std::vector<double>& x) {
  SampledFunction s;
  s.x = x;
  s.values.reserve(x.size());
  for (double xi : x) s.values.push_back(f(xi));
  s.support = f.support();
  s.evaluator = f;
  return s;
}

SpectralGrid SpectralGrid::symmetric(double cutoff, double panel_length, int order) {
  if (!(cutoff > 0.0)) throw DomainError("SpectralGrid: cutoff must be positive");
  const QuadRule q = composite_gauss(0.0, cutoff, panel_length, order);
  SpectralGrid g;
  g.cutoff = cutoff;
  for (std::size_t i = q.size(); i-- > 0;) {
    g.lambda.push_back(-q.nodes[i]);
    g.weights.push_back(q.weights[i]);
  }
  for (std::size_t i = 0; i < q.size(); ++i) {
    g.lambda.push_back(q.nodes[i]);
    g.weights.push_back(q.weights[i]);
  }
  return g;
}

cplx apply_T(const RankOneConfig& cfg, const Function1D& f, double x) {
  const cplx fx = f(x);
  const cplx dfx = f.derivative(x);
  cplx acc = dfx - cfg.rho * fx;
  if (std::abs(x) < kWallCutoff) {
    // Simpson on int_{-x}^{x} f', exact through x^4
    const cplx sym = (dfx + f.derivative(-x) + 4.0 * f.derivative(0.0)) / 3.0;
    for (std::size_t j = 0; j < cfg.betas.size(); ++j) {
      const double b = cfg.betas[j];
      // x / (1 - e^{-b x}), limit 1/b at 0.
      const double ratio = x == 0.0 ? 1.0 / b : x / -std::expm1(-b * x);
      acc += cfg.ks[j] * b * sym * ratio;
    }
    return acc;
  }
  const cplx diff = fx - f(-x);
  for (std::size_t j = 0; j < cfg.betas.size(); ++j) {
    const double b = cfg.betas[j];
    acc += cfg.ks[j] * b * diff / -std::expm1(-b * x);
  }
  return acc;
}

Function1D T_function(const RankOneConfig& cfg, const Function1D& f) {
  return Function1D([cfg, f](double x) { return apply_T(cfg, f, x); }, nullptr, f.support(), "T " + f.name());
}

cplx apply_L(const RankOneConfig& cfg, const Function1D& f, double x) {
  return apply_T(cfg, T_function(cfg, f), x);
}

RankOneTransform::RankOneTransform(const RootSystem& rs, double support_radius, const TransformOptions& opts)
    : cfg_(RankOneConfig::from(rs)),
      density_(rs),
      radius_(support_radius),
      opts_(opts),
      grid_(XGrid::symmetric(support_radius, opts.x_panel, opts.x_order, opts.graded_levels)) {
  mu_.reserve(grid_.r.size());
  for (double r : grid_.r) mu_.push_back(rs.weight(Vec::Constant(1, r)));
}

cplx RankOneTransform::nu(double lambda) const { return density_(CVec(CVec::Constant(1, cplx(lambda, 0.0)))); }

std::vector<std::vector<TransformPair>> RankOneTransform::transform_many(const std::vector<Function1D>& fs,
                                                                         const std::vector<cplx>& lambdas,
                                                                         Exec exec) const {
  const std::size_t n = grid_.r.size();
  std::vector<std::vector<cplx>> plus(fs.size()), minus(fs.size());
  for (std::size_t f = 0; f < fs.size(); ++f) {
    if (fs[f].support() > radius_ * (1.0 + 1e-12))
      throw DomainError("transform: function support exceeds the transform radius");
    plus[f].resize(n);
    minus[f].resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      plus[f][j] = fs[f](grid_.r[j]);
      minus[f][j] = fs[f](-grid_.r[j]);
    }
  }
  std::vector<std::vector<TransformPair>> out(lambdas.size(), std::vector<TransformPair>(fs.size()));
  for_each_index(exec, lambdas.size(), [&](std::size_t i) {
    const KernelSolution sol(cfg_, kI * lambdas[i], radius_);
    std::vector<CompensatedSum<cplx>> fw(fs.size()), tl(fs.size());
    for (std::size_t j = 0; j < n; ++j) {
      const auto [gp, gm] = sol.eval_pair(grid_.r[j]);
      const double wm = grid_.weights[j] * mu_[j];
      for (std::size_t f = 0; f < fs.size(); ++f) {
        fw[f].add(wm * (plus[f][j] * gm + minus[f][j] * gp));
        tl[f].add(wm * (std::conj(plus[f][j]) * gp + std::conj(minus[f][j]) * gm));
      }
    }
    for (std::size_t f = 0; f < fs.size(); ++f) out[i][f] = {fw[f].value(), tl[f].value()};
  });
  return out;
}

TransformPair RankOneTransform::transform_at(const Function1D& f, cplx lambda) const {
  return transform_many({f}, {lambda}, Exec::serial)[0][0];
}

SpectralFunction RankOneTransform::forward(const Function1D& f, const SpectralGrid& grid, Exec exec) const {
  std::vector<cplx> lam(grid.lambda.begin(), grid.lambda.end());
  const auto t = transform_many({f}, lam, exec);
  SpectralFunction s;
  s.lambda = grid.lambda;
  s.weights = grid.weights;
  for (const auto& row : t) s.values.push_back(row[0].forward);
  s.pw_radius = f.support();
  s.decay_exponent = fit_decay(s.lambda, s.values);
  return s;
}

SpectralFunction RankOneTransform::tilde(const Function1D& g, const SpectralGrid& grid, Exec exec) const {
  std::vector<cplx> lam(grid.lambda.begin(), grid.lambda.end());
  const auto t = transform_many({g}, lam, exec);
  SpectralFunction s;
  s.lambda = grid.lambda;
  s.weights = grid.weights;
  for (const auto& row : t) s.values.push_back(row[0].tilde);
  s.pw_radius = g.support();
  s.decay_exponent = fit_decay(s.lambda, s.values);
  return s;
}

SampledFunction RankOneTransform::inverse(const SpectralFunction& h, const std::vector<double>& xs, double c0,
                                          Exec exec) const {
  if (h.weights.size() != h.lambda.size() || h.values.size() != h.lambda.size())
    throw DomainError("inverse transform: spectral function needs quadrature weights");
  double x_max = 0.0;
  for (double x : xs) x_max = std::max(x_max, std::abs(x));
  std::vector<CompensatedSum<cplx>> acc(xs.size());
  constexpr std::size_t kBlock = 256;
  std::vector<cplx> block;
  for (std::size_t start = 0; start < h.lambda.size(); start += kBlock) {
    const std::size_t count = std::min(kBlock, h.lambda.size() - start);
    block.assign(count * xs.size(), cplx{});
    for_each_index(exec, count, [&](std::size_t b) {
      const std::size_t i = start + b;
      const cplx coeff = h.weights[i] * h.values[i] * nu(h.lambda[i]);
      if (coeff == cplx{}) return;
      const KernelSolution sol(cfg_, kI * h.lambda[i], x_max);
      for (std::size_t j = 0; j < xs.size(); ++j) block[b * xs.size() + j] = coeff * sol.eval(xs[j]);
    });
    for (std::size_t b = 0; b < count; ++b)
      for (std::size_t j = 0; j < xs.size(); ++j) acc[j].add(block[b * xs.size() + j]);
  }
  SampledFunction out;
  out.x = xs;
  out.support = h.pw_radius;
  for (auto& a : acc) out.values.push_back(c0 * a.value());
  return out;
}

double RankOneTransform::refinement_check(const Function1D& f, const std::vector<cplx>& lambdas) const {
  TransformOptions fine = opts_;
  fine.x_panel *= 0.5;
  fine.graded_levels += 1;
  const RankOneTransform refined(root_system(), radius_, fine);
  const auto a = transform_many({f}, lambdas);
  const auto b = refined.transform_many({f}, lambdas);
  double scale = 0.0, diff = 0.0;
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    scale = std::max(scale, std::abs(b[i][0].forward));
    diff = std::max(diff, std::abs(a[i][0].forward - b[i][0].forward));
  }
  const double rel = scale > 0.0 ? diff / scale : diff;
  if (rel > opts_.refine_tolerance) {
    std::ostringstream msg;
    msg << "transform: x-grid refinement changed the transform by " << rel;
    throw ConvergenceError(msg.str());
  }
  return rel;
}

double RankOneTransform::suggest_cutoff(const std::vector<Function1D>& fs, double tol, double limit) const {
  std::vector<cplx> probes;
  for (double l = 0.5; l <= 10.0; l += 0.5) probes.emplace_back(l);
  for (double l = 12.0; l <= 2.0 * limit + 1e-9; l += 2.0) probes.emplace_back(l);
  std::vector<cplx> both;
  for (const cplx& p : probes) {
    both.push_back(p);
    both.push_back(-p);
  }
  const auto t = transform_many(fs, both);
  std::vector<double> q(probes.size(), 0.0);
  for (std::size_t i = 0; i < both.size(); ++i) {
    const double l = both[i].real();
    const double dens = std::abs(nu(l));
    for (std::size_t f = 0; f < fs.size(); ++f) {
      const double v = (1.0 + l * l) * std::abs(t[i][f].forward * t[i][f].tilde) * dens;
      q[i / 2] = std::max(q[i / 2], v);
    }
  }
  const double scale = *std::max_element(q.begin(), q.end());
  for (double cut = 8.0; cut <= limit + 1e-9; cut += 2.0) {
    double tail = 0.0;
    for (std::size_t i = 0; i < probes.size(); ++i) {
      const double l = probes[i].real();
      if (l >= cut && l <= 2.0 * cut) tail = std::max(tail, q[i]);
    }
    if (cut * tail < tol * scale) return cut;
  }
  throw BudgetError("transform: spectral tail does not fall below the budget before lambda = " +
                    std::to_string(limit));
}

cplx RankOneTransform::inner(const Function1D& f, const Function1D& g) const {
  CompensatedSum<cplx> s;
  for (std::size_t j = 0; j < grid_.r.size(); ++j) {
    const double r = grid_.r[j];
    s.add(grid_.weights[j] * mu_[j] * (f(r) * std::conj(g(r)) + f(-r) * std::conj(g(-r))));
  }
  return s.value();
}

namespace {

std::vector<double> grid_points(const XGrid& g) {
  std::vector<double> xs;
  for (std::size_t j = g.r.size(); j-- > 0;) xs.push_back(-g.r[j]);
  for (double r : g.r) xs.push_back(r);
  return xs;
}

// Unscaled reconstruction (c0 = 1) of f on the grid points.
std::vector<cplx> reconstruct(const RankOneTransform& tr, const Function1D& f, const SpectralGrid& grid,
                              Exec exec) {
  const SpectralFunction h = tr.forward(f, grid, exec);
  return tr.inverse(h, grid_points(tr.grid()), 1.0, exec).values;
}

// L2(mu) inner products over the symmetric grid for sampled vectors laid out
// as grid_points().
cplx sampled_inner(const RankOneTransform& tr, const std::vector<cplx>& a, const std::vector<cplx>& b) {
  const XGrid& g = tr.grid();
  const std::size_t n = g.r.size();
  CompensatedSum<cplx> s;
  for (std::size_t j = 0; j < n; ++j) {
    const double mu = tr.root_system().weight(Vec::Constant(1, g.r[j]));
    const std::size_t neg = n - 1 - j, pos = n + j;
    s.add(g.weights[j] * mu * (a[pos] * std::conj(b[pos]) + a[neg] * std::conj(b[neg])));
  }
  return s.value();
}

std::vector<cplx> samples(const RankOneTransform& tr, const Function1D& f) {
  std::vector<cplx> v;
  for (double x : grid_points(tr.grid())) v.push_back(f(x));
  return v;
}

}  // namespace

C0Calibration calibrate_c0(const RankOneTransform& tr, const SpectralGrid& grid, Exec exec) {
  const double R = tr.support_radius();
  const Function1D refs[2] = {bump(0.1 * R, 0.8 * R, 12), bump(0.1 * R, 0.5 * R, 12)};
  double c[2];
  for (int i = 0; i < 2; ++i) {
    const std::vector<cplx> rec = reconstruct(tr, refs[i], grid, exec);
    const std::vector<cplx> orig = samples(tr, refs[i]);
    c[i] = sampled_inner(tr, orig, rec).real() / sampled_inner(tr, rec, rec).real();
  }
  C0Calibration cal;
  cal.first = c[0];
  cal.second = c[1];
  cal.c0 = 0.5 * (c[0] + c[1]);
  cal.relative_spread = std::abs(c[0] - c[1]) / std::abs(cal.c0);
  cal.consistent = cal.relative_spread <= 1e-8;
  return cal;
}

double roundtrip_error(const RankOneTransform& tr, const Function1D& f, const SpectralGrid& grid, double c0,
                       Exec exec) {
  std::vector<cplx> rec = reconstruct(tr, f, grid, exec);
  const std::vector<cplx> orig = samples(tr, f);
  for (std::size_t i = 0; i < rec.size(); ++i) rec[i] = orig[i] - c0 * rec[i];
  return std::sqrt(sampled_inner(tr, rec, rec).real() / sampled_inner(tr, orig, orig).real());
}

PlancherelDefect plancherel_check(const RankOneTransform& tr, const Function1D& f, const Function1D& g,
                                  const SpectralGrid& grid, double c0, Exec exec) {
  std::vector<cplx> lam(grid.lambda.begin(), grid.lambda.end());
  const auto t = tr.transform_many({f, g}, lam, exec);
  CompensatedSum<cplx> rhs;
  for (std::size_t i = 0; i < lam.size(); ++i)
    rhs.add(grid.weights[i] * t[i][0].forward * t[i][1].tilde * tr.nu(grid.lambda[i]));
  PlancherelDefect d;
  d.lhs = tr.inner(f, g);
  d.rhs = c0 * rhs.value();
  const double norms = std::sqrt(tr.inner(f, f).real() * tr.inner(g, g).real());
  const double denom = std::abs(d.lhs) > 1e-3 * norms ? std::abs(d.lhs) : norms;
  d.defect = std::abs(d.lhs - d.rhs) / denom;
  return d;
}

DiagonalizationDefect diagonalization_check(const RankOneTransform& tr, const Function1D& f,
                                            const std::vector<double>& lambdas, Exec exec) {
  const RankOneConfig& cfg = tr.config();
  const Function1D Tf = T_function(cfg, f);
  const Function1D Lf([cfg, f](double x) { return apply_L(cfg, f, x); }, nullptr, f.support(), "L f");
  std::vector<cplx> lam(lambdas.begin(), lambdas.end());
  const auto t = tr.transform_many({f, Tf, Lf}, lam, exec);
  const double norm = std::sqrt(tr.inner(f, f).real());
  DiagonalizationDefect d;
  for (std::size_t i = 0; i < lam.size(); ++i) {
    const double l = lambdas[i];
    const cplx Ff = t[i][0].forward;
    d.T = std::max(d.T, std::abs(t[i][1].forward - kI * l * Ff) / ((1.0 + std::abs(l)) * norm));
    d.L = std::max(d.L, std::abs(t[i][2].forward + l * l * Ff) / ((1.0 + std::abs(l)) * (1.0 + std::abs(l)) * norm));
  }
  return d;
}

double skew_adjointness_defect(const RankOneTransform& tr, const Function1D& f, const Function1D& g) {
  const RankOneConfig& cfg = tr.config();
  const Function1D Tf = T_function(cfg, f);
  const Function1D h = T_function(cfg, g.reflected()).reflected();
  const cplx lhs = tr.inner(Tf, g);
  const cplx rhs = tr.inner(f, h);
  const double scale = std::sqrt(tr.inner(Tf, Tf).real() * tr.inner(g, g).real()) +
                       std::sqrt(tr.inner(f, f).real() * tr.inner(h, h).real());
  return std::abs(lhs - rhs) / scale;
}

double tilde_consistency_defect(const RankOneTransform& tr, const Function1D& g, const std::vector<double>& lambdas,
                                Exec exec) {
  std::vector<cplx> lam;
  for (double l : lambdas) lam.emplace_back(l);
  for (double l : lambdas) lam.emplace_back(-l);
  const auto t = tr.transform_many({g, g.reflected()}, lam, exec);
  const std::size_t n = lambdas.size();
  double diff = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const cplx a = t[i][0].tilde;
    const cplx b = std::conj(t[n + i][1].forward);
    diff = std::max(diff, std::abs(a - b));
    scale = std::max(scale, std::abs(a));
  }
  return scale > 0.0 ? diff / scale : diff;
}

PaleyWienerReport paley_wiener_check(const RankOneTransform& tr, const Function1D& f, int exponent, double cutoff,
                                     const std::vector<double>& imag_offsets, Exec exec) {
  std::vector<cplx> lam;
  for (double y : imag_offsets)
    for (double r = -cutoff; r <= cutoff + 1e-12; r += 0.5) lam.emplace_back(r, y);
  const auto t = tr.transform_many({f}, lam, exec);
  PaleyWienerReport rep;
  rep.exponent = exponent;
  const double R = f.support();
  bool finite = true;
  for (std::size_t i = 0; i < lam.size(); ++i) {
    const double q = std::pow(1.0 + std::abs(lam[i]), exponent) * std::exp(-R * std::abs(lam[i].imag())) *
                     std::abs(t[i][0].forward);
    if (!std::isfinite(q)) finite = false;
    if (std::abs(lam[i].real()) < 0.5 * cutoff)
      rep.sup_inner = std::max(rep.sup_inner, q);
    else
      rep.sup_tail = std::max(rep.sup_tail, q);
  }
  rep.bounded = finite && rep.sup_tail <= rep.sup_inner;
  return rep;
}

void write_csv(const SampledFunction& f, std::ostream& out) {
  out << "x,re,im\n" << std::setprecision(17);
  for (std::size_t i = 0; i < f.x.size(); ++i)
    out << f.x[i] << ',' << f.values[i].real() << ',' << f.values[i].imag() << '\n';
}

void write_csv(const SpectralFunction& f, std::ostream& out) {
  out << "lambda,re,im\n" << std::setprecision(17);
  for (std::size_t i = 0; i < f.lambda.size(); ++i)
    out << f.lambda[i] << ',' << f.values[i].real() << ',' << f.values[i].imag() << '\n';
}

}  // namespace cwl
