#include "cwl/plancherel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "cwl/errors.hpp"
#include "cwl/quadrature.hpp"
#include "cwl/special_fn.hpp"

namespace cwl {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI{0.0, 1.0};

bool on_pole(cplx z) { return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real()); }

bool is_integer(double s) { return s == std::floor(s); }

// Gamma(x + s) / Gamma(x). Removable cases (both arguments on poles, integer
// shift) fall back to the finite Pochhammer product.
cplx shifted_ratio(cplx x, double s, int factor) {
  const cplx top = x + s;
  const bool top_pole = on_pole(top), bottom_pole = on_pole(x);
  if (top_pole && bottom_pole) {
    cplx r{1.0, 0.0};
    if (s >= 0)
      for (int j = 0; j < static_cast<int>(s); ++j) r *= x + static_cast<double>(j);
    else
      for (int j = 1; j <= static_cast<int>(-s); ++j) r /= x - static_cast<double>(j);
    return r;
  }
  if (bottom_pole) return {};
  if (top_pole) {
    std::ostringstream msg;
    msg << "spectral density: Gamma factor " << factor << " on a pole at " << top.real();
    throw PoleError(msg.str(), static_cast<long>(-top.real()), factor);
  }
  if (s == 0.0) return {1.0, 0.0};
  return std::exp(log_gamma(top) - log_gamma(x));
}

cplx pairing(const CVec& lambda, const Vec& coroot) {
  cplx z{};
  for (Eigen::Index i = 0; i < coroot.size(); ++i) z += lambda[i] * coroot[i];
  return z;
}

// The four ratios of one root; `reduced` swaps Gamma(iz) for Gamma(iz + 1).
cplx root_factor(const DensityRoot& r, cplx z, int position, bool reduced) {
  const cplx w = kI * z;
  const int base = 4 * position;
  cplx f = reduced ? shifted_ratio(w + 1.0, r.k - 1.0, base) : shifted_ratio(w, r.k, base);
  f *= shifted_ratio(0.5 * (w + r.k), r.k2, base + 1);
  f *= shifted_ratio(1.0 - w, r.k - 1.0, base + 2);
  f *= shifted_ratio(0.5 * (r.k - w), r.k2 + 1.0, base + 3);
  return f;
}

cplx polynomial_product(const std::vector<DensityRoot>& roots, const CVec& lambda, double constant) {
  cplx acc{constant, 0.0};
  for (const auto& r : roots) {
    const cplx z = pairing(lambda, r.coroot);
    const cplx z2 = z * z;
    acc *= z * (z + kI * (r.k + 2.0 * r.k2));
    for (int j = 1; j < static_cast<int>(r.k); ++j) acc *= z2 + static_cast<double>(j * j);
    for (int j = 0; j < static_cast<int>(r.k2); ++j) {
      const double h = r.k + 2.0 * j;
      acc *= z2 + h * h;
    }
  }
  return acc;
}

bool polynomial_ok(const std::vector<DensityRoot>& roots) {
  for (const auto& r : roots)
    if (!(r.k >= 1.0 && is_integer(r.k) && r.k2 >= 0.0 && is_integer(r.k2))) return false;
  return true;
}

}  // namespace

SpectralDensity::SpectralDensity(const RootSystem& rs, DensityMode mode) : rs_(rs), mode_(mode) {
  for (int idx : rs_.indivisible_positive()) {
    DensityRoot r;
    r.root_index = idx;
    r.coroot = rs_.coroot(idx);
    r.k = rs_.roots()[idx].k;
    r.k2 = rs_.double_multiplicity(idx);
    roots_.push_back(std::move(r));
  }
  if (mode_ == DensityMode::integer_polynomial && !polynomial_applies())
    throw DomainError("spectral density: integer-polynomial mode needs positive integer multiplicities");

  const int d = rs_.dim();
  CVec star = (rs_.rho() + Vec::Constant(d, 1.0 / std::sqrt(static_cast<double>(d)))).cast<cplx>();
  if (std::abs(pi(star)) < 1e-8) {
    const std::array<double, 8> nudge = {0.1234, 0.0567, 0.0891, 0.0313, 0.0771, 0.0449, 0.0627, 0.0183};
    for (int i = 0; i < d; ++i) star[i] += nudge[static_cast<std::size_t>(i)];
  }
  factor_constant_ = gamma_form(star) / (pi(star) * reduced(star));
}

bool SpectralDensity::polynomial_applies() const { return polynomial_ok(roots_); }

cplx SpectralDensity::gamma_form(const CVec& lambda) const {
  if (lambda.size() != rs_.dim()) throw DomainError("spectral density: dimension mismatch");
  cplx acc{1.0, 0.0};
  for (std::size_t i = 0; i < roots_.size(); ++i)
    acc *= root_factor(roots_[i], pairing(lambda, roots_[i].coroot), static_cast<int>(i), false);
  return acc;
}

cplx SpectralDensity::reduced(const CVec& lambda) const {
  if (lambda.size() != rs_.dim()) throw DomainError("spectral density: dimension mismatch");
  cplx acc{1.0, 0.0};
  for (std::size_t i = 0; i < roots_.size(); ++i)
    acc *= root_factor(roots_[i], pairing(lambda, roots_[i].coroot), static_cast<int>(i), true);
  return acc;
}

cplx SpectralDensity::pi(const CVec& lambda) const {
  cplx acc{1.0, 0.0};
  for (const auto& r : roots_) acc *= pairing(lambda, r.coroot);
  return acc;
}

cplx SpectralDensity::operator()(const CVec& lambda) const {
  if (mode_ == DensityMode::integer_polynomial) {
    double c = 1.0;
    for (const auto& r : roots_) c *= std::pow(2.0, -(1.0 + 2.0 * r.k2));
    if (lambda.size() != rs_.dim()) throw DomainError("spectral density: dimension mismatch");
    return polynomial_product(roots_, lambda, c);
  }
  return gamma_form(lambda);
}

IntegerPolynomialDensity::IntegerPolynomialDensity(const SpectralDensity& density) : roots_(density.roots()) {
  if (!polynomial_ok(roots_))
    throw DomainError("integer polynomial density: multiplicities must be positive integers");
  for (const auto& r : roots_) {
    constant_ *= std::pow(2.0, -(1.0 + 2.0 * r.k2));
    degree_ += static_cast<int>(2.0 * (r.k + r.k2));
  }
}

cplx IntegerPolynomialDensity::operator()(const CVec& lambda) const {
  return polynomial_product(roots_, lambda, constant_);
}

SphereRule sphere_rule(int dim, int resolution) {
  SphereRule rule;
  if (resolution < 1) throw DomainError("sphere_rule: resolution must be positive");
  if (dim == 1) {
    rule.directions = {Vec::Constant(1, 1.0), Vec::Constant(1, -1.0)};
    rule.weights = {1.0, 1.0};
  } else if (dim == 2) {
    for (int j = 0; j < resolution; ++j) {
      const double a = 2.0 * kPi * (j + 0.5) / resolution;
      Vec v(2);
      v << std::cos(a), std::sin(a);
      rule.directions.push_back(v);
      rule.weights.push_back(2.0 * kPi / resolution);
    }
  } else if (dim == 3) {
    const int nt = std::max(2, resolution / 2);
    const QuadRule gl = gauss_legendre(nt);
    for (std::size_t a = 0; a < gl.size(); ++a) {
      const double c = gl.nodes[a], s = std::sqrt(std::max(0.0, 1.0 - c * c));
      for (int j = 0; j < resolution; ++j) {
        const double phi = 2.0 * kPi * (j + 0.5) / resolution;
        Vec v(3);
        v << s * std::cos(phi), s * std::sin(phi), c;
        rule.directions.push_back(v);
        rule.weights.push_back(gl.weights[a] * 2.0 * kPi / resolution);
      }
    }
  } else {
    throw DomainError("sphere_rule: dimension " + std::to_string(dim) + " not supported");
  }
  return rule;
}

SphereRule wall_graded_circle(const SpectralDensity& density, double r, int order) {
  if (density.dim() != 2) throw DomainError("wall_graded_circle: needs d = 2");
  std::vector<double> walls;
  for (const DensityRoot& a : density.roots()) {
    const double w = std::atan2(a.coroot[1], a.coroot[0]) + 0.5 * kPi;
    for (double x : {w, w + kPi}) {
      const double y = std::fmod(std::fmod(x, 2.0 * kPi) + 2.0 * kPi, 2.0 * kPi);
      bool seen = false;
      for (double v : walls) seen = seen || std::abs(v - y) < 1e-9 || std::abs(std::abs(v - y) - 2.0 * kPi) < 1e-9;
      if (!seen) walls.push_back(y);
    }
  }
  std::sort(walls.begin(), walls.end());
  walls.push_back(walls.front() + 2.0 * kPi);
  const QuadRule gl = gauss_legendre(order);
  SphereRule rule;
  auto add = [&](double a, double b) {
    for (std::size_t q = 0; q < gl.size(); ++q) {
      const double th = 0.5 * (a + b) + 0.5 * (b - a) * gl.nodes[q];
      Vec v(2);
      v << std::cos(th), std::sin(th);
      rule.directions.push_back(v);
      rule.weights.push_back(0.5 * (b - a) * gl.weights[q]);
    }
  };
  for (std::size_t k = 0; k + 1 < walls.size(); ++k) {
    const double lo = walls[k], hi = walls[k + 1], half = 0.5 * (hi - lo);
    std::vector<double> edges{0.0};
    for (double e = 0.5 / std::max(r, 1e-300); e < half; e *= 2.0) edges.push_back(e);
    // merge a sliver next to the middle into its neighbour
    if (edges.size() > 1 && half - edges.back() < 0.5 * (edges.back() - edges[edges.size() - 2]))
      edges.back() = half;
    else
      edges.push_back(half);
    for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
      add(lo + edges[p], lo + edges[p + 1]);
      add(hi - edges[p + 1], hi - edges[p]);
    }
  }
  return rule;
}

FoldedDensity::FoldedDensity(const SpectralDensity& density, double cutoff, int sphere_resolution, double panel,
                             int order, Exec exec)
    : density_(&density), cutoff_(cutoff), order_(order) {
  if (!(cutoff > 0.0) || !(panel > 0.0) || order < 2) throw DomainError("FoldedDensity: bad grid");
  if (density.dim() != 2) sphere_ = sphere_rule(density.dim(), sphere_resolution);
  const std::size_t panels = static_cast<std::size_t>(std::ceil(cutoff / panel - 1e-12));
  panel_ = cutoff / static_cast<double>(panels);
  const std::size_t m = static_cast<std::size_t>(order) + 1;
  for (std::size_t j = 0; j < m; ++j) {
    nodes_.push_back(-std::cos(kPi * static_cast<double>(j) / order));
    bary_.push_back((j % 2 ? -1.0 : 1.0) * (j == 0 || j + 1 == m ? 0.5 : 1.0));
  }
  values_.resize(panels * m);
  for_each_index(exec, values_.size(), [&](std::size_t i) {
    const double a = panel_ * static_cast<double>(i / m);
    values_[i] = direct(a + 0.5 * panel_ * (1.0 + nodes_[i % m]));
  });
  std::vector<double> err(panels);
  for_each_index(exec, panels, [&](std::size_t p) {
    const double x = panel_ * (static_cast<double>(p) + 0.5 + 0.5 / order);
    const cplx d = direct(x);
    err[p] = std::abs((*this)(x) - d) / std::max(std::abs(d), std::numeric_limits<double>::min());
  });
  interp_error_ = *std::max_element(err.begin(), err.end());
}

cplx FoldedDensity::direct(double r) const {
  const SphereRule graded = density_->dim() == 2 ? wall_graded_circle(*density_, r) : SphereRule{};
  const SphereRule& rule = density_->dim() == 2 ? graded : sphere_;
  CompensatedSum<cplx> s;
  for (std::size_t j = 0; j < rule.size(); ++j)
    s.add(rule.weights[j] * (*density_)(CVec((r * rule.directions[j]).cast<cplx>())));
  return s.value();
}

cplx FoldedDensity::operator()(double r) const {
  if (r < 0.0 || r > cutoff_ * (1.0 + 1e-12)) throw DomainError("FoldedDensity: r outside [0, cutoff]");
  const std::size_t m = static_cast<std::size_t>(order_) + 1;
  const std::size_t panels = values_.size() / m;
  const std::size_t p = std::min(panels - 1, static_cast<std::size_t>(r / panel_));
  const double x = 2.0 * (r - panel_ * static_cast<double>(p)) / panel_ - 1.0;
  cplx num{};
  double den = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double dx = x - nodes_[j];
    if (dx == 0.0) return values_[p * m + j];
    const double c = bary_[j] / dx;
    num += c * values_[p * m + j];
    den += c;
  }
  return num / den;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("fit_line: need two or more points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy > 0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

namespace {

void add_candidate(std::vector<PoleCandidate>& list, double y, bool numerator) {
  for (auto& c : list) {
    if (std::abs(c.y - y) <= 1e-9 * std::max(1.0, std::abs(y))) {
      (numerator ? c.numerator_poles : c.denominator_poles) += 1;
      return;
    }
  }
  PoleCandidate c;
  c.y = y;
  (numerator ? c.numerator_poles : c.denominator_poles) = 1;
  list.push_back(c);
}

// Heights y with z = i y where a Gamma argument of the root factor is a
// nonpositive integer, |y| <= h.
std::vector<PoleCandidate> enumerate_candidates(const DensityRoot& r, double h) {
  std::vector<PoleCandidate> list;
  const double k = r.k, k2 = r.k2;
  for (int n = 0;; ++n) {
    bool any = false;
    auto put = [&](double y, bool num) {
      if (std::abs(y) <= h) {
        add_candidate(list, y, num);
        any = true;
      }
    };
    put(n + k, true);                       // Gamma(iz + k)
    put(2.0 * n + k + 2.0 * k2, true);      // Gamma((iz + k)/2 + k2)
    put(-(n + k), true);                    // Gamma(-iz + k)
    put(-(2.0 * n + k + 2.0 * k2 + 2.0), true);  // Gamma((-iz + k)/2 + k2 + 1)
    put(static_cast<double>(n), false);     // Gamma(iz)
    put(2.0 * n + k, false);                // Gamma((iz + k)/2)
    put(-(n + 1.0), false);                 // Gamma(-iz + 1)
    put(-(2.0 * n + k), false);             // Gamma((-iz + k)/2)
    if (!any && n > 0) break;
  }
  std::sort(list.begin(), list.end(),
            [](const PoleCandidate& a, const PoleCandidate& b) { return std::abs(a.y) < std::abs(b.y); });
  return list;
}

double sampled_width(const SpectralDensity& density, const PoleLedger& ledger, int samples) {
  const SphereRule rule = sphere_rule(density.dim(), samples);
  double best = std::numeric_limits<double>::infinity();
  for (const Vec& s : rule.directions) {
    for (std::size_t i = 0; i < ledger.roots.size(); ++i) {
      const double c = std::abs(s.dot(density.roots()[i].coroot));
      if (c < 1e-12 || !std::isfinite(ledger.roots[i].first_height)) continue;
      best = std::min(best, ledger.roots[i].first_height / c);
    }
  }
  return best;
}

}  // namespace

PoleLedger pole_ledger(const SpectralDensity& density, double max_height, int sphere_samples) {
  PoleLedger ledger;
  ledger.max_height = max_height;
  const auto& roots = density.roots();
  for (std::size_t i = 0; i < roots.size(); ++i) {
    RootPoles rp;
    rp.root_index = roots[i].root_index;
    rp.coroot_norm = roots[i].coroot.norm();
    rp.candidates = enumerate_candidates(roots[i], max_height);
    for (const auto& c : rp.candidates)
      if (c.retained()) rp.first_height = std::min(rp.first_height, std::abs(c.y));
    const double g = rp.first_height / rp.coroot_norm;
    if (g < ledger.gamma0) {
      ledger.gamma0 = g;
      ledger.minimizing_root = static_cast<int>(i);
    }
    ledger.roots.push_back(std::move(rp));
  }
  if (ledger.minimizing_root < 0) return ledger;

  ledger.sampled_gamma0 = sampled_width(density, ledger, sphere_samples);

  // Residue probe along a slightly tilted coroot direction, so that no other
  // root factor is singular or vanishing at the probed point.
  const int d = density.dim();
  const auto& r = roots[static_cast<std::size_t>(ledger.minimizing_root)];
  const RootPoles& rp = ledger.roots[static_cast<std::size_t>(ledger.minimizing_root)];
  Vec sigma = r.coroot / r.coroot.norm();
  if (d > 1) {
    const std::array<double, 8> tilt = {0.0113, -0.0071, 0.0097, 0.0041, -0.0059, 0.0083, 0.0027, -0.0037};
    for (int j = 0; j < d; ++j) sigma[j] += tilt[static_cast<std::size_t>(j)];
    sigma.normalize();
  }
  const PoleCandidate* first = nullptr;
  for (const auto& c : rp.candidates)
    if (c.retained() && std::abs(c.y) == rp.first_height) {
      first = &c;
      break;
    }
  const double c = sigma.dot(r.coroot);
  const cplx t0 = kI * first->y / c;
  ledger.probe_direction = sigma;
  ledger.probe_height = t0.imag();
  auto magnitude = [&](double eps) {
    const CVec lam = ((t0 + eps) * sigma.cast<cplx>()).eval();
    return std::abs(density.gamma_form(lam));
  };
  ledger.residue_ratio = magnitude(1e-4) / magnitude(1e-3);
  const int order = first->numerator_poles - first->denominator_poles;
  ledger.residue_confirmed = std::abs(std::log10(ledger.residue_ratio) - order) < 0.1;
  return ledger;
}

double strip_width(const SpectralDensity& density, int sphere_samples) {
  if (density.root_system().integer_multiplicities()) return std::numeric_limits<double>::infinity();
  const PoleLedger ledger = pole_ledger(density, 40.0, sphere_samples);
  if (ledger.sampled_gamma0 < ledger.gamma0 * (1.0 - 1e-12))
    throw ConvergenceError("strip_width: sampled directions undercut the symbolic strip width");
  return ledger.gamma0;
}

GrowthProbe growth_exponent_probe(const SpectralDensity& density, const Vec& sigma, double gamma,
                                  std::uint64_t seed) {
  if (sigma.size() != density.dim()) throw DomainError("growth_exponent_probe: dimension mismatch");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(-1e-3, 1e-3);
  const CVec dir = (sigma / sigma.norm()).cast<cplx>();
  auto log_abs = [&](cplx z) {
    for (int attempt = 0; attempt < 8; ++attempt) {
      try {
        return std::log(std::abs(density.gamma_form((z * dir).eval())));
      } catch (const PoleError&) {
        z += jitter(rng) * std::abs(z);
      }
    }
    throw ConvergenceError("growth_exponent_probe: could not step off the pole set");
  };
  GrowthProbe probe;
  probe.expected_large = 2.0 * density.total_multiplicity();
  probe.expected_small = density.indivisible_count();
  std::vector<double> lx, ly;
  constexpr int n = 25;
  for (int j = 0; j < n; ++j) {
    const double r = 20.0 * std::pow(100.0, static_cast<double>(j) / (n - 1));
    const cplx z(r, gamma);
    lx.push_back(std::log(std::abs(z)));
    ly.push_back(log_abs(z));
  }
  probe.large_slope = fit_line(lx, ly).slope;
  lx.clear();
  ly.clear();
  for (int j = 0; j < n; ++j) {
    const double r = 1e-4 * std::pow(100.0, static_cast<double>(j) / (n - 1));
    lx.push_back(std::log(r));
    ly.push_back(log_abs(cplx(r, 0.0)));
  }
  probe.small_slope = fit_line(lx, ly).slope;
  return probe;
}

FormAgreement density_form_agreement(const SpectralDensity& density, int count, std::uint64_t seed, double box,
                                     Exec exec) {
  const IntegerPolynomialDensity poly(density);
  const int d = density.dim();
  // points drawn serially so the sample set does not depend on the thread count
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> re(-box, box), im(-0.25 * box, 0.25 * box);
  std::vector<CVec> pts(count, CVec(d));
  for (auto& p : pts)
    for (int j = 0; j < d; ++j) p[j] = cplx(re(rng), im(rng));
  std::vector<double> rel(count);
  for_each_index(exec, pts.size(), [&](std::size_t i) {
    const cplx a = density.gamma_form(pts[i]);
    const cplx b = poly(pts[i]);
    const double scale = std::max(std::abs(a), std::abs(b));
    rel[i] = scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
  });
  FormAgreement out;
  out.points = count;
  out.worst = count > 0 ? pts[0] : CVec(d);
  for (int i = 0; i < count; ++i)
    if (rel[i] > out.max_relative) {
      out.max_relative = rel[i];
      out.worst = pts[i];
    }
  return out;
}

}  // namespace cwl
