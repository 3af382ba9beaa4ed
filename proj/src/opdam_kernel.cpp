#include "cwl/opdam_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "cwl/errors.hpp"
#include "cwl/special_fn.hpp"

namespace cwl {

namespace {

constexpr int kMaxSeedOrder = 64;

template <class Span>
cplx horner(const Span& c, double t) {
  cplx acc{};
  for (std::size_t n = c.size(); n-- > 0;) acc = acc * t + c[n];
  return acc;
}

template <class Span>
cplx horner_derivative(const Span& c, double t) {
  cplx acc{};
  for (std::size_t n = c.size(); n-- > 1;) acc = acc * t + static_cast<double>(n) * c[n];
  return acc;
}

// Even-power coefficients of x sum_j k_j beta_j coth(beta_j x / 2), as a
// dense array q[0..order].
std::vector<double> origin_coth_series(const RankOneConfig& cfg, int order) {
  const std::vector<double> c = ycoth_coefficients(order / 2 + 1);
  std::vector<double> q(static_cast<std::size_t>(order) + 1, 0.0);
  for (std::size_t j = 0; j < cfg.betas.size(); ++j) {
    const double half = 0.5 * cfg.betas[j];
    double pw = 1.0;
    for (int n = 0; 2 * n <= order; ++n) {
      q[static_cast<std::size_t>(2 * n)] += 2.0 * cfg.ks[j] * c[static_cast<std::size_t>(n)] * pw;
      pw *= half * half;
    }
  }
  return q;
}

// Jet of (p, w) and, when `dl` is given, of (d/dlambda p, d/dlambda w).
void seed_recursion(const RankOneConfig& cfg, cplx lambda, int order, KernelJet& jet, KernelJet* dl) {
  const std::vector<double> q = origin_coth_series(cfg, order);
  const std::size_t n_max = static_cast<std::size_t>(order) + 1;
  jet.p.assign(n_max, cplx{});
  jet.w.assign(n_max, cplx{});
  jet.p[0] = 2.0;
  if (dl) {
    dl->p.assign(n_max, cplx{});
    dl->w.assign(n_max, cplx{});
  }
  const cplx lm = lambda - cfg.rho, lp = lambda + cfg.rho;
  for (std::size_t n = 1; n < n_max; ++n) {
    cplx s = lp * jet.p[n - 1];
    for (std::size_t m = 1; m <= n; ++m) s -= q[m] * jet.w[n - m];
    const double denom = static_cast<double>(n) + q[0];
    jet.w[n] = s / denom;
    jet.p[n] = lm * jet.w[n - 1] / static_cast<double>(n);
    if (dl) {
      cplx sl = jet.p[n - 1] + lp * dl->p[n - 1];
      for (std::size_t m = 1; m <= n; ++m) sl -= q[m] * dl->w[n - m];
      dl->w[n] = sl / denom;
      dl->p[n] = (jet.w[n - 1] + lm * dl->w[n - 1]) / static_cast<double>(n);
    }
  }
}

}  // namespace

RankOneConfig RankOneConfig::from(const RootSystem& rs) {
  if (rs.dim() != 1) throw DomainError("rank-one kernel: root system " + rs.name() + " has rank > 1");
  RankOneConfig cfg;
  for (int i : rs.positive()) {
    cfg.betas.push_back(std::abs(rs.roots()[static_cast<std::size_t>(i)].vector[0]));
    cfg.ks.push_back(rs.roots()[static_cast<std::size_t>(i)].k);
  }
  cfg.rho = rs.rho()[0];
  cfg.weyl_order = static_cast<int>(rs.weyl_group().size());
  return cfg;
}

double RankOneConfig::total_k() const {
  double s = 0.0;
  for (double k : ks) s += k;
  return s;
}

std::vector<cplx> KernelJet::u() const {
  std::vector<cplx> out(p.size());
  for (std::size_t n = 0; n < p.size(); ++n) out[n] = 0.5 * (p[n] + w[n]);
  return out;
}

std::vector<cplx> KernelJet::v() const {
  std::vector<cplx> out(p.size());
  for (std::size_t n = 0; n < p.size(); ++n) out[n] = 0.5 * (p[n] - w[n]);
  return out;
}

KernelJet seed_series(const RankOneConfig& cfg, cplx lambda, int order) {
  if (order < 4) throw DomainError("seed_series: order must be at least 4");
  KernelJet jet;
  seed_recursion(cfg, lambda, order, jet, nullptr);
  return jet;
}

KernelSolution::KernelSolution(const RankOneConfig& cfg, cplx lambda, double x_max, const KernelOptions& opts)
    : cfg_(cfg), lambda_(lambda), x_max_(x_max), with_dl_(opts.lambda_derivative) {
  if (!(x_max >= 0.0) || !std::isfinite(x_max)) throw DomainError("kernel: x_max must be finite and >= 0");
  if (!std::isfinite(lambda.real()) || !std::isfinite(lambda.imag()))
    throw DomainError("kernel: non-finite spectral parameter");
  const int order = opts.taylor_order;
  if (order < 8) throw DomainError("kernel: Taylor order must be at least 8");
  const double scale = std::abs(lambda) + std::abs(cfg.rho) + 1.0;

  // Seed: shrink x0 until the jet's tail is below 1e-17.
  x0_ = std::min({0.1, 1.0 / scale, x_max});
  for (;;) {
    seed_recursion(cfg, lambda, kMaxSeedOrder, seed_, with_dl_ ? &seed_dl_ : nullptr);
    auto term = [&](std::size_t n) {
      double t = (std::abs(seed_.p[n]) + std::abs(seed_.w[n])) * std::pow(x0_, static_cast<double>(n));
      if (with_dl_) t += (std::abs(seed_dl_.p[n]) + std::abs(seed_dl_.w[n])) * std::pow(x0_, static_cast<double>(n));
      return t;
    };
    std::size_t cut = 0;
    for (std::size_t n = 12; n <= static_cast<std::size_t>(kMaxSeedOrder); ++n)
      if (term(n) < 1e-17 && term(n - 1) < 1e-17) {
        cut = n;
        break;
      }
    if (cut != 0) {
      seed_.p.resize(cut + 1);
      seed_.w.resize(cut + 1);
      if (with_dl_) {
        seed_dl_.p.resize(cut + 1);
        seed_dl_.w.resize(cut + 1);
      }
      seed_err_ = 2e-17;
      break;
    }
    x0_ *= 0.5;
    if (x0_ < 1e-6) throw ConvergenceError("kernel: seed series does not converge");
  }

  // Taylor integrator on [x0, x_max].
  cplx p = horner(seed_.p, x0_), w = horner(seed_.w, x0_);
  cplx pl{}, wl{};
  if (with_dl_) {
    pl = horner(seed_dl_.p, x0_);
    wl = horner(seed_dl_.w, x0_);
  }
  double rel_err = seed_err_;
  const cplx lm = lambda - cfg.rho, lp = lambda + cfg.rho;
  const std::size_t N = static_cast<std::size_t>(order);
  std::vector<cplx> C(N + 1);
  std::vector<double> y(N + 1);
  double a = x0_;
  while (a < x_max) {
    // Taylor coefficients of sum k beta coth(beta (a + h)/2) in h from the
    // Riccati equation y' = (beta/2)(1 - y^2).
    std::fill(C.begin(), C.end(), cplx{});
    for (std::size_t j = 0; j < cfg.betas.size(); ++j) {
      const double b = cfg.betas[j];
      if (cfg.ks[j] == 0.0) continue;
      y[0] = 1.0 / std::tanh(0.5 * b * a);
      for (std::size_t n = 0; n < N; ++n) {
        double conv = 0.0;
        for (std::size_t m = 0; m <= n; ++m) conv += y[m] * y[n - m];
        y[n + 1] = 0.5 * b * ((n == 0 ? 1.0 : 0.0) - conv) / static_cast<double>(n + 1);
      }
      for (std::size_t n = 0; n <= N; ++n) C[n] += cfg.ks[j] * b * y[n];
    }
    Segment seg;
    seg.a = a;
    seg.p.assign(N + 1, cplx{});
    seg.w.assign(N + 1, cplx{});
    seg.p[0] = p;
    seg.w[0] = w;
    if (with_dl_) {
      seg.pl.assign(N + 1, cplx{});
      seg.wl.assign(N + 1, cplx{});
      seg.pl[0] = pl;
      seg.wl[0] = wl;
    }
    for (std::size_t n = 0; n < N; ++n) {
      const double inv = 1.0 / static_cast<double>(n + 1);
      cplx s = lp * seg.p[n];
      for (std::size_t m = 0; m <= n; ++m) s -= C[m] * seg.w[n - m];
      seg.p[n + 1] = lm * seg.w[n] * inv;
      seg.w[n + 1] = s * inv;
      if (with_dl_) {
        cplx sl = seg.p[n] + lp * seg.pl[n];
        for (std::size_t m = 0; m <= n; ++m) sl -= C[m] * seg.wl[n - m];
        seg.pl[n + 1] = (seg.w[n] + lm * seg.wl[n]) * inv;
        seg.wl[n + 1] = sl * inv;
      }
    }
    const double mag = std::max(std::abs(p) + std::abs(w), 1e-300);
    auto tail = [&](double h) {
      double t = 0.0;
      for (std::size_t n = N - 1; n <= N; ++n) {
        double c = std::abs(seg.p[n]) + std::abs(seg.w[n]);
        if (with_dl_) c += std::abs(seg.pl[n]) + std::abs(seg.wl[n]);
        t += c * std::pow(h, static_cast<double>(n));
      }
      return t / mag;
    };
    double h = std::min({x_max - a, 0.5 * a, 3.0 / scale});
    while (tail(h) > opts.tolerance) {
      h *= 0.7;
      if (h < 1e-9 * std::max(1.0, a)) throw ConvergenceError("kernel: step size underflow");
    }
    seg.h = h;
    rel_err += tail(h) + 1e-16;
    seg.err = rel_err;
    p = horner(seg.p, h);
    w = horner(seg.w, h);
    if (with_dl_) {
      pl = horner(seg.pl, h);
      wl = horner(seg.wl, h);
    }
    a = (x_max - a - h <= 1e-14 * x_max) ? x_max : a + h;
    segments_.push_back(std::move(seg));
  }
}

KernelSolution::Local KernelSolution::local(double r) const {
  Local out{};
  if (r <= x0_ || segments_.empty()) {
    out.p = horner(seed_.p, r);
    out.w = horner(seed_.w, r);
    out.dp = horner_derivative(seed_.p, r);
    out.dw = horner_derivative(seed_.w, r);
    if (with_dl_) {
      out.pl = horner(seed_dl_.p, r);
      out.wl = horner(seed_dl_.w, r);
    }
    out.err = seed_err_;
    return out;
  }
  auto it = std::upper_bound(segments_.begin(), segments_.end(), r,
                             [](double v, const Segment& s) { return v < s.a; });
  const Segment& s = *(it - 1);
  const double t = std::min(r - s.a, s.h);
  out.p = horner(s.p, t);
  out.w = horner(s.w, t);
  out.dp = horner_derivative(s.p, t);
  out.dw = horner_derivative(s.w, t);
  if (with_dl_) {
    out.pl = horner(s.pl, t);
    out.wl = horner(s.wl, t);
  }
  out.err = s.err;
  return out;
}

cplx KernelSolution::eval(double x) const {
  const double r = std::abs(x);
  if (r > x_max_ * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "kernel: |x| = " << r << " beyond x_max = " << x_max_;
    throw DomainError(msg.str());
  }
  const Local l = local(std::min(r, x_max_));
  return x >= 0.0 ? 0.5 * (l.p + l.w) : 0.5 * (l.p - l.w);
}

std::pair<cplx, cplx> KernelSolution::eval_pair(double r) const {
  if (r < 0.0 || r > x_max_ * (1.0 + 1e-12)) throw DomainError("kernel: eval_pair outside [0, x_max]");
  const Local l = local(std::min(r, x_max_));
  return {0.5 * (l.p + l.w), 0.5 * (l.p - l.w)};
}

double KernelSolution::error(double x) const {
  const Local l = local(std::min(std::abs(x), x_max_));
  return l.err * 0.5 * (std::abs(l.p) + std::abs(l.w));
}

cplx KernelSolution::derivative(double x) const {
  const double r = std::abs(x);
  if (r > x_max_ * (1.0 + 1e-12)) throw DomainError("kernel: derivative beyond x_max");
  const Local l = local(std::min(r, x_max_));
  return x >= 0.0 ? 0.5 * (l.dp + l.dw) : -0.5 * (l.dp - l.dw);
}

cplx KernelSolution::lambda_derivative(double x) const {
  if (!with_dl_) throw DomainError("kernel: solution built without the lambda-derivative system");
  const double r = std::abs(x);
  if (r > x_max_ * (1.0 + 1e-12)) throw DomainError("kernel: lambda derivative beyond x_max");
  const Local l = local(std::min(r, x_max_));
  return x >= 0.0 ? 0.5 * (l.pl + l.wl) : 0.5 * (l.pl - l.wl);
}

cplx eval_kernel_rank1(const RankOneConfig& cfg, cplx lambda, double x, const KernelOptions& opts) {
  return KernelSolution(cfg, lambda, std::abs(x), opts).eval(x);
}

KernelTable build_kernel_table(const RankOneConfig& cfg, const std::vector<cplx>& lambdas,
                               const std::vector<double>& xs, double x_max, Exec exec, double tolerance) {
  KernelTable table;
  table.config = cfg;
  table.lambdas = lambdas;
  table.xs = xs;
  table.x_max = x_max;
  const std::size_t nx = xs.size();
  table.values.assign(lambdas.size() * nx, cplx{});
  table.errors.assign(lambdas.size() * nx, 0.0);
  for_each_index(exec, lambdas.size(), [&](std::size_t i) {
    const KernelSolution sol(cfg, lambdas[i], x_max);
    for (std::size_t j = 0; j < nx; ++j) {
      const cplx g = sol.eval(xs[j]);
      const double e = sol.error(xs[j]);
      // G(x) and G(-x) come out of one solve, so the error is measured against the pair
      const auto [gp, gm] = sol.eval_pair(std::abs(xs[j]));
      if (e > tolerance * std::max({1.0, std::abs(gp), std::abs(gm)})) {
        std::ostringstream msg;
        msg << "kernel table: error estimate " << e << " at lambda = " << lambdas[i] << ", x = " << xs[j];
        throw ConvergenceError(msg.str());
      }
      table.values[i * nx + j] = g;
      table.errors[i * nx + j] = e;
    }
  });
  return table;
}

KernelBoundReport verify_kernel_bound(const KernelTable& table) {
  KernelBoundReport rep;
  rep.histogram_edges = {0.0, 0.05, 0.1, 0.15, 0.2, 0.5, 1.0, 2.0, 5.0};
  rep.histogram.assign(rep.histogram_edges.size(), 0);
  rep.min_margin = std::numeric_limits<double>::infinity();
  const double sqrt_w = std::sqrt(static_cast<double>(table.config.weyl_order));
  for (std::size_t i = 0; i < table.lambdas.size(); ++i) {
    for (std::size_t j = 0; j < table.xs.size(); ++j) {
      const double g = std::abs(table.at(i, j));
      const double log_bound = std::log(sqrt_w) + std::abs(table.lambdas[i].real()) * std::abs(table.xs[j]);
      const double margin = (log_bound - std::log(g)) / std::log(10.0);
      ++rep.entries;
      if (margin < 0.0) ++rep.violations;
      if (table.xs[j] == 0.0 && std::abs(table.at(i, j) - 1.0) > 1e-12) ++rep.nonunit_origin;
      rep.min_margin = std::min(rep.min_margin, margin);
      std::size_t b = 0;
      while (b + 1 < rep.histogram_edges.size() && margin >= rep.histogram_edges[b + 1]) ++b;
      if (margin >= 0.0) ++rep.histogram[b];
    }
  }
  return rep;
}

void write_kernel_csv(const KernelTable& table, std::ostream& out) {
  out << "lambda_re,lambda_im,x,G_re,G_im,err\n";
  out << std::setprecision(17);
  for (std::size_t i = 0; i < table.lambdas.size(); ++i)
    for (std::size_t j = 0; j < table.xs.size(); ++j) {
      const cplx g = table.at(i, j);
      out << table.lambdas[i].real() << ',' << table.lambdas[i].imag() << ',' << table.xs[j] << ',' << g.real()
          << ',' << g.imag() << ',' << table.errors[i * table.xs.size() + j] << '\n';
    }
}

KernelTable read_kernel_csv(std::istream& in, const RankOneConfig& cfg) {
  KernelTable table;
  table.config = cfg;
  std::string line;
  if (!std::getline(in, line) || line.rfind("lambda_re", 0) != 0)
    throw DomainError("kernel csv: missing header");
  std::size_t row = 1;
  std::vector<double> xs_all;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::istringstream ss(line);
    double v[6];
    char comma;
    for (int c = 0; c < 6; ++c) {
      if (!(ss >> v[c]) || (c < 5 && !(ss >> comma))) {
        throw DomainError("kernel csv: malformed row " + std::to_string(row));
      }
    }
    const cplx lam(v[0], v[1]);
    if (table.lambdas.empty() || table.lambdas.back() != lam) table.lambdas.push_back(lam);
    if (table.lambdas.size() == 1) table.xs.push_back(v[2]);
    xs_all.push_back(v[2]);
    table.values.emplace_back(v[3], v[4]);
    table.errors.push_back(v[5]);
  }
  if (table.values.size() != table.lambdas.size() * table.xs.size())
    throw DomainError("kernel csv: table is not rectangular");
  for (std::size_t i = 0; i < xs_all.size(); ++i)
    if (xs_all[i] != table.xs[i % table.xs.size()]) throw DomainError("kernel csv: inconsistent x grid");
  for (double x : table.xs) table.x_max = std::max(table.x_max, std::abs(x));
  return table;
}

}  // namespace cwl
