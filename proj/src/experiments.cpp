#include "cwl/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>

#include "cwl/errors.hpp"
#include "cwl/quadrature.hpp"
#include "cwl/special_fn.hpp"

namespace cwl {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double max_abs_ratio(const EnergyTrace& tr, auto&& keep) {
  double m = 0.0;
  for (std::size_t i = 0; i < tr.t.size(); ++i)
    if (keep(tr.t[i])) m = std::max(m, std::abs(tr.diff[i]) / std::abs(tr.E0));
  return m;
}

ExperimentReport start(const std::string& name, const RootSystem& rs, const Pipeline& p) {
  ExperimentReport r;
  r.experiment = name;
  r.family = rs.name();
  r.k = rs.orbit_multiplicities();
  r.mode = p.transform ? mode_name(DataMode::rank_one_transform) : mode_name(DataMode::model_profile);
  r.metric("radius", p.source->radius());
  r.metric("cutoff", p.grid_a.cutoff);
  r.metric("c0", p.source->c0());
  if (p.calibration) r.metric("c0_relative_spread", p.calibration->relative_spread);
  if (!p.transform) r.metric("fold_interpolation_error", p.fold_error);
  r.metric("setup_seconds", p.setup_seconds);
  return r;
}

void trace_metrics(ExperimentReport& r, const EnergyTrace& tr) {
  r.metric("E0", tr.E0);
  r.metric("max_drift", tr.max_drift);
  r.metric("dual_path", tr.dual_path);
  r.metric("filon_path", tr.filon_path);
  r.metric("floor", tr.floor);
  r.metric("max_imag", tr.max_imag);
}

// conservation and dual-path agreement hold for every run
void trace_checks(ExperimentReport& r, const EnergyTrace& tr, double tol) {
  r.checks.push_back(check_le("energy_drift", tr.max_drift, tol));
  r.checks.push_back(check_le("dual_path", tr.dual_path, tol));
  r.checks.push_back(check_le("filon_path", tr.filon_path, tol));
}

Vec generic_direction(int dim) {
  Vec s(dim);
  const double base[] = {1.0, 0.3719, 0.6143};
  for (int i = 0; i < dim; ++i) s[i] = base[i];
  return s / s.norm();
}

}  // namespace

Check check_le(std::string name, double value, double threshold) {
  return {std::move(name), value, threshold, "<=", value <= threshold};
}
Check check_ge(std::string name, double value, double threshold) {
  return {std::move(name), value, threshold, ">=", value >= threshold};
}
Check check_gt(std::string name, double value, double threshold) {
  return {std::move(name), value, threshold, ">", value > threshold};
}

std::string mode_name(DataMode mode) {
  return mode == DataMode::rank_one_transform ? "rank-one-transform" : "model-profile";
}

DataMode parse_mode(const std::string& text) {
  if (text == "rank-one-transform") return DataMode::rank_one_transform;
  if (text == "model-profile") return DataMode::model_profile;
  throw DomainError("unknown mode '" + text + "' (rank-one-transform | model-profile)");
}

Function1D default_f(double radius) { return bump(0.1 * radius, 0.9 * radius, 12); }
Function1D default_g(double radius) { return bump(-0.15 * radius, 0.85 * radius, 12); }

double model_cutoff(const SpectralDensity& density, const RadialProfile& f, const std::optional<RadialProfile>& g,
                    double tol, double limit) {
  const int d = density.dim();
  const Vec s = generic_direction(d);
  const double h = 0.05;
  const std::size_t n = static_cast<std::size_t>(std::ceil(2.0 * limit / h)) + 1;
  std::vector<double> e(n), cum(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = h * static_cast<double>(i);
    const double hf = f(r), hg = g ? (*g)(r) : 0.0;
    e[i] = (r * r * hf * hf + hg * hg) * std::abs(density(CVec((r * s).cast<cplx>()))) * std::pow(r, d - 1);
    if (i > 0) cum[i] = cum[i - 1] + 0.5 * h * (e[i] + e[i - 1]);
  }
  for (double L = 1.0; L <= limit; L += 1.0) {
    const std::size_t a = static_cast<std::size_t>(std::lround(L / h)), b = 2 * a;
    const double tail = *std::max_element(e.begin() + static_cast<long>(a), e.begin() + static_cast<long>(b) + 1);
    if (L * tail < tol * cum[a]) return L;
  }
  throw BudgetError("model_cutoff: spectral tail above budget up to " + std::to_string(limit));
}

Pipeline build_pipeline(const RootSystem& rs, const PipelineSpec& spec, Exec exec) {
  if (spec.mode == DataMode::rank_one_transform)
    return build_pipeline(rs, spec, default_f(spec.radius), default_g(spec.radius), exec);
  const auto t0 = Clock::now();
  if (!(spec.radius > 0.0)) throw DomainError("pipeline: radius must be positive");
  const int d = rs.dim();
  // decay budget: m + (d + 1)/2 > 2|k| + d + 4
  const int budget = static_cast<int>(std::ceil(2.0 * rs.total_multiplicity())) + d + 4;
  RadialProfile f(spec.radius, spec.profile_order, d, budget);
  RadialProfile g(spec.radius, spec.profile_order + 1, d, budget);
  auto src = std::make_shared<ModelProfileSource>(rs, f, g);
  Pipeline p;
  p.source = src;
  const double cutoff =
      spec.cutoff > 0.0 ? spec.cutoff : model_cutoff(src->density(), f, g, spec.cutoff_tolerance);
  p.grid_a = {cutoff, oscillatory_panel(spec.t_max), spec.order_a, spec.sphere_resolution};
  p.grid_b = {cutoff, 0.77 * oscillatory_panel(spec.t_max), spec.order_b, spec.sphere_resolution};
  p.state = build_state(*src, p.grid_a, exec);
  p.densities = radial_densities(*src, p.grid_b, exec);
  p.fold_error = src->folded(cutoff, spec.sphere_resolution, exec)->interpolation_error();
  p.setup_seconds = since(t0);
  return p;
}

Pipeline build_pipeline(const RootSystem& rs, const PipelineSpec& spec, Function1D f, std::optional<Function1D> g,
                        Exec exec) {
  if (spec.mode != DataMode::rank_one_transform) throw DomainError("pipeline: caller data needs rank-one mode");
  if (rs.dim() != 1) throw DomainError("pipeline: rank-one mode needs a rank-one family");
  const auto t0 = Clock::now();
  const double R = std::max(f.support(), g ? g->support() : 0.0);
  if (R > spec.radius * (1.0 + 1e-12)) throw DomainError("pipeline: data support exceeds the radius");
  Pipeline p;
  auto tr = std::make_shared<RankOneTransform>(rs, spec.radius);
  p.transform = tr;
  std::vector<Function1D> fs{f};
  if (g) fs.push_back(*g);
  const double cutoff = spec.cutoff > 0.0 ? spec.cutoff : tr->suggest_cutoff(fs, spec.cutoff_tolerance, 400.0);
  const double cal_cutoff = std::max(120.0 / spec.radius, cutoff);
  p.calibration = calibrate_c0(*tr, SpectralGrid::symmetric(cal_cutoff, std::min(0.5, 0.5 / spec.radius), 16), exec);
  p.f = f;
  p.g = g;
  auto src = std::make_shared<RankOneTransformSource>(tr, std::move(f), std::move(g), p.calibration->c0);
  p.source = src;
  p.grid_a = {cutoff, oscillatory_panel(spec.t_max), spec.order_a, 1};
  p.grid_b = {cutoff, 0.77 * oscillatory_panel(spec.t_max), spec.order_b, 1};
  p.state = build_state(*src, p.grid_a, exec);
  p.densities = radial_densities(*src, p.grid_b, exec);
  p.setup_seconds = since(t0);
  return p;
}

std::vector<double> linear_times(double t0, double t1, int count) {
  if (count < 2) throw DomainError("linear_times: need two or more times");
  std::vector<double> t(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) t[static_cast<std::size_t>(i)] = t0 + (t1 - t0) * i / (count - 1);
  return t;
}

std::vector<double> geometric_times(double t0, double t1, double ratio) {
  if (!(t0 > 0.0) || !(t1 >= t0) || !(ratio > 1.0)) throw DomainError("geometric_times: need 0 < t0 <= t1, ratio > 1");
  std::vector<double> t;
  for (double x = t0; x <= t1 * (1.0 + 1e-12); x *= ratio) t.push_back(x);
  return t;
}

bool ExperimentReport::pass() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

double ExperimentReport::metric(const std::string& name) const {
  for (const auto& m : metrics)
    if (m.name == name) return m.value;
  throw DomainError("report: no metric '" + name + "'");
}

FitWindow decay_window(const EnergyTrace& trace, double t_min, bool log_time) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < trace.t.size(); ++i)
    if (trace.t[i] > 0.0 && trace.t[i] >= t_min) idx.push_back(i);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return trace.t[a] < trace.t[b]; });
  const double thr = 100.0 * trace.floor;
  FitWindow w;
  long last = -1;
  for (std::size_t j = 0; j < idx.size(); ++j)
    if (std::abs(trace.diff[idx[j]]) >= thr) last = static_cast<long>(j);
  if (last < 0) return w;
  std::size_t begin = 0;
  for (std::size_t j = 1; j <= static_cast<std::size_t>(last); ++j)
    if ((trace.diff[idx[j]] > 0) != (trace.diff[idx[j - 1]] > 0)) begin = j;
  std::size_t peak = begin;
  for (std::size_t j = begin; j <= static_cast<std::size_t>(last); ++j)
    if (std::abs(trace.diff[idx[j]]) > std::abs(trace.diff[idx[peak]])) peak = j;
  std::vector<double> x, y;
  for (std::size_t j = peak; j <= static_cast<std::size_t>(last); ++j) {
    const std::size_t i = idx[j];
    if (std::abs(trace.diff[i]) < thr) continue;
    w.t.push_back(trace.t[i]);
    w.value.push_back(std::abs(trace.diff[i]) / std::abs(trace.E0));
    x.push_back(log_time ? std::log(trace.t[i]) : trace.t[i]);
    y.push_back(std::log(w.value.back()));
  }
  if (x.size() >= 3) {
    w.fit = fit_line(x, y);
    w.valid = true;
  }
  return w;
}

ExperimentReport conservation_experiment(const RootSystem& rs, const Pipeline& p, const std::vector<double>& times,
                                         double tol, Exec exec) {
  const auto t0 = Clock::now();
  ExperimentReport r = start("conservation", rs, p);
  EnergyTrace tr = energy_trace(p.state, p.densities, times, exec);
  trace_metrics(r, tr);
  trace_checks(r, tr, tol);
  double tm = 0.0, lowest = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    tm = std::max(tm, std::abs(times[i]));
    lowest = std::min({lowest, tr.K[i] / tr.E0, tr.P[i] / tr.E0});
  }
  // Reversing time maps (f, g) to (f, -g), so K(-t) = K(t) only holds once
  // the f-g cross term is gone; with g = 0 it is exact.
  SpectralState f_only = p.state;
  for (auto& x : f_only.samples) x.Fg = x.Ftg = 0.0;
  const Energies plus = energies(f_only, tm), minus = energies(f_only, -tm);
  const double scale = std::abs(energies(f_only, 0.0).E);
  const double sym = std::max(std::abs(plus.K - minus.K), std::abs(plus.P - minus.P)) / scale;
  const Energies fp = energies(p.state, tm), fm = energies(p.state, -tm);
  r.metric("time_symmetry_g0", sym);
  r.metric("time_asymmetry_fg", std::abs(fp.K - fm.K) / std::abs(tr.E0));
  r.metric("min_K_or_P", lowest);
  r.checks.push_back(check_le("time_symmetry_g0", sym, tol));
  r.checks.push_back(check_ge("K_P_nonnegative", lowest, -tol));
  r.trace = std::move(tr);
  r.seconds = since(t0) + p.setup_seconds;
  return r;
}

ExperimentReport strict_equipartition_experiment(const RootSystem& rs, const Pipeline& p,
                                                 const std::vector<double>& times, double tol, double margin,
                                                 Exec exec) {
  if (rs.dim() % 2 == 0) throw DomainError("strict equipartition: dimension must be odd");
  if (!rs.integer_multiplicities()) throw DomainError("strict equipartition: multiplicities must be integers");
  const auto t0 = Clock::now();
  ExperimentReport r = start("strict_equipartition", rs, p);
  EnergyTrace tr = energy_trace(p.state, p.densities, times, exec);
  trace_metrics(r, tr);
  trace_checks(r, tr, 1e-8);
  const double R = p.source->radius();
  const double threshold = (1.0 + margin) * R;
  const double after = max_abs_ratio(tr, [&](double t) { return std::abs(t) >= threshold; });
  const double before = max_abs_ratio(tr, [&](double t) { return std::abs(t) < R; });
  r.metric("threshold", threshold);
  r.metric("max_ratio_beyond_threshold", after);
  r.metric("max_ratio_below_R", before);
  r.checks.push_back(check_le("equipartition_beyond_threshold", after, tol));
  r.checks.push_back(check_gt("nondegenerate_below_R", before, 10.0 * tol));
  if (!(before > 10.0 * tol)) r.notes.push_back("degenerate data: P - K already negligible for |t| < R");
  r.trace = std::move(tr);
  r.seconds = since(t0) + p.setup_seconds;
  return r;
}

ExperimentReport exponential_decay_experiment(const RootSystem& rs, const Pipeline& p,
                                              const std::vector<double>& times, double rate_factor,
                                              double min_r_squared, const std::vector<double>& test_fractions,
                                              Exec exec) {
  if (rs.dim() % 2 == 0) throw DomainError("exponential decay: dimension must be odd");
  if (rs.integer_multiplicities()) throw DomainError("exponential decay: needs a non-integer multiplicity");
  const auto t0 = Clock::now();
  ExperimentReport r = start("exponential_decay", rs, p);
  const double gamma0 = strip_width(p.source->density(), 720);
  EnergyTrace tr = energy_trace(p.state, p.densities, times, exec);
  trace_metrics(r, tr);
  trace_checks(r, tr, 1e-8);
  const FitWindow w = decay_window(tr, times.empty() ? 0.0 : *std::min_element(times.begin(), times.end()), false);
  r.metric("gamma0", gamma0);
  r.metric("fit_points", static_cast<double>(w.t.size()));
  r.checks.push_back(check_ge("fit_points", static_cast<double>(w.t.size()), 3.0));
  if (w.valid) {
    const double rate = -w.fit.slope;
    r.metric("rate", rate);
    r.metric("gamma_fit", 0.5 * rate);
    r.metric("r_squared", w.fit.r_squared);
    r.metric("window_t_min", w.t.front());
    r.metric("window_t_max", w.t.back());
    r.checks.push_back(check_ge("rate_vs_gamma0", rate, 2.0 * rate_factor * gamma0));
    r.checks.push_back(check_ge("r_squared", w.fit.r_squared, min_r_squared));
    for (double frac : test_fractions) {
      const double gt = frac * gamma0;
      r.checks.push_back(check_ge("rate_vs_gamma_test_" + std::to_string(frac).substr(0, 4), rate, 2.0 * 0.9 * gt));
    }
  }
  r.window = w;
  r.trace = std::move(tr);
  r.seconds = since(t0) + p.setup_seconds;
  return r;
}

ExperimentReport polynomial_decay_experiment(const RootSystem& rs, const Pipeline& p,
                                             const std::vector<double>& times, double slack, Exec exec) {
  if (rs.dim() % 2 != 0) throw DomainError("polynomial decay: dimension must be even");
  const auto t0 = Clock::now();
  ExperimentReport r = start("polynomial_decay", rs, p);
  const int d = rs.dim();
  const int D = p.source->density().indivisible_count();
  EnergyTrace tr = energy_trace(p.state, p.densities, times, exec);
  trace_metrics(r, tr);
  trace_checks(r, tr, 1e-8);
  if (!p.transform) r.checks.push_back(check_le("fold_interpolation", p.fold_error, 1e-10));

  // Phi, Psi even in r, and Phi / r^D, Psi / r^D bounded at the origin
  const RadialDensities refl =
      radial_densities_reflected(*p.source, p.densities, p.grid_b.sphere_resolution, exec);
  double odd = 0.0, scale = 0.0, near = 0.0, away = 0.0;
  for (std::size_t i = 0; i < p.densities.r.size(); ++i) {
    odd = std::max({odd, std::abs(refl.Phi[i] - p.densities.Phi[i]), std::abs(refl.Psi[i] - p.densities.Psi[i])});
    scale = std::max({scale, std::abs(p.densities.Phi[i]), std::abs(p.densities.Psi[i])});
    const double ri = p.densities.r[i];
    const double v = std::max(p.densities.Phi_scaled[i], p.densities.Psi_scaled[i]);
    if (ri < 0.1) near = std::max(near, v);
    else if (ri < 0.2) away = std::max(away, v);
  }
  r.metric("evenness_defect", scale > 0 ? odd / scale : odd);
  r.metric("divisible_sup_near_0", near);
  r.metric("divisible_sup_0.1_to_0.2", away);
  r.checks.push_back(check_le("evenness", scale > 0 ? odd / scale : odd, 1e-12));
  r.checks.push_back(check_le("divisible_by_r^D", near, away));

  const FitWindow w = decay_window(tr, 1.0, true);
  const double bound = -static_cast<double>(d + D), remark = -static_cast<double>(d + 2 * D);
  r.metric("D", D);
  r.metric("exponent_bound", bound);
  r.metric("exponent_remark", remark);
  r.metric("fit_points", static_cast<double>(w.t.size()));
  r.checks.push_back(check_ge("fit_points", static_cast<double>(w.t.size()), 3.0));
  if (w.valid) {
    r.metric("slope", w.fit.slope);
    r.metric("r_squared", w.fit.r_squared);
    r.metric("window_t_min", w.t.front());
    r.metric("window_t_max", w.t.back());
    r.checks.push_back(check_le("slope_vs_bound", w.fit.slope, bound + slack));
    if (w.fit.slope < bound)
      r.notes.push_back("measured decay is steeper than the -d-|R0+| bound; compare with -d-2D = " +
                        std::to_string(static_cast<int>(remark)));
  }
  r.window = w;
  r.trace = std::move(tr);
  r.seconds = since(t0) + p.setup_seconds;
  return r;
}

ExperimentReport classical_oracle_experiment(const RootSystem& rs, const Pipeline& p,
                                             const std::vector<double>& times, double tol, Exec exec) {
  if (rs.dim() != 1 || !rs.zero_multiplicities()) throw DomainError("classical oracle: needs d = 1 and k = 0");
  if (!p.f) throw DomainError("classical oracle: needs rank-one data");
  const auto t0 = Clock::now();
  ExperimentReport r = start("classical_oracle", rs, p);
  EnergyTrace tr = energy_trace(p.state, p.densities, times, exec);
  trace_metrics(r, tr);
  trace_checks(r, tr, 1e-8);
  r.classical.resize(times.size());
  for_each_index(exec, times.size(), [&](std::size_t i) { r.classical[i] = dalembert_energies(*p.f, p.g, times[i]); });
  double dk = 0.0, dp = 0.0, exact_after = 0.0;
  const double R = p.source->radius();
  for (std::size_t i = 0; i < times.size(); ++i) {
    dk = std::max(dk, std::abs(tr.K[i] - r.classical[i].K) / std::abs(tr.E0));
    dp = std::max(dp, std::abs(tr.P[i] - r.classical[i].P) / std::abs(tr.E0));
    if (std::abs(times[i]) >= R)
      exact_after = std::max(exact_after, std::abs(r.classical[i].P - r.classical[i].K) / std::abs(tr.E0));
  }
  const double after = max_abs_ratio(tr, [&](double t) { return std::abs(t) >= R; });
  r.metric("max_K_error", dk);
  r.metric("max_P_error", dp);
  r.metric("max_ratio_beyond_R", after);
  r.metric("dalembert_ratio_beyond_R", exact_after);
  r.checks.push_back(check_le("kinetic_vs_dalembert", dk, tol));
  r.checks.push_back(check_le("potential_vs_dalembert", dp, tol));
  r.checks.push_back(check_le("equipartition_beyond_R", after, tol));
  r.trace = std::move(tr);
  r.seconds = since(t0) + p.setup_seconds;
  return r;
}

ExperimentReport finite_propagation_check(const RootSystem& rs, const Pipeline& p, const std::vector<double>& times,
                                          double dx, double tol, Exec exec) {
  auto src = std::dynamic_pointer_cast<const RankOneTransformSource>(p.source);
  if (!src) throw DomainError("finite propagation: needs rank-one transform data");
  const auto t0 = Clock::now();
  ExperimentReport r = start("finite_propagation", rs, p);
  const double R = src->radius(), delta = 3.0 * dx;
  const SpectralGrid grid = SpectralGrid::symmetric(p.grid_a.cutoff, 0.25, 16);
  r.metric("delta", delta);
  double worst = 0.0;
  for (double t : times) {
    const double X = R + std::abs(t) + 1.0;
    const int n = static_cast<int>(std::lround(X / dx));
    std::vector<double> xs;
    for (int j = -n; j <= n; ++j) xs.push_back(j * dx);
    SampledFunction u = reconstruct_solution(*src, grid, t, xs, exec);
    double peak = 0.0, tail = 0.0;
    for (std::size_t j = 0; j < xs.size(); ++j) {
      peak = std::max(peak, std::abs(u.values[j]));
      if (std::abs(xs[j]) >= R + std::abs(t) + delta) tail = std::max(tail, std::abs(u.values[j]));
    }
    const double ratio = peak > 0 ? tail / peak : tail;
    worst = std::max(worst, ratio);
    const std::string tag = std::to_string(t).substr(0, 4);
    r.metric("tail_ratio_t=" + tag, ratio);
    r.checks.push_back(check_le("support_t=" + tag, ratio, tol));
    r.profiles.emplace_back(t, std::move(u));
  }
  r.metric("max_tail_ratio", worst);
  r.seconds = since(t0) + p.setup_seconds;
  return r;
}

}  // namespace cwl
