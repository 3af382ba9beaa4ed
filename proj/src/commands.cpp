#include "cwl/commands.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <sstream>

#include "cwl/errors.hpp"
#include "cwl/opdam_kernel.hpp"
#include "cwl/plancherel.hpp"
#include "cwl/special_fn.hpp"

namespace cwl {

namespace {

using Clock = std::chrono::steady_clock;

struct Context {
  const ExperimentConfig& cfg;
  Exec exec;
  CommandResult& out;
  Json& body;  // command-specific section of the report

  void add(const ExperimentReport& r) {
    body["experiments"].push_back(to_json(r));
    out.experiments.push_back(r);
  }
  void artifact(std::string name, std::string content) { out.artifacts.push_back({std::move(name), std::move(content)}); }
};

// A command body: fills ctx, returns its own checks (beyond the experiments').
using Body = std::function<std::vector<Check>(Context&)>;

Json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

std::string error_type(const std::exception& e) {
  if (dynamic_cast<const BudgetError*>(&e)) return "BudgetError";
  if (dynamic_cast<const ConvergenceError*>(&e)) return "ConvergenceError";
  if (dynamic_cast<const PoleError*>(&e)) return "PoleError";
  if (dynamic_cast<const DomainError*>(&e)) return "DomainError";
  return "Error";
}

bool rank_one(const RootSystem& rs) { return rs.dim() == 1; }

void require(bool ok, const std::string& command, const std::string& why) {
  if (!ok) throw ConfigError(command + ": " + why);
}

std::vector<Check> plancherel_table(Context& c) {
  const RootSystem rs = c.cfg.root_system();
  const SpectralDensity density(rs);
  const SphereRule dirs = sphere_rule(rs.dim(), c.cfg.table_directions);
  const int n = c.cfg.table_points;
  const std::size_t nd = dirs.size();
  std::vector<cplx> nu(nd * static_cast<std::size_t>(n));
  for_each_index(c.exec, nu.size(), [&](std::size_t idx) {
    const std::size_t j = idx / static_cast<std::size_t>(n), i = idx % static_cast<std::size_t>(n);
    const double r = c.cfg.table_r_max * static_cast<double>(i) / (n - 1);
    nu[idx] = density(Vec(r * dirs.directions[j]));
  });
  std::ostringstream table, dcsv;
  table << "direction,r,nu_re,nu_im\n";
  for (std::size_t j = 0; j < nd; ++j)
    for (int i = 0; i < n; ++i) {
      const cplx v = nu[j * static_cast<std::size_t>(n) + static_cast<std::size_t>(i)];
      const double r = c.cfg.table_r_max * static_cast<double>(i) / (n - 1);
      table << j << ',' << csv_number(r) << ',' << csv_number(v.real()) << ',' << csv_number(v.imag()) << '\n';
    }
  // nu(-lambda) = conj nu(lambda) on real lambda; nu itself is neither real nor even there
  std::vector<double> conj_defect(nu.size());
  for_each_index(c.exec, nu.size(), [&](std::size_t idx) {
    const std::size_t j = idx / static_cast<std::size_t>(n), i = idx % static_cast<std::size_t>(n);
    const double r = c.cfg.table_r_max * static_cast<double>(i) / (n - 1);
    const cplx m = density(Vec(-r * dirs.directions[j]));
    conj_defect[idx] = nu[idx] == 0.0 ? std::abs(m) : std::abs(m - std::conj(nu[idx])) / std::abs(nu[idx]);
  });
  double conj_max = 0.0;
  for (double v : conj_defect) conj_max = std::max(conj_max, v);
  dcsv << "direction";
  for (int a = 0; a < rs.dim(); ++a) dcsv << ",sigma_" << a + 1;
  dcsv << ",weight\n";
  for (std::size_t j = 0; j < nd; ++j) {
    dcsv << j;
    for (int a = 0; a < rs.dim(); ++a) dcsv << ',' << csv_number(dirs.directions[j][a]);
    dcsv << ',' << csv_number(dirs.weights[j]) << '\n';
  }
  c.artifact("plancherel_table.csv", table.str());
  c.artifact("plancherel_directions.csv", dcsv.str());
  c.artifact("plancherel_table.gp",
             gnuplot_script("Plancherel density along rays", "r", "Re nu",
                            {"for [i=0:" + std::to_string(nd - 1) +
                             "] 'plancherel_table.csv' using ($1==i ? $2 : 1/0):3 with lines title sprintf('direction %d', i)"}));

  std::vector<Check> checks;
  c.body["directions"] = nd;
  c.body["points_per_direction"] = n;
  c.body["conjugate_symmetry_defect"] = conj_max;
  checks.push_back(check_le("conjugate_symmetry", conj_max, 1e-12));

  const double gamma0 = strip_width(density);
  c.body["gamma0"] = number(gamma0);
  Vec sigma = Vec::Ones(rs.dim());
  for (int a = 1; a < rs.dim(); ++a) sigma[a] = 0.3719 * a + 0.2;
  const GrowthProbe g = growth_exponent_probe(density, sigma, std::isfinite(gamma0) ? 0.5 * gamma0 : 0.0, c.cfg.seed);
  c.body["growth"] = {{"large_slope", g.large_slope},
                      {"expected_large", g.expected_large},
                      {"small_slope", g.small_slope},
                      {"expected_small", g.expected_small}};

  if (density.polynomial_applies()) {
    const FormAgreement a = density_form_agreement(density, c.cfg.density_points, c.cfg.seed, 10.0, c.exec);
    c.body["closed_form"] = {{"points", a.points}, {"max_relative", a.max_relative}};
    checks.push_back(check_le("gamma_vs_polynomial", a.max_relative, c.cfg.density_tol));
  }
  return checks;
}

std::vector<Check> plancherel_poles(Context& c) {
  const RootSystem rs = c.cfg.root_system();
  const SpectralDensity density(rs);
  const PoleLedger ledger = pole_ledger(density);
  std::ostringstream csv;
  csv << "root_index,coroot_norm,y,height,numerator_poles,denominator_poles,retained\n";
  Json roots = Json::array();
  std::size_t retained = 0;
  for (const auto& rp : ledger.roots) {
    Json cands = Json::array();
    for (const auto& pc : rp.candidates) {
      cands.push_back({{"y", pc.y},
                       {"numerator_poles", pc.numerator_poles},
                       {"denominator_poles", pc.denominator_poles},
                       {"retained", pc.retained()}});
      retained += pc.retained() ? 1 : 0;
      csv << rp.root_index << ',' << csv_number(rp.coroot_norm) << ',' << csv_number(pc.y) << ','
          << csv_number(pc.y / rp.coroot_norm) << ',' << pc.numerator_poles << ',' << pc.denominator_poles << ','
          << (pc.retained() ? 1 : 0) << '\n';
    }
    roots.push_back({{"root_index", rp.root_index},
                     {"coroot_norm", rp.coroot_norm},
                     {"first_height", number(rp.first_height)},
                     {"candidates", cands}});
  }
  Json& b = c.body;
  b["gamma0"] = number(ledger.gamma0);
  b["sampled_gamma0"] = number(ledger.sampled_gamma0);
  b["minimizing_root"] = ledger.minimizing_root;
  b["max_height"] = ledger.max_height;
  std::vector<double> dir(ledger.probe_direction.data(), ledger.probe_direction.data() + ledger.probe_direction.size());
  b["probe_direction"] = dir;
  b["probe_height"] = number(ledger.probe_height);
  b["residue_ratio"] = number(ledger.residue_ratio);
  b["residue_confirmed"] = ledger.residue_confirmed;
  b["roots"] = roots;
  c.artifact("plancherel_poles.csv", csv.str());
  c.artifact("plancherel_poles.gp",
             gnuplot_script("Pole heights per root", "height y/|coroot|", "root index",
                            {"'plancherel_poles.csv' using ($7==1 ? $4 : 1/0):1 with points pt 7 title 'retained'",
                             "'plancherel_poles.csv' using ($7==0 ? $4 : 1/0):1 with points pt 6 title 'cancelled'"}));

  std::vector<Check> checks;
  if (rs.integer_multiplicities()) {
    checks.push_back(check_le("no_retained_poles", static_cast<double>(retained), 0.0));
  } else {
    checks.push_back(check_ge("residue_confirmed", ledger.residue_confirmed ? 1.0 : 0.0, 1.0));
    checks.push_back(check_ge("sampled_over_symbolic", ledger.sampled_gamma0 / ledger.gamma0, 1.0 - 1e-12));
  }
  return checks;
}

std::vector<Check> kernel_eval(Context& c) {
  const RootSystem rs = c.cfg.root_system();
  require(rank_one(rs), "kernel-eval", "needs a rank-one family");
  const RankOneConfig rc = RankOneConfig::from(rs);
  std::mt19937_64 rng(c.cfg.seed);
  const double B = c.cfg.kernel_lambda_box;
  std::uniform_real_distribution<double> u(-B, B);
  std::vector<cplx> lambdas(static_cast<std::size_t>(c.cfg.kernel_lambdas));
  for (auto& l : lambdas) {
    const double re = u(rng);
    l = cplx(re, u(rng));
  }
  // a few structured rows: the origin and the imaginary axis
  if (!lambdas.empty()) lambdas[0] = 0.0;
  if (lambdas.size() > 1) lambdas[1] = cplx(0.0, 0.5 * B);
  const int m = c.cfg.kernel_points;
  const double X = c.cfg.kernel_x_max;
  std::vector<double> xs(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) xs[static_cast<std::size_t>(j)] = m == 1 ? 0.0 : -X + 2.0 * X * j / (m - 1);
  const KernelTable table = build_kernel_table(rc, lambdas, xs, X, c.exec, c.cfg.kernel_tol);
  const KernelBoundReport bound = verify_kernel_bound(table);

  // even part against the 2F1 Jacobi function; xs is symmetric, so -x sits at m-1-j
  const double k1 = rc.ks[0], k2 = rc.ks.size() > 1 ? rc.ks[1] : 0.0, s = rc.betas[0];
  std::vector<double> jac(lambdas.size(), 0.0);
  for_each_index(c.exec, lambdas.size(), [&](std::size_t i) {
    if (std::abs(lambdas[i]) > B) return;
    for (int j = 0; j < m; ++j) {
      const double x = xs[static_cast<std::size_t>(j)];
      if (x < 0.0) continue;
      const cplx gp = table.at(i, static_cast<std::size_t>(j)), gm = table.at(i, static_cast<std::size_t>(m - 1 - j));
      const cplx phi = jacobi_function(k1, k2, s, lambdas[i], x);
      const double scale = std::max({1.0, std::abs(gp), std::abs(gm)});
      jac[i] = std::max(jac[i], std::abs(0.5 * (gp + gm) - phi) / scale);
    }
  });
  double jac_max = 0.0, err_max = 0.0;
  for (double v : jac) jac_max = std::max(jac_max, v);
  for (std::size_t i = 0; i < table.size(); ++i)
    err_max = std::max(err_max, table.errors[i] / std::max(1.0, std::abs(table.values[i])));

  std::ostringstream kcsv, hcsv;
  write_kernel_csv(table, kcsv);
  hcsv << "margin_low,margin_high,count\n";
  for (std::size_t b = 0; b < bound.histogram.size(); ++b) {
    hcsv << csv_number(bound.histogram_edges[b]) << ',';
    if (b + 1 < bound.histogram_edges.size()) hcsv << csv_number(bound.histogram_edges[b + 1]);
    hcsv << ',' << bound.histogram[b] << '\n';
  }
  c.artifact("kernel_table.csv", kcsv.str());
  c.artifact("kernel_margins.csv", hcsv.str());
  c.artifact("kernel_margins.gp",
             gnuplot_script("Kernel bound margins", "log10(bound/|G|) bin start", "entries",
                            {"'kernel_margins.csv' using 1:3 with boxes"}));
  c.body["entries"] = bound.entries;
  c.body["violations"] = bound.violations;
  c.body["nonunit_origin"] = bound.nonunit_origin;
  c.body["min_margin"] = number(bound.min_margin);
  c.body["max_error_estimate"] = err_max;
  c.body["jacobi_max_relative"] = jac_max;
  c.body["x_max"] = X;
  return {check_le("bound_violations", static_cast<double>(bound.violations), 0.0),
          check_le("origin_not_one", static_cast<double>(bound.nonunit_origin), 0.0),
          check_le("error_estimate", err_max, c.cfg.kernel_tol),
          check_le("jacobi_oracle", jac_max, c.cfg.jacobi_tol)};
}

std::vector<Check> transform_check(Context& c) {
  const RootSystem rs = c.cfg.root_system();
  require(rank_one(rs), "transform-check", "needs a rank-one family");
  const double R = c.cfg.radius;
  const RankOneTransform tr(rs, R);
  const auto suite = bump_suite(R);
  const double cut = c.cfg.cutoff > 0.0 ? c.cfg.cutoff : tr.suggest_cutoff(suite, c.cfg.cutoff_tolerance, 400.0);
  const SpectralGrid grid = SpectralGrid::symmetric(cut, c.cfg.spectral_panel, 16);
  const C0Calibration cal = calibrate_c0(tr, grid, c.exec);
  const std::vector<double> diag_lambdas{0.3, 1.7, 5.0, 12.0, -7.5};
  const std::vector<double> tilde_lambdas{0.5, 3.0, 9.0};
  std::vector<Check> checks;
  checks.push_back(check_le("c0_consistency", cal.relative_spread, 1e-8));
  std::ostringstream csv;
  csv << "function,partner,plancherel_defect,skew_defect,diag_T,diag_L,tilde_defect,roundtrip_error\n";
  double pl = 0, sk = 0, dT = 0, dL = 0, td = 0, rt = 0;
  const std::size_t n = suite.size();
  for (std::size_t i = 0; i < n; ++i) {
    const PlancherelDefect p = plancherel_check(tr, suite[i], suite[(i + 1) % n], grid, cal.c0, c.exec);
    const double s = skew_adjointness_defect(tr, suite[i], suite[(i + 2) % n]);
    const DiagonalizationDefect d = diagonalization_check(tr, suite[i], diag_lambdas, c.exec);
    const double t = tilde_consistency_defect(tr, suite[i], tilde_lambdas, c.exec);
    const double r = roundtrip_error(tr, suite[i], grid, cal.c0, c.exec);
    csv << suite[i].name() << ',' << suite[(i + 1) % n].name() << ',' << csv_number(p.defect) << ','
        << csv_number(s) << ',' << csv_number(d.T) << ',' << csv_number(d.L) << ',' << csv_number(t) << ','
        << csv_number(r) << '\n';
    pl = std::max(pl, p.defect), sk = std::max(sk, s), dT = std::max(dT, d.T), dL = std::max(dL, d.L);
    td = std::max(td, t), rt = std::max(rt, r);
  }
  const PaleyWienerReport pw = paley_wiener_check(tr, suite[0], 4, cut, {0.0, 0.5, 1.0}, c.exec);
  checks.push_back(check_le("plancherel", pl, c.cfg.plancherel_tol));
  checks.push_back(check_le("skew_adjointness", sk, c.cfg.skew_tol));
  checks.push_back(check_le("diagonalization_T", dT, c.cfg.diagonalization_tol));
  checks.push_back(check_le("diagonalization_L", dL, c.cfg.diagonalization_tol));
  checks.push_back(check_le("tilde_consistency", td, c.cfg.plancherel_tol));
  checks.push_back(check_ge("paley_wiener_bounded", pw.bounded ? 1.0 : 0.0, 1.0));
  c.body["cutoff"] = cut;
  c.body["c0"] = cal.c0;
  c.body["c0_first"] = cal.first;
  c.body["c0_second"] = cal.second;
  c.body["max_plancherel_defect"] = pl;
  c.body["max_skew_defect"] = sk;
  c.body["max_diag_T"] = dT;
  c.body["max_diag_L"] = dL;
  c.body["max_tilde_defect"] = td;
  c.body["max_roundtrip_error"] = rt;
  c.body["paley_wiener"] = {{"exponent", pw.exponent}, {"sup_inner", pw.sup_inner}, {"sup_tail", pw.sup_tail}};

  std::ostringstream spec;
  write_csv(tr.forward(suite[0], grid, c.exec), spec);
  c.artifact("transform_check.csv", csv.str());
  c.artifact("transform_f0.csv", spec.str());
  c.artifact("transform_f0.gp", gnuplot_script("Transform of the first test function", "lambda", "|F f|",
                                               {"'transform_f0.csv' using 1:(sqrt($2**2 + $3**2)) with lines"},
                                               false, true));
  return checks;
}

Pipeline pipeline_for(const ExperimentConfig& cfg, Exec exec) {
  return build_pipeline(cfg.root_system(), cfg.pipeline(), exec);
}

void add_trace(Context& c, const ExperimentReport& r, const std::string& stem,
               const std::vector<ClassicalEnergies>& classical = {}) {
  if (!r.trace) return;
  c.artifact(stem + ".csv", trace_csv(*r.trace, classical));
  std::vector<std::string> plots{"'" + stem + ".csv' using 1:2 with linespoints", "'" + stem + ".csv' using 1:3 with linespoints",
                                 "'" + stem + ".csv' using 1:4 with lines"};
  if (!classical.empty()) {
    plots.push_back("'" + stem + ".csv' using 1:9 with points pt 6");
    plots.push_back("'" + stem + ".csv' using 1:10 with points pt 4");
  }
  c.artifact(stem + ".gp", gnuplot_script("Energies", "t", "energy", plots));
}

std::vector<Check> wave_sim(Context& c) {
  const RootSystem rs = c.cfg.root_system();
  const Pipeline p = pipeline_for(c.cfg, c.exec);
  const auto times = c.cfg.times.times();
  const ExperimentReport cons = conservation_experiment(rs, p, times, c.cfg.conservation_tol, c.exec);
  c.add(cons);
  std::vector<ClassicalEnergies> classical;
  if (rs.zero_multiplicities() && p.transform) {
    ExperimentReport cl = classical_oracle_experiment(rs, p, times, c.cfg.equipartition_tol, c.exec);
    classical = cl.classical;
    c.add(cl);
  }
  add_trace(c, cons, "energy_trace", classical);
  if (!c.cfg.propagation_times.empty() && p.transform) {
    const ExperimentReport fp =
        finite_propagation_check(rs, p, c.cfg.propagation_times, c.cfg.propagation_dx, c.cfg.propagation_tol, c.exec);
    c.add(fp);
    std::vector<std::string> plots;
    for (std::size_t i = 0; i < fp.profiles.size(); ++i) {
      std::ostringstream os;
      write_csv(fp.profiles[i].second, os);
      const std::string name = "solution_" + std::to_string(i) + ".csv";
      c.artifact(name, os.str());
      plots.push_back("'" + name + "' using 1:2 with lines title 't = " + csv_number(fp.profiles[i].first) + "'");
    }
    c.artifact("solution.gp", gnuplot_script("Reconstructed solution", "x", "Re u", plots));
  }
  return {};
}

std::vector<Check> equipartition(Context& c) {
  const RootSystem rs = c.cfg.root_system();
  require(rs.dim() % 2 == 1 && rs.integer_multiplicities(), "equipartition",
          "strict equipartition needs odd rank and integer multiplicities");
  const Pipeline p = pipeline_for(c.cfg, c.exec);
  const ExperimentReport r = strict_equipartition_experiment(rs, p, c.cfg.times.times(), c.cfg.equipartition_tol,
                                                             c.cfg.equipartition_margin, c.exec);
  c.add(r);
  c.body["threshold"] = r.metric("threshold");
  add_trace(c, r, "equipartition_trace");
  c.artifact("equipartition_ratio.gp",
             gnuplot_script("|P - K| / E", "t", "|P-K|/E",
                            {"'equipartition_trace.csv' using 1:(abs($6) > 0 ? abs($6) : 1e-300) with linespoints"},
                            false, true));
  return {};
}

std::vector<Check> decay_fit(Context& c) {
  const RootSystem rs = c.cfg.root_system();
  const bool even = rs.dim() % 2 == 0;
  require(even || !rs.integer_multiplicities(), "decay-fit",
          "odd rank with integer multiplicities has strict equipartition; use equipartition");
  const Pipeline p = pipeline_for(c.cfg, c.exec);
  const auto times = c.cfg.times.times();
  const ExperimentReport r =
      even ? polynomial_decay_experiment(rs, p, times, c.cfg.slope_slack, c.exec)
           : exponential_decay_experiment(rs, p, times, c.cfg.rate_factor, c.cfg.min_r_squared, {0.25, 0.5, 0.75, 0.9},
                                          c.exec);
  c.add(r);
  c.body["fit"] = even ? "log-log" : "log-linear";
  add_trace(c, r, "decay_trace");
  if (r.window) {
    c.artifact("fit_window.csv", window_csv(*r.window, even));
    c.artifact("fit_window.gp", gnuplot_script("Decay of |P - K| / E", "t", "|P-K|/E",
                                               {"'fit_window.csv' using 1:2 with points pt 7",
                                                "'fit_window.csv' using 1:3 with lines"},
                                               even, true));
  }
  return {};
}

std::vector<Check> report_all(Context& c);

const std::map<std::string, Body>& bodies() {
  static const std::map<std::string, Body> table{{"plancherel-table", plancherel_table},
                                                 {"plancherel-poles", plancherel_poles},
                                                 {"kernel-eval", kernel_eval},
                                                 {"transform-check", transform_check},
                                                 {"wave-sim", wave_sim},
                                                 {"equipartition", equipartition},
                                                 {"decay-fit", decay_fit},
                                                 {"report-all", report_all}};
  return table;
}

// Subcommands that make sense for this configuration.
std::vector<std::string> applicable(const ExperimentConfig& cfg) {
  const RootSystem rs = cfg.root_system();
  std::vector<std::string> names{"plancherel-table", "plancherel-poles"};
  if (rank_one(rs)) {
    names.push_back("kernel-eval");
    names.push_back("transform-check");
  }
  names.push_back("wave-sim");
  names.push_back(rs.dim() % 2 == 1 && rs.integer_multiplicities() ? "equipartition" : "decay-fit");
  return names;
}

std::vector<Check> report_all(Context& c) {
  std::vector<Check> checks;
  for (const auto& name : applicable(c.cfg)) {
    CommandResult sub = run_command(name, c.cfg, c.exec);
    checks.push_back(check_ge(name, sub.pass ? 1.0 : 0.0, 1.0));
    c.body["commands"].push_back({{"command", name}, {"pass", sub.pass}});
    for (auto& a : sub.artifacts) c.artifact(name + "/" + a.name, std::move(a.content));
    c.artifact(name + "/" + name + ".json", sub.report.dump(2) + "\n");
    for (auto& e : sub.experiments) c.out.experiments.push_back(std::move(e));
  }
  return checks;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"plancherel-table", "plancherel-poles", "kernel-eval", "transform-check",
                                              "wave-sim",         "equipartition",    "decay-fit",   "report-all"};
  return names;
}

CommandResult run_command(const std::string& name, const ExperimentConfig& cfg, Exec exec) {
  const auto it = bodies().find(name);
  if (it == bodies().end()) throw ConfigError("unknown subcommand '" + name + "'");
  validate(cfg);
  const auto t0 = Clock::now();
  CommandResult out;
  out.command = name;
  Json body = Json::object();
  Json failures = Json::array();
  std::vector<Check> checks;
  Context ctx{cfg, exec, out, body};
  try {
    checks = it->second(ctx);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    failures.push_back({{"type", error_type(e)}, {"message", e.what()}});
  }
  bool pass = failures.empty();
  for (const auto& ch : checks) pass = pass && ch.pass;
  for (const auto& r : out.experiments) pass = pass && r.pass();
  if (checks.empty() && out.experiments.empty()) pass = false;

  Json report;
  report["version"] = kVersion;
  report["command"] = name;
  report["pass"] = pass;
  report["config"] = to_json(cfg);
  Json jc = Json::array();
  for (const auto& ch : checks) jc.push_back(to_json(ch));
  report["checks"] = jc;
  report["failures"] = failures;
  for (auto& [k, v] : body.items()) report[k] = v;
  out.report = std::move(report);
  out.pass = pass;
  out.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return out;
}

}  // namespace cwl
