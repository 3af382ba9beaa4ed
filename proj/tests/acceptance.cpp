// One line per acceptance criterion; exit status 1 if any fails.

#include <omp.h>

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "cwl/commands.hpp"
#include "cwl/config.hpp"
#include "cwl/plancherel.hpp"

using namespace cwl;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

ExperimentConfig config(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

const ExperimentReport* experiment(const CommandResult& r, const std::string& name) {
  for (const auto& e : r.experiments)
    if (e.experiment == name) return &e;
  return nullptr;
}

double metric(const CommandResult& r, const std::string& exp, const std::string& name) {
  const ExperimentReport* e = experiment(r, exp);
  if (!e) return kNaN;
  for (const auto& m : e->metrics)
    if (m.name == name) return m.value;
  return kNaN;
}

// Value of a command-level check, NaN when absent.
double check(const CommandResult& r, const std::string& name) {
  for (const auto& c : r.report["checks"])
    if (c["name"] == name && c["value"].is_number()) return c["value"].get<double>();
  return kNaN;
}

std::string failures(const CommandResult& r) {
  std::string s;
  for (const auto& f : r.report["failures"]) s += " [" + f["type"].get<std::string>() + ": " + f["message"].get<std::string>() + "]";
  return s;
}

// NaN compares false, so a missing value never passes
bool le(double v, double t) { return v <= t; }

struct Line {
  int id;
  std::string title;
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    detail += (detail.empty() ? "" : "; ") + what + (ok ? "" : " FAILED");
  }
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string kname(const std::vector<double>& k) {
  std::string s;
  for (std::size_t i = 0; i < k.size(); ++i) s += (i ? "," : "") + num(k[i]);
  return s;
}

CommandResult run(const std::string& cmd, const ExperimentConfig& cfg) {
  std::fprintf(stderr, "  running %s %s k=%s\n", cmd.c_str(), cfg.family.c_str(), kname(cfg.k).c_str());
  return run_command(cmd, cfg, Exec::parallel);
}

}  // namespace

int main() {
  std::fprintf(stderr, "%s acceptance, %d OpenMP threads\n", kVersion, omp_get_max_threads());
  std::vector<Line> lines;

  // 1 conservation, keeping the k = 0 run for 9
  Line c1{1, "energy conservation, A1 rank-one, k in {0, 1/2, 1, 3/2}"};
  CommandResult k0;
  for (const char* k : {"0", "1/2", "1", "3/2"}) {
    const CommandResult r = run("wave-sim", config(std::string("family = A1\nk = ") + k + "\ntimes = linear:0:8:50\n"));
    const double drift = metric(r, "conservation", "max_drift");
    c1.require(r.pass && le(drift, 1e-8) && r.seconds <= 120.0,
               std::string("k=") + k + " drift " + num(drift) + " in " + num(r.seconds) + " s" + failures(r));
    if (std::string(k) == "0") k0 = r;
  }
  lines.push_back(c1);

  // 2 strict equipartition
  Line c2{2, "strict equipartition, A1 k in {1, 2}, R = 1"};
  double seconds2 = 0.0;
  for (const char* k : {"1", "2"}) {
    const CommandResult r = run("equipartition", config(std::string("family = A1\nk = ") + k + "\nradius = 1\n"));
    seconds2 += r.seconds;
    const double after = metric(r, "strict_equipartition", "max_ratio_beyond_threshold");
    const double before = metric(r, "strict_equipartition", "max_ratio_below_R");
    const double thr = metric(r, "strict_equipartition", "threshold");
    c2.require(r.pass && le(after, 1e-6) && before > 1e-5 && std::abs(thr - 1.05) < 1e-12,
               std::string("k=") + k + " beyond 1.05: " + num(after) + ", below 1: " + num(before) + failures(r));
  }
  c2.require(seconds2 <= 300.0, "total " + num(seconds2) + " s");
  lines.push_back(c2);

  // 3 exponential decay
  Line c3{3, "exponential decay rate, A1 k = 1/2, t in [2, 12]"};
  {
    const ExperimentConfig cfg = config("family = A1\nk = 1/2\ntimes = linear:2:12:21\n");
    const double gamma0 = strip_width(SpectralDensity(cfg.root_system()));
    const CommandResult r = run("decay-fit", cfg);
    const double rate = metric(r, "exponential_decay", "rate");
    const double r2 = metric(r, "exponential_decay", "r_squared");
    c3.require(r.pass && rate >= 2.0 * 0.81 * gamma0 && r2 >= 0.98,
               "rate " + num(rate) + " vs 2*0.81*gamma0 = " + num(2.0 * 0.81 * gamma0) + ", R^2 " + num(r2) + failures(r));
  }
  lines.push_back(c3);

  // 4 polynomial decay
  Line c4{4, "polynomial decay slopes, model profiles on A2 and B2"};
  {
    double seconds = 0.0;
    const std::pair<const char*, double> cases[] = {{"family = A2\nk = 1/2\n", -4.5}, {"family = B2\nk = 1/2, 1/2\n", -5.5}};
    for (const auto& [text, limit] : cases) {
      const ExperimentConfig cfg =
          config(std::string(text) + "mode = model-profile\nradius = 3\ntimes = geometric:1:60:1.1\n");
      const CommandResult r = run("decay-fit", cfg);
      seconds += r.seconds;
      const double slope = metric(r, "polynomial_decay", "slope");
      const double remark = metric(r, "polynomial_decay", "exponent_remark");
      c4.require(r.pass && le(slope, limit), cfg.family + " slope " + num(slope) + " <= " + num(limit) +
                                                 " (-d-2D = " + num(remark) + ")" + failures(r));
    }
    c4.require(seconds <= 600.0, "total " + num(seconds) + " s");
  }

  // 5 and 7 share the transform-check runs
  Line c5{5, "Plancherel identity, A1 k in {1/2, 1}, 5 pairs"};
  Line c7{7, "skew-adjointness and diagonalization on the bump suite"};
  for (const char* k : {"1/2", "1"}) {
    const CommandResult r = run("transform-check", config(std::string("family = A1\nk = ") + k + "\n"));
    const double pl = check(r, "plancherel");
    c5.require(le(pl, 1e-6) && r.report["failures"].empty(), std::string("k=") + k + " defect " + num(pl) + failures(r));
    const double skew = check(r, "skew_adjointness");
    const double dt = check(r, "diagonalization_T"), dl = check(r, "diagonalization_L");
    c7.require(le(skew, 1e-8) && le(dt, 1e-6) && le(dl, 1e-6), std::string("k=") + k + " skew " + num(skew) +
                                                                 ", diag T " + num(dt) + ", diag L " + num(dl));
  }

  // 6 kernel table
  Line c6{6, "kernel bound on a 10^4-entry table and Jacobi oracle"};
  for (const char* text : {"family = A1\nk = 1/2\n", "family = BC1\nk = 1/2, 1\n"}) {
    const ExperimentConfig cfg = config(std::string(text) + "kernel_lambdas = 100\nkernel_points = 101\n");
    const CommandResult r = run("kernel-eval", cfg);
    const double viol = check(r, "bound_violations"), jac = check(r, "jacobi_oracle");
    const int entries = cfg.kernel_lambdas * cfg.kernel_points;
    c6.require(r.pass && viol == 0.0 && le(jac, 1e-8) && entries >= 10000,
               cfg.family + " " + std::to_string(entries) + " entries, violations " + num(viol) + ", Jacobi " + num(jac) +
                   failures(r));
  }

  // 8 density closed form
  Line c8{8, "Gamma form vs integer polynomial at 10^3 points"};
  {
    const char* cases[] = {"family = A1\nk = 1\n",          "family = A1\nk = 2\n",
                           "family = BC1\nk = 1, 1\n",      "family = BC1\nk = 1, 2\n",
                           "family = BC1\nk = 2, 1\n",      "family = BC1\nk = 2, 2\n",
                           "family = A2\nk = 1\n",          "family = A2\nk = 2\n",
                           "family = B2\nk = 1, 1\n",       "family = B2\nk = 1, 2\n",
                           "family = B2\nk = 2, 1\n",       "family = B2\nk = 2, 2\n"};
    double worst = 0.0;
    int count = 0;
    for (const char* text : cases) {
      const ExperimentConfig cfg = config(std::string(text) + "mode = model-profile\ndensity_points = 1000\n");
      const CommandResult r = run("plancherel-table", cfg);
      const double v = check(r, "gamma_vs_polynomial");
      if (!le(v, 1e-10) || !r.pass) c8.require(false, cfg.family + " k=" + kname(cfg.k) + " " + num(v) + failures(r));
      worst = std::isnan(v) ? v : std::max(worst, v);
      ++count;
    }
    c8.require(le(worst, 1e-10), std::to_string(count) + " configurations, worst " + num(worst));
  }

  // 9 classical oracle from the k = 0 run
  Line c9{9, "k = 0 pipeline against d'Alembert"};
  {
    const double dk = metric(k0, "classical_oracle", "max_K_error");
    const double dp = metric(k0, "classical_oracle", "max_P_error");
    const double eq = metric(k0, "classical_oracle", "max_ratio_beyond_R");
    const ExperimentReport* e = experiment(k0, "classical_oracle");
    c9.require(e && e->pass() && le(dk, 1e-6) && le(dp, 1e-6) && le(eq, 1e-6),
               "K error " + num(dk) + ", P error " + num(dp) + ", |P-K|/E beyond R " + num(eq));
  }

  // 10 finite propagation
  Line c10{10, "finite propagation, A1 k = 1, t in {1, 2, 4}"};
  {
    const CommandResult r = run("wave-sim", config("family = A1\nk = 1\npropagation_times = 1, 2, 4\n"));
    const double tail = metric(r, "finite_propagation", "max_tail_ratio");
    c10.require(r.pass && le(tail, 1e-6), "worst tail ratio " + num(tail) + failures(r));
  }

  lines.push_back(c4);
  lines.push_back(c5);
  lines.push_back(c6);
  lines.push_back(c7);
  lines.push_back(c8);
  lines.push_back(c9);
  lines.push_back(c10);

  bool all = true;
  for (const auto& l : lines) {
    std::printf("criterion %2d %s  %s: %s\n", l.id, l.pass ? "PASS" : "FAIL", l.title.c_str(), l.detail.c_str());
    all = all && l.pass;
  }
  std::printf("%s\n", all ? "all criteria pass" : "some criteria FAIL");
  return all ? 0 : 1;
}
