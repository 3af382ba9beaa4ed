#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cwl/commands.hpp"
#include "cwl/config.hpp"
#include "cwl/execution.hpp"

namespace {

// exit codes: 0 all checks pass, 1 some check failed, 2 bad config or usage
constexpr int kFail = 1;
constexpr int kBadConfig = 2;

void summarize(const cwl::CommandResult& r, const std::string& dir) {
  std::cout << r.command << ": " << (r.pass ? "pass" : "FAIL") << "  (" << dir << "/" << r.command << ".json)\n";
  for (const auto& e : r.experiments)
    for (const auto& c : e.checks)
      std::cout << "  [" << (c.pass ? "ok" : "FAIL") << "] " << e.experiment << "." << c.name << " = " << c.value << ' '
                << c.relation << ' ' << c.threshold << '\n';
  for (const auto& c : r.report["checks"])
    std::cout << "  [" << (c["pass"].get<bool>() ? "ok" : "FAIL") << "] " << c["name"].get<std::string>() << " = "
              << c["value"].dump() << ' ' << c["relation"].get<std::string>() << ' ' << c["threshold"].dump()
              << '\n';
  for (const auto& f : r.report["failures"])
    std::cout << "  [FAIL] " << f["type"].get<std::string>() << ": " << f["message"].get<std::string>() << '\n';
  std::cerr << r.command << " took " << r.seconds << " s\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy equipartition experiments for the Dunkl-Cherednik wave equation"};
  app.set_version_flag("--version", std::string(cwl::kVersion));
  app.require_subcommand(1);

  std::string config_path, out_dir;
  int threads = 0;
  std::optional<std::uint64_t> seed;
  bool print_config = false;
  app.add_option("--config", config_path, "key = value config file")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory (overrides the out key)");
  app.add_option("--threads", threads, "OpenMP threads; 1 runs the serial reference path")->check(CLI::NonNegativeNumber);
  app.add_option("--seed", seed, "seed for jittered and random sample points");
  app.add_flag("--print-config", print_config, "print the resolved config before running");

  const std::map<std::string, std::string> help = {
      {"plancherel-table", "tabulate the spectral density along sphere directions"},
      {"plancherel-poles", "strip width and pole ledger of the density"},
      {"kernel-eval", "kernel table, growth bound and Jacobi oracle (rank one)"},
      {"transform-check", "Plancherel, skew-adjointness and diagonalization checks (rank one)"},
      {"wave-sim", "energy trace and conservation"},
      {"equipartition", "strict equipartition (odd rank, integer k)"},
      {"decay-fit", "decay rate of P - K (exponential or power law)"},
      {"report-all", "every applicable command, one subdirectory each"},
  };
  // global options may follow the subcommand
  for (const auto& name : cwl::command_names()) {
    const auto it = help.find(name);
    app.add_subcommand(name, it == help.end() ? std::string() : it->second)->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kBadConfig;
  }

  cwl::ExperimentConfig cfg;
  try {
    if (!config_path.empty()) cfg = cwl::load_config(config_path);
    cwl::apply_env_overrides(cfg);
    if (!out_dir.empty()) cfg.out = out_dir;
    if (seed) cfg.seed = *seed;
    cwl::validate(cfg);
  } catch (const cwl::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kBadConfig;
  } catch (const cwl::Error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kBadConfig;
  }
  if (print_config) std::cout << cwl::render_config(cfg);

  cwl::Exec exec = cwl::Exec::parallel;
  if (threads == 1) exec = cwl::Exec::serial;
  if (threads > 0) cwl::set_thread_count(threads);

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    const cwl::CommandResult result = cwl::run_command(name, cfg, exec);
    cwl::write_artifacts(result, cfg.out);
    summarize(result, cfg.out);
    return result.pass ? 0 : kFail;
  } catch (const cwl::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kBadConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFail;
  }
}
