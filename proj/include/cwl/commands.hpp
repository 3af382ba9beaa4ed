#pragma once

#include <string>
#include <vector>

#include "cwl/config.hpp"
#include "cwl/execution.hpp"
#include "cwl/reports.hpp"

namespace cwl {

// plancherel-table, plancherel-poles, kernel-eval, transform-check, wave-sim,
// equipartition, decay-fit, report-all.
const std::vector<std::string>& command_names();

// Runs one subcommand. ConfigError when the config does not fit the command
// (unknown name, wrong family or parity). Numerical failures (budget,
// convergence, poles) do not escape: they become entries under "failures"
// in the JSON report and make pass false.
CommandResult run_command(const std::string& name, const ExperimentConfig& cfg, Exec exec = Exec::parallel);

}  // namespace cwl
