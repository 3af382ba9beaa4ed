#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "cwl/config.hpp"
#include "cwl/experiments.hpp"

namespace cwl {

// Insertion-ordered so the emitted text is a pure function of the inputs.
using Json = nlohmann::ordered_json;

// Timings are left out of every JSON document; they would break byte
// identity between runs.
Json to_json(const Check& c);
Json to_json(const ExperimentReport& r);
Json to_json(const ExperimentConfig& cfg);

// A file produced by a command, relative to the output directory.
struct Artifact {
  std::string name;
  std::string content;
};

struct CommandResult {
  std::string command;
  Json report;  // written as <command>.json
  bool pass = false;
  std::vector<Artifact> artifacts;
  std::vector<ExperimentReport> experiments;
  double seconds = 0.0;
};

// t, K, P, E, P-K, (P-K)/E, radial and Filon P-K, plus d'Alembert K and P
// when `classical` is parallel to the trace.
std::string trace_csv(const EnergyTrace& trace, const std::vector<ClassicalEnergies>& classical = {});
std::string window_csv(const FitWindow& w, bool log_time);

// Gnuplot script reading `csv`; `plots` are complete plot clauses.
std::string gnuplot_script(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                           const std::vector<std::string>& plots, bool logx = false, bool logy = false);

// Writes <dir>/<command>.json and every artifact. Files are opened in binary
// mode so the bytes match across platforms.
void write_artifacts(const CommandResult& result, const std::string& dir);

// 17 significant digits.
std::string csv_number(double v);

}  // namespace cwl
