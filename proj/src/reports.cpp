#include "cwl/reports.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace cwl {

namespace {

Json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

bool is_timing(const std::string& name) {
  const std::string suffix = "seconds";
  return name.size() >= suffix.size() && name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
}

}  // namespace

std::string csv_number(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json to_json(const Check& c) {
  Json j;
  j["name"] = c.name;
  j["value"] = number(c.value);
  j["relation"] = c.relation;
  j["threshold"] = number(c.threshold);
  j["pass"] = c.pass;
  return j;
}

Json to_json(const ExperimentReport& r) {
  Json j;
  j["experiment"] = r.experiment;
  j["family"] = r.family;
  j["k"] = r.k;
  j["mode"] = r.mode;
  j["pass"] = r.pass();
  Json metrics = Json::object();
  for (const auto& m : r.metrics)
    if (!is_timing(m.name)) metrics[m.name] = number(m.value);
  j["metrics"] = metrics;
  Json checks = Json::array();
  for (const auto& c : r.checks) checks.push_back(to_json(c));
  j["checks"] = checks;
  if (r.window) {
    Json w;
    w["valid"] = r.window->valid;
    w["points"] = r.window->t.size();
    w["t_first"] = r.window->t.empty() ? Json(nullptr) : number(r.window->t.front());
    w["t_last"] = r.window->t.empty() ? Json(nullptr) : number(r.window->t.back());
    w["slope"] = number(r.window->fit.slope);
    w["intercept"] = number(r.window->fit.intercept);
    w["r_squared"] = number(r.window->fit.r_squared);
    j["fit_window"] = w;
  }
  j["notes"] = r.notes;
  return j;
}

Json to_json(const ExperimentConfig& cfg) {
  Json j = Json::object();
  for (const auto& [k, v] : config_entries(cfg)) j[k] = v;
  return j;
}

std::string trace_csv(const EnergyTrace& tr, const std::vector<ClassicalEnergies>& classical) {
  const bool with_classical = !classical.empty() && classical.size() == tr.t.size();
  std::ostringstream os;
  os << "t,K,P,E,P_minus_K,P_minus_K_over_E,P_minus_K_radial,P_minus_K_filon";
  if (with_classical) os << ",K_dalembert,P_dalembert";
  os << '\n';
  for (std::size_t i = 0; i < tr.t.size(); ++i) {
    os << csv_number(tr.t[i]) << ',' << csv_number(tr.K[i]) << ',' << csv_number(tr.P[i]) << ','
       << csv_number(tr.E[i]) << ',' << csv_number(tr.diff[i]) << ',' << csv_number(tr.diff[i] / tr.E0) << ','
       << csv_number(tr.diff_radial[i]) << ',' << csv_number(tr.diff_filon[i]);
    if (with_classical) os << ',' << csv_number(classical[i].K) << ',' << csv_number(classical[i].P);
    os << '\n';
  }
  return os.str();
}

std::string window_csv(const FitWindow& w, bool log_time) {
  std::ostringstream os;
  os << "t,abs_P_minus_K_over_E,fit\n";
  for (std::size_t i = 0; i < w.t.size(); ++i) {
    const double x = log_time ? std::log(w.t[i]) : w.t[i];
    os << csv_number(w.t[i]) << ',' << csv_number(w.value[i]) << ','
       << csv_number(std::exp(w.fit.intercept + w.fit.slope * x)) << '\n';
  }
  return os.str();
}

std::string gnuplot_script(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                           const std::vector<std::string>& plots, bool logx, bool logy) {
  std::ostringstream os;
  os << "# gnuplot script, run from the output directory\n"
     << "set datafile separator ','\n"
     << "set key autotitle columnhead\n"
     << "set title '" << title << "'\n"
     << "set xlabel '" << xlabel << "'\n"
     << "set ylabel '" << ylabel << "'\n";
  if (logx) os << "set logscale x\n";
  if (logy) os << "set logscale y\n";
  os << "plot ";
  for (std::size_t i = 0; i < plots.size(); ++i) os << (i ? ", \\\n     " : "") << plots[i];
  os << "\npause -1\n";
  return os.str();
}

void write_artifacts(const CommandResult& result, const std::string& dir) {
  const std::filesystem::path root(dir);
  write_file(root / (result.command + ".json"), result.report.dump(2) + "\n");
  for (const auto& a : result.artifacts) write_file(root / a.name, a.content);
}

}  // namespace cwl
