#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cwl/errors.hpp"
#include "cwl/experiments.hpp"
#include "cwl/root_system.hpp"

namespace cwl {

inline constexpr const char* kVersion = "cwl 1.0.0";

// Bad config text. line() is 0 for problems not tied to a file line
// (environment overrides, cross-field validation).
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, int line = 0) : Error(what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

// "linear:t0:t1:count" or "geometric:t0:t1:ratio".
struct TimeGrid {
  enum class Kind { linear, geometric };
  Kind kind = Kind::linear;
  double t0 = 0.0, t1 = 8.0;
  double step = 50;  // count for linear, ratio for geometric

  static TimeGrid parse(const std::string& text);
  std::string str() const;
  std::vector<double> times() const;
  double t_max() const;
};

struct ExperimentConfig {
  std::string family = "A1";
  std::vector<double> k = {1.0};
  DataMode mode = DataMode::rank_one_transform;
  double radius = 1.0;
  int profile_order = 12;
  double cutoff = 0.0;  // 0 = chosen from the data
  double cutoff_tolerance = 1e-13;
  int order_a = 16;
  int order_b = 12;
  int sphere_resolution = 24;
  TimeGrid times;

  double conservation_tol = 1e-8;
  double equipartition_tol = 1e-6;
  double equipartition_margin = 0.05;
  double rate_factor = 0.81;
  double min_r_squared = 0.98;
  double slope_slack = 0.5;

  double plancherel_tol = 1e-6;
  double skew_tol = 1e-8;
  double diagonalization_tol = 1e-6;
  double spectral_panel = 0.5;

  int kernel_lambdas = 100;
  int kernel_points = 101;
  double kernel_x_max = 4.0;
  double kernel_lambda_box = 10.0;
  double kernel_tol = 1e-10;
  double jacobi_tol = 1e-8;

  int density_points = 1000;
  double density_tol = 1e-10;
  int table_directions = 8;
  int table_points = 201;
  double table_r_max = 20.0;

  std::vector<double> propagation_times = {};
  double propagation_dx = 0.02;
  double propagation_tol = 1e-6;

  std::string out = "cwl-out";
  std::uint64_t seed = 1;

  RootSystem root_system() const;
  PipelineSpec pipeline() const;
};

// Every key in file order, with its default rendered as in a config file.
std::vector<std::pair<std::string, std::string>> config_entries(const ExperimentConfig& cfg);
const std::vector<std::string>& config_keys();

// One key = value assignment; ConfigError on unknown keys or bad values.
void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value, int line = 0);

// Line-oriented key = value text, '#' starts a comment. Starts from `base`.
ExperimentConfig parse_config(std::istream& in, ExperimentConfig base = {});
ExperimentConfig load_config(const std::string& path, ExperimentConfig base = {});

// CWL_<KEY> overrides (key upper-cased). `lookup` defaults to getenv.
void apply_env_overrides(ExperimentConfig& cfg,
                         const std::function<std::optional<std::string>(const std::string&)>& lookup = {});

// Cross-field checks: positive tolerances, multiplicity count, mode vs rank.
void validate(const ExperimentConfig& cfg);

std::string render_config(const ExperimentConfig& cfg);

}  // namespace cwl
