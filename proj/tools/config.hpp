#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hitspec/discretize.hpp"
#include "hitspec/error.hpp"
#include "hitspec/model.hpp"
#include "hitspec/spectral.hpp"

namespace hitspec::cli {

// Invalid configuration: unknown key, malformed value, failed precondition.
class ConfigError : public InputError {
 public:
  using InputError::InputError;
};

struct CustomModelConfig {
  std::string name;
  std::string drift;
  std::string diffusion;
  double domain_lower_x = -kInfinity;
  double domain_upper_x = kInfinity;
  double reference_x = 0.0;
};

struct GridConfig {
  double interval_lower_x = 0.0;
  double interval_upper_x = 1.0;
  std::size_t unknowns = 2000;
  Boundary lower_boundary = Boundary::Absorbing;
  Boundary upper_boundary = Boundary::Absorbing;
};

struct RateConfig {
  std::string kind = "constant";  // constant | polynomial | exponential
  double exponent_l = 1.0;
  double exponential_rate_per_time = 1.0;
  std::optional<double> expected;

  RateFunction make() const;
};

struct SpectrumConfig {
  std::size_t eigenvalues_reported = 5;
  std::vector<double> expected_eigenvalues;
  double expected_relative_tolerance = 1e-3;
};

struct MomentsConfig {
  std::size_t order = 2;
  std::optional<double> evaluation_x;
  std::vector<double> expected_at_evaluation;
  double expected_relative_tolerance = 1e-6;
};

struct NashConfig {
  std::vector<double> killed_order_l_values{0.5, 1.0, 2.0};
  std::size_t killed_functions = 1000;
  double whole_order_l = 2.0;
  std::size_t whole_functions = 100;
  double whole_truncation_x = 50.0;
  std::size_t whole_unknowns = 1001;
  std::vector<double> whole_split_x{0.0};
  bool scan_split_points = false;
};

struct DecayConfig {
  double order_l = 2.0;
  std::vector<double> truncations_x{100.0, 200.0};
  double spacing_x = 0.2;
  std::string test_function = "tanh(x)";
  double window_start_time = 1.0;
  double window_end_time = 30.0;
  std::size_t points = 25;
  double slope_slack = 0.5;
  double slope_change_limit = 0.2;
  bool gap_guard = true;
};

struct ThresholdConfig {
  std::vector<double> order_l_values{2.0, 4.0};
  std::vector<double> truncations_x{50.0, 100.0, 200.0};
  double inner_radius_x = 1.0;
  double spacing_x = 0.25;
  // One entry per l: convergent | divergent | inconclusive | any.
  std::vector<std::string> expected;
};

struct MonteCarloConfig {
  double step_time = 1e-4;
  std::size_t paths = 100000;
  std::string region = "interval";  // interval | exterior
  double region_lower_x = 0.0;
  double region_upper_x = 1.0;
  double exterior_radius_x = 1.0;
  std::string start = "fixed";  // fixed | stationary
  double start_x = 0.5;
  std::vector<std::size_t> orders{1, 2};
  bool bridge_correction = true;
  double max_time = 1000.0;
  double truncation_x = kInfinity;
  double noise_scale = 1.0;
  std::size_t sampler_cells = 20000;
  // recursion | none; `expected_moments` overrides when non-empty.
  std::string oracle = "recursion";
  std::size_t oracle_unknowns = 2000;
  std::vector<double> expected_moments;
  double standard_errors = 4.0;
  double censoring_limit = 1e-3;
};

struct DeviationConfig {
  double order_l = 1.0;
  std::vector<double> lambdas{0.1, 0.3};
  std::vector<double> horizon_times{10.0, 30.0, 100.0};
  double step_time = 0.01;
  std::size_t paths = 10000;
  double truncation_x = 100.0;
  double exterior_radius_x = 1.0;
  bool bridge_correction = true;
  double confidence = 0.95;
  double slope_slack = 0.5;
  std::size_t min_trials = 100;
  std::size_t sampler_cells = 20000;
};

struct ToleranceConfig {
  double solve_vs_spectral = 1e-6;
  double quadrature_vs_spectral = 1e-4;
  double nash_killed_slack = 1e-12;
  double nash_whole_slack = 1e-10;
  double single_mode_equality = 1e-10;
  double homogeneity = 1e-12;
  double reflected_bottom = 1e-10;
  double constant_vector = 1e-8;
  double orthonormality = 1e-10;
  double parseval = 1e-10;
};

struct RunConfig {
  std::string model = "BM2";
  std::vector<std::string> checks;
  std::uint64_t seed = 1;
  std::size_t workers = 1;
  std::string output_dir = "hitspec-out";
  std::optional<CustomModelConfig> custom_model;
  GridConfig grid;
  RateConfig rate;
  std::string test_function = "1";
  SpectrumConfig spectrum;
  MomentsConfig moments;
  NashConfig nash;
  DecayConfig decay;
  ThresholdConfig threshold;
  MonteCarloConfig montecarlo;
  DeviationConfig deviation;
  ToleranceConfig tolerances;
};

const std::vector<std::string>& known_checks();

// Parses and validates; throws ConfigError naming the offending key.
RunConfig parse_config(std::istream& in, const std::string& source = "<config>");
RunConfig load_config(const std::string& path);
// Checks every precondition that does not need a computation.
void validate(const RunConfig& config);

// Effective configuration in the same INI format, doubles at full precision.
std::string render_config(const RunConfig& config);

DiffusionModel resolve_model(const RunConfig& config);

}  // namespace hitspec::cli
