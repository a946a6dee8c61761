#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hitspec/model.hpp"
#include "hitspec/random.hpp"

namespace hitspec {

struct SimulationConfig {
  DiffusionModel model;
  double step_time = 1e-4;
  // Reflection by folding at +-truncation; infinity disables it.
  double truncation = kInfinity;
  std::size_t paths = 1000;
  std::uint64_t seed = 1;
  bool bridge_correction = true;
  // Paths still inside G at this time are censored.
  double max_time = 1e3;
  std::size_t workers = 1;
  // Multiplies sigma; 0 gives the deterministic flow X' = b(X).
  double noise_scale = 1.0;
};

void validate(const SimulationConfig& config);

// The open set G: an interval (lower, upper), or the exterior {|x| > r}.
class Region {
 public:
  static Region interval(double lower, double upper);
  static Region exterior(double radius);

  bool contains(double x) const;
  // Probability that a Brownian bridge from x to y (both in G) with
  // variance rate sigma^2 over dt leaves G in between.
  double bridge_exit_probability(double x, double y, double sigma, double dt) const;
  bool is_exterior() const { return exterior_; }
  double lower() const { return lower_; }
  double upper() const { return upper_; }

 private:
  Region(double lower, double upper, bool exterior)
      : lower_(lower), upper_(upper), exterior_(exterior) {}
  double lower_;
  double upper_;
  bool exterior_;
};

// One Euler-Maruyama step with folding reflection at +-truncation.
// Returns nullopt when a coefficient is not finite.
std::optional<double> euler_step(const SimulationConfig& config, double x, RandomStream& rng);

struct PathObservables {
  double final_position = 0.0;
  double occupation_time = 0.0;  // time spent in `occupied` (trapezoid)
  double max_abs_position = 0.0;
  double max_increment = 0.0;
  std::size_t steps = 0;
  bool error = false;
};

// Streams one path from x0 over [0, horizon] without storing it.
PathObservables simulate_path(const SimulationConfig& config, double x0, double horizon,
                              std::uint64_t path_index,
                              const std::optional<Region>& occupied = std::nullopt);

// Inverse-CDF sampling of mu = m'/m(I) on a uniform grid of cells, with a
// piecewise-linear CDF; optionally restricted to a region.
class StationarySampler {
 public:
  StationarySampler(const DiffusionModel& model, Interval interval, std::size_t cells,
                    const std::optional<Region>& restrict_to = std::nullopt);

  double sample(double u) const;
  double mass() const { return mass_; }
  // mu-probability of the region within the interval.
  double probability(const Region& region) const;

 private:
  Interval interval_;
  std::vector<double> edges_;
  std::vector<double> cdf_;
  std::vector<double> cell_mass_;
  double mass_ = 0.0;
};

struct StartLaw {
  std::optional<double> fixed;
  std::optional<StationarySampler> stationary;

  static StartLaw at(double x);
  static StartLaw from(StationarySampler sampler);
  std::string describe() const;
};

struct MomentEstimate {
  std::size_t order = 0;
  double mean = 0.0;
  double standard_error = 0.0;
};

struct HittingSample {
  std::vector<double> taus;  // per path, index order; censored paths hold max_time
  std::vector<std::uint8_t> censored;
  std::size_t errors = 0;
  std::size_t censored_count = 0;
  std::string start;
  std::vector<MomentEstimate> moments;

  double censored_fraction() const;
};

HittingSample sample_hitting_moments(const SimulationConfig& config, const Region& region,
                                     const StartLaw& start, const std::vector<std::size_t>& orders);

struct BinomialInterval {
  double lower = 0.0;
  double upper = 1.0;
};
// Clopper-Pearson interval at the given confidence.
BinomialInterval clopper_pearson(std::size_t successes, std::size_t trials, double confidence);

struct DeviationCell {
  double l = 0.0;
  double lambda = 0.0;
  double horizon = 0.0;
  std::size_t trials = 0;
  std::size_t events = 0;
  double probability = 0.0;
  BinomialInterval ci;
  double bound_unit_constant = 0.0;  // max(lambda^-(l+2), lambda^-2(l+1)) t^-(l+1)
  bool low_power = false;
};

struct SurvivalCell {
  double horizon = 0.0;
  std::size_t trials = 0;
  std::size_t survivors = 0;
  double probability = 0.0;
  BinomialInterval ci;
};

struct DeviationResult {
  std::vector<DeviationCell> cells;
  std::vector<SurvivalCell> survival;
  double mu_v = 0.0;  // mu(G^c)
  std::size_t errors = 0;
  std::size_t paths = 0;
};

struct DeviationOptions {
  double confidence = 0.95;
  std::size_t min_trials = 100;
  std::size_t sampler_cells = 20000;
};

// V = indicator of G^c, start from mu on [-L, L], P(|(1/t) int V - mu(V)| >= 4 lambda)
// and P(tau_G > t) from the same paths.
DeviationResult deviation_experiment(const SimulationConfig& config, const Region& region,
                                     double l, const std::vector<double>& lambdas,
                                     const std::vector<double>& horizons,
                                     const DeviationOptions& options = {});

// max(lambda^{-(l+2)}, lambda^{-2(l+1)}) t^{-(l+1)}.
double deviation_bound(double l, double lambda, double t);

struct SlopeFit {
  double slope = 0.0;
  std::size_t points = 0;
  std::size_t upper_bound_points = 0;  // zero-count cells entered at their CI upper bound
};
// Least-squares slope of log p against log t; zero counts use the CI upper bound.
SlopeFit deviation_slope(const std::vector<DeviationCell>& cells);

}  // namespace hitspec
