#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "hitspec/discretize.hpp"
#include "hitspec/moments.hpp"
#include "hitspec/report.hpp"
#include "hitspec/spectral.hpp"

namespace hitspec {

// Samples f at the unknowns of a generator.
std::vector<double> sample_on_grid(const GeneratorMatrix& gen, const RealFunction& f);

// Deterministic family of bounded grid functions with values in [-1, 1]:
// cycles through i.i.d. node values, random trigonometric sums, random
// step functions and random smooth sigmoids.
std::vector<std::vector<double>> random_bounded_functions(std::span<const double> nodes,
                                                          std::size_t count, std::uint64_t seed);

// int_0^inf r(t) sum_k exp(-xi_k t) w_k dt: composite Simpson in u = ln t on
// [u_min, u_max] plus closed-form per-atom tails outside.
struct TimeQuadratureOptions {
  double u_min = -30.0;
  double u_max = 30.0;
  std::size_t panels = 4000;
};
double time_integral(const SpectralMeasure& measure, const RateFunction& rate,
                     const TimeQuadratureOptions& options = {});

struct EqualityChainTolerances {
  double solve_vs_spectral = 1e-6;
  double quadrature_vs_spectral = 1e-4;
};

struct EqualityChainInputs {
  DiffusionModel model;
  Interval interval;
  std::size_t unknowns = 2000;
  RateFunction rate = RateFunction::constant();
  RealFunction f = [](double) { return 1.0; };
  EqualityChainTolerances tolerances;
  TimeQuadratureOptions quadrature;
  // Optional closed-form value the routes are also compared with.
  std::optional<double> expected;
};

// Routes: (i) linear-solve pairing, (ii) spectral sum, (iii) time quadrature.
VerificationReport verify_equality_chain(const EqualityChainInputs& inputs);

// Exponents of the order-l Nash inequality: p = (l+2)/(l+1), q = l+2, kept
// as 1/p = (l+1)/(l+2) and 1/q = 1/(l+2) over the common denominator l+2.
struct NashExponents {
  double l = 1.0;
  double inv_p_numerator = 2.0;
  double inv_q_numerator = 1.0;
  double denominator = 3.0;

  static NashExponents for_order(double l);
  double p() const { return denominator / inv_p_numerator; }
  double q() const { return denominator / inv_q_numerator; }
  double inv_p() const { return inv_p_numerator / denominator; }
  double inv_q() const { return inv_q_numerator / denominator; }
  // 1/p + 1/q = 1 up to the rounding of l + 1 and l + 2.
  bool conjugate() const {
    return std::fabs(inv_p_numerator + inv_q_numerator - denominator) <=
           4.0 * std::numeric_limits<double>::epsilon() * denominator;
  }
};

struct NashWitness {
  NashExponents exponents;
  double norm_sq = 0.0;  // lhs
  double energy = 0.0;   // E(f, f) = sum xi_k w_k
  double phi = 0.0;      // sum xi_k^{-(l+1)} w_k
  double rhs = 0.0;      // E^{1/p} Phi^{1/q}
  double slack = 0.0;    // relative_slack(lhs, rhs)
};

NashWitness nash_witness(const SpectralMeasure& measure, double l);

struct NashKilledOptions {
  double slack_tolerance = 1e-12;
  double equality_tolerance = 1e-10;
  double homogeneity_tolerance = 1e-12;
  double homogeneity_factor = 2.0;
  // Contractivity times, in units of 1/xi_1.
  std::vector<double> contraction_times = log_spaced(1e-3, 1e1, 20);
};

// Killed Nash inequality ||f||^2 <= E^{1/p} Phi^{1/q} for every f, single-mode
// equality for e_1, homogeneity of Phi and Phi(P_t f) <= Phi(f).
VerificationReport verify_nash_killed(const SpectralDecomposition& dec, double l,
                                      const std::vector<std::vector<double>>& fs,
                                      const NashKilledOptions& options = {});

struct NashWholeOptions {
  double slack_tolerance = 1e-10;
  double homogeneity_tolerance = 1e-12;
  // Also evaluate Phi_a at the mu-deciles and report the smallest value.
  bool scan_split_points = false;
};

// The reflected process on [-L, L] with the split point snapped to the
// nearest grid node. Functions F are given on the reflected grid.
struct WholeLineSetup {
  GeneratorMatrix generator;
  std::size_t split_node = 0;
  double split_point = 0.0;
};
WholeLineSetup make_whole_line_setup(const DiffusionModel& model, double truncation,
                                     std::size_t unknowns, double split_point);

VerificationReport verify_nash_whole(const WholeLineSetup& setup, double l,
                                     const std::vector<std::vector<double>>& fs,
                                     const NashWholeOptions& options = {});

struct DecayOptions {
  double t_min = 1.0;
  double t_max = 30.0;
  std::size_t points = 25;
  double slope_slack = 0.5;
  // Require t_max <= gap_fraction / xi_2 so the window sits below the
  // truncation gap time scale.
  bool gap_guard = true;
  double gap_fraction = 0.5;
};

enum class DecayRegime { Polynomial, Exponential };
const char* to_string(DecayRegime regime);

struct DecayFit {
  double slope = 0.0;              // d log Var / d log t
  double rate = 0.0;               // -d log Var / dt
  double polynomial_residual = 0.0;
  double exponential_residual = 0.0;
  DecayRegime regime = DecayRegime::Polynomial;
  std::vector<double> times;
  std::vector<double> variances;
};

// Var_mu(P_t f) = sum_{k>=2} exp(-2 xi_k t) w_k / m(total) on the window.
DecayFit fit_decay(const SpectralDecomposition& dec, std::span<const double> f,
                   const DecayOptions& options = {});

VerificationReport verify_decay(const SpectralDecomposition& dec, std::span<const double> f,
                                double l, const DecayOptions& options = {});

enum class ThresholdClass { Convergent, Divergent, Inconclusive };
const char* to_string(ThresholdClass c);

struct ThresholdOptions {
  double inner_radius = 1.0;
  double spacing = 0.25;
  double convergent_change = 0.05;
  double divergent_growth = 0.5;
};

ThresholdClass classify_ladder(std::span<const double> values, const ThresholdOptions& options);

// Sum xi^{-(l+1)} w for f = 1 on the exterior of [-inner, inner] reflected
// at +-L, for each l and each L of the ladder. Classification is reported
// as a quantity; `expected` optionally turns it into assertions.
VerificationReport threshold_study(const DiffusionModel& model, const std::vector<double>& ls,
                                   const std::vector<double>& ladder,
                                   const ThresholdOptions& options = {},
                                   const std::vector<std::optional<ThresholdClass>>& expected = {});

}  // namespace hitspec
