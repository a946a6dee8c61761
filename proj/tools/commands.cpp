#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <thread>

#include "hitspec/discretize.hpp"
#include "hitspec/error.hpp"
#include "hitspec/expression.hpp"
#include "hitspec/moments.hpp"
#include "hitspec/montecarlo.hpp"
#include "hitspec/spectral.hpp"
#include "hitspec/verify.hpp"

namespace hitspec::cli {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

RealFunction compile(const std::string& text) {
  const Expression e = Expression::parse(text);
  return [e](double x) { return e(x); };
}

Interval grid_interval(const RunConfig& c) {
  return {c.grid.interval_lower_x, c.grid.interval_upper_x};
}

// Appends a sub-report, suffixing names and prefixing curve rows with `param`.
void absorb(VerificationReport& into, const VerificationReport& part, const std::string& param_name,
            double param) {
  const std::string suffix = "_" + param_name + label(param);
  for (const auto& q : part.quantities) into.add_quantity(q.name + suffix, q.value, q.route);
  for (const auto& a : part.assertions) {
    into.assert_that(a.name + suffix, a.passed, a.lhs, a.rhs, a.tolerance, a.detail);
  }
  for (const auto& n : part.notes) into.notes.push_back(param_name + " = " + label(param) + ": " + n);
  into.inputs["runs"].push_back(part.inputs);
  if (into.tolerances.empty()) into.tolerances = part.tolerances;
  if (!part.curves.columns.empty()) {
    if (into.curves.columns.empty()) {
      into.curves.columns.push_back(param_name);
      into.curves.columns.insert(into.curves.columns.end(), part.curves.columns.begin(),
                                 part.curves.columns.end());
    }
    for (const auto& row : part.curves.rows) {
      std::vector<double> r{param};
      r.insert(r.end(), row.begin(), row.end());
      into.curves.add_row(std::move(r));
    }
  }
}

nlohmann::json model_json(const RunConfig& c) {
  return {{"model", c.model}, {"seed", c.seed}};
}

VerificationReport run_spectrum(const RunConfig& c) {
  const auto start = Clock::now();
  const DiffusionModel model = resolve_model(c);
  const GeneratorMatrix gen = build_generator(model, grid_interval(c), c.grid.unknowns,
                                              c.grid.lower_boundary, c.grid.upper_boundary);
  const SpectralDecomposition dec = eigendecompose(gen);
  const auto& t = c.tolerances;
  VerificationReport rep;
  rep.check = "spectrum";
  rep.inputs = model_json(c);
  rep.inputs["interval_lower_x"] = json_number(c.grid.interval_lower_x);
  rep.inputs["interval_upper_x"] = json_number(c.grid.interval_upper_x);
  rep.inputs["unknowns"] = c.grid.unknowns;
  rep.inputs["lower_boundary"] = to_string(c.grid.lower_boundary);
  rep.inputs["upper_boundary"] = to_string(c.grid.upper_boundary);
  rep.tolerances = {{"orthonormality", t.orthonormality},
                    {"parseval", t.parseval},
                    {"reflected_bottom", t.reflected_bottom},
                    {"constant_vector", t.constant_vector},
                    {"expected_relative", c.spectrum.expected_relative_tolerance}};

  const std::size_t shown = std::min(c.spectrum.eigenvalues_reported, dec.size());
  rep.curves.columns = {"index", "eigenvalue"};
  for (std::size_t k = 0; k < dec.size(); ++k) {
    rep.curves.add_row({static_cast<double>(k + 1), dec.eigenvalue(k)});
    if (k < shown) rep.add_quantity("xi_" + std::to_string(k + 1), dec.eigenvalue(k), "eigensolver");
  }
  for (std::size_t k = 0; k < c.spectrum.expected_eigenvalues.size(); ++k) {
    const double expected = c.spectrum.expected_eigenvalues[k];
    if (k >= dec.size()) throw InputError("more expected eigenvalues than unknowns");
    rep.assert_that("xi_" + std::to_string(k + 1) + "_matches_expected",
                    relatively_close(dec.eigenvalue(k), expected, c.spectrum.expected_relative_tolerance),
                    dec.eigenvalue(k), expected, c.spectrum.expected_relative_tolerance,
                    "relative difference " + label(relative_difference(dec.eigenvalue(k), expected)));
  }

  const std::size_t stride = std::max<std::size_t>(1, dec.size() / 100);
  const double orth = dec.orthonormality_residual(stride);
  rep.add_quantity("orthonormality_residual", orth, "stride " + std::to_string(stride));
  rep.assert_that("orthonormality", orth <= t.orthonormality, orth, t.orthonormality, t.orthonormality);

  const std::vector<double> f = sample_on_grid(gen, compile(c.test_function));
  double coefficient_sum = 0.0;
  for (double a : dec.coefficients(f)) coefficient_sum += a * a;
  const double norm = gen.inner(f, f);
  rep.add_quantity("parseval_coefficients", coefficient_sum, "sum (f, e_k)^2");
  rep.add_quantity("parseval_norm", norm, "(f, f)_m");
  rep.assert_that("parseval", relatively_close(coefficient_sum, norm, t.parseval), coefficient_sum,
                  norm, t.parseval);

  if (gen.killed()) {
    rep.assert_that("killed_bottom_positive", dec.eigenvalue(0) > 0.0, dec.eigenvalue(0), 0.0, 0.0,
                    "xi_1 > 0");
  } else {
    const double bottom = std::fabs(dec.eigenvalue(0));
    const double residual = constant_vector_residual(dec);
    rep.add_quantity("constant_vector_residual", residual, "eigenvector");
    rep.assert_that("reflected_bottom_zero", bottom <= t.reflected_bottom, bottom,
                    t.reflected_bottom, t.reflected_bottom, "|xi_1|");
    rep.assert_that("reflected_bottom_constant", residual <= t.constant_vector, residual,
                    t.constant_vector, t.constant_vector, "max_i |e_1(i) sqrt(m(I)) - 1|");
  }
  rep.runtime_seconds = seconds_since(start);
  return rep;
}

VerificationReport run_moments(const RunConfig& c) {
  const auto start = Clock::now();
  const DiffusionModel model = resolve_model(c);
  const GeneratorMatrix gen = build_generator(model, grid_interval(c), c.grid.unknowns,
                                              c.grid.lower_boundary, c.grid.upper_boundary);
  const MomentTable table = moment_recursion(gen, c.moments.order);
  VerificationReport rep;
  rep.check = "moments";
  rep.inputs = model_json(c);
  rep.inputs["order"] = c.moments.order;
  rep.inputs["unknowns"] = c.grid.unknowns;
  rep.inputs["interval_lower_x"] = json_number(c.grid.interval_lower_x);
  rep.inputs["interval_upper_x"] = json_number(c.grid.interval_upper_x);
  rep.tolerances = {{"expected_relative", c.moments.expected_relative_tolerance}};
  for (std::size_t k = 1; k <= table.order(); ++k) {
    rep.add_quantity("integrated_v" + std::to_string(k), table.integrated(k), "recursion");
  }
  if (c.moments.evaluation_x) {
    const double x = *c.moments.evaluation_x;
    rep.inputs["evaluation_x"] = x;
    for (std::size_t k = 1; k <= table.order(); ++k) {
      const double v = table.at(k, x);
      rep.add_quantity("v" + std::to_string(k) + "_at_x", v, "recursion");
      if (k - 1 < c.moments.expected_at_evaluation.size()) {
        const double e = c.moments.expected_at_evaluation[k - 1];
        rep.assert_that("v" + std::to_string(k) + "_matches_expected",
                        relatively_close(v, e, c.moments.expected_relative_tolerance), v, e,
                        c.moments.expected_relative_tolerance);
      }
    }
  } else if (!c.moments.expected_at_evaluation.empty()) {
    throw InputError("'expected_at_evaluation' in [moments] needs 'evaluation_x'");
  }
  rep.curves.columns = {"x"};
  for (std::size_t k = 1; k <= table.order(); ++k) rep.curves.columns.push_back("v" + std::to_string(k));
  for (std::size_t i = 0; i < table.nodes.size(); ++i) {
    std::vector<double> row{table.nodes[i]};
    for (std::size_t k = 1; k <= table.order(); ++k) row.push_back(table.moments[k][i]);
    rep.curves.add_row(std::move(row));
  }
  rep.runtime_seconds = seconds_since(start);
  return rep;
}

VerificationReport run_equality(const RunConfig& c) {
  EqualityChainInputs in;
  in.model = resolve_model(c);
  in.interval = grid_interval(c);
  in.unknowns = c.grid.unknowns;
  in.rate = c.rate.make();
  in.f = compile(c.test_function);
  in.tolerances = {c.tolerances.solve_vs_spectral, c.tolerances.quadrature_vs_spectral};
  in.expected = c.rate.expected;
  VerificationReport rep = verify_equality_chain(in);
  rep.inputs["test_function"] = c.test_function;
  return rep;
}

VerificationReport run_nash_killed(const RunConfig& c) {
  const auto start = Clock::now();
  const DiffusionModel model = resolve_model(c);
  const GeneratorMatrix gen = build_killed_generator(model, grid_interval(c), c.grid.unknowns);
  const SpectralDecomposition dec = eigendecompose(gen);
  const auto fs = random_bounded_functions(gen.nodes(), c.nash.killed_functions, c.seed);
  NashKilledOptions options;
  options.slack_tolerance = c.tolerances.nash_killed_slack;
  options.equality_tolerance = c.tolerances.single_mode_equality;
  options.homogeneity_tolerance = c.tolerances.homogeneity;
  VerificationReport rep;
  rep.check = "verify-nash-killed";
  rep.inputs = model_json(c);
  rep.inputs["functions"] = c.nash.killed_functions;
  for (double l : c.nash.killed_order_l_values) {
    absorb(rep, verify_nash_killed(dec, l, fs, options), "l", l);
  }
  rep.runtime_seconds = seconds_since(start);
  return rep;
}

VerificationReport run_nash_whole(const RunConfig& c) {
  const auto start = Clock::now();
  const DiffusionModel model = resolve_model(c);
  NashWholeOptions options;
  options.slack_tolerance = c.tolerances.nash_whole_slack;
  options.homogeneity_tolerance = c.tolerances.homogeneity;
  options.scan_split_points = c.nash.scan_split_points;
  VerificationReport rep;
  rep.check = "verify-nash-whole";
  rep.inputs = model_json(c);
  rep.inputs["functions"] = c.nash.whole_functions;
  for (double a : c.nash.whole_split_x) {
    const WholeLineSetup setup =
        make_whole_line_setup(model, c.nash.whole_truncation_x, c.nash.whole_unknowns, a);
    const auto fs = random_bounded_functions(setup.generator.nodes(), c.nash.whole_functions, c.seed);
    absorb(rep, verify_nash_whole(setup, c.nash.whole_order_l, fs, options), "a", a);
  }
  rep.runtime_seconds = seconds_since(start);
  return rep;
}

VerificationReport run_decay(const RunConfig& c) {
  const auto start = Clock::now();
  const DiffusionModel model = resolve_model(c);
  const auto& d = c.decay;
  DecayOptions options;
  options.t_min = d.window_start_time;
  options.t_max = d.window_end_time;
  options.points = d.points;
  options.slope_slack = d.slope_slack;
  options.gap_guard = d.gap_guard;
  const RealFunction f = compile(d.test_function);
  VerificationReport rep;
  rep.check = "verify-decay";
  rep.inputs = model_json(c);
  rep.inputs["test_function"] = d.test_function;
  rep.inputs["spacing_x"] = d.spacing_x;
  std::vector<double> slopes;
  std::vector<bool> polynomial;
  for (double L : d.truncations_x) {
    const Interval interval{-L, L};
    const std::size_t n =
        unknowns_for_spacing(interval, d.spacing_x, Boundary::Reflecting, Boundary::Reflecting);
    const GeneratorMatrix gen = build_reflected_generator(model, interval, n);
    const SpectralDecomposition dec = eigendecompose(gen);
    const VerificationReport part = verify_decay(dec, sample_on_grid(gen, f), d.order_l, options);
    slopes.push_back(part.quantity("slope"));
    polynomial.push_back(part.quantity("polynomial_fit_rms") <= part.quantity("exponential_fit_rms"));
    absorb(rep, part, "L", L);
  }
  rep.tolerances["slope_change_limit"] = d.slope_change_limit;
  for (std::size_t i = 0; i + 1 < slopes.size(); ++i) {
    if (!polynomial[i] || !polynomial[i + 1]) continue;
    const double change = std::fabs(slopes[i + 1] - slopes[i]);
    rep.assert_that("slope_stable_L" + label(d.truncations_x[i]) + "_L" + label(d.truncations_x[i + 1]),
                    change < d.slope_change_limit, change, d.slope_change_limit, d.slope_change_limit,
                    "|slope difference| between truncations");
  }
  rep.runtime_seconds = seconds_since(start);
  return rep;
}

std::optional<ThresholdClass> parse_class(const std::string& s) {
  std::string v = s;
  std::transform(v.begin(), v.end(), v.begin(), [](unsigned char ch) { return std::tolower(ch); });
  if (v == "convergent") return ThresholdClass::Convergent;
  if (v == "divergent") return ThresholdClass::Divergent;
  if (v == "inconclusive") return ThresholdClass::Inconclusive;
  return std::nullopt;
}

VerificationReport run_threshold(const RunConfig& c) {
  ThresholdOptions options;
  options.inner_radius = c.threshold.inner_radius_x;
  options.spacing = c.threshold.spacing_x;
  std::vector<std::optional<ThresholdClass>> expected;
  for (const auto& e : c.threshold.expected) expected.push_back(parse_class(e));
  VerificationReport rep = threshold_study(resolve_model(c), c.threshold.order_l_values,
                                           c.threshold.truncations_x, options, expected);
  rep.inputs["seed"] = c.seed;
  return rep;
}

SimulationConfig simulation_config(const RunConfig& c, double step, double truncation,
                                   std::size_t paths, bool bridge) {
  SimulationConfig s;
  s.model = resolve_model(c);
  s.step_time = step;
  s.truncation = truncation;
  s.paths = paths;
  s.seed = c.seed;
  s.bridge_correction = bridge;
  s.workers = c.workers;
  return s;
}

// E tau^k for the configured start, from the Dynkin recursion on the
// killed pieces of the region.
std::vector<double> recursion_oracle(const RunConfig& c, const DiffusionModel& model,
                                     const Region& region, std::size_t max_order) {
  const auto& m = c.montecarlo;
  std::vector<GeneratorMatrix> pieces;
  if (!region.is_exterior()) {
    pieces.push_back(build_killed_generator(model, {region.lower(), region.upper()}, m.oracle_unknowns));
  } else {
    if (!std::isfinite(m.truncation_x)) {
      throw InputError("recursion oracle for an exterior region needs a finite truncation_x");
    }
    const double spacing = (m.truncation_x - m.exterior_radius_x) / static_cast<double>(m.oracle_unknowns);
    auto [left, right] = build_exterior_generators(model, m.exterior_radius_x, m.truncation_x, spacing);
    pieces.push_back(std::move(left));
    pieces.push_back(std::move(right));
  }
  std::vector<MomentTable> tables;
  for (const auto& g : pieces) tables.push_back(moment_recursion(g, max_order));
  std::vector<double> out(max_order + 1, 0.0);
  if (m.start == "fixed") {
    for (const auto& t : tables) {
      if (!t.interval.contains_closed(m.start_x)) continue;
      for (std::size_t k = 0; k <= max_order; ++k) out[k] = t.at(k, m.start_x);
      return out;
    }
    throw InputError("start_x lies outside the oracle grid");
  }
  double mass = 0.0;
  for (const auto& g : pieces) mass += g.total_mass();
  for (const auto& t : tables) {
    for (std::size_t k = 0; k <= max_order; ++k) out[k] += t.integrated(k) / mass;
  }
  return out;
}

VerificationReport run_simulate_hitting(const RunConfig& c) {
  const auto start = Clock::now();
  const auto& m = c.montecarlo;
  SimulationConfig sim = simulation_config(c, m.step_time, m.truncation_x, m.paths, m.bridge_correction);
  sim.max_time = m.max_time;
  sim.noise_scale = m.noise_scale;
  const Region region = m.region == "interval" ? Region::interval(m.region_lower_x, m.region_upper_x)
                                               : Region::exterior(m.exterior_radius_x);
  std::optional<StartLaw> law;
  if (m.start == "fixed") {
    law = StartLaw::at(m.start_x);
  } else {
    const Interval domain = region.is_exterior() ? Interval{-m.truncation_x, m.truncation_x}
                                                 : Interval{region.lower(), region.upper()};
    law = StartLaw::from(StationarySampler(sim.model, domain, m.sampler_cells, region));
  }
  const HittingSample sample = sample_hitting_moments(sim, region, *law, m.orders);

  VerificationReport rep;
  rep.check = "simulate-hitting";
  rep.inputs = model_json(c);
  rep.inputs["step_time"] = m.step_time;
  rep.inputs["paths"] = m.paths;
  rep.inputs["region"] = m.region;
  rep.inputs["start"] = sample.start;
  rep.inputs["bridge_correction"] = m.bridge_correction;
  rep.inputs["truncation_x"] = json_number(m.truncation_x);
  rep.inputs["max_time"] = m.max_time;
  rep.tolerances = {{"standard_errors", m.standard_errors}, {"censoring_limit", m.censoring_limit}};
  rep.add_quantity("censored_fraction", sample.censored_fraction(), "monte carlo");
  rep.add_quantity("path_errors", static_cast<double>(sample.errors), "monte carlo");
  rep.assert_that("censoring_below_limit", sample.censored_fraction() < m.censoring_limit,
                  sample.censored_fraction(), m.censoring_limit, m.censoring_limit);

  std::vector<double> oracle;
  std::string oracle_route;
  if (!m.expected_moments.empty()) {
    oracle = m.expected_moments;
    oracle_route = "expected";
  } else if (m.oracle == "recursion") {
    const std::size_t max_order = *std::max_element(m.orders.begin(), m.orders.end());
    const auto all = recursion_oracle(c, sim.model, region, max_order);
    for (std::size_t k : m.orders) oracle.push_back(all[k]);
    oracle_route = "recursion";
  }
  rep.curves.columns = {"order", "mean", "standard_error", "oracle"};
  for (std::size_t i = 0; i < sample.moments.size(); ++i) {
    const auto& est = sample.moments[i];
    const std::string k = std::to_string(est.order);
    rep.add_quantity("moment_" + k, est.mean, "monte carlo");
    rep.add_quantity("moment_" + k + "_standard_error", est.standard_error, "monte carlo");
    const double o = oracle.empty() ? std::nan("") : oracle[i];
    rep.curves.add_row({static_cast<double>(est.order), est.mean, est.standard_error, o});
    if (oracle.empty()) continue;
    rep.add_quantity("moment_" + k + "_oracle", o, oracle_route);
    const double z = est.standard_error > 0.0 ? (est.mean - o) / est.standard_error : kInfinity;
    rep.add_quantity("moment_" + k + "_z", z, "monte carlo");
    rep.assert_that("moment_" + k + "_within_standard_errors", std::fabs(z) <= m.standard_errors,
                    std::fabs(z), m.standard_errors, m.standard_errors,
                    "|mean - oracle| / SE with oracle " + label(o));
  }
  rep.runtime_seconds = seconds_since(start);
  return rep;
}

VerificationReport run_deviation(const RunConfig& c) {
  const auto start = Clock::now();
  const auto& d = c.deviation;
  SimulationConfig sim = simulation_config(c, d.step_time, d.truncation_x, d.paths, d.bridge_correction);
  const Region region = Region::exterior(d.exterior_radius_x);
  DeviationOptions options;
  options.confidence = d.confidence;
  options.min_trials = d.min_trials;
  options.sampler_cells = d.sampler_cells;
  const DeviationResult res =
      deviation_experiment(sim, region, d.order_l, d.lambdas, d.horizon_times, options);

  VerificationReport rep;
  rep.check = "deviation";
  rep.inputs = model_json(c);
  rep.inputs["l"] = d.order_l;
  rep.inputs["lambdas"] = d.lambdas;
  rep.inputs["horizon_times"] = d.horizon_times;
  rep.inputs["step_time"] = d.step_time;
  rep.inputs["paths"] = d.paths;
  rep.inputs["truncation_x"] = d.truncation_x;
  rep.inputs["exterior_radius_x"] = d.exterior_radius_x;
  rep.inputs["bridge_correction"] = d.bridge_correction;
  rep.tolerances = {{"confidence", d.confidence}, {"slope_slack", d.slope_slack}};
  rep.add_quantity("mu_v", res.mu_v, "stationary sampler");
  rep.add_quantity("path_errors", static_cast<double>(res.errors), "monte carlo");

  std::map<double, std::vector<DeviationCell>> by_lambda;
  for (const auto& cell : res.cells) by_lambda[cell.lambda].push_back(cell);
  for (const auto& [lambda, cells] : by_lambda) {
    const std::string tag = "_lambda" + label(lambda);
    for (const auto& cell : cells) {
      if (cell.low_power) rep.notes.push_back("low power at lambda " + label(lambda) + ", t " + label(cell.horizon));
    }
    if (4.0 * lambda > 1.0) {
      std::size_t events = 0;
      for (const auto& cell : cells) events += cell.events;
      rep.assert_that("saturated_zero" + tag, events == 0, static_cast<double>(events), 0.0, 0.0,
                      "4 lambda > 1 forces probability 0");
      continue;
    }
    for (std::size_t j = 0; j + 1 < cells.size(); ++j) {
      rep.assert_that("non_increasing" + tag + "_t" + label(cells[j].horizon) + "_t" +
                          label(cells[j + 1].horizon),
                      cells[j + 1].ci.lower <= cells[j].ci.upper, cells[j + 1].ci.lower,
                      cells[j].ci.upper, 0.0, "later CI lower bound vs earlier CI upper bound");
    }
    const SlopeFit fit = deviation_slope(cells);
    const double bound = -(d.order_l + 1.0) + d.slope_slack;
    rep.add_quantity("slope" + tag, fit.slope, "least-squares log-log");
    rep.add_quantity("slope_upper_bound_points" + tag, static_cast<double>(fit.upper_bound_points),
                     "zero-count cells at CI upper bound");
    rep.assert_that("slope" + tag, fit.slope <= bound, fit.slope, bound, d.slope_slack,
                    std::to_string(fit.points) + " points, " + std::to_string(fit.upper_bound_points) +
                        " from CI upper bounds");
  }
  for (const auto& s : res.survival) {
    rep.add_quantity("survival_t" + label(s.horizon), s.probability, "monte carlo");
  }
  rep.curves.columns = {"lambda", "time", "trials", "events", "probability", "ci_lower", "ci_upper",
                        "bound_unit_constant", "survival", "survival_ci_upper"};
  for (const auto& cell : res.cells) {
    const auto it = std::find_if(res.survival.begin(), res.survival.end(),
                                 [&](const SurvivalCell& s) { return s.horizon == cell.horizon; });
    rep.curves.add_row({cell.lambda, cell.horizon, static_cast<double>(cell.trials),
                        static_cast<double>(cell.events), cell.probability, cell.ci.lower,
                        cell.ci.upper, cell.bound_unit_constant, it->probability, it->ci.upper});
  }
  rep.runtime_seconds = seconds_since(start);
  return rep;
}

}  // namespace

double constant_vector_residual(const SpectralDecomposition& dec) {
  const auto e = dec.eigenvector(0);
  const auto m = dec.weights();
  double mass = 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    mass += m[i];
    sum += m[i] * e[i];
  }
  const double sign = sum < 0.0 ? -1.0 : 1.0;
  const double scale = std::sqrt(mass);
  double worst = 0.0;
  for (double v : e) worst = std::max(worst, std::fabs(sign * v * scale - 1.0));
  return worst;
}

VerificationReport run_check(const std::string& check, const RunConfig& config) {
  if (check == "spectrum") return run_spectrum(config);
  if (check == "moments") return run_moments(config);
  if (check == "verify-equality") return run_equality(config);
  if (check == "verify-nash-killed") return run_nash_killed(config);
  if (check == "verify-nash-whole") return run_nash_whole(config);
  if (check == "verify-decay") return run_decay(config);
  if (check == "threshold-study") return run_threshold(config);
  if (check == "simulate-hitting") return run_simulate_hitting(config);
  if (check == "deviation") return run_deviation(config);
  throw ConfigError("unknown check '" + check + "'");
}

std::vector<CheckOutcome> run_checks(const RunConfig& config, const std::vector<std::string>& checks) {
  std::vector<CheckOutcome> outcomes(checks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < checks.size(); i = next++) {
      CheckOutcome& out = outcomes[i];
      out.check = checks[i];
      try {
        out.report = run_check(checks[i], config);
        out.status = out.report->passed() ? kPassed : kAssertionFailed;
      } catch (const InputError& e) {
        out.status = kInvalidInput;
        out.error = e.what();
      } catch (const std::exception& e) {
        out.status = kNumericFailure;
        out.error = e.what();
      }
    }
  };
  const std::size_t threads = std::min(config.workers, checks.size());
  if (threads <= 1) {
    worker();
    return outcomes;
  }
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return outcomes;
}

void write_outputs(const RunConfig& config, const std::vector<CheckOutcome>& outcomes) {
  namespace fs = std::filesystem;
  const fs::path dir(config.output_dir);
  fs::create_directories(dir);
  auto open = [](const fs::path& p) {
    std::ofstream out(p);
    if (!out) throw InputError("cannot write " + p.string());
    return out;
  };
  {
    auto out = open(dir / "config.ini");
    out << render_config(config);
  }
  for (const auto& o : outcomes) {
    if (!o.report) continue;
    {
      auto out = open(dir / ("report-" + o.check + ".json"));
      out << o.report->to_json().dump(2) << '\n';
    }
    if (!o.report->curves.columns.empty()) {
      auto out = open(dir / ("curves-" + o.check + ".csv"));
      o.report->curves.write_csv(out);
    }
  }
}

ExitStatus combined_status(const std::vector<CheckOutcome>& outcomes) {
  ExitStatus worst = kPassed;
  auto rank = [](ExitStatus s) {
    switch (s) {
      case kInvalidInput: return 3;
      case kNumericFailure: return 2;
      case kAssertionFailed: return 1;
      default: return 0;
    }
  };
  for (const auto& o : outcomes) {
    if (rank(o.status) > rank(worst)) worst = o.status;
  }
  return worst;
}

void print_summary(std::ostream& out, const std::vector<CheckOutcome>& outcomes) {
  for (const auto& o : outcomes) {
    if (!o.report) {
      out << "ERROR " << o.check << " (status " << static_cast<int>(o.status) << "): " << o.error << '\n';
      continue;
    }
    const auto& r = *o.report;
    const std::size_t total = r.assertions.size();
    char line[256];
    std::snprintf(line, sizeof line, "%s %s: %zu/%zu assertions passed, %.2f s\n",
                  r.passed() ? "PASS " : "FAIL ", o.check.c_str(), total - r.failures(), total,
                  r.runtime_seconds);
    out << line;
    for (const auto& a : r.assertions) {
      if (a.passed) continue;
      out << "      " << a.name << ": lhs " << label(a.lhs) << ", rhs " << label(a.rhs);
      if (!a.detail.empty()) out << " (" << a.detail << ")";
      out << '\n';
    }
  }
}

nlohmann::json summary_json(const std::vector<CheckOutcome>& outcomes) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& o : outcomes) {
    nlohmann::json j{{"check", o.check}, {"status", static_cast<int>(o.status)}};
    if (o.report) {
      j["passed"] = o.report->passed();
      j["failures"] = o.report->failures();
    } else {
      j["error"] = o.error;
    }
    checks.push_back(std::move(j));
  }
  return {{"schema_version", 1},
          {"status", static_cast<int>(combined_status(outcomes))},
          {"checks", std::move(checks)}};
}

nlohmann::json list_models_json(const std::string& tag) {
  nlohmann::json models = nlohmann::json::array();
  for (const auto& entry : model_catalog()) {
    if (!tag.empty() && std::find(entry.tags.begin(), entry.tags.end(), tag) == entry.tags.end()) continue;
    nlohmann::json known = nlohmann::json::array();
    for (const auto& k : entry.known_values) {
      known.push_back({{"name", k.name}, {"value", json_number(k.value)}, {"oracle", k.oracle}});
    }
    models.push_back({{"name", entry.model.name},
                      {"tags", entry.tags},
                      {"drift", entry.model.drift_text},
                      {"diffusion", entry.model.diffusion_text},
                      {"known_values", std::move(known)}});
  }
  return {{"schema_version", 1}, {"models", std::move(models)}};
}

void print_models(std::ostream& out, const std::string& tag) {
  const nlohmann::json listing = list_models_json(tag);
  for (const auto& m : listing["models"]) {
    out << m["name"].get<std::string>() << "  drift " << m["drift"].get<std::string>()
        << ", sigma " << m["diffusion"].get<std::string>() << "  [";
    bool first = true;
    for (const auto& t : m["tags"]) {
      out << (first ? "" : ", ") << t.get<std::string>();
      first = false;
    }
    out << "]\n";
    for (const auto& k : m["known_values"]) {
      out << "    " << k["name"].get<std::string>() << " = " << k["value"].dump() << "  ("
          << k["oracle"].get<std::string>() << ")\n";
    }
  }
}

}  // namespace hitspec::cli
