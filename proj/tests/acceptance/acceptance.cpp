// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 iff all pass.
// Tolerances are fixed here and never read from the configs.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"
#include "config.hpp"
#include "hitspec/model.hpp"
#include "hitspec/verify.hpp"

namespace {

using namespace hitspec;
using namespace hitspec::cli;
using Clock = std::chrono::steady_clock;

constexpr double kPi2 = std::numbers::pi * std::numbers::pi;

struct Verdict {
  bool passed = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) passed = false;
    if (!detail.empty()) detail += "; ";
    detail += (ok ? "" : "VIOLATED ") + what;
  }
};

// Every check run by criteria 1-9, kept for the determinism rerun.
struct Recorded {
  std::string check;
  RunConfig config;
  nlohmann::json report;
};
std::vector<Recorded> recorded;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

RunConfig config_from(const std::string& ini) {
  std::istringstream in(ini);
  return parse_config(in, "<acceptance>");
}

struct Timed {
  VerificationReport report;
  double seconds = 0.0;
};

Timed run(const std::string& check, const RunConfig& config) {
  const auto start = Clock::now();
  Timed t{run_check(check, config), 0.0};
  t.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  recorded.push_back({check, config, t.report.to_json()});
  return t;
}

double relative_error(double value, double exact) { return std::fabs(value - exact) / std::fabs(exact); }

std::size_t column(const CurveTable& table, const std::string& name) {
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (table.columns[i] == name) return i;
  }
  throw InputError("missing curve column " + name);
}

Verdict spectrum_oracle() {
  Verdict v;
  const Timed t = run("spectrum", config_from(R"(
model = BM2
[grid]
interval_lower_x = 0
interval_upper_x = 1
unknowns = 2000
lower_boundary = absorbing
upper_boundary = absorbing
)"));
  const double e1 = relative_error(t.report.quantity("xi_1"), kPi2);
  const double e2 = relative_error(t.report.quantity("xi_2"), 4.0 * kPi2);
  v.require(e1 <= 1e-3, "xi_1 rel err " + num(e1) + " <= 1e-3");
  v.require(e2 <= 1e-3, "xi_2 rel err " + num(e2) + " <= 1e-3");
  v.require(t.seconds < 10.0, "runtime " + num(t.seconds) + " s < 10 s");
  return v;
}

Verdict equality_chain() {
  Verdict v;
  const std::string base = R"(
model = BM2
[grid]
interval_lower_x = 0
interval_upper_x = 1
unknowns = 2000
[test_function]
expression = 1
[rate]
)";
  double seconds = 0.0;
  const std::vector<std::pair<std::string, double>> finite{
      {"kind = constant\n", 1.0 / 12.0}, {"kind = polynomial\nexponent_l = 1\n", 1.0 / 120.0}};
  for (const auto& [rate, exact] : finite) {
    const Timed t = run("verify-equality", config_from(base + rate));
    seconds += t.seconds;
    const double ei = relative_error(t.report.quantity("pairing"), exact);
    const double eii = relative_error(t.report.quantity("spectral_sum"), exact);
    const double eiii = relative_error(t.report.quantity("time_integral"), exact);
    const std::string tag = "1/" + num(1.0 / exact) + ": ";
    v.require(ei <= 1e-6, tag + "solve rel err " + num(ei) + " <= 1e-6");
    v.require(eii <= 1e-6, tag + "spectral rel err " + num(eii) + " <= 1e-6");
    v.require(eiii <= 1e-4, tag + "quadrature rel err " + num(eiii) + " <= 1e-4");
  }
  const Timed t = run("verify-equality",
                      config_from(base + "kind = exponential\nexponential_rate_per_time = " +
                                  "19.739208802178717\n"));
  seconds += t.seconds;
  const bool all_inf = std::isinf(t.report.quantity("pairing")) &&
                       std::isinf(t.report.quantity("spectral_sum")) &&
                       std::isinf(t.report.quantity("time_integral"));
  v.require(all_inf, "exponential rate 2 pi^2: all routes +inf");
  v.require(seconds < 30.0, "runtime " + num(seconds) + " s < 30 s");
  return v;
}

Verdict bottom_of_spectrum() {
  Verdict v;
  const std::map<std::string, std::pair<double, double>> intervals{
      {"BM2", {0.0, 4.0}}, {"OU", {-6.0, 6.0}}, {"HT(6)", {-5.0, 5.0}}};
  double worst_killed = kInfinity;
  double worst_bottom = 0.0;
  double worst_residual = 0.0;
  for (const auto& entry : model_catalog()) {
    const std::string& name = entry.model.name;
    const auto it = intervals.find(name);
    const auto [a, b] = it == intervals.end() ? std::pair{-10.0, 10.0} : it->second;
    for (const char* boundary : {"absorbing", "reflecting"}) {
      const Timed t = run("spectrum", config_from("model = " + name + "\n[grid]\ninterval_lower_x = " +
                                                  num(a) + "\ninterval_upper_x = " + num(b) +
                                                  "\nunknowns = 400\nlower_boundary = " + boundary +
                                                  "\nupper_boundary = " + boundary + "\n"));
      const double xi1 = t.report.quantity("xi_1");
      if (std::string(boundary) == "absorbing") {
        worst_killed = std::min(worst_killed, xi1);
        v.require(xi1 > 0.0, name + " killed xi_1 = " + num(xi1) + " > 0");
      } else {
        const double residual = t.report.quantity("constant_vector_residual");
        worst_bottom = std::max(worst_bottom, std::fabs(xi1));
        worst_residual = std::max(worst_residual, residual);
        v.require(std::fabs(xi1) <= 1e-10, name + " reflected |xi_1| = " + num(std::fabs(xi1)) + " <= 1e-10");
        v.require(residual <= 1e-8, name + " constant residual " + num(residual) + " <= 1e-8");
      }
    }
  }
  if (v.passed) {
    v.detail = std::to_string(model_catalog().size()) + " models; min killed xi_1 " + num(worst_killed) +
               ", max reflected |xi_1| " + num(worst_bottom) + ", max constant residual " +
               num(worst_residual);
  }
  return v;
}

Verdict killed_nash() {
  Verdict v;
  const std::vector<std::pair<std::string, std::string>> models{{"BM2", "0\ninterval_upper_x = 1"},
                                                                {"HT(4)", "-10\ninterval_upper_x = 10"}};
  for (const auto& [model, interval] : models) {
    const Timed t = run("verify-nash-killed", config_from("model = " + model + "\nseed = 7\n[grid]\ninterval_lower_x = " +
                                                          interval + "\nunknowns = 1000\n[nash]\nkilled_order_l_values = 0.5, 1, 2\nkilled_functions = 1000\n"));
    for (const char* l : {"0.5", "1", "2"}) {
      const std::string s = std::string("_l") + l;
      const std::string tag = model + " l=" + l + ": ";
      const double slack = t.report.quantity("worst_slack" + s);
      const double eq = relative_error(t.report.quantity("single_mode_lhs" + s),
                                       t.report.quantity("single_mode_rhs" + s));
      v.require(slack >= -1e-12, tag + "min slack " + num(slack) + " >= -1e-12");
      v.require(eq <= 1e-10, tag + "e_1 equality " + num(eq) + " <= 1e-10");
      for (const auto& a : t.report.assertions) {
        if (a.name == "phi_homogeneity" + s) v.require(a.passed && a.lhs <= 1e-12, tag + "homogeneity " + num(a.lhs));
        if (a.name == "phi_contraction" + s) v.require(a.passed && a.lhs <= 0.0, tag + "contraction over 20 t");
      }
    }
  }
  return v;
}

Verdict whole_line_nash() {
  Verdict v;
  const Timed t = run("verify-nash-whole", config_from(R"(
model = HT(4)
seed = 11
[nash]
whole_order_l = 2
whole_functions = 100
whole_truncation_x = 50
whole_unknowns = 1001
whole_split_x = 0, -1, 1
)"));
  for (const char* a : {"0", "-1", "1"}) {
    const std::string s = std::string("_a") + a;
    const double nash = t.report.quantity("worst_nash_slack" + s);
    const double osc = t.report.quantity("worst_osc_slack" + s);
    v.require(nash >= -1e-10, std::string("a=") + a + " variance slack " + num(nash) + " >= -1e-10");
    v.require(osc >= -1e-10, std::string("a=") + a + " osc slack " + num(osc) + " >= -1e-10");
  }
  return v;
}

Verdict hitting_moments() {
  Verdict v;
  const Timed t = run("simulate-hitting", config_from(R"(
model = BM2
seed = 2024
[montecarlo]
step_time = 1e-4
paths = 100000
region = interval
region_lower_x = 0
region_upper_x = 1
start = fixed
start_x = 0.5
orders = 1, 2
bridge_correction = true
oracle = none
)"));
  const double m1 = t.report.quantity("moment_1");
  const double s1 = t.report.quantity("moment_1_standard_error");
  const double m2 = t.report.quantity("moment_2");
  const double s2 = t.report.quantity("moment_2_standard_error");
  const double z1 = (m1 - 0.125) / s1;
  const double z2 = (m2 - 5.0 / 192.0) / s2;
  v.require(std::fabs(z1) <= 4.0, "E tau = " + num(m1) + ", z = " + num(z1) + " vs 1/8");
  v.require(std::fabs(z2) <= 4.0, "E tau^2 = " + num(m2) + ", z = " + num(z2) + " vs 5/192");
  v.require(t.seconds < 300.0, "runtime " + num(t.seconds) + " s < 300 s");
  return v;
}

Verdict threshold() {
  Verdict v;
  const Timed t = run("threshold-study", config_from(R"(
model = HT(4)
[threshold]
order_l_values = 2, 4
truncations_x = 50, 100, 200
inner_radius_x = 1
spacing_x = 0.25
)"));
  for (const char* l : {"2", "4"}) {
    std::vector<double> phi;
    for (const char* L : {"50", "100", "200"}) {
      phi.push_back(t.report.quantity(std::string("phi_l") + l + "_L" + L));
    }
    std::string changes;
    bool convergent = true;
    bool divergent = true;
    for (std::size_t i = 0; i + 1 < phi.size(); ++i) {
      const double change = phi[i + 1] / phi[i] - 1.0;
      changes += (i ? ", " : "") + num(change);
      convergent = convergent && std::fabs(change) < 0.05;
      divergent = divergent && change > 0.5;
    }
    if (std::string(l) == "2") {
      v.require(convergent, "l=2 CONVERGENT, changes per doubling " + changes);
    } else {
      v.require(divergent, "l=4 DIVERGENT, growth per doubling " + changes);
    }
  }
  return v;
}

Verdict decay_slope() {
  Verdict v;
  const Timed t = run("verify-decay", config_from(R"(
model = HT(4)
[decay]
order_l = 2
truncations_x = 100, 200
spacing_x = 0.2
test_function = tanh(x)
window_start_time = 1
window_end_time = 30
)"));
  const double s100 = t.report.quantity("slope_L100");
  const double s200 = t.report.quantity("slope_L200");
  v.require(s100 <= -2.5, "slope L=100 " + num(s100) + " <= -2.5");
  v.require(s200 <= -2.5, "slope L=200 " + num(s200) + " <= -2.5");
  v.require(std::fabs(s200 - s100) < 0.2, "slope change " + num(std::fabs(s200 - s100)) + " < 0.2");
  return v;
}

Verdict deviation() {
  Verdict v;
  const Timed t = run("deviation", config_from(R"(
model = HT(4)
seed = 99
[deviation]
order_l = 1
lambdas = 0.1, 0.3
horizon_times = 10, 30, 100
step_time = 0.01
paths = 10000
truncation_x = 100
exterior_radius_x = 1
confidence = 0.95
)"));
  const CurveTable& c = t.report.curves;
  const std::size_t lam = column(c, "lambda"), time = column(c, "time"), ev = column(c, "events"),
                    p = column(c, "probability"), lo = column(c, "ci_lower"), hi = column(c, "ci_upper");
  std::vector<const std::vector<double>*> main;
  bool saturated_zero = true;
  for (const auto& row : c.rows) {
    if (4.0 * row[lam] > 1.0) saturated_zero = saturated_zero && row[p] == 0.0;
    if (std::fabs(row[lam] - 0.1) < 1e-12) main.push_back(&row);
  }
  std::string counts;
  bool monotone = true;
  for (std::size_t i = 0; i < main.size(); ++i) {
    counts += (i ? ", " : "") + num((*main[i])[ev]) + " at t=" + num((*main[i])[time]);
    if (i + 1 < main.size()) monotone = monotone && (*main[i + 1])[lo] <= (*main[i])[hi];
  }
  const double slope = t.report.quantity("slope_lambda0.1");
  v.require(monotone, "lambda=0.1 non-increasing within CIs (events " + counts + ")");
  v.require(slope <= -1.5, "log-log slope " + num(slope) + " <= -1.5");
  v.require(saturated_zero, "4 lambda > 1 cells exactly 0");
  v.require(t.seconds < 900.0, "runtime " + num(t.seconds) + " s < 900 s");
  return v;
}

Verdict determinism() {
  Verdict v;
  std::size_t compared = 0;
  std::size_t mismatched = 0;
  const auto first = recorded;
  for (const auto& r : first) {
    RunConfig config = r.config;
    config.workers = config.workers == 1 ? 2 : 1;
    // Reproduce from the rendered configuration, as a user rerunning config.ini would.
    RunConfig rerun = config_from(render_config(config));
    nlohmann::json again = run_check(r.check, rerun).to_json();
    nlohmann::json before = r.report;
    again.erase("runtime_seconds");
    before.erase("runtime_seconds");
    ++compared;
    if (again != before) {
      ++mismatched;
      v.require(false, r.check + " on " + r.config.model + " differs");
    }
  }
  v.require(compared > 0 && mismatched == 0,
            std::to_string(compared) + " reports rerun from rendered configs with a different worker count, " +
                std::to_string(mismatched) + " differ");
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance suite"};
  std::vector<int> only;
  app.add_option("--criterion", only, "Run only these criteria (1-10)")->check(CLI::Range(1, 10));
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"spectrum oracle", spectrum_oracle},
      {"equality chain", equality_chain},
      {"bottom of spectrum", bottom_of_spectrum},
      {"killed Nash inequality", killed_nash},
      {"whole-line Nash inequality", whole_line_nash},
      {"Monte Carlo hitting moments", hitting_moments},
      {"threshold study", threshold},
      {"decay slope", decay_slope},
      {"deviation experiment", deviation},
      {"determinism", determinism}};

  auto selected = [&](int id) {
    return only.empty() || std::find(only.begin(), only.end(), id) != only.end();
  };
  // Determinism reruns every other criterion, so those run first even when not selected.
  const bool need_all = selected(10);
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    const bool shown = selected(id);
    if (!shown && !(need_all && id < 10)) continue;
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v.passed = false;
      v.detail = std::string("error: ") + e.what();
    }
    if (!shown) continue;
    if (!v.passed) ++failures;
    std::cout << (v.passed ? "PASS" : "FAIL") << " criterion " << id << " (" << criteria[i].first
              << "): " << v.detail << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
