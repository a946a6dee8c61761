#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace hitspec::cli {

namespace {

namespace pt = boost::property_tree;

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string where(const std::string& section, const std::string& key) {
  return section.empty() ? "'" + key + "'" : "'" + key + "' in [" + section + "]";
}

double parse_double(const std::string& raw, const std::string& what) {
  const std::string s = lower(trim(raw));
  if (s == "inf" || s == "+inf" || s == "infinity") return kInfinity;
  if (s == "-inf" || s == "-infinity") return -kInfinity;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty() || std::isnan(v)) {
    throw ConfigError("invalid number '" + raw + "' for " + what);
  }
  return v;
}

std::uint64_t parse_unsigned(const std::string& raw, const std::string& what) {
  const std::string s = trim(raw);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw ConfigError("invalid non-negative integer '" + raw + "' for " + what);
  }
  return v;
}

bool parse_bool(const std::string& raw, const std::string& what) {
  const std::string s = lower(trim(raw));
  if (s == "true" || s == "yes" || s == "on" || s == "1") return true;
  if (s == "false" || s == "no" || s == "off" || s == "0") return false;
  throw ConfigError("invalid boolean '" + raw + "' for " + what);
}

std::vector<std::string> split_list(const std::string& raw) {
  std::vector<std::string> out;
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<double> parse_doubles(const std::string& raw, const std::string& what) {
  std::vector<double> out;
  for (const auto& item : split_list(raw)) out.push_back(parse_double(item, what));
  return out;
}

Boundary parse_boundary(const std::string& raw, const std::string& what) {
  const std::string s = lower(trim(raw));
  if (s == "absorbing") return Boundary::Absorbing;
  if (s == "reflecting") return Boundary::Reflecting;
  throw ConfigError("invalid boundary '" + raw + "' for " + what + " (absorbing | reflecting)");
}

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <class T>
std::string join(const std::vector<T>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    if constexpr (std::is_same_v<T, double>) {
      out += format_double(values[i]);
    } else if constexpr (std::is_same_v<T, std::string>) {
      out += values[i];
    } else {
      out += std::to_string(values[i]);
    }
  }
  return out;
}

// Binds section keys to setters; reports unknown keys by name.
class SectionReader {
 public:
  using Setter = std::function<void(const std::string& value, const std::string& what)>;

  SectionReader& key(const std::string& name, Setter setter) {
    setters_[name] = std::move(setter);
    return *this;
  }

  void read(const std::string& section, const pt::ptree& tree) const {
    for (const auto& [k, v] : tree) {
      const auto it = setters_.find(k);
      if (it == setters_.end()) {
        throw ConfigError("unknown key " + where(section, k) + "; allowed: " + allowed());
      }
      it->second(v.data(), where(section, k));
    }
  }

 private:
  std::string allowed() const {
    std::string out;
    for (const auto& [k, _] : setters_) out += (out.empty() ? "" : ", ") + k;
    return out;
  }
  std::map<std::string, Setter> setters_;
};

SectionReader::Setter set(double& target) {
  return [&target](const std::string& v, const std::string& w) { target = parse_double(v, w); };
}
SectionReader::Setter set(std::size_t& target) {
  return [&target](const std::string& v, const std::string& w) {
    target = static_cast<std::size_t>(parse_unsigned(v, w));
  };
}
SectionReader::Setter set(bool& target) {
  return [&target](const std::string& v, const std::string& w) { target = parse_bool(v, w); };
}
SectionReader::Setter set(std::string& target) {
  return [&target](const std::string& v, const std::string&) { target = trim(v); };
}
SectionReader::Setter set(std::optional<double>& target) {
  return [&target](const std::string& v, const std::string& w) { target = parse_double(v, w); };
}
SectionReader::Setter set(std::vector<double>& target) {
  return [&target](const std::string& v, const std::string& w) { target = parse_doubles(v, w); };
}
SectionReader::Setter set(std::vector<std::string>& target) {
  return [&target](const std::string& v, const std::string&) { target = split_list(v); };
}
SectionReader::Setter set(std::vector<std::size_t>& target) {
  return [&target](const std::string& v, const std::string& w) {
    target.clear();
    for (const auto& item : split_list(v)) target.push_back(static_cast<std::size_t>(parse_unsigned(item, w)));
  };
}
SectionReader::Setter set(Boundary& target) {
  return [&target](const std::string& v, const std::string& w) { target = parse_boundary(v, w); };
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

}  // namespace

RateFunction RateConfig::make() const {
  const std::string k = lower(kind);
  if (k == "constant") return RateFunction::constant();
  if (k == "polynomial") return RateFunction::polynomial(exponent_l);
  if (k == "exponential") return RateFunction::exponential(exponential_rate_per_time);
  throw ConfigError("invalid rate kind '" + kind + "' (constant | polynomial | exponential)");
}

const std::vector<std::string>& known_checks() {
  static const std::vector<std::string> checks{
      "spectrum",      "moments",          "verify-equality", "verify-nash-killed",
      "verify-nash-whole", "verify-decay", "threshold-study", "simulate-hitting",
      "deviation"};
  return checks;
}

RunConfig parse_config(std::istream& in, const std::string& source) {
  pt::ptree tree;
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(source + ": " + e.message() + " (line " + std::to_string(e.line()) + ")");
  }
  RunConfig c;
  SectionReader top;
  top.key("model", set(c.model))
      .key("checks", [&](const std::string& v, const std::string&) { c.checks = split_list(v); })
      .key("seed", [&](const std::string& v, const std::string& w) { c.seed = parse_unsigned(v, w); })
      .key("workers", set(c.workers))
      .key("output_dir", set(c.output_dir));

  CustomModelConfig custom;
  SectionReader custom_reader;
  custom_reader.key("name", set(custom.name))
      .key("drift", set(custom.drift))
      .key("diffusion", set(custom.diffusion))
      .key("domain_lower_x", set(custom.domain_lower_x))
      .key("domain_upper_x", set(custom.domain_upper_x))
      .key("reference_x", set(custom.reference_x));

  SectionReader grid;
  grid.key("interval_lower_x", set(c.grid.interval_lower_x))
      .key("interval_upper_x", set(c.grid.interval_upper_x))
      .key("unknowns", set(c.grid.unknowns))
      .key("lower_boundary", set(c.grid.lower_boundary))
      .key("upper_boundary", set(c.grid.upper_boundary));

  SectionReader rate;
  rate.key("kind", set(c.rate.kind))
      .key("exponent_l", set(c.rate.exponent_l))
      .key("exponential_rate_per_time", set(c.rate.exponential_rate_per_time))
      .key("expected", set(c.rate.expected));

  SectionReader test_function;
  test_function.key("expression", set(c.test_function));

  SectionReader spectrum;
  spectrum.key("eigenvalues_reported", set(c.spectrum.eigenvalues_reported))
      .key("expected_eigenvalues", set(c.spectrum.expected_eigenvalues))
      .key("expected_relative_tolerance", set(c.spectrum.expected_relative_tolerance));

  SectionReader moments;
  moments.key("order", set(c.moments.order))
      .key("evaluation_x", set(c.moments.evaluation_x))
      .key("expected_at_evaluation", set(c.moments.expected_at_evaluation))
      .key("expected_relative_tolerance", set(c.moments.expected_relative_tolerance));

  SectionReader nash;
  nash.key("killed_order_l_values", set(c.nash.killed_order_l_values))
      .key("killed_functions", set(c.nash.killed_functions))
      .key("whole_order_l", set(c.nash.whole_order_l))
      .key("whole_functions", set(c.nash.whole_functions))
      .key("whole_truncation_x", set(c.nash.whole_truncation_x))
      .key("whole_unknowns", set(c.nash.whole_unknowns))
      .key("whole_split_x", set(c.nash.whole_split_x))
      .key("scan_split_points", set(c.nash.scan_split_points));

  SectionReader decay;
  decay.key("order_l", set(c.decay.order_l))
      .key("truncations_x", set(c.decay.truncations_x))
      .key("spacing_x", set(c.decay.spacing_x))
      .key("test_function", set(c.decay.test_function))
      .key("window_start_time", set(c.decay.window_start_time))
      .key("window_end_time", set(c.decay.window_end_time))
      .key("points", set(c.decay.points))
      .key("slope_slack", set(c.decay.slope_slack))
      .key("slope_change_limit", set(c.decay.slope_change_limit))
      .key("gap_guard", set(c.decay.gap_guard));

  SectionReader threshold;
  threshold.key("order_l_values", set(c.threshold.order_l_values))
      .key("truncations_x", set(c.threshold.truncations_x))
      .key("inner_radius_x", set(c.threshold.inner_radius_x))
      .key("spacing_x", set(c.threshold.spacing_x))
      .key("expected", set(c.threshold.expected));

  SectionReader mc;
  auto& m = c.montecarlo;
  mc.key("step_time", set(m.step_time))
      .key("paths", set(m.paths))
      .key("region", set(m.region))
      .key("region_lower_x", set(m.region_lower_x))
      .key("region_upper_x", set(m.region_upper_x))
      .key("exterior_radius_x", set(m.exterior_radius_x))
      .key("start", set(m.start))
      .key("start_x", set(m.start_x))
      .key("orders", set(m.orders))
      .key("bridge_correction", set(m.bridge_correction))
      .key("max_time", set(m.max_time))
      .key("truncation_x", set(m.truncation_x))
      .key("noise_scale", set(m.noise_scale))
      .key("sampler_cells", set(m.sampler_cells))
      .key("oracle", set(m.oracle))
      .key("oracle_unknowns", set(m.oracle_unknowns))
      .key("expected_moments", set(m.expected_moments))
      .key("standard_errors", set(m.standard_errors))
      .key("censoring_limit", set(m.censoring_limit));

  SectionReader dev;
  auto& d = c.deviation;
  dev.key("order_l", set(d.order_l))
      .key("lambdas", set(d.lambdas))
      .key("horizon_times", set(d.horizon_times))
      .key("step_time", set(d.step_time))
      .key("paths", set(d.paths))
      .key("truncation_x", set(d.truncation_x))
      .key("exterior_radius_x", set(d.exterior_radius_x))
      .key("bridge_correction", set(d.bridge_correction))
      .key("confidence", set(d.confidence))
      .key("slope_slack", set(d.slope_slack))
      .key("min_trials", set(d.min_trials))
      .key("sampler_cells", set(d.sampler_cells));

  SectionReader tol;
  auto& t = c.tolerances;
  tol.key("solve_vs_spectral", set(t.solve_vs_spectral))
      .key("quadrature_vs_spectral", set(t.quadrature_vs_spectral))
      .key("nash_killed_slack", set(t.nash_killed_slack))
      .key("nash_whole_slack", set(t.nash_whole_slack))
      .key("single_mode_equality", set(t.single_mode_equality))
      .key("homogeneity", set(t.homogeneity))
      .key("reflected_bottom", set(t.reflected_bottom))
      .key("constant_vector", set(t.constant_vector))
      .key("orthonormality", set(t.orthonormality))
      .key("parseval", set(t.parseval));

  const std::map<std::string, const SectionReader*> sections{
      {"custom_model", &custom_reader}, {"grid", &grid},         {"rate", &rate},
      {"test_function", &test_function}, {"spectrum", &spectrum}, {"moments", &moments},
      {"nash", &nash},                   {"decay", &decay},       {"threshold", &threshold},
      {"montecarlo", &mc},               {"deviation", &dev},     {"tolerances", &tol}};

  pt::ptree top_level;
  for (const auto& [k, v] : tree) {
    if (v.empty() && !sections.count(k)) {
      top_level.push_back({k, v});
      continue;
    }
    const auto it = sections.find(k);
    if (it == sections.end()) throw ConfigError("unknown section [" + k + "]");
    it->second->read(k, v);
    if (k == "custom_model") c.custom_model = custom;
  }
  top.read("", top_level);
  if (c.custom_model) c.custom_model = custom;
  validate(c);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  return parse_config(in, path);
}

void validate(const RunConfig& c) {
  require(!c.model.empty(), "'model' must not be empty");
  for (const auto& check : c.checks) {
    const auto& known = known_checks();
    require(std::find(known.begin(), known.end(), check) != known.end(),
            "unknown check '" + check + "' in 'checks'; allowed: " + join(known));
  }
  require(c.workers >= 1, "'workers' must be at least 1");
  if (c.custom_model) {
    const auto& cm = *c.custom_model;
    require(!cm.name.empty(), "'name' in [custom_model] is required");
    require(!cm.drift.empty() && !cm.diffusion.empty(),
            "'drift' and 'diffusion' in [custom_model] are required");
    require(cm.domain_lower_x < cm.domain_upper_x, "[custom_model] domain must be non-empty");
  }
  resolve_model(c);

  const auto& g = c.grid;
  require(g.unknowns >= 3, "'unknowns' in [grid] must be at least 3");
  require(std::isfinite(g.interval_lower_x) && std::isfinite(g.interval_upper_x) &&
              g.interval_lower_x < g.interval_upper_x,
          "[grid] interval must be bounded with interval_lower_x < interval_upper_x");
  c.rate.make();
  require(c.spectrum.eigenvalues_reported >= 1, "'eigenvalues_reported' in [spectrum] must be >= 1");
  require(c.moments.order >= 1, "'order' in [moments] must be at least 1");

  const auto& n = c.nash;
  for (double l : n.killed_order_l_values) require(l > 0.0, "[nash] orders l must be positive");
  require(n.whole_order_l > 0.0, "'whole_order_l' in [nash] must be positive");
  require(n.whole_unknowns >= 3, "'whole_unknowns' in [nash] must be at least 3");
  require(n.whole_truncation_x > 0.0 && std::isfinite(n.whole_truncation_x),
          "'whole_truncation_x' in [nash] must be positive and finite");
  for (double a : n.whole_split_x) {
    require(std::fabs(a) < n.whole_truncation_x, "'whole_split_x' in [nash] must lie inside (-L, L)");
  }

  const auto& d = c.decay;
  require(!d.truncations_x.empty(), "'truncations_x' in [decay] must not be empty");
  for (double L : d.truncations_x) require(L > 0.0 && std::isfinite(L), "[decay] truncations must be positive");
  require(d.spacing_x > 0.0, "'spacing_x' in [decay] must be positive");
  require(d.window_start_time > 0.0 && d.window_end_time > d.window_start_time,
          "[decay] needs 0 < window_start_time < window_end_time");
  require(d.points >= 3, "'points' in [decay] must be at least 3");

  const auto& th = c.threshold;
  require(!th.order_l_values.empty(), "'order_l_values' in [threshold] must not be empty");
  require(th.truncations_x.size() >= 2, "'truncations_x' in [threshold] needs at least two values");
  require(th.spacing_x > 0.0, "'spacing_x' in [threshold] must be positive");
  require(th.expected.empty() || th.expected.size() == th.order_l_values.size(),
          "'expected' in [threshold] needs one entry per order");
  for (const auto& e : th.expected) {
    const std::string s = lower(e);
    require(s == "convergent" || s == "divergent" || s == "inconclusive" || s == "any",
            "invalid 'expected' entry '" + e + "' in [threshold]");
  }

  const auto& m = c.montecarlo;
  require(m.step_time > 0.0, "'step_time' in [montecarlo] must be positive");
  require(m.paths >= 1, "'paths' in [montecarlo] must be at least 1");
  require(m.max_time > 0.0, "'max_time' in [montecarlo] must be positive");
  require(m.truncation_x > 0.0, "'truncation_x' in [montecarlo] must be positive");
  require(m.region == "interval" || m.region == "exterior",
          "'region' in [montecarlo] must be interval or exterior");
  if (m.region == "interval") {
    require(m.region_lower_x < m.region_upper_x, "[montecarlo] region needs region_lower_x < region_upper_x");
  }
  require(m.start == "fixed" || m.start == "stationary", "'start' in [montecarlo] must be fixed or stationary");
  require(m.oracle == "recursion" || m.oracle == "none", "'oracle' in [montecarlo] must be recursion or none");
  require(m.oracle_unknowns >= 3, "'oracle_unknowns' in [montecarlo] must be at least 3");
  require(!m.orders.empty(), "'orders' in [montecarlo] must not be empty");
  for (std::size_t k : m.orders) require(k >= 1, "[montecarlo] orders must be >= 1");
  require(m.expected_moments.empty() || m.expected_moments.size() == m.orders.size(),
          "'expected_moments' in [montecarlo] needs one value per order");
  require(m.start == "fixed" || std::isfinite(m.truncation_x),
          "stationary start in [montecarlo] needs a finite truncation_x");

  const auto& v = c.deviation;
  require(v.order_l > 0.0, "'order_l' in [deviation] must be positive");
  require(!v.lambdas.empty() && !v.horizon_times.empty(), "[deviation] needs lambdas and horizon_times");
  for (double l : v.lambdas) require(l > 0.0, "[deviation] lambdas must be positive");
  for (double h : v.horizon_times) require(h > 0.0, "[deviation] horizon_times must be positive");
  require(v.step_time > 0.0, "'step_time' in [deviation] must be positive");
  require(v.paths >= 1, "'paths' in [deviation] must be at least 1");
  require(v.truncation_x > v.exterior_radius_x && std::isfinite(v.truncation_x),
          "[deviation] needs a finite truncation_x above exterior_radius_x");
  require(v.confidence > 0.0 && v.confidence < 1.0, "'confidence' in [deviation] must be in (0, 1)");
}

DiffusionModel resolve_model(const RunConfig& c) {
  if (c.custom_model && c.custom_model->name == c.model) {
    const auto& cm = *c.custom_model;
    return make_expression_model(cm.name, cm.drift, cm.diffusion,
                                 {cm.domain_lower_x, cm.domain_upper_x}, cm.reference_x);
  }
  try {
    return find_model(c.model).model;
  } catch (const InputError&) {
    throw ConfigError("unknown model '" + c.model + "'; see list-models or define [custom_model]");
  }
}

std::string render_config(const RunConfig& c) {
  std::ostringstream os;
  auto kv = [&os](const std::string& k, const std::string& v) { os << k << " = " << v << '\n'; };
  auto num = [&kv](const std::string& k, double v) { kv(k, format_double(v)); };
  auto flag = [&kv](const std::string& k, bool v) { kv(k, v ? "true" : "false"); };
  kv("model", c.model);
  kv("checks", join(c.checks));
  kv("seed", std::to_string(c.seed));
  kv("workers", std::to_string(c.workers));
  kv("output_dir", c.output_dir);
  if (c.custom_model) {
    const auto& cm = *c.custom_model;
    os << "\n[custom_model]\n";
    kv("name", cm.name);
    kv("drift", cm.drift);
    kv("diffusion", cm.diffusion);
    num("domain_lower_x", cm.domain_lower_x);
    num("domain_upper_x", cm.domain_upper_x);
    num("reference_x", cm.reference_x);
  }
  os << "\n[grid]\n";
  num("interval_lower_x", c.grid.interval_lower_x);
  num("interval_upper_x", c.grid.interval_upper_x);
  kv("unknowns", std::to_string(c.grid.unknowns));
  kv("lower_boundary", to_string(c.grid.lower_boundary));
  kv("upper_boundary", to_string(c.grid.upper_boundary));
  os << "\n[rate]\n";
  kv("kind", c.rate.kind);
  num("exponent_l", c.rate.exponent_l);
  num("exponential_rate_per_time", c.rate.exponential_rate_per_time);
  if (c.rate.expected) num("expected", *c.rate.expected);
  os << "\n[test_function]\n";
  kv("expression", c.test_function);
  os << "\n[spectrum]\n";
  kv("eigenvalues_reported", std::to_string(c.spectrum.eigenvalues_reported));
  if (!c.spectrum.expected_eigenvalues.empty()) kv("expected_eigenvalues", join(c.spectrum.expected_eigenvalues));
  num("expected_relative_tolerance", c.spectrum.expected_relative_tolerance);
  os << "\n[moments]\n";
  kv("order", std::to_string(c.moments.order));
  if (c.moments.evaluation_x) num("evaluation_x", *c.moments.evaluation_x);
  if (!c.moments.expected_at_evaluation.empty()) kv("expected_at_evaluation", join(c.moments.expected_at_evaluation));
  num("expected_relative_tolerance", c.moments.expected_relative_tolerance);
  os << "\n[nash]\n";
  kv("killed_order_l_values", join(c.nash.killed_order_l_values));
  kv("killed_functions", std::to_string(c.nash.killed_functions));
  num("whole_order_l", c.nash.whole_order_l);
  kv("whole_functions", std::to_string(c.nash.whole_functions));
  num("whole_truncation_x", c.nash.whole_truncation_x);
  kv("whole_unknowns", std::to_string(c.nash.whole_unknowns));
  kv("whole_split_x", join(c.nash.whole_split_x));
  flag("scan_split_points", c.nash.scan_split_points);
  os << "\n[decay]\n";
  num("order_l", c.decay.order_l);
  kv("truncations_x", join(c.decay.truncations_x));
  num("spacing_x", c.decay.spacing_x);
  kv("test_function", c.decay.test_function);
  num("window_start_time", c.decay.window_start_time);
  num("window_end_time", c.decay.window_end_time);
  kv("points", std::to_string(c.decay.points));
  num("slope_slack", c.decay.slope_slack);
  num("slope_change_limit", c.decay.slope_change_limit);
  flag("gap_guard", c.decay.gap_guard);
  os << "\n[threshold]\n";
  kv("order_l_values", join(c.threshold.order_l_values));
  kv("truncations_x", join(c.threshold.truncations_x));
  num("inner_radius_x", c.threshold.inner_radius_x);
  num("spacing_x", c.threshold.spacing_x);
  if (!c.threshold.expected.empty()) kv("expected", join(c.threshold.expected));
  const auto& m = c.montecarlo;
  os << "\n[montecarlo]\n";
  num("step_time", m.step_time);
  kv("paths", std::to_string(m.paths));
  kv("region", m.region);
  num("region_lower_x", m.region_lower_x);
  num("region_upper_x", m.region_upper_x);
  num("exterior_radius_x", m.exterior_radius_x);
  kv("start", m.start);
  num("start_x", m.start_x);
  kv("orders", join(m.orders));
  flag("bridge_correction", m.bridge_correction);
  num("max_time", m.max_time);
  num("truncation_x", m.truncation_x);
  num("noise_scale", m.noise_scale);
  kv("sampler_cells", std::to_string(m.sampler_cells));
  kv("oracle", m.oracle);
  kv("oracle_unknowns", std::to_string(m.oracle_unknowns));
  if (!m.expected_moments.empty()) kv("expected_moments", join(m.expected_moments));
  num("standard_errors", m.standard_errors);
  num("censoring_limit", m.censoring_limit);
  const auto& d = c.deviation;
  os << "\n[deviation]\n";
  num("order_l", d.order_l);
  kv("lambdas", join(d.lambdas));
  kv("horizon_times", join(d.horizon_times));
  num("step_time", d.step_time);
  kv("paths", std::to_string(d.paths));
  num("truncation_x", d.truncation_x);
  num("exterior_radius_x", d.exterior_radius_x);
  flag("bridge_correction", d.bridge_correction);
  num("confidence", d.confidence);
  num("slope_slack", d.slope_slack);
  kv("min_trials", std::to_string(d.min_trials));
  kv("sampler_cells", std::to_string(d.sampler_cells));
  const auto& t = c.tolerances;
  os << "\n[tolerances]\n";
  num("solve_vs_spectral", t.solve_vs_spectral);
  num("quadrature_vs_spectral", t.quadrature_vs_spectral);
  num("nash_killed_slack", t.nash_killed_slack);
  num("nash_whole_slack", t.nash_whole_slack);
  num("single_mode_equality", t.single_mode_equality);
  num("homogeneity", t.homogeneity);
  num("reflected_bottom", t.reflected_bottom);
  num("constant_vector", t.constant_vector);
  num("orthonormality", t.orthonormality);
  num("parseval", t.parseval);
  return os.str();
}

}  // namespace hitspec::cli
