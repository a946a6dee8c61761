#include "hitspec/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>

#include "hitspec/error.hpp"
#include "hitspec/random.hpp"

namespace hitspec {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string format(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// log r(t) for t = e^u.
double log_rate(const RateFunction& rate, double u, double t) {
  switch (rate.kind()) {
    case RateFunction::Kind::Constant: return 0.0;
    case RateFunction::Kind::Polynomial: return rate.parameter() * u;
    case RateFunction::Kind::Exponential: return rate.parameter() * t;
  }
  return 0.0;
}

// Agreement of two routes; equal infinities agree.
bool routes_agree(double a, double b, double tol) {
  if (std::isinf(a) || std::isinf(b)) return a == b;
  return relatively_close(a, b, tol);
}

double mean_mu(const GeneratorMatrix& gen, std::span<const double> f) {
  double sum = 0.0;
  const auto m = gen.weights();
  for (std::size_t i = 0; i < f.size(); ++i) sum += m[i] * f[i];
  return sum / gen.total_mass();
}

nlohmann::json grid_summary(const GeneratorMatrix& gen) {
  return {{"model", gen.model_name()},
          {"interval_lower_x", gen.grid().interval.lower},
          {"interval_upper_x", gen.grid().interval.upper},
          {"unknowns", gen.size()},
          {"spacing_x", gen.grid().spacing},
          {"lower_boundary", to_string(gen.grid().lower)},
          {"upper_boundary", to_string(gen.grid().upper)}};
}

}  // namespace

std::vector<double> sample_on_grid(const GeneratorMatrix& gen, const RealFunction& f) {
  std::vector<double> out(gen.size());
  for (std::size_t i = 0; i < gen.size(); ++i) {
    out[i] = f(gen.nodes()[i]);
    if (!std::isfinite(out[i])) {
      throw InputError("test function is not finite at x = " + format(gen.nodes()[i]));
    }
  }
  return out;
}

double time_integral(const SpectralMeasure& measure, const RateFunction& rate,
                     const TimeQuadratureOptions& options) {
  if (options.panels < 2 || options.panels % 2 != 0 || !(options.u_max > options.u_min)) {
    throw InputError("time quadrature needs an even panel count and u_max > u_min");
  }
  std::vector<double> xi;
  std::vector<double> w;
  for (std::size_t k = 0; k < measure.size(); ++k) {
    if (!(measure.masses[k] > 0.0)) continue;
    if (std::isinf(rate.laplace(measure.atoms[k]))) return kInfinity;
    xi.push_back(measure.atoms[k]);
    w.push_back(measure.masses[k]);
  }
  const double t_lo = std::exp(options.u_min);
  const double t_hi = std::exp(options.u_max);
  double tails = 0.0;
  for (std::size_t k = 0; k < xi.size(); ++k) {
    tails += w[k] * (rate.laplace_segment(xi[k], 0.0, t_lo) +
                     rate.laplace_segment(xi[k], t_hi, kInfinity));
  }
  const double h = (options.u_max - options.u_min) / static_cast<double>(options.panels);
  double sum = 0.0;
  for (std::size_t j = 0; j <= options.panels; ++j) {
    const double u = options.u_min + h * static_cast<double>(j);
    const double t = std::exp(u);
    const double lr = log_rate(rate, u, t) + u;  // dt = t du
    double g = 0.0;
    for (std::size_t k = 0; k < xi.size(); ++k) g += w[k] * std::exp(lr - xi[k] * t);
    const double weight = (j == 0 || j == options.panels) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
    sum += weight * g;
  }
  return sum * h / 3.0 + tails;
}

std::vector<std::vector<double>> random_bounded_functions(std::span<const double> nodes,
                                                          std::size_t count, std::uint64_t seed) {
  if (nodes.empty()) throw InputError("random functions need a non-empty grid");
  const double lo = nodes.front();
  const double hi = nodes.back();
  const double len = std::max(hi - lo, 1e-300);
  std::vector<std::vector<double>> out;
  out.reserve(count);
  for (std::size_t j = 0; j < count; ++j) {
    RandomStream rng(seed, j);
    auto u = [&rng](double a, double b) { return a + (b - a) * rng.uniform(); };
    std::vector<double> f(nodes.size());
    switch (j % 4) {
      case 0:
        for (double& v : f) v = u(-1.0, 1.0);
        break;
      case 1: {
        double a[6], phase[6], norm = 0.0;
        for (int k = 0; k < 6; ++k) {
          a[k] = u(-1.0, 1.0) / (k + 1);
          phase[k] = u(0.0, 2.0 * std::numbers::pi);
          norm += std::fabs(a[k]);
        }
        for (std::size_t i = 0; i < f.size(); ++i) {
          const double s = (nodes[i] - lo) / len;
          double v = 0.0;
          for (int k = 0; k < 6; ++k) v += a[k] * std::sin((k + 1) * std::numbers::pi * s + phase[k]);
          f[i] = v / norm;
        }
        break;
      }
      case 2: {
        const std::size_t jumps = 1 + static_cast<std::size_t>(u(0.0, 6.0));
        std::vector<double> cuts(jumps), levels(jumps + 1);
        for (double& c : cuts) c = u(lo, hi);
        std::sort(cuts.begin(), cuts.end());
        for (double& l : levels) l = u(-1.0, 1.0);
        for (std::size_t i = 0; i < f.size(); ++i) {
          const auto piece = static_cast<std::size_t>(
              std::upper_bound(cuts.begin(), cuts.end(), nodes[i]) - cuts.begin());
          f[i] = levels[piece];
        }
        break;
      }
      default: {
        const double centre = u(lo, hi);
        const double width = len * std::exp(u(std::log(1e-3), 0.0));
        const double amplitude = u(-1.0, 1.0);
        const double offset = u(-1.0, 1.0) * (1.0 - std::fabs(amplitude));
        for (std::size_t i = 0; i < f.size(); ++i) {
          f[i] = offset + amplitude * std::tanh((nodes[i] - centre) / width);
        }
        break;
      }
    }
    out.push_back(std::move(f));
  }
  return out;
}

VerificationReport verify_equality_chain(const EqualityChainInputs& in) {
  const auto start = Clock::now();
  VerificationReport rep;
  rep.check = "verify-equality";
  const GeneratorMatrix gen = build_killed_generator(in.model, in.interval, in.unknowns);
  rep.inputs = grid_summary(gen);
  rep.inputs["rate"] = in.rate.describe();
  rep.tolerances = {{"solve_vs_spectral_relative", in.tolerances.solve_vs_spectral},
                    {"quadrature_vs_spectral_relative", in.tolerances.quadrature_vs_spectral}};

  const SpectralDecomposition dec = eigendecompose(gen);
  const std::vector<double> f = sample_on_grid(gen, in.f);
  const SpectralMeasure measure = spectral_weights(dec, f);
  rep.add_quantity("xi_1", dec.eigenvalue(0), "eigensolver");
  rep.add_quantity("xi_2", dec.eigenvalue(1), "eigensolver");

  const double spectral = modulated_moment(dec, f, in.rate);
  const double quadrature = time_integral(measure, in.rate, in.quadrature);
  std::optional<double> solve;
  const bool has_solve_route =
      in.rate.kind() == RateFunction::Kind::Exponential || in.rate.integer_order();
  if (has_solve_route) solve = resolvent_pairing(gen, f, in.rate);

  if (solve) rep.add_quantity("pairing", *solve, "linear-solve");
  rep.add_quantity("spectral_sum", spectral, "spectral");
  rep.add_quantity("time_integral", quadrature, "quadrature");

  if (solve) {
    rep.assert_that("solve_matches_spectral",
                    routes_agree(*solve, spectral, in.tolerances.solve_vs_spectral), *solve,
                    spectral, in.tolerances.solve_vs_spectral);
  } else {
    rep.notes.push_back("fractional order: no linear-solve route, spectral and quadrature only");
  }
  rep.assert_that("quadrature_matches_spectral",
                  routes_agree(quadrature, spectral, in.tolerances.quadrature_vs_spectral),
                  quadrature, spectral, in.tolerances.quadrature_vs_spectral);
  if (in.expected) {
    rep.add_quantity("expected", *in.expected, "closed-form");
    rep.assert_that("spectral_matches_expected",
                    routes_agree(spectral, *in.expected, in.tolerances.solve_vs_spectral), spectral,
                    *in.expected, in.tolerances.solve_vs_spectral);
  }
  if (std::isinf(spectral)) {
    rep.notes.push_back("rate diverges at the bottom of the spectrum: all routes are +inf");
  }
  rep.runtime_seconds = seconds_since(start);
  return rep;
}

NashExponents NashExponents::for_order(double l) {
  if (!(l > 0.0) || !std::isfinite(l)) throw InputError("Nash order needs l > 0");
  NashExponents e;
  e.l = l;
  e.inv_p_numerator = l + 1.0;
  e.inv_q_numerator = 1.0;
  e.denominator = l + 2.0;
  return e;
}

NashWitness nash_witness(const SpectralMeasure& measure, double l) {
  NashWitness w;
  w.exponents = NashExponents::for_order(l);
  w.norm_sq = measure.total();
  w.energy = spectral_functional(measure, [](double xi) { return xi; });
  w.phi = nash_functional(measure, l);
  w.rhs = std::pow(w.energy, w.exponents.inv_p()) * std::pow(w.phi, w.exponents.inv_q());
  w.slack = relative_slack(w.norm_sq, w.rhs);
  return w;
}

VerificationReport verify_nash_killed(const SpectralDecomposition& dec, double l,
                                      const std::vector<std::vector<double>>& fs,
                                      const NashKilledOptions& options) {
  const auto start = Clock::now();
  if (!dec.killed()) throw InputError("killed Nash check needs a killed decomposition");
  VerificationReport rep;
  rep.check = "verify-nash-killed";
  const NashExponents ex = NashExponents::for_order(l);
  rep.inputs = {{"l", l}, {"functions", fs.size()}, {"unknowns", dec.size()}};
  rep.tolerances = {{"slack", options.slack_tolerance},
                    {"single_mode_equality_relative", options.equality_tolerance},
                    {"homogeneity_relative", options.homogeneity_tolerance}};
  rep.add_quantity("p", ex.p(), "exponent");
  rep.add_quantity("q", ex.q(), "exponent");
  rep.add_quantity("xi_1", dec.eigenvalue(0), "eigensolver");
  rep.assert_that("conjugate_exponents", ex.conjugate(), ex.inv_p_numerator + ex.inv_q_numerator,
                  ex.denominator, 0.0, "1/p + 1/q over the common denominator l+2");

  rep.curves.columns = {"index", "norm_sq", "energy", "phi", "rhs", "slack"};
  double worst_slack = kInfinity;
  double worst_homogeneity = 0.0;
  double worst_contraction = -kInfinity;
  const double c = options.homogeneity_factor;
  for (std::size_t j = 0; j < fs.size(); ++j) {
    const SpectralMeasure measure = spectral_weights(dec, fs[j]);
    const NashWitness w = nash_witness(measure, l);
    worst_slack = std::min(worst_slack, w.slack);
    rep.curves.add_row({static_cast<double>(j), w.norm_sq, w.energy, w.phi, w.rhs, w.slack});

    std::vector<double> scaled = fs[j];
    for (double& v : scaled) v *= c;
    const double phi_scaled = nash_functional(spectral_weights(dec, scaled), l);
    worst_homogeneity = std::max(worst_homogeneity, relative_difference(phi_scaled, c * c * w.phi));

    for (double tau : options.contraction_times) {
      const double t = tau / dec.eigenvalue(0);
      const double phi_t = nash_functional(measure.evolved(t), l);
      worst_contraction = std::max(worst_contraction, phi_t - w.phi);
    }
  }
  if (!fs.empty()) {
    rep.add_quantity("worst_slack", worst_slack, "spectral");
    rep.assert_that("nash_inequality", worst_slack >= -options.slack_tolerance, worst_slack,
                    -options.slack_tolerance, options.slack_tolerance,
                    "min over f of (rhs - lhs)/max(|lhs|, |rhs|)");
    rep.assert_that("phi_homogeneity", worst_homogeneity <= options.homogeneity_tolerance,
                    worst_homogeneity, 0.0, options.homogeneity_tolerance,
                    "max relative |Phi(cf) - c^2 Phi(f)|, c = " + format(c));
    rep.assert_that("phi_contraction", worst_contraction <= 0.0, worst_contraction, 0.0, 0.0,
                    "max over f, t of Phi(P_t f) - Phi(f)");
  }

  const auto e1 = dec.eigenvector(0);
  const NashWitness single =
      nash_witness(spectral_weights(dec, std::vector<double>(e1.begin(), e1.end())), l);
  rep.add_quantity("single_mode_lhs", single.norm_sq, "spectral");
  rep.add_quantity("single_mode_rhs", single.rhs, "spectral");
  rep.assert_that("single_mode_equality",
                  relatively_close(single.norm_sq, single.rhs, options.equality_tolerance),
                  single.norm_sq, single.rhs, options.equality_tolerance, "f = e_1");
  rep.runtime_seconds = seconds_since(start);
  return rep;
}

WholeLineSetup make_whole_line_setup(const DiffusionModel& model, double truncation,
                                     std::size_t unknowns, double split_point) {
  if (!(truncation > 0.0)) throw InputError("truncation L must be positive");
  if (!(split_point > -truncation && split_point < truncation)) {
    throw InputError("split point " + format(split_point) + " outside (-L, L)");
  }
  GeneratorMatrix gen = build_reflected_generator(model, {-truncation, truncation}, unknowns);
  const auto nodes = gen.nodes();
  const auto it = std::lower_bound(nodes.begin(), nodes.end(), split_point);
  std::size_t j = static_cast<std::size_t>(it - nodes.begin());
  if (j > 0 && (j == nodes.size() || split_point - nodes[j - 1] < nodes[j] - split_point)) --j;
  if (j == 0 || j + 1 >= nodes.size()) {
    throw InputError("split point " + format(split_point) + " too close to the truncation edge");
  }
  return {std::move(gen), j, nodes[j]};
}

namespace {

struct HalfLine {
  GeneratorMatrix gen;
  SpectralDecomposition dec;
  double moment = 0.0;  // int E_x T_a^{l+1} mu(dx) over this half
};

HalfLine make_half(GeneratorMatrix gen, double l, double total_mass) {
  SpectralDecomposition dec = eigendecompose(gen);
  double moment = 0.0;
  if (l == std::floor(l) && l <= 64.0) {
    const auto k = static_cast<std::size_t>(l) + 1;
    moment = moment_recursion(gen, k).integrated(k);
  } else {
    const std::vector<double> ones(gen.size(), 1.0);
    moment = std::tgamma(l + 2.0) * nash_functional(spectral_weights(dec, ones), l);
  }
  return {std::move(gen), std::move(dec), moment / total_mass};
}

// Phi_a(F) in mu-normalization for the halves split at node j.
struct SplitPhi {
  double minus = 0.0;
  double plus = 0.0;
  double combined = 0.0;
};

SplitPhi split_phi(const HalfLine& left, const HalfLine& right, std::span<const double> F,
                   std::size_t j, double l, double q, double total_mass) {
  std::vector<double> u_minus(j);
  for (std::size_t i = 0; i < j; ++i) u_minus[i] = F[i] - F[j];
  std::vector<double> u_plus(F.size() - j - 1);
  for (std::size_t i = j + 1; i < F.size(); ++i) u_plus[i - j - 1] = F[i] - F[j];
  SplitPhi s;
  s.minus = nash_functional(spectral_weights(left.dec, u_minus), l) / total_mass;
  s.plus = nash_functional(spectral_weights(right.dec, u_plus), l) / total_mass;
  s.combined = std::pow(std::pow(s.minus, 1.0 / q) + std::pow(s.plus, 1.0 / q), q);
  return s;
}

}  // namespace

VerificationReport verify_nash_whole(const WholeLineSetup& setup, double l,
                                     const std::vector<std::vector<double>>& fs,
                                     const NashWholeOptions& options) {
  const auto start = Clock::now();
  const GeneratorMatrix& gen = setup.generator;
  if (gen.killed()) throw InputError("whole-line Nash check needs a reflected generator");
  const NashExponents ex = NashExponents::for_order(l);
  const double p = ex.p();
  const double q = ex.q();
  const double mass = gen.total_mass();
  const std::size_t j = setup.split_node;

  VerificationReport rep;
  rep.check = "verify-nash-whole";
  rep.inputs = grid_summary(gen);
  rep.inputs["l"] = l;
  rep.inputs["split_point_x"] = setup.split_point;
  rep.inputs["functions"] = fs.size();
  rep.tolerances = {{"slack", options.slack_tolerance},
                    {"homogeneity_relative", options.homogeneity_tolerance}};
  rep.notes.push_back("Nash constant C = 1; mu = m / m([-L, L])");

  const HalfLine left = make_half(gen.restrict_to(0, j), l, mass);
  const HalfLine right = make_half(gen.restrict_to(j + 1, gen.size()), l, mass);
  const double moment_factor =
      std::pow(std::pow(left.moment, 1.0 / q) + std::pow(right.moment, 1.0 / q), q);
  rep.add_quantity("p", p, "exponent");
  rep.add_quantity("q", q, "exponent");
  rep.add_quantity("truncated_mass", mass, "quadrature");
  rep.add_quantity("moment_minus", left.moment, l == std::floor(l) ? "recursion" : "spectral");
  rep.add_quantity("moment_plus", right.moment, l == std::floor(l) ? "recursion" : "spectral");
  rep.add_quantity("xi_1_minus", left.dec.eigenvalue(0), "eigensolver");
  rep.add_quantity("xi_1_plus", right.dec.eigenvalue(0), "eigensolver");

  std::vector<std::size_t> scan_nodes;
  std::vector<HalfLine> scan_left;
  std::vector<HalfLine> scan_right;
  if (options.scan_split_points) {
    const auto m = gen.weights();
    double cumulative = 0.0;
    std::size_t decile = 1;
    for (std::size_t i = 0; i < gen.size() && decile <= 9; ++i) {
      cumulative += m[i];
      if (cumulative >= mass * static_cast<double>(decile) / 10.0) {
        const std::size_t node = std::clamp<std::size_t>(i, 1, gen.size() - 2);
        if (scan_nodes.empty() || scan_nodes.back() != node) scan_nodes.push_back(node);
        while (decile <= 9 && cumulative >= mass * static_cast<double>(decile) / 10.0) ++decile;
      }
    }
    for (std::size_t node : scan_nodes) {
      scan_left.push_back(make_half(gen.restrict_to(0, node), l, mass));
      scan_right.push_back(make_half(gen.restrict_to(node + 1, gen.size()), l, mass));
    }
  }

  rep.curves.columns = {"index", "variance", "energy", "phi_a", "nash_rhs", "nash_slack",
                        "osc_bound", "osc_slack"};
  double worst_nash = kInfinity;
  double worst_osc = kInfinity;
  double worst_homogeneity = 0.0;
  double worst_scan = kInfinity;
  for (std::size_t idx = 0; idx < fs.size(); ++idx) {
    const auto& F = fs[idx];
    if (F.size() != gen.size()) throw InputError("whole-line Nash: function size mismatch");
    const double mean = mean_mu(gen, F);
    double variance = 0.0;
    double sup = 0.0;
    for (std::size_t i = 0; i < F.size(); ++i) {
      const double d = F[i] - mean;
      variance += gen.weights()[i] * d * d;
      sup = std::max(sup, std::fabs(d));
    }
    variance /= mass;
    const double energy = gen.dirichlet_energy(F) / mass;
    const SplitPhi phi = split_phi(left, right, F, j, l, q, mass);
    const double nash_rhs = std::pow(energy, 1.0 / p) * std::pow(phi.combined, 1.0 / q);
    const double nash_slack = relative_slack(variance, nash_rhs);
    const double osc_bound = 4.0 * sup * sup * moment_factor;
    const double osc_slack = relative_slack(phi.combined, osc_bound);
    worst_nash = std::min(worst_nash, nash_slack);
    worst_osc = std::min(worst_osc, osc_slack);
    rep.curves.add_row({static_cast<double>(idx), variance, energy, phi.combined, nash_rhs,
                        nash_slack, osc_bound, osc_slack});

    std::vector<double> doubled = F;
    for (double& v : doubled) v *= 2.0;
    const SplitPhi phi2 = split_phi(left, right, doubled, j, l, q, mass);
    if (phi.combined > 0.0 || phi2.combined > 0.0) {
      worst_homogeneity =
          std::max(worst_homogeneity, relative_difference(phi2.combined, 4.0 * phi.combined));
    }

    if (options.scan_split_points) {
      double best = kInfinity;
      for (std::size_t s = 0; s < scan_nodes.size(); ++s) {
        const SplitPhi ps = split_phi(scan_left[s], scan_right[s], F, scan_nodes[s], l, q, mass);
        best = std::min(best, ps.combined);
        const double rhs = std::pow(energy, 1.0 / p) * std::pow(ps.combined, 1.0 / q);
        worst_scan = std::min(worst_scan, relative_slack(variance, rhs));
      }
      if (idx == 0) rep.add_quantity("phi_inf_over_scan_first", best, "spectral");
    }
  }
  if (!fs.empty()) {
    rep.add_quantity("worst_nash_slack", worst_nash, "spectral");
    rep.add_quantity("worst_osc_slack", worst_osc, "spectral+recursion");
    rep.assert_that("nash_inequality", worst_nash >= -options.slack_tolerance, worst_nash,
                    -options.slack_tolerance, options.slack_tolerance,
                    "Var_mu(F) <= E(F,F)^{1/p} Phi_a(F)^{1/q}");
    rep.assert_that("osc_bound", worst_osc >= -options.slack_tolerance, worst_osc,
                    -options.slack_tolerance, options.slack_tolerance,
                    "Phi_a(F) <= 4 ||F - mu F||_inf^2 (M_-^{1/q} + M_+^{1/q})^q");
    rep.assert_that("phi_a_homogeneity", worst_homogeneity <= options.homogeneity_tolerance,
                    worst_homogeneity, 0.0, options.homogeneity_tolerance, "Phi_a(2F) = 4 Phi_a(F)");
    if (options.scan_split_points) {
      rep.add_quantity("worst_scan_slack", worst_scan, "spectral");
      rep.assert_that("nash_inequality_all_scan_points", worst_scan >= -options.slack_tolerance,
                      worst_scan, -options.slack_tolerance, options.slack_tolerance,
                      "split at each mu-decile");
    }
  }
  rep.runtime_seconds = seconds_since(start);
  return rep;
}

const char* to_string(DecayRegime regime) {
  return regime == DecayRegime::Polynomial ? "polynomial" : "exponential";
}

namespace {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms = 0.0;
};

LineFit least_squares(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - fit.intercept - fit.slope * x[i];
    ss += r * r;
  }
  fit.rms = std::sqrt(ss / n);
  return fit;
}

}  // namespace

DecayFit fit_decay(const SpectralDecomposition& dec, std::span<const double> f,
                   const DecayOptions& options) {
  if (dec.killed()) throw InputError("decay fit needs a reflected decomposition");
  if (options.points < 3 || !(options.t_min > 0.0) || !(options.t_max > options.t_min)) {
    throw InputError("decay window needs 0 < t_min < t_max and at least 3 points");
  }
  if (options.gap_guard && dec.size() > 1 &&
      options.t_max > options.gap_fraction / dec.eigenvalue(1)) {
    throw InputError("decay window t_max = " + format(options.t_max) +
                     " exceeds the truncation gap time " +
                     format(options.gap_fraction / dec.eigenvalue(1)) + " (0.5/xi_2)");
  }
  const auto m = dec.weights();
  double mass = 0.0;
  double mean = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    mass += m[i];
    mean += m[i] * f[i];
  }
  mean /= mass;
  std::vector<double> centered(f.begin(), f.end());
  for (double& v : centered) v -= mean;
  SpectralMeasure measure = spectral_weights(dec, centered);
  // Drop the constant mode.
  measure.atoms.erase(measure.atoms.begin());
  measure.masses.erase(measure.masses.begin());

  DecayFit fit;
  fit.times = log_spaced(options.t_min, options.t_max, options.points);
  std::vector<double> log_t, t_lin, log_v;
  for (double t : fit.times) {
    const double v = semigroup_norm_sq(measure, 2.0 * t) / mass;
    if (!(v > 1e-300)) {
      throw InputError("variance underflows below 1e-300 at t = " + format(t) +
                       "; shrink the decay window");
    }
    fit.variances.push_back(v);
    log_t.push_back(std::log(t));
    t_lin.push_back(t);
    log_v.push_back(std::log(v));
  }
  const LineFit poly = least_squares(log_t, log_v);
  const LineFit expo = least_squares(t_lin, log_v);
  fit.slope = poly.slope;
  fit.rate = -expo.slope;
  fit.polynomial_residual = poly.rms;
  fit.exponential_residual = expo.rms;
  fit.regime = poly.rms <= expo.rms ? DecayRegime::Polynomial : DecayRegime::Exponential;
  return fit;
}

VerificationReport verify_decay(const SpectralDecomposition& dec, std::span<const double> f,
                                double l, const DecayOptions& options) {
  const auto start = Clock::now();
  VerificationReport rep;
  rep.check = "verify-decay";
  rep.inputs = {{"l", l},
                {"unknowns", dec.size()},
                {"window_start_time", options.t_min},
                {"window_end_time", options.t_max},
                {"points", options.points},
                {"gap_guard", options.gap_guard}};
  rep.tolerances = {{"slope_slack", options.slope_slack}};
  const DecayFit fit = fit_decay(dec, f, options);
  rep.add_quantity("xi_1", dec.eigenvalue(0), "eigensolver");
  rep.add_quantity("xi_2", dec.eigenvalue(1), "eigensolver");
  rep.add_quantity("slope", fit.slope, "least-squares log-log");
  rep.add_quantity("exponential_rate", fit.rate, "least-squares log-linear");
  rep.add_quantity("polynomial_fit_rms", fit.polynomial_residual, "least-squares");
  rep.add_quantity("exponential_fit_rms", fit.exponential_residual, "least-squares");
  rep.notes.push_back(std::string("regime: ") + to_string(fit.regime));
  rep.curves.columns = {"time", "variance"};
  for (std::size_t i = 0; i < fit.times.size(); ++i) {
    rep.curves.add_row({fit.times[i], fit.variances[i]});
  }
  if (fit.regime == DecayRegime::Polynomial) {
    const double bound = -(l + 1.0) + options.slope_slack;
    rep.assert_that("decay_slope", fit.slope <= bound, fit.slope, bound, options.slope_slack,
                    "slope of log Var vs log t");
  } else {
    rep.notes.push_back("exponential regime: slope check not applicable");
  }
  rep.runtime_seconds = seconds_since(start);
  return rep;
}

const char* to_string(ThresholdClass c) {
  switch (c) {
    case ThresholdClass::Convergent: return "CONVERGENT";
    case ThresholdClass::Divergent: return "DIVERGENT";
    case ThresholdClass::Inconclusive: return "INCONCLUSIVE";
  }
  return "INCONCLUSIVE";
}

ThresholdClass classify_ladder(std::span<const double> values, const ThresholdOptions& options) {
  if (values.size() < 2) return ThresholdClass::Inconclusive;
  bool convergent = true;
  bool divergent = true;
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    if (!std::isfinite(values[i + 1]) || !(values[i] > 0.0)) {
      convergent = false;
      continue;
    }
    const double change = values[i + 1] / values[i] - 1.0;
    convergent = convergent && std::fabs(change) < options.convergent_change;
    divergent = divergent && change > options.divergent_growth;
  }
  if (convergent) return ThresholdClass::Convergent;
  if (divergent) return ThresholdClass::Divergent;
  return ThresholdClass::Inconclusive;
}

VerificationReport threshold_study(const DiffusionModel& model, const std::vector<double>& ls,
                                   const std::vector<double>& ladder,
                                   const ThresholdOptions& options,
                                   const std::vector<std::optional<ThresholdClass>>& expected) {
  const auto start = Clock::now();
  if (ls.empty() || ladder.size() < 2) throw InputError("threshold study needs l values and >= 2 truncations");
  VerificationReport rep;
  rep.check = "threshold-study";
  rep.inputs = {{"model", model.name},
                {"l_values", ls},
                {"truncations_x", ladder},
                {"inner_radius_x", options.inner_radius},
                {"spacing_x", options.spacing}};
  rep.tolerances = {{"convergent_change_relative", options.convergent_change},
                    {"divergent_growth_relative", options.divergent_growth}};
  rep.curves.columns = {"truncation_x"};
  for (double l : ls) rep.curves.columns.push_back("phi_l" + format(l));

  std::vector<std::vector<double>> values(ls.size());
  for (double L : ladder) {
    const auto [left, right] =
        build_exterior_generators(model, options.inner_radius, L, options.spacing);
    const SpectralDecomposition dl = eigendecompose(left);
    const SpectralDecomposition dr = eigendecompose(right);
    const SpectralMeasure measure =
        SpectralMeasure::merge(spectral_weights(dl, std::vector<double>(left.size(), 1.0)),
                               spectral_weights(dr, std::vector<double>(right.size(), 1.0)));
    std::vector<double> row{L};
    for (std::size_t i = 0; i < ls.size(); ++i) {
      const double phi = nash_functional(measure, ls[i]);
      values[i].push_back(phi);
      row.push_back(phi);
      rep.add_quantity("phi_l" + format(ls[i]) + "_L" + format(L), phi, "spectral");
      const double l = ls[i];
      if (l == std::floor(l) && l <= 64.0) {
        const auto k = static_cast<std::size_t>(l) + 1;
        const double recursion = (moment_recursion(left, k).integrated(k) +
                                  moment_recursion(right, k).integrated(k)) /
                                 std::tgamma(l + 2.0);
        rep.add_quantity("phi_l" + format(l) + "_L" + format(L), recursion, "recursion");
        rep.assert_that("routes_agree_l" + format(l) + "_L" + format(L),
                        relatively_close(phi, recursion, 1e-6), phi, recursion, 1e-6,
                        "spectral sum vs moment recursion");
      }
    }
    rep.curves.add_row(std::move(row));
  }
  for (std::size_t i = 0; i < ls.size(); ++i) {
    const ThresholdClass c = classify_ladder(values[i], options);
    rep.notes.push_back("l = " + format(ls[i]) + ": " + to_string(c));
    rep.add_quantity("growth_ratio_last_l" + format(ls[i]),
                     values[i].back() / values[i][values[i].size() - 2], "ladder");
    if (i < expected.size() && expected[i]) {
      rep.assert_that("classification_l" + format(ls[i]), c == *expected[i],
                      static_cast<double>(c), static_cast<double>(*expected[i]), 0.0,
                      std::string("observed ") + to_string(c) + ", expected " +
                          to_string(*expected[i]));
    }
  }
  rep.runtime_seconds = seconds_since(start);
  return rep;
}

}  // namespace hitspec
