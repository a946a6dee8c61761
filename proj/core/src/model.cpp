#include "hitspec/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "hitspec/error.hpp"
#include "hitspec/expression.hpp"
#include "hitspec/quadrature.hpp"

namespace hitspec {

namespace {

constexpr double kScaleTolerance = 1e-10;

std::string format_point(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

ScaleSpeed::ScaleSpeed(DiffusionModel model, bool use_closed_form)
    : model_(std::move(model)),
      closed_form_(use_closed_form && model_.scale_density && model_.speed_density) {}

double ScaleSpeed::log_scale_step(double a, double b) const {
  if (a == b) return 0.0;
  auto integrand = [this](double y) {
    const double sigma = model_.diffusion(y);
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
      throw ModelDomainError(model_.name + ": diffusion coefficient not positive at x = " +
                             format_point(y));
    }
    const double value = 2.0 * model_.drift(y) / (sigma * sigma);
    if (!std::isfinite(value)) {
      throw ModelDomainError(model_.name + ": 2b/sigma^2 not finite at x = " + format_point(y));
    }
    return value;
  };
  const QuadratureResult r = integrate(integrand, a, b, kScaleTolerance);
  if (!std::isfinite(r.value)) {
    throw ModelDomainError(model_.name + ": 2b/sigma^2 not integrable on [" + format_point(a) +
                           ", " + format_point(b) + "]");
  }
  return -r.value;
}

double ScaleSpeed::log_scale_density(double x) const {
  return log_scale_step(model_.reference_point, x);
}

double ScaleSpeed::scale_density(double x) const {
  if (closed_form_) return (*model_.scale_density)(x);
  return std::exp(log_scale_density(x));
}

double ScaleSpeed::speed_density(double x) const {
  if (closed_form_) return (*model_.speed_density)(x);
  const double sigma = model_.diffusion(x);
  if (!(sigma > 0.0)) {
    throw ModelDomainError(model_.name + ": diffusion coefficient not positive at x = " +
                           format_point(x));
  }
  return 2.0 * std::exp(-log_scale_density(x)) / (sigma * sigma);
}

double ScaleSpeed::scale_increment(double a, double b) const {
  if (a == b) return 0.0;
  QuadratureResult r;
  if (closed_form_) {
    r = integrate(*model_.scale_density, a, b, kScaleTolerance);
  } else {
    // Anchor at a so the inner integrals run over the short segment only.
    const double log_anchor = log_scale_density(a);
    r = integrate([&](double y) { return std::exp(log_anchor + log_scale_step(a, y)); }, a, b,
                  kScaleTolerance);
  }
  if (!std::isfinite(r.value)) {
    throw ModelDomainError(model_.name + ": scale increment not finite on [" + format_point(a) +
                           ", " + format_point(b) + "]");
  }
  return r.value;
}

double ScaleSpeed::scale(double x) const { return scale_increment(model_.reference_point, x); }

double ScaleSpeed::speed_mass(double a, double b) const {
  if (a == b) return 0.0;
  QuadratureResult r;
  if (closed_form_) {
    r = integrate(*model_.speed_density, a, b, kScaleTolerance);
  } else {
    r = integrate([this](double y) { return speed_density(y); }, a, b, kScaleTolerance);
  }
  if (!std::isfinite(r.value) || r.error_estimate > 1e-6 * std::fabs(r.value)) {
    throw NotNormalizableError(model_.name + ": speed measure not finite on (" + format_point(a) +
                               ", " + format_point(b) + ")");
  }
  return r.value;
}

ScaleSpeed scale_speed_from_sde(const DiffusionModel& model, bool prefer_closed_form) {
  if (!model.drift || !model.diffusion) {
    throw ModelDomainError(model.name + ": missing drift or diffusion coefficient");
  }
  if (!model.natural_domain.contains(model.reference_point)) {
    throw ModelDomainError(model.name + ": reference point outside the natural domain");
  }
  ScaleSpeed out(model, prefer_closed_form);
  // Probe the reference point so configuration errors surface immediately.
  if (!(out.scale_density(model.reference_point) > 0.0) ||
      !(out.speed_density(model.reference_point) > 0.0)) {
    throw ModelDomainError(model.name + ": densities not positive at the reference point");
  }
  return out;
}

double InvariantDensity::operator()(double x) const {
  if (!interval.contains_closed(x)) return 0.0;
  return densities.speed_density(x) / mass;
}

InvariantDensity invariant_probability(const DiffusionModel& model, Interval interval) {
  if (!(interval.lower < interval.upper)) throw InputError("invariant_probability: empty interval");
  ScaleSpeed densities = scale_speed_from_sde(model);
  double mass = 0.0;
  try {
    mass = densities.speed_mass(interval.lower, interval.upper);
  } catch (const ModelDomainError&) {
    throw NotNormalizableError(model.name + ": speed measure not finite on the interval");
  }
  if (!(mass > 0.0) || !std::isfinite(mass)) {
    throw NotNormalizableError(model.name + ": speed measure not finite on the interval");
  }
  return InvariantDensity{interval, mass, std::move(densities)};
}

DiffusionModel make_brownian_model() {
  DiffusionModel m;
  m.name = "BM2";
  m.drift = [](double) { return 0.0; };
  m.diffusion = [](double) { return std::numbers::sqrt2; };
  m.scale_density = [](double) { return 1.0; };
  m.speed_density = [](double) { return 1.0; };
  m.drift_text = "0";
  m.diffusion_text = "sqrt(2)";
  return m;
}

DiffusionModel make_ornstein_uhlenbeck_model() {
  DiffusionModel m;
  m.name = "OU";
  m.drift = [](double x) { return -x; };
  m.diffusion = [](double) { return std::numbers::sqrt2; };
  m.scale_density = [](double x) { return std::exp(0.5 * x * x); };
  m.speed_density = [](double x) { return std::exp(-0.5 * x * x); };
  m.drift_text = "-x";
  m.diffusion_text = "sqrt(2)";
  return m;
}

DiffusionModel make_heavy_tailed_model(double r) {
  if (!(r > 0.5)) throw InputError("heavy-tailed model needs r > 1/2");
  DiffusionModel m;
  std::ostringstream name;
  name << "HT(" << r << ")";
  m.name = name.str();
  m.drift = [r](double x) { return -r * x / (1.0 + x * x); };
  m.diffusion = [](double) { return 1.0; };
  m.scale_density = [r](double x) { return std::pow(1.0 + x * x, r); };
  m.speed_density = [r](double x) { return 2.0 * std::pow(1.0 + x * x, -r); };
  std::ostringstream drift;
  drift << "-" << r << "*x/(1+x^2)";
  m.drift_text = drift.str();
  m.diffusion_text = "1";
  return m;
}

DiffusionModel make_expression_model(std::string name, std::string_view drift,
                                     std::string_view diffusion, Interval domain,
                                     double reference_point) {
  const Expression b = Expression::parse(drift);
  const Expression sigma = Expression::parse(diffusion);
  DiffusionModel m;
  m.name = std::move(name);
  m.drift = b;
  m.diffusion = sigma;
  m.natural_domain = domain;
  m.reference_point = reference_point;
  m.drift_text = b.text();
  m.diffusion_text = sigma.text();
  if (!domain.contains(reference_point)) {
    throw ModelDomainError(m.name + ": reference point outside the natural domain");
  }
  return m;
}

namespace {

ModelCatalogEntry heavy_tailed_entry(double r) {
  ModelCatalogEntry e{make_heavy_tailed_model(r), {"heavy-tail", "ergodic", "closed-form"}, {}};
  const double line_mass = 2.0 * std::sqrt(std::numbers::pi) * std::tgamma(r - 0.5) / std::tgamma(r);
  e.known_values = {
      {"speed_mass_whole_line", line_mass,
       "closed form 2 sqrt(pi) Gamma(r-1/2)/Gamma(r) of int 2(1+x^2)^-r"},
      {"stationary_moment_order_bound", r - 0.5,
       "E_mu tau^p finite for p < r - 1/2 (tail |x|^(2p) against density |x|^(-2r))"},
      {"pointwise_moment_nonexistence_order", r + 0.5,
       "E_x tau^p infinite for p > r - d/2 + 1 with d = 1"},
  };
  return e;
}

std::vector<ModelCatalogEntry> build_catalog() {
  std::vector<ModelCatalogEntry> out;
  out.push_back({make_brownian_model(),
                 {"brownian", "closed-form", "bounded-domain"},
                 {{"killed_unit_interval_first_eigenvalue", std::numbers::pi * std::numbers::pi,
                   "Sturm-Liouville closed form k^2 pi^2 on (0,1)"},
                  {"mean_exit_time_from_half", 0.125, "solve v'' = -1, v(0) = v(1) = 0"},
                  {"second_exit_moment_from_half", 5.0 / 192.0,
                   "solve v'' = -2 v_1; v_2 = x(1 - 2x^2 + x^3)/12"},
                  {"integrated_mean_exit_time", 1.0 / 12.0, "int_0^1 x(1-x)/2 dx"},
                  {"integrated_half_second_moment", 1.0 / 120.0, "int_0^1 v_2/2 dx"}}});
  out.push_back({make_ornstein_uhlenbeck_model(),
                 {"gaussian", "spectral-gap", "closed-form"},
                 {{"speed_mass_whole_line", std::sqrt(2.0 * std::numbers::pi),
                   "Gaussian integral of exp(-x^2/2)"},
                  {"spectral_gap", 1.0, "Hermite spectrum {0, 1, 2, ...}"}}});
  out.push_back(heavy_tailed_entry(3.0));
  out.push_back(heavy_tailed_entry(4.0));
  out.push_back(heavy_tailed_entry(6.0));
  return out;
}

}  // namespace

const std::vector<ModelCatalogEntry>& model_catalog() {
  static const std::vector<ModelCatalogEntry> catalog = build_catalog();
  return catalog;
}

const ModelCatalogEntry& find_model(std::string_view name) {
  for (const auto& entry : model_catalog()) {
    if (entry.model.name == name) return entry;
  }
  throw InputError("unknown model '" + std::string(name) + "'");
}

std::vector<const ModelCatalogEntry*> models_with_tag(std::string_view tag) {
  std::vector<const ModelCatalogEntry*> out;
  for (const auto& entry : model_catalog()) {
    if (std::find(entry.tags.begin(), entry.tags.end(), tag) != entry.tags.end()) {
      out.push_back(&entry);
    }
  }
  return out;
}

double veretennikov_margin(const DiffusionModel& model, double r, double x) {
  return x * model.drift(x) + r * x * x / (1.0 + x * x);
}

}  // namespace hitspec
