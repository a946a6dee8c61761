#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hitspec {

using RealFunction = std::function<double(double)>;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct Interval {
  double lower = 0.0;
  double upper = 0.0;

  double length() const { return upper - lower; }
  bool contains(double x) const { return lower < x && x < upper; }
  bool contains_closed(double x) const { return lower <= x && x <= upper; }
  bool bounded() const { return std::isfinite(lower) && std::isfinite(upper); }
};

// One-dimensional diffusion dX = b(X) dt + sigma(X) dW with generator
// (1/2) sigma^2 f'' + b f' = d/dm d/dS.
struct DiffusionModel {
  std::string name;
  RealFunction drift;
  RealFunction diffusion;
  double reference_point = 0.0;
  // Closed forms are optional; when present s'(x) m'(x) sigma(x)^2 / 2 = 1.
  std::optional<RealFunction> scale_density;
  std::optional<RealFunction> speed_density;
  Interval natural_domain{-kInfinity, kInfinity};
  // Human-readable coefficient descriptions for reports.
  std::string drift_text;
  std::string diffusion_text;
};

struct KnownValue {
  std::string name;
  double value = 0.0;
  std::string oracle;
};

struct ModelCatalogEntry {
  DiffusionModel model;
  std::vector<std::string> tags;
  std::vector<KnownValue> known_values;
};

// Natural scale and speed densities of a model, either closed form or
// obtained from the SDE coefficients by quadrature:
//   s'(x) = exp(-int_{x0}^x 2b/sigma^2),  m'(x) = 2 / (sigma^2 s').
class ScaleSpeed {
 public:
  ScaleSpeed(DiffusionModel model, bool use_closed_form);

  double scale_density(double x) const;
  double speed_density(double x) const;
  // int_a^b s'(y) dy, i.e. S(b) - S(a).
  double scale_increment(double a, double b) const;
  // S(x) with S(x0) = 0.
  double scale(double x) const;
  // m((a, b)).
  double speed_mass(double a, double b) const;

  bool closed_form() const { return closed_form_; }
  const DiffusionModel& model() const { return model_; }

 private:
  double log_scale_density(double x) const;
  double log_scale_step(double a, double b) const;

  DiffusionModel model_;
  bool closed_form_;
};

// Throws ModelDomainError when 2b/sigma^2 is not integrable on the way.
ScaleSpeed scale_speed_from_sde(const DiffusionModel& model, bool prefer_closed_form = true);

// m'/m(interval) restricted to the interval.
struct InvariantDensity {
  Interval interval;
  double mass = 0.0;  // m(interval), unnormalized
  ScaleSpeed densities;

  double operator()(double x) const;
};

// Throws NotNormalizableError when m(interval) diverges.
InvariantDensity invariant_probability(const DiffusionModel& model, Interval interval);

DiffusionModel make_brownian_model();          // "BM2": b = 0, sigma = sqrt(2)
DiffusionModel make_ornstein_uhlenbeck_model();  // "OU":  b = -x, sigma = sqrt(2)
DiffusionModel make_heavy_tailed_model(double r);  // "HT(r)": b = -r x/(1+x^2), sigma = 1

// Coefficients given as expressions in x (see Expression).
DiffusionModel make_expression_model(std::string name, std::string_view drift,
                                     std::string_view diffusion, Interval domain,
                                     double reference_point);

// Stable ordering: BM2, OU, HT(3), HT(4), HT(6).
const std::vector<ModelCatalogEntry>& model_catalog();
// Throws InputError for unknown names.
const ModelCatalogEntry& find_model(std::string_view name);
std::vector<const ModelCatalogEntry*> models_with_tag(std::string_view tag);

// x b(x) + r x^2/(1+x^2); non-positive where the drift condition holds.
double veretennikov_margin(const DiffusionModel& model, double r, double x);

}  // namespace hitspec
