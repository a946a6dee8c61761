#include "hitspec/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/special_functions/gamma.hpp>

#include "hitspec/error.hpp"

namespace hitspec {

SpectralDecomposition::SpectralDecomposition(std::vector<double> eigenvalues,
                                             std::vector<double> eigenvectors,
                                             std::vector<double> weights, bool killed)
    : eigenvalues_(std::move(eigenvalues)),
      eigenvectors_(std::move(eigenvectors)),
      weights_(std::move(weights)),
      killed_(killed) {
  if (weights_.size() != eigenvalues_.size() ||
      eigenvectors_.size() != eigenvalues_.size() * eigenvalues_.size()) {
    throw InputError("spectral decomposition: inconsistent sizes");
  }
}

std::vector<double> SpectralDecomposition::coefficients(std::span<const double> f) const {
  const std::size_t n = size();
  if (f.size() != n) throw InputError("coefficients: size mismatch");
  std::vector<double> mf(n);
  for (std::size_t i = 0; i < n; ++i) mf[i] = weights_[i] * f[i];
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double* e = eigenvectors_.data() + k * n;
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += mf[i] * e[i];
    out[k] = sum;
  }
  return out;
}

std::vector<double> SpectralDecomposition::synthesize(std::span<const double> coefficients) const {
  const std::size_t n = size();
  if (coefficients.size() != n) throw InputError("synthesize: size mismatch");
  std::vector<double> out(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const double c = coefficients[k];
    if (c == 0.0) continue;
    const double* e = eigenvectors_.data() + k * n;
    for (std::size_t i = 0; i < n; ++i) out[i] += c * e[i];
  }
  return out;
}

double SpectralDecomposition::orthonormality_residual(std::size_t stride) const {
  const std::size_t n = size();
  stride = std::max<std::size_t>(stride, 1);
  double worst = 0.0;
  for (std::size_t j = 0; j < n; j += stride) {
    const double* ej = eigenvectors_.data() + j * n;
    for (std::size_t k = j; k < n; k += stride) {
      const double* ek = eigenvectors_.data() + k * n;
      double sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) sum += weights_[i] * ej[i] * ek[i];
      worst = std::max(worst, std::fabs(sum - (j == k ? 1.0 : 0.0)));
    }
  }
  return worst;
}

SpectralDecomposition eigendecompose(const GeneratorMatrix& gen, const EigenSolverOptions& options) {
  const std::vector<double> d = gen.symmetric_diagonal();
  const std::vector<double> e = gen.symmetric_offdiagonal();
  EigenSolverOptions opts = options;
  opts.want_vectors = true;
  TridiagonalEigen eig = symmetric_tridiagonal_eigen(d, e, opts);

  const std::size_t n = gen.size();
  const auto m = gen.weights();
  std::vector<double> inv_sqrt_m(n);
  for (std::size_t i = 0; i < n; ++i) inv_sqrt_m[i] = 1.0 / std::sqrt(m[i]);

  std::vector<double> vectors = std::move(eig.vectors);
  for (std::size_t k = 0; k < n; ++k) {
    double* v = vectors.data() + k * n;
    double norm_sq = 0.0;
    std::size_t largest = 0;
    for (std::size_t i = 0; i < n; ++i) {
      v[i] *= inv_sqrt_m[i];
      norm_sq += m[i] * v[i] * v[i];
      if (std::fabs(v[i]) > std::fabs(v[largest])) largest = i;
    }
    // Unit m-norm, largest component positive.
    const double scale = std::copysign(1.0 / std::sqrt(norm_sq), v[largest]);
    for (std::size_t i = 0; i < n; ++i) v[i] *= scale;
  }
  return SpectralDecomposition(std::move(eig.values), std::move(vectors),
                               std::vector<double>(m.begin(), m.end()), gen.killed());
}

std::vector<double> generator_eigenvalues(const GeneratorMatrix& gen,
                                          const EigenSolverOptions& options) {
  EigenSolverOptions opts = options;
  opts.want_vectors = false;
  return symmetric_tridiagonal_eigen(gen.symmetric_diagonal(), gen.symmetric_offdiagonal(), opts)
      .values;
}

double SpectralMeasure::total() const {
  double sum = 0.0;
  for (double w : masses) sum += w;
  return sum;
}

SpectralMeasure SpectralMeasure::merge(const SpectralMeasure& a, const SpectralMeasure& b) {
  SpectralMeasure out = a;
  out.atoms.insert(out.atoms.end(), b.atoms.begin(), b.atoms.end());
  out.masses.insert(out.masses.end(), b.masses.begin(), b.masses.end());
  return out;
}

SpectralMeasure SpectralMeasure::evolved(double t) const {
  SpectralMeasure out = *this;
  for (std::size_t k = 0; k < size(); ++k) out.masses[k] *= std::exp(-2.0 * atoms[k] * t);
  return out;
}

SpectralMeasure SpectralMeasure::scaled(double factor) const {
  SpectralMeasure out = *this;
  for (double& w : out.masses) w *= factor;
  return out;
}

SpectralMeasure spectral_weights(const SpectralDecomposition& dec, std::span<const double> f) {
  for (double v : f) {
    if (!std::isfinite(v)) throw InputError("spectral_weights: test function not finite");
  }
  SpectralMeasure out;
  out.atoms.assign(dec.eigenvalues().begin(), dec.eigenvalues().end());
  out.masses = dec.coefficients(f);
  for (double& c : out.masses) c *= c;
  return out;
}

RateFunction RateFunction::constant() { return RateFunction(Kind::Constant, 0.0); }

RateFunction RateFunction::polynomial(double exponent) {
  if (!(exponent > 0.0) || !std::isfinite(exponent)) {
    throw InputError("polynomial rate needs exponent l > 0");
  }
  return RateFunction(Kind::Polynomial, exponent);
}

RateFunction RateFunction::exponential(double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) throw InputError("exponential rate needs lambda > 0");
  return RateFunction(Kind::Exponential, rate);
}

std::string RateFunction::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
    case Kind::Constant: os << "constant"; break;
    case Kind::Polynomial: os << "polynomial(l=" << parameter_ << ")"; break;
    case Kind::Exponential: os << "exponential(lambda=" << parameter_ << ")"; break;
  }
  return os.str();
}

double RateFunction::value(double t) const {
  switch (kind_) {
    case Kind::Constant: return 1.0;
    case Kind::Polynomial: return std::pow(t, parameter_);
    case Kind::Exponential: return std::exp(parameter_ * t);
  }
  return 0.0;
}

double RateFunction::primitive(double t) const {
  switch (kind_) {
    case Kind::Constant: return t;
    case Kind::Polynomial: return std::pow(t, parameter_ + 1.0) / (parameter_ + 1.0);
    case Kind::Exponential: return std::expm1(parameter_ * t) / parameter_;
  }
  return 0.0;
}

double RateFunction::laplace(double xi) const {
  switch (kind_) {
    case Kind::Constant:
      return xi > 0.0 ? 1.0 / xi : kInfinity;
    case Kind::Polynomial:
      return xi > 0.0 ? std::tgamma(parameter_ + 1.0) * std::pow(xi, -(parameter_ + 1.0))
                      : kInfinity;
    case Kind::Exponential:
      return xi > parameter_ ? 1.0 / (xi - parameter_) : kInfinity;
  }
  return kInfinity;
}

double RateFunction::laplace_segment(double xi, double a, double b) const {
  if (!(b > a)) return 0.0;
  switch (kind_) {
    case Kind::Constant:
    case Kind::Polynomial: {
      const double order = kind_ == Kind::Constant ? 1.0 : parameter_ + 1.0;
      if (xi <= 0.0) {
        if (std::isinf(b)) return kInfinity;
        return (std::pow(b, order) - std::pow(a, order)) / order;
      }
      // Gamma(order) times the difference of regularized incomplete gammas.
      const double scale = std::pow(xi, -order);
      if (std::isinf(b)) return boost::math::tgamma(order, xi * a) * scale;
      if (a == 0.0) return boost::math::tgamma_lower(order, xi * b) * scale;
      return (boost::math::tgamma(order, xi * a) - boost::math::tgamma(order, xi * b)) * scale;
    }
    case Kind::Exponential: {
      const double k = xi - parameter_;
      if (std::isinf(b)) return k > 0.0 ? std::exp(-k * a) / k : kInfinity;
      if (k == 0.0) return b - a;
      return (std::exp(-k * a) - std::exp(-k * b)) / k;
    }
  }
  return 0.0;
}

double RateFunction::polynomial_order() const {
  if (kind_ == Kind::Exponential) throw InputError("exponential rate has no polynomial order");
  return kind_ == Kind::Constant ? 0.0 : parameter_;
}

bool RateFunction::integer_order() const {
  if (kind_ == Kind::Exponential) return false;
  const double l = polynomial_order();
  return l == std::floor(l) && l <= 64.0;
}

double laplace_transform(const RateFunction& rate, double xi) { return rate.laplace(xi); }

double semigroup_norm_sq(const SpectralMeasure& measure, double t) {
  if (!(t >= 0.0)) throw InputError("semigroup_norm_sq: t must be non-negative");
  double sum = 0.0;
  for (std::size_t k = 0; k < measure.size(); ++k) {
    sum += std::exp(-measure.atoms[k] * t) * measure.masses[k];
  }
  return sum;
}

double semigroup_norm_sq(const SpectralDecomposition& dec, std::span<const double> f, double t) {
  return semigroup_norm_sq(spectral_weights(dec, f), t);
}

double spectral_functional(const SpectralMeasure& measure,
                           const std::function<double(double)>& phi) {
  double sum = 0.0;
  for (std::size_t k = 0; k < measure.size(); ++k) {
    const double w = measure.masses[k];
    if (!(w > 0.0)) continue;
    const double v = phi(measure.atoms[k]);
    if (std::isnan(v)) {
      std::ostringstream os;
      os.precision(17);
      os << "spectral_functional: phi undefined at xi = " << measure.atoms[k];
      throw InputError(os.str());
    }
    if (std::isinf(v) && v > 0.0) return kInfinity;
    sum += v * w;
  }
  return sum;
}

double spectral_functional(const SpectralDecomposition& dec, std::span<const double> f,
                           const std::function<double(double)>& phi) {
  return spectral_functional(spectral_weights(dec, f), phi);
}

double nash_functional(const SpectralMeasure& measure, double l) {
  const double order = l + 1.0;
  return spectral_functional(measure, [order](double xi) {
    return xi > 0.0 ? std::pow(xi, -order) : kInfinity;
  });
}

std::vector<double> log_spaced(double first, double last, std::size_t count) {
  if (!(first > 0.0) || !(last > first) || count < 2) {
    throw InputError("log_spaced: need 0 < first < last and count >= 2");
  }
  std::vector<double> out(count);
  const double a = std::log(first);
  const double b = std::log(last);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
  }
  out.front() = first;
  out.back() = last;
  return out;
}

}  // namespace hitspec
