#include "hitspec/moments.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hitspec/error.hpp"

namespace hitspec {

double MomentTable::integrated(std::size_t k) const {
  const auto vk = v(k);
  double sum = 0.0;
  for (std::size_t i = 0; i < vk.size(); ++i) sum += weights[i] * vk[i];
  return sum;
}

double MomentTable::at(std::size_t k, double x) const {
  const auto vk = v(k);
  if (!interval.contains_closed(x)) throw InputError("MomentTable::at: x outside the interval");
  // Abscissae including absorbing ghost endpoints.
  std::vector<double> xs;
  std::vector<double> ys;
  xs.reserve(nodes.size() + 2);
  ys.reserve(nodes.size() + 2);
  if (lower == Boundary::Absorbing) {
    xs.push_back(interval.lower);
    ys.push_back(0.0);
  }
  xs.insert(xs.end(), nodes.begin(), nodes.end());
  ys.insert(ys.end(), vk.begin(), vk.end());
  if (upper == Boundary::Absorbing) {
    xs.push_back(interval.upper);
    ys.push_back(0.0);
  }
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  const auto it = std::upper_bound(xs.begin(), xs.end(), x);
  const std::size_t j = static_cast<std::size_t>(it - xs.begin());
  const double t = (x - xs[j - 1]) / (xs[j] - xs[j - 1]);
  return (1.0 - t) * ys[j - 1] + t * ys[j];
}

GeneratorSolver::GeneratorSolver(const GeneratorMatrix& gen, double shift)
    : weights_(gen.weights().begin(), gen.weights().end()),
      conductances_(gen.conductances().begin(), gen.conductances().end()) {
  const std::size_t n = weights_.size();
  pivots_.resize(n);
  const auto& c = conductances_;
  // p_i = q_i + c_{i+1}, q_i = c_i q_{i-1} / p_{i-1} - shift m_i.
  double q = c[0] - shift * weights_[0];
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) q = c[i] * q / pivots_[i - 1] - shift * weights_[i];
    const double p = q + c[i + 1];
    pivots_[i] = p;
    if (p == 0.0 || !std::isfinite(p)) {
      singular_ = true;
      break;
    }
    if (p < 0.0) ++negative_pivots_;
  }
}

std::vector<double> GeneratorSolver::solve(std::span<const double> g) const {
  const std::size_t n = weights_.size();
  if (g.size() != n) throw InputError("GeneratorSolver::solve: size mismatch");
  if (singular_) {
    throw NumericError("generator solve: singular system (no absorbing side or shift at an eigenvalue)");
  }
  const auto& c = conductances_;
  std::vector<double> z(n);
  z[0] = weights_[0] * g[0];
  for (std::size_t i = 1; i < n; ++i) z[i] = weights_[i] * g[i] + c[i] * z[i - 1] / pivots_[i - 1];
  std::vector<double> u(n);
  u[n - 1] = z[n - 1] / pivots_[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) u[i] = (z[i] + c[i + 1] * u[i + 1]) / pivots_[i];
  return u;
}

std::vector<std::vector<double>> modulated_recursion(const GeneratorMatrix& gen,
                                                     std::span<const double> f, std::size_t order) {
  if (!gen.killed()) throw InputError("moment recursion needs an absorbing side");
  if (f.size() != gen.size()) throw InputError("moment recursion: size mismatch");
  const GeneratorSolver solver(gen);
  if (!solver.positive_definite()) {
    throw NumericError("moment recursion: -L is not positive definite");
  }
  std::vector<std::vector<double>> v;
  v.reserve(order + 1);
  v.emplace_back(f.begin(), f.end());
  for (std::size_t k = 1; k <= order; ++k) {
    std::vector<double> rhs = v.back();
    for (double& x : rhs) x *= static_cast<double>(k);
    v.push_back(solver.solve(rhs));
  }
  return v;
}

MomentTable moment_recursion(const GeneratorMatrix& gen, std::size_t order) {
  if (order < 1) throw InputError("moment recursion needs order >= 1");
  const std::vector<double> ones(gen.size(), 1.0);
  MomentTable t;
  t.moments = modulated_recursion(gen, ones, order);
  t.nodes.assign(gen.nodes().begin(), gen.nodes().end());
  t.weights.assign(gen.weights().begin(), gen.weights().end());
  t.model_name = gen.model_name();
  t.interval = gen.grid().interval;
  t.lower = gen.grid().lower;
  t.upper = gen.grid().upper;
  return t;
}

double resolvent_pairing(const GeneratorMatrix& gen, std::span<const double> f,
                         const RateFunction& rate) {
  if (!gen.killed()) throw InputError("resolvent pairing needs an absorbing side");
  if (rate.kind() == RateFunction::Kind::Exponential) {
    const GeneratorSolver solver(gen, rate.parameter());
    // lambda >= xi_1: E e^{lambda tau} diverges and so does the pairing.
    if (!solver.positive_definite()) return kInfinity;
    const std::vector<double> u = solver.solve(f);
    return gen.inner(f, u);
  }
  if (!rate.integer_order()) {
    throw InputError("resolvent pairing: fractional order " + rate.describe() +
                     " has no linear-solve route");
  }
  const auto l = static_cast<std::size_t>(rate.polynomial_order());
  const auto v = modulated_recursion(gen, f, l + 1);
  return gen.inner(f, v[l + 1]) / static_cast<double>(l + 1);
}

double modulated_moment(const SpectralDecomposition& dec, std::span<const double> f,
                        const RateFunction& rate) {
  if (!dec.killed()) throw InputError("modulated moment needs a killed decomposition");
  return spectral_functional(spectral_weights(dec, f), [&rate](double xi) { return rate.laplace(xi); });
}

MeanModulatedMoment mean_modulated_moment(const GeneratorMatrix& gen, double l,
                                          const SpectralDecomposition* dec) {
  if (!(l >= 0.0)) throw InputError("mean modulated moment needs l >= 0");
  MeanModulatedMoment out;
  if (!gen.killed()) {
    out.value = kInfinity;
    out.route = "none";
    out.diagnostic = "no absorbing side: tau is infinite and every moment diverges";
    return out;
  }
  const std::vector<double> ones(gen.size(), 1.0);
  const double gamma = std::tgamma(l + 1.0);
  auto spectral = [&](const SpectralDecomposition& d) {
    return gamma * nash_functional(spectral_weights(d, ones), l);
  };
  const bool integer = l == std::floor(l) && l <= 64.0;
  if (integer) {
    const auto k = static_cast<std::size_t>(l) + 1;
    const MomentTable table = moment_recursion(gen, k);
    out.recursion_value = table.integrated(k) / static_cast<double>(k);
    out.value = *out.recursion_value;
    out.route = "recursion";
    if (dec != nullptr) out.spectral_value = spectral(*dec);
  } else {
    if (dec != nullptr) {
      out.spectral_value = spectral(*dec);
    } else {
      out.spectral_value = spectral(eigendecompose(gen));
    }
    out.value = *out.spectral_value;
    out.route = "spectral";
  }
  if (!std::isfinite(out.value)) {
    std::ostringstream os;
    os << "moment of order " << l + 1 << " not integrable: smallest eigenvalue vanishes";
    out.diagnostic = os.str();
  }
  return out;
}

}  // namespace hitspec
