#include "hitspec/discretize.hpp"

#include <cmath>
#include <sstream>

#include "hitspec/error.hpp"

namespace hitspec {

const char* to_string(Boundary b) {
  return b == Boundary::Absorbing ? "absorbing" : "reflecting";
}

namespace {

std::size_t reflecting_sides(Boundary lower, Boundary upper) {
  return (lower == Boundary::Reflecting ? 1u : 0u) + (upper == Boundary::Reflecting ? 1u : 0u);
}

std::string describe_segment(double a, double b) {
  std::ostringstream os;
  os.precision(17);
  os << "[" << a << ", " << b << "]";
  return os.str();
}

}  // namespace

Grid make_grid(Interval interval, std::size_t unknowns, Boundary lower, Boundary upper) {
  if (!interval.bounded() || !(interval.lower < interval.upper)) {
    throw InputError("grid needs a bounded non-empty interval");
  }
  if (unknowns < 3) throw InputError("grid needs at least 3 unknowns");
  // segments = unknowns + 1 - (number of reflecting sides)
  const std::size_t segments = unknowns + 1 - reflecting_sides(lower, upper);
  Grid g;
  g.interval = interval;
  g.lower = lower;
  g.upper = upper;
  g.spacing = interval.length() / static_cast<double>(segments);
  const std::size_t first = lower == Boundary::Reflecting ? 0 : 1;
  g.nodes.reserve(unknowns);
  for (std::size_t k = 0; k < unknowns; ++k) {
    const std::size_t index = first + k;
    g.nodes.push_back(index == segments ? interval.upper
                                        : interval.lower + static_cast<double>(index) * g.spacing);
  }
  return g;
}

GeneratorMatrix::GeneratorMatrix(Grid grid, std::vector<double> weights,
                                 std::vector<double> conductances, std::string model_name)
    : grid_(std::move(grid)),
      weights_(std::move(weights)),
      conductances_(std::move(conductances)),
      model_name_(std::move(model_name)) {
  if (weights_.size() != grid_.size() || conductances_.size() != weights_.size() + 1) {
    throw InputError("generator: inconsistent weight/conductance sizes");
  }
  for (double m : weights_) {
    if (!(m > 0.0) || !std::isfinite(m)) throw DiscretizationError("generator: non-positive speed weight");
  }
  for (std::size_t e = 1; e + 1 < conductances_.size(); ++e) {
    if (!(conductances_[e] > 0.0) || !std::isfinite(conductances_[e])) {
      throw DiscretizationError("generator: non-positive interior conductance");
    }
  }
}

double GeneratorMatrix::diagonal(std::size_t i) const {
  return -(conductances_[i] + conductances_[i + 1]) / weights_[i];
}

double GeneratorMatrix::upper(std::size_t i) const { return conductances_[i + 1] / weights_[i]; }

double GeneratorMatrix::lower(std::size_t i) const {
  return conductances_[i + 1] / weights_[i + 1];
}

std::vector<double> GeneratorMatrix::apply(std::span<const double> f) const {
  const std::size_t n = size();
  if (f.size() != n) throw InputError("generator apply: size mismatch");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double left = i > 0 ? f[i - 1] : 0.0;
    const double right = i + 1 < n ? f[i + 1] : 0.0;
    out[i] = (conductances_[i + 1] * (right - f[i]) - conductances_[i] * (f[i] - left)) / weights_[i];
  }
  return out;
}

double GeneratorMatrix::dirichlet_energy(std::span<const double> f) const {
  const std::size_t n = size();
  if (f.size() != n) throw InputError("dirichlet_energy: size mismatch");
  double sum = conductances_[0] * f[0] * f[0] + conductances_[n] * f[n - 1] * f[n - 1];
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double d = f[i + 1] - f[i];
    sum += conductances_[i + 1] * d * d;
  }
  return sum;
}

double GeneratorMatrix::inner(std::span<const double> f, std::span<const double> g) const {
  if (f.size() != size() || g.size() != size()) throw InputError("inner: size mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < size(); ++i) sum += weights_[i] * f[i] * g[i];
  return sum;
}

double GeneratorMatrix::total_mass() const {
  double sum = 0.0;
  for (double m : weights_) sum += m;
  return sum;
}

std::vector<double> GeneratorMatrix::symmetric_diagonal() const {
  std::vector<double> d(size());
  for (std::size_t i = 0; i < size(); ++i) d[i] = -diagonal(i);
  return d;
}

std::vector<double> GeneratorMatrix::symmetric_offdiagonal() const {
  std::vector<double> e(size() > 0 ? size() - 1 : 0);
  for (std::size_t i = 0; i + 1 < size(); ++i) {
    e[i] = -conductances_[i + 1] / std::sqrt(weights_[i] * weights_[i + 1]);
  }
  return e;
}

GeneratorMatrix GeneratorMatrix::restrict_to(std::size_t first, std::size_t last) const {
  if (!(first < last) || last > size()) throw InputError("restrict_to: bad node range");
  Grid g;
  g.spacing = grid_.spacing;
  g.lower = first == 0 ? grid_.lower : Boundary::Absorbing;
  g.upper = last == size() ? grid_.upper : Boundary::Absorbing;
  g.interval.lower = first == 0 ? grid_.interval.lower : grid_.nodes[first - 1];
  g.interval.upper = last == size() ? grid_.interval.upper : grid_.nodes[last];
  g.nodes.assign(grid_.nodes.begin() + static_cast<std::ptrdiff_t>(first),
                 grid_.nodes.begin() + static_cast<std::ptrdiff_t>(last));
  std::vector<double> w(weights_.begin() + static_cast<std::ptrdiff_t>(first),
                        weights_.begin() + static_cast<std::ptrdiff_t>(last));
  std::vector<double> c(conductances_.begin() + static_cast<std::ptrdiff_t>(first),
                        conductances_.begin() + static_cast<std::ptrdiff_t>(last) + 1);
  return GeneratorMatrix(std::move(g), std::move(w), std::move(c), model_name_);
}

GeneratorMatrix build_generator(const DiffusionModel& model, Interval interval,
                                std::size_t unknowns, Boundary lower, Boundary upper) {
  if (!(model.natural_domain.contains_closed(interval.lower) &&
        model.natural_domain.contains_closed(interval.upper))) {
    throw InputError(model.name + ": interval " + describe_segment(interval.lower, interval.upper) +
                     " leaves the natural domain");
  }
  Grid grid = make_grid(interval, unknowns, lower, upper);
  const ScaleSpeed densities = scale_speed_from_sde(model);
  const std::size_t n = grid.size();
  const double h = grid.spacing;

  std::vector<double> weights(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = grid.nodes[i];
    // Half cells at reflecting endpoints, midpoint rule everywhere.
    if (i == 0 && lower == Boundary::Reflecting) {
      weights[i] = 0.5 * h * densities.speed_density(x + 0.25 * h);
    } else if (i + 1 == n && upper == Boundary::Reflecting) {
      weights[i] = 0.5 * h * densities.speed_density(x - 0.25 * h);
    } else {
      weights[i] = h * densities.speed_density(x);
    }
  }

  std::vector<double> conductances(n + 1, 0.0);
  auto conductance = [&](double a, double b) {
    double ds = 0.0;
    try {
      ds = densities.scale_increment(a, b);
    } catch (const ModelDomainError& e) {
      throw DiscretizationError(model.name + ": scale increment on " + describe_segment(a, b) +
                                " failed (" + e.what() + "); boundary may be inaccessible");
    }
    if (!(ds > 0.0) || !std::isfinite(ds)) {
      throw DiscretizationError(model.name + ": non-finite scale increment on " +
                                describe_segment(a, b) + "; boundary may be inaccessible");
    }
    return 1.0 / ds;
  };
  if (lower == Boundary::Absorbing) conductances[0] = conductance(interval.lower, grid.nodes[0]);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    conductances[i + 1] = conductance(grid.nodes[i], grid.nodes[i + 1]);
  }
  if (upper == Boundary::Absorbing) conductances[n] = conductance(grid.nodes[n - 1], interval.upper);

  return GeneratorMatrix(std::move(grid), std::move(weights), std::move(conductances), model.name);
}

GeneratorMatrix build_killed_generator(const DiffusionModel& model, Interval interval,
                                       std::size_t n) {
  return build_generator(model, interval, n, Boundary::Absorbing, Boundary::Absorbing);
}

GeneratorMatrix build_reflected_generator(const DiffusionModel& model, Interval interval,
                                          std::size_t n) {
  return build_generator(model, interval, n, Boundary::Reflecting, Boundary::Reflecting);
}

std::size_t unknowns_for_spacing(Interval interval, double spacing, Boundary lower,
                                 Boundary upper) {
  if (!(spacing > 0.0)) throw InputError("grid spacing must be positive");
  const double segments = std::round(interval.length() / spacing);
  if (segments < 2.0) throw InputError("grid spacing too coarse for the interval");
  return static_cast<std::size_t>(segments) + reflecting_sides(lower, upper) - 1;
}

std::pair<GeneratorMatrix, GeneratorMatrix> build_exterior_generators(const DiffusionModel& model,
                                                                      double inner, double radius,
                                                                      double spacing) {
  if (!(0.0 <= inner && inner < radius)) throw InputError("exterior domain needs 0 <= inner < radius");
  const Interval left{-radius, -inner};
  const Interval right{inner, radius};
  const std::size_t n_left =
      unknowns_for_spacing(left, spacing, Boundary::Reflecting, Boundary::Absorbing);
  const std::size_t n_right =
      unknowns_for_spacing(right, spacing, Boundary::Absorbing, Boundary::Reflecting);
  return {build_generator(model, left, n_left, Boundary::Reflecting, Boundary::Absorbing),
          build_generator(model, right, n_right, Boundary::Absorbing, Boundary::Reflecting)};
}

std::pair<GeneratorMatrix, GeneratorMatrix> split_at_node(const GeneratorMatrix& gen,
                                                          std::size_t node) {
  if (node == 0 || node + 1 >= gen.size()) {
    throw InputError("split node must leave unknowns on both sides");
  }
  return {gen.restrict_to(0, node), gen.restrict_to(node + 1, gen.size())};
}

}  // namespace hitspec
