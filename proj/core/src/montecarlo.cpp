#include "hitspec/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include <boost/math/special_functions/beta.hpp>

#include "hitspec/error.hpp"

namespace hitspec {

namespace {

// Bridge exits with exponent beyond this have probability below 2e-22.
constexpr double kBridgeExponentCutoff = 50.0;

std::string format(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// Calls job(i) for i in [0, count) on `workers` threads; job writes its own
// slot, so the result never depends on the worker count.
template <class Job>
void for_each_path(std::size_t count, std::size_t workers, Job job) {
  workers = std::max<std::size_t>(1, std::min(workers, count));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += workers) job(i);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::size_t steps_for(double horizon, double dt) {
  return static_cast<std::size_t>(std::llround(horizon / dt));
}

}  // namespace

void validate(const SimulationConfig& c) {
  if (!(c.step_time > 0.0) || !std::isfinite(c.step_time)) throw InputError("step_time must be positive");
  if (c.paths < 1) throw InputError("path count must be at least 1");
  if (!(c.truncation > 0.0)) throw InputError("truncation must be positive");
  if (!(c.max_time > 0.0)) throw InputError("max_time must be positive");
  if (!(c.noise_scale >= 0.0)) throw InputError("noise_scale must be non-negative");
  if (!c.model.drift || !c.model.diffusion) throw InputError("model has no coefficients");
}

Region Region::interval(double lower, double upper) {
  if (!(lower < upper)) throw InputError("region interval needs lower < upper");
  return Region(lower, upper, false);
}

Region Region::exterior(double radius) {
  if (!(radius >= 0.0)) throw InputError("exterior region needs radius >= 0");
  return Region(-radius, radius, true);
}

bool Region::contains(double x) const {
  if (exterior_) return x < lower_ || x > upper_;
  return lower_ < x && x < upper_;
}

double Region::bridge_exit_probability(double x, double y, double sigma, double dt) const {
  const double var = sigma * sigma * dt;
  if (!(var > 0.0)) return 0.0;
  auto crossing = [var](double d1, double d2) {
    const double exponent = 2.0 * d1 * d2 / var;
    return exponent > kBridgeExponentCutoff ? 0.0 : std::exp(-exponent);
  };
  if (exterior_) {
    return x > upper_ ? crossing(x - upper_, y - upper_) : crossing(lower_ - x, lower_ - y);
  }
  const double pa = crossing(x - lower_, y - lower_);
  const double pb = crossing(upper_ - x, upper_ - y);
  return 1.0 - (1.0 - pa) * (1.0 - pb);
}

std::optional<double> euler_step(const SimulationConfig& c, double x, RandomStream& rng) {
  const double b = c.model.drift(x);
  const double s = c.model.diffusion(x) * c.noise_scale;
  const double z = rng.normal();
  if (!std::isfinite(b) || !std::isfinite(s)) return std::nullopt;
  double y = x + b * c.step_time + s * std::sqrt(c.step_time) * z;
  if (!std::isfinite(y)) return std::nullopt;
  const double L = c.truncation;
  if (std::isfinite(L)) {
    for (int fold = 0; fold < 64 && (y > L || y < -L); ++fold) {
      y = y > L ? 2.0 * L - y : -2.0 * L - y;
    }
    if (y > L || y < -L) return std::nullopt;
  }
  return y;
}

PathObservables simulate_path(const SimulationConfig& config, double x0, double horizon,
                              std::uint64_t path_index, const std::optional<Region>& occupied) {
  validate(config);
  RandomStream rng(config.seed, path_index);
  PathObservables obs;
  double x = x0;
  obs.max_abs_position = std::fabs(x);
  const std::size_t steps = steps_for(horizon, config.step_time);
  double v_prev = occupied && occupied->contains(x) ? 1.0 : 0.0;
  for (std::size_t k = 0; k < steps; ++k) {
    const auto y = euler_step(config, x, rng);
    if (!y) {
      obs.error = true;
      break;
    }
    const double v = occupied && occupied->contains(*y) ? 1.0 : 0.0;
    obs.occupation_time += 0.5 * (v_prev + v) * config.step_time;
    obs.max_increment = std::max(obs.max_increment, std::fabs(*y - x));
    v_prev = v;
    x = *y;
    obs.max_abs_position = std::max(obs.max_abs_position, std::fabs(x));
    ++obs.steps;
  }
  obs.final_position = x;
  return obs;
}

StationarySampler::StationarySampler(const DiffusionModel& model, Interval interval,
                                     std::size_t cells, const std::optional<Region>& restrict_to)
    : interval_(interval) {
  if (!interval.bounded() || !(interval.lower < interval.upper) || cells < 1) {
    throw InputError("stationary sampler needs a bounded interval and at least one cell");
  }
  const ScaleSpeed densities = scale_speed_from_sde(model);
  const double h = interval.length() / static_cast<double>(cells);
  for (std::size_t i = 0; i <= cells; ++i) {
    edges_.push_back(i == cells ? interval.upper : interval.lower + h * static_cast<double>(i));
  }
  if (restrict_to) {
    for (double b : {restrict_to->lower(), restrict_to->upper()}) {
      if (interval.contains(b)) edges_.push_back(b);
    }
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  }
  cdf_.assign(1, 0.0);
  for (std::size_t i = 0; i + 1 < edges_.size(); ++i) {
    const double a = edges_[i];
    const double b = edges_[i + 1];
    double m = 0.0;
    if (!restrict_to || restrict_to->contains(0.5 * (a + b))) m = densities.speed_mass(a, b);
    cell_mass_.push_back(m);
    cdf_.push_back(cdf_.back() + m);
  }
  mass_ = cdf_.back();
  if (!(mass_ > 0.0)) throw InputError("stationary sampler: region has zero mass");
  for (double& c : cdf_) c /= mass_;
}

double StationarySampler::sample(double u) const {
  const double target = std::clamp(u, 0.0, 1.0);
  auto it = std::upper_bound(cdf_.begin() + 1, cdf_.end(), target);
  if (it == cdf_.end()) --it;
  const std::size_t cell = static_cast<std::size_t>(it - cdf_.begin()) - 1;
  const double lo = cdf_[cell];
  const double hi = cdf_[cell + 1];
  const double frac = hi > lo ? (target - lo) / (hi - lo) : 0.5;
  return edges_[cell] + frac * (edges_[cell + 1] - edges_[cell]);
}

double StationarySampler::probability(const Region& region) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < cell_mass_.size(); ++i) {
    if (region.contains(0.5 * (edges_[i] + edges_[i + 1]))) sum += cell_mass_[i];
  }
  return sum / mass_;
}

StartLaw StartLaw::at(double x) {
  StartLaw s;
  s.fixed = x;
  return s;
}

StartLaw StartLaw::from(StationarySampler sampler) {
  StartLaw s;
  s.stationary = std::move(sampler);
  return s;
}

std::string StartLaw::describe() const {
  if (fixed) return "x0 = " + format(*fixed);
  return "mu-distributed (inverse CDF on grid)";
}

double HittingSample::censored_fraction() const {
  return taus.empty() ? 0.0 : static_cast<double>(censored_count) / static_cast<double>(taus.size());
}

HittingSample sample_hitting_moments(const SimulationConfig& config, const Region& region,
                                     const StartLaw& start, const std::vector<std::size_t>& orders) {
  validate(config);
  if (!start.fixed && !start.stationary) throw InputError("start law is empty");
  if (start.fixed && !region.contains(*start.fixed)) {
    throw InputError("start point " + format(*start.fixed) + " is not inside G");
  }
  const std::size_t n = config.paths;
  const double dt = config.step_time;
  const std::size_t cap = steps_for(config.max_time, dt);
  HittingSample out;
  out.taus.assign(n, 0.0);
  out.censored.assign(n, 0);
  std::vector<std::uint8_t> errors(n, 0);
  out.start = start.describe();

  for_each_path(n, config.workers, [&](std::size_t i) {
    RandomStream rng(config.seed, i);
    double x = start.fixed ? *start.fixed : start.stationary->sample(rng.uniform());
    if (!region.contains(x)) {
      out.taus[i] = 0.0;
      return;
    }
    for (std::size_t k = 1; k <= cap; ++k) {
      const auto y = euler_step(config, x, rng);
      if (!y) {
        errors[i] = 1;
        out.taus[i] = static_cast<double>(k) * dt;
        return;
      }
      const double t = static_cast<double>(k) * dt;
      if (!region.contains(*y)) {
        out.taus[i] = t;
        return;
      }
      if (config.bridge_correction) {
        const double sigma = config.model.diffusion(x) * config.noise_scale;
        const double p = region.bridge_exit_probability(x, *y, sigma, dt);
        if (p > 0.0 && rng.uniform() < p) {
          out.taus[i] = t;
          return;
        }
      }
      x = *y;
    }
    out.taus[i] = static_cast<double>(cap) * dt;
    out.censored[i] = 1;
  });

  for (std::size_t i = 0; i < n; ++i) {
    out.errors += errors[i];
    out.censored_count += out.censored[i];
  }
  const std::size_t valid = n - out.errors;
  for (std::size_t order : orders) {
    MomentEstimate est;
    est.order = order;
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!errors[i]) sum += std::pow(out.taus[i], static_cast<double>(order));
    }
    est.mean = valid ? sum / static_cast<double>(valid) : 0.0;
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (errors[i]) continue;
      const double d = std::pow(out.taus[i], static_cast<double>(order)) - est.mean;
      ss += d * d;
    }
    est.standard_error = valid > 1 ? std::sqrt(ss / static_cast<double>(valid - 1) /
                                               static_cast<double>(valid))
                                   : 0.0;
    out.moments.push_back(est);
  }
  return out;
}

BinomialInterval clopper_pearson(std::size_t k, std::size_t n, double confidence) {
  if (n == 0) return {0.0, 1.0};
  if (k > n) throw InputError("clopper_pearson: successes exceed trials");
  const double alpha = 1.0 - confidence;
  const double kk = static_cast<double>(k);
  const double nn = static_cast<double>(n);
  BinomialInterval ci;
  ci.lower = k == 0 ? 0.0 : boost::math::ibeta_inv(kk, nn - kk + 1.0, alpha / 2.0);
  ci.upper = k == n ? 1.0 : boost::math::ibeta_inv(kk + 1.0, nn - kk, 1.0 - alpha / 2.0);
  return ci;
}

double deviation_bound(double l, double lambda, double t) {
  return std::max(std::pow(lambda, -(l + 2.0)), std::pow(lambda, -2.0 * (l + 1.0))) *
         std::pow(t, -(l + 1.0));
}

DeviationResult deviation_experiment(const SimulationConfig& config, const Region& region,
                                     double l, const std::vector<double>& lambdas,
                                     const std::vector<double>& horizons,
                                     const DeviationOptions& options) {
  validate(config);
  if (!std::isfinite(config.truncation)) throw InputError("deviation experiment needs a finite truncation");
  if (horizons.empty() || lambdas.empty()) throw InputError("deviation experiment needs lambdas and horizons");
  std::vector<double> sorted = horizons;
  std::sort(sorted.begin(), sorted.end());
  const double dt = config.step_time;
  std::vector<std::size_t> marks;
  for (double t : sorted) {
    if (!(t > 0.0)) throw InputError("horizons must be positive");
    marks.push_back(steps_for(t, dt));
  }

  const Interval domain{-config.truncation, config.truncation};
  const StationarySampler sampler(config.model, domain, options.sampler_cells);
  DeviationResult result;
  result.paths = config.paths;
  result.mu_v = 1.0 - sampler.probability(region);
  if (!(result.mu_v > 0.0)) throw InputError("mu(G^c) must be positive on the truncated domain");

  const std::size_t h = sorted.size();
  const std::size_t n = config.paths;
  std::vector<double> averages(n * h, 0.0);
  std::vector<std::uint8_t> survived(n * h, 0);
  std::vector<std::uint8_t> errors(n, 0);

  for_each_path(n, config.workers, [&](std::size_t i) {
    RandomStream rng(config.seed, i);
    double x = sampler.sample(rng.uniform());
    bool alive = region.contains(x);
    double v_prev = alive ? 0.0 : 1.0;
    double occupation = 0.0;
    std::size_t next = 0;
    for (std::size_t k = 1; next < h; ++k) {
      const auto y = euler_step(config, x, rng);
      if (!y) {
        errors[i] = 1;
        return;
      }
      const bool inside = region.contains(*y);
      const double v = inside ? 0.0 : 1.0;
      occupation += 0.5 * (v_prev + v) * dt;
      if (alive) {
        if (!inside) {
          alive = false;
        } else if (config.bridge_correction) {
          const double sigma = config.model.diffusion(x) * config.noise_scale;
          const double p = region.bridge_exit_probability(x, *y, sigma, dt);
          if (p > 0.0 && rng.uniform() < p) alive = false;
        }
      }
      v_prev = v;
      x = *y;
      while (next < h && k == marks[next]) {
        averages[i * h + next] = occupation / (static_cast<double>(k) * dt);
        survived[i * h + next] = alive ? 1 : 0;
        ++next;
      }
    }
  });

  for (std::size_t i = 0; i < n; ++i) result.errors += errors[i];
  const std::size_t trials = n - result.errors;
  for (double lambda : lambdas) {
    if (!(lambda > 0.0)) throw InputError("lambda must be positive");
    for (std::size_t j = 0; j < h; ++j) {
      DeviationCell cell;
      cell.l = l;
      cell.lambda = lambda;
      cell.horizon = sorted[j];
      cell.trials = trials;
      for (std::size_t i = 0; i < n; ++i) {
        if (errors[i]) continue;
        if (std::fabs(averages[i * h + j] - result.mu_v) >= 4.0 * lambda) ++cell.events;
      }
      cell.probability = trials ? static_cast<double>(cell.events) / static_cast<double>(trials) : 0.0;
      cell.ci = clopper_pearson(cell.events, trials, options.confidence);
      cell.bound_unit_constant = deviation_bound(l, lambda, sorted[j]);
      cell.low_power = trials < options.min_trials;
      result.cells.push_back(cell);
    }
  }
  for (std::size_t j = 0; j < h; ++j) {
    SurvivalCell s;
    s.horizon = sorted[j];
    s.trials = trials;
    for (std::size_t i = 0; i < n; ++i) {
      if (!errors[i]) s.survivors += survived[i * h + j];
    }
    s.probability = trials ? static_cast<double>(s.survivors) / static_cast<double>(trials) : 0.0;
    s.ci = clopper_pearson(s.survivors, trials, options.confidence);
    result.survival.push_back(s);
  }
  return result;
}

SlopeFit deviation_slope(const std::vector<DeviationCell>& cells) {
  SlopeFit fit;
  std::vector<double> x, y;
  for (const auto& c : cells) {
    double p = c.probability;
    if (c.events == 0) {
      p = c.ci.upper;
      ++fit.upper_bound_points;
    }
    if (!(p > 0.0)) continue;
    x.push_back(std::log(c.horizon));
    y.push_back(std::log(p));
  }
  fit.points = x.size();
  if (x.size() < 2) {
    fit.slope = std::numeric_limits<double>::quiet_NaN();
    return fit;
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  fit.slope = sxy / sxx;
  return fit;
}

}  // namespace hitspec
