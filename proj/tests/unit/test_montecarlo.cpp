#include <doctest.h>

#include <cmath>

#include "generators.hpp"
#include "hitspec/error.hpp"
#include "hitspec/montecarlo.hpp"

using namespace hitspec;

namespace {

SimulationConfig config(const char* model) {
  SimulationConfig c;
  c.model = find_model(model).model;
  c.step_time = 1e-3;
  c.paths = 200;
  c.seed = 3;
  return c;
}

}  // namespace

TEST_CASE("noise-free paths follow the drift ODE") {
  SimulationConfig c = config("OU");
  c.noise_scale = 0.0;
  c.step_time = 1e-4;
  const PathObservables p = simulate_path(c, 2.0, 1.0, 0);
  CHECK(p.final_position == doctest::Approx(2.0 * std::exp(-1.0)).epsilon(1e-3));
  CHECK(p.steps == 10000);
}

TEST_CASE("reflection keeps paths inside the truncation") {
  SimulationConfig c = config("BM2");
  c.truncation = 1.0;
  c.step_time = 0.05;
  for (std::uint64_t i = 0; i < 50; ++i) {
    const PathObservables p = simulate_path(c, 0.9, 20.0, i);
    CHECK_FALSE(p.error);
    CHECK(p.max_abs_position <= 1.0);
  }
}

TEST_CASE("bridge exit probability") {
  const Region g = Region::interval(0.0, 1.0);
  CHECK(g.bridge_exit_probability(0.5, 0.5, 1.0, 1e-4) == 0.0);
  const double p = g.bridge_exit_probability(0.01, 0.02, std::sqrt(2.0), 1e-4);
  CHECK(p == doctest::Approx(std::exp(-2.0 * 0.01 * 0.02 / (2.0 * 1e-4))));
  const Region ext = Region::exterior(1.0);
  CHECK(ext.contains(1.5));
  CHECK_FALSE(ext.contains(0.0));
  CHECK(ext.bridge_exit_probability(1.1, 1.2, 1.0, 0.01) == doctest::Approx(std::exp(-2.0 * 0.1 * 0.2 / 0.01)));
  CHECK_THROWS_AS(Region::interval(1.0, 0.0), InputError);
}

TEST_CASE("hitting sample: identical across worker counts") {
  SimulationConfig c = config("BM2");
  const Region g = Region::interval(0.0, 1.0);
  const HittingSample one = sample_hitting_moments(c, g, StartLaw::at(0.5), {1, 2});
  c.workers = 3;
  const HittingSample three = sample_hitting_moments(c, g, StartLaw::at(0.5), {1, 2});
  CHECK(one.taus == three.taus);
  CHECK(one.moments[0].mean == three.moments[0].mean);
  CHECK(one.moments[0].mean == doctest::Approx(0.125).epsilon(0.2));
  CHECK(one.censored_fraction() == 0.0);
}

TEST_CASE("hitting sample: censoring at the time cap") {
  SimulationConfig c = config("BM2");
  c.max_time = 0.01;
  const HittingSample s = sample_hitting_moments(c, Region::interval(0.0, 1.0), StartLaw::at(0.5), {1});
  CHECK(s.censored_fraction() > 0.9);
}

TEST_CASE("stationary sampler reproduces the region probability") {
  const DiffusionModel& ht = find_model("HT(4)").model;
  const StationarySampler s(ht, {-20.0, 20.0}, 4000);
  const Region inner = Region::interval(-1.0, 1.0);
  RandomStream r(5, 0);
  const int n = 100000;
  int hits = 0;
  for (int i = 0; i < n; ++i) hits += inner.contains(s.sample(r.uniform())) ? 1 : 0;
  const double p = s.probability(inner);
  CHECK(static_cast<double>(hits) / n == doctest::Approx(p).epsilon(0.02));
  const StationarySampler restricted(ht, {-20.0, 20.0}, 4000, Region::exterior(1.0));
  for (int i = 0; i < 1000; ++i) CHECK(std::fabs(restricted.sample(r.uniform())) >= 1.0);
}

TEST_CASE("Clopper-Pearson interval") {
  const BinomialInterval zero = clopper_pearson(0, 100, 0.95);
  CHECK(zero.lower == 0.0);
  CHECK(zero.upper == doctest::Approx(1.0 - std::pow(0.025, 1.0 / 100.0)));
  const BinomialInterval all = clopper_pearson(100, 100, 0.95);
  CHECK(all.upper == 1.0);
  CHECK(all.lower == doctest::Approx(std::pow(0.025, 1.0 / 100.0)));
  test::Gen g(15);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = g.index(1, 1000);
    const std::size_t k = g.index(0, n);
    const BinomialInterval ci = clopper_pearson(k, n, 0.95);
    const double p = static_cast<double>(k) / static_cast<double>(n);
    CHECK(ci.lower <= p);
    CHECK(p <= ci.upper);
  }
  CHECK_THROWS_AS(clopper_pearson(5, 4, 0.95), InputError);
}

TEST_CASE("deviation bound arithmetic") {
  CHECK(deviation_bound(1.0, 0.5, 10.0) == doctest::Approx(0.16));
}

TEST_CASE("deviation experiment: saturated cells are zero and workers do not matter") {
  SimulationConfig c = config("HT(4)");
  c.step_time = 0.01;
  c.truncation = 20.0;
  c.paths = 300;
  const Region g = Region::exterior(1.0);
  const DeviationResult a = deviation_experiment(c, g, 1.0, {0.05, 0.3}, {1.0, 3.0});
  c.workers = 2;
  const DeviationResult b = deviation_experiment(c, g, 1.0, {0.05, 0.3}, {1.0, 3.0});
  REQUIRE(a.cells.size() == 4);
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    CHECK(a.cells[i].events == b.cells[i].events);
    if (4.0 * a.cells[i].lambda > 1.0) CHECK(a.cells[i].events == 0);
    CHECK(a.cells[i].low_power == false);
  }
  CHECK(a.mu_v > 0.5);
  CHECK(a.survival[0].probability >= a.survival[1].probability);
}

TEST_CASE("deviation slope uses CI upper bounds for zero counts") {
  std::vector<DeviationCell> cells(2);
  cells[0].horizon = 10.0;
  cells[0].events = 100;
  cells[0].probability = 1e-2;
  cells[1].horizon = 100.0;
  cells[1].events = 1;
  cells[1].probability = 1e-4;
  CHECK(deviation_slope(cells).slope == doctest::Approx(-2.0));
  cells[1].events = 0;
  cells[1].probability = 0.0;
  cells[1].ci.upper = 1e-3;
  const SlopeFit fit = deviation_slope(cells);
  CHECK(fit.slope == doctest::Approx(-1.0));
  CHECK(fit.upper_bound_points == 1);
}
