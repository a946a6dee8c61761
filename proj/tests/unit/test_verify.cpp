#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "generators.hpp"
#include "hitspec/error.hpp"
#include "hitspec/verify.hpp"

using namespace hitspec;

namespace {

SpectralMeasure random_measure(test::Gen& g, std::size_t atoms) {
  SpectralMeasure m;
  for (std::size_t k = 0; k < atoms; ++k) {
    m.atoms.push_back(g.log_uniform(1e-3, 1e3));
    m.masses.push_back(g.log_uniform(1e-6, 1.0));
  }
  std::sort(m.atoms.begin(), m.atoms.end());
  return m;
}

}  // namespace

TEST_CASE("time integral agrees with the closed-form spectral sum") {
  test::Gen g(12);
  for (int trial = 0; trial < 20; ++trial) {
    const SpectralMeasure m = random_measure(g, g.index(1, 30));
    for (const RateFunction& r : {RateFunction::constant(), RateFunction::polynomial(g.uniform(0.1, 3.0)),
                                  RateFunction::exponential(0.5 * m.atoms.front())}) {
      double exact = 0.0;
      for (std::size_t k = 0; k < m.size(); ++k) exact += r.laplace(m.atoms[k]) * m.masses[k];
      CHECK(time_integral(m, r) == doctest::Approx(exact).epsilon(1e-7));
    }
    CHECK(std::isinf(time_integral(m, RateFunction::exponential(2.0 * m.atoms.front()))));
  }
  CHECK_THROWS_AS(time_integral(SpectralMeasure{{1.0}, {1.0}}, RateFunction::constant(), {-1.0, 1.0, 3}),
                  InputError);
}

TEST_CASE("random bounded functions: bounded, deterministic, varied") {
  std::vector<double> nodes;
  for (int i = 0; i < 200; ++i) nodes.push_back(-10.0 + 0.1 * i);
  const auto a = random_bounded_functions(nodes, 40, 5);
  const auto b = random_bounded_functions(nodes, 40, 5);
  const auto c = random_bounded_functions(nodes, 40, 6);
  CHECK(a == b);
  CHECK(a != c);
  for (const auto& f : a) {
    REQUIRE(f.size() == nodes.size());
    for (double v : f) CHECK(std::fabs(v) <= 1.0);
  }
}

TEST_CASE("Nash witness: Hoelder bound holds for random measures") {
  test::Gen g(13);
  for (int trial = 0; trial < 500; ++trial) {
    const SpectralMeasure m = random_measure(g, g.index(1, 50));
    const double l = g.uniform(0.1, 5.0);
    const NashWitness w = nash_witness(m, l);
    CHECK(w.exponents.conjugate());
    CHECK(w.slack >= -1e-13);
  }
}

TEST_CASE("Nash witness: single atoms are equality cases") {
  test::Gen g(14);
  for (int trial = 0; trial < 100; ++trial) {
    const SpectralMeasure m{{g.log_uniform(1e-2, 1e2)}, {g.log_uniform(1e-3, 1e3)}};
    const NashWitness w = nash_witness(m, g.uniform(0.2, 4.0));
    CHECK(w.rhs == doctest::Approx(w.norm_sq).epsilon(1e-12));
  }
}

TEST_CASE("Nash exponents are kept as exact fractions") {
  const NashExponents e = NashExponents::for_order(2.0);
  CHECK(e.p() == doctest::Approx(4.0 / 3.0));
  CHECK(e.q() == doctest::Approx(4.0));
  CHECK(e.conjugate());
}

TEST_CASE("killed Nash report on a small OU grid") {
  const GeneratorMatrix gen = build_killed_generator(find_model("OU").model, {-2.0, 2.0}, 120);
  const SpectralDecomposition dec = eigendecompose(gen);
  const auto fs = random_bounded_functions(gen.nodes(), 50, 1);
  const VerificationReport rep = verify_nash_killed(dec, 1.0, fs);
  CHECK(rep.passed());
  CHECK(rep.quantity("worst_slack") >= 0.0);
}

TEST_CASE("whole-line Nash report passes for a split away from zero") {
  const WholeLineSetup setup = make_whole_line_setup(find_model("HT(4)").model, 20.0, 201, 0.75);
  CHECK(setup.split_point == doctest::Approx(0.8));
  const auto fs = random_bounded_functions(setup.generator.nodes(), 20, 2);
  const VerificationReport rep = verify_nash_whole(setup, 2.0, fs);
  CHECK(rep.passed());
  CHECK_THROWS_AS(make_whole_line_setup(find_model("HT(4)").model, 20.0, 201, 25.0), InputError);
}

TEST_CASE("decay regime: exponential for OU, polynomial for HT(4)") {
  const GeneratorMatrix ou = build_reflected_generator(find_model("OU").model, {-8.0, 8.0}, 321);
  const SpectralDecomposition dou = eigendecompose(ou);
  DecayOptions options;
  options.t_min = 0.5;
  options.t_max = 8.0;
  options.gap_guard = false;
  const DecayFit fou = fit_decay(dou, sample_on_grid(ou, [](double x) { return std::tanh(x); }), options);
  CHECK(fou.regime == DecayRegime::Exponential);
  CHECK(fou.rate == doctest::Approx(2.0).epsilon(0.05));

  const GeneratorMatrix ht = build_reflected_generator(find_model("HT(4)").model, {-100.0, 100.0}, 501);
  const SpectralDecomposition dht = eigendecompose(ht);
  const DecayFit fht = fit_decay(dht, sample_on_grid(ht, [](double x) { return std::tanh(x); }));
  CHECK(fht.regime == DecayRegime::Polynomial);
  CHECK(fht.slope < -2.5);
}

TEST_CASE("ladder classification") {
  const ThresholdOptions o;
  const std::vector<double> flat{1.0, 1.01, 1.015};
  const std::vector<double> growing{1.0, 2.0, 8.0};
  const std::vector<double> mixed{1.0, 1.2, 1.25};
  CHECK(classify_ladder(flat, o) == ThresholdClass::Convergent);
  CHECK(classify_ladder(growing, o) == ThresholdClass::Divergent);
  CHECK(classify_ladder(mixed, o) == ThresholdClass::Inconclusive);
  CHECK(classify_ladder(std::vector<double>{1.0}, o) == ThresholdClass::Inconclusive);
  CHECK(std::string(to_string(ThresholdClass::Divergent)) == "DIVERGENT");
}

TEST_CASE("equality chain on BM2 with a coarse grid") {
  EqualityChainInputs in;
  in.model = find_model("BM2").model;
  in.interval = {0.0, 1.0};
  in.unknowns = 200;
  in.tolerances.solve_vs_spectral = 1e-8;
  const VerificationReport rep = verify_equality_chain(in);
  CHECK(rep.passed());
  CHECK(rep.quantity("pairing") == doctest::Approx(1.0 / 12.0).epsilon(1e-4));
}
