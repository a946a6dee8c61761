#include <doctest.h>

#include <cmath>

#include "generators.hpp"
#include "hitspec/error.hpp"
#include "hitspec/moments.hpp"

using namespace hitspec;

TEST_CASE("recursion: BM2 exit-time moments on (0, 1)") {
  const GeneratorMatrix gen = build_killed_generator(find_model("BM2").model, {0.0, 1.0}, 999);
  const MomentTable t = moment_recursion(gen, 2);
  // v_1 = x(1-x)/2 is reproduced exactly by the three-point stencil.
  for (std::size_t i = 0; i < t.nodes.size(); i += 37) {
    const double x = t.nodes[i];
    CHECK(t.v(1)[i] == doctest::Approx(x * (1.0 - x) / 2.0).epsilon(1e-10));
  }
  CHECK(t.at(1, 0.5) == doctest::Approx(0.125).epsilon(1e-10));
  CHECK(t.at(2, 0.5) == doctest::Approx(5.0 / 192.0).epsilon(1e-6));
  CHECK(t.integrated(1) == doctest::Approx(1.0 / 12.0).epsilon(1e-5));
  CHECK(t.at(1, 0.0) == 0.0);
  CHECK(t.at(1, 1.0) == 0.0);
}

TEST_CASE("recursion: reflected-only generators are rejected") {
  const GeneratorMatrix gen = build_reflected_generator(find_model("OU").model, {-3.0, 3.0}, 50);
  CHECK_THROWS(moment_recursion(gen, 1));
}

TEST_CASE("solver: inertia counts eigenvalues below the shift") {
  const GeneratorMatrix gen = build_generator(find_model("HT(4)").model, {-6.0, 6.0}, 120,
                                              Boundary::Absorbing, Boundary::Reflecting);
  const SpectralDecomposition dec = eigendecompose(gen);
  test::Gen g(9);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t k = g.index(0, 60);
    const double shift = 0.5 * (dec.eigenvalue(k) + dec.eigenvalue(k + 1));
    const GeneratorSolver solver(gen, shift);
    CHECK(solver.eigenvalues_below_shift() == k + 1);
  }
  CHECK(GeneratorSolver(gen, 0.0).positive_definite());
}

TEST_CASE("solver: residual of (-L - shift) u = g") {
  test::Gen g(10);
  const GeneratorMatrix gen = build_killed_generator(find_model("OU").model, {-3.0, 3.0}, 200);
  for (int trial = 0; trial < 10; ++trial) {
    const double shift = g.uniform(-2.0, 0.5);
    const auto rhs = g.vector(gen.size(), -1.0, 1.0);
    const auto u = GeneratorSolver(gen, shift).solve(rhs);
    const auto Lu = gen.apply(u);
    for (std::size_t i = 0; i < u.size(); ++i) {
      CHECK(-Lu[i] - shift * u[i] == doctest::Approx(rhs[i]).scale(1.0).epsilon(1e-8));
    }
  }
}

TEST_CASE("routes: solve pairing equals the spectral sum") {
  test::Gen g(11);
  const GeneratorMatrix gen = build_killed_generator(find_model("HT(4)").model, {-4.0, 4.0}, 150);
  const SpectralDecomposition dec = eigendecompose(gen);
  for (int trial = 0; trial < 10; ++trial) {
    const auto f = g.vector(gen.size(), -1.0, 1.0);
    for (const RateFunction& r : {RateFunction::constant(), RateFunction::polynomial(1.0),
                                  RateFunction::polynomial(3.0),
                                  RateFunction::exponential(0.5 * dec.eigenvalue(0))}) {
      CHECK(resolvent_pairing(gen, f, r) == doctest::Approx(modulated_moment(dec, f, r)).epsilon(1e-8));
    }
    CHECK(std::isinf(resolvent_pairing(gen, f, RateFunction::exponential(2.0 * dec.eigenvalue(0)))));
    CHECK_THROWS_AS(resolvent_pairing(gen, f, RateFunction::polynomial(0.5)), InputError);
  }
}

TEST_CASE("mean modulated moment: recursion and spectral routes agree") {
  const GeneratorMatrix gen = build_killed_generator(find_model("BM2").model, {0.0, 1.0}, 400);
  const SpectralDecomposition dec = eigendecompose(gen);
  const MeanModulatedMoment one = mean_modulated_moment(gen, 1.0, &dec);
  CHECK(one.route == "recursion");
  REQUIRE(one.spectral_value);
  CHECK(one.value == doctest::Approx(*one.spectral_value).epsilon(1e-9));
  CHECK(one.value == doctest::Approx(1.0 / 120.0).epsilon(1e-4));
  const MeanModulatedMoment half = mean_modulated_moment(gen, 0.5, &dec);
  CHECK(half.route == "spectral");
  CHECK(half.value > 0.0);
  const GeneratorMatrix reflected = build_reflected_generator(find_model("OU").model, {-3.0, 3.0}, 50);
  CHECK(std::isinf(mean_modulated_moment(reflected, 1.0).value));
}

TEST_CASE("modulated recursion with f = 1 reproduces the moments") {
  const GeneratorMatrix gen = build_killed_generator(find_model("OU").model, {-2.0, 1.0}, 200);
  const auto v = modulated_recursion(gen, std::vector<double>(gen.size(), 1.0), 3);
  const MomentTable t = moment_recursion(gen, 3);
  for (std::size_t k = 1; k <= 3; ++k) {
    for (std::size_t i = 0; i < gen.size(); i += 17) CHECK(v[k][i] == doctest::Approx(t.v(k)[i]).epsilon(1e-12));
  }
}
