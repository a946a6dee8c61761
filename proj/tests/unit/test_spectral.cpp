#include <doctest.h>

#include <cmath>
#include <numbers>

#include "generators.hpp"
#include "hitspec/error.hpp"
#include "hitspec/spectral.hpp"

using namespace hitspec;

TEST_CASE("spectral: killed BM2 matches the discrete sine spectrum") {
  const std::size_t n = 300;
  const GeneratorMatrix gen = build_killed_generator(find_model("BM2").model, {0.0, 1.0}, n);
  const SpectralDecomposition dec = eigendecompose(gen);
  const double h = 1.0 / static_cast<double>(n + 1);
  for (std::size_t k = 0; k < n; k += 13) {
    const double s = std::sin(static_cast<double>(k + 1) * std::numbers::pi * h / 2.0);
    CHECK(dec.eigenvalue(k) == doctest::Approx(4.0 / (h * h) * s * s).epsilon(1e-11));
  }
  CHECK(dec.orthonormality_residual(3) < 1e-12);
}

TEST_CASE("spectral: Parseval and synthesis invert coefficients") {
  test::Gen gen(8);
  const GeneratorMatrix L = build_reflected_generator(find_model("HT(4)").model, {-20.0, 20.0}, 151);
  const SpectralDecomposition dec = eigendecompose(L);
  for (int trial = 0; trial < 10; ++trial) {
    const auto f = gen.vector(L.size(), -1.0, 1.0);
    const auto c = dec.coefficients(f);
    double sum = 0.0;
    for (double a : c) sum += a * a;
    CHECK(sum == doctest::Approx(L.inner(f, f)).epsilon(1e-11));
    auto diff = dec.synthesize(c);
    for (std::size_t i = 0; i < f.size(); ++i) diff[i] -= f[i];
    CHECK(L.inner(diff, diff) <= 1e-24 * L.inner(f, f));
    // Energy = sum xi_k w_k.
    const SpectralMeasure mu = spectral_weights(dec, f);
    double energy = 0.0;
    for (std::size_t k = 0; k < mu.size(); ++k) energy += mu.atoms[k] * mu.masses[k];
    CHECK(energy == doctest::Approx(L.dirichlet_energy(f)).epsilon(1e-9));
  }
}

TEST_CASE("rate functions: Laplace transforms and primitives") {
  const RateFunction c = RateFunction::constant();
  const RateFunction p = RateFunction::polynomial(1.5);
  const RateFunction e = RateFunction::exponential(2.0);
  CHECK(c.laplace(4.0) == doctest::Approx(0.25));
  CHECK(p.laplace(2.0) == doctest::Approx(std::tgamma(2.5) * std::pow(2.0, -2.5)));
  CHECK(e.laplace(3.0) == doctest::Approx(1.0));
  CHECK(std::isinf(e.laplace(2.0)));
  CHECK(std::isinf(e.laplace(1.0)));
  CHECK(p.primitive(4.0) == doctest::Approx(std::pow(4.0, 2.5) / 2.5));
  CHECK(e.primitive(1.0) == doctest::Approx((std::exp(2.0) - 1.0) / 2.0));
  CHECK(p.laplace_segment(2.0, 0.0, kInfinity) == doctest::Approx(p.laplace(2.0)));
  CHECK(p.laplace_segment(2.0, 0.0, 1.0) + p.laplace_segment(2.0, 1.0, kInfinity) ==
        doctest::Approx(p.laplace(2.0)));
  CHECK(p.polynomial_order() == 1.5);
  CHECK_FALSE(p.integer_order());
  CHECK(RateFunction::polynomial(2.0).integer_order());
}

TEST_CASE("spectral measures: evolution, merge and Nash functional") {
  const SpectralMeasure a{{1.0, 2.0}, {0.5, 0.25}};
  const SpectralMeasure b{{3.0}, {1.0}};
  const SpectralMeasure m = SpectralMeasure::merge(a, b);
  CHECK(m.size() == 3);
  CHECK(m.total() == doctest::Approx(1.75));
  CHECK(m.evolved(0.5).masses[0] == doctest::Approx(0.5 * std::exp(-1.0)));
  CHECK(semigroup_norm_sq(m, 1.0) == doctest::Approx(0.5 * std::exp(-1.0) + 0.25 * std::exp(-2.0) + std::exp(-3.0)));
  CHECK(nash_functional(m, 1.0) == doctest::Approx(0.5 + 0.25 / 4.0 + 1.0 / 9.0));
  CHECK(m.scaled(2.0).total() == doctest::Approx(3.5));
  const SpectralMeasure zero{{0.0}, {1.0}};
  CHECK(std::isinf(nash_functional(zero, 1.0)));
  const auto grid = log_spaced(1e-3, 10.0, 5);
  CHECK(grid.front() == doctest::Approx(1e-3));
  CHECK(grid.back() == doctest::Approx(10.0));
  CHECK(grid[2] == doctest::Approx(0.1));
}
