#include <doctest.h>

#include <cmath>
#include <numbers>

#include "generators.hpp"
#include "hitspec/error.hpp"
#include "hitspec/model.hpp"
#include "hitspec/quadrature.hpp"

using namespace hitspec;

TEST_CASE("catalog: stable order, tags and lookup") {
  const auto& catalog = model_catalog();
  REQUIRE(catalog.size() >= 3);
  CHECK(catalog[0].model.name == "BM2");
  CHECK(catalog[1].model.name == "OU");
  CHECK(find_model("HT(4)").model.name == "HT(4)");
  CHECK_THROWS_AS(find_model("nope"), InputError);
  for (const auto* e : models_with_tag("heavy-tail")) CHECK(e->model.name.rfind("HT(", 0) == 0);
  CHECK(models_with_tag("heavy-tail").size() == 3);
}

TEST_CASE("scale and speed: closed forms agree with SDE quadrature") {
  test::Gen gen(2);
  for (const char* name : {"OU", "HT(3)", "HT(4)", "HT(6)"}) {
    const DiffusionModel& m = find_model(name).model;
    const ScaleSpeed closed = scale_speed_from_sde(m, true);
    const ScaleSpeed numeric = scale_speed_from_sde(m, false);
    CHECK(closed.closed_form());
    CHECK_FALSE(numeric.closed_form());
    for (int i = 0; i < 20; ++i) {
      const double x = gen.uniform(-4.0, 4.0);
      CHECK(numeric.scale_density(x) == doctest::Approx(closed.scale_density(x)).epsilon(1e-8));
      CHECK(numeric.speed_density(x) == doctest::Approx(closed.speed_density(x)).epsilon(1e-8));
      // s' m' sigma^2 / 2 = 1
      const double sigma = m.diffusion(x);
      CHECK(closed.scale_density(x) * closed.speed_density(x) * sigma * sigma / 2.0 ==
            doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("scale increments add up") {
  test::Gen gen(3);
  const ScaleSpeed ss = scale_speed_from_sde(find_model("HT(4)").model);
  for (int i = 0; i < 50; ++i) {
    double a = gen.uniform(-3.0, 3.0), b = gen.uniform(-3.0, 3.0), c = gen.uniform(-3.0, 3.0);
    CHECK(ss.scale_increment(a, b) + ss.scale_increment(b, c) ==
          doctest::Approx(ss.scale_increment(a, c)).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("invariant probability: masses from the known values") {
  const auto& ht = find_model("HT(4)");
  const InvariantDensity density = invariant_probability(ht.model, {-kInfinity, kInfinity});
  for (const auto& k : ht.known_values) {
    if (k.name == "speed_mass_whole_line") CHECK(density.mass == doctest::Approx(k.value).epsilon(1e-8));
  }
  const double total = integrate([&](double x) { return density(x); }, -kInfinity, kInfinity).value;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-8));
  CHECK_THROWS_AS(invariant_probability(find_model("BM2").model, {-kInfinity, kInfinity}),
                  NotNormalizableError);
}

TEST_CASE("expression models and the drift margin") {
  const DiffusionModel m = make_expression_model("mine", "-4*x/(1+x^2)", "1", {-kInfinity, kInfinity}, 0.0);
  const DiffusionModel& ht = find_model("HT(4)").model;
  for (double x : {-2.0, 0.3, 5.0}) {
    CHECK(m.drift(x) == doctest::Approx(ht.drift(x)));
    CHECK(veretennikov_margin(ht, 4.0, x) == doctest::Approx(0.0).scale(1.0));
  }
  CHECK_THROWS_AS(make_heavy_tailed_model(0.25), InputError);
}
