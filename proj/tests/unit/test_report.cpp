#include <doctest.h>

#include <cmath>
#include <sstream>

#include "generators.hpp"
#include "hitspec/error.hpp"
#include "hitspec/report.hpp"

using namespace hitspec;

TEST_CASE("relative slack sign and scale") {
  CHECK(relative_slack(1.0, 2.0) == doctest::Approx(0.5));
  CHECK(relative_slack(2.0, 1.0) == doctest::Approx(-0.5));
  CHECK(relative_slack(0.0, 0.0) == 0.0);
  test::Gen g(16);
  for (int i = 0; i < 200; ++i) {
    const double a = g.uniform(-10.0, 10.0), b = g.uniform(-10.0, 10.0);
    CHECK((relative_slack(a, b) >= 0.0) == (a <= b));
    CHECK(std::fabs(relative_slack(a, b)) <= 2.0);
  }
}

TEST_CASE("relative closeness treats equal infinities as equal") {
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(relatively_close(inf, inf, 1e-12));
  CHECK_FALSE(relatively_close(inf, 1.0, 1e-12));
  CHECK(relatively_close(1.0, 1.0 + 1e-13, 1e-12));
  CHECK_FALSE(relatively_close(1.0, 1.1, 1e-3));
}

TEST_CASE("report JSON and CSV") {
  VerificationReport r;
  r.check = "demo";
  r.add_quantity("x", 1.5, "route");
  r.add_quantity("y", std::numeric_limits<double>::infinity(), "route");
  CHECK(r.assert_that("ok", true, 1.0, 2.0, 0.1));
  CHECK_FALSE(r.assert_that("bad", false, 3.0, 2.0, 0.1, "why"));
  CHECK_FALSE(r.passed());
  CHECK(r.failures() == 1);
  CHECK(r.quantity("x") == 1.5);
  CHECK_THROWS_AS(r.quantity("z"), InputError);
  const nlohmann::json j = r.to_json();
  CHECK(j["schema_version"] == 1);
  CHECK(j["name"] == "demo");
  CHECK(j["quantities"][1]["value"] == "inf");
  CHECK(j["passed"] == false);
  r.curves.columns = {"a", "b"};
  r.curves.add_row({0.1, -std::numeric_limits<double>::infinity()});
  std::ostringstream csv;
  r.curves.write_csv(csv);
  CHECK(csv.str() == "a,b\n0.10000000000000001,-inf\n");
  CHECK_THROWS(r.curves.add_row({1.0}));
}
