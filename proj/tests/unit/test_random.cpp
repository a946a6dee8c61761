#include <doctest.h>

#include <cmath>
#include <set>

#include "hitspec/random.hpp"

using namespace hitspec;

TEST_CASE("Philox4x32-10 known-answer vectors") {
  using B = Philox4x32::Block;
  CHECK(Philox4x32::generate({0, 0}, {0, 0, 0, 0}) == B{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(Philox4x32::generate({0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}) ==
        B{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
}

TEST_CASE("streams are reproducible and distinct") {
  RandomStream a(42, 7), b(42, 7), c(42, 8), d(43, 7);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    seen.insert(x);
    seen.insert(c.next_u64());
    seen.insert(d.next_u64());
  }
  CHECK(seen.size() == 300);
}

TEST_CASE("uniforms stay in the open unit interval and normals are standard") {
  RandomStream r(1, 0);
  const int n = 200000;
  double sum = 0.0, sum2 = 0.0, usum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    CHECK_UNARY(u > 0.0 && u < 1.0);
    usum += u;
    const double z = r.normal();
    sum += z;
    sum2 += z * z;
  }
  CHECK(usum / n == doctest::Approx(0.5).epsilon(0.01));
  CHECK(std::fabs(sum / n) < 0.01);
  CHECK(sum2 / n == doctest::Approx(1.0).epsilon(0.01));
  CHECK(r.blocks_used() > 0);
}
