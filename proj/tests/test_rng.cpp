#include <doctest.h>

#include <vector>

#include "netresp/rng.hpp"
#include "support.hpp"

using namespace netresp;

TEST_CASE("same key tuple reproduces the same sequence") {
  RngStream a(42, {1, 2, 3}), b(42, {1, 2, 3}), c(42, {1, 2, 4});
  bool differs = false;
  for (int k = 0; k < 100; ++k) {
    const double x = a.uniform();
    CHECK(x == b.uniform());
    differs |= x != c.uniform();
  }
  CHECK(differs);
}

TEST_CASE("uniform_open never returns an endpoint") {
  RngStream r(7);
  for (int k = 0; k < 10000; ++k) {
    const double u = r.uniform_open();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("gamma draws use the shape-rate convention") {
  RngStream r(3);
  std::vector<double> x;
  for (int k = 0; k < 40000; ++k) x.push_back(r.gamma(4.0, 2.0));
  const auto m = testing::moments(x);
  CHECK(std::abs(m.mean - 2.0) < 4 * m.se);
  CHECK(std::abs(m.variance - 1.0) < 4 * testing::variance_se(x));
}

TEST_CASE("serialized state resumes the exact sequence") {
  RngStream r(99, 5);
  for (int k = 0; k < 17; ++k) r.normal();  // leaves a cached deviate behind
  const std::string state = r.serialize();
  std::vector<double> expected;
  for (int k = 0; k < 20; ++k) expected.push_back(k % 2 ? r.normal() : r.uniform());
  RngStream back = RngStream::deserialize(state);
  CHECK(back.seed() == 99);
  for (int k = 0; k < 20; ++k) CHECK((k % 2 ? back.normal() : back.uniform()) == expected[k]);
}

TEST_CASE("bernoulli respects degenerate probabilities") {
  RngStream r(1);
  for (int k = 0; k < 1000; ++k) {
    CHECK(r.bernoulli(1.0));
    CHECK_FALSE(r.bernoulli(0.0));
  }
}

TEST_CASE("uniform_int is inclusive") {
  RngStream r(11);
  bool lo = false, hi = false;
  for (int k = 0; k < 2000; ++k) {
    const auto x = r.uniform_int(3, 5);
    CHECK(x >= 3);
    CHECK(x <= 5);
    lo |= x == 3;
    hi |= x == 5;
  }
  CHECK(lo);
  CHECK(hi);
}
