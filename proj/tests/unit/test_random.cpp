#include <cmath>
#include <numeric>
#include <vector>

#include <algorithm>
#include <stdexcept>

#include "doctest.h"
#include "flexfor/random.hpp"

using namespace flexfor;

TEST_CASE("derived seeds are stable and path sensitive") {
  CHECK(derive_seed(7, {1, 2}) == derive_seed(7, {1, 2}));
  CHECK(derive_seed(7, {1, 2}) != derive_seed(7, {2, 1}));
  CHECK(derive_seed(7, {1}) != derive_seed(8, {1}));
  CHECK(stream_id("sample/uniform") != stream_id("sample/dirichlet"));
}

TEST_CASE("uniform01 stays in [0,1) with the right mean") {
  Rng rng(1);
  double sum = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = uniform01(rng);
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(sum / 100000 == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("uniform_int covers the closed range evenly") {
  Rng rng(2);
  std::vector<int> hist(5, 0);
  for (int i = 0; i < 50000; ++i) {
    const auto v = uniform_int(rng, 3, 7);
    REQUIRE(v >= 3);
    REQUIRE(v <= 7);
    ++hist[static_cast<std::size_t>(v - 3)];
  }
  for (int h : hist) CHECK(h == doctest::Approx(10000).epsilon(0.05));
  CHECK(uniform_int(rng, 4, 4) == 4);
}

TEST_CASE("gamma moments match shape") {
  Rng rng(3);
  for (double shape : {0.5, 1.2, 4.0}) {
    double s = 0.0, s2 = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
      const double g = gamma_variate(rng, shape);
      REQUIRE(g >= 0.0);
      s += g;
      s2 += g * g;
    }
    const double mean = s / n;
    const double var = s2 / n - mean * mean;
    CHECK(mean == doctest::Approx(shape).epsilon(0.02));
    CHECK(var == doctest::Approx(shape).epsilon(0.05));
  }
}

TEST_CASE("standard normal moments") {
  Rng rng(4);
  double s = 0.0, s2 = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double z = standard_normal(rng);
    s += z;
    s2 += z * z;
  }
  CHECK(std::abs(s / n) < 0.01);
  CHECK(s2 / n == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("dirichlet draws lie on the simplex") {
  Rng rng(5);
  std::vector<double> alpha(6, 0.7), x(6);
  for (int i = 0; i < 10000; ++i) {
    dirichlet(rng, alpha, x);
    for (double v : x) REQUIRE(v >= 0.0);
    REQUIRE(std::abs(std::accumulate(x.begin(), x.end(), 0.0) - 1.0) < 1e-12);
  }
}

TEST_CASE("invalid gamma shape throws") {
  Rng rng(6);
  CHECK_THROWS(gamma_variate(rng, 0.0));
  CHECK_THROWS(gamma_variate(rng, -1.0));
}
