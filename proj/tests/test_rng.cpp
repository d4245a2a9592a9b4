// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "dses/rng.hpp"

using dses::RandomStream;

TEST_CASE("streams are deterministic and stream-separated") {
  RandomStream a(42, 7), b(42, 7);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

  RandomStream a2(42, 7), c(42, 8);
  bool all_equal = true;
  for (int i = 0; i < 100; ++i) all_equal = all_equal && (a2.next_u64() == c.next_u64());
  CHECK_FALSE(all_equal);
}

TEST_CASE("master stream is distinct from trajectory streams") {
  RandomStream m = RandomStream::master(1);
  RandomStream t(1, 0);
  CHECK(m.next_u64() != t.next_u64());
}

TEST_CASE("uniform01 lies in [0,1) with the right first moments") {
  RandomStream s(123, 0);
  const int n = 200000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = s.uniform01();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
    sumsq += u * u;
  }
  const double mean = sum / n;
  const double var = sumsq / n - mean * mean;
  CHECK(std::abs(mean - 0.5) < 5.0 / std::sqrt(12.0 * n));
  CHECK(std::abs(var - 1.0 / 12.0) < 5e-3);
}

TEST_CASE("rademacher draws +-1 with zero mean") {
  RandomStream s(99, 3);
  const int n = 100000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double w = s.rademacher();
    REQUIRE((w == 1.0 || w == -1.0));
    sum += w;
  }
  CHECK(std::abs(sum / n) < 5.0 / std::sqrt(double(n)));
}

TEST_CASE("uniform(a,b) respects its range") {
  RandomStream s(5, 5);
  for (int i = 0; i < 1000; ++i) {
    const double u = s.uniform(-5.0, 10.0);
    REQUIRE(u >= -5.0);
    REQUIRE(u < 10.0);
  }
}
