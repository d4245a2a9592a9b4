// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "dses/dither.hpp"

using dses::DitherDraw;
using dses::DitherSpec;
using dses::RandomStream;

TEST_CASE("spec validation") {
  CHECK_NOTHROW((DitherSpec{1.0, 121.0 / 4.0, 0.01}.validate()));
  CHECK_THROWS_AS((DitherSpec{0.0, 1.0, 1.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((DitherSpec{1.0, -1.0, 1.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((DitherSpec{1.0, 1.0, 0.0}.validate()), std::invalid_argument);
}

TEST_CASE("linear odd maps carry the configured scales") {
  const DitherSpec unit{1.0, 1.0, 1.0};
  CHECK(unit.h_of(1.0) == 1.0);
  CHECK(unit.g_of(1.0) == 1.0);

  const DitherSpec paper{1.0, 121.0 / 4.0, 0.01};
  CHECK(paper.h_of(-1.0) == doctest::Approx(-5.5).epsilon(1e-15));
  CHECK(paper.g_of(-1.0) == doctest::Approx(-0.1).epsilon(1e-15));
  CHECK(paper.gamma() == doctest::Approx(0.55).epsilon(1e-15));
}

TEST_CASE("draws take the two support points with matching signs") {
  const DitherSpec spec{1.0, 121.0 / 4.0, 0.01};
  RandomStream stream(7, 0);
  bool saw_plus = false, saw_minus = false;
  for (int i = 0; i < 200; ++i) {
    const DitherDraw d = sample(spec, stream);
    REQUIRE((d.w == 1.0 || d.w == -1.0));
    REQUIRE(std::signbit(d.h) == std::signbit(d.w));
    REQUIRE(std::signbit(d.g) == std::signbit(d.w));
    saw_plus = saw_plus || d.w > 0;
    saw_minus = saw_minus || d.w < 0;
  }
  CHECK(saw_plus);
  CHECK(saw_minus);
}

TEST_CASE("empirical mean of w obeys the CLT bound") {
  const DitherSpec spec{1.0, 1.0, 1.0};
  RandomStream stream(2024, 11);
  const int n = 1000000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += sample(spec, stream).w;
  CHECK(std::abs(sum / n) < 4.0 / std::sqrt(double(n)));
}

TEST_CASE("exact moments: odd orders vanish, even orders factor") {
  const DitherSpec spec{1.0, 121.0 / 4.0, 0.01};
  const double gamma = spec.gamma();

  CHECK(dither_moment(spec, 1, 0) == 0.0);
  CHECK(dither_moment(spec, 1, 1) == doctest::Approx(gamma).epsilon(1e-15));
  CHECK(dither_moment(spec, 2, 0) == doctest::Approx(121.0 / 4.0).epsilon(1e-15));

  for (int m = 0; m <= 7; ++m)
    for (int p = 0; p <= 7; ++p)
      if ((m + p) % 2 == 1) CHECK(dither_moment(spec, m, p) == 0.0);

  // E[h^m g^{m+p}] = gamma^m psi^{p/2} for even p
  for (int m = 0; m <= 4; ++m)
    for (int p = 0; p <= 4; p += 2) {
      const double expected = std::pow(gamma, m) * std::pow(spec.psi, p / 2);
      CHECK(dither_moment(spec, m, m + p) == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("moments are exact for omega != 1 under the normalized maps") {
  const DitherSpec spec{2.5, 3.0, 0.4};
  CHECK(dither_moment(spec, 2, 0) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(dither_moment(spec, 0, 2) == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(dither_moment(spec, 1, 1) == doctest::Approx(spec.gamma()).epsilon(1e-15));
}

TEST_CASE("empirical moment averages converge at the MC rate") {
  const DitherSpec spec{1.0, 2.3, 0.7};
  RandomStream stream(5, 99);
  const int n = 100000;
  double s11 = 0.0, s22 = 0.0, v11 = 0.0, v22 = 0.0;
  for (int i = 0; i < n; ++i) {
    const DitherDraw d = sample(spec, stream);
    const double m11 = d.h * d.g, m22 = d.h * d.h * d.g * d.g;
    s11 += m11;
    s22 += m22;
    v11 += m11 * m11;
    v22 += m22 * m22;
  }
  auto check = [&](double sum, double sumsq, double expected) {
    const double mean = sum / n;
    const double se = std::sqrt(std::max(sumsq / n - mean * mean, 0.0) / n);
    CHECK(std::abs(mean - expected) <= 5.0 * se + 1e-12);
  };
  check(s11, v11, dither_moment(spec, 1, 1));
  check(s22, v22, dither_moment(spec, 2, 2));
}
