#include <doctest.h>

#include "dmslice/exponents.hpp"

using namespace dmslice;
using namespace dmslice::exponents;

TEST_CASE("critical exponents") {
  CHECK(critical_r(Family::ball, 3, 2, 2) == Rational(1, 2));
  CHECK(critical_r(Family::ball, 1, 2, 4) == Rational(1, 4));
  CHECK(critical_r(Family::sphere, 5, 2, 2) == Rational(5, 8));
  CHECK(critical_r(Family::prime_sphere, 5, 2, 2) == Rational(5, 8));
  CHECK(critical_r(Family::annulus, 5, 2, 2, Rational(1, 2)) == Rational(5, 9));
  CHECK_THROWS(critical_r(Family::annulus, 5, 2, 2));
  CHECK_THROWS(critical_r(Family::sphere, 1, 2, 2));
}

TEST_CASE("sufficient exponents") {
  CHECK(r0(2, 0) == Rational(2, 3));
  CHECK(r0(3, 0) == Rational(2, 5));
  CHECK(r0(1, 0) == 2);
  CHECK(p0(5, 2, 0) == 2);
  CHECK(p0(3, 2, 1) == 3);
  CHECK_THROWS(p0(2, 2, 0));
  CHECK(prime_r_threshold(2, Rational(7, 5)) == Rational(7, 12));
  CHECK(prime_r_threshold(3, Rational(7, 5)) == Rational(7, 19));
  CHECK(default_p_kd(7) == Rational(7, 5));
  CHECK_THROWS(prime_r_threshold(2, 1));
  const auto s = sufficient_r_and_p(Family::sphere, 5, 2, 2, 0, default_p_kd(5));
  CHECK(s.sphere_threshold == Rational(2, 3));
  CHECK(s.prime_threshold == Rational(5, 8));
}

TEST_CASE("annular p0 interpolates between the endpoints") {
  for (int d = 3; d <= 8; ++d) {
    Rational prev = annulus_p0(d, Rational(1, 1000));
    for (int j = 2; j < 1000; j += 37) {
      const Rational cur = annulus_p0(d, Rational(j, 1000));
      CHECK(cur < prev);
      prev = cur;
    }
    CHECK(prev > 1);
    CHECK(annulus_p0(d, Rational(1, 1000)) < Rational(d, d - 2));
  }
  CHECK_THROWS(annulus_p0(5, 0));
  CHECK_THROWS(annulus_p0(5, 1));
}

TEST_CASE("exponent regions") {
  const auto ball = exponent_region(Family::ball, 2, 2);
  CHECK(ball.full_square);
  CHECK(region_contains(ball, Rational(9, 10), Rational(9, 10)));
  CHECK_FALSE(region_contains(ball, 1, Rational(1, 2)));
  const auto sph = exponent_region(Family::sphere, 5, 2);
  CHECK_FALSE(sph.full_square);
  CHECK(sph.threshold == Rational(8, 5));
  CHECK_FALSE(region_contains(sph, Rational(9, 10), Rational(9, 10)));
  CHECK(region_contains(sph, Rational(1, 2), Rational(1, 2)));
  CHECK(sph.vertices.size() == 5);
  CHECK(sph.vertices[2] == std::pair<Rational, Rational>(1, Rational(3, 5)));
  // r below r_c is never admissible
  CHECK_FALSE(region_contains(sph, Rational(1, 2), Rational(1, 2), Rational(1, 2)));
  CHECK(region_contains(sph, Rational(3, 4), Rational(3, 4), Rational(7, 10)));
  CHECK_FALSE(region_contains(sph, Rational(1, 2), Rational(1, 2), Rational(7, 10)));  // below 1/r
  CHECK_FALSE(region_contains(sph, Rational(4, 5), Rational(4, 5), Rational(5, 8)));
  CHECK(region_contains(sph, Rational(4, 5), Rational(4, 5), Rational(5, 8), false));
}
