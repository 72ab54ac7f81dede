#include <doctest.h>

#include <cmath>
#include <set>

#include "dmslice/lattice.hpp"
#include "dmslice/surface.hpp"
#include "oracles.hpp"

using namespace dmslice;

TEST_CASE("sphere counts match the box scan") {
  for (int d = 1; d <= 3; ++d)
    for (int k = 2; k <= 4; ++k) {
      const std::int64_t L = 120;
      const auto want = oracle::level_counts(d, k, L);
      const auto got = lattice::sphere_count_table(d, k, L);
      for (std::int64_t mu = 0; mu <= L; ++mu) CHECK(got[static_cast<std::size_t>(mu)] == want[static_cast<std::size_t>(mu)]);
    }
}

TEST_CASE("small counts") {
  CHECK(lattice::count_sphere(2, 2, 25) == 12);
  CHECK(lattice::count_ball(2, 2, 2) == 9);
  CHECK(lattice::count_sphere(3, 2, 7) == 0);
  CHECK(lattice::count_sphere(1, 3, 8) == 2);
  CHECK(lattice::count_sphere(5, 2, 0) == 1);
}

TEST_CASE("enumerations are the level sets, in lexicographic order") {
  for (int d = 1; d <= 3; ++d)
    for (int k = 2; k <= 3; ++k)
      for (std::int64_t lambda : {0, 1, 5, 9, 17, 30}) {
        const auto pts = lattice::enumerate_sphere(d, k, lambda);
        const auto want = oracle::sphere_set(d, k, lambda);
        CHECK(std::set<LatticePoint>(pts.begin(), pts.end()) == want);
        CHECK(std::is_sorted(pts.begin(), pts.end()));
        CHECK(pts.size() == want.size());
      }
}

TEST_CASE("balls are unions of spheres") {
  for (int d = 1; d <= 3; ++d) {
    const auto ball = lattice::enumerate_ball(d, 2, 20);
    BigInt total = 0;
    for (std::int64_t mu = 0; mu <= 20; ++mu) total += lattice::count_sphere(d, 2, mu);
    CHECK(BigInt(static_cast<unsigned long>(ball.size())) == total);
    CHECK(lattice::count_ball(d, 2, 20) == total);
    for (const auto& p : ball) CHECK(power_norm(p, 2) <= 20);
  }
}

TEST_CASE("annulus membership is exact") {
  const Rational half(1, 2);
  // lambda = 16, width 4: 12 < s <= 16
  CHECK_FALSE(lattice::in_annulus(12, 16, half, 1));
  CHECK(lattice::in_annulus(13, 16, half, 1));
  CHECK(lattice::in_annulus(16, 16, half, 1));
  CHECK_FALSE(lattice::in_annulus(17, 16, half, 1));
  // lambda = 10: width sqrt(10) ~ 3.16, so s in {7..10}
  CHECK(lattice::annulus_slack(10, half, 1) == 3);
  CHECK(lattice::in_annulus(7, 10, half, 1));
  CHECK_FALSE(lattice::in_annulus(6, 10, half, 1));
  for (std::int64_t lambda = 1; lambda <= 200; ++lambda)
    for (const Rational& theta : {Rational(1, 4), Rational(1, 2), Rational(3, 4)}) {
      const std::int64_t t = lattice::annulus_slack(lambda, theta, 1);
      const long double w = std::pow(static_cast<long double>(lambda), static_cast<long double>(theta.get_d()));
      CHECK(static_cast<long double>(t) < w + 1e-9L);
      CHECK(static_cast<long double>(t + 1) >= w - 1e-9L);
    }
}

TEST_CASE("annulus enumeration matches a scan") {
  const Rational theta(1, 2);
  for (int d = 1; d <= 3; ++d)
    for (std::int64_t lambda : {1, 4, 10, 25, 40}) {
      std::set<LatticePoint> want;
      const std::int64_t R = oracle::radius_for(lambda, 2);
      const std::int64_t slack = lattice::annulus_slack(lambda, theta, 1);
      oracle::scan_box(d, -R, R, [&](const std::vector<std::int64_t>& u) {
        const auto s = oracle::norm(u, 2);
        if (s <= lambda && lambda - s <= slack) want.insert(LatticePoint(u));
      });
      const auto got = lattice::enumerate_annulus(d, theta, lambda, 1);
      CHECK(std::set<LatticePoint>(got.begin(), got.end()) == want);
      CHECK(lattice::count_annulus(d, theta, lambda, 1) == BigInt(static_cast<unsigned long>(want.size())));
    }
}

TEST_CASE("surface counter sizes") {
  // ball, l=2, d=1: #{(u,v) : u^2 + v^2 <= lambda}
  const SurfaceCounter ball(SurfaceSpec::ball(1, 2, 2), 30);
  for (std::int64_t l = 0; l <= 30; ++l) CHECK(ball.size(l).exact().rational() == Rational(lattice::count_ball(2, 2, l)));
  const SurfaceCounter sphere(SurfaceSpec::sphere(2, 2, 2), 30);
  for (std::int64_t l = 0; l <= 30; ++l)
    CHECK(sphere.size(l).exact().rational() == Rational(lattice::count_sphere(4, 2, l)));
}

TEST_CASE("asymptotic diagnostic") {
  const auto spec = SurfaceSpec::ball(2, 2, 1);
  std::vector<std::int64_t> ls;
  for (std::int64_t l = 1000; l <= 4000; l += 500) ls.push_back(l);
  const auto good = asymptotic_diagnostic(spec, ls, Rational(1));
  CHECK(good.stabilization < 0.1L);
  const auto bad = asymptotic_diagnostic(spec, ls, Rational(2));
  CHECK(bad.stabilization > 0.1L);
  CHECK_THROWS(asymptotic_diagnostic(spec, {}, Rational(1)));
  CHECK_THROWS(asymptotic_diagnostic(spec, {5, 3}, Rational(1)));
}

TEST_CASE("surface spec validation names the field") {
  auto s = SurfaceSpec::sphere(2, 2, 2);
  s.k = 1;
  CHECK_THROWS_WITH_AS(s.validate(), doctest::Contains("k"), std::invalid_argument);
  auto a = SurfaceSpec::annulus(3, Rational(1, 2), 2);
  a.theta = Rational(3, 2);
  CHECK_THROWS_WITH_AS(a.validate(), doctest::Contains("theta"), std::invalid_argument);
  CHECK(SurfaceSpec::sphere(5, 2, 2).default_phi() == 4);
  CHECK(SurfaceSpec::annulus(5, Rational(1, 2), 2).default_phi() == Rational(9, 2));
  CHECK(SurfaceSpec::ball(3, 2, 2).default_phi() == 3);
}
