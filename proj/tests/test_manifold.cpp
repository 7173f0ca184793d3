#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "polelab/manifold.hpp"

using namespace polelab;
using Catch::Approx;

namespace {
ModelManifold euclid(int n, double r_max = 10.0) { return ModelManifold(n, WarpingFunction::euclidean(), r_max); }
ModelManifold hyperbolic(int n, double r_max = 6.0) { return ModelManifold(n, WarpingFunction::hyperbolic(1.0), r_max); }
ModelManifold paraboloid(int n, double r_max = 10.0) { return ModelManifold(n, WarpingFunction::paraboloid(), r_max); }
}  // namespace

TEST_CASE("sphere area", "[manifold]") {
  CHECK(sphere_area(euclid(2), 1.0) == Approx(2 * kPi).epsilon(1e-14));
  CHECK(sphere_area(euclid(3), 2.0) == Approx(16 * kPi).epsilon(1e-14));
  CHECK(sphere_area(hyperbolic(2), 1.0) == Approx(2 * kPi * oracle::sinh_series(1.0)).epsilon(1e-13));
  CHECK_THROWS_AS(sphere_area(euclid(2), 0.0), DomainError);
  CHECK_THROWS_AS(sphere_area(euclid(2, 5.0), 5.5), DomainError);
}

TEST_CASE("ball volume", "[manifold]") {
  CHECK(ball_volume(euclid(2), 1.0) == Approx(kPi).epsilon(1e-12));
  CHECK(ball_volume(euclid(3), 1.0) == Approx(4 * kPi / 3).epsilon(1e-12));
  CHECK(ball_volume(hyperbolic(2), 1.0) == Approx(2 * kPi * (oracle::cosh_series(1.0) - 1.0)).epsilon(1e-12));
  CHECK(ball_volume(euclid(5), 1.0) == Approx(8 * kPi * kPi / 15).epsilon(1e-12));
}

TEST_CASE("ball volume is increasing and differentiates to the sphere area", "[manifold]") {
  for (const ModelManifold& m : {euclid(2), euclid(3), hyperbolic(2), hyperbolic(3), paraboloid(2), paraboloid(3)}) {
    double prev = 0.0;
    for (double r = 0.25; r <= 5.0; r += 0.25) {
      const double v = ball_volume(m, r);
      CHECK(v > prev);
      prev = v;
      const double d = 1e-4;
      const double deriv = (ball_volume(m, r + d) - ball_volume(m, r - d)) / (2 * d);
      CHECK(deriv == Approx(sphere_area(m, r)).epsilon(1e-6));
    }
  }
}

TEST_CASE("laplacian of the distance function", "[manifold]") {
  CHECK(laplacian_of_r(euclid(3), 2.0) == Approx(1.0).epsilon(1e-15));
  CHECK(1e-4 * laplacian_of_r(euclid(2), 1e-4) == 1.0);
  CHECK(laplacian_of_r(hyperbolic(2), 1.0) ==
        Approx(oracle::cosh_series(1.0) / oracle::sinh_series(1.0)).epsilon(1e-13));
  CHECK(laplacian_of_r(hyperbolic(2), 1.0) == Approx(1.3130).margin(1e-4));
  for (int n : {2, 3, 5}) {
    for (const ModelManifold& m : {euclid(n), hyperbolic(n), paraboloid(n)})
      CHECK(std::abs(1e-4 * laplacian_of_r(m, 1e-4) - (n - 1)) <= 1e-6);
  }
  CHECK_THROWS_AS(laplacian_of_r(euclid(2), 0.0), DomainError);
}

TEST_CASE("curvatures", "[manifold]") {
  const Curvatures e = curvatures(euclid(3), 1.7);
  CHECK(e.radial == 0.0);
  CHECK(*e.tangential == 0.0);
  CHECK(e.radial_ricci == 0.0);

  const Curvatures h = curvatures(hyperbolic(3), 1.0);
  CHECK(h.radial == Approx(-1.0).epsilon(1e-12));
  CHECK(*h.tangential == Approx(-1.0).epsilon(1e-12));
  CHECK(h.radial_ricci == Approx(-2.0).epsilon(1e-12));

  const Curvatures h2 = curvatures(hyperbolic(2), 1.0);
  CHECK_FALSE(h2.tangential_applicable());

  const ModelManifold p = paraboloid(2);
  const double hp = p.h(1.0);
  CHECK(curvatures(p, 1.0).radial == Approx(1.0 / ((1 + hp * hp) * (1 + hp * hp))).epsilon(1e-10));
  CHECK(curvatures(p, 1.0).radial > 0.0);
}

TEST_CASE("curvature hypotheses", "[manifold]") {
  const auto grid = linspace(0.1, 5.0, 50);
  CHECK(check_hypotheses(euclid(2), CurvatureHypothesis::RicciNonneg, grid).holds);
  CHECK(check_hypotheses(euclid(3), CurvatureHypothesis::RicciNonneg, grid).holds);
  const HypothesisVerdict hv = check_hypotheses(hyperbolic(2), CurvatureHypothesis::RicciNonneg, grid);
  CHECK_FALSE(hv.holds);
  CHECK(hv.worst_value == Approx(-1.0).epsilon(1e-9));
  CHECK(check_hypotheses(paraboloid(2), CurvatureHypothesis::SectionalPositive, grid).holds);
  CHECK(check_hypotheses(paraboloid(3), CurvatureHypothesis::SectionalPositive, grid).holds);
  CHECK_FALSE(check_hypotheses(euclid(2), CurvatureHypothesis::SectionalPositive, grid).holds);
}

TEST_CASE("warping derivatives agree with centered differences", "[manifold]") {
  std::mt19937_64 rng(7);
  for (const ModelManifold& m : {euclid(2), hyperbolic(2, 6.0), paraboloid(2, 10.0)}) {
    std::uniform_real_distribution<double> dist(1e-3, m.r_max());
    for (int i = 0; i < 1000; ++i) {
      const double r = dist(rng);
      const double d = 1e-5 * std::max(1.0, r);
      const double fd = (m.h(r + d) - m.h(r - d)) / (2 * d);
      CHECK(std::abs(m.dh(r) - fd) <= 1e-6 * std::max(1.0, std::abs(m.dh(r))));
    }
  }
}

TEST_CASE("paraboloid warping", "[manifold]") {
  const ModelManifold p = paraboloid(2, 20.0);
  for (double r : {1e-6, 1e-3, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0}) {
    const double h = p.h(r);
    CHECK(std::abs(p.dh(r) - 1.0 / std::sqrt(1.0 + h * h)) <= 1e-10);
    CHECK(oracle::paraboloid_arc(h) == Approx(r).epsilon(1e-10));
    CHECK(h <= r);
  }
}

TEST_CASE("custom warping functions", "[manifold]") {
  const ModelManifold c(2, WarpingFunction::custom("sinh(r)"), 5.0);
  const ModelManifold h = hyperbolic(2, 5.0);
  for (double r : {0.1, 1.0, 3.0}) {
    CHECK(c.h(r) == Approx(h.h(r)).epsilon(1e-14));
    CHECK(c.dh(r) == Approx(h.dh(r)).epsilon(1e-8));
    CHECK(c.ddh(r) == Approx(h.ddh(r)).epsilon(1e-5));
  }
  CHECK_THROWS_AS(ModelManifold(2, WarpingFunction::custom("2*r"), 5.0), DomainError);
  CHECK_THROWS_AS(ModelManifold(2, WarpingFunction::custom("r + 1"), 5.0), DomainError);
  CHECK_THROWS_AS(ModelManifold(2, WarpingFunction::custom("sin(r)"), 5.0), DomainError);
  CHECK_THROWS_AS(WarpingFunction::custom("r +"), ParseError);
  CHECK_THROWS_AS(WarpingFunction::custom("x1"), ParseError);
  CHECK_THROWS_AS(ModelManifold(1, WarpingFunction::euclidean(), 5.0), DomainError);
  CHECK_THROWS_AS(ModelManifold(2, WarpingFunction::euclidean(), 0.0), DomainError);
  CHECK_THROWS_AS(WarpingFunction::hyperbolic(0.0), DomainError);
}

TEST_CASE("unit sphere measure", "[manifold]") {
  CHECK(unit_sphere_measure(2) == Approx(2 * kPi).epsilon(1e-14));
  CHECK(unit_sphere_measure(3) == Approx(4 * kPi).epsilon(1e-14));
  CHECK(unit_sphere_measure(4) == Approx(2 * kPi * kPi).epsilon(1e-14));
  CHECK(unit_ball_volume(3) == Approx(4 * kPi / 3).epsilon(1e-14));
}
