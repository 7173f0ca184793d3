#include <catch_amalgamated.hpp>

#include <cmath>

#include "polelab/geodesic.hpp"

using namespace polelab;
using Catch::Approx;

namespace {
ModelManifold euclid(int n, double r_max = 20.0) { return ModelManifold(n, WarpingFunction::euclidean(), r_max); }

Tangent radial(double t) { return Tangent{t, 0.0, {}}; }
Tangent angular(double t) { return Tangent{0.0, t, {}}; }

double cartesian_gap(const PolarPoint& p, const Vec3& expected) { return norm(p.normal_coordinates() - expected); }
}  // namespace

TEST_CASE("exp map examples", "[geodesic]") {
  const ModelManifold m = euclid(2);
  const PolarPoint o{0.0, Direction::from_angle(0.0)};
  const PolarPoint a = exp_map(m, o, Tangent::from_vector(o.xi, {0.0, 1.5, 0.0}));
  CHECK(a.r == Approx(1.5).epsilon(1e-12));
  CHECK(a.xi[1] == Approx(1.0).epsilon(1e-12));

  const PolarPoint x{1.0, Direction::from_angle(0.0)};
  const PolarPoint b = exp_map(m, x, radial(1.0));
  CHECK(b.r == Approx(2.0).epsilon(1e-12));
  CHECK(b.xi[0] == Approx(1.0).epsilon(1e-12));

  const PolarPoint c = exp_map(m, x, angular(1.0));
  CHECK(c.r == Approx(std::sqrt(2.0)).epsilon(1e-10));
  CHECK(std::atan2(c.xi[1], c.xi[0]) == Approx(kPi / 4).epsilon(1e-10));

  CHECK(exp_map(m, x, Tangent{}).r == 1.0);
  CHECK_THROWS_AS(exp_map(ModelManifold(2, WarpingFunction::euclidean(), 1.5), x, radial(1.0)), RangeError);
}

TEST_CASE("geodesics through the pole", "[geodesic]") {
  const ModelManifold m = euclid(2);
  const PolarPoint x{1.0, Direction::from_angle(0.3)};
  const PolarPoint y = exp_map(m, x, radial(-3.0));
  CHECK(y.r == Approx(2.0).epsilon(1e-10));
  CHECK(y.xi[0] == Approx(-std::cos(0.3)).epsilon(1e-10));

  const ModelManifold h(3, WarpingFunction::hyperbolic(1.0), 10.0);
  const PolarPoint z{0.5, Direction::from_vector({0.0, 0.0, 1.0})};
  const PolarPoint w = exp_map(h, z, radial(-2.0));
  CHECK(w.r == Approx(1.5).epsilon(1e-10));
  CHECK(w.xi[2] == Approx(-1.0).epsilon(1e-10));
}

TEST_CASE("radial geodesics from the pole are r(s) = s", "[geodesic]") {
  for (const ModelManifold& m : {euclid(2), ModelManifold(2, WarpingFunction::hyperbolic(1.0), 20.0),
                                 ModelManifold(3, WarpingFunction::paraboloid(), 20.0)}) {
    const Trajectory t = integrate_geodesic(m, {0.0, Direction::from_angle(0.0)}, radial(1.0), 10.0, 50);
    for (const auto& s : t.samples) CHECK(std::abs(s.r - s.t) <= 1e-10);
  }
}

TEST_CASE("euclidean geodesics are straight lines", "[geodesic]") {
  for (int n : {2, 3}) {
    const ModelManifold m = euclid(n);
    double worst = 0.0;
    for (const Trajectory& t : sample_geodesics(m, 50, 10.0, 42, 8)) {
      REQUIRE_FALSE(t.escaped);
      const GeodesicSample& s0 = t.samples.front();
      const Vec3 x0 = s0.r * t.e1;
      const Vec3 v0 = s0.dr * t.e1 + s0.r * s0.dphi * t.e2;
      for (std::size_t k = 0; k < t.samples.size(); ++k)
        worst = std::max(worst, cartesian_gap(t.point(k), x0 + t.samples[k].t * v0));
    }
    CHECK(worst <= 1e-8);
  }
}

TEST_CASE("conservation across built-in manifolds", "[geodesic]") {
  for (int n : {2, 3}) {
    for (const ModelManifold& m : {euclid(n), ModelManifold(n, WarpingFunction::hyperbolic(1.0), 20.0),
                                   ModelManifold(n, WarpingFunction::paraboloid(), 20.0)}) {
      double clairaut = 0.0, speed = 0.0;
      for (const Trajectory& t : sample_geodesics(m, 100, 10.0, 7, 4)) {
        clairaut = std::max(clairaut, t.clairaut_drift);
        speed = std::max(speed, t.speed_drift);
      }
      INFO(to_string(m.warping().kind()) << " n=" << n);
      CHECK(clairaut <= 1e-8);
      CHECK(speed <= 1e-8);
    }
  }
}

TEST_CASE("RK4 step halving", "[geodesic]") {
  // Euclidean: exact endpoint from the Cartesian line.
  const ModelManifold m = euclid(2);
  const PolarPoint x{1.0, Direction::from_angle(0.0)};
  Tangent w{0.6, 0.8, {}};
  const Vec3 exact = Vec3{1.0, 0.0, 0.0} + 4.0 * Vec3{0.6, 0.8, 0.0};
  auto err = [&](double step) {
    return cartesian_gap(integrate_geodesic(m, x, w, 4.0, 1, {step, 1e-4}).endpoint(), exact);
  };
  const double e1 = err(0.1), e2 = err(0.05);
  CHECK(e1 / e2 >= 12.0);

  // Hyperbolic: Richardson-style ratio of successive differences.
  const ModelManifold h(2, WarpingFunction::hyperbolic(1.0), 20.0);
  auto end = [&](double step) { return integrate_geodesic(h, x, w, 4.0, 1, {step, 1e-4}).endpoint(); };
  const PolarPoint p1 = end(0.2), p2 = end(0.1), p3 = end(0.05);
  const double d12 = norm(p1.normal_coordinates() - p2.normal_coordinates());
  const double d23 = norm(p2.normal_coordinates() - p3.normal_coordinates());
  CHECK(d12 / d23 >= 12.0);
}

TEST_CASE("hyperbolic triangle inequality", "[geodesic]") {
  const ModelManifold h(2, WarpingFunction::hyperbolic(1.0), 20.0);
  for (const Trajectory& t : sample_geodesics(h, 100, 10.0, 3, 2))
    CHECK(t.samples.back().r <= t.samples.front().r + 10.0 + 1e-6);
}

TEST_CASE("sampling is deterministic", "[geodesic]") {
  const ModelManifold p(3, WarpingFunction::paraboloid(), 20.0);
  const auto a = sample_geodesics(p, 5, 3.0, 9, 4);
  const auto b = sample_geodesics(p, 5, 3.0, 9, 4);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].samples.back().r == b[i].samples.back().r);
    CHECK(a[i].samples.back().phi == b[i].samples.back().phi);
  }
  CHECK_THROWS_AS(sample_geodesics(p, 0, 3.0, 9), DomainError);
}
