#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "polelab/field.hpp"
#include "polelab/symmetrization.hpp"

using namespace polelab;
using Catch::Approx;

namespace {
ModelManifold euclid(int n, double r_max = 10.0) { return ModelManifold(n, WarpingFunction::euclidean(), r_max); }
ModelManifold hyperbolic(int n, double r_max = 5.0) { return ModelManifold(n, WarpingFunction::hyperbolic(1.0), r_max); }
ScalarField catalog(const std::string& name, int n) { return make_catalog_field(name, {}, n); }
}  // namespace

TEST_CASE("profile examples", "[symmetrization]") {
  const ModelManifold m = euclid(2);
  const auto grid = linspace(0.0, 5.0, 21);
  const RadialProfile p = symmetrize(catalog("x1_squared", 2), m, grid, default_rule(2));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = grid[i];
    CHECK(p.v[i] == Approx(r * r / 2).margin(1e-14));
    CHECK(p.dv[i] == Approx(r).margin(1e-14));
    CHECK(p.ddv[i] == Approx(1.0).epsilon(1e-14));
    CHECK(p.lap_v[i] == Approx(2.0).epsilon(1e-13));
  }
  const RadialProfile q = symmetrize(catalog("r_power", 3), hyperbolic(3), linspace(0.0, 4.0, 9), default_rule(3));
  for (std::size_t i = 0; i < q.size(); ++i) {
    CHECK(q.v[i] == Approx(q.r[i] * q.r[i]).margin(1e-14));
    CHECK(q.dv[i] == Approx(2 * q.r[i]).margin(1e-14));
  }
  const auto lap = radial_laplacian(symmetrize(catalog("r_power", 3), euclid(3), linspace(0.0, 4.0, 9), default_rule(3)),
                                    euclid(3));
  for (double x : lap) CHECK(x == Approx(6.0).epsilon(1e-13));
  const RadialProfile c = symmetrize(catalog("constant", 2), hyperbolic(2), linspace(0.0, 4.0, 9), default_rule(2));
  for (double x : c.lap_v) CHECK(x == 0.0);
  CHECK(c.v[0] == 1.0);
}

TEST_CASE("radial laplacian identity holds by construction", "[symmetrization]") {
  const ModelManifold m = hyperbolic(2);
  const RadialProfile p = symmetrize(catalog("exp_x1", 2), m, default_profile_grid(m), default_rule(2));
  const auto lap = radial_laplacian(p, m);
  for (std::size_t i = 1; i < p.size(); ++i)
    CHECK(std::abs(lap[i] - p.lap_v[i]) <= 1e-10 * std::max(1.0, std::abs(lap[i])));
  CHECK(p.r.front() == 0.0);
  CHECK(p.size() == 201);
}

TEST_CASE("bessel profile", "[symmetrization]") {
  const ModelManifold m = euclid(2);
  const auto grid = linspace(0.0, 4.0, 81);
  const RadialProfile p = symmetrize(catalog("exp_x1", 2), m, grid, default_rule(2));
  double v_err = 0.0, lap_err = 0.0, dv_err = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    v_err = std::max(v_err, std::abs(p.v[i] - oracle::bessel_i0(grid[i])));
    dv_err = std::max(dv_err, std::abs(p.dv[i] - oracle::bessel_i1(grid[i])));
    lap_err = std::max(lap_err, std::abs(p.lap_v[i] - oracle::bessel_i0(grid[i])));
  }
  CHECK(v_err <= 1e-6);
  CHECK(dv_err <= 1e-6);
  CHECK(lap_err <= 1e-5);
  CHECK(p.value_at(1.0) == Approx(1.2660658).margin(1e-7));
}

TEST_CASE("laplacian consistency over the catalog", "[symmetrization]") {
  const std::vector<ScalarField (*)(int)> makers = {
      [](int n) { return catalog("r_power", n); },  [](int n) { return catalog("x1_squared", n); },
      [](int n) { return catalog("exp_x1", n); },   [](int n) { return catalog("affine_x1", n); },
      [](int n) { return catalog("constant", n); }, [](int n) { return catalog("quadratic_x1", n); }};
  for (int n : {2, 3}) {
    for (const ModelManifold& m : {euclid(n), hyperbolic(n)}) {
      const auto grid = linspace(0.05, 0.9 * m.r_max(), 40);
      for (auto make : makers) {
        const ScalarField u = make(n);
        const RadialProfile p = symmetrize(u, m, grid, default_rule(n));
        const LaplacianConsistency lc = laplacian_consistency(u, m, p, default_rule(n));
        INFO(u.source().name << " " << to_string(m.warping().kind()) << " n=" << n << " at r=" << lc.at_radius);
        CHECK(lc.max_relative <= 1e-5);
      }
    }
  }
}

TEST_CASE("consistency examples", "[symmetrization]") {
  const ModelManifold m = euclid(2);
  const auto grid = linspace(0.1, 5.0, 30);
  const ScalarField x2 = catalog("x1_squared", 2);
  CHECK(laplacian_consistency(x2, m, symmetrize(x2, m, grid, default_rule(2)), default_rule(2)).max_relative <= 1e-8);
  const ScalarField e = catalog("exp_x1", 2);
  CHECK(laplacian_consistency(e, m, symmetrize(e, m, grid, default_rule(2)), default_rule(2)).max_relative <= 1e-6);
  const ScalarField r3 = make_catalog_field("r_power", {{"alpha", 3}}, 2);
  const RadialProfile p = symmetrize(r3, m, grid, default_rule(2));
  for (std::size_t i = 0; i < grid.size(); ++i) CHECK(p.lap_v[i] == Approx(9 * grid[i]).epsilon(1e-12));
  CHECK(laplacian_consistency(r3, m, p, default_rule(2)).max_relative <= 1e-8);
}

TEST_CASE("harmonic fields have constant profile", "[symmetrization]") {
  const ModelManifold m = euclid(2);
  const RadialProfile p = symmetrize(catalog("affine_x1", 2), m, default_profile_grid(m), default_rule(2));
  for (double v : p.v) CHECK(std::abs(v - 1.0) <= 1e-8);
  CHECK(profile_subharmonicity(p, 1e-7).holds);
  CHECK(std::abs(profile_subharmonicity(p, 1e-7).worst) <= 1e-7);
}

TEST_CASE("symmetrization is linear and fixes radial fields", "[symmetrization]") {
  const ModelManifold m = hyperbolic(3);
  const auto grid = default_profile_grid(m, 50);
  const SphereRule rule = default_rule(3);
  const ScalarField u = catalog("exp_x1", 3), g = catalog("x1_squared", 3);
  const double a = 1.5, b = -2.0;
  const RadialProfile pc = symmetrize(combine(a, u, b, g), m, grid, rule);
  const RadialProfile pu = symmetrize(u, m, grid, rule), pg = symmetrize(g, m, grid, rule);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(std::abs(pc.v[i] - (a * pu.v[i] + b * pg.v[i])) <= 1e-10 * std::max(1.0, std::abs(pc.v[i])));
    CHECK(std::abs(pc.dv[i] - (a * pu.dv[i] + b * pg.dv[i])) <= 1e-10 * std::max(1.0, std::abs(pc.dv[i])));
  }

  const ScalarField rad = make_expression_field("r^2 + cosh(r)", 3);
  const RadialProfile pr = symmetrize(rad, m, grid, rule);
  for (std::size_t i = 0; i < grid.size(); ++i) CHECK(std::abs(pr.v[i] - rad(grid[i], Direction{})) <= 1e-10);
}

TEST_CASE("origin limits", "[symmetrization]") {
  const OriginLimits a = origin_limits(catalog("x1_squared", 2), euclid(2), default_rule(2));
  CHECK(std::abs(a.dv0) <= 1e-6);
  CHECK(std::abs(a.ddv0 - 1.0) <= 1e-4);
  CHECK(std::abs(a.lap_limit - 2.0) <= 1e-4);
  REQUIRE(a.pole_laplacian);
  CHECK(a.ddv0_deviation() <= 1e-4);

  const OriginLimits b = origin_limits(catalog("r_power", 3), euclid(3), default_rule(3));
  CHECK(std::abs(b.ddv0 - 2.0) <= 1e-4);
  CHECK(*b.pole_laplacian == Approx(6.0));

  const OriginLimits c = origin_limits(catalog("constant", 2), hyperbolic(2), default_rule(2));
  CHECK(c.dv0 == 0.0);
  CHECK(c.ddv0 == 0.0);
  CHECK(c.lap_limit == 0.0);

  // expression field: finite differences plus the small-sphere pole Laplacian
  const OriginLimits d = origin_limits(make_expression_field("x1^2", 2), euclid(2), default_rule(2));
  CHECK(std::abs(d.dv0) <= 1e-4);
  CHECK(std::abs(d.ddv0 - 1.0) <= 1e-3);
  CHECK(std::abs(d.lap_limit - 2.0) <= 1e-3);
  CHECK(std::abs(*d.pole_laplacian - 2.0) <= 1e-3);
}

TEST_CASE("subharmonic catalog fields keep a subharmonic monotone profile", "[symmetrization]") {
  for (int n : {2, 3}) {
    for (const ModelManifold& m : {euclid(n), hyperbolic(n)}) {
      for (const CatalogEntry& entry : field_catalog()) {
        const ScalarField u = make_catalog_field(entry.name, {}, n);
        const RadialProfile p = symmetrize(u, m, default_profile_grid(m, 60), default_rule(n));
        INFO(entry.name << " " << to_string(m.warping().kind()) << " n=" << n);
        if (is_subharmonic_on(u, m, 1e-2, m.r_max(), {}, 1e-7).holds) {
          CHECK(profile_subharmonicity(p, 1e-7).holds);
          CHECK(monotonicity(p, 1e-7).holds);
        }
      }
    }
  }
  const ScalarField neg = catalog("neg_r2", 2);
  const RadialProfile pn = symmetrize(neg, euclid(2), default_profile_grid(euclid(2), 40), default_rule(2));
  CHECK_FALSE(monotonicity(pn, 1e-7).holds);
  CHECK_FALSE(profile_subharmonicity(pn, 1e-7).holds);
  CHECK_FALSE(is_subharmonic_on(neg, euclid(2), 1e-2, 10.0, {}, 1e-7).holds);
  const RadialProfile pe = symmetrize(catalog("exp_x1", 2), euclid(2), default_profile_grid(euclid(2), 40),
                                      default_rule(2));
  CHECK(monotonicity(pe, 1e-7).holds);
}

TEST_CASE("profile csv", "[symmetrization]") {
  const ModelManifold m = euclid(2);
  const ScalarField u = catalog("x1_squared", 2);
  const RadialProfile p = symmetrize(u, m, {0.0, 0.5, 1.0}, default_rule(2));
  std::ostringstream os;
  write_profile_csv(os, p, laplacian_consistency(u, m, p, default_rule(2)).mean_lap_u);
  const std::string csv = os.str();
  CHECK(csv.rfind("r,v,dv,ddv,lap_v,mean_lap_u\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
  std::istringstream rows(csv);
  std::string line;
  std::getline(rows, line);
  std::getline(rows, line);
  std::getline(rows, line);
  double v[6];
  char comma;
  std::istringstream row(line);
  row >> v[0] >> comma >> v[1] >> comma >> v[2] >> comma >> v[3] >> comma >> v[4] >> comma >> v[5];
  CHECK(v[0] == 0.5);
  CHECK(v[1] == Approx(0.125).epsilon(1e-14));
  CHECK(v[4] == Approx(2.0).epsilon(1e-14));
  CHECK(v[5] == Approx(2.0).epsilon(1e-14));
}
