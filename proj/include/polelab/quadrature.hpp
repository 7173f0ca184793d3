#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "polelab/errors.hpp"
#include "polelab/field.hpp"
#include "polelab/manifold.hpp"
#include "polelab/numeric.hpp"
#include "polelab/sphere_rule.hpp"

namespace polelab {

namespace detail {
inline void require_finite(double v, double r, const Direction& xi, const char* what) {
  if (!std::isfinite(v))
    throw EvaluationError(std::string(what) + ": non-finite integrand at r = " + expr::format_number(r) +
                          ", xi = (" + expr::format_number(xi[0]) + ", " + expr::format_number(xi[1]) + ", " +
                          expr::format_number(xi[2]) + ")");
}
}  // namespace detail

/// Weighted average of f(r, xi) over the rule's nodes. Fixed summation order.
template <class F>
double sphere_mean_of(F&& f, double r, const SphereRule& rule) {
  double acc = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    const double v = f(PolarPoint{r, rule.nodes[k]});
    detail::require_finite(v, r, rule.nodes[k], "sphere_mean");
    acc += rule.weights[k] * v;
  }
  return acc / rule.total_weight();
}

/// Mean of u over the geodesic sphere of radius r; u(pole) at r = 0.
inline double sphere_mean(const ScalarField& u, const ModelManifold& m, double r, const SphereRule& rule) {
  if (r < 0.0 || r > m.r_max() * (1.0 + 1e-12)) throw DomainError("sphere_mean: r outside [0, r_max]");
  if (r == 0.0) return u(0.0, Direction{});
  if (u.radial()) return u(r, Direction{});
  if (rule.radial_only) throw DomainError("sphere_mean: direction-dependent field needs an angular rule");
  return sphere_mean_of([&](const PolarPoint& p) { return u(p); }, r, rule);
}

/// Integral of f over B_r: Gauss-Legendre in t over panels of length <= 1 (radial_order nodes
/// each) of sphere_mean(f, t) * Vol(dB_t).
template <class F>
double ball_integral(F&& f, const ModelManifold& m, double r, const SphereRule& rule, int radial_order = 64) {
  if (!(r > 0.0) || r > m.r_max() * (1.0 + 1e-12)) throw DomainError("ball_integral: r outside (0, r_max]");
  if (radial_order < 1) throw DomainError("ball_integral: radial_order must be >= 1");
  const GaussLegendreRule gl = gauss_legendre(radial_order);
  const int panels = std::max(1, static_cast<int>(std::ceil(r - 1e-12)));
  const double width = r / panels;
  const int n = m.dim();
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double a = p * width;
    double panel = 0.0;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
      const double t = a + 0.5 * width * (gl.nodes[i] + 1.0);
      const double area = m.omega() * std::pow(m.h(t), n - 1);
      panel += gl.weights[i] * sphere_mean_of(f, t, rule) * area;
    }
    total += 0.5 * width * panel;
  }
  return total;
}

/// Nodes of ball_integral, with their volume weights, for scans and node-wise integrands.
struct BallNode {
  PolarPoint point;
  double weight = 0.0;
};

inline std::vector<BallNode> ball_nodes(const ModelManifold& m, double r, const SphereRule& rule, int radial_order) {
  const GaussLegendreRule gl = gauss_legendre(radial_order);
  const int panels = std::max(1, static_cast<int>(std::ceil(r - 1e-12)));
  const double width = r / panels;
  const double total_w = rule.total_weight();
  std::vector<BallNode> nodes;
  nodes.reserve(static_cast<std::size_t>(panels) * gl.nodes.size() * rule.nodes.size());
  for (int p = 0; p < panels; ++p) {
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
      const double t = p * width + 0.5 * width * (gl.nodes[i] + 1.0);
      const double area = m.omega() * std::pow(m.h(t), m.dim() - 1);
      for (std::size_t k = 0; k < rule.nodes.size(); ++k)
        nodes.push_back({{t, rule.nodes[k]}, 0.5 * width * gl.weights[i] * area * rule.weights[k] / total_w});
    }
  }
  return nodes;
}

enum class RegionKind { Ball, Sphere };

struct Region {
  RegionKind kind = RegionKind::Ball;
  double r = 1.0;

  static Region ball(double r) { return {RegionKind::Ball, r}; }
  static Region sphere(double r) { return {RegionKind::Sphere, r}; }
};

struct SupDensity {
  int radii = 200;
  int directions = 256;
};

struct Extremum {
  double value = -std::numeric_limits<double>::infinity();
  PolarPoint at;
};

/// Grid estimate of sup (or inf with sign = -1) of g over the region; a lower estimate of the
/// true supremum. Ball grids include r = 0 and the boundary radius.
template <class G>
Extremum grid_extremum(G&& g, const ModelManifold& m, Region region, SupDensity density, bool radial,
                       double sign = 1.0) {
  if (region.r < 0.0 || region.r > m.r_max() * (1.0 + 1e-12)) throw DomainError("sup_on: radius outside [0, r_max]");
  const auto dirs = radial ? std::vector<Direction>{Direction{}} : direction_grid(m.dim(), density.directions);
  const std::vector<double> radii =
      region.kind == RegionKind::Sphere ? std::vector<double>{region.r} : linspace(0.0, region.r, density.radii);
  Extremum best;
  for (double r : radii) {
    for (const Direction& xi : r == 0.0 ? std::vector<Direction>{Direction{}} : dirs) {
      const double v = sign * g(PolarPoint{r, xi});
      detail::require_finite(v, r, xi, "sup_on");
      if (v > best.value) best = {v, {r, xi}};
    }
  }
  best.value *= sign;
  return best;
}

inline Extremum sup_on(const ScalarField& u, const ModelManifold& m, Region region, SupDensity density = {}) {
  return grid_extremum([&](const PolarPoint& p) { return u(p); }, m, region, density, u.radial());
}

inline Extremum inf_on(const ScalarField& u, const ModelManifold& m, Region region, SupDensity density = {}) {
  return grid_extremum([&](const PolarPoint& p) { return u(p); }, m, region, density, u.radial(), -1.0);
}

}  // namespace polelab
