#pragma once

#include <vector>

#include "polelab/numeric.hpp"
#include "polelab/point.hpp"

namespace polelab {

/// Quadrature on the unit (n-1)-sphere. Weights sum to its total measure.
struct SphereRule {
  int dim = 2;
  std::vector<Direction> nodes;
  std::vector<double> weights;
  int exactness = 0;  ///< polynomial / trigonometric degree integrated exactly
  bool radial_only = false;

  double total_weight() const {
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
  }
};

/// n = 2: `order` equispaced nodes on the circle (trapezoid).
/// n = 3: Gauss-Legendre in cos(theta) with `order` nodes times trapezoid in phi with 2*order.
inline SphereRule sphere_rule(int n, int order) {
  if (n != 2 && n != 3) throw DomainError("sphere_rule: only n = 2 or 3 has angular quadrature");
  if (order < 4) throw DomainError("sphere_rule: order must be >= 4");
  SphereRule rule;
  rule.dim = n;
  if (n == 2) {
    rule.nodes.reserve(order);
    for (int k = 0; k < order; ++k) rule.nodes.push_back(Direction::from_angle(kTwoPi * k / order));
    rule.weights.assign(order, kTwoPi / order);
    rule.exactness = order - 1;
    return rule;
  }
  const GaussLegendreRule gl = gauss_legendre(order);
  const int azimuths = 2 * order;
  const double dphi = kTwoPi / azimuths;
  rule.nodes.reserve(static_cast<std::size_t>(order) * azimuths);
  for (int i = 0; i < order; ++i) {
    const double z = gl.nodes[i];
    const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
    for (int j = 0; j < azimuths; ++j) {
      const double phi = dphi * j;
      rule.nodes.push_back(Direction::from_vector({z, s * std::cos(phi), s * std::sin(phi)}));
      rule.weights.push_back(gl.weights[i] * dphi);
    }
  }
  rule.exactness = 2 * order - 1;
  return rule;
}

/// Single-node rule carrying the whole sphere measure; exact for radial integrands in any n.
inline SphereRule radial_rule(int n) {
  SphereRule rule;
  rule.dim = n;
  rule.nodes = {Direction{}};
  rule.weights = {unit_sphere_measure(n)};
  rule.radial_only = true;
  return rule;
}

inline constexpr int default_sphere_order(int n) { return n == 2 ? 64 : 16; }

inline SphereRule default_rule(int n, int order = 0) {
  if (n > 3) return radial_rule(n);
  return sphere_rule(n, order > 0 ? order : default_sphere_order(n));
}

/// Direction set for grid searches (sup, sign and subharmonicity scans). Planar: equispaced.
/// n = 3: Fibonacci lattice about the x1 axis plus the six coordinate axes.
inline std::vector<Direction> direction_grid(int n, int count) {
  std::vector<Direction> out;
  if (n > 3) {
    out.emplace_back();
    return out;
  }
  if (n == 2) {
    for (int k = 0; k < count; ++k) out.push_back(Direction::from_angle(kTwoPi * k / count));
    return out;
  }
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  for (int k = 0; k < count; ++k) {
    const double z = 1.0 - (2.0 * k + 1.0) / count;
    const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * k;
    out.push_back(Direction::from_vector({z, s * std::cos(phi), s * std::sin(phi)}));
  }
  for (int axis = 0; axis < 3; ++axis) {
    Vec3 e{0.0, 0.0, 0.0};
    e[axis] = 1.0;
    out.push_back(Direction::from_vector(e));
    out.push_back(Direction::from_vector(-e));
  }
  return out;
}

}  // namespace polelab
