#pragma once

#include <array>
#include <cmath>

#include "polelab/numeric.hpp"

namespace polelab {

using Vec3 = std::array<double, 3>;

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }
inline Vec3 operator-(const Vec3& a) { return {-a[0], -a[1], -a[2]}; }

/// Unit tangent direction at the pole. In dimension 2 the third component is zero and the
/// direction is the angle theta; in dimension >= 4 only radial fields are supported and the
/// stored vector is a placeholder.
class Direction {
 public:
  Direction() = default;

  static Direction from_angle(double theta) { return Direction({std::cos(theta), std::sin(theta), 0.0}); }

  static Direction from_vector(const Vec3& v) {
    const double n = norm(v);
    if (!(n > 0.0)) throw DomainError("Direction: zero vector");
    return Direction((1.0 / n) * v);
  }

  const Vec3& vec() const { return v_; }
  double operator[](int i) const { return v_[i]; }

  /// theta in [0, 2 pi) for planar directions.
  double angle() const {
    double t = std::atan2(v_[1], v_[0]);
    if (t < 0.0) t += kTwoPi;
    return t;
  }

  Direction opposite() const { return Direction(-v_); }

 private:
  explicit Direction(const Vec3& v) : v_(v) {}
  Vec3 v_{1.0, 0.0, 0.0};
};

/// Point (r, xi) in geodesic polar coordinates about the pole.
struct PolarPoint {
  double r = 0.0;
  Direction xi;

  /// Normal coordinate x_i = r xi_i (1-based i as in field expressions).
  double coordinate(int i) const { return i >= 1 && i <= 3 ? r * xi[i - 1] : 0.0; }
  Vec3 normal_coordinates() const { return r * xi.vec(); }
};

/// Orthonormal tangent basis of the unit sphere at xi (dimension 3).
inline std::pair<Vec3, Vec3> sphere_tangent_basis(const Vec3& xi) {
  int axis = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(xi[i]) < std::abs(xi[axis])) axis = i;
  Vec3 a{0.0, 0.0, 0.0};
  a[axis] = 1.0;
  Vec3 t1 = a - dot(a, xi) * xi;
  t1 = (1.0 / norm(t1)) * t1;
  return {t1, cross(xi, t1)};
}

/// Planar unit tangent d xi / d theta.
inline Vec3 planar_tangent(const Vec3& xi) { return {-xi[1], xi[0], 0.0}; }

}  // namespace polelab
