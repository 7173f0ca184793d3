#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/legendre.hpp>

#include "polelab/errors.hpp"

namespace polelab {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Total measure of the unit (n-1)-sphere in R^n: 2 pi^{n/2} / Gamma(n/2).
inline double unit_sphere_measure(int n) {
  if (n < 1) throw DomainError("unit_sphere_measure: n must be >= 1");
  const double half = 0.5 * n;
  return 2.0 * std::pow(kPi, half) / std::tgamma(half);
}

/// Volume of the Euclidean unit n-ball.
inline double unit_ball_volume(int n) { return unit_sphere_measure(n) / n; }

struct GaussLegendreRule {
  std::vector<double> nodes;    // on [-1, 1], ascending
  std::vector<double> weights;  // sum to 2
};

inline GaussLegendreRule gauss_legendre(int order) {
  if (order < 1) throw DomainError("gauss_legendre: order must be >= 1");
  // legendre_p_zeros returns the non-negative zeros in ascending order
  const std::vector<double> zeros = boost::math::legendre_p_zeros<double>(order);
  GaussLegendreRule rule;
  rule.nodes.reserve(order);
  rule.weights.reserve(order);
  auto weight = [order](double x) {
    const double dp = boost::math::legendre_p_prime(order, x);
    return 2.0 / ((1.0 - x * x) * dp * dp);
  };
  for (auto it = zeros.rbegin(); it != zeros.rend(); ++it) {
    if (*it == 0.0) continue;
    rule.nodes.push_back(-*it);
    rule.weights.push_back(weight(*it));
  }
  if (order % 2 == 1) {
    rule.nodes.push_back(0.0);
    rule.weights.push_back(weight(0.0));
  }
  for (double z : zeros) {
    if (z == 0.0) continue;
    rule.nodes.push_back(z);
    rule.weights.push_back(weight(z));
  }
  return rule;
}

/// Adaptive 1-D integral on [a, b] (Gauss-Kronrod 31).
template <class F>
double integrate_adaptive(F&& f, double a, double b, double rel_tol = 1e-13) {
  if (a == b) return 0.0;
  double error = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      std::forward<F>(f), a, b, 20, rel_tol, &error);
}

inline std::vector<double> linspace(double lo, double hi, int count) {
  if (count < 1) throw DomainError("linspace: count must be >= 1");
  if (count == 1) return {lo};
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i) out[i] = lo + (hi - lo) * i / (count - 1);
  out.back() = hi;
  return out;
}

inline std::vector<double> geomspace(double lo, double hi, int count) {
  if (lo <= 0.0 || hi <= 0.0) throw DomainError("geomspace: bounds must be positive");
  if (count < 1) throw DomainError("geomspace: count must be >= 1");
  if (count == 1) return {lo};
  std::vector<double> out(count);
  const double ratio = std::log(hi / lo);
  for (int i = 0; i < count; ++i) out[i] = lo * std::exp(ratio * i / (count - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

enum class Spacing { Linear, Geometric };

/// Radius grid description as it appears in scenario configs.
struct RadiusGrid {
  double lo = 1.0;
  double hi = 10.0;
  int count = 10;
  Spacing spacing = Spacing::Linear;

  std::vector<double> radii() const {
    return spacing == Spacing::Linear ? linspace(lo, hi, count) : geomspace(lo, hi, count);
  }
};

}  // namespace polelab
