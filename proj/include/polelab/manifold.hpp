#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "polelab/errors.hpp"
#include "polelab/expression.hpp"
#include "polelab/numeric.hpp"

namespace polelab {

enum class WarpingKind { Euclidean, Hyperbolic, Paraboloid, Custom };

inline const char* to_string(WarpingKind k) {
  switch (k) {
    case WarpingKind::Euclidean: return "euclidean";
    case WarpingKind::Hyperbolic: return "hyperbolic";
    case WarpingKind::Paraboloid: return "paraboloid";
    case WarpingKind::Custom: return "custom";
  }
  return "?";
}

/// Profile radius t of the paraboloid z = t^2/2 at arc length s from the vertex, i.e. the
/// solution of (t sqrt(1+t^2) + asinh t) / 2 = s. Safeguarded Newton on the bracket [0, s], run to
/// full precision so that quadratures over h see a smooth integrand.
inline double paraboloid_profile_radius(double s) {
  if (s <= 0.0) return 0.0;
  auto arc = [](double t) { return 0.5 * (t * std::sqrt(1.0 + t * t) + std::asinh(t)); };
  double lo = 0.0;
  double hi = s;  // arc(t) >= t
  double t = std::min(s, std::sqrt(2.0 * s));
  for (int iter = 0; iter < 100; ++iter) {
    const double f = arc(t) - s;
    if (f > 0.0)
      hi = t;
    else
      lo = t;
    double next = t - f / std::sqrt(1.0 + t * t);
    if (!(next >= lo && next <= hi)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - t);
    t = next;
    if (step <= 1e-15 * std::max(1.0, t)) break;
  }
  return t;
}

/// Warping function h of the model metric dr^2 + h(r)^2 dTheta^2, with h' and h''.
class WarpingFunction {
 public:
  using Fn = std::function<double(double)>;

  static WarpingFunction euclidean() {
    return WarpingFunction(
        WarpingKind::Euclidean, [](double r) { return r; }, [](double) { return 1.0; },
        [](double) { return 0.0; });
  }

  /// Constant curvature -a^2: h = sinh(a r) / a.
  static WarpingFunction hyperbolic(double a = 1.0) {
    if (!(a > 0.0)) throw DomainError("hyperbolic warping: curvature scale a must be > 0");
    WarpingFunction w(
        WarpingKind::Hyperbolic, [a](double r) { return std::sinh(a * r) / a; },
        [a](double r) { return std::cosh(a * r); }, [a](double r) { return a * std::sinh(a * r); });
    w.scale_ = a;
    return w;
  }

  /// Paraboloid of revolution parameterized by arc length along its profile.
  /// h' = (1+h^2)^{-1/2}, h'' = -h (1+h^2)^{-2}.
  static WarpingFunction paraboloid() {
    WarpingFunction w(
        WarpingKind::Paraboloid, [](double r) { return paraboloid_profile_radius(r); },
        [](double r) {
          const double h = paraboloid_profile_radius(r);
          return 1.0 / std::sqrt(1.0 + h * h);
        },
        [](double r) {
          const double h = paraboloid_profile_radius(r);
          const double q = 1.0 + h * h;
          return -h / (q * q);
        });
    w.h_dh_ = [](double r) {
      const double h = paraboloid_profile_radius(r);
      return std::pair{h, 1.0 / std::sqrt(1.0 + h * h)};
    };
    return w;
  }

  /// h given as an expression in r. Derivatives by central differences.
  static WarpingFunction custom(const std::string& h_expr) {
    auto e = std::make_shared<const expr::Expression>(expr::parse(h_expr, 0));
    auto h = [e](double r) { return e->at_radius(r); };
    auto d1 = [h](double r) {
      const double d = 1e-5 * std::max(1.0, std::abs(r));
      return (h(r + d) - h(r - d)) / (2.0 * d);
    };
    auto d2 = [h](double r) {
      const double d = 1e-4 * std::max(1.0, std::abs(r));
      return (h(r + d) - 2.0 * h(r) + h(r - d)) / (d * d);
    };
    WarpingFunction w(WarpingKind::Custom, h, d1, d2);
    w.expr_ = h_expr;
    return w;
  }

  double operator()(double r) const { return h_(r); }
  double deriv1(double r) const { return d1_(r); }
  double deriv2(double r) const { return d2_(r); }
  /// (h, h') together; one profile solve instead of two for the paraboloid.
  std::pair<double, double> with_deriv1(double r) const { return h_dh_ ? h_dh_(r) : std::pair{h_(r), d1_(r)}; }

  WarpingKind kind() const { return kind_; }
  double curvature_scale() const { return scale_; }
  const std::string& expression() const { return expr_; }

 private:
  WarpingFunction(WarpingKind kind, Fn h, Fn d1, Fn d2)
      : kind_(kind), h_(std::move(h)), d1_(std::move(d1)), d2_(std::move(d2)) {}

  WarpingKind kind_;
  Fn h_, d1_, d2_;
  std::function<std::pair<double, double>(double)> h_dh_;
  double scale_ = 1.0;
  std::string expr_;
};

/// Rotationally symmetric manifold with a pole: dimension, warping function, working radius.
class ModelManifold {
 public:
  ModelManifold(int dim, WarpingFunction h, double r_max)
      : dim_(dim), h_(std::move(h)), r_max_(r_max), omega_(0.0) {
    if (dim_ < 2) throw DomainError("ModelManifold: dimension must be >= 2");
    if (!(r_max_ > 0.0) || !std::isfinite(r_max_)) throw DomainError("ModelManifold: r_max must be > 0");
    omega_ = unit_sphere_measure(dim_);
    validate_pole();
  }

  int dim() const { return dim_; }
  double r_max() const { return r_max_; }
  const WarpingFunction& warping() const { return h_; }
  double h(double r) const { return h_(r); }
  double dh(double r) const { return h_.deriv1(r); }
  double ddh(double r) const { return h_.deriv2(r); }
  std::pair<double, double> h_dh(double r) const { return h_.with_deriv1(r); }

  /// Measure of the unit (n-1)-sphere.
  double omega() const { return omega_; }

  /// Full angular support (sphere quadrature, direction-dependent fields).
  bool angular_support() const { return dim_ <= 3; }

 private:
  void validate_pole() const {
    constexpr double probe = 1e-6;
    constexpr double tol = 1e-4;
    const double h0 = h_(0.0);
    const double slope = h_(probe) / probe;
    if (!std::isfinite(h0) || std::abs(h0) > tol)
      throw DomainError("warping function violates h(0) = 0");
    if (!std::isfinite(slope) || std::abs(slope - 1.0) > tol || std::abs(h_.deriv1(probe) - 1.0) > tol)
      throw DomainError("warping function violates h'(0) = 1");
    for (double r : linspace(r_max_ / 256.0, r_max_, 256)) {
      const double v = h_(r);
      if (!(v > 0.0) || !std::isfinite(v))
        throw DomainError("warping function not positive at r = " + expr::format_number(r));
    }
  }

  int dim_;
  WarpingFunction h_;
  double r_max_;
  double omega_;
};

namespace detail {
inline void require_radius(const ModelManifold& m, double r, const char* what) {
  if (!(r > 0.0)) throw DomainError(std::string(what) + ": r must be > 0");
  if (r > m.r_max() * (1.0 + 1e-12))
    throw DomainError(std::string(what) + ": r exceeds the working radius");
}
}  // namespace detail

/// Vol(dB_r) = omega_{n-1} h(r)^{n-1}.
inline double sphere_area(const ModelManifold& m, double r) {
  detail::require_radius(m, r, "sphere_area");
  return m.omega() * std::pow(m.h(r), m.dim() - 1);
}

/// Vol(B_r) as the integral of sphere areas over [0, r].
inline double ball_volume(const ModelManifold& m, double r) {
  detail::require_radius(m, r, "ball_volume");
  const int n = m.dim();
  const double omega = m.omega();
  return integrate_adaptive([&](double t) { return omega * std::pow(m.h(t), n - 1); }, 0.0, r);
}

/// Laplacian of the distance function: (n-1) h'/h.
inline double laplacian_of_r(const ModelManifold& m, double r) {
  detail::require_radius(m, r, "laplacian_of_r");
  return (m.dim() - 1) * m.dh(r) / m.h(r);
}

struct Curvatures {
  double radial = 0.0;                  ///< sectional curvature of planes containing d/dr
  std::optional<double> tangential;     ///< planes tangent to the sphere; n >= 3 only
  double radial_ricci = 0.0;            ///< Ric(d/dr, d/dr)
  std::optional<double> tangential_ricci;

  bool tangential_applicable() const { return tangential.has_value(); }
};

inline Curvatures curvatures(const ModelManifold& m, double r) {
  detail::require_radius(m, r, "curvatures");
  const double h = m.h(r);
  const double dh = m.dh(r);
  const int n = m.dim();
  Curvatures c;
  c.radial = -m.ddh(r) / h;
  c.radial_ricci = (n - 1) * c.radial;
  if (n >= 3) {
    c.tangential = (1.0 - dh * dh) / (h * h);
    c.tangential_ricci = c.radial + (n - 2) * *c.tangential;
  } else {
    c.tangential_ricci = c.radial;
  }
  return c;
}

enum class CurvatureHypothesis { RicciNonneg, SectionalPositive };

inline const char* to_string(CurvatureHypothesis h) {
  return h == CurvatureHypothesis::RicciNonneg ? "ricci_nonnegative" : "sectional_positive";
}

struct HypothesisVerdict {
  bool holds = true;
  double worst_value = std::numeric_limits<double>::infinity();
  double worst_radius = 0.0;
};

/// Samples curvatures on the grid. Nonnegativity allows -1e-9 of slack; positivity is strict.
inline HypothesisVerdict check_hypotheses(const ModelManifold& m, CurvatureHypothesis which,
                                          const std::vector<double>& grid) {
  constexpr double slack = 1e-9;
  HypothesisVerdict out;
  for (double r : grid) {
    const Curvatures c = curvatures(m, r);
    double value;
    if (which == CurvatureHypothesis::RicciNonneg) {
      value = std::min(c.radial_ricci, *c.tangential_ricci);
    } else {
      value = c.radial;
      if (c.tangential) value = std::min(value, *c.tangential);
    }
    if (value < out.worst_value) {
      out.worst_value = value;
      out.worst_radius = r;
    }
  }
  out.holds = which == CurvatureHypothesis::RicciNonneg ? out.worst_value >= -slack : out.worst_value > 0.0;
  return out;
}

}  // namespace polelab
