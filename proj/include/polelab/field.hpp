#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "polelab/errors.hpp"
#include "polelab/expression.hpp"
#include "polelab/geodesic.hpp"
#include "polelab/manifold.hpp"
#include "polelab/point.hpp"
#include "polelab/sphere_rule.hpp"

namespace polelab {

/// Second-order polar data of a field at (r, xi), independent of the warping function.
/// grad_sphere and lap_sphere are the gradient and Laplacian of xi -> u(r, xi) on the unit sphere.
struct PolarJet {
  double value = 0.0;
  double d_r = 0.0;
  double d_rr = 0.0;
  Vec3 grad_sphere{0.0, 0.0, 0.0};
  double lap_sphere = 0.0;
};

struct FieldFlags {
  bool nonnegative = false;
  bool subharmonic = false;
  bool convex = false;
  bool radial = false;
};

enum class FieldSourceKind { Catalog, Expression, Derived };

struct FieldSource {
  FieldSourceKind kind = FieldSourceKind::Derived;
  std::string name;                       ///< catalog name, expression text or derivation
  std::map<std::string, double> params;   ///< catalog parameters
};

/// Scalar field u(r, xi). Immutable; copies share state.
///
/// Catalog fields carry an analytic polar jet; expression fields are differentiated by
/// finite differences. Declared flags are claims only and are never trusted by checks.
class ScalarField {
 public:
  using Evaluator = std::function<double(double r, const Direction& xi)>;
  using JetFn = std::function<PolarJet(double r, const Direction& xi, int dim)>;

  ScalarField(int dim, Evaluator eval, FieldFlags flags, FieldSource source, JetFn jet = {},
              std::optional<double> pole_laplacian = std::nullopt)
      : dim_(dim),
        eval_(std::move(eval)),
        jet_(std::move(jet)),
        pole_laplacian_(pole_laplacian),
        flags_(flags),
        source_(std::move(source)) {
    if (dim_ < 2) throw DomainError("ScalarField: dimension must be >= 2");
    if (dim_ > 3 && !flags_.radial)
      throw DomainError("ScalarField: dimension >= 4 supports radial fields only");
    check_pole();
  }

  int dim() const { return dim_; }
  const FieldFlags& flags() const { return flags_; }
  bool radial() const { return flags_.radial; }
  bool analytic() const { return static_cast<bool>(jet_); }
  const FieldSource& source() const { return source_; }
  const std::optional<double>& pole_laplacian() const { return pole_laplacian_; }

  /// u(r, xi). Negative r is read as the antipodal point: u(-r, xi) = u(r, -xi).
  double operator()(double r, const Direction& xi) const {
    if (r < 0.0) return eval_(-r, xi.opposite());
    return eval_(r, xi);
  }
  double operator()(const PolarPoint& p) const { return (*this)(p.r, p.xi); }

  std::optional<PolarJet> analytic_jet(double r, const Direction& xi) const {
    if (!jet_) return std::nullopt;
    return jet_(r, xi, dim_);
  }

  const Evaluator& evaluator() const { return eval_; }
  const JetFn& jet_fn() const { return jet_; }

 private:
  void check_pole() const {
    const double u0 = eval_(0.0, Direction{});
    if (!std::isfinite(u0)) throw EvaluationError("ScalarField: non-finite value at the pole");
    if (flags_.radial || dim_ > 3) return;
    for (const Direction& xi : direction_grid(dim_, 12)) {
      if (std::abs(eval_(0.0, xi) - u0) > 1e-8 * std::max(1.0, std::abs(u0)))
        throw DomainError("ScalarField: value at the pole depends on the direction");
    }
  }

  int dim_;
  Evaluator eval_;
  JetFn jet_;
  std::optional<double> pole_laplacian_;
  FieldFlags flags_;
  FieldSource source_;
};

// ---------------------------------------------------------------------------------------------
// Catalog. Every catalog field is zonal: u = F(r, s) with s = xi_1, so that
//   grad_S u = F_s (e1 - s xi),   |grad_S u|^2 = F_s^2 (1 - s^2),
//   Lap_S u  = F_ss (1 - s^2) - (n - 1) s F_s.

struct ZonalParts {
  double f = 0.0, f_r = 0.0, f_rr = 0.0, f_s = 0.0, f_ss = 0.0;
};

namespace detail {

using ZonalFn = std::function<ZonalParts(double r, double s)>;

inline PolarJet zonal_jet(const ZonalParts& z, const Direction& xi, int dim) {
  const double s = xi[0];
  PolarJet j;
  j.value = z.f;
  j.d_r = z.f_r;
  j.d_rr = z.f_rr;
  const Vec3 e1{1.0, 0.0, 0.0};
  j.grad_sphere = z.f_s * (e1 - s * xi.vec());
  j.lap_sphere = z.f_ss * (1.0 - s * s) - (dim - 1) * s * z.f_s;
  return j;
}

inline ScalarField make_zonal(int dim, ZonalFn parts, FieldFlags flags, FieldSource source,
                              std::optional<double> pole_laplacian) {
  auto eval = [parts](double r, const Direction& xi) { return parts(r, xi[0]).f; };
  auto jet = [parts](double r, const Direction& xi, int n) { return zonal_jet(parts(r, xi[0]), xi, n); };
  return ScalarField(dim, eval, flags, std::move(source), jet, pole_laplacian);
}

inline double param(const std::map<std::string, double>& p, const std::string& key, double fallback) {
  auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

}  // namespace detail

struct CatalogEntry {
  std::string name;
  std::string formula;
  std::map<std::string, double> defaults;
  FieldFlags flags;  ///< claims for the default parameters
};

/// Built-in fields, alphabetized.
inline const std::vector<CatalogEntry>& field_catalog() {
  static const std::vector<CatalogEntry> entries = {
      {"affine_x1", "a + b*x1", {{"a", 1.0}, {"b", 1.0}}, {false, true, true, false}},
      {"constant", "c", {{"c", 1.0}}, {true, true, true, true}},
      {"exp_x1", "exp(x1)", {}, {true, true, true, false}},
      {"neg_r2", "-r^2", {}, {false, false, false, true}},
      {"quadratic_x1", "a + b*x1 + c*r^2", {{"a", 1.0}, {"b", 1.0}, {"c", 1.0}}, {true, true, true, false}},
      {"r_power", "k*r^alpha", {{"alpha", 2.0}, {"k", 1.0}}, {true, true, true, true}},
      {"x1_squared", "x1^2", {}, {true, true, true, false}},
      {"zero", "0", {}, {true, true, true, true}},
  };
  return entries;
}

inline ScalarField make_catalog_field(const std::string& name, const std::map<std::string, double>& params,
                                      int dim) {
  const CatalogEntry* entry = nullptr;
  for (const auto& e : field_catalog())
    if (e.name == name) entry = &e;
  if (!entry) throw DomainError("unknown catalog field '" + name + "'");
  for (const auto& [key, value] : params) {
    if (!entry->defaults.count(key))
      throw DomainError("catalog field '" + name + "' has no parameter '" + key + "'");
    if (!std::isfinite(value)) throw DomainError("catalog parameter '" + key + "' must be finite");
  }
  std::map<std::string, double> p = entry->defaults;
  for (const auto& [key, value] : params) p[key] = value;
  FieldSource source{FieldSourceKind::Catalog, name, p};
  FieldFlags flags = entry->flags;
  const double n = dim;

  if (name == "constant" || name == "zero") {
    const double c = name == "zero" ? 0.0 : p["c"];
    flags.nonnegative = c >= 0.0;
    return detail::make_zonal(
        dim, [c](double, double) { return ZonalParts{c, 0, 0, 0, 0}; }, flags, source, 0.0);
  }
  if (name == "r_power" || name == "neg_r2") {
    const double alpha = name == "neg_r2" ? 2.0 : p["alpha"];
    const double k = name == "neg_r2" ? -1.0 : p["k"];
    if (alpha < 2.0) throw DomainError("r_power: alpha must be >= 2 (C^2 at the pole)");
    flags.nonnegative = k >= 0.0;
    flags.subharmonic = flags.convex = k >= 0.0;
    const double pole_lap = alpha == 2.0 ? 2.0 * n * k : 0.0;
    return detail::make_zonal(
        dim,
        [alpha, k](double r, double) {
          if (r == 0.0) return ZonalParts{0.0, 0.0, alpha == 2.0 ? 2.0 * k : 0.0, 0.0, 0.0};
          const double ra = std::pow(r, alpha);
          return ZonalParts{k * ra, k * alpha * ra / r, k * alpha * (alpha - 1.0) * ra / (r * r), 0.0, 0.0};
        },
        flags, source, pole_lap);
  }
  if (dim > 3) throw DomainError("catalog field '" + name + "' is not radial; dimension >= 4 unsupported");
  if (name == "x1_squared") {
    return detail::make_zonal(
        dim, [](double r, double s) { return ZonalParts{r * r * s * s, 2 * r * s * s, 2 * s * s, 2 * r * r * s, 2 * r * r}; },
        flags, source, 2.0);
  }
  if (name == "exp_x1") {
    return detail::make_zonal(
        dim,
        [](double r, double s) {
          const double e = std::exp(r * s);
          return ZonalParts{e, s * e, s * s * e, r * e, r * r * e};
        },
        flags, source, 1.0);
  }
  if (name == "affine_x1") {
    const double a = p["a"], b = p["b"];
    flags.nonnegative = false;
    return detail::make_zonal(
        dim, [a, b](double r, double s) { return ZonalParts{a + b * r * s, b * s, 0.0, b * r, 0.0}; }, flags,
        source, 0.0);
  }
  if (name == "quadratic_x1") {
    const double a = p["a"], b = p["b"], c = p["c"];
    flags.subharmonic = flags.convex = c >= 0.0;
    flags.nonnegative = c > 0.0 && a - b * b / (4.0 * c) >= 0.0;
    return detail::make_zonal(
        dim,
        [a, b, c](double r, double s) { return ZonalParts{a + b * r * s + c * r * r, b * s + 2 * c * r, 2 * c, b * r, 0.0}; },
        flags, source, 2.0 * n * c);
  }
  throw DomainError("unknown catalog field '" + name + "'");
}

/// Field from an expression over r and x1..x{dim}, with x_i = r xi_i.
inline ScalarField make_expression_field(const std::string& text, int dim) {
  auto e = std::make_shared<const expr::Expression>(expr::parse(text, dim));
  FieldFlags flags;
  flags.radial = !e->depends_on_direction();
  auto eval = [e](double r, const Direction& xi) {
    expr::Bindings vars{};
    vars[0] = r;
    for (int i = 0; i < 3; ++i) vars[i + 1] = r * xi[i];
    return (*e)(vars);
  };
  return ScalarField(dim, eval, flags, FieldSource{FieldSourceKind::Expression, text, {}});
}

/// a*u + b*g. The analytic jet survives when both operands have one.
inline ScalarField combine(double a, const ScalarField& u, double b, const ScalarField& g) {
  if (u.dim() != g.dim()) throw DomainError("combine: dimension mismatch");
  auto ue = u.evaluator(), ge = g.evaluator();
  auto eval = [a, b, ue, ge](double r, const Direction& xi) { return a * ue(r, xi) + b * ge(r, xi); };
  FieldFlags flags;
  flags.radial = u.radial() && g.radial();
  ScalarField::JetFn jet;
  if (u.analytic() && g.analytic()) {
    auto uj = u.jet_fn(), gj = g.jet_fn();
    jet = [a, b, uj, gj](double r, const Direction& xi, int n) {
      const PolarJet x = uj(r, xi, n), y = gj(r, xi, n);
      return PolarJet{a * x.value + b * y.value, a * x.d_r + b * y.d_r, a * x.d_rr + b * y.d_rr,
                      a * x.grad_sphere + b * y.grad_sphere, a * x.lap_sphere + b * y.lap_sphere};
    };
  }
  std::optional<double> pole;
  if (u.pole_laplacian() && g.pole_laplacian()) pole = a * *u.pole_laplacian() + b * *g.pole_laplacian();
  return ScalarField(u.dim(), eval, flags, FieldSource{FieldSourceKind::Derived, "combination", {}}, jet, pole);
}

inline ScalarField scaled(const ScalarField& u, double lambda) {
  return combine(lambda, u, 0.0, u);
}

/// u^2, used for the energy estimates.
inline ScalarField squared(const ScalarField& u) {
  auto ue = u.evaluator();
  auto eval = [ue](double r, const Direction& xi) {
    const double v = ue(r, xi);
    return v * v;
  };
  FieldFlags flags;
  flags.radial = u.radial();
  flags.nonnegative = true;
  ScalarField::JetFn jet;
  if (u.analytic()) {
    auto uj = u.jet_fn();
    jet = [uj](double r, const Direction& xi, int n) {
      const PolarJet j = uj(r, xi, n);
      PolarJet out;
      out.value = j.value * j.value;
      out.d_r = 2.0 * j.value * j.d_r;
      out.d_rr = 2.0 * (j.d_r * j.d_r + j.value * j.d_rr);
      out.grad_sphere = (2.0 * j.value) * j.grad_sphere;
      out.lap_sphere = 2.0 * (j.value * j.lap_sphere + dot(j.grad_sphere, j.grad_sphere));
      return out;
    };
  }
  return ScalarField(u.dim(), eval, flags, FieldSource{FieldSourceKind::Derived, "square", {}}, jet);
}

// ---------------------------------------------------------------------------------------------
// Differential operators.

/// Finite-difference steps: radial max(1e-5, 1e-3 r), angular 1e-3 rad.
inline double radial_fd_step(double r) { return std::max(1e-5, 1e-3 * r); }
inline constexpr double kAngularFdStep = 1e-3;

/// Polar jet by central differences. In dimension 3 the stencil is laid out in a rotated
/// frame that puts xi on the equator, where Lap_S = d^2/dalpha^2 + d^2/dbeta^2.
inline PolarJet finite_difference_jet(const ScalarField& u, double r, const Direction& xi) {
  PolarJet j;
  const double dr = radial_fd_step(r);
  const double u0 = u(r, xi);
  const double up = u(r + dr, xi);
  const double um = u(r - dr, xi);
  j.value = u0;
  j.d_r = (up - um) / (2.0 * dr);
  j.d_rr = (up - 2.0 * u0 + um) / (dr * dr);
  if (u.radial() || u.dim() > 3 || r == 0.0) return j;

  const double d = kAngularFdStep;
  const Vec3& x = xi.vec();
  if (u.dim() == 2) {
    const double theta = std::atan2(x[1], x[0]);
    const double ap = u(r, Direction::from_angle(theta + d));
    const double am = u(r, Direction::from_angle(theta - d));
    j.grad_sphere = ((ap - am) / (2.0 * d)) * planar_tangent(x);
    j.lap_sphere = (ap - 2.0 * u0 + am) / (d * d);
    return j;
  }
  const auto [t1, t2] = sphere_tangent_basis(x);
  auto at = [&](double alpha, double beta) {
    const Vec3 v = std::cos(beta) * (std::cos(alpha) * x + std::sin(alpha) * t1) + std::sin(beta) * t2;
    return u(r, Direction::from_vector(v));
  };
  const double ap = at(d, 0.0), am = at(-d, 0.0), bp = at(0.0, d), bm = at(0.0, -d);
  j.grad_sphere = ((ap - am) / (2.0 * d)) * t1 + ((bp - bm) / (2.0 * d)) * t2;
  j.lap_sphere = (ap + am + bp + bm - 4.0 * u0) / (d * d);
  return j;
}

inline PolarJet polar_jet(const ScalarField& u, double r, const Direction& xi) {
  if (auto j = u.analytic_jet(r, xi)) return *j;
  return finite_difference_jet(u, r, xi);
}

struct Gradient {
  double radial = 0.0;               ///< u_r
  Vec3 angular{0.0, 0.0, 0.0};       ///< h^{-1} grad_S u, a physical tangent vector
  double norm_sq = 0.0;              ///< |grad u|^2 = u_r^2 + h^{-2} |grad_S u|^2

  Tangent as_tangent(const Direction& xi) const {
    Tangent t = Tangent::from_vector(xi, angular);
    t.radial = radial;
    return t;
  }
};

/// Gradient in polar form. At the pole only radial fields have a defined (zero) gradient
/// in this representation; other fields return nullopt.
inline std::optional<Gradient> gradient(const ScalarField& u, const ModelManifold& m, const PolarPoint& p) {
  if (p.r < 0.0) throw DomainError("gradient: r must be >= 0");
  if (p.r == 0.0) {
    if (!u.radial()) return std::nullopt;
    return Gradient{};
  }
  const PolarJet j = polar_jet(u, p.r, p.xi);
  const double h = m.h(p.r);
  Gradient g;
  g.radial = j.d_r;
  g.angular = (1.0 / h) * j.grad_sphere;
  g.norm_sq = j.d_r * j.d_r + dot(g.angular, g.angular);
  return g;
}

/// Mean of u over the geodesic sphere of radius eps, straight from the rule.
inline double small_sphere_mean(const ScalarField& u, double eps, const SphereRule& rule) {
  double acc = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) acc += rule.weights[k] * u(eps, rule.nodes[k]);
  return acc / rule.total_weight();
}

/// Delta u at the pole. Catalog value when known; n u''(0) for radial fields; otherwise from
/// the small-sphere expansion mean_eps(u) = u(0) + eps^2 Delta u(0) / (2n) + O(eps^4),
/// Richardson-extrapolated over eps and eps/2.
inline double pole_laplacian(const ScalarField& u, const ModelManifold& m) {
  if (u.pole_laplacian()) return *u.pole_laplacian();
  const int n = m.dim();
  const Direction xi;
  if (u.radial() || n > 3) {
    const double d = 1e-4;
    return n * 2.0 * (u(d, xi) - u(0.0, xi)) / (d * d);
  }
  const SphereRule rule = sphere_rule(n, 32);
  const double u0 = u(0.0, xi);
  const double eps = 1e-2;
  const double a1 = (small_sphere_mean(u, eps, rule) - u0) / (eps * eps);
  const double a2 = (small_sphere_mean(u, 0.5 * eps, rule) - u0) / (0.25 * eps * eps);
  return 2.0 * n * (4.0 * a2 - a1) / 3.0;
}

/// Laplace-Beltrami operator in polar form: u_rr + (n-1)(h'/h) u_r + h^{-2} Lap_S u.
inline double laplace_beltrami(const ScalarField& u, const ModelManifold& m, const PolarPoint& p) {
  if (p.r < 0.0) throw DomainError("laplace_beltrami: r must be >= 0");
  if (p.r == 0.0) return pole_laplacian(u, m);
  const PolarJet j = polar_jet(u, p.r, p.xi);
  const double h = m.h(p.r);
  return j.d_rr + (m.dim() - 1) * (m.dh(p.r) / h) * j.d_r + j.lap_sphere / (h * h);
}

struct GridDensity {
  int radii = 64;
  int directions = 64;
};

struct SubharmonicVerdict {
  bool holds = true;
  double min_laplacian = std::numeric_limits<double>::infinity();
  PolarPoint at;
};

/// Delta u >= -tol on a radii x directions tensor grid over [r_lo, r_hi].
inline SubharmonicVerdict is_subharmonic_on(const ScalarField& u, const ModelManifold& m, double r_lo,
                                            double r_hi, GridDensity samples, double tol) {
  if (!(r_lo > 0.0) || r_hi < r_lo) throw DomainError("is_subharmonic_on: need 0 < r_lo <= r_hi");
  SubharmonicVerdict out;
  const auto dirs = u.radial() ? direction_grid(m.dim() > 3 ? 4 : m.dim(), 1) : direction_grid(m.dim(), samples.directions);
  for (double r : linspace(r_lo, r_hi, samples.radii)) {
    for (const Direction& xi : dirs) {
      const double lap = laplace_beltrami(u, m, {r, xi});
      if (!std::isfinite(lap))
        throw EvaluationError("is_subharmonic_on: non-finite Laplacian at r = " + expr::format_number(r));
      if (lap < out.min_laplacian) {
        out.min_laplacian = lap;
        out.at = {r, xi};
      }
    }
  }
  out.holds = out.min_laplacian >= -tol;
  return out;
}

struct ConvexitySampler {
  int count = 32;
  double length = 1.0;
  std::uint64_t seed = 1;
  int samples = 64;
};

struct ConvexityVerdict {
  bool holds = true;
  double worst_second_difference = std::numeric_limits<double>::infinity();  ///< min of (f(t-dt)-2f(t)+f(t+dt))/dt^2
  double worst_time = 0.0;
  int skipped = 0;
  int used = 0;
  double clairaut_drift = 0.0;
  double speed_drift = 0.0;
};

/// Sampled convexity along random geodesics: every interior normalized second difference of
/// t -> u(gamma(t)) must be >= -tol. Geodesics that leave r_max are skipped and counted.
inline ConvexityVerdict is_convex_along_geodesics(const ScalarField& u, const ModelManifold& m,
                                                  const ConvexitySampler& sampler, double tol) {
  ConvexityVerdict out;
  const auto trajectories = sample_geodesics(m, sampler.count, sampler.length, sampler.seed, sampler.samples);
  for (const Trajectory& traj : trajectories) {
    if (traj.escaped) {
      ++out.skipped;
      continue;
    }
    ++out.used;
    out.clairaut_drift = std::max(out.clairaut_drift, traj.clairaut_drift);
    out.speed_drift = std::max(out.speed_drift, traj.speed_drift);
    std::vector<double> f(traj.samples.size());
    for (std::size_t k = 0; k < f.size(); ++k) f[k] = u(traj.point(k));
    const double dt = traj.length / (f.size() - 1);
    for (std::size_t k = 1; k + 1 < f.size(); ++k) {
      const double d2 = (f[k - 1] - 2.0 * f[k] + f[k + 1]) / (dt * dt);
      if (d2 < out.worst_second_difference) {
        out.worst_second_difference = d2;
        out.worst_time = traj.samples[k].t;
      }
    }
  }
  out.holds = out.used > 0 && out.worst_second_difference >= -tol;
  return out;
}

/// Verdict tolerance matched to how derivatives are obtained.
inline double default_verdict_tolerance(const ScalarField& u) { return u.analytic() ? 1e-7 : 1e-5; }

}  // namespace polelab
