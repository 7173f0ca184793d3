#pragma once

// Spherical-mean symmetrization v(r) = mean of u over dB_r. Derivatives are taken under the
// integral (sphere means of u_r and u_rr), and the radial Laplacian is v'' + (Delta r) v'.

#include <cmath>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <vector>

#include "polelab/field.hpp"
#include "polelab/manifold.hpp"
#include "polelab/quadrature.hpp"

namespace polelab {

struct RadialProfile {
  std::vector<double> r;
  std::vector<double> v;
  std::vector<double> dv;
  std::vector<double> ddv;
  std::vector<double> lap_v;  ///< at r = 0 holds the limit n v''(0)

  std::size_t size() const { return r.size(); }

  /// Profile of a constant weight (used as the trivial growth weight).
  static RadialProfile constant(const std::vector<double>& grid, double value) {
    RadialProfile p;
    p.r = grid;
    p.v.assign(grid.size(), value);
    p.dv.assign(grid.size(), 0.0);
    p.ddv.assign(grid.size(), 0.0);
    p.lap_v.assign(grid.size(), 0.0);
    return p;
  }

  /// Cubic Hermite interpolation of v from (v, dv); constant extrapolation outside the grid.
  double value_at(double x) const {
    if (r.empty()) return std::numeric_limits<double>::quiet_NaN();
    if (x <= r.front()) return v.front();
    if (x >= r.back()) return v.back();
    std::size_t i = 0;
    while (i + 1 < r.size() && r[i + 1] < x) ++i;
    const double h = r[i + 1] - r[i];
    const double t = (x - r[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * v[i] + (t3 - 2 * t2 + t) * h * dv[i] + (-2 * t3 + 3 * t2) * v[i + 1] +
           (t3 - t2) * h * dv[i + 1];
  }
};

/// Default grid: r = 0 plus `count` geometric points from 1e-3 to 0.9 r_max.
inline std::vector<double> default_profile_grid(const ModelManifold& m, int count = 200) {
  std::vector<double> g{0.0};
  for (double r : geomspace(1e-3, 0.9 * m.r_max(), count)) g.push_back(r);
  return g;
}

inline RadialProfile symmetrize(const ScalarField& u, const ModelManifold& m, const std::vector<double>& grid,
                                const SphereRule& rule) {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] < 0.0 || grid[i] > m.r_max() * (1.0 + 1e-12)) throw DomainError("symmetrize: grid outside [0, r_max]");
    if (i > 0 && !(grid[i] > grid[i - 1])) throw DomainError("symmetrize: grid must be increasing");
  }
  const bool use_rule = !u.radial();
  if (use_rule && rule.radial_only) throw DomainError("symmetrize: direction-dependent field needs an angular rule");
  const int n = m.dim();
  RadialProfile p;
  p.r = grid;
  p.v.resize(grid.size());
  p.dv.resize(grid.size());
  p.ddv.resize(grid.size());
  p.lap_v.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = grid[i];
    double v = 0.0, dv = 0.0, ddv = 0.0;
    if (!use_rule) {
      const PolarJet j = polar_jet(u, r, Direction{});
      v = j.value, dv = r == 0.0 ? 0.0 : j.d_r, ddv = j.d_rr;
    } else {
      const double w_total = rule.total_weight();
      for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        const PolarJet j = polar_jet(u, r, rule.nodes[k]);
        if (!std::isfinite(j.value) || !std::isfinite(j.d_r) || !std::isfinite(j.d_rr))
          throw EvaluationError("symmetrize: non-finite field data at r = " + expr::format_number(r));
        v += rule.weights[k] * j.value;
        dv += rule.weights[k] * j.d_r;
        ddv += rule.weights[k] * j.d_rr;
      }
      v /= w_total, dv /= w_total, ddv /= w_total;
    }
    p.v[i] = v;
    p.dv[i] = dv;
    p.ddv[i] = ddv;
    p.lap_v[i] = r == 0.0 ? n * ddv : ddv + laplacian_of_r(m, r) * dv;
  }
  return p;
}

/// v'' + (n-1)(h'/h) v' on the grid; r = 0 entries hold the limit n v''(0).
inline std::vector<double> radial_laplacian(const RadialProfile& p, const ModelManifold& m) {
  std::vector<double> out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i)
    out[i] = p.r[i] == 0.0 ? m.dim() * p.ddv[i] : p.ddv[i] + laplacian_of_r(m, p.r[i]) * p.dv[i];
  return out;
}

struct LaplacianConsistency {
  double max_relative = 0.0;  ///< |lap_v - mean(Delta u)| / max(1, |mean(Delta u)|)
  double at_radius = 0.0;
  std::vector<double> mean_lap_u;
};

/// Compares the profile's radial Laplacian with the sphere mean of Delta u at every grid radius.
inline LaplacianConsistency laplacian_consistency(const ScalarField& u, const ModelManifold& m,
                                                  const RadialProfile& p, const SphereRule& rule) {
  LaplacianConsistency out;
  out.mean_lap_u.resize(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double r = p.r[i];
    double mean;
    if (r == 0.0)
      mean = pole_laplacian(u, m);
    else if (u.radial())
      mean = laplace_beltrami(u, m, {r, Direction{}});
    else
      mean = sphere_mean_of([&](const PolarPoint& x) { return laplace_beltrami(u, m, x); }, r, rule);
    out.mean_lap_u[i] = mean;
    const double rel = std::abs(p.lap_v[i] - mean) / std::max(1.0, std::abs(mean));
    if (rel > out.max_relative) {
      out.max_relative = rel;
      out.at_radius = r;
    }
  }
  return out;
}

struct OriginLimits {
  double dv0 = 0.0;
  double ddv0 = 0.0;
  double lap_limit = 0.0;
  std::optional<double> pole_laplacian;  ///< Delta u(pole) when it could be evaluated
  double predicted_ddv0() const { return pole_laplacian ? *pole_laplacian / n : 0.0; }
  double predicted_lap_limit() const { return pole_laplacian.value_or(0.0); }
  int n = 2;
  double dv0_deviation() const { return std::abs(dv0); }
  double ddv0_deviation() const { return std::abs(ddv0 - predicted_ddv0()); }
  double lap_deviation() const { return std::abs(lap_limit - predicted_lap_limit()); }
};

/// v'(0), v''(0) and lim Delta v from radii 1e-3 and 5e-4. v' is linear near 0 and v'', Delta v
/// are even, so v'(0) ~ 2 v'(r/2) - v'(r) and the others ~ (4 g(r/2) - g(r)) / 3.
inline OriginLimits origin_limits(const ScalarField& u, const ModelManifold& m, const SphereRule& rule) {
  const double r1 = 1e-3, r2 = 5e-4;
  const RadialProfile p = symmetrize(u, m, {r2, r1}, rule);
  OriginLimits out;
  out.n = m.dim();
  out.dv0 = 2.0 * p.dv[0] - p.dv[1];
  out.ddv0 = (4.0 * p.ddv[0] - p.ddv[1]) / 3.0;
  out.lap_limit = (4.0 * p.lap_v[0] - p.lap_v[1]) / 3.0;
  try {
    const double lap0 = pole_laplacian(u, m);
    if (std::isfinite(lap0)) out.pole_laplacian = lap0;
  } catch (const std::exception&) {
  }
  return out;
}

struct ProfileVerdict {
  bool holds = true;
  double worst = std::numeric_limits<double>::infinity();
  double at_radius = 0.0;
};

/// v' >= -tol on the grid.
inline ProfileVerdict monotonicity(const RadialProfile& p, double tol) {
  ProfileVerdict out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p.dv[i] < out.worst) {
      out.worst = p.dv[i];
      out.at_radius = p.r[i];
    }
  }
  out.holds = out.worst >= -tol;
  return out;
}

/// Delta v >= -tol on the grid.
inline ProfileVerdict profile_subharmonicity(const RadialProfile& p, double tol) {
  ProfileVerdict out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p.lap_v[i] < out.worst) {
      out.worst = p.lap_v[i];
      out.at_radius = p.r[i];
    }
  }
  out.holds = out.worst >= -tol;
  return out;
}

/// CSV with columns r, v, dv, ddv, lap_v, mean_lap_u at 17 significant digits.
inline void write_profile_csv(std::ostream& os, const RadialProfile& p, const std::vector<double>& mean_lap_u) {
  std::ostringstream buf;
  buf << std::setprecision(17);
  buf << "r,v,dv,ddv,lap_v,mean_lap_u\n";
  for (std::size_t i = 0; i < p.size(); ++i)
    buf << p.r[i] << ',' << p.v[i] << ',' << p.dv[i] << ',' << p.ddv[i] << ',' << p.lap_v[i] << ','
        << mean_lap_u[i] << '\n';
  os << buf.str();
}

}  // namespace polelab
