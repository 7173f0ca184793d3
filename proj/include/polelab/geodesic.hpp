#pragma once

// Geodesics of dr^2 + h(r)^2 dTheta^2. A geodesic of a model stays in the totally geodesic
// surface spanned by its initial radial direction and angular velocity, so it is integrated
// as the planar system
//   r''   = h h' phi'^2
//   phi'' = -2 (h'/h) r' phi'
// with classical RK4 and mapped back through an orthonormal frame (e1, e2) of that plane.
// Inside a small disc about the pole the metric is replaced by its flat chart and the
// trajectory is advanced as a straight line, which carries geodesics through the pole.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "polelab/errors.hpp"
#include "polelab/manifold.hpp"
#include "polelab/point.hpp"

namespace polelab {

/// Tangent vector at a point: radial component plus a signed angular magnitude along
/// angular_dir (a unit vector tangent to the sphere at xi). For planar points an unset
/// angular_dir means the direction of increasing theta.
struct Tangent {
  double radial = 0.0;
  double angular = 0.0;
  Vec3 angular_dir{0.0, 0.0, 0.0};

  double norm() const { return std::hypot(radial, angular); }

  /// Splits a normal-coordinate vector at direction xi into radial and angular parts.
  static Tangent from_vector(const Direction& xi, const Vec3& v) {
    Tangent t;
    t.radial = dot(v, xi.vec());
    const Vec3 ang = v - t.radial * xi.vec();
    const double a = polelab::norm(ang);
    if (a > 0.0) {
      t.angular = a;
      t.angular_dir = (1.0 / a) * ang;
    }
    return t;
  }
};

struct GeodesicOptions {
  double step = 0.0;  ///< 0 selects min(1e-3, length / 1e4)
  double chart_radius = 1e-4;
};

struct GeodesicSample {
  double t = 0.0;
  double r = 0.0;
  double phi = 0.0;
  double dr = 0.0;
  double dphi = 0.0;
};

/// Unit-speed trajectory sampled on an equispaced time grid, with conservation diagnostics.
struct Trajectory {
  int dim = 2;
  Vec3 e1{1.0, 0.0, 0.0};
  Vec3 e2{0.0, 1.0, 0.0};
  double length = 0.0;
  std::vector<GeodesicSample> samples;
  double clairaut = 0.0;        ///< initial h^2 phi'
  double clairaut_drift = 0.0;  ///< max |c - c0| / max(1, |c0|)
  double speed_drift = 0.0;     ///< max |r'^2 + h^2 phi'^2 - 1|
  bool escaped = false;         ///< left r_max; samples end at the last reached grid time

  Direction direction(double phi) const {
    return Direction::from_vector(std::cos(phi) * e1 + std::sin(phi) * e2);
  }
  PolarPoint point(std::size_t k) const { return {samples[k].r, direction(samples[k].phi)}; }
  PolarPoint endpoint() const { return point(samples.size() - 1); }
};

namespace detail {

class GeodesicIntegrator {
 public:
  GeodesicIntegrator(const ModelManifold& m, double step, double chart_radius)
      : m_(m), step_(step), chart_(chart_radius) {}

  /// Unit-speed geodesic from radius r0 (phi = 0) with velocity (a, b): radial and
  /// tangential components, a^2 + b^2 = 1. Samples at k * length / sample_count.
  Trajectory run(double r0, double a, double b, double length, int sample_count) const {
    Trajectory traj;
    traj.length = length;
    const double dt_sample = length / sample_count;

    bool in_chart = r0 < chart_;
    State s{};
    Flat f{};
    double ref_phi = 0.0;
    if (in_chart) {
      f = {r0, 0.0, a, b};
    } else {
      s = {r0, 0.0, a, b / m_.h(r0)};
    }

    auto record = [&](double t) {
      GeodesicSample out;
      out.t = t;
      if (in_chart) {
        s = to_polar(f, ref_phi);
      }
      out.r = s.r;
      out.phi = s.phi;
      out.dr = s.dr;
      out.dphi = s.dphi;
      const double h = m_.h(s.r);
      const double c = h * h * s.dphi;
      const double speed = s.dr * s.dr + h * h * s.dphi * s.dphi;
      if (traj.samples.empty()) traj.clairaut = c;
      traj.clairaut_drift = std::max(traj.clairaut_drift,
                                     std::abs(c - traj.clairaut) / std::max(1.0, std::abs(traj.clairaut)));
      traj.speed_drift = std::max(traj.speed_drift, std::abs(speed - 1.0));
      traj.samples.push_back(out);
    };

    if (in_chart) {
      s = to_polar(f, 0.0);
      ref_phi = s.phi;
    }
    record(0.0);

    double t = 0.0;
    for (int k = 1; k <= sample_count; ++k) {
      const double target = k == sample_count ? length : k * dt_sample;
      while (t < target) {
        if (in_chart) {
          const double exit = exit_time(f);
          const double tau = std::min(exit, target - t);
          f.x += f.vx * tau;
          f.y += f.vy * tau;
          if (tau == target - t) {
            t = target;
          } else {
            t += tau;
          }
          if (tau == exit) {
            s = to_polar(f, ref_phi);
            s.r = std::max(s.r, chart_);
            in_chart = false;
          }
          continue;
        }
        if (s.r < 0.999 * chart_) {
          f = to_flat(s);
          ref_phi = s.phi;
          in_chart = true;
          continue;
        }
        double dt = std::min(step_, target - t);
        const double h = m_.h(s.r);
        // Near the pole the coordinate system is stiff (r'' ~ c^2 / h^3); shrink the step with h.
        if (h < 0.2) dt = std::min(dt, 0.005 * h);
        s = rk4(s, dt);
        t = (dt == target - t) ? target : t + dt;
        if (s.r > m_.r_max()) {
          traj.escaped = true;
          return traj;
        }
      }
      if (in_chart) ref_phi = to_polar(f, ref_phi).phi;
      record(t);
    }
    return traj;
  }

 private:
  struct State {
    double r, phi, dr, dphi;
  };
  /// Position and velocity in the flat chart of the geodesic plane.
  struct Flat {
    double x, y, vx, vy;
  };

  State deriv(const State& s) const {
    const auto [h, dh] = m_.h_dh(s.r);
    return {s.dr, s.dphi, h * dh * s.dphi * s.dphi, -2.0 * (dh / h) * s.dr * s.dphi};
  }

  State rk4(const State& s, double dt) const {
    auto axpy = [](const State& a, double k, const State& d) {
      return State{a.r + k * d.r, a.phi + k * d.phi, a.dr + k * d.dr, a.dphi + k * d.dphi};
    };
    const State k1 = deriv(s);
    const State k2 = deriv(axpy(s, 0.5 * dt, k1));
    const State k3 = deriv(axpy(s, 0.5 * dt, k2));
    const State k4 = deriv(axpy(s, dt, k3));
    const double w = dt / 6.0;
    return {s.r + w * (k1.r + 2 * k2.r + 2 * k3.r + k4.r),
            s.phi + w * (k1.phi + 2 * k2.phi + 2 * k3.phi + k4.phi),
            s.dr + w * (k1.dr + 2 * k2.dr + 2 * k3.dr + k4.dr),
            s.dphi + w * (k1.dphi + 2 * k2.dphi + 2 * k3.dphi + k4.dphi)};
  }

  Flat to_flat(const State& s) const {
    const double c = std::cos(s.phi), sn = std::sin(s.phi);
    const double tang = m_.h(s.r) * s.dphi;
    return {s.r * c, s.r * sn, s.dr * c - tang * sn, s.dr * sn + tang * c};
  }

  State to_polar(const Flat& f, double ref_phi) const {
    const double r = std::hypot(f.x, f.y);
    if (r == 0.0) return {0.0, ref_phi, std::hypot(f.vx, f.vy), 0.0};
    double phi = std::atan2(f.y, f.x);
    phi += kTwoPi * std::round((ref_phi - phi) / kTwoPi);
    const double c = f.x / r, sn = f.y / r;
    const double dr = f.vx * c + f.vy * sn;
    const double tang = -f.vx * sn + f.vy * c;
    return {r, phi, dr, tang / m_.h(r)};
  }

  /// Time for the straight line to leave the chart disc.
  double exit_time(const Flat& f) const {
    const double vv = f.vx * f.vx + f.vy * f.vy;
    const double pv = f.x * f.vx + f.y * f.vy;
    const double pp = f.x * f.x + f.y * f.y;
    const double disc = pv * pv - vv * (pp - chart_ * chart_);
    return (-pv + std::sqrt(std::max(0.0, disc))) / vv;
  }

  const ModelManifold& m_;
  double step_;
  double chart_;
};

inline double default_step(double length) { return std::min(1e-3, length / 1e4); }

}  // namespace detail

/// Unit-speed geodesic of the given length starting at x with initial direction w (normalized).
inline Trajectory integrate_geodesic(const ModelManifold& m, const PolarPoint& x, const Tangent& w,
                                     double length, int sample_count, const GeodesicOptions& opts = {}) {
  const double speed = w.norm();
  if (!(speed > 0.0)) throw DomainError("integrate_geodesic: zero initial velocity");
  if (sample_count < 1) throw DomainError("integrate_geodesic: sample_count must be >= 1");
  Vec3 e2 = w.angular_dir;
  if (polelab::norm(e2) == 0.0) {
    e2 = planar_tangent(x.xi.vec());
    if (polelab::norm(e2) < 0.5) e2 = sphere_tangent_basis(x.xi.vec()).first;
  }
  const double step = opts.step > 0.0 ? opts.step : detail::default_step(length);
  const detail::GeodesicIntegrator integ(m, step, opts.chart_radius);
  Trajectory traj = integ.run(x.r, w.radial / speed, w.angular / speed, length, sample_count);
  traj.dim = m.dim();
  traj.e1 = x.xi.vec();
  traj.e2 = e2;
  return traj;
}

/// exp_x(w): endpoint of the geodesic with initial velocity w after unit time.
inline PolarPoint exp_map(const ModelManifold& m, const PolarPoint& x, const Tangent& w,
                          const GeodesicOptions& opts = {}) {
  const double length = w.norm();
  if (length == 0.0) return x;
  const Trajectory traj = integrate_geodesic(m, x, w, length, 1, opts);
  if (traj.escaped) throw RangeError("exp_map: geodesic leaves the working radius");
  return traj.endpoint();
}

/// Seeded random unit-speed geodesics. Starting radii are drawn so that the trajectory
/// cannot leave r_max (triangle inequality) whenever r_max > length.
inline std::vector<Trajectory> sample_geodesics(const ModelManifold& m, int count, double length,
                                                std::uint64_t seed, int sample_count = 64,
                                                const GeodesicOptions& opts = {}) {
  if (count < 1) throw DomainError("sample_geodesics: count must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double r_hi = m.r_max() > length ? m.r_max() - length : 0.5 * m.r_max();

  std::vector<Trajectory> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    const double r0 = r_hi * unit(rng);
    Direction xi;
    Vec3 ang_dir;
    if (m.dim() == 2) {
      xi = Direction::from_angle(kTwoPi * unit(rng));
      ang_dir = planar_tangent(xi.vec());
    } else {
      xi = Direction::from_vector({gauss(rng), gauss(rng), gauss(rng)});
      const auto [t1, t2] = sphere_tangent_basis(xi.vec());
      const double beta = kTwoPi * unit(rng);
      ang_dir = std::cos(beta) * t1 + std::sin(beta) * t2;
    }
    const double alpha = kTwoPi * unit(rng);
    Tangent w;
    w.radial = std::cos(alpha);
    w.angular = std::sin(alpha);
    w.angular_dir = ang_dir;
    out.push_back(integrate_geodesic(m, PolarPoint{r0, xi}, w, length, sample_count, opts));
  }
  return out;
}

}  // namespace polelab
