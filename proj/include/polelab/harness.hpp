#pragma once

// Executable forms of the growth, energy and integral inequalities for subharmonic and convex
// functions on model manifolds. Constants in these inequalities are existential, so every
// check measures the extremal constant over a finite radius range and reports it; verdicts are
// finite-range statements.
//
// Each check first verifies its hypotheses on the region it touches. A failed hypothesis makes
// the verdict Inapplicable; the measured quantities are still reported where they are defined.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "polelab/field.hpp"
#include "polelab/geodesic.hpp"
#include "polelab/manifold.hpp"
#include "polelab/quadrature.hpp"
#include "polelab/symmetrization.hpp"

namespace polelab {

enum class CheckId {
  MeanValue,
  Growth,
  IntegralLower,
  ConvexOrigin,
  Energy,
  Limsup,
  GradientIntegral,
  Bishop,
  GrowthClass,
  Symmetrization,
  OriginLimits,
};

struct CheckInfo {
  CheckId id;
  const char* name;
  const char* statement;
  const char* hypotheses;
};

/// Alphabetized by name.
inline const std::vector<CheckInfo>& check_catalog() {
  static const std::vector<CheckInfo> infos = {
      {CheckId::Bishop, "bishop", "Bishop volume comparison: Vol(B_r) <= Vol of the Euclidean r-ball",
       "Ric >= 0"},
      {CheckId::ConvexOrigin, "convex_origin",
       "convex lower bound at the pole: u(o) >= 2C/Vol(dB_r1) - sup_{dB_r1} u, r1 = r0 + 1",
       "u >= 0, u convex, positive sectional curvature"},
      {CheckId::Energy, "energy", "energy bound: r/Vol(B_2r) int_{B_r} |grad u|^2 <= C w(4r), w = mean of u^2",
       "u >= 0, u subharmonic, Ric >= 0, 4r <= r_max"},
      {CheckId::GradientIntegral, "gradient_integral",
       "exp-gradient integral bound: int_{B_r} u(exp_x grad u) >= C6 Vol(B_r)^2 / (r^{n+1} w(4r)^3)",
       "u >= 1 and |grad u| >= 1 on B_r, u convex, Ric >= 0, 4r <= r_max"},
      {CheckId::Growth, "growth", "spherical-mean growth theorem: sup_{B_{r/2}} u <= C r v(r)",
       "u >= 0, u subharmonic, Ric >= 0, v subharmonic"},
      {CheckId::GrowthClass, "growth_class", "(v,p)-polynomial growth: |u| <= C r^p v(r)", "v > 0 on the grid"},
      {CheckId::IntegralLower, "integral_lower",
       "Greene-Wu integral lower bound: int_{B_r} u^p >= C (r - r0) for r >= r0",
       "u >= 0, u subharmonic, positive sectional curvature, p > 1"},
      {CheckId::Limsup, "limsup",
       "limsup energy bound: r^{1-n} int_{B_r} |grad u|^2 <= C1 w(4r) on the tail (finite-range surrogate)",
       "u >= 0, u subharmonic, Ric >= 0, 4r <= r_max"},
      {CheckId::MeanValue, "mean_value", "Li-Schoen mean value inequality: sup_{B_{r/2}} u <= C/Vol(B_r) int_{B_r} u",
       "u >= 0, u subharmonic, Ric >= 0"},
      {CheckId::OriginLimits, "origin_limits", "origin limits: v'(0) = 0, v''(0) = Delta u(0)/n, Delta v -> Delta u(0)",
       "u twice differentiable at the pole"},
      {CheckId::Symmetrization, "symmetrization",
       "spherical mean commutes with Delta; subharmonic u gives subharmonic, non-decreasing v", "none"},
  };
  return infos;
}

inline const char* to_string(CheckId id) {
  for (const auto& info : check_catalog())
    if (info.id == id) return info.name;
  return "?";
}

inline std::optional<CheckId> parse_check_id(const std::string& name) {
  for (const auto& info : check_catalog())
    if (name == info.name) return info.id;
  return std::nullopt;
}

enum class VerdictKind { Holds, Fails, Inapplicable };

inline const char* to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::Holds: return "holds";
    case VerdictKind::Fails: return "fails";
    case VerdictKind::Inapplicable: return "inapplicable";
  }
  return "?";
}

/// Concrete location where an inequality or a hypothesis is violated.
struct Witness {
  double radius = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  std::optional<Vec3> location;  ///< normal coordinates, when the witness is a point
};

struct Verdict {
  VerdictKind kind = VerdictKind::Holds;
  std::optional<Witness> witness;
  std::string hypothesis;  ///< violated hypothesis (Inapplicable)
  std::string reason;

  static Verdict holds() { return {}; }
  static Verdict fails(Witness w, std::string reason = {}) {
    return {VerdictKind::Fails, w, {}, std::move(reason)};
  }
  static Verdict inapplicable(std::string hypothesis, std::string reason, std::optional<Witness> w = {}) {
    return {VerdictKind::Inapplicable, w, std::move(hypothesis), std::move(reason)};
  }
};

struct HypothesisDetail {
  std::string name;
  bool ok = true;
  std::string detail;
};

struct SeriesPoint {
  double r = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
};

struct CheckReport {
  CheckId id = CheckId::MeanValue;
  bool hypotheses_ok = true;
  std::vector<HypothesisDetail> hypotheses;
  std::map<std::string, double> measured;
  double range_lo = 0.0;
  double range_hi = 0.0;
  Verdict verdict;
  std::map<std::string, double> tolerances;
  std::vector<SeriesPoint> series;  ///< per-radius values; not serialized

  bool holds() const { return verdict.kind == VerdictKind::Holds; }
  bool fails() const { return verdict.kind == VerdictKind::Fails; }
  bool inapplicable() const { return verdict.kind == VerdictKind::Inapplicable; }
};

/// Certificate |u| <= constant * r^degree * weight(r) on [r_lo, r_hi].
struct GrowthClass {
  double degree = 1.0;
  double constant = 0.0;
  std::shared_ptr<const RadialProfile> weight;
  double witness_radius = 0.0;
  double r_lo = 0.0;
  double r_hi = 0.0;
};

struct HarnessOptions {
  int sphere_order = 0;  ///< 0 selects 64 (n = 2) or 16 (n = 3)
  int radial_order = 64;
  SupDensity sup{};
  GridDensity hypothesis_grid{48, 48};
  ConvexitySampler convexity{};
  double verdict_tol = 0.0;  ///< 0 selects 1e-7 for analytic fields, 1e-5 otherwise
  int exp_sphere_order = 32;  ///< node set of the exp-gradient integral
  int exp_radial_order = 16;
  int profile_points = 64;

  SphereRule rule(int n) const { return default_rule(n, sphere_order); }
  double tol(const ScalarField& u) const { return verdict_tol > 0.0 ? verdict_tol : default_verdict_tolerance(u); }
};

namespace detail {

inline double max_of(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }

inline std::vector<double> hypothesis_radii(double r_hi) { return linspace(r_hi / 256.0, r_hi, 256); }

/// Accumulates hypothesis results; the first failure becomes the Inapplicable verdict.
class Gate {
 public:
  explicit Gate(CheckReport& report) : report_(report) {}

  void record(const std::string& name, bool ok, const std::string& detail, std::optional<Witness> w = {}) {
    report_.hypotheses.push_back({name, ok, detail});
    if (!ok && report_.hypotheses_ok) {
      report_.hypotheses_ok = false;
      report_.verdict = Verdict::inapplicable(name, detail, w);
    }
  }

  void curvature(const ModelManifold& m, CurvatureHypothesis which, double r_hi) {
    const HypothesisVerdict hv = check_hypotheses(m, which, hypothesis_radii(r_hi));
    record(to_string(which), hv.holds,
           "worst curvature " + expr::format_number(hv.worst_value + 0.0) + " at r = " + expr::format_number(hv.worst_radius),
           Witness{hv.worst_radius, hv.worst_value, 0.0, std::nullopt});
  }

  void nonnegative(const ScalarField& u, const ModelManifold& m, double r_hi, const HarnessOptions& o, double tol) {
    const Extremum lo = inf_on(u, m, Region::ball(r_hi), {o.hypothesis_grid.radii, o.hypothesis_grid.directions});
    record("nonnegative", lo.value >= -tol, "min u = " + expr::format_number(lo.value),
           Witness{lo.at.r, lo.value, 0.0, lo.at.normal_coordinates()});
  }

  void subharmonic(const ScalarField& u, const ModelManifold& m, double r_hi, const HarnessOptions& o, double tol) {
    const SubharmonicVerdict sv = is_subharmonic_on(u, m, std::min(1e-2, 0.5 * r_hi), r_hi, o.hypothesis_grid, tol);
    record("subharmonic", sv.holds, "min Delta u = " + expr::format_number(sv.min_laplacian),
           Witness{sv.at.r, sv.min_laplacian, 0.0, sv.at.normal_coordinates()});
  }

  void convex(const ScalarField& u, const ModelManifold& m, const HarnessOptions& o, double tol) {
    const ConvexityVerdict cv = is_convex_along_geodesics(u, m, o.convexity, tol);
    report_.measured["geodesics_skipped"] = cv.skipped;
    report_.measured["clairaut_drift_max"] = cv.clairaut_drift;
    report_.measured["speed_drift_max"] = cv.speed_drift;
    record("convex", cv.holds, "min second difference " + expr::format_number(cv.worst_second_difference));
  }

  void radius_fits(const ModelManifold& m, double needed) {
    record("working_radius", needed <= m.r_max() * (1.0 + 1e-12),
           "needs r = " + expr::format_number(needed) + " <= r_max = " + expr::format_number(m.r_max()));
  }

  bool ok() const { return report_.hypotheses_ok; }

 private:
  CheckReport& report_;
};

inline void start(CheckReport& rep, CheckId id, const std::vector<double>& grid) {
  if (grid.empty()) throw DomainError(std::string(to_string(id)) + ": empty radius grid");
  rep.id = id;
  rep.range_lo = *std::min_element(grid.begin(), grid.end());
  rep.range_hi = detail::max_of(grid);
  if (!(rep.range_lo > 0.0)) throw DomainError(std::string(to_string(id)) + ": grid radii must be > 0");
}

inline double grad_norm_sq(const ScalarField& u, const ModelManifold& m, const PolarPoint& p) {
  const auto g = gradient(u, m, p);
  return g ? g->norm_sq : 0.0;
}

}  // namespace detail

// ---------------------------------------------------------------------------------------------

/// C(r) = sup_{B_{r/2}} u * Vol(B_r) / int_{B_r} u; C_min is its maximum over the grid.
inline CheckReport check_mean_value(const ScalarField& u, const ModelManifold& m, const std::vector<double>& grid,
                                    const HarnessOptions& opts = {}) {
  CheckReport rep;
  detail::start(rep, CheckId::MeanValue, grid);
  const double tol = opts.tol(u);
  const double R = rep.range_hi;
  rep.tolerances = {{"hypothesis", tol}, {"curvature", 1e-9}};
  detail::Gate gate(rep);
  gate.radius_fits(m, R);
  if (!gate.ok()) return rep;
  gate.nonnegative(u, m, R, opts, tol);
  gate.subharmonic(u, m, R, opts, tol);
  gate.curvature(m, CurvatureHypothesis::RicciNonneg, R);

  const SphereRule rule = opts.rule(m.dim());
  double c_max = 0.0;
  std::optional<Witness> bad;
  for (double r : grid) {
    const double sup = sup_on(u, m, Region::ball(0.5 * r), opts.sup).value;
    const double vol = ball_volume(m, r);
    const double integral = ball_integral([&](const PolarPoint& p) { return u(p); }, m, r, rule, opts.radial_order);
    double c = 0.0;
    if (integral != 0.0)
      c = sup * vol / integral;
    else if (sup != 0.0)
      c = std::numeric_limits<double>::infinity();
    rep.series.push_back({r, sup, integral / vol, c});
    if (!std::isfinite(c) && !bad) bad = Witness{r, sup, integral / vol, std::nullopt};
    c_max = std::max(c_max, c);
  }
  rep.measured["C_min"] = c_max;
  rep.measured["C_at_r_lo"] = rep.series.front().ratio;
  rep.measured["C_at_r_hi"] = rep.series.back().ratio;
  if (!gate.ok()) return rep;
  rep.verdict = bad ? Verdict::fails(*bad, "mean-value ratio unbounded") : Verdict::holds();
  return rep;
}

struct GrowthResult {
  CheckReport report;
  std::optional<GrowthClass> growth_class;
};

/// rho(r) = sup_{B_{r/2}} u / (r v(r)) with v the spherical mean of u.
inline GrowthResult check_growth(const ScalarField& u, const ModelManifold& m, const std::vector<double>& grid,
                                 const HarnessOptions& opts = {}) {
  GrowthResult out;
  CheckReport& rep = out.report;
  detail::start(rep, CheckId::Growth, grid);
  const double tol = opts.tol(u);
  const double R = rep.range_hi;
  rep.tolerances = {{"hypothesis", tol}, {"curvature", 1e-9}};
  detail::Gate gate(rep);
  gate.radius_fits(m, R);
  if (!gate.ok()) return out;
  gate.nonnegative(u, m, R, opts, tol);
  gate.subharmonic(u, m, R, opts, tol);
  gate.curvature(m, CurvatureHypothesis::RicciNonneg, R);

  const SphereRule rule = opts.rule(m.dim());
  std::vector<double> profile_grid{0.0};
  for (double r : geomspace(std::min(1e-3, 0.5 * R), R, opts.profile_points)) profile_grid.push_back(r);
  const RadialProfile prof = symmetrize(u, m, profile_grid, rule);
  const ProfileVerdict pv = profile_subharmonicity(prof, tol);
  gate.record("profile_subharmonic", pv.holds, "min Delta v = " + expr::format_number(pv.worst));

  auto rho_at = [&](double r, std::optional<Witness>& flag) {
    const double sup = sup_on(u, m, Region::ball(0.5 * r), opts.sup).value;
    const double v = sphere_mean(u, m, r, rule);
    double rho = 0.0;
    if (v != 0.0)
      rho = sup / (r * v);
    else if (sup != 0.0) {
      rho = std::numeric_limits<double>::infinity();
      if (!flag) flag = Witness{r, sup, 0.0, std::nullopt};
    }
    return SeriesPoint{r, sup, r * v, rho};
  };

  std::optional<Witness> bad;
  double rho_max = 0.0, rho_arg = rep.range_lo;
  for (double r : grid) {
    const SeriesPoint sp = rho_at(r, bad);
    rep.series.push_back(sp);
    if (sp.ratio > rho_max) {
      rho_max = sp.ratio;
      rho_arg = r;
    }
  }
  // u = O(r omega(r)) with omega(r) = v(2r), where 2r stays inside the working radius
  double omega_max = 0.0;
  for (double r : grid) {
    if (2.0 * r > m.r_max()) continue;
    const double s = std::max(std::abs(sup_on(u, m, Region::sphere(r), opts.sup).value),
                              std::abs(inf_on(u, m, Region::sphere(r), opts.sup).value));
    const double w = sphere_mean(u, m, 2.0 * r, rule);
    if (w != 0.0) omega_max = std::max(omega_max, s / (r * w));
  }
  // small-r diagnostic: the bound is only range-qualified below r = 1
  double small_max = 0.0;
  std::optional<Witness> ignore;
  for (double r : linspace(0.05, 0.95, 10))
    if (r <= m.r_max()) small_max = std::max(small_max, rho_at(r, ignore).ratio);

  rep.measured["rho_max"] = rho_max;
  rep.measured["rho_at_r_lo"] = rep.series.front().ratio;
  rep.measured["rho_at_r_hi"] = rep.series.back().ratio;
  rep.measured["growth_C"] = rho_max;
  rep.measured["omega_ratio_max"] = omega_max;
  rep.measured["small_r_rho_max"] = small_max;

  auto weight = std::make_shared<RadialProfile>(symmetrize(u, m, grid, rule));
  out.growth_class = GrowthClass{1.0, rho_max, weight, rho_arg, rep.range_lo, rep.range_hi};
  if (!gate.ok()) {
    out.growth_class.reset();
    return out;
  }
  rep.verdict = bad ? Verdict::fails(*bad, "v(r) = 0 while u is not identically zero") : Verdict::holds();
  if (bad) out.growth_class.reset();
  return out;
}

struct Envelope {
  double C = 0.0;
  double r0 = 0.0;
};

struct IntegralLowerResult {
  CheckReport report;
  std::optional<Envelope> envelope;
};

/// F(r) = int_{B_r} u^p; linear lower envelope F(r) >= C (r - r0) with the smallest grid r0
/// achieving C = min_{r > r0} F(r)/(r - r0) >= 1e-12.
inline IntegralLowerResult check_integral_lower(const ScalarField& u, const ModelManifold& m, double p,
                                                const std::vector<double>& grid, const HarnessOptions& opts = {}) {
  IntegralLowerResult out;
  CheckReport& rep = out.report;
  detail::start(rep, CheckId::IntegralLower, grid);
  if (grid.size() < 2) throw DomainError("integral_lower: grid needs at least two radii");
  const double tol = opts.tol(u);
  const double R = rep.range_hi;
  rep.tolerances = {{"hypothesis", tol}, {"curvature", 1e-9}, {"envelope_C_min", 1e-12}};
  rep.measured["p"] = p;
  detail::Gate gate(rep);
  gate.radius_fits(m, R);
  if (!gate.ok()) return out;
  gate.record("exponent", p > 1.0, "p = " + expr::format_number(p));
  gate.curvature(m, CurvatureHypothesis::SectionalPositive, R);
  gate.nonnegative(u, m, R, opts, tol);
  gate.subharmonic(u, m, R, opts, tol);

  const SphereRule rule = opts.rule(m.dim());
  std::vector<double> radii = grid;
  std::sort(radii.begin(), radii.end());
  std::vector<double> F(radii.size());
  for (std::size_t i = 0; i < radii.size(); ++i) {
    F[i] = ball_integral([&](const PolarPoint& x) { return std::pow(std::max(0.0, u(x)), p); }, m, radii[i], rule,
                         opts.radial_order);
    rep.series.push_back({radii[i], F[i], 0.0, 0.0});
  }
  rep.measured["F_at_r_hi"] = F.back();
  for (std::size_t j = 0; j + 1 < radii.size(); ++j) {
    double c = std::numeric_limits<double>::infinity();
    for (std::size_t i = j + 1; i < radii.size(); ++i) c = std::min(c, F[i] / (radii[i] - radii[j]));
    if (c >= 1e-12) {
      out.envelope = Envelope{c, radii[j]};
      break;
    }
  }
  if (out.envelope) {
    rep.measured["C"] = out.envelope->C;
    rep.measured["r0"] = out.envelope->r0;
    for (auto& sp : rep.series) {
      sp.rhs = sp.r >= out.envelope->r0 ? out.envelope->C * (sp.r - out.envelope->r0) : 0.0;
      sp.ratio = sp.rhs > 0.0 ? sp.lhs / sp.rhs : 0.0;
    }
  }
  if (!gate.ok()) {
    out.envelope.reset();
    return out;
  }
  if (!out.envelope)
    rep.verdict = Verdict::fails(Witness{R, F.back(), 0.0, std::nullopt}, "no positive linear lower envelope");
  else
    rep.verdict = Verdict::holds();
  return out;
}

/// u(o) >= 2C / Vol(dB_r1) - sup_{dB_r1} u with r1 = r0 + 1 and (C, r0) from integral_lower.
inline CheckReport check_convex_origin(const ScalarField& u, const ModelManifold& m, double r0, double C,
                                       const HarnessOptions& opts = {}) {
  CheckReport rep;
  const double r1 = r0 + 1.0;
  detail::start(rep, CheckId::ConvexOrigin, {r1});
  const double tol = opts.tol(u);
  rep.tolerances = {{"hypothesis", tol}, {"inequality", tol}, {"curvature", 1e-9}};
  rep.measured["r0"] = r0;
  rep.measured["r1"] = r1;
  rep.measured["C"] = C;
  detail::Gate gate(rep);
  gate.radius_fits(m, r1);
  if (!gate.ok()) return rep;
  gate.nonnegative(u, m, r1, opts, tol);
  gate.convex(u, m, opts, tol);
  gate.curvature(m, CurvatureHypothesis::SectionalPositive, r1);

  const double lhs = u(0.0, Direction{});
  const double area = sphere_area(m, r1);
  const double sup = sup_on(u, m, Region::sphere(r1), opts.sup).value;
  const double rhs = 2.0 * C / area - sup;
  rep.measured["u_pole"] = lhs;
  rep.measured["area"] = area;
  rep.measured["sup_on_sphere"] = sup;
  rep.measured["rhs"] = rhs;
  rep.series.push_back({r1, lhs, rhs, 0.0});
  if (!gate.ok()) return rep;
  rep.verdict = lhs >= rhs - tol ? Verdict::holds() : Verdict::fails(Witness{r1, lhs, rhs, std::nullopt});
  return rep;
}

namespace detail {

struct EnergyTerms {
  double grad_integral = 0.0;  ///< int_{B_r} |grad u|^2
  double energy = 0.0;         ///< r / Vol(B_2r) * grad_integral
  double w4 = 0.0;             ///< mean of u^2 over dB_4r
  double ingredient = 0.0;     ///< r^2 grad_integral / int_{B_2r} u^2
};

inline EnergyTerms energy_terms(const ScalarField& u, const ScalarField& u2, const ModelManifold& m, double r,
                                const SphereRule& rule, const HarnessOptions& opts) {
  EnergyTerms t;
  t.grad_integral = ball_integral([&](const PolarPoint& p) { return grad_norm_sq(u, m, p); }, m, r, rule,
                                  opts.radial_order);
  t.energy = r / ball_volume(m, 2.0 * r) * t.grad_integral;
  t.w4 = sphere_mean(u2, m, 4.0 * r, rule);
  const double u2_int = ball_integral([&](const PolarPoint& p) { return u2(p); }, m, 2.0 * r, rule, opts.radial_order);
  t.ingredient = u2_int != 0.0 ? r * r * t.grad_integral / u2_int : 0.0;
  return t;
}

inline void energy_gate(Gate& gate, const ScalarField& u, const ModelManifold& m, double R, const HarnessOptions& opts,
                        double tol) {
  gate.radius_fits(m, 4.0 * R);
  if (!gate.ok()) return;
  gate.nonnegative(u, m, 4.0 * R, opts, tol);
  gate.subharmonic(u, m, 4.0 * R, opts, tol);
  gate.curvature(m, CurvatureHypothesis::RicciNonneg, 4.0 * R);
}

}  // namespace detail

/// E(r) = r/Vol(B_2r) int_{B_r} |grad u|^2 against w(4r), w the spherical mean of u^2.
inline CheckReport check_energy(const ScalarField& u, const ModelManifold& m, const std::vector<double>& grid,
                                const HarnessOptions& opts = {}) {
  CheckReport rep;
  detail::start(rep, CheckId::Energy, grid);
  const double tol = opts.tol(u);
  rep.tolerances = {{"hypothesis", tol}, {"curvature", 1e-9}};
  detail::Gate gate(rep);
  detail::energy_gate(gate, u, m, rep.range_hi, opts, tol);
  if (!rep.hypotheses.empty() && rep.hypotheses.front().name == "working_radius" && !rep.hypotheses.front().ok)
    return rep;

  const SphereRule rule = opts.rule(m.dim());
  const ScalarField u2 = squared(u);
  double ratio_max = 0.0, ingredient_max = 0.0;
  std::optional<Witness> bad;
  for (double r : grid) {
    const detail::EnergyTerms t = detail::energy_terms(u, u2, m, r, rule, opts);
    double ratio = 0.0;
    if (t.w4 != 0.0)
      ratio = t.energy / t.w4;
    else if (t.energy != 0.0) {
      ratio = std::numeric_limits<double>::infinity();
      if (!bad) bad = Witness{r, t.energy, 0.0, std::nullopt};
    }
    rep.series.push_back({r, t.energy, t.w4, ratio});
    ratio_max = std::max(ratio_max, ratio);
    ingredient_max = std::max(ingredient_max, t.ingredient);
  }
  rep.measured["ratio_max"] = ratio_max;
  rep.measured["ingredient_ratio_max"] = ingredient_max;
  if (!gate.ok()) return rep;
  rep.verdict = bad ? Verdict::fails(*bad, "w(4r) = 0 with nonzero energy") : Verdict::holds();
  return rep;
}

/// Finite-range surrogate of the limsup bound: max over the tail of r^{1-n} int_{B_r}|grad u|^2
/// against C1 * max of w(4r), C1 = C_energy * Vol(unit ball) * 2^n.
inline CheckReport check_limsup(const ScalarField& u, const ModelManifold& m, const std::vector<double>& tail,
                                const HarnessOptions& opts = {}, std::optional<double> energy_constant = {}) {
  CheckReport rep;
  detail::start(rep, CheckId::Limsup, tail);
  const double tol = opts.tol(u);
  rep.tolerances = {{"hypothesis", tol}, {"inequality", tol}, {"curvature", 1e-9}};
  detail::Gate gate(rep);
  detail::energy_gate(gate, u, m, rep.range_hi, opts, tol);
  if (!rep.hypotheses.empty() && rep.hypotheses.front().name == "working_radius" && !rep.hypotheses.front().ok)
    return rep;

  const int n = m.dim();
  const SphereRule rule = opts.rule(n);
  const ScalarField u2 = squared(u);
  double lhs_max = 0.0, rhs_max = 0.0, measured_energy = 0.0;
  for (double r : tail) {
    const detail::EnergyTerms t = detail::energy_terms(u, u2, m, r, rule, opts);
    const double lhs = t.grad_integral / std::pow(r, n - 1);
    rep.series.push_back({r, lhs, t.w4, t.w4 != 0.0 ? lhs / t.w4 : 0.0});
    lhs_max = std::max(lhs_max, lhs);
    rhs_max = std::max(rhs_max, t.w4);
    if (t.w4 != 0.0) measured_energy = std::max(measured_energy, t.energy / t.w4);
  }
  const double c_energy = energy_constant.value_or(measured_energy);
  const double bishop = unit_ball_volume(n);
  const double c1 = c_energy * bishop * std::pow(2.0, n);
  const bool vacuous = !std::isfinite(rhs_max) || rhs_max > 1e300;
  rep.measured["lhs_max"] = lhs_max;
  rep.measured["rhs_max"] = vacuous ? 0.0 : rhs_max;
  rep.measured["energy_constant"] = c_energy;
  rep.measured["bishop_constant"] = bishop;
  rep.measured["C1"] = c1;
  rep.measured["vacuous"] = vacuous ? 1.0 : 0.0;
  if (!gate.ok()) return rep;
  if (vacuous || lhs_max <= c1 * rhs_max * (1.0 + tol) + tol)
    rep.verdict = Verdict::holds();
  else
    rep.verdict = Verdict::fails(Witness{rep.range_hi, lhs_max, c1 * rhs_max, std::nullopt});
  return rep;
}

/// Pointwise convexity step |grad u|^2_x <= u(exp_x grad u) - u(x).
struct PointwiseStep {
  double grad_sq = 0.0;
  double u_x = 0.0;
  double u_exp = 0.0;
  PolarPoint exp_point;
  double slack() const { return u_exp - u_x - grad_sq; }
};

inline PointwiseStep pointwise_convexity_step(const ScalarField& u, const ModelManifold& m, const PolarPoint& x) {
  const auto g = gradient(u, m, x);
  if (!g) throw DomainError("pointwise_convexity_step: gradient undefined at the pole");
  PointwiseStep s;
  s.grad_sq = g->norm_sq;
  s.u_x = u(x);
  s.exp_point = exp_map(m, x, g->as_tangent(x.xi));
  s.u_exp = u(s.exp_point);
  return s;
}

/// int_{B_r} u(exp_x grad u) dV against Vol(B_r)^2 / (r^{n+1} w(4r)^3); the empirical C6 is
/// the minimum of their ratio over the grid. Hypotheses u >= 1 and |grad u| >= 1 are scanned at
/// the quadrature nodes of each ball.
inline CheckReport check_gradient_integral(const ScalarField& u, const ModelManifold& m,
                                           const std::vector<double>& grid, const HarnessOptions& opts = {}) {
  CheckReport rep;
  detail::start(rep, CheckId::GradientIntegral, grid);
  const double tol = opts.tol(u);
  constexpr double pointwise_tol = 1e-6;
  constexpr double max_skip_fraction = 0.01;
  rep.tolerances = {{"hypothesis", tol}, {"pointwise_relative", pointwise_tol}, {"max_skip_fraction", max_skip_fraction}};
  const double R = rep.range_hi;
  detail::Gate gate(rep);
  gate.radius_fits(m, 4.0 * R);
  if (!gate.ok()) return rep;
  gate.curvature(m, CurvatureHypothesis::RicciNonneg, R);
  if (!gate.ok()) return rep;

  const int n = m.dim();
  const SphereRule node_rule = default_rule(n, opts.exp_sphere_order);
  std::vector<std::vector<BallNode>> nodes_per_r;
  nodes_per_r.reserve(grid.size());
  std::optional<Witness> worst_grad, worst_value;
  double min_grad = std::numeric_limits<double>::infinity(), min_u = std::numeric_limits<double>::infinity();
  for (double r : grid) {
    nodes_per_r.push_back(ball_nodes(m, r, node_rule, opts.exp_radial_order));
    for (const BallNode& node : nodes_per_r.back()) {
      const double val = u(node.point);
      const double g = std::sqrt(detail::grad_norm_sq(u, m, node.point));
      if (g < min_grad) {
        min_grad = g;
        worst_grad = Witness{node.point.r, g, 1.0, node.point.normal_coordinates()};
      }
      if (val < min_u) {
        min_u = val;
        worst_value = Witness{node.point.r, val, 1.0, node.point.normal_coordinates()};
      }
    }
  }
  rep.measured["min_grad_norm"] = min_grad;
  rep.measured["min_u"] = min_u;
  gate.record("u_at_least_one", min_u >= 1.0 - tol, "min u on ball nodes = " + expr::format_number(min_u), worst_value);
  gate.record("grad_at_least_one", min_grad >= 1.0 - tol,
              "min |grad u| on ball nodes = " + expr::format_number(min_grad), worst_grad);
  if (!gate.ok()) return rep;
  gate.convex(u, m, opts, tol);
  if (!gate.ok()) return rep;

  const SphereRule rule = opts.rule(n);
  const ScalarField u2 = squared(u);
  double c6 = std::numeric_limits<double>::infinity();
  double min_slack = std::numeric_limits<double>::infinity();
  std::optional<Witness> slack_witness;
  int skipped = 0, total = 0;
  for (std::size_t gi = 0; gi < grid.size(); ++gi) {
    const double r = grid[gi];
    double lhs = 0.0;
    int skipped_here = 0;
    for (const BallNode& node : nodes_per_r[gi]) {
      ++total;
      try {
        const PointwiseStep step = pointwise_convexity_step(u, m, node.point);
        lhs += node.weight * step.u_exp;
        const double rel = step.slack() / std::max(1.0, std::abs(step.u_exp));
        if (rel < min_slack) {
          min_slack = rel;
          slack_witness = Witness{node.point.r, step.grad_sq, step.u_exp - step.u_x, node.point.normal_coordinates()};
        }
      } catch (const RangeError&) {
        ++skipped;
        ++skipped_here;
      }
    }
    if (skipped_here > max_skip_fraction * nodes_per_r[gi].size()) {
      rep.measured["skipped_nodes"] = skipped;
      gate.record("exp_map_in_range", false,
                  std::to_string(skipped_here) + " exp_x(grad u) endpoints leave r_max at r = " + expr::format_number(r));
      return rep;
    }
    const double w4 = sphere_mean(u2, m, 4.0 * r, rule);
    const double vol = ball_volume(m, r);
    const double rhs_unit = vol * vol / (std::pow(r, n + 1) * w4 * w4 * w4);
    const double ratio = lhs / rhs_unit;
    rep.series.push_back({r, lhs, rhs_unit, ratio});
    c6 = std::min(c6, ratio);
  }
  rep.measured["C6_empirical"] = c6;
  rep.measured["pointwise_min_slack"] = min_slack;
  rep.measured["pointwise_nodes"] = total - skipped;
  rep.measured["skipped_nodes"] = skipped;
  if (!(c6 > 0.0))
    rep.verdict = Verdict::fails(Witness{rep.range_lo, c6, 0.0, std::nullopt}, "empirical C6 not positive");
  else if (min_slack < -pointwise_tol)
    rep.verdict = Verdict::fails(*slack_witness, "pointwise convexity step violated");
  else
    rep.verdict = Verdict::holds();
  return rep;
}

/// Vol(B_r) / (Vol(unit ball) r^n) <= 1 + 1e-8 on the grid.
inline CheckReport check_bishop(const ModelManifold& m, const std::vector<double>& grid) {
  CheckReport rep;
  detail::start(rep, CheckId::Bishop, grid);
  constexpr double tol = 1e-8;
  rep.tolerances = {{"ratio", tol}, {"curvature", 1e-9}};
  detail::Gate gate(rep);
  gate.radius_fits(m, rep.range_hi);
  if (!gate.ok()) return rep;
  gate.curvature(m, CurvatureHypothesis::RicciNonneg, rep.range_hi);
  const double unit = unit_ball_volume(m.dim());
  double ratio_max = 0.0, ratio_min = std::numeric_limits<double>::infinity();
  std::optional<Witness> bad;
  for (double r : grid) {
    const double vol = ball_volume(m, r);
    const double euclid = unit * std::pow(r, m.dim());
    const double ratio = vol / euclid;
    rep.series.push_back({r, vol, euclid, ratio});
    ratio_max = std::max(ratio_max, ratio);
    ratio_min = std::min(ratio_min, ratio);
    if (ratio > 1.0 + tol && !bad) bad = Witness{r, vol, euclid, std::nullopt};
  }
  rep.measured["ratio_max"] = ratio_max;
  rep.measured["ratio_min"] = ratio_min;
  if (!gate.ok()) return rep;
  rep.verdict = bad ? Verdict::fails(*bad) : Verdict::holds();
  return rep;
}

struct GrowthClassification {
  CheckReport report;
  std::optional<GrowthClass> growth_class;
};

/// C = max over the grid of sup_{dB_r} |u| / (r^p weight(r)); weight interpolated from its profile.
inline GrowthClassification classify_growth(const ScalarField& u, const ModelManifold& m,
                                            std::shared_ptr<const RadialProfile> weight, double p,
                                            const std::vector<double>& grid, const HarnessOptions& opts = {}) {
  GrowthClassification out;
  CheckReport& rep = out.report;
  detail::start(rep, CheckId::GrowthClass, grid);
  rep.measured["degree"] = p;
  detail::Gate gate(rep);
  gate.radius_fits(m, rep.range_hi);
  if (!gate.ok()) return out;
  double min_weight = std::numeric_limits<double>::infinity();
  for (double r : grid) min_weight = std::min(min_weight, weight->value_at(r));
  gate.record("weight_positive", min_weight > 0.0, "min weight on grid = " + expr::format_number(min_weight));
  if (!gate.ok()) return out;

  double c = 0.0, arg = rep.range_lo;
  for (double r : grid) {
    const double s = std::max(std::abs(sup_on(u, m, Region::sphere(r), opts.sup).value),
                              std::abs(inf_on(u, m, Region::sphere(r), opts.sup).value));
    const double denom = std::pow(r, p) * weight->value_at(r);
    const double ratio = s / denom;
    rep.series.push_back({r, s, denom, ratio});
    if (ratio > c) {
      c = ratio;
      arg = r;
    }
  }
  rep.measured["C"] = c;
  rep.measured["witness_radius"] = arg;
  if (!std::isfinite(c)) {
    rep.verdict = Verdict::fails(Witness{arg, c, 0.0, std::nullopt}, "growth ratio not finite");
    return out;
  }
  out.growth_class = GrowthClass{p, c, std::move(weight), arg, rep.range_lo, rep.range_hi};
  rep.verdict = Verdict::holds();
  return out;
}

/// Consistency of the symmetrization identities on the grid, and preservation of
/// subharmonicity and monotonicity when u itself is subharmonic.
inline CheckReport check_symmetrization(const ScalarField& u, const ModelManifold& m, const std::vector<double>& grid,
                                        const HarnessOptions& opts = {}) {
  CheckReport rep;
  detail::start(rep, CheckId::Symmetrization, grid);
  const double tol = opts.tol(u);
  constexpr double identity_tol = 1e-5;
  rep.tolerances = {{"identity_relative", identity_tol}, {"verdict", tol}};
  const SphereRule rule = opts.rule(m.dim());
  std::vector<double> sorted = grid;
  std::sort(sorted.begin(), sorted.end());
  const RadialProfile prof = symmetrize(u, m, sorted, rule);
  const LaplacianConsistency lc = laplacian_consistency(u, m, prof, rule);
  rep.measured["laplacian_consistency"] = lc.max_relative;
  rep.measured["laplacian_consistency_radius"] = lc.at_radius;
  const SubharmonicVerdict sv = is_subharmonic_on(u, m, rep.range_lo, rep.range_hi, opts.hypothesis_grid, tol);
  rep.hypotheses.push_back({"subharmonic", sv.holds, "min Delta u = " + expr::format_number(sv.min_laplacian)});
  const ProfileVerdict ps = profile_subharmonicity(prof, tol);
  const ProfileVerdict mono = monotonicity(prof, tol);
  rep.measured["min_lap_v"] = ps.worst;
  rep.measured["min_dv"] = mono.worst;
  rep.measured["preservation_checked"] = sv.holds ? 1.0 : 0.0;
  for (std::size_t i = 0; i < prof.size(); ++i) rep.series.push_back({prof.r[i], prof.lap_v[i], lc.mean_lap_u[i], prof.v[i]});
  if (lc.max_relative > identity_tol) {
    rep.verdict = Verdict::fails(Witness{lc.at_radius, lc.max_relative, identity_tol, std::nullopt},
                                 "radial Laplacian differs from the mean of Delta u");
  } else if (sv.holds && !ps.holds) {
    rep.verdict = Verdict::fails(Witness{ps.at_radius, ps.worst, 0.0, std::nullopt}, "symmetrization not subharmonic");
  } else if (sv.holds && !mono.holds) {
    rep.verdict = Verdict::fails(Witness{mono.at_radius, mono.worst, 0.0, std::nullopt}, "symmetrization decreasing");
  } else {
    rep.verdict = Verdict::holds();
  }
  return rep;
}

/// v'(0), v''(0), lim Delta v against 0, Delta u(0)/n, Delta u(0).
inline CheckReport check_origin_limits(const ScalarField& u, const ModelManifold& m, const HarnessOptions& opts = {}) {
  CheckReport rep;
  detail::start(rep, CheckId::OriginLimits, {5e-4, 1e-3});
  const bool fd = !u.analytic();
  const double tol_dv = fd ? 1e-4 : 1e-6, tol_dd = fd ? 1e-3 : 1e-4;
  rep.tolerances = {{"dv0", tol_dv}, {"ddv0", tol_dd}, {"lap_limit", tol_dd}};
  const OriginLimits ol = origin_limits(u, m, opts.rule(m.dim()));
  rep.measured["dv0"] = ol.dv0;
  rep.measured["ddv0"] = ol.ddv0;
  rep.measured["lap_limit"] = ol.lap_limit;
  if (!ol.pole_laplacian) {
    rep.hypotheses.push_back({"pole_laplacian", false, "Delta u at the pole unavailable"});
    rep.hypotheses_ok = false;
    rep.verdict = Verdict::inapplicable("pole_laplacian", "Delta u at the pole unavailable");
    return rep;
  }
  rep.hypotheses.push_back({"pole_laplacian", true, "Delta u(0) = " + expr::format_number(*ol.pole_laplacian)});
  rep.measured["predicted_ddv0"] = ol.predicted_ddv0();
  rep.measured["predicted_lap_limit"] = ol.predicted_lap_limit();
  rep.measured["dv0_deviation"] = ol.dv0_deviation();
  rep.measured["ddv0_deviation"] = ol.ddv0_deviation();
  rep.measured["lap_deviation"] = ol.lap_deviation();
  if (ol.dv0_deviation() > tol_dv)
    rep.verdict = Verdict::fails(Witness{0.0, ol.dv0, 0.0, std::nullopt}, "v'(0) != 0");
  else if (ol.ddv0_deviation() > tol_dd)
    rep.verdict = Verdict::fails(Witness{0.0, ol.ddv0, ol.predicted_ddv0(), std::nullopt}, "v''(0) != Delta u(0)/n");
  else if (ol.lap_deviation() > tol_dd)
    rep.verdict = Verdict::fails(Witness{0.0, ol.lap_limit, ol.predicted_lap_limit(), std::nullopt},
                                 "lim Delta v != Delta u(0)");
  else
    rep.verdict = Verdict::holds();
  return rep;
}

}  // namespace polelab
