#pragma once

// Declarative scenarios: a JSON config names a manifold, a field, a radius grid, quadrature
// settings and a list of checks. run_scenario executes the checks (optionally in parallel)
// and assembles an order-preserving JSON report.

#include <cstdint>
#include <fstream>
#include <future>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "polelab/errors.hpp"
#include "polelab/field.hpp"
#include "polelab/harness.hpp"
#include "polelab/manifold.hpp"
#include "polelab/symmetrization.hpp"

namespace polelab {

using Json = nlohmann::ordered_json;

struct ManifoldSpec {
  std::string kind = "euclidean";
  int dim = 2;
  double r_max = 10.0;
  double a = 1.0;
  std::string h_expr;
};

struct FieldSpec {
  std::string catalog;  ///< empty when expr is used
  std::map<std::string, double> params;
  std::string expr;
};

struct GridSpec {
  double r_lo = 0.5;
  double r_hi = 5.0;
  int count = 10;
  Spacing spacing = Spacing::Linear;

  std::vector<double> radii() const { return RadiusGrid{r_lo, r_hi, count, spacing}.radii(); }
};

struct QuadratureSpec {
  int sphere_order = 0;
  int radial_order = 64;
  SupDensity sup{};
};

struct CheckSpec {
  CheckId id = CheckId::MeanValue;
  double p = 2.0;                  ///< integral_lower / convex_origin exponent, growth_class degree
  std::optional<GridSpec> grid;    ///< overrides the scenario grid
  std::optional<GridSpec> tail;    ///< limsup tail grid
  std::string weight = "profile";  ///< growth_class weight: "profile" (spherical mean of u) or "constant"
};

struct ScenarioConfig {
  std::string name;
  ManifoldSpec manifold;
  FieldSpec field;
  GridSpec grid;
  QuadratureSpec quadrature;
  std::vector<CheckSpec> checks;
  std::map<std::string, double> tolerances;  ///< "verdict" overrides the default verdict tolerance
  std::string report_path;
  std::string csv_path;
  std::uint64_t seed = 1;
};

namespace detail {

class ConfigReader {
 public:
  static ScenarioConfig read(const Json& root) {
    ScenarioConfig c;
    expect_object(root, "$");
    allow(root, "$", {"name", "manifold", "field", "grid", "quadrature", "checks", "tolerances", "outputs", "seed"});
    c.name = get_string(root, "name", "$", true);
    read_manifold(at(root, "manifold", "$"), "$.manifold", c.manifold);
    read_field(at(root, "field", "$"), "$.field", c.field);
    if (root.contains("grid")) c.grid = read_grid(root["grid"], "$.grid", GridSpec{});
    if (root.contains("quadrature")) read_quadrature(root["quadrature"], "$.quadrature", c.quadrature);
    if (root.contains("checks")) {
      const Json& arr = root["checks"];
      if (!arr.is_array()) throw ConfigError("$.checks: expected an array");
      for (std::size_t i = 0; i < arr.size(); ++i)
        c.checks.push_back(read_check(arr[i], "$.checks[" + std::to_string(i) + "]", c.grid));
    }
    if (root.contains("tolerances")) {
      const Json& t = root["tolerances"];
      expect_object(t, "$.tolerances");
      for (const auto& [key, value] : t.items()) {
        const std::string path = "$.tolerances." + key;
        if (key != "verdict") throw ConfigError(path + ": unknown key");
        const double v = number(value, path);
        if (!(v > 0.0)) throw ConfigError(path + ": tolerance must be > 0");
        c.tolerances[key] = v;
      }
    }
    if (root.contains("outputs")) {
      const Json& o = root["outputs"];
      expect_object(o, "$.outputs");
      allow(o, "$.outputs", {"report_path", "csv_path"});
      c.report_path = get_string(o, "report_path", "$.outputs", false);
      c.csv_path = get_string(o, "csv_path", "$.outputs", false);
    }
    if (root.contains("seed")) {
      const Json& s = root["seed"];
      if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<std::int64_t>() >= 0))
        throw ConfigError("$.seed: expected a non-negative integer");
      c.seed = s.get<std::uint64_t>();
    }
    validate(c);
    return c;
  }

 private:
  static void expect_object(const Json& j, const std::string& path) {
    if (!j.is_object()) throw ConfigError(path + ": expected an object");
  }
  static void allow(const Json& j, const std::string& path, std::initializer_list<const char*> keys) {
    for (const auto& item : j.items()) {
      bool known = false;
      for (const char* k : keys) known = known || item.key() == k;
      if (!known) throw ConfigError(path + "." + item.key() + ": unknown key");
    }
  }
  static const Json& at(const Json& j, const char* key, const std::string& path) {
    if (!j.contains(key)) throw ConfigError(path + "." + key + ": missing required key");
    return j[key];
  }
  static double number(const Json& j, const std::string& path) {
    if (!j.is_number()) throw ConfigError(path + ": expected a number");
    return j.get<double>();
  }
  static int integer(const Json& j, const std::string& path) {
    if (!j.is_number_integer()) throw ConfigError(path + ": expected an integer");
    return j.get<int>();
  }
  static std::string get_string(const Json& j, const char* key, const std::string& path, bool required) {
    if (!j.contains(key)) {
      if (required) throw ConfigError(path + "." + key + ": missing required key");
      return {};
    }
    if (!j[key].is_string()) throw ConfigError(path + "." + key + ": expected a string");
    return j[key].get<std::string>();
  }

  static void read_manifold(const Json& j, const std::string& path, ManifoldSpec& m) {
    expect_object(j, path);
    allow(j, path, {"kind", "dim", "r_max", "a", "h_expr"});
    m.kind = get_string(j, "kind", path, true);
    if (m.kind != "euclidean" && m.kind != "hyperbolic" && m.kind != "paraboloid" && m.kind != "custom")
      throw ConfigError(path + ".kind: unknown manifold kind '" + m.kind + "'");
    m.dim = integer(at(j, "dim", path), path + ".dim");
    m.r_max = number(at(j, "r_max", path), path + ".r_max");
    if (j.contains("a")) {
      if (m.kind != "hyperbolic") throw ConfigError(path + ".a: only hyperbolic manifolds take 'a'");
      m.a = number(j["a"], path + ".a");
    }
    if (m.kind == "custom") m.h_expr = get_string(j, "h_expr", path, true);
    else if (j.contains("h_expr")) throw ConfigError(path + ".h_expr: only custom manifolds take 'h_expr'");
  }

  static void read_field(const Json& j, const std::string& path, FieldSpec& f) {
    expect_object(j, path);
    allow(j, path, {"catalog", "params", "expr"});
    const bool cat = j.contains("catalog"), ex = j.contains("expr");
    if (cat == ex) throw ConfigError(path + ": exactly one of 'catalog' or 'expr' is required");
    if (ex) {
      if (j.contains("params")) throw ConfigError(path + ".params: only catalog fields take parameters");
      f.expr = get_string(j, "expr", path, true);
      return;
    }
    f.catalog = get_string(j, "catalog", path, true);
    if (j.contains("params")) {
      expect_object(j["params"], path + ".params");
      for (const auto& [key, value] : j["params"].items()) f.params[key] = number(value, path + ".params." + key);
    }
  }

  static GridSpec read_grid(const Json& j, const std::string& path, GridSpec g) {
    expect_object(j, path);
    allow(j, path, {"r_lo", "r_hi", "count", "spacing"});
    if (j.contains("r_lo")) g.r_lo = number(j["r_lo"], path + ".r_lo");
    if (j.contains("r_hi")) g.r_hi = number(j["r_hi"], path + ".r_hi");
    if (j.contains("count")) g.count = integer(j["count"], path + ".count");
    if (j.contains("spacing")) {
      const std::string s = get_string(j, "spacing", path, true);
      if (s == "linear") g.spacing = Spacing::Linear;
      else if (s == "geometric") g.spacing = Spacing::Geometric;
      else throw ConfigError(path + ".spacing: expected 'linear' or 'geometric'");
    }
    if (!(g.r_lo > 0.0)) throw ConfigError(path + ".r_lo: must be > 0");
    if (!(g.r_hi >= g.r_lo)) throw ConfigError(path + ".r_hi: must be >= r_lo");
    if (g.count < 1 || (g.count == 1 && g.r_hi != g.r_lo)) throw ConfigError(path + ".count: must be >= 2 for a range");
    return g;
  }

  static void read_quadrature(const Json& j, const std::string& path, QuadratureSpec& q) {
    expect_object(j, path);
    allow(j, path, {"sphere_order", "radial_order", "sup_density"});
    if (j.contains("sphere_order")) {
      q.sphere_order = integer(j["sphere_order"], path + ".sphere_order");
      if (q.sphere_order < 4) throw ConfigError(path + ".sphere_order: must be >= 4");
    }
    if (j.contains("radial_order")) {
      q.radial_order = integer(j["radial_order"], path + ".radial_order");
      if (q.radial_order < 1) throw ConfigError(path + ".radial_order: must be >= 1");
    }
    if (j.contains("sup_density")) {
      const Json& s = j["sup_density"];
      const std::string sp = path + ".sup_density";
      expect_object(s, sp);
      allow(s, sp, {"radii", "directions"});
      if (s.contains("radii")) q.sup.radii = integer(s["radii"], sp + ".radii");
      if (s.contains("directions")) q.sup.directions = integer(s["directions"], sp + ".directions");
      if (q.sup.radii < 2 || q.sup.directions < 1) throw ConfigError(sp + ": densities must be positive");
    }
  }

  static CheckSpec read_check(const Json& j, const std::string& path, const GridSpec& base) {
    CheckSpec c;
    if (j.is_string()) {
      const auto id = parse_check_id(j.get<std::string>());
      if (!id) throw ConfigError(path + ": unknown check id '" + j.get<std::string>() + "'");
      c.id = *id;
      return c;
    }
    expect_object(j, path);
    allow(j, path, {"id", "p", "grid", "tail", "weight"});
    const std::string name = get_string(j, "id", path, true);
    const auto id = parse_check_id(name);
    if (!id) throw ConfigError(path + ".id: unknown check id '" + name + "'");
    c.id = *id;
    if (j.contains("p")) c.p = number(j["p"], path + ".p");
    if (j.contains("grid")) c.grid = read_grid(j["grid"], path + ".grid", base);
    if (j.contains("tail")) {
      if (c.id != CheckId::Limsup) throw ConfigError(path + ".tail: only limsup takes a tail grid");
      c.tail = read_grid(j["tail"], path + ".tail", base);
    }
    if (j.contains("weight")) {
      if (c.id != CheckId::GrowthClass) throw ConfigError(path + ".weight: only growth_class takes a weight");
      c.weight = get_string(j, "weight", path, true);
      if (c.weight != "profile" && c.weight != "constant")
        throw ConfigError(path + ".weight: expected 'profile' or 'constant'");
    }
    return c;
  }

  static void validate(const ScenarioConfig& c) {
    if (c.manifold.dim < 2) throw ConfigError("$.manifold.dim: must be >= 2");
    if (!(c.manifold.r_max > 0.0)) throw ConfigError("$.manifold.r_max: must be > 0");
    if (c.grid.r_hi > c.manifold.r_max)
      throw ConfigError("$.grid.r_hi: " + expr::format_number(c.grid.r_hi) + " exceeds manifold r_max " +
                        expr::format_number(c.manifold.r_max));
    for (std::size_t i = 0; i < c.checks.size(); ++i) {
      const std::string path = "$.checks[" + std::to_string(i) + "]";
      if (c.checks[i].grid && c.checks[i].grid->r_hi > c.manifold.r_max)
        throw ConfigError(path + ".grid.r_hi: exceeds manifold r_max");
      if (c.checks[i].tail && c.checks[i].tail->r_hi > c.manifold.r_max)
        throw ConfigError(path + ".tail.r_hi: exceeds manifold r_max");
    }
  }
};

}  // namespace detail

inline ScenarioConfig parse_config(const std::string& text) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return detail::ConfigReader::read(root);
}

inline ModelManifold build_manifold(const ManifoldSpec& s) {
  try {
    if (s.kind == "euclidean") return ModelManifold(s.dim, WarpingFunction::euclidean(), s.r_max);
    if (s.kind == "hyperbolic") return ModelManifold(s.dim, WarpingFunction::hyperbolic(s.a), s.r_max);
    if (s.kind == "paraboloid") return ModelManifold(s.dim, WarpingFunction::paraboloid(), s.r_max);
    return ModelManifold(s.dim, WarpingFunction::custom(s.h_expr), s.r_max);
  } catch (const ParseError& e) {
    throw ConfigError("$.manifold.h_expr: " + std::string(e.what()) + " at position " + std::to_string(e.position()));
  } catch (const DomainError& e) {
    throw ConfigError(std::string("$.manifold: ") + e.what());
  }
}

inline ScalarField build_field(const FieldSpec& s, int dim) {
  try {
    if (!s.catalog.empty()) return make_catalog_field(s.catalog, s.params, dim);
    return make_expression_field(s.expr, dim);
  } catch (const ParseError& e) {
    throw ConfigError("$.field.expr: " + std::string(e.what()) + " at position " + std::to_string(e.position()));
  } catch (const DomainError& e) {
    throw ConfigError(std::string("$.field: ") + e.what());
  }
}

// ---------------------------------------------------------------------------------------------
// Report

inline Json to_json(const ManifoldSpec& s) {
  Json j;
  j["kind"] = s.kind;
  j["dim"] = s.dim;
  j["r_max"] = s.r_max;
  if (s.kind == "hyperbolic") j["a"] = s.a;
  if (s.kind == "custom") j["h_expr"] = s.h_expr;
  return j;
}

inline Json to_json(const FieldSpec& s) {
  Json j;
  if (!s.catalog.empty()) {
    j["catalog"] = s.catalog;
    Json params = Json::object();
    for (const auto& [k, v] : s.params) params[k] = v;
    j["params"] = params;
  } else {
    j["expr"] = s.expr;
  }
  return j;
}

inline Json to_json(const Witness& w) {
  Json j;
  j["radius"] = w.radius;
  j["lhs"] = w.lhs;
  j["rhs"] = w.rhs;
  if (w.location) j["location"] = {(*w.location)[0], (*w.location)[1], (*w.location)[2]};
  return j;
}

inline Json to_json(const CheckReport& r) {
  Json j;
  j["id"] = to_string(r.id);
  j["hypotheses_ok"] = r.hypotheses_ok;
  Json hyps = Json::array();
  for (const auto& h : r.hypotheses) hyps.push_back({{"name", h.name}, {"ok", h.ok}, {"detail", h.detail}});
  j["hypotheses"] = hyps;
  Json measured = Json::object();
  for (const auto& [k, v] : r.measured) measured[k] = v;
  j["measured"] = measured;
  j["verdict"] = to_string(r.verdict.kind);
  if (r.verdict.kind == VerdictKind::Inapplicable) {
    Json w = r.verdict.witness ? to_json(*r.verdict.witness) : Json::object();
    w["hypothesis"] = r.verdict.hypothesis;
    w["reason"] = r.verdict.reason;
    j["witness"] = w;
  } else if (r.verdict.witness) {
    Json w = to_json(*r.verdict.witness);
    if (!r.verdict.reason.empty()) w["reason"] = r.verdict.reason;
    j["witness"] = w;
  }
  j["range"] = {r.range_lo, r.range_hi};
  Json tol = Json::object();
  for (const auto& [k, v] : r.tolerances) tol[k] = v;
  j["tolerances"] = tol;
  if (r.id == CheckId::Limsup) j["note"] = "finite-range surrogate: limsup replaced by max over the tail grid";
  if (r.id == CheckId::Growth) j["note"] = "range-qualified: rho scanned on the grid, small r reported separately";
  return j;
}

struct ScenarioResult {
  Json report;
  int exit_code = 0;  ///< 0 no Fails, 1 some Fails, 2 evaluation error
  std::vector<CheckReport> checks;
};

struct RunOptions {
  int threads = 1;
  std::optional<std::uint64_t> seed;
};

namespace detail {

inline CheckReport run_one(const CheckSpec& spec, const ScenarioConfig& cfg, const ModelManifold& m,
                           const ScalarField& u, const HarnessOptions& opts) {
  const std::vector<double> grid = (spec.grid ? *spec.grid : cfg.grid).radii();
  switch (spec.id) {
    case CheckId::MeanValue: return check_mean_value(u, m, grid, opts);
    case CheckId::Growth: return check_growth(u, m, grid, opts).report;
    case CheckId::IntegralLower: return check_integral_lower(u, m, spec.p, grid, opts).report;
    case CheckId::ConvexOrigin: {
      const IntegralLowerResult il = check_integral_lower(u, m, spec.p, grid, opts);
      if (!il.envelope) {
        CheckReport rep;
        rep.id = CheckId::ConvexOrigin;
        rep.range_lo = il.report.range_lo;
        rep.range_hi = il.report.range_hi;
        rep.hypotheses = il.report.hypotheses;
        const std::string why = il.report.inapplicable() ? "integral envelope gated: " + il.report.verdict.hypothesis
                                                         : "integral envelope has no positive constant";
        rep.hypotheses.push_back({"integral_envelope", false, why});
        rep.hypotheses_ok = false;
        rep.verdict = Verdict::inapplicable("integral_envelope", why);
        return rep;
      }
      return check_convex_origin(u, m, il.envelope->r0, il.envelope->C, opts);
    }
    case CheckId::Energy: return check_energy(u, m, grid, opts);
    case CheckId::Limsup: return check_limsup(u, m, (spec.tail ? *spec.tail : cfg.grid).radii(), opts);
    case CheckId::GradientIntegral: return check_gradient_integral(u, m, grid, opts);
    case CheckId::Bishop: return check_bishop(m, grid);
    case CheckId::GrowthClass: {
      std::shared_ptr<const RadialProfile> weight;
      if (spec.weight == "constant")
        weight = std::make_shared<RadialProfile>(RadialProfile::constant(grid, 1.0));
      else
        weight = std::make_shared<RadialProfile>(symmetrize(u, m, grid, opts.rule(m.dim())));
      return classify_growth(u, m, weight, spec.p, grid, opts).report;
    }
    case CheckId::Symmetrization: return check_symmetrization(u, m, grid, opts);
    case CheckId::OriginLimits: return check_origin_limits(u, m, opts);
  }
  throw DomainError("unknown check");
}

}  // namespace detail

inline HarnessOptions harness_options(const ScenarioConfig& cfg, const RunOptions& run = {}) {
  HarnessOptions o;
  o.sphere_order = cfg.quadrature.sphere_order;
  o.radial_order = cfg.quadrature.radial_order;
  o.sup = cfg.quadrature.sup;
  o.convexity.seed = run.seed.value_or(cfg.seed);
  if (auto it = cfg.tolerances.find("verdict"); it != cfg.tolerances.end()) o.verdict_tol = it->second;
  return o;
}

/// Runs every check in declared order. Check failures that throw become error entries and
/// the remaining checks still run. Throws ConfigError when the manifold or field is invalid.
inline ScenarioResult run_scenario(const ScenarioConfig& cfg, const RunOptions& run = {}) {
  const ModelManifold m = build_manifold(cfg.manifold);
  const ScalarField u = build_field(cfg.field, cfg.manifold.dim);
  const HarnessOptions opts = harness_options(cfg, run);

  struct Outcome {
    std::optional<CheckReport> report;
    std::string error;
  };
  auto execute = [&](const CheckSpec& spec) {
    Outcome out;
    try {
      out.report = detail::run_one(spec, cfg, m, u, opts);
    } catch (const std::exception& e) {
      out.error = e.what();
    }
    return out;
  };

  std::vector<Outcome> outcomes(cfg.checks.size());
  const std::size_t workers = static_cast<std::size_t>(std::max(1, run.threads));
  for (std::size_t start = 0; start < cfg.checks.size(); start += workers) {
    const std::size_t stop = std::min(cfg.checks.size(), start + workers);
    if (workers == 1) {
      outcomes[start] = execute(cfg.checks[start]);
      continue;
    }
    std::vector<std::future<Outcome>> batch;
    for (std::size_t i = start; i < stop; ++i)
      batch.push_back(std::async(std::launch::async, execute, std::cref(cfg.checks[i])));
    for (std::size_t i = start; i < stop; ++i) outcomes[i] = batch[i - start].get();
  }

  ScenarioResult result;
  Json& rep = result.report;
  rep["scenario"] = cfg.name;
  rep["manifold"] = to_json(cfg.manifold);
  FieldSpec resolved = cfg.field;
  if (!resolved.catalog.empty()) resolved.params = u.source().params;
  rep["field"] = to_json(resolved);
  Json checks = Json::array();
  bool any_fail = false, any_error = false;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (outcomes[i].report) {
      checks.push_back(to_json(*outcomes[i].report));
      any_fail = any_fail || outcomes[i].report->fails();
      result.checks.push_back(std::move(*outcomes[i].report));
    } else {
      checks.push_back({{"id", to_string(cfg.checks[i].id)}, {"error", outcomes[i].error}});
      any_error = true;
    }
  }
  rep["checks"] = checks;
  result.exit_code = any_error ? 2 : any_fail ? 1 : 0;
  return result;
}

inline std::string format_report(const Json& report) { return report.dump(2) + "\n"; }

/// Profile CSV: r = 0 plus the config grid.
inline void dump_profile(const ScenarioConfig& cfg, std::ostream& os, const RunOptions& run = {}) {
  const ModelManifold m = build_manifold(cfg.manifold);
  const ScalarField u = build_field(cfg.field, cfg.manifold.dim);
  const HarnessOptions opts = harness_options(cfg, run);
  std::vector<double> grid{0.0};
  for (double r : cfg.grid.radii()) grid.push_back(r);
  const SphereRule rule = opts.rule(m.dim());
  const RadialProfile p = symmetrize(u, m, grid, rule);
  write_profile_csv(os, p, laplacian_consistency(u, m, p, rule).mean_lap_u);
}

// ---------------------------------------------------------------------------------------------
// Built-in scenarios and catalog listing

struct BuiltinScenario {
  const char* name;
  const char* config;
};

/// Alphabetized.
inline const std::vector<BuiltinScenario>& builtin_scenarios() {
  static const std::vector<BuiltinScenario> list = {
      {"euclid-exp-x1", R"({
  "name": "euclid-exp-x1",
  "manifold": {"kind": "euclidean", "dim": 2, "r_max": 8},
  "field": {"catalog": "exp_x1"},
  "grid": {"r_lo": 1, "r_hi": 8, "count": 8},
  "quadrature": {"sup_density": {"radii": 64, "directions": 128}},
  "checks": [
    {"id": "mean_value", "grid": {"r_lo": 0.5, "r_hi": 8, "count": 6}},
    "growth",
    {"id": "energy", "grid": {"r_lo": 0.5, "r_hi": 2, "count": 4}},
    {"id": "growth_class", "p": 1},
    {"id": "symmetrization", "grid": {"r_lo": 0.05, "r_hi": 7.2, "count": 24}},
    "origin_limits"
  ]
})"},
      {"euclid-gradient", R"({
  "name": "euclid-gradient",
  "manifold": {"kind": "euclidean", "dim": 2, "r_max": 8},
  "field": {"catalog": "quadratic_x1", "params": {"a": 3, "b": 2, "c": 1}},
  "grid": {"r_lo": 0.1, "r_hi": 0.4, "count": 4},
  "checks": ["gradient_integral", "mean_value"]
})"},
      {"euclid-gradient-gate", R"({
  "name": "euclid-gradient-gate",
  "manifold": {"kind": "euclidean", "dim": 2, "r_max": 8},
  "field": {"catalog": "quadratic_x1"},
  "grid": {"r_lo": 2, "r_hi": 2, "count": 1},
  "checks": ["gradient_integral"]
})"},
      {"euclid-r2", R"({
  "name": "euclid-r2",
  "manifold": {"kind": "euclidean", "dim": 2, "r_max": 40},
  "field": {"catalog": "r_power"},
  "grid": {"r_lo": 1, "r_hi": 10, "count": 10},
  "checks": [
    {"id": "mean_value", "grid": {"r_lo": 0.5, "r_hi": 10, "count": 20}},
    "growth",
    {"id": "energy", "grid": {"r_lo": 1, "r_hi": 2, "count": 5}},
    {"id": "limsup", "tail": {"r_lo": 8, "r_hi": 10, "count": 5}},
    "bishop",
    {"id": "growth_class", "p": 1},
    "symmetrization",
    "origin_limits"
  ]
})"},
      {"euclid3-r2", R"({
  "name": "euclid3-r2",
  "manifold": {"kind": "euclidean", "dim": 3, "r_max": 20},
  "field": {"catalog": "r_power"},
  "grid": {"r_lo": 0.5, "r_hi": 4, "count": 8},
  "checks": ["mean_value", "growth", "energy", "bishop", "symmetrization", "origin_limits"]
})"},
      {"hyperbolic-gate", R"({
  "name": "hyperbolic-gate",
  "manifold": {"kind": "hyperbolic", "dim": 2, "r_max": 6, "a": 1},
  "field": {"catalog": "r_power"},
  "grid": {"r_lo": 0.5, "r_hi": 1.5, "count": 5},
  "checks": ["mean_value", "growth", "energy", "bishop", "symmetrization"]
})"},
      {"negative-control", R"({
  "name": "negative-control",
  "manifold": {"kind": "euclidean", "dim": 2, "r_max": 10},
  "field": {"catalog": "neg_r2"},
  "grid": {"r_lo": 0.5, "r_hi": 2, "count": 4},
  "checks": ["mean_value", "growth", "energy", "symmetrization"]
})"},
      {"paraboloid-gw74", R"({
  "name": "paraboloid-gw74",
  "manifold": {"kind": "paraboloid", "dim": 2, "r_max": 12},
  "field": {"catalog": "r_power"},
  "grid": {"r_lo": 0.25, "r_hi": 4, "count": 16},
  "checks": [
    {"id": "integral_lower", "p": 2},
    {"id": "convex_origin", "p": 2},
    {"id": "bishop", "grid": {"r_lo": 0.5, "r_hi": 5, "count": 10}},
    "mean_value"
  ]
})"},
      {"paraboloid-zero", R"({
  "name": "paraboloid-zero",
  "manifold": {"kind": "paraboloid", "dim": 2, "r_max": 12},
  "field": {"catalog": "zero"},
  "grid": {"r_lo": 0.25, "r_hi": 4, "count": 16},
  "checks": [{"id": "integral_lower", "p": 2}]
})"},
      {"plane-corollary", R"({
  "name": "plane-corollary",
  "manifold": {"kind": "euclidean", "dim": 2, "r_max": 12},
  "field": {"catalog": "x1_squared"},
  "grid": {"r_lo": 1, "r_hi": 5.4, "count": 12},
  "quadrature": {"sup_density": {"radii": 64, "directions": 128}},
  "checks": ["growth", "mean_value", {"id": "growth_class", "p": 1}]
})"},
  };
  return list;
}

inline std::optional<ScenarioConfig> builtin_scenario(const std::string& name) {
  for (const auto& b : builtin_scenarios())
    if (name == b.name) return parse_config(b.config);
  return std::nullopt;
}

/// Reads a config file, or a built-in scenario when the argument names one.
inline ScenarioConfig load_config(const std::string& path_or_name) {
  if (auto b = builtin_scenario(path_or_name)) return *b;
  std::ifstream in(path_or_name);
  if (!in) throw ConfigError("cannot open config '" + path_or_name + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

inline std::string list_catalog() {
  std::ostringstream os;
  os << "manifolds:\n";
  os << "  custom      h given by h_expr in r (h(0) = 0, h'(0) = 1)\n";
  os << "  euclidean   h(r) = r\n";
  os << "  hyperbolic  h(r) = sinh(a r)/a\n";
  os << "  paraboloid  surface z = (x^2 + y^2)/2 in arc-length coordinates\n";
  os << "fields:\n";
  for (const auto& e : field_catalog()) {
    os << "  " << e.name << "  " << e.formula;
    std::vector<std::string> claims;
    if (e.flags.nonnegative) claims.push_back("nonnegative");
    if (e.flags.subharmonic) claims.push_back("subharmonic-claimed");
    if (e.flags.convex) claims.push_back("convex-claimed");
    if (e.flags.radial) claims.push_back("radial");
    if (!claims.empty()) {
      os << "  [";
      for (std::size_t i = 0; i < claims.size(); ++i) os << (i ? ", " : "") << claims[i];
      os << "]";
    }
    if (!e.defaults.empty()) {
      os << "  defaults:";
      for (const auto& [k, v] : e.defaults) os << " " << k << "=" << expr::format_number(v);
    }
    os << "\n";
  }
  os << "checks:\n";
  for (const auto& c : check_catalog())
    os << "  " << c.name << "\n    " << c.statement << "\n    requires: " << c.hypotheses << "\n";
  os << "scenarios:\n";
  for (const auto& b : builtin_scenarios()) os << "  " << b.name << "\n";
  return os.str();
}

}  // namespace polelab
