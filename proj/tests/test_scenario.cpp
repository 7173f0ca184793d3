#include <catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "polelab/scenario.hpp"

using namespace polelab;
using Catch::Approx;
using Catch::Matchers::ContainsSubstring;

namespace {
std::string config_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "<no error>";
}

const char* kMinimal = R"({
  "name": "t",
  "manifold": {"kind": "euclidean", "dim": 2, "r_max": 10},
  "field": {"catalog": "r_power"},
  "grid": {"r_lo": 0.5, "r_hi": 5, "count": 4},
  "checks": ["mean_value"]
})";

std::vector<std::vector<double>> read_csv(const std::string& csv) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}
}  // namespace

TEST_CASE("config parsing", "[scenario]") {
  const ScenarioConfig cfg = parse_config(kMinimal);
  CHECK(cfg.name == "t");
  CHECK(cfg.manifold.r_max == 10.0);
  CHECK(cfg.grid.radii().size() == 4);
  REQUIRE(cfg.checks.size() == 1);
  CHECK(cfg.checks[0].id == CheckId::MeanValue);

  const ScenarioConfig full = parse_config(R"({
    "name": "full",
    "manifold": {"kind": "hyperbolic", "dim": 3, "r_max": 6, "a": 0.5},
    "field": {"catalog": "quadratic_x1", "params": {"a": 2}},
    "grid": {"r_lo": 0.1, "r_hi": 1, "count": 5, "spacing": "geometric"},
    "quadrature": {"sphere_order": 8, "radial_order": 32, "sup_density": {"radii": 20, "directions": 30}},
    "checks": [{"id": "integral_lower", "p": 3}, {"id": "limsup", "tail": {"r_lo": 1, "r_hi": 1.5, "count": 3}},
               {"id": "growth_class", "weight": "constant", "p": 0}],
    "tolerances": {"verdict": 1e-6},
    "outputs": {"report_path": "r.json", "csv_path": "p.csv"},
    "seed": 9
  })");
  CHECK(full.manifold.a == 0.5);
  CHECK(full.field.params.at("a") == 2.0);
  CHECK(full.grid.spacing == Spacing::Geometric);
  CHECK(full.quadrature.sup.directions == 30);
  CHECK(full.checks[0].p == 3.0);
  CHECK(full.checks[1].tail->count == 3);
  CHECK(full.checks[2].weight == "constant");
  CHECK(full.tolerances.at("verdict") == 1e-6);
  CHECK(full.report_path == "r.json");
  CHECK(full.seed == 9u);
}

TEST_CASE("config errors name the offending key", "[scenario]") {
  CHECK_THAT(config_error(R"({"name": "x", "manifold": {"kind": "euclidean", "dim": 2, "r_max": 4}, "field": {"catalog": "r_power"},
                             "grid": {"r_lo": 1, "r_hi": 5, "count": 3}, "checks": []})"),
             ContainsSubstring("$.grid.r_hi") && ContainsSubstring("exceeds"));
  CHECK_THAT(config_error(R"({"name": "x", "manifold": {"kind": "euclidean", "dim": 2, "r_max": 4, "radius": 4}, "field": {"catalog": "r_power"},
                             "checks": []})"),
             ContainsSubstring("$.manifold.radius: unknown key"));
  CHECK_THAT(config_error(R"({"name": "x", "manifold": {"kind": "euclidean", "dim": 2, "r_max": 10}, "field": {"catalog": "r_power"}, "checks": ["mean_value", "theorem"]})"),
             ContainsSubstring("$.checks[1]") && ContainsSubstring("unknown check id"));
  CHECK_THAT(config_error(R"({"name": "x", "manifold": {"kind": "euclidean", "dim": 2, "r_max": 10}, "field": {"catalog": "r_power"}, "checks": [{"id": "growth", "foo": 1}]})"),
             ContainsSubstring("$.checks[0].foo: unknown key"));
  CHECK_THAT(config_error(R"({"name": "x", "manifold": {"kind": "euclidean", "dim": 2, "r_max": 10}, "field": {"catalog": "r_power"}, "tolerances": {"verdict": 0}, "checks": []})"),
             ContainsSubstring("$.tolerances.verdict"));
  CHECK_THAT(config_error(R"({"name": "x", "manifold": {"kind": "euclidean", "dim": 2, "r_max": 10}, "field": {"catalog": "r_power", "expr": "r"}, "checks": []})"),
             ContainsSubstring("exactly one"));
  CHECK_THAT(config_error(R"({"name": "x", "manifold": {"kind": "torus"}, "field": {"catalog": "r_power"}, "checks": []})"),
             ContainsSubstring("$.manifold.kind"));
  CHECK_THAT(config_error("{not json"), ContainsSubstring("not valid JSON"));

  ScenarioConfig bad_expr = parse_config(R"({"name": "x", "manifold": {"kind": "euclidean", "dim": 2, "r_max": 10}, "field": {"expr": "r + * 2"}, "checks": []})");
  try {
    build_field(bad_expr.field, 2);
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    CHECK_THAT(std::string(e.what()), ContainsSubstring("$.field.expr") && ContainsSubstring("position 4"));
  }
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("exit codes", "[scenario]") {
  CHECK(run_scenario(parse_config(kMinimal)).exit_code == 0);

  const ScenarioResult hyp = run_scenario(parse_config(R"({
    "name": "h", "manifold": {"kind": "hyperbolic", "dim": 2, "r_max": 6}, "field": {"catalog": "r_power"},
    "grid": {"r_lo": 0.5, "r_hi": 2, "count": 3}, "checks": ["mean_value"]})"));
  CHECK(hyp.exit_code == 0);
  CHECK(hyp.report["checks"][0]["verdict"] == "inapplicable");
  CHECK(hyp.report["checks"][0]["witness"]["hypothesis"] == "ricci_nonnegative");

  const ScenarioResult zero = run_scenario(*builtin_scenario("paraboloid-zero"));
  CHECK(zero.exit_code == 1);

  // an evaluation error inside one check becomes an error entry; the others still run
  const ScenarioResult err = run_scenario(parse_config(R"cfg({
    "name": "e", "manifold": {"kind": "euclidean", "dim": 2, "r_max": 10}, "field": {"expr": "log(x1 + 2)"}, "grid": {"r_lo": 0.5, "r_hi": 5, "count": 3},
    "checks": ["symmetrization", "bishop"]})cfg"));
  CHECK(err.exit_code == 2);
  CHECK(err.report["checks"][0].contains("error"));
  CHECK(err.report["checks"][1]["verdict"] == "holds");
}

TEST_CASE("report layout", "[scenario]") {
  const ScenarioResult r = run_scenario(*builtin_scenario("euclid-r2"));
  CHECK(r.exit_code == 0);
  const Json& rep = r.report;
  CHECK(rep["scenario"] == "euclid-r2");
  CHECK(rep["manifold"]["kind"] == "euclidean");
  CHECK(rep["field"]["params"]["alpha"] == 2.0);
  const Json& mv = rep["checks"][0];
  CHECK(mv["id"] == "mean_value");
  CHECK(mv["hypotheses_ok"] == true);
  CHECK(std::abs(mv["measured"]["C_min"].get<double>() - 0.5) <= 1e-6);
  CHECK(mv["range"].size() == 2);
  CHECK(mv.contains("tolerances"));
  CHECK_FALSE(mv.contains("witness"));
  for (const Json& c : rep["checks"]) CHECK(c["verdict"] == "holds");
  const std::string text = format_report(rep);
  CHECK(text.back() == '\n');
  CHECK(text.find("\"scenario\": \"euclid-r2\"") != std::string::npos);
}

TEST_CASE("catalog listing", "[scenario]") {
  const std::string text = list_catalog();
  CHECK_THAT(text, ContainsSubstring("paraboloid"));
  CHECK(text.find("exp_x1  exp(x1)  [nonnegative, subharmonic-claimed") != std::string::npos);
  CHECK_THAT(text, ContainsSubstring("  growth\n    spherical-mean growth theorem"));
  for (const auto& b : builtin_scenarios()) {
    CHECK_THAT(text, ContainsSubstring(b.name));
    CHECK_NOTHROW(parse_config(b.config));
  }
  CHECK(list_catalog() == text);
}

TEST_CASE("profile dump", "[scenario]") {
  ScenarioConfig cfg = parse_config(R"({"name": "p", "manifold": {"kind": "euclidean", "dim": 2, "r_max": 10}, "field": {"catalog": "exp_x1"},
    "grid": {"r_lo": 0.5, "r_hi": 4, "count": 8}, "checks": []})");
  std::ostringstream os;
  dump_profile(cfg, os);
  const auto rows = read_csv(os.str());
  CHECK(rows.size() == 9);
  CHECK(rows[0][0] == 0.0);
  for (const auto& row : rows) {
    REQUIRE(row.size() == 6);
    CHECK(std::abs(row[1] - oracle::bessel_i0(row[0])) <= 1e-6);
  }
  CHECK(std::abs(rows[2][1] - 1.2660658) <= 1e-6);

  cfg.field.catalog = "r_power";
  std::ostringstream os2;
  dump_profile(cfg, os2);
  for (const auto& row : read_csv(os2.str())) CHECK(row[1] == Approx(row[0] * row[0]).margin(1e-14));
}

TEST_CASE("runs are deterministic and thread-count independent", "[scenario]") {
  const ScenarioConfig cfg = *builtin_scenario("euclid-exp-x1");
  const std::string a = format_report(run_scenario(cfg).report);
  const std::string b = format_report(run_scenario(cfg).report);
  const std::string c = format_report(run_scenario(cfg, {4, std::nullopt}).report);
  CHECK(a == b);
  CHECK(a == c);
}
