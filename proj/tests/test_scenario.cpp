#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "tad/errors.hpp"
#include "tad/io.hpp"
#include "tad/scenario.hpp"
#include "tad/simulation.hpp"

using namespace tad;
namespace fs = std::filesystem;

namespace {

const fs::path kScenarioDir = fs::path(TAD_SCENARIO_DIR);

fs::path write_temp(const std::string& name, const std::string& body) {
  const fs::path p = fs::temp_directory_path() / name;
  std::ofstream out(p);
  out << body;
  return p;
}

// Head-on, one-sided engagement decided within the first control step: the
// attacker starts inside both event radii, so both terminal events trigger
// at the very same instant.
ScenarioConfig instant_tie() {
  ScenarioConfig cfg;
  cfg.name = "instant_tie";
  cfg.target = {0.0, 0.0, 0.0, 0.0};
  cfg.attacker = {0.5, 0.0, kPi, 4.0};
  cfg.defender = {0.0, 0.4, 0.0, 4.0};
  cfg.v_T_max = 2.0;
  cfg.mode = TargetMode::VariableVelocity;
  cfg.R_c = 1.0;
  cfg.r_c = 1.0;
  cfg.duration_cap = 1.0;
  cfg.controller = DefenderController::Clos;
  return cfg;
}

// Fast straight attacker passing the defender's disc on the way to the
// target: both crossings happen inside one control step, defender first.
ScenarioConfig flyby(double defender_x) {
  ScenarioConfig cfg;
  cfg.name = "flyby";
  cfg.target = {0.0, 0.0, 0.0, 0.0};
  cfg.attacker = {2.0, 0.0, kPi, 40.0};
  cfg.defender = {defender_x, 0.0, 0.0, 4.0};
  cfg.v_T_max = 2.0;
  cfg.mode = TargetMode::VariableVelocity;
  cfg.R_c = 1.0;
  cfg.r_c = 1.0;
  cfg.duration_cap = 1.0;
  cfg.controller = DefenderController::Clos;
  cfg.guidance.kappa = 0.0;  // hold the attacker's straight course
  cfg.guidance.switch_period = 1e9;
  return cfg;
}

}  // namespace

TEST_CASE("scenario files load with their stated fields") {
  const ScenarioConfig cfg = load_scenario(kScenarioDir / "cs_escape.json");
  CHECK(cfg.name == "cs_escape");
  CHECK(cfg.mode == TargetMode::ConstantSpeed);
  CHECK(cfg.target.x == 25.0);
  CHECK(cfg.target.y == 30.0);
  CHECK(cfg.attacker.v == 4.0);
  CHECK(cfg.defender.v == 4.0);
  CHECK(cfg.v_T_max == 2.0);
  CHECK(cfg.controller == DefenderController::Nmpc);
  CHECK(cfg.R_c == 1.0);
  CHECK(cfg.r_c == 1.0);
}

TEST_CASE("unreadable and malformed scenarios raise parse errors") {
  CHECK_THROWS_AS(load_scenario("/nonexistent/nowhere.json"), ParseError);
  const fs::path bad = write_temp("tad_bad.json", "{ not json ");
  CHECK_THROWS_AS(load_scenario(bad), ParseError);
  const fs::path wrong_mode = write_temp("tad_mode.json", R"({
    "target": {"x": 0, "y": 0, "alpha": 0, "speed": 2},
    "attacker": {"x": 10, "y": 0, "alpha": 3, "speed": 4},
    "defender": {"x": -10, "y": 0, "alpha": 0, "speed": 4},
    "v_T_max": 2.0, "target_mode": "sideways"
  })");
  CHECK_THROWS_AS(load_scenario(wrong_mode), ParseError);
}

TEST_CASE("physically invalid scenarios raise validation errors") {
  ScenarioConfig cfg = instant_tie();
  SUBCASE("negative attacker speed") {
    cfg.attacker.v = -1.0;
    CHECK_THROWS_AS(validate_scenario(cfg), ValidationError);
  }
  SUBCASE("zero capture radius") {
    cfg.R_c = 0.0;
    CHECK_THROWS_AS(validate_scenario(cfg), ValidationError);
  }
  SUBCASE("target faster than its bound") {
    cfg.target.v = 3.0;
    CHECK_THROWS_AS(validate_scenario(cfg), ValidationError);
  }
  SUBCASE("constant-speed mode with a slack initial speed") {
    cfg.mode = TargetMode::ConstantSpeed;
    cfg.target.v = 1.0;
    CHECK_THROWS_AS(validate_scenario(cfg), ValidationError);
  }
  SUBCASE("the unmodified scenario is valid") {
    CHECK_NOTHROW(validate_scenario(cfg));
  }
}

TEST_CASE("safe distance resolves absolutely or from the initial range") {
  ScenarioConfig cfg = instant_tie();
  cfg.safe_distance = {SafeDistanceSpec::Kind::Absolute, 7.5};
  CHECK(resolved_safe_distance(cfg) == 7.5);
  cfg.safe_distance = {SafeDistanceSpec::Kind::FractionOfInitialRange, 0.5};
  CHECK(resolved_safe_distance(cfg) == doctest::Approx(0.25).epsilon(1e-15));
  const NmpcConfig m = resolved_nmpc_config(cfg);
  CHECK(m.safe_distance == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(m.v_T_max == cfg.v_T_max);
  CHECK(m.mode == cfg.mode);
}

TEST_CASE("simultaneous terminal events resolve to interception") {
  const SimResult r = run_simulation(instant_tie());
  CHECK(r.outcome == Outcome::AttackerIntercepted);
  CHECK(r.event_time == doctest::Approx(0.0).scale(1.0));
  CHECK(r.metrics.outcome == Outcome::AttackerIntercepted);
}

TEST_CASE("within-step flybys are caught and interpolated") {
  // Defender disc first: interception, a quarter of the way into the step.
  const SimResult a = run_simulation(flyby(0.95));
  CHECK(a.outcome == Outcome::AttackerIntercepted);
  CHECK(a.event_time < a.dt);
  CHECK(a.event_time > 0.0);
  CHECK(a.metrics.require_interception_time() == a.event_time);

  // Defender behind the attacker: the target disc is reached instead, at
  // range 1 after 1 unit of closing at 40 m/s with the target fixed.
  const SimResult b = run_simulation(flyby(-3.0));
  CHECK(b.outcome == Outcome::TargetCaptured);
  CHECK(b.event_time == doctest::Approx(0.025).epsilon(1e-12));
}

TEST_CASE("timeout runs have no interception time") {
  ScenarioConfig cfg = flyby(-3.0);
  cfg.attacker = {200.0, 0.0, 0.0, 1.0};  // ambling away; nothing happens
  cfg.duration_cap = 0.5;
  const SimResult r = run_simulation(cfg);
  CHECK(r.outcome == Outcome::Timeout);
  CHECK_FALSE(r.metrics.interception_time.has_value());
  CHECK_THROWS_AS(r.metrics.require_interception_time(), NoEvent);
}

TEST_CASE("runs are deterministic per seed and vary across seeds") {
  const ScenarioConfig cfg =
      load_scenario(kScenarioDir / "unequal_capture.json");
  const SimResult a = run_simulation(cfg, 5);
  const SimResult b = run_simulation(cfg, 5);
  const SimResult c = run_simulation(cfg, 6);
  CHECK(a.outcome == b.outcome);
  CHECK(a.event_time == b.event_time);
  REQUIRE(a.log.size() == b.log.size());
  CHECK(a.log.back().est_x_A == b.log.back().est_x_A);
  CHECK(a.log.back().x_D == b.log.back().x_D);
  // A different measurement stream moves the estimates.
  CHECK(a.log.back().est_x_A != c.log.back().est_x_A);
}

TEST_CASE("closed-loop controls respect their bounds") {
  const ScenarioConfig cfg = load_scenario(kScenarioDir / "vv_escape.json");
  const SimResult r = run_simulation(cfg);
  CHECK(r.outcome == Outcome::AttackerIntercepted);
  const NmpcConfig m = resolved_nmpc_config(cfg);
  for (const auto& row : r.log) {
    CHECK(std::hypot(row.u_x, row.u_y) <= m.v_T_max + 1e-9);
    CHECK(std::abs(row.alpha_dot_D) <= m.alpha_dot_max + 1e-12);
  }
  // The defender's pursuit makes headway immediately: the attacker-defender
  // range is strictly shrinking half a second in.
  const double r0 = r.log.front().r;
  for (const auto& row : r.log) {
    if (row.t >= 0.5) {
      CHECK(row.r < r0);
      break;
    }
  }
}

TEST_CASE("recomputing metrics from the log is stable") {
  const ScenarioConfig cfg =
      load_scenario(kScenarioDir / "unequal_capture.json");
  const SimResult r = run_simulation(cfg);
  const MetricsRecord m = compute_metrics(r);
  CHECK(m.outcome == r.metrics.outcome);
  CHECK(m.defender_effort ==
        doctest::Approx(r.metrics.defender_effort).epsilon(1e-12));
  CHECK(m.combined_effort ==
        doctest::Approx(r.metrics.combined_effort).epsilon(1e-12));
}

TEST_CASE("controller comparison runs each law once") {
  const ScenarioConfig cfg = instant_tie();
  const auto rows = compare_controllers(
      cfg, {DefenderController::Nmpc, DefenderController::Clos});
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].controller == DefenderController::Nmpc);
  CHECK(rows[1].controller == DefenderController::Clos);
  CHECK(rows[0].metrics.outcome == Outcome::AttackerIntercepted);
  CHECK_THROWS_AS(compare_controllers(cfg, {DefenderController::Nmpc}),
                  ValidationError);
}

TEST_CASE("trajectory files carry the full column contract") {
  const SimResult r = run_simulation(flyby(0.95));
  std::ostringstream out;
  write_trajectory_csv(out, r);
  std::istringstream in(out.str());
  std::string header;
  std::getline(in, header);
  CHECK(header ==
        "t,x_T,y_T,x_A,y_A,x_D,y_D,u_x,u_y,alpha_dot_D,a_A,R,r,"
        "est_x_A,est_y_A,est_alpha_A,est_a_A,sigma_x,sigma_y,sigma_alpha,"
        "sigma_a");
  size_t rows = 0;
  std::string line;
  std::vector<std::string> first;
  while (std::getline(in, line)) {
    if (rows == 0) {
      std::istringstream ls(line);
      std::string cell;
      while (std::getline(ls, cell, ',')) first.push_back(cell);
    }
    ++rows;
  }
  CHECK(rows == r.log.size());
  REQUIRE(first.size() == 21);
  // Values round-trip exactly through the printed representation.
  CHECK(std::stod(first[0]) == r.log.front().t);
  CHECK(std::stod(first[3]) == r.log.front().x_A);
  CHECK(std::stod(first[13]) == r.log.front().est_x_A);
}

TEST_CASE("double formatting round-trips exactly") {
  for (double v : {0.1, -0.0, 3.141592653589793, 1.0 / 3.0, 1e-300, 2e17,
                   -123456.789012345678, 42.0}) {
    CHECK(std::stod(format_double(v)) == v);
  }
}

TEST_CASE("metrics and comparison files are valid structured text") {
  const fs::path dir = fs::temp_directory_path() / "tad_io_test";
  fs::create_directories(dir);
  const SimResult r = run_simulation(flyby(0.95));

  const fs::path mp = dir / "metrics.json";
  write_metrics_json(mp, r);
  std::ifstream min(mp);
  const nlohmann::json mj = nlohmann::json::parse(min);
  CHECK(mj.at("outcome").get<std::string>() == "attacker_intercepted");
  CHECK(mj.at("seed").get<std::uint64_t>() == r.seed);
  CHECK(mj.at("metrics").at("interception_time").get<double>() ==
        doctest::Approx(r.event_time));

  const auto rows = compare_controllers(
      instant_tie(), {DefenderController::Nmpc, DefenderController::Clos});
  const fs::path cp = dir / "comparison.json";
  write_comparison_json(cp, "instant_tie", rows);
  std::ifstream cin_(cp);
  const nlohmann::json cj = nlohmann::json::parse(cin_);
  CHECK(cj.at("scenario").get<std::string>() == "instant_tie");
  REQUIRE(cj.at("controllers").size() == 2);
  CHECK(cj.at("controllers")[0].at("controller").get<std::string>() == "nmpc");
  const std::string table = comparison_table(rows);
  CHECK(table.find("nmpc") != std::string::npos);
  CHECK(table.find("clos") != std::string::npos);
}

TEST_CASE("zone map files carry one labelled row per node") {
  ZoneParams p;
  p.x_A = 35.0;
  p.gamma_AT = 0.5;
  p.gamma_AD = 1.0;
  GridSpec g{-100.0, 100.0, -100.0, 100.0, 5, 5};
  const ZoneMap map = build_zone_map(p, g, ZoneKind::ConstantSpeed);
  const fs::path dir = fs::temp_directory_path() / "tad_io_test";
  fs::create_directories(dir);
  const fs::path zp = dir / "zones.csv";
  write_zone_csv(zp, map);
  std::ifstream in(zp);
  std::string header;
  std::getline(in, header);
  CHECK(header == "x,y,label");
  size_t rows = 0;
  std::string line;
  bool saw_escape = false, saw_capture = false;
  while (std::getline(in, line)) {
    ++rows;
    saw_escape = saw_escape || line.find("escape") != std::string::npos;
    saw_capture = saw_capture || line.find("capture") != std::string::npos;
  }
  CHECK(rows == 25);
  CHECK(saw_escape);
  CHECK(saw_capture);

  const fs::path sp = dir / "zones.svg";
  write_zone_svg(sp, map, p);
  std::ifstream sin(sp);
  std::stringstream buf;
  buf << sin.rdbuf();
  CHECK(buf.str().rfind("<svg", 0) == 0);
  CHECK(buf.str().find("</svg>") != std::string::npos);
}

TEST_CASE("zone sweep validates the analytic map against the closed loop") {
  ScenarioConfig tmpl = load_scenario(kScenarioDir / "cs_sweep.json");
  GridSpec grid{-100.0, 100.0, -100.0, 100.0, 3, 3};
  const SweepReport rep = sweep_zone_validation(tmpl, grid);
  REQUIRE(rep.cells.size() == 9);
  CHECK(rep.params.gamma_AT == doctest::Approx(0.5));
  CHECK(rep.params.gamma_AD == doctest::Approx(1.0));
  CHECK(rep.compared > 0);
  CHECK(rep.compared + int(std::count_if(
                          rep.cells.begin(), rep.cells.end(),
                          [](const SweepCell& c) { return c.excluded; })) ==
        int(rep.cells.size()));
  CHECK(rep.agreement >= 0.8);
  for (const auto& c : rep.cells) {
    if (c.excluded) continue;
    CHECK(c.agree == (c.predicted == c.simulated));
  }
  const std::string line = sweep_summary(rep);
  CHECK(line.find("agree") != std::string::npos);

  const fs::path dir = fs::temp_directory_path() / "tad_io_test";
  fs::create_directories(dir);
  const fs::path jp = dir / "sweep.json";
  write_sweep_json(jp, rep);
  std::ifstream in(jp);
  const nlohmann::json j = nlohmann::json::parse(in);
  CHECK(j.at("cells").size() == 9);
  CHECK(j.at("agreement").get<double>() == doctest::Approx(rep.agreement));
}
