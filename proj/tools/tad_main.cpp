// Command-line front end: closed-loop runs, analytic zone maps, zone/sim
// sweeps and controller comparisons.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tad/errors.hpp"
#include "tad/io.hpp"
#include "tad/scenario.hpp"
#include "tad/simulation.hpp"
#include "tad/zones.hpp"

namespace fs = std::filesystem;

namespace {

struct RunArgs {
  std::string scenario;
  std::string out = ".";
  std::uint64_t seed = 0;
  bool seed_set = false;
};

struct ZonesArgs {
  std::string mode = "cs";
  double gamma_at = 0.5;
  double gamma_ad = 1.0;
  double xa = 1.0;
  double e = 0.5;
  bool e_absolute = false;
  double sigma = 0.0;
  int grid = 81;
  std::vector<double> extent;  // x_min x_max y_min y_max
  std::string out = ".";
};

struct SweepArgs {
  std::string scenario;
  int grid = 21;
  std::vector<double> extent;
  std::string out = ".";
};

struct CompareArgs {
  std::string scenario;
  std::string controllers = "nmpc,clos,aclos";
  std::string out = ".";
};

tad::ZoneKind parse_zone_kind(const std::string& mode) {
  if (mode == "cs") return tad::ZoneKind::ConstantSpeed;
  if (mode == "stationary") return tad::ZoneKind::Stationary;
  if (mode == "vv") return tad::ZoneKind::VariableVelocity;
  if (mode == "stochastic") return tad::ZoneKind::Stochastic;
  throw tad::ValidationError("unknown zone mode '" + mode +
                             "' (expected cs, stationary, vv or stochastic)");
}

std::vector<tad::DefenderController> parse_controllers(
    const std::string& csv) {
  std::vector<tad::DefenderController> out;
  std::string token;
  for (std::size_t i = 0; i <= csv.size(); ++i) {
    if (i == csv.size() || csv[i] == ',') {
      if (token == "nmpc") {
        out.push_back(tad::DefenderController::Nmpc);
      } else if (token == "clos") {
        out.push_back(tad::DefenderController::Clos);
      } else if (token == "aclos") {
        out.push_back(tad::DefenderController::Aclos);
      } else if (!token.empty()) {
        throw tad::ValidationError("unknown controller '" + token + "'");
      }
      token.clear();
    } else {
      token += csv[i];
    }
  }
  return out;
}

int do_run(const RunArgs& a) {
  tad::ScenarioConfig cfg = tad::load_scenario(a.scenario);
  if (a.seed_set) cfg.seed = a.seed;
  const tad::SimResult res = tad::run_simulation(cfg);

  fs::create_directories(a.out);
  const fs::path traj = fs::path(a.out) / (cfg.name + "_trajectory.csv");
  const fs::path metr = fs::path(a.out) / (cfg.name + "_metrics.json");
  tad::write_trajectory_csv(traj, res);
  tad::write_metrics_json(metr, res);

  std::cout << cfg.name << ": " << tad::outcome_name(res.outcome) << " at t="
            << tad::format_double(res.event_time) << " s over "
            << res.log.size() << " steps\n"
            << "wrote " << traj.string() << "\n"
            << "wrote " << metr.string() << "\n";
  return 0;
}

int do_zones(const ZonesArgs& a) {
  const tad::ZoneKind kind = parse_zone_kind(a.mode);

  tad::ZoneParams params;
  params.x_A = a.xa;
  params.gamma_AT = a.gamma_at;
  params.gamma_AD = a.gamma_ad;
  params.e_policy.kind =
      a.e_absolute ? tad::SafeDistancePolicy::Kind::Absolute
                   : tad::SafeDistancePolicy::Kind::FractionOfInitialRange;
  params.e_policy.value = a.e;
  params.sigma_pos = a.sigma;

  tad::GridSpec grid;
  if (a.extent.size() == 4) {
    grid.x_min = a.extent[0];
    grid.x_max = a.extent[1];
    grid.y_min = a.extent[2];
    grid.y_max = a.extent[3];
  } else {
    grid.x_min = -3.0 * a.xa;
    grid.x_max = 5.0 * a.xa;
    grid.y_min = -4.0 * a.xa;
    grid.y_max = 4.0 * a.xa;
  }
  grid.nx = grid.ny = a.grid;

  const tad::ZoneMap map = tad::build_zone_map(params, grid, kind);

  fs::create_directories(a.out);
  const fs::path csv = fs::path(a.out) / ("zones_" + a.mode + ".csv");
  const fs::path svg = fs::path(a.out) / ("zones_" + a.mode + ".svg");
  tad::write_zone_csv(csv, map);
  tad::write_zone_svg(svg, map, params);

  int escape = 0, capture = 0, boundary = 0;
  for (tad::ZoneLabel l : map.labels) {
    if (l == tad::ZoneLabel::Escape) ++escape;
    if (l == tad::ZoneLabel::Capture) ++capture;
    if (l == tad::ZoneLabel::Boundary) ++boundary;
  }
  std::cout << "zone map (" << a.mode << "): " << escape << " escape, "
            << capture << " capture, " << boundary << " boundary samples\n"
            << "wrote " << csv.string() << "\n"
            << "wrote " << svg.string() << "\n";
  return 0;
}

int do_sweep(const SweepArgs& a) {
  const tad::ScenarioConfig cfg = tad::load_scenario(a.scenario);

  const double xa =
      0.5 * tad::distance(cfg.attacker.position(), cfg.defender.position());
  tad::GridSpec grid;
  if (a.extent.size() == 4) {
    grid.x_min = a.extent[0];
    grid.x_max = a.extent[1];
    grid.y_min = a.extent[2];
    grid.y_max = a.extent[3];
  } else {
    grid.x_min = -2.0 * xa;
    grid.x_max = 4.0 * xa;
    grid.y_min = 0.2 * xa;
    grid.y_max = 3.0 * xa;
  }
  grid.nx = grid.ny = a.grid;

  const tad::SweepReport rep = tad::sweep_zone_validation(cfg, grid);

  fs::create_directories(a.out);
  const fs::path path = fs::path(a.out) / (cfg.name + "_sweep.json");
  tad::write_sweep_json(path, rep);
  std::cout << tad::sweep_summary(rep) << "wrote " << path.string() << "\n";
  return 0;
}

int do_compare(const CompareArgs& a) {
  const tad::ScenarioConfig cfg = tad::load_scenario(a.scenario);
  const std::vector<tad::DefenderController> list =
      parse_controllers(a.controllers);
  const std::vector<tad::ComparisonRow> rows =
      tad::compare_controllers(cfg, list);

  fs::create_directories(a.out);
  const fs::path path = fs::path(a.out) / (cfg.name + "_comparison.json");
  tad::write_comparison_json(path, cfg.name, rows);
  std::cout << tad::comparison_table(rows) << "wrote " << path.string()
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Target/attacker/defender engagement simulator and zone analyser"};
  app.require_subcommand(1);

  RunArgs run_args;
  CLI::App* run = app.add_subcommand(
      "run", "Run one closed-loop engagement and write its trajectory");
  run->add_option("scenario", run_args.scenario, "Scenario JSON file")
      ->required();
  run->add_option("--out", run_args.out, "Output directory");
  run->add_option("--seed", run_args.seed, "Override the scenario seed")
      ->each([&](const std::string&) { run_args.seed_set = true; });

  ZonesArgs zones_args;
  CLI::App* zones =
      app.add_subcommand("zones", "Compute an analytic escape/capture map");
  zones->add_option("--mode", zones_args.mode,
                    "cs, stationary, vv or stochastic");
  zones->add_option("--gamma-at", zones_args.gamma_at,
                    "target/attacker speed ratio");
  zones->add_option("--gamma-ad", zones_args.gamma_ad,
                    "defender/attacker speed ratio");
  zones->add_option("--xa", zones_args.xa,
                    "attacker half-separation in the canonical frame")
      ->required();
  zones->add_option("--e", zones_args.e, "safe distance (vv mode)");
  zones->add_flag("--e-absolute", zones_args.e_absolute,
                  "treat --e as a length instead of a range fraction");
  zones->add_option("--sigma", zones_args.sigma,
                    "attacker position sigma (stochastic mode)");
  zones->add_option("--grid", zones_args.grid, "samples per axis");
  zones->add_option("--extent", zones_args.extent,
                    "x_min x_max y_min y_max")
      ->expected(4);
  zones->add_option("--out", zones_args.out, "Output directory");

  SweepArgs sweep_args;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "Validate the analytic map against closed-loop runs");
  sweep->add_option("scenario", sweep_args.scenario, "Template scenario JSON")
      ->required();
  sweep->add_option("--grid", sweep_args.grid, "cells per axis");
  sweep->add_option("--extent", sweep_args.extent,
                    "x_min x_max y_min y_max (canonical frame)")
      ->expected(4);
  sweep->add_option("--out", sweep_args.out, "Output directory");

  CompareArgs compare_args;
  CLI::App* compare = app.add_subcommand(
      "compare", "Run the same engagement under different defender laws");
  compare
      ->add_option("scenario", compare_args.scenario, "Scenario JSON file")
      ->required();
  compare->add_option("--controllers", compare_args.controllers,
                      "comma-separated list from nmpc, clos, aclos");
  compare->add_option("--out", compare_args.out, "Output directory");

  try {
    app.parse(argc, argv);
    if (run->parsed()) return do_run(run_args);
    if (zones->parsed()) return do_zones(zones_args);
    if (sweep->parsed()) return do_sweep(sweep_args);
    if (compare->parsed()) return do_compare(compare_args);
    return 2;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const tad::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const tad::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
