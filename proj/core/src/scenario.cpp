#include "tad/scenario.hpp"

#include <fstream>

#include "json.hpp"
#include "tad/errors.hpp"

namespace tad {

namespace {

using nlohmann::json;

AgentState parse_agent(const json& j) {
  AgentState s;
  s.x = j.at("x").get<double>();
  s.y = j.at("y").get<double>();
  s.alpha = j.at("alpha").get<double>();
  s.v = j.at("speed").get<double>();
  return s;
}

TargetMode parse_mode(const std::string& s) {
  if (s == "constant_speed") return TargetMode::ConstantSpeed;
  if (s == "variable_velocity") return TargetMode::VariableVelocity;
  throw ParseError("unknown target_mode '" + s + "'");
}

DefenderController parse_controller(const std::string& s) {
  if (s == "nmpc") return DefenderController::Nmpc;
  if (s == "clos") return DefenderController::Clos;
  if (s == "aclos") return DefenderController::Aclos;
  throw ParseError("unknown defender_controller '" + s + "'");
}

SafeDistanceSpec parse_safe_distance(const json& j) {
  SafeDistanceSpec spec;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "absolute") {
    spec.kind = SafeDistanceSpec::Kind::Absolute;
  } else if (kind == "fraction_of_initial_range") {
    spec.kind = SafeDistanceSpec::Kind::FractionOfInitialRange;
  } else {
    throw ParseError("unknown safe_distance kind '" + kind + "'");
  }
  spec.value = j.at("value").get<double>();
  return spec;
}

Eigen::Matrix4d parse_diag(const json& j) {
  if (!j.is_array() || j.size() != 4) {
    throw ParseError("noise diagonal must be an array of 4 numbers");
  }
  Eigen::Vector4d d;
  for (int i = 0; i < 4; ++i) d[i] = j.at(i).get<double>();
  return d.asDiagonal();
}

}  // namespace

const char* controller_name(DefenderController c) {
  switch (c) {
    case DefenderController::Nmpc:
      return "nmpc";
    case DefenderController::Clos:
      return "clos";
    case DefenderController::Aclos:
      return "aclos";
  }
  return "unknown";
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open scenario file '" + path.string() + "'");
  }

  ScenarioConfig cfg;
  try {
    const json j = json::parse(in);

    cfg.name = j.value("name", path.stem().string());
    cfg.target = parse_agent(j.at("target"));
    cfg.attacker = parse_agent(j.at("attacker"));
    cfg.defender = parse_agent(j.at("defender"));
    cfg.v_T_max = j.at("v_T_max").get<double>();
    cfg.mode = parse_mode(j.at("target_mode").get<std::string>());
    if (j.contains("safe_distance")) {
      cfg.safe_distance = parse_safe_distance(j.at("safe_distance"));
    }
    cfg.R_c = j.value("capture_radius_target", cfg.R_c);
    cfg.r_c = j.value("capture_radius_defender", cfg.r_c);
    cfg.duration_cap = j.value("duration_cap", cfg.duration_cap);
    cfg.seed = j.value("seed", cfg.seed);
    if (j.contains("defender_controller")) {
      cfg.controller =
          parse_controller(j.at("defender_controller").get<std::string>());
    }

    if (j.contains("guidance")) {
      const json& g = j.at("guidance");
      cfg.guidance.kappa = g.value("kappa", cfg.guidance.kappa);
      cfg.guidance.nav_constant =
          g.value("nav_constant", cfg.guidance.nav_constant);
      cfg.guidance.switch_period =
          g.value("switch_period", cfg.guidance.switch_period);
      cfg.guidance.pn_min_range =
          g.value("pn_min_range", cfg.guidance.pn_min_range);
      cfg.guidance.clos_kp = g.value("clos_kp", cfg.guidance.clos_kp);
      cfg.guidance.clos_kd = g.value("clos_kd", cfg.guidance.clos_kd);
    }

    if (j.contains("noise")) {
      const json& n = j.at("noise");
      if (n.contains("Q_diag")) cfg.noise.Q = parse_diag(n.at("Q_diag"));
      if (n.contains("Sigma_diag")) {
        cfg.noise.Sigma = parse_diag(n.at("Sigma_diag"));
      }
    }

    if (j.contains("nmpc")) {
      const json& m = j.at("nmpc");
      cfg.nmpc.horizon_steps = m.value("horizon_steps", cfg.nmpc.horizon_steps);
      cfg.nmpc.dt = m.value("dt", cfg.nmpc.dt);
      cfg.nmpc.alpha_dot_max = m.value("alpha_dot_max", cfg.nmpc.alpha_dot_max);
      cfg.nmpc.max_iters = m.value("max_iters", cfg.nmpc.max_iters);
      cfg.nmpc.conv_tol = m.value("conv_tol", cfg.nmpc.conv_tol);
      cfg.nmpc.w_control = m.value("w_control", cfg.nmpc.w_control);
      cfg.nmpc.w_range = m.value("w_range", cfg.nmpc.w_range);
      cfg.nmpc.w_safe = m.value("w_safe", cfg.nmpc.w_safe);
      cfg.nmpc.fd_step = m.value("fd_step", cfg.nmpc.fd_step);
    }
  } catch (const ParseError&) {
    throw;
  } catch (const json::exception& e) {
    throw ParseError("scenario file '" + path.string() + "': " + e.what());
  }

  validate_scenario(cfg);
  return cfg;
}

void validate_scenario(const ScenarioConfig& cfg) {
  const auto fail = [&](const std::string& msg) {
    throw ValidationError("scenario '" + cfg.name + "': " + msg);
  };
  if (!(cfg.attacker.v > 0.0)) fail("attacker speed must be positive");
  if (!(cfg.defender.v > 0.0)) fail("defender speed must be positive");
  if (!(cfg.v_T_max > 0.0)) fail("v_T_max must be positive");
  if (cfg.target.v < 0.0 || cfg.target.v > cfg.v_T_max + 1e-9) {
    fail("initial target speed must lie in [0, v_T_max]");
  }
  if (!(cfg.R_c > 0.0)) fail("capture_radius_target must be positive");
  if (!(cfg.r_c > 0.0)) fail("capture_radius_defender must be positive");
  if (!(cfg.duration_cap > 0.0)) fail("duration_cap must be positive");
  if (cfg.safe_distance.value < 0.0) fail("safe distance must be nonnegative");
  if (cfg.nmpc.horizon_steps < 1) fail("nmpc horizon must be at least 1 step");
  if (!(cfg.nmpc.dt > 0.0)) fail("nmpc dt must be positive");
  if (!(cfg.nmpc.alpha_dot_max > 0.0)) {
    fail("defender turn-rate bound must be positive");
  }
  if (cfg.nmpc.max_iters < 1) fail("nmpc max_iters must be at least 1");
  if (!(cfg.nmpc.conv_tol > 0.0)) fail("nmpc conv_tol must be positive");
  if (!(cfg.guidance.switch_period > 0.0)) {
    fail("guidance switch_period must be positive");
  }
  if (cfg.mode == TargetMode::ConstantSpeed &&
      std::abs(cfg.target.v - cfg.v_T_max) > 1e-9) {
    fail("constant-speed mode requires the initial target speed to equal "
         "v_T_max");
  }
}

double resolved_safe_distance(const ScenarioConfig& cfg) {
  if (cfg.safe_distance.kind == SafeDistanceSpec::Kind::Absolute) {
    return cfg.safe_distance.value;
  }
  const double R0 =
      distance(cfg.target.position(), cfg.attacker.position());
  return cfg.safe_distance.value * R0;
}

NmpcConfig resolved_nmpc_config(const ScenarioConfig& cfg) {
  NmpcConfig m = cfg.nmpc;
  m.v_T_max = cfg.v_T_max;
  m.mode = cfg.mode;
  m.safe_distance = resolved_safe_distance(cfg);
  return m;
}

}  // namespace tad
