#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "tad/engagement.hpp"
#include "tad/estimator.hpp"
#include "tad/guidance.hpp"
#include "tad/nmpc.hpp"

namespace tad {

enum class DefenderController { Nmpc, Clos, Aclos };

const char* controller_name(DefenderController c);

// Safe-distance specification: either a fixed length or a fraction of the
// initial attacker->target range.
struct SafeDistanceSpec {
  enum class Kind { Absolute, FractionOfInitialRange };
  Kind kind = Kind::Absolute;
  double value = 0.0;
};

// A complete engagement description. Initial speeds ride on the agent
// states: attacker.v and defender.v are the (constant) vehicle speeds and
// target.v is the initial target speed.
struct ScenarioConfig {
  std::string name;
  AgentState target;
  AgentState attacker;
  AgentState defender;
  double v_T_max = 2.0;
  TargetMode mode = TargetMode::ConstantSpeed;
  SafeDistanceSpec safe_distance{};
  double R_c = 1.0;  // attacker captures the target at this range
  double r_c = 1.0;  // defender intercepts the attacker at this range
  double duration_cap = 60.0;
  std::uint64_t seed = 1;
  DefenderController controller = DefenderController::Nmpc;
  GuidanceConfig guidance{};
  NoiseConfig noise{};
  NmpcConfig nmpc{};
};

// Parses a scenario file (JSON). Throws ParseError on unreadable or
// malformed input and ValidationError (via validate_scenario) on
// physically invalid values.
ScenarioConfig load_scenario(const std::filesystem::path& path);

// Throws ValidationError when speeds, radii, horizons or tolerances are out
// of range.
void validate_scenario(const ScenarioConfig& cfg);

// The safe distance in length units for this scenario's initial geometry.
double resolved_safe_distance(const ScenarioConfig& cfg);

// The scenario's NMPC configuration with the target-mode, speed-bound and
// safe-distance fields filled in from the scenario level.
NmpcConfig resolved_nmpc_config(const ScenarioConfig& cfg);

}  // namespace tad
