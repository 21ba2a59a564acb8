#pragma once

#include <optional>
#include <vector>

#include "tad/scenario.hpp"
#include "tad/zones.hpp"

namespace tad {

enum class Outcome { TargetCaptured, AttackerIntercepted, Timeout };

const char* outcome_name(Outcome o);

// One control step of a run: the joint state at time t, the controls applied
// over [t, t + dt), and the attacker estimate used to choose them.
struct StepLog {
  double t = 0.0;
  double x_T = 0.0, y_T = 0.0;
  double x_A = 0.0, y_A = 0.0;
  double x_D = 0.0, y_D = 0.0;
  double u_x = 0.0, u_y = 0.0;   // target velocity command
  double alpha_dot_D = 0.0;      // defender turn-rate command
  double a_A = 0.0;              // attacker lateral acceleration (true)
  double R = 0.0, r = 0.0;       // attacker->target / attacker->defender range
  double est_x_A = 0.0, est_y_A = 0.0, est_alpha_A = 0.0, est_a_A = 0.0;
  double sigma_x = 0.0, sigma_y = 0.0, sigma_alpha = 0.0, sigma_a = 0.0;
  double alpha_A = 0.0;  // true attacker heading (not part of the CSV contract)
};

struct MetricsRecord {
  Outcome outcome = Outcome::Timeout;
  std::optional<double> interception_time;  // event time; empty on timeout
  double defender_effort = 0.0;   // mean |v_D * alpha_dot_D|
  double combined_effort = 0.0;   // defender effort + mean target |du/dt|
  double solver_time = 0.0;       // mean wall-clock seconds per NMPC solve

  // Event time of a run that ended in capture or interception; throws
  // NoEvent for timed-out runs.
  double require_interception_time() const;
};

struct SimResult {
  std::string scenario;
  std::uint64_t seed = 0;
  Outcome outcome = Outcome::Timeout;
  double event_time = 0.0;  // interpolated within the final step
  double dt = 0.0;
  double defender_speed = 0.0;
  double init_u_x = 0.0, init_u_y = 0.0;  // target velocity before the run
  std::vector<StepLog> log;
  double solver_time_total = 0.0;
  long solver_calls = 0;
  MetricsRecord metrics;
};

// Runs the closed loop: measure, filter, control, integrate, detect events.
// Deterministic for a given scenario and seed.
SimResult run_simulation(const ScenarioConfig& cfg);
SimResult run_simulation(const ScenarioConfig& cfg, std::uint64_t seed);

// Recomputes the metrics of a finished run from its log.
MetricsRecord compute_metrics(const SimResult& result);

struct ComparisonRow {
  DefenderController controller = DefenderController::Nmpc;
  MetricsRecord metrics;
};

// Runs the same scenario under each controller (same seed) and collects the
// per-controller metrics. Throws ValidationError for fewer than two
// controllers.
std::vector<ComparisonRow> compare_controllers(
    const ScenarioConfig& cfg, const std::vector<DefenderController>& list);

struct SweepCell {
  int ix = 0, iy = 0;
  Vec2 target;              // canonical-frame coordinates
  ZoneLabel predicted = ZoneLabel::Escape;
  Outcome sim_outcome = Outcome::Timeout;
  ZoneLabel simulated = ZoneLabel::Escape;
  bool excluded = false;  // boundary cell or within one cell of a label change
  bool agree = false;
};

struct SweepReport {
  GridSpec grid;
  ZoneParams params;
  ZoneKind kind = ZoneKind::ConstantSpeed;
  std::vector<SweepCell> cells;
  int compared = 0;
  int agreed = 0;
  double agreement = 0.0;  // agreed / compared
};

// Validates an analytic zone map against closed-loop simulation. The grid is
// expressed in the canonical frame of the template scenario's initial
// attacker/defender positions; each cell re-runs the scenario with the
// target moved to the cell and headings aligned with the zone geometry.
SweepReport sweep_zone_validation(const ScenarioConfig& tmpl,
                                  const GridSpec& grid);

}  // namespace tad
