#pragma once

#include "tad/engagement.hpp"

namespace tad {

// Gains and schedule for the attacker's switched guidance and the
// line-of-sight defender baselines.
struct GuidanceConfig {
  double kappa = 2.0;         // pure-pursuit heading-error gain
  double nav_constant = 3.0;  // proportional-navigation gain N
  double switch_period = 1.0; // seconds per guidance phase
  double pn_min_range = 1.0;  // below this range the LOS rate is undefined
  double clos_kp = 10.0;      // LOS-offset proportional gain
  double clos_kd = 5.0;       // LOS-offset damping gain
};

// Pure-pursuit lateral acceleration: drives the heading error
// wrap(alpha_A - theta) to zero with gain kappa.
double pp_accel(double alpha_A, double theta, double kappa);

// Proportional-navigation lateral acceleration N * v_A * theta_dot.
double pn_accel(double v_A, double theta_dot, double nav_constant);

// Attacker lateral acceleration under the time-switched schedule: phases of
// length switch_period alternate pure pursuit (even phases, starting at t=0)
// and proportional navigation (odd phases). PN evaluates the LOS rate as
// vTheta / R and throws LOSRateUndefined when R < pn_min_range.
double switched_attacker_accel(double t, const EngagementState& s,
                               const GuidanceConfig& cfg);

enum class ClosVariant { Clos, Aclos };

// Command-to-line-of-sight defender baseline. The defender is steered so its
// signed perpendicular offset d from the target->attacker line is regulated
// to zero: cmd = -(kp*d + kd*d_dot), with the augmented variant additionally
// feeding forward the measured line acceleration d_ddot. Offset rates are
// formed by finite differences across calls, so one instance must be used
// per run and called once per control step.
class LineOfSightGuidance {
 public:
  LineOfSightGuidance(ClosVariant variant, double dt)
      : variant_(variant), dt_(dt) {}

  // Returns the defender lateral acceleration command, saturated to
  // 0.5 * v_D in magnitude. Throws DegenerateLOS when the target->attacker
  // line is numerically zero length.
  double accel(const EngagementState& s, const GuidanceConfig& cfg);

  void reset();

 private:
  ClosVariant variant_;
  double dt_;
  int calls_ = 0;
  double d_prev_ = 0.0;
  double d_dot_prev_ = 0.0;
};

}  // namespace tad
