#include "tad/guidance.hpp"

#include <cmath>

#include "tad/errors.hpp"

namespace tad {

double pp_accel(double alpha_A, double theta, double kappa) {
  return -kappa * wrap_angle(alpha_A - theta);
}

double pn_accel(double v_A, double theta_dot, double nav_constant) {
  return nav_constant * v_A * theta_dot;
}

double switched_attacker_accel(double t, const EngagementState& s,
                               const GuidanceConfig& cfg) {
  const RelativeGeometry g = relative_geometry(s);
  const long phase = static_cast<long>(std::floor(t / cfg.switch_period));
  const bool pure_pursuit = (phase % 2 == 0);
  if (pure_pursuit) {
    return pp_accel(s.attacker.alpha, g.theta, cfg.kappa);
  }
  if (g.R < cfg.pn_min_range) {
    throw LOSRateUndefined("proportional navigation at range " +
                           std::to_string(g.R) + " below minimum " +
                           std::to_string(cfg.pn_min_range));
  }
  return pn_accel(s.attacker.v, g.vTheta / g.R, cfg.nav_constant);
}

double LineOfSightGuidance::accel(const EngagementState& s,
                                  const GuidanceConfig& cfg) {
  const Vec2 line = s.attacker.position() - s.target.position();
  const double len = line.norm();
  if (len < 1e-9) {
    throw DegenerateLOS("target->attacker separation " + std::to_string(len) +
                        " too small to define a line of sight");
  }
  const Vec2 unit = line / len;
  const Vec2 rel = s.defender.position() - s.target.position();
  const double d = unit.cross(rel);  // signed offset, positive left of line

  const double d_dot = (calls_ >= 1) ? (d - d_prev_) / dt_ : 0.0;
  const double d_ddot = (calls_ >= 2) ? (d_dot - d_dot_prev_) / dt_ : 0.0;
  d_prev_ = d;
  d_dot_prev_ = d_dot;
  ++calls_;

  double cmd = -(cfg.clos_kp * d + cfg.clos_kd * d_dot);
  if (variant_ == ClosVariant::Aclos) {
    cmd -= d_ddot;
  }
  const double limit = 0.5 * s.defender.v;
  if (cmd > limit) cmd = limit;
  if (cmd < -limit) cmd = -limit;
  return cmd;
}

void LineOfSightGuidance::reset() {
  calls_ = 0;
  d_prev_ = 0.0;
  d_dot_prev_ = 0.0;
}

}  // namespace tad
