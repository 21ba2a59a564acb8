#include "tad/engagement.hpp"

#include <cmath>

#include "tad/errors.hpp"

namespace tad {

RelativeGeometry relative_geometry(const EngagementState& s) {
  const AgentState& T = s.target;
  const AgentState& A = s.attacker;
  const AgentState& D = s.defender;

  RelativeGeometry g;
  const Vec2 ta = T.position() - A.position();
  const Vec2 da = D.position() - A.position();
  g.R = ta.norm();
  g.theta = (g.R > 0.0) ? std::atan2(ta.y, ta.x) : 0.0;
  g.r = da.norm();
  g.xi = (g.r > 0.0) ? std::atan2(da.y, da.x) : 0.0;

  g.vR = T.v * std::cos(T.alpha - g.theta) - A.v * std::cos(A.alpha - g.theta);
  g.vTheta =
      T.v * std::sin(T.alpha - g.theta) - A.v * std::sin(A.alpha - g.theta);
  g.vr = D.v * std::cos(D.alpha - g.xi) - A.v * std::cos(A.alpha - g.xi);
  g.vXi = D.v * std::sin(D.alpha - g.xi) - A.v * std::sin(A.alpha - g.xi);
  return g;
}

AgentState step_agent(const AgentState& s, double turn_rate, double dt) {
  // State derivative for (x, y, alpha) with constant speed and turn rate.
  struct Deriv {
    double dx, dy, da;
  };
  const auto f = [&](double alpha) -> Deriv {
    return {s.v * std::cos(alpha), s.v * std::sin(alpha), turn_rate};
  };

  const Deriv k1 = f(s.alpha);
  const Deriv k2 = f(s.alpha + 0.5 * dt * k1.da);
  const Deriv k3 = f(s.alpha + 0.5 * dt * k2.da);
  const Deriv k4 = f(s.alpha + dt * k3.da);

  AgentState out = s;
  out.x += dt / 6.0 * (k1.dx + 2.0 * k2.dx + 2.0 * k3.dx + k4.dx);
  out.y += dt / 6.0 * (k1.dy + 2.0 * k2.dy + 2.0 * k3.dy + k4.dy);
  out.alpha =
      wrap_angle(s.alpha + dt / 6.0 * (k1.da + 2.0 * k2.da + 2.0 * k3.da + k4.da));
  return out;
}

AgentState step_target(const AgentState& s, double ux, double uy, double dt,
                       double v_max) {
  const double speed = std::hypot(ux, uy);
  if (speed > v_max + 1e-9) {
    throw CommandOutOfBounds("target velocity command |u| = " +
                             std::to_string(speed) + " exceeds bound " +
                             std::to_string(v_max));
  }
  AgentState out = s;
  out.x += ux * dt;
  out.y += uy * dt;
  if (speed > 0.0) {
    out.alpha = std::atan2(uy, ux);
  }
  out.v = speed;
  return out;
}

}  // namespace tad
