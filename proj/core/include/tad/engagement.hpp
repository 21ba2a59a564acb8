#pragma once

#include "tad/geometry.hpp"

namespace tad {

// Planar unicycle state: position, heading (radians, wrapped to (-pi, pi]),
// and scalar speed along the heading.
struct AgentState {
  double x = 0.0;
  double y = 0.0;
  double alpha = 0.0;
  double v = 0.0;

  Vec2 position() const { return {x, y}; }
  Vec2 velocity() const { return {v * std::cos(alpha), v * std::sin(alpha)}; }
};

// Joint state of the three-agent engagement at time t.
struct EngagementState {
  double t = 0.0;
  AgentState target;
  AgentState attacker;
  AgentState defender;
};

// Polar relative coordinates of the engagement, all expressed about the
// attacker: (R, theta) locate the target, (r, xi) locate the defender, and
// the v* fields are the corresponding radial/transversal velocity components.
struct RelativeGeometry {
  double R = 0.0;       // attacker->target range
  double theta = 0.0;   // attacker->target line-of-sight angle
  double r = 0.0;       // attacker->defender range
  double xi = 0.0;      // attacker->defender line-of-sight angle
  double vR = 0.0;      // range rate along theta
  double vTheta = 0.0;  // transversal speed across theta
  double vr = 0.0;      // range rate along xi
  double vXi = 0.0;     // transversal speed across xi
};

// Computes the relative coordinates of the joint state. Total: coincident
// agents yield zero range with the line-of-sight angle taken as zero.
RelativeGeometry relative_geometry(const EngagementState& s);

// Advances a constant-speed agent under a fixed turn rate for dt seconds
// using one RK4 step of (x' = v cos a, y' = v sin a, a' = turn_rate).
AgentState step_agent(const AgentState& s, double turn_rate, double dt);

// Advances the directly-actuated target by one Euler step of the commanded
// velocity (ux, uy). The stored heading becomes atan2(uy, ux) when the
// command is nonzero and is retained otherwise; the stored speed becomes
// |u|. Throws CommandOutOfBounds when |u| exceeds v_max beyond a small
// absolute tolerance.
AgentState step_target(const AgentState& s, double ux, double uy, double dt,
                       double v_max);

}  // namespace tad
