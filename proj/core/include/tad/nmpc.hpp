#pragma once

#include <vector>

#include "tad/engagement.hpp"
#include "tad/estimator.hpp"

namespace tad {

// Whether the target's commanded velocity is confined to the circle |u| =
// v_T_max (constant speed) or the disc |u| <= v_T_max (variable velocity).
enum class TargetMode { ConstantSpeed, VariableVelocity };

// One step of the team control plan: target velocity command and defender
// turn rate.
struct ControlInput {
  double ux = 0.0;
  double uy = 0.0;
  double alpha_dot_D = 0.0;
};

struct ControlPlan {
  std::vector<ControlInput> steps;
};

struct NmpcConfig {
  int horizon_steps = 6;
  double dt = 0.05;
  double v_T_max = 2.0;        // target speed bound
  double alpha_dot_max = 0.5;  // symmetric defender turn-rate bound
  double safe_distance = 0.0;  // penalised when the attacker gets closer
  TargetMode mode = TargetMode::VariableVelocity;
  int max_iters = 200;
  double conv_tol = 1e-6;
  double w_control = 1.0;  // weight on |u|^2
  double w_range = 1.0;    // weight on attacker->defender range
  double w_safe = 1.0;     // weight on the safe-distance hinge
  double fd_step = 1e-4;   // finite-difference step for the cost gradient
};

// One predicted sample along the horizon.
struct HorizonPoint {
  AgentState target;
  AgentState defender;
  Eigen::Vector4d attacker = Eigen::Vector4d::Zero();
  double R = 0.0;  // attacker->target range
  double r = 0.0;  // attacker->defender range
};

using HorizonTrajectory = std::vector<HorizonPoint>;

// Rolls the plan forward from the current states over horizon_steps steps of
// cfg.dt: the target moves by Euler steps of u, the defender by RK4 unicycle
// steps, and the attacker open-loop under the estimator's dynamics model
// (Euler). Returns horizon_steps + 1 points including the initial one.
HorizonTrajectory predict_horizon(const Eigen::Vector4d& attacker_est,
                                  double v_A, const AgentState& target,
                                  const AgentState& defender,
                                  const ControlPlan& plan,
                                  const NmpcConfig& cfg);

// Stage-summed cost of a predicted rollout:
//   J = sum_k [ w_u |u_k|^2 + w_r r_{k+1} + w_s max(0, e - R_{k+1}) ] * dt
// where r and R are evaluated at the post-step sample of each stage.
double evaluate_cost(const HorizonTrajectory& traj, const ControlPlan& plan,
                     const NmpcConfig& cfg);

// Projects a plan onto the feasible set: turn rates are clamped to the box
// and target commands are radially mapped onto the speed disc (variable
// velocity) or circle (constant speed). In constant-speed mode a zero
// command is replaced by v_T_max along fallback_heading.
ControlPlan target_mode_constraint(TargetMode mode, const ControlPlan& plan,
                                   const NmpcConfig& cfg,
                                   double fallback_heading);

// True when every step of the plan satisfies the mode's input constraints.
bool plan_feasible(const ControlPlan& plan, const NmpcConfig& cfg);

// Central-difference gradient of the rollout cost with respect to the 3*H
// stacked plan coordinates (ux, uy, alpha_dot per step), using step h in the
// native units of each coordinate.
std::vector<double> cost_gradient(const Eigen::Vector4d& attacker_est,
                                  double v_A, const AgentState& target,
                                  const AgentState& defender,
                                  const ControlPlan& plan,
                                  const NmpcConfig& cfg, double h);

struct NmpcSolution {
  ControlPlan plan;
  double cost = 0.0;
  int iterations = 0;
};

// Projected-gradient solve starting from the warm-start plan (resized to the
// horizon if needed). Monotone in cost; stops when no projected step
// improves the cost by more than conv_tol or after max_iters iterations.
NmpcSolution solve(const Eigen::Vector4d& attacker_est, double v_A,
                   const AgentState& target, const AgentState& defender,
                   const ControlPlan& warm_start, const NmpcConfig& cfg);

// Receding-horizon warm start: drops the executed first step and repeats the
// final one.
ControlPlan shifted_warm_start(const ControlPlan& previous);

// Cold-start plan: the target's current velocity held over the horizon and
// zero defender turn rate.
ControlPlan initial_warm_start(const AgentState& target,
                               const NmpcConfig& cfg);

}  // namespace tad
