#include "tad/nmpc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tad {

namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

ControlPlan resized_plan(const ControlPlan& plan, int steps) {
  ControlPlan out = plan;
  if (static_cast<int>(out.steps.size()) > steps) {
    out.steps.resize(steps);
  }
  while (static_cast<int>(out.steps.size()) < steps) {
    out.steps.push_back(out.steps.empty() ? ControlInput{}
                                          : out.steps.back());
  }
  return out;
}

double rollout_cost(const Eigen::Vector4d& attacker_est, double v_A,
                    const AgentState& target, const AgentState& defender,
                    const ControlPlan& plan, const NmpcConfig& cfg) {
  return evaluate_cost(
      predict_horizon(attacker_est, v_A, target, defender, plan, cfg), plan,
      cfg);
}

}  // namespace

HorizonTrajectory predict_horizon(const Eigen::Vector4d& attacker_est,
                                  double v_A, const AgentState& target,
                                  const AgentState& defender,
                                  const ControlPlan& plan,
                                  const NmpcConfig& cfg) {
  HorizonTrajectory traj;
  traj.reserve(plan.steps.size() + 1);

  HorizonPoint p;
  p.target = target;
  p.defender = defender;
  p.attacker = attacker_est;
  p.R = distance(p.target.position(), {p.attacker[0], p.attacker[1]});
  p.r = distance(p.defender.position(), {p.attacker[0], p.attacker[1]});
  traj.push_back(p);

  for (const ControlInput& u : plan.steps) {
    HorizonPoint n;
    // Prediction is evaluated for arbitrary candidate plans; input bounds
    // are enforced separately by projection, so no bound is applied here.
    n.target = step_target(p.target, u.ux, u.uy, cfg.dt, kInfinity);
    n.defender = step_agent(p.defender, u.alpha_dot_D, cfg.dt);
    n.attacker = p.attacker;
    n.attacker[0] += cfg.dt * v_A * std::cos(p.attacker[2]);
    n.attacker[1] += cfg.dt * v_A * std::sin(p.attacker[2]);
    n.attacker[2] = wrap_angle(
        p.attacker[2] + cfg.dt * (v_A > 0.0 ? p.attacker[3] / v_A : 0.0));
    n.attacker[3] = p.attacker[3] - cfg.dt * p.attacker[3];
    n.R = distance(n.target.position(), {n.attacker[0], n.attacker[1]});
    n.r = distance(n.defender.position(), {n.attacker[0], n.attacker[1]});
    traj.push_back(n);
    p = n;
  }
  return traj;
}

double evaluate_cost(const HorizonTrajectory& traj, const ControlPlan& plan,
                     const NmpcConfig& cfg) {
  double J = 0.0;
  for (std::size_t k = 0; k < plan.steps.size(); ++k) {
    const ControlInput& u = plan.steps[k];
    const HorizonPoint& next = traj[k + 1];
    const double stage = cfg.w_control * (u.ux * u.ux + u.uy * u.uy) +
                         cfg.w_range * next.r +
                         cfg.w_safe * std::max(0.0, cfg.safe_distance - next.R);
    J += stage * cfg.dt;
  }
  return J;
}

ControlPlan target_mode_constraint(TargetMode mode, const ControlPlan& plan,
                                   const NmpcConfig& cfg,
                                   double fallback_heading) {
  ControlPlan out = plan;
  for (ControlInput& u : out.steps) {
    u.alpha_dot_D =
        std::clamp(u.alpha_dot_D, -cfg.alpha_dot_max, cfg.alpha_dot_max);
    const double n = std::hypot(u.ux, u.uy);
    if (mode == TargetMode::VariableVelocity) {
      if (n > cfg.v_T_max && n > 0.0) {
        const double s = cfg.v_T_max / n;
        u.ux *= s;
        u.uy *= s;
      }
    } else {
      if (n < 1e-12) {
        u.ux = cfg.v_T_max * std::cos(fallback_heading);
        u.uy = cfg.v_T_max * std::sin(fallback_heading);
      } else {
        const double s = cfg.v_T_max / n;
        u.ux *= s;
        u.uy *= s;
      }
    }
  }
  return out;
}

bool plan_feasible(const ControlPlan& plan, const NmpcConfig& cfg) {
  for (const ControlInput& u : plan.steps) {
    if (std::abs(u.alpha_dot_D) > cfg.alpha_dot_max + 1e-12) return false;
    const double n = std::hypot(u.ux, u.uy);
    if (cfg.mode == TargetMode::VariableVelocity) {
      if (n > cfg.v_T_max + 1e-9) return false;
    } else {
      if (std::abs(n - cfg.v_T_max) > 1e-9) return false;
    }
  }
  return true;
}

std::vector<double> cost_gradient(const Eigen::Vector4d& attacker_est,
                                  double v_A, const AgentState& target,
                                  const AgentState& defender,
                                  const ControlPlan& plan,
                                  const NmpcConfig& cfg, double h) {
  const int H = static_cast<int>(plan.steps.size());
  std::vector<double> g(3 * H, 0.0);
  ControlPlan work = plan;
  for (int k = 0; k < H; ++k) {
    double* coords[3] = {&work.steps[k].ux, &work.steps[k].uy,
                         &work.steps[k].alpha_dot_D};
    for (int j = 0; j < 3; ++j) {
      const double saved = *coords[j];
      *coords[j] = saved + h;
      const double plus =
          rollout_cost(attacker_est, v_A, target, defender, work, cfg);
      *coords[j] = saved - h;
      const double minus =
          rollout_cost(attacker_est, v_A, target, defender, work, cfg);
      *coords[j] = saved;
      g[3 * k + j] = (plus - minus) / (2.0 * h);
    }
  }
  return g;
}

NmpcSolution solve(const Eigen::Vector4d& attacker_est, double v_A,
                   const AgentState& target, const AgentState& defender,
                   const ControlPlan& warm_start, const NmpcConfig& cfg) {
  const double fallback = target.alpha;
  ControlPlan plan = target_mode_constraint(
      cfg.mode, resized_plan(warm_start, cfg.horizon_steps), cfg, fallback);
  double J = rollout_cost(attacker_est, v_A, target, defender, plan, cfg);

  // Per-coordinate step scaling so one unit of line-search parameter moves
  // each input a comparable fraction of its admissible range.
  const double su2 = (cfg.v_T_max > 0.0 ? cfg.v_T_max * cfg.v_T_max : 1.0);
  const double sw2 = cfg.alpha_dot_max * cfg.alpha_dot_max;

  double t_init = 1.0;
  int iters = 0;
  for (; iters < cfg.max_iters; ++iters) {
    const std::vector<double> g = cost_gradient(attacker_est, v_A, target,
                                                defender, plan, cfg,
                                                cfg.fd_step);
    double gnorm2 = 0.0;
    for (double gi : g) gnorm2 += gi * gi;
    if (gnorm2 == 0.0) break;

    bool accepted = false;
    double t = t_init;
    for (int ls = 0; ls < 30; ++ls) {
      ControlPlan cand = plan;
      for (std::size_t k = 0; k < cand.steps.size(); ++k) {
        cand.steps[k].ux -= t * su2 * g[3 * k + 0];
        cand.steps[k].uy -= t * su2 * g[3 * k + 1];
        cand.steps[k].alpha_dot_D -= t * sw2 * g[3 * k + 2];
      }
      cand = target_mode_constraint(cfg.mode, cand, cfg, fallback);
      const double Jc =
          rollout_cost(attacker_est, v_A, target, defender, cand, cfg);
      if (Jc < J - cfg.conv_tol) {
        plan = std::move(cand);
        J = Jc;
        accepted = true;
        t_init = std::min(t * 2.0, 1.0);
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      ++iters;
      break;
    }
  }
  return {plan, J, iters};
}

ControlPlan shifted_warm_start(const ControlPlan& previous) {
  ControlPlan out;
  if (previous.steps.empty()) return out;
  out.steps.assign(previous.steps.begin() + 1, previous.steps.end());
  out.steps.push_back(previous.steps.back());
  return out;
}

ControlPlan initial_warm_start(const AgentState& target,
                               const NmpcConfig& cfg) {
  ControlPlan out;
  ControlInput u;
  u.ux = target.v * std::cos(target.alpha);
  u.uy = target.v * std::sin(target.alpha);
  u.alpha_dot_D = 0.0;
  out.steps.assign(static_cast<std::size_t>(cfg.horizon_steps), u);
  return out;
}

}  // namespace tad
