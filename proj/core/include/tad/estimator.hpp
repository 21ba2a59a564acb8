#pragma once

#include <Eigen/Dense>
#include <random>

#include "tad/engagement.hpp"

namespace tad {

// EKF state over the attacker: mean of [x_A, y_A, alpha_A, a_A] (position,
// heading, lateral acceleration command) and its covariance.
struct EstimatorState {
  Eigen::Vector4d mean = Eigen::Vector4d::Zero();
  Eigen::Matrix4d cov = Eigen::Matrix4d::Identity();
};

// One range/bearing observation of the attacker from the target (R, theta)
// and the defender (r, xi).
struct Measurement {
  double R = 0.0;
  double r = 0.0;
  double theta = 0.0;
  double xi = 0.0;

  Eigen::Vector4d vector() const { return {R, r, theta, xi}; }
};

// Process and measurement noise intensities.
struct NoiseConfig {
  Eigen::Matrix4d Q =
      Eigen::Vector4d(0.1, 0.1, 0.01, 0.1).asDiagonal();
  Eigen::Matrix4d Sigma =
      Eigen::Vector4d(0.1, 0.1, 0.01, 0.01).asDiagonal();
};

// Continuous-time dynamics of the attacker model used by the filter:
// x' = v_A cos(alpha), y' = v_A sin(alpha), alpha' = a / v_A, a' = -a.
Eigen::Vector4d attacker_dynamics(const Eigen::Vector4d& state, double v_A);

// Jacobian of attacker_dynamics with respect to the state.
Eigen::Matrix4d attacker_dynamics_jacobian(const Eigen::Vector4d& state,
                                           double v_A);

// Predicted measurement for a state mean given the observer positions.
// Throws SingularGeometry when either range falls below 1e-9.
Measurement predict_measurement(const Eigen::Vector4d& mean, Vec2 target_pos,
                                Vec2 defender_pos);

// Measurement Jacobian at the state mean. Same singularity contract as
// predict_measurement.
Eigen::Matrix4d measurement_jacobian(const Eigen::Vector4d& mean,
                                     Vec2 target_pos, Vec2 defender_pos);

// Propagates mean (Euler) and covariance (first-order discretised Jacobian
// F_d = I + dF*dt) over dt, adding process noise Q. Wraps the heading.
EstimatorState ekf_predict(const EstimatorState& s, double dt, double v_A,
                           const Eigen::Matrix4d& Q);

// Measurement update with angle-wrapped innovations. Throws
// SingularInnovationCov when the innovation covariance condition number
// exceeds 1e12.
EstimatorState ekf_update(const EstimatorState& s, const Measurement& z,
                          Vec2 target_pos, Vec2 defender_pos,
                          const Eigen::Matrix4d& Sigma);

// Initialises the filter from the first measurement: the position is
// triangulated back along the target's line of sight, heading and
// acceleration start at zero, and the covariance is diag(10, 10, 1, 1).
EstimatorState init_estimator(const Measurement& z0, Vec2 target_pos);

// Draws a noisy measurement of the true engagement state: truth plus
// chol(Sigma) * standard normals, with negative ranges clamped to zero and
// angles wrapped. Deterministic for a given rng state.
Measurement simulate_measurement(const EngagementState& s,
                                 const Eigen::Matrix4d& Sigma,
                                 std::mt19937_64& rng);

}  // namespace tad
