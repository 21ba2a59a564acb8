#include "tad/estimator.hpp"

#include <cmath>

#include "tad/errors.hpp"

namespace tad {

namespace {

void check_ranges(double R, double r) {
  if (R < 1e-9 || r < 1e-9) {
    throw SingularGeometry("observer coincides with estimated attacker (R = " +
                           std::to_string(R) + ", r = " + std::to_string(r) +
                           ")");
  }
}

// Lower-triangular square root of a PSD matrix; falls back to an
// eigendecomposition square root when a strict Cholesky fails (e.g. zero
// rows for noise-free channels).
Eigen::Matrix4d psd_sqrt(const Eigen::Matrix4d& m) {
  Eigen::LLT<Eigen::Matrix4d> llt(m);
  if (llt.info() == Eigen::Success) {
    return llt.matrixL();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(m);
  Eigen::Vector4d d = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * d.asDiagonal();
}

}  // namespace

Eigen::Vector4d attacker_dynamics(const Eigen::Vector4d& s, double v_A) {
  return {v_A * std::cos(s[2]), v_A * std::sin(s[2]), s[3] / v_A, -s[3]};
}

Eigen::Matrix4d attacker_dynamics_jacobian(const Eigen::Vector4d& s,
                                           double v_A) {
  Eigen::Matrix4d F = Eigen::Matrix4d::Zero();
  F(0, 2) = -v_A * std::sin(s[2]);
  F(1, 2) = v_A * std::cos(s[2]);
  F(2, 3) = 1.0 / v_A;
  F(3, 3) = -1.0;
  return F;
}

Measurement predict_measurement(const Eigen::Vector4d& mean, Vec2 target_pos,
                                Vec2 defender_pos) {
  const Vec2 a{mean[0], mean[1]};
  const Vec2 ta = target_pos - a;
  const Vec2 da = defender_pos - a;
  Measurement z;
  z.R = ta.norm();
  z.r = da.norm();
  check_ranges(z.R, z.r);
  z.theta = std::atan2(ta.y, ta.x);
  z.xi = std::atan2(da.y, da.x);
  return z;
}

Eigen::Matrix4d measurement_jacobian(const Eigen::Vector4d& mean,
                                     Vec2 target_pos, Vec2 defender_pos) {
  const Vec2 a{mean[0], mean[1]};
  const Vec2 ta = target_pos - a;
  const Vec2 da = defender_pos - a;
  const double R = ta.norm();
  const double r = da.norm();
  check_ranges(R, r);

  Eigen::Matrix4d H = Eigen::Matrix4d::Zero();
  H(0, 0) = -ta.x / R;
  H(0, 1) = -ta.y / R;
  H(1, 0) = -da.x / r;
  H(1, 1) = -da.y / r;
  H(2, 0) = ta.y / (R * R);
  H(2, 1) = -ta.x / (R * R);
  H(3, 0) = da.y / (r * r);
  H(3, 1) = -da.x / (r * r);
  return H;
}

EstimatorState ekf_predict(const EstimatorState& s, double dt, double v_A,
                           const Eigen::Matrix4d& Q) {
  EstimatorState out;
  out.mean = s.mean + dt * attacker_dynamics(s.mean, v_A);
  out.mean[2] = wrap_angle(out.mean[2]);

  const Eigen::Matrix4d Fd =
      Eigen::Matrix4d::Identity() + dt * attacker_dynamics_jacobian(s.mean, v_A);
  out.cov = Fd * s.cov * Fd.transpose() + Q;
  out.cov = 0.5 * (out.cov + out.cov.transpose()).eval();
  return out;
}

EstimatorState ekf_update(const EstimatorState& s, const Measurement& z,
                          Vec2 target_pos, Vec2 defender_pos,
                          const Eigen::Matrix4d& Sigma) {
  const Measurement pred = predict_measurement(s.mean, target_pos, defender_pos);
  const Eigen::Matrix4d H = measurement_jacobian(s.mean, target_pos, defender_pos);

  Eigen::Vector4d nu = z.vector() - pred.vector();
  nu[2] = wrap_angle(nu[2]);
  nu[3] = wrap_angle(nu[3]);

  const Eigen::Matrix4d S = H * s.cov * H.transpose() + Sigma;
  const Eigen::JacobiSVD<Eigen::Matrix4d> svd(S);
  const double smin = svd.singularValues().minCoeff();
  const double smax = svd.singularValues().maxCoeff();
  if (smin <= 0.0 || smax / smin > 1e12) {
    throw SingularInnovationCov(
        "innovation covariance condition number exceeds 1e12");
  }

  const Eigen::Matrix4d K = s.cov * H.transpose() * S.inverse();

  EstimatorState out;
  out.mean = s.mean + K * nu;
  out.mean[2] = wrap_angle(out.mean[2]);
  out.cov = s.cov - K * S * K.transpose();
  out.cov = 0.5 * (out.cov + out.cov.transpose()).eval();
  return out;
}

EstimatorState init_estimator(const Measurement& z0, Vec2 target_pos) {
  EstimatorState s;
  s.mean[0] = target_pos.x - z0.R * std::cos(z0.theta);
  s.mean[1] = target_pos.y - z0.R * std::sin(z0.theta);
  s.mean[2] = 0.0;
  s.mean[3] = 0.0;
  s.cov = Eigen::Vector4d(10.0, 10.0, 1.0, 1.0).asDiagonal();
  return s;
}

Measurement simulate_measurement(const EngagementState& s,
                                 const Eigen::Matrix4d& Sigma,
                                 std::mt19937_64& rng) {
  const RelativeGeometry g = relative_geometry(s);
  Eigen::Vector4d noise = Eigen::Vector4d::Zero();
  if (!Sigma.isZero(0.0)) {
    std::normal_distribution<double> n(0.0, 1.0);
    Eigen::Vector4d draws;
    for (int i = 0; i < 4; ++i) draws[i] = n(rng);
    noise = psd_sqrt(Sigma) * draws;
  }
  Measurement z;
  z.R = std::max(0.0, g.R + noise[0]);
  z.r = std::max(0.0, g.r + noise[1]);
  z.theta = wrap_angle(g.theta + noise[2]);
  z.xi = wrap_angle(g.xi + noise[3]);
  return z;
}

}  // namespace tad
