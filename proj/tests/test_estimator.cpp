#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "tad/errors.hpp"
#include "tad/estimator.hpp"

using namespace tad;

namespace {

Eigen::Vector4d reference_state() {
  return {50.0, 50.0, -2.2, 0.4};
}

}  // namespace

TEST_CASE("attacker model: unicycle with first-order command decay") {
  const Eigen::Vector4d x = reference_state();
  const Eigen::Vector4d f = attacker_dynamics(x, 4.0);
  CHECK(f[0] == doctest::Approx(4.0 * std::cos(-2.2)).epsilon(1e-15));
  CHECK(f[1] == doctest::Approx(4.0 * std::sin(-2.2)).epsilon(1e-15));
  CHECK(f[2] == doctest::Approx(0.4 / 4.0).epsilon(1e-15));
  CHECK(f[3] == doctest::Approx(-0.4).epsilon(1e-15));
}

TEST_CASE("dynamics jacobian matches central differences") {
  const Eigen::Vector4d x = reference_state();
  const Eigen::Matrix4d J = attacker_dynamics_jacobian(x, 4.0);
  const double h = 1e-6;
  for (int j = 0; j < 4; ++j) {
    Eigen::Vector4d xp = x, xm = x;
    xp[j] += h;
    xm[j] -= h;
    const Eigen::Vector4d col =
        (attacker_dynamics(xp, 4.0) - attacker_dynamics(xm, 4.0)) / (2.0 * h);
    for (int i = 0; i < 4; ++i)
      CHECK(J(i, j) == doctest::Approx(col[i]).epsilon(1e-6).scale(1.0));
  }
}

TEST_CASE("predicted measurement reproduces the relative geometry") {
  const Eigen::Vector4d x = reference_state();
  const Measurement z =
      predict_measurement(x, Vec2{25.0, 30.0}, Vec2{0.0, 0.0});
  CHECK(z.R == doctest::Approx(32.015621187164243).epsilon(1e-15));
  CHECK(z.theta == doctest::Approx(-2.4668517113662407).epsilon(1e-15));
  CHECK(z.r == doctest::Approx(70.710678118654755).epsilon(1e-15));
  CHECK(z.xi == doctest::Approx(-2.3561944901923448).epsilon(1e-15));
}

TEST_CASE("measurement model is singular at an observer") {
  const Eigen::Vector4d x = reference_state();
  CHECK_THROWS_AS(predict_measurement(x, Vec2{50.0, 50.0}, Vec2{0.0, 0.0}),
                  SingularGeometry);
  CHECK_THROWS_AS(measurement_jacobian(x, Vec2{25.0, 30.0}, Vec2{50.0, 50.0}),
                  SingularGeometry);
}

TEST_CASE("measurement jacobian matches central differences") {
  const Eigen::Vector4d x = reference_state();
  const Vec2 tp{25.0, 30.0}, dp{0.0, 0.0};
  const Eigen::Matrix4d H = measurement_jacobian(x, tp, dp);
  const double h = 1e-6;
  for (int j = 0; j < 4; ++j) {
    Eigen::Vector4d xp = x, xm = x;
    xp[j] += h;
    xm[j] -= h;
    const Eigen::Vector4d col =
        (predict_measurement(xp, tp, dp).vector() -
         predict_measurement(xm, tp, dp).vector()) /
        (2.0 * h);
    for (int i = 0; i < 4; ++i)
      CHECK(H(i, j) == doctest::Approx(col[i]).epsilon(1e-6).scale(1.0));
  }
}

TEST_CASE("prediction moves the mean and inflates the covariance") {
  EstimatorState s;
  s.mean = reference_state();
  s.cov = Eigen::Matrix4d::Identity() * 0.5;
  const NoiseConfig noise;
  const EstimatorState n = ekf_predict(s, 0.05, 4.0, noise.Q);
  const Eigen::Vector4d f = attacker_dynamics(s.mean, 4.0);
  CHECK(n.mean[0] == doctest::Approx(s.mean[0] + 0.05 * f[0]).epsilon(1e-13));
  CHECK(n.mean[1] == doctest::Approx(s.mean[1] + 0.05 * f[1]).epsilon(1e-13));
  CHECK(n.mean[3] == doctest::Approx(s.mean[3] + 0.05 * f[3]).epsilon(1e-13));
  CHECK(n.cov.trace() > s.cov.trace());
  CHECK((n.cov - n.cov.transpose()).norm() < 1e-12);
}

TEST_CASE("prediction wraps the heading estimate") {
  EstimatorState s;
  s.mean = {0.0, 0.0, 3.14, 4.0};  // strong left command pushes alpha past pi
  const NoiseConfig noise;
  const EstimatorState n = ekf_predict(s, 0.1, 4.0, noise.Q);
  CHECK(n.mean[2] <= kPi);
  CHECK(n.mean[2] > -kPi);
  CHECK(n.mean[2] == doctest::Approx(3.14 + 0.1 - 2.0 * kPi).epsilon(1e-12));
}

TEST_CASE("update contracts the covariance and pulls toward the measurement") {
  const Eigen::Vector4d truth = reference_state();
  const Vec2 tp{25.0, 30.0}, dp{0.0, 0.0};
  EstimatorState s;
  s.mean = truth + Eigen::Vector4d{2.0, -1.5, 0.2, 0.0};
  s.cov = Eigen::Matrix4d::Identity() * 5.0;
  const NoiseConfig noise;
  const Measurement z = predict_measurement(truth, tp, dp);
  const EstimatorState n = ekf_update(s, z, tp, dp, noise.Sigma);
  const double err_before = (s.mean.head<2>() - truth.head<2>()).norm();
  const double err_after = (n.mean.head<2>() - truth.head<2>()).norm();
  CHECK(err_after < err_before);
  CHECK(n.cov.trace() < s.cov.trace());
  CHECK((n.cov - n.cov.transpose()).norm() < 1e-10);
}

TEST_CASE("update wraps angle innovations across the pi seam") {
  // Prediction and measurement angles differ by almost 2*pi numerically but
  // are geometrically close; a naive difference would yank the estimate.
  const Vec2 tp{0.0, 1e-3}, dp{0.0, -1e-3};
  EstimatorState s;
  s.mean = {-10.0, 1e-4, 0.0, 0.0};  // theta close to +pi as seen from target
  s.cov = Eigen::Matrix4d::Identity();
  const NoiseConfig noise;
  Eigen::Vector4d truth{-10.0, -1e-4, 0.0, 0.0};  // theta close to -pi
  const Measurement z = predict_measurement(truth, tp, dp);
  const EstimatorState n = ekf_update(s, z, tp, dp, noise.Sigma);
  CHECK((n.mean.head<2>() - truth.head<2>()).norm() < 1.0);
}

TEST_CASE("initialisation triangulates the attacker behind the bearing") {
  const Eigen::Vector4d truth = reference_state();
  const Vec2 tp{25.0, 30.0};
  const Measurement z0 = predict_measurement(truth, tp, Vec2{0.0, 0.0});
  const EstimatorState s = init_estimator(z0, tp);
  CHECK(s.mean[0] == doctest::Approx(truth[0]).epsilon(1e-12));
  CHECK(s.mean[1] == doctest::Approx(truth[1]).epsilon(1e-12));
  CHECK(s.mean[2] == 0.0);
  CHECK(s.mean[3] == 0.0);
  CHECK(s.cov(0, 0) == doctest::Approx(10.0));
  CHECK(s.cov(2, 2) == doctest::Approx(1.0));
}

TEST_CASE("simulated measurements are deterministic per generator state") {
  EngagementState e;
  e.target = {25.0, 30.0, -2.2, 2.0};
  e.attacker = {50.0, 50.0, -2.2, 4.0};
  e.defender = {0.0, 0.0, 0.78, 4.0};
  const NoiseConfig noise;
  std::mt19937_64 rng1(42), rng2(42), rng3(43);
  const Measurement a = simulate_measurement(e, noise.Sigma, rng1);
  const Measurement b = simulate_measurement(e, noise.Sigma, rng2);
  const Measurement c = simulate_measurement(e, noise.Sigma, rng3);
  CHECK(a.R == b.R);
  CHECK(a.theta == b.theta);
  CHECK(a.r == b.r);
  CHECK(a.xi == b.xi);
  CHECK(a.R != c.R);
}

TEST_CASE("zero measurement noise returns the exact geometry") {
  EngagementState e;
  e.target = {25.0, 30.0, -2.2, 2.0};
  e.attacker = {50.0, 50.0, -2.2, 4.0};
  e.defender = {0.0, 0.0, 0.78, 4.0};
  std::mt19937_64 rng(7);
  const Measurement z =
      simulate_measurement(e, Eigen::Matrix4d::Zero(), rng);
  CHECK(z.R == doctest::Approx(32.015621187164243).epsilon(1e-14));
  CHECK(z.xi == doctest::Approx(-2.3561944901923448).epsilon(1e-14));
}

TEST_CASE("filtering a noisy constant-turn attacker stays 3-sigma consistent") {
  // Self-contained filter loop (no closed-loop control): attacker flies a
  // constant-rate turn, observers hold position, the filter tracks it.
  const double dt = 0.05, v_A = 4.0;
  const Vec2 tp{25.0, 30.0}, dp{0.0, 0.0};
  const NoiseConfig noise;
  AgentState truth{50.0, 50.0, -2.2, v_A};
  const double turn = 0.1;  // rad/s -> lateral command a = v * turn
  std::mt19937_64 rng(2024);
  EngagementState world;
  world.target = {tp.x, tp.y, 0.0, 0.0};
  world.defender = {dp.x, dp.y, 0.0, 0.0};
  world.attacker = truth;
  EstimatorState est =
      init_estimator(simulate_measurement(world, noise.Sigma, rng), tp);
  int in3 = 0, n = 0;
  for (int k = 0; k < 400; ++k) {
    truth = step_agent(truth, turn, dt);
    world.attacker = truth;
    est = ekf_predict(est, dt, v_A, noise.Q);
    const Measurement z = simulate_measurement(world, noise.Sigma, rng);
    est = ekf_update(est, z, tp, dp, noise.Sigma);
    ++n;
    const bool ok =
        std::abs(est.mean[0] - truth.x) <= 3.0 * std::sqrt(est.cov(0, 0)) &&
        std::abs(est.mean[1] - truth.y) <= 3.0 * std::sqrt(est.cov(1, 1)) &&
        std::abs(wrap_angle(est.mean[2] - truth.alpha)) <=
            3.0 * std::sqrt(est.cov(2, 2));
    in3 += ok;
  }
  CHECK(double(in3) / n >= 0.95);
  // After convergence the position error is well under a metre.
  CHECK(std::hypot(est.mean[0] - truth.x, est.mean[1] - truth.y) < 1.0);
}
