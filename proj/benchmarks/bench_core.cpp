#include <benchmark/benchmark.h>

#include <random>

#include "tad/engagement.hpp"
#include "tad/estimator.hpp"
#include "tad/guidance.hpp"
#include "tad/nmpc.hpp"
#include "tad/zones.hpp"

using namespace tad;

namespace {

EngagementState crossing_state() {
  EngagementState s;
  s.target = {25.0, 30.0, -2.2, 2.0};
  s.attacker = {50.0, 50.0, -2.2, 4.0};
  s.defender = {0.0, 0.0, 0.78, 4.0};
  return s;
}

void bm_relative_geometry(benchmark::State& state) {
  const EngagementState s = crossing_state();
  for (auto _ : state) {
    benchmark::DoNotOptimize(relative_geometry(s));
  }
}
BENCHMARK(bm_relative_geometry);

void bm_step_agent(benchmark::State& state) {
  AgentState a{0.0, 0.0, 0.3, 4.0};
  for (auto _ : state) {
    a = step_agent(a, 0.2, 0.05);
    benchmark::DoNotOptimize(a);
  }
}
BENCHMARK(bm_step_agent);

void bm_switched_guidance(benchmark::State& state) {
  const EngagementState s = crossing_state();
  const GuidanceConfig cfg;
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(switched_attacker_accel(t, s, cfg));
    t += 0.05;
  }
}
BENCHMARK(bm_switched_guidance);

void bm_ekf_cycle(benchmark::State& state) {
  const EngagementState world = crossing_state();
  const NoiseConfig noise;
  const Vec2 tp = world.target.position();
  const Vec2 dp = world.defender.position();
  std::mt19937_64 rng(5);
  const Measurement z0 = simulate_measurement(world, noise.Sigma, rng);
  EstimatorState est = init_estimator(z0, tp);
  for (auto _ : state) {
    est = ekf_predict(est, 0.05, 4.0, noise.Q);
    const Measurement z = simulate_measurement(world, noise.Sigma, rng);
    est = ekf_update(est, z, tp, dp, noise.Sigma);
    benchmark::DoNotOptimize(est);
  }
}
BENCHMARK(bm_ekf_cycle);

void bm_nmpc_solve(benchmark::State& state) {
  Eigen::Vector4d est{50.0, 100.0, -kPi / 2.0, 0.0};
  AgentState target{0.0, 0.0, 0.3, 2.0};
  AgentState defender{-50.0, 0.0, 0.78, 4.0};
  NmpcConfig cfg;
  cfg.safe_distance = 55.0;
  ControlPlan warm = initial_warm_start(target, cfg);
  for (auto _ : state) {
    const NmpcSolution sol = solve(est, 4.0, target, defender, warm, cfg);
    warm = shifted_warm_start(sol.plan);
    benchmark::DoNotOptimize(warm);
  }
}
BENCHMARK(bm_nmpc_solve);

void bm_classify_constant_speed(benchmark::State& state) {
  ZoneParams p;
  p.x_A = 35.0;
  p.gamma_AT = 0.5;
  p.gamma_AD = 1.0;
  double x = -100.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(classify_constant_speed({x, 40.0}, p));
    x = x >= 100.0 ? -100.0 : x + 1.0;
  }
}
BENCHMARK(bm_classify_constant_speed);

void bm_classify_variable_velocity(benchmark::State& state) {
  ZoneParams p;
  p.x_A = 0.5;
  p.gamma_AT = 0.5;
  p.gamma_AD = 1.0;
  double x = -1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(classify_variable_velocity({x, 1.0}, p));
    x = x >= 1.0 ? -1.0 : x + 0.05;
  }
}
BENCHMARK(bm_classify_variable_velocity);

void bm_quartic_boundary(benchmark::State& state) {
  ZoneParams p;
  p.x_A = 1.0;
  p.gamma_AT = 0.5;
  p.gamma_AD = 1.25;
  double x = -3.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(quartic_boundary(p, x));
    x = x >= 3.0 ? -3.0 : x + 0.01;
  }
}
BENCHMARK(bm_quartic_boundary);

void bm_stochastic_margin(benchmark::State& state) {
  ZoneParams p;
  p.x_A = 35.0;
  p.gamma_AT = 0.5;
  p.gamma_AD = 1.0;
  p.sigma_pos = 1.75;
  for (auto _ : state) {
    benchmark::DoNotOptimize(stochastic_margin({20.0, 15.0}, p));
  }
}
BENCHMARK(bm_stochastic_margin);

}  // namespace

BENCHMARK_MAIN();
