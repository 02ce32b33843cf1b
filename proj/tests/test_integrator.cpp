// Copyright 2026 The khet Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "khet/core_model.hpp"
#include "khet/error.hpp"
#include "khet/integrator.hpp"
#include "oracles.hpp"

using namespace khet;

namespace {

const RateFunction decay = [](std::span<const double> y, std::span<double> dy) {
  dy[0] = -y[0];
};

const RateFunction kuramoto = [](std::span<const double> y, std::span<double> dy) {
  vector_field(y, dy);
};

double exp_error(double h) {
  IntegrationConfig cfg;
  cfg.step = h;
  cfg.max_steps = steps_for_duration(1.0, h);
  const Trajectory t = integrate(decay, {1.0}, cfg);
  return std::abs(t.final_state()[0] - std::exp(-1.0));
}

}  // namespace

TEST_CASE("zero rate gives a constant trajectory") {
  IntegrationConfig cfg;
  cfg.max_steps = 50;
  const Trajectory t = integrate([](auto, std::span<double> dy) { std::fill(dy.begin(), dy.end(), 0.0); },
                                 {1.0, 2.0}, cfg);
  CHECK(t.size() == 51);
  for (const auto& s : t.states) CHECK(s == std::vector<double>{1.0, 2.0});
  CHECK(t.stop_reason == StopReason::completed);
}

TEST_CASE("exponential decay oracle") {
  CHECK(exp_error(1e-2) < 1e-9);
}

TEST_CASE("fourth-order convergence") {
  const double ratio = exp_error(0.1) / exp_error(0.05);
  CHECK(ratio >= 12.0);
  CHECK(ratio <= 20.0);
}

TEST_CASE("steps_for_duration") {
  CHECK(steps_for_duration(1.0, 1e-2) == 100);
  CHECK(steps_for_duration(100.0, 1e-2) == 10000);
  CHECK(steps_for_duration(0.0, 1e-2) == 0);
}

TEST_CASE("times follow the step index") {
  IntegrationConfig cfg;
  cfg.max_steps = 1000;
  cfg.direction = Direction::backward;
  const Trajectory t = integrate(decay, {1.0}, cfg);
  CHECK(t.final_time() == doctest::Approx(-10.0));
  CHECK(t.final_state()[0] == doctest::Approx(std::exp(10.0)).epsilon(1e-9));
}

TEST_CASE("backward then forward returns to the start") {
  std::mt19937_64 rng(7);
  const auto y0 = oracle::random_angles(rng, 6);
  IntegrationConfig cfg;
  cfg.max_steps = steps_for_duration(10.0, cfg.step);
  cfg.direction = Direction::backward;
  const Trajectory back = integrate(kuramoto, y0, cfg);
  cfg.direction = Direction::forward;
  const Trajectory fwd = integrate(kuramoto, back.final_state(), cfg);
  for (std::size_t j = 0; j < y0.size(); ++j) CHECK(std::abs(fwd.final_state()[j] - y0[j]) < 1e-8);
}

TEST_CASE("matches an independent RK4 on the pairwise field") {
  std::mt19937_64 rng(8);
  const auto y0 = oracle::random_angles(rng, 5);
  IntegrationConfig cfg;
  cfg.max_steps = 500;
  const Trajectory t = integrate(kuramoto, y0, cfg);
  const auto ref = oracle::rk4_pairwise(y0, cfg.step, 500);
  for (std::size_t j = 0; j < y0.size(); ++j) CHECK(std::abs(t.final_state()[j] - ref[j]) < 1e-12);
}

TEST_CASE("two-cluster line is invariant") {
  // Fat cluster {0,1,2}, slim {3,4}, off equilibrium.
  const std::vector<double> y0{-0.3, -0.3, -0.3, 1.1, 1.1};
  IntegrationConfig cfg;
  cfg.max_steps = steps_for_duration(20.0, cfg.step);
  const Trajectory t = integrate(kuramoto, y0, cfg);
  for (const auto& s : t.states) {
    CHECK(std::abs(s[1] - s[0]) < 1e-10);
    CHECK(std::abs(s[2] - s[0]) < 1e-10);
    CHECK(std::abs(s[4] - s[3]) < 1e-10);
  }
}

TEST_CASE("stop condition is honored at the first satisfying step") {
  IntegrationConfig cfg;
  std::size_t first = 0;
  {
    IntegrationConfig probe;
    probe.max_steps = 1000;
    const Trajectory all = integrate(decay, {1.0}, probe);
    while (all.states[first][0] >= 0.5) ++first;
  }
  const Trajectory t = integrate(decay, {1.0}, cfg, [](std::span<const double> y) { return y[0] < 0.5; });
  CHECK(t.stop_reason == StopReason::condition_met);
  CHECK(t.steps_taken == first);
  CHECK(t.final_state()[0] < 0.5);
}

TEST_CASE("max_steps reached without the stop condition") {
  IntegrationConfig cfg;
  cfg.max_steps = 10;
  const Trajectory t = integrate(decay, {1.0}, cfg, [](auto) { return false; });
  CHECK(t.stop_reason == StopReason::max_steps);
  CHECK(t.steps_taken == 10);
}

TEST_CASE("recording keeps first, every k-th and last state") {
  IntegrationConfig cfg;
  cfg.max_steps = 25;
  cfg.record_every = 10;
  const Trajectory t = integrate(decay, {1.0}, cfg, {}, [](std::span<const double> y) { return y[0]; });
  REQUIRE(t.size() == 4);
  CHECK(t.times[1] == doctest::Approx(0.1));
  CHECK(t.times[3] == doctest::Approx(0.25));
  CHECK(t.R_values.size() == t.size());
  CHECK(t.R_values[3] == t.states[3][0]);
}

TEST_CASE("divergence is reported") {
  IntegrationConfig cfg;
  cfg.max_steps = 10000;
  cfg.step = 0.1;
  try {
    integrate([](std::span<const double> y, std::span<double> dy) { dy[0] = y[0] * y[0]; }, {1.0},
              cfg);
    FAIL("expected divergence");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::divergence);
  }
}

TEST_CASE("reversed flips order") {
  IntegrationConfig cfg;
  cfg.max_steps = 3;
  cfg.direction = Direction::backward;
  const Trajectory t = reversed(integrate(decay, {1.0}, cfg));
  CHECK(t.times.front() == doctest::Approx(-0.03));
  CHECK(t.times.back() == 0.0);
  CHECK(t.states.back()[0] == 1.0);
}

TEST_CASE("invalid configuration") {
  IntegrationConfig cfg;
  cfg.step = 0.0;
  CHECK_THROWS_AS(integrate(decay, {1.0}, cfg), Error);
  cfg.step = 1e-2;
  cfg.record_every = 0;
  CHECK_THROWS_AS(integrate(decay, {1.0}, cfg), Error);
}
