// Copyright 2026 The khet Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace khet {

enum class Direction { forward, backward };

struct IntegrationConfig {
  double step = 1e-2;
  Direction direction = Direction::forward;
  std::size_t max_steps = 10'000'000;
  /// Keep every k-th step; the first and last states are always kept.
  std::size_t record_every = 1;
};

enum class StopReason { condition_met, max_steps, completed };

const char* to_string(StopReason reason) noexcept;

struct Trajectory {
  std::vector<double> times;
  std::vector<std::vector<double>> states;
  /// Empty unless an observable was supplied to integrate().
  std::vector<double> R_values;
  StopReason stop_reason = StopReason::completed;
  std::size_t steps_taken = 0;

  std::size_t size() const noexcept { return times.size(); }
  double final_time() const { return times.back(); }
  const std::vector<double>& final_state() const { return states.back(); }
};

using RateFunction = std::function<void(std::span<const double>, std::span<double>)>;
using StopCondition = std::function<bool(std::span<const double>)>;
using Observable = std::function<double(std::span<const double>)>;

/// Classical fixed-step RK4. Backward integration advances t by -step.
/// With a stop condition the run ends at the first step where it holds
/// (condition_met) or after max_steps (max_steps); without one it runs all
/// max_steps (completed). Throws Error{divergence} on a non-finite state.
Trajectory integrate(const RateFunction& rate, std::vector<double> y0,
                     const IntegrationConfig& config,
                     const StopCondition& stop = {},
                     const Observable& observable = {});

/// Reverses a backward-time trajectory into increasing time order.
Trajectory reversed(Trajectory trajectory);

/// Step count that covers duration T at the given step size.
std::size_t steps_for_duration(double duration, double step);

}  // namespace khet
