// Copyright 2026 The khet Authors
// SPDX-License-Identifier: Apache-2.0

#include "khet/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "khet/error.hpp"

namespace khet {

const char* to_string(StopReason reason) noexcept {
  switch (reason) {
    case StopReason::condition_met: return "condition_met";
    case StopReason::max_steps: return "max_steps";
    case StopReason::completed: return "completed";
  }
  return "unknown";
}

std::size_t steps_for_duration(double duration, double step) {
  if (!(step > 0.0) || !(duration >= 0.0)) {
    throw Error(ErrorCode::invalid_argument, "duration and step must be positive");
  }
  return static_cast<std::size_t>(std::llround(duration / step));
}

Trajectory integrate(const RateFunction& rate, std::vector<double> y0,
                     const IntegrationConfig& config, const StopCondition& stop,
                     const Observable& observable) {
  if (!(config.step > 0.0) || !std::isfinite(config.step)) {
    throw Error(ErrorCode::invalid_argument, "integration step must be positive");
  }
  if (config.max_steps < 1 || config.record_every < 1) {
    throw Error(ErrorCode::invalid_argument,
                "max_steps and record_every must be at least 1");
  }
  const std::size_t n = y0.size();
  const double h = config.direction == Direction::forward ? config.step : -config.step;

  std::vector<double> y = std::move(y0);
  std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);

  Trajectory traj;
  auto record = [&](double t) {
    traj.times.push_back(t);
    traj.states.push_back(y);
    if (observable) traj.R_values.push_back(observable(y));
  };
  record(0.0);

  traj.stop_reason = stop ? StopReason::max_steps : StopReason::completed;
  std::size_t step = 0;
  while (step < config.max_steps) {
    rate(y, k1);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
    rate(tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
    rate(tmp, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * k3[i];
    rate(tmp, k4);
    for (std::size_t i = 0; i < n; ++i) {
      tmp[i] = y[i] + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    if (!std::all_of(tmp.begin(), tmp.end(), [](double v) { return std::isfinite(v); })) {
      std::ostringstream msg;
      msg << "integration diverged after step " << step
          << " (last finite state at t=" << static_cast<double>(step) * h << ")";
      throw Error(ErrorCode::divergence, msg.str());
    }
    y.swap(tmp);
    ++step;
    // t from the step count keeps the time grid free of accumulated rounding.
    const double t = static_cast<double>(step) * h;
    const bool done = stop && stop(y);
    if (done || step == config.max_steps || step % config.record_every == 0) record(t);
    if (done) {
      traj.stop_reason = StopReason::condition_met;
      break;
    }
  }
  traj.steps_taken = step;
  return traj;
}

Trajectory reversed(Trajectory trajectory) {
  std::reverse(trajectory.times.begin(), trajectory.times.end());
  std::reverse(trajectory.states.begin(), trajectory.states.end());
  std::reverse(trajectory.R_values.begin(), trajectory.R_values.end());
  return trajectory;
}

}  // namespace khet
