// Copyright 2026 The khet Authors
// SPDX-License-Identifier: Apache-2.0

// Independent reference implementations used by the tests.

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <random>
#include <vector>

namespace khet::oracle {

// Direct O(N^2) pairwise coupling: (1/N) sum_k sin(theta_k - theta_j).
inline std::vector<double> pairwise_field(const std::vector<double>& theta) {
  const double n = static_cast<double>(theta.size());
  std::vector<double> f(theta.size(), 0.0);
  for (std::size_t j = 0; j < theta.size(); ++j) {
    for (double tk : theta) f[j] += std::sin(tk - theta[j]);
    f[j] /= n;
  }
  return f;
}

// Weighted cluster coupling sum_m' alpha_m' sin(x_m' - x_m).
inline std::vector<double> pairwise_cluster_field(const std::vector<double>& alpha,
                                                  const std::vector<double>& x) {
  std::vector<double> f(x.size(), 0.0);
  for (std::size_t m = 0; m < x.size(); ++m) {
    for (std::size_t k = 0; k < x.size(); ++k) f[m] += alpha[k] * std::sin(x[k] - x[m]);
  }
  return f;
}

inline double order_modulus(const std::vector<double>& theta) {
  std::complex<double> z = 0.0;
  for (double t : theta) z += std::polar(1.0, t);
  return std::abs(z) / static_cast<double>(theta.size());
}

inline double wrap(double a) { return std::remainder(a, 2.0 * M_PI); }

inline std::vector<double> random_angles(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-M_PI, M_PI);
  std::vector<double> v(n);
  for (auto& a : v) a = u(rng);
  return v;
}

// Plain RK4 on the pairwise field, for cross-checking trajectories.
inline std::vector<double> rk4_pairwise(std::vector<double> y, double h, std::size_t steps) {
  const std::size_t n = y.size();
  std::vector<double> tmp(n);
  for (std::size_t s = 0; s < steps; ++s) {
    const auto k1 = pairwise_field(y);
    for (std::size_t j = 0; j < n; ++j) tmp[j] = y[j] + 0.5 * h * k1[j];
    const auto k2 = pairwise_field(tmp);
    for (std::size_t j = 0; j < n; ++j) tmp[j] = y[j] + 0.5 * h * k2[j];
    const auto k3 = pairwise_field(tmp);
    for (std::size_t j = 0; j < n; ++j) tmp[j] = y[j] + h * k3[j];
    const auto k4 = pairwise_field(tmp);
    for (std::size_t j = 0; j < n; ++j) y[j] += h / 6.0 * (k1[j] + 2 * k2[j] + 2 * k3[j] + k4[j]);
  }
  return y;
}

}  // namespace khet::oracle
