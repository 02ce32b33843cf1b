// Copyright 2026 The khet Authors
// SPDX-License-Identifier: Apache-2.0

#include "khet/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <sstream>

#include "khet/error.hpp"

namespace khet {
namespace {

// Below this modulus the mean phasor is indistinguishable from rounding noise
// of a sum of unit vectors.
constexpr double kZeroModulus = 1e-14;

void require_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    std::ostringstream msg;
    msg << what << ": expected length " << a << ", got " << b;
    throw Error(ErrorCode::dimension, msg.str());
  }
}

std::complex<double> mean_phasor(std::span<const double> angles) {
  std::complex<double> z{0.0, 0.0};
  for (double a : angles) z += std::polar(1.0, a);
  return z / static_cast<double>(angles.size());
}

std::complex<double> weighted_phasor(std::span<const double> alpha,
                                     std::span<const double> x) {
  std::complex<double> z{0.0, 0.0};
  for (std::size_t m = 0; m < x.size(); ++m) z += alpha[m] * std::polar(1.0, x[m]);
  return z;
}

OrderParameter to_order_parameter(std::complex<double> z) {
  OrderParameter op;
  op.R = std::min(1.0, std::abs(z));
  if (op.R <= kZeroModulus) {
    op.r_is_zero = true;
    op.Psi = 0.0;
  } else {
    op.Psi = std::arg(z);
  }
  return op;
}

}  // namespace

double wrap_angle(double angle) noexcept {
  double w = std::remainder(angle, kTwoPi);
  if (w <= -kPi) w += kTwoPi;
  return w;
}

double wrap_positive(double angle) noexcept {
  double w = std::fmod(angle, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w -= kTwoPi;
  return w;
}

PhaseState::PhaseState(std::vector<double> angles) : angles_(std::move(angles)) {
  if (angles_.size() < 2) {
    throw Error(ErrorCode::invalid_argument,
                "phase state needs at least 2 oscillators");
  }
  for (std::size_t j = 0; j < angles_.size(); ++j) {
    if (!std::isfinite(angles_[j])) {
      std::ostringstream msg;
      msg << "phase state: angle " << j + 1 << " is not finite";
      throw Error(ErrorCode::invalid_argument, msg.str());
    }
  }
}

Partition::Partition(std::size_t n, std::vector<std::vector<std::size_t>> blocks)
    : n_(n), blocks_(std::move(blocks)), owner_(n, n) {
  if (n == 0) throw Error(ErrorCode::invalid_argument, "partition of empty set");
  for (std::size_t m = 0; m < blocks_.size(); ++m) {
    if (blocks_[m].empty()) {
      throw Error(ErrorCode::invalid_argument, "partition block is empty");
    }
    for (std::size_t j : blocks_[m]) {
      if (j >= n) {
        throw Error(ErrorCode::invalid_argument, "partition index out of range");
      }
      if (owner_[j] != n) {
        throw Error(ErrorCode::invalid_argument, "partition blocks overlap");
      }
      owner_[j] = m;
    }
  }
  if (std::find(owner_.begin(), owner_.end(), n) != owner_.end()) {
    throw Error(ErrorCode::invalid_argument, "partition does not cover all oscillators");
  }
}

Partition Partition::singletons(std::size_t n) {
  std::vector<std::vector<std::size_t>> blocks(n);
  for (std::size_t j = 0; j < n; ++j) blocks[j] = {j};
  return Partition(n, std::move(blocks));
}

std::vector<double> Partition::fractions() const {
  std::vector<double> alpha(blocks_.size());
  for (std::size_t m = 0; m < blocks_.size(); ++m) {
    alpha[m] = static_cast<double>(blocks_[m].size()) / static_cast<double>(n_);
  }
  return alpha;
}

void vector_field(std::span<const double> angles, std::span<double> out) {
  require_same_size(angles.size(), out.size(), "vector_field output");
  // Mean-field form: theta_j' = Im(Z e^{-i theta_j}) = R sin(Psi - theta_j).
  const std::complex<double> z = mean_phasor(angles);
  for (std::size_t j = 0; j < angles.size(); ++j) {
    out[j] = z.imag() * std::cos(angles[j]) - z.real() * std::sin(angles[j]);
  }
}

std::vector<double> vector_field(std::span<const double> angles) {
  std::vector<double> out(angles.size());
  vector_field(angles, out);
  return out;
}

OrderParameter order_parameter(std::span<const double> angles) {
  return to_order_parameter(mean_phasor(angles));
}

double lyapunov_rate(std::span<const double> angles) {
  const OrderParameter op = order_parameter(angles);
  if (op.r_is_zero) return 0.0;
  double acc = 0.0;
  for (double a : angles) {
    const double s = std::sin(op.Psi - a);
    acc += s * s;
  }
  return op.R * acc / static_cast<double>(angles.size());
}

std::vector<double> normalize_phases(std::span<const double> angles) {
  const double mean =
      std::accumulate(angles.begin(), angles.end(), 0.0) / static_cast<double>(angles.size());
  std::vector<double> out(angles.begin(), angles.end());
  for (double& a : out) a -= mean;
  return out;
}

void cluster_vector_field(std::span<const double> alpha,
                          std::span<const double> x, std::span<double> out) {
  require_same_size(alpha.size(), x.size(), "cluster_vector_field angles");
  require_same_size(x.size(), out.size(), "cluster_vector_field output");
  const std::complex<double> z = weighted_phasor(alpha, x);
  for (std::size_t m = 0; m < x.size(); ++m) {
    out[m] = z.imag() * std::cos(x[m]) - z.real() * std::sin(x[m]);
  }
}

std::vector<double> cluster_vector_field(std::span<const double> alpha,
                                         std::span<const double> x) {
  std::vector<double> out(x.size());
  cluster_vector_field(alpha, x, out);
  return out;
}

OrderParameter order_parameter(std::span<const double> alpha,
                               std::span<const double> x) {
  require_same_size(alpha.size(), x.size(), "order_parameter angles");
  return to_order_parameter(weighted_phasor(alpha, x));
}

double lyapunov_rate(std::span<const double> alpha, std::span<const double> x) {
  const OrderParameter op = order_parameter(alpha, x);
  if (op.r_is_zero) return 0.0;
  double acc = 0.0;
  for (std::size_t m = 0; m < x.size(); ++m) {
    const double s = std::sin(op.Psi - x[m]);
    acc += alpha[m] * s * s;
  }
  return op.R * acc;
}

ClusterState normalize_cluster(const Partition& partition,
                               std::span<const double> x) {
  require_same_size(partition.cluster_count(), x.size(), "normalize_cluster");
  const std::vector<double> alpha = partition.fractions();
  double weighted = 0.0;
  for (std::size_t m = 0; m < x.size(); ++m) weighted += alpha[m] * x[m];
  ClusterState cs{partition, std::vector<double>(x.begin(), x.end()), true};
  for (double& v : cs.x) v -= weighted;
  return cs;
}

std::vector<double> apply_permutation(std::span<const std::size_t> sigma,
                                      std::span<const double> values) {
  require_same_size(values.size(), sigma.size(), "permutation");
  std::vector<double> out(values.size());
  std::vector<bool> hit(values.size(), false);
  for (std::size_t j = 0; j < values.size(); ++j) {
    const std::size_t target = sigma[j];
    if (target >= values.size() || hit[target]) {
      throw Error(ErrorCode::invalid_argument, "sigma is not a permutation");
    }
    hit[target] = true;
    out[target] = values[j];
  }
  return out;
}

std::vector<double> apply_group(const GroupElement& g,
                                std::span<const double> angles) {
  std::vector<double> out = apply_permutation(g.sigma, angles);
  for (double& a : out) a -= g.psi;
  return out;
}

std::vector<double> lift(const Partition& partition, std::span<const double> x) {
  require_same_size(partition.cluster_count(), x.size(), "lift");
  std::vector<double> angles(partition.oscillator_count());
  for (std::size_t m = 0; m < x.size(); ++m) {
    for (std::size_t j : partition.block(m)) angles[j] = x[m];
  }
  return angles;
}

std::vector<double> project(const Partition& partition,
                            std::span<const double> angles, double tolerance) {
  require_same_size(partition.oscillator_count(), angles.size(), "project");
  std::vector<double> x(partition.cluster_count());
  for (std::size_t m = 0; m < x.size(); ++m) {
    const auto& blk = partition.block(m);
    const auto [lo, hi] = std::minmax_element(
        blk.begin(), blk.end(),
        [&](std::size_t a, std::size_t b) { return angles[a] < angles[b]; });
    const double spread = angles[*hi] - angles[*lo];
    if (!(spread <= tolerance)) {
      std::ostringstream msg;
      msg << "state is not clustered on block " << m + 1 << " (spread " << spread
          << " > " << tolerance << ")";
      throw Error(ErrorCode::cluster_violation, msg.str());
    }
    x[m] = angles[blk.front()];
  }
  return x;
}

}  // namespace khet
