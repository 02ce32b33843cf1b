// Copyright 2026 The khet Authors
// SPDX-License-Identifier: Apache-2.0

// State types and vector fields of the equal-frequency Kuramoto model
//
//     d theta_j / dt = (1/N) sum_k sin(theta_k - theta_j)
//
// and of its reduction to M-cluster subspaces. Angles live on the covering
// space: nothing in this header wraps them unless asked to.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace khet {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Default tolerance for treating a block of angles as one cluster.
inline constexpr double kClusterTolerance = 1e-9;

/// Wraps to (-pi, pi].
double wrap_angle(double angle) noexcept;
/// Wraps to [0, 2 pi).
double wrap_positive(double angle) noexcept;

/// N oscillator angles, N >= 2, all finite.
class PhaseState {
 public:
  explicit PhaseState(std::vector<double> angles);

  std::size_t size() const noexcept { return angles_.size(); }
  std::span<const double> angles() const noexcept { return angles_; }
  double operator[](std::size_t j) const noexcept { return angles_[j]; }
  std::vector<double> release() && { return std::move(angles_); }

 private:
  std::vector<double> angles_;
};

/// Ordered disjoint nonempty blocks covering {0..N-1}. Indices are zero-based
/// in the API; exports add one.
class Partition {
 public:
  Partition(std::size_t n, std::vector<std::vector<std::size_t>> blocks);

  /// The trivial partition into N singletons.
  static Partition singletons(std::size_t n);

  std::size_t oscillator_count() const noexcept { return n_; }
  std::size_t cluster_count() const noexcept { return blocks_.size(); }
  const std::vector<std::vector<std::size_t>>& blocks() const noexcept {
    return blocks_;
  }
  const std::vector<std::size_t>& block(std::size_t m) const {
    return blocks_.at(m);
  }
  std::size_t block_size(std::size_t m) const { return blocks_.at(m).size(); }
  /// Block index of oscillator j.
  std::size_t block_of(std::size_t j) const { return owner_.at(j); }
  /// alpha_m = N_m / N.
  std::vector<double> fractions() const;

 private:
  std::size_t n_;
  std::vector<std::vector<std::size_t>> blocks_;
  std::vector<std::size_t> owner_;
};

struct ClusterState {
  Partition partition;
  std::vector<double> x;
  bool normalized = false;
};

struct OrderParameter {
  double R = 0.0;
  double Psi = 0.0;
  /// Set when R is numerically zero; Psi is then reported as 0.
  bool r_is_zero = false;
};

/// g = (sigma, psi) acting by (g theta)_{sigma(j)} = theta_j - psi.
struct GroupElement {
  std::vector<std::size_t> sigma;
  double psi = 0.0;
};

// Full model.
std::vector<double> vector_field(std::span<const double> angles);
void vector_field(std::span<const double> angles, std::span<double> out);
OrderParameter order_parameter(std::span<const double> angles);
double lyapunov_rate(std::span<const double> angles);
std::vector<double> normalize_phases(std::span<const double> angles);

// Cluster-reduced model, for rational or real weights alpha_m > 0.
std::vector<double> cluster_vector_field(std::span<const double> alpha,
                                         std::span<const double> x);
void cluster_vector_field(std::span<const double> alpha,
                          std::span<const double> x, std::span<double> out);
OrderParameter order_parameter(std::span<const double> alpha,
                               std::span<const double> x);
double lyapunov_rate(std::span<const double> alpha, std::span<const double> x);
/// Shifts x uniformly so that sum_m alpha_m x_m = 0.
ClusterState normalize_cluster(const Partition& partition,
                               std::span<const double> x);

// Symmetry action.
std::vector<double> apply_group(const GroupElement& g,
                                std::span<const double> angles);
/// (sigma v)_{sigma(j)} = v_j.
std::vector<double> apply_permutation(std::span<const std::size_t> sigma,
                                      std::span<const double> values);

// Cluster subspace embedding.
std::vector<double> lift(const Partition& partition, std::span<const double> x);
std::vector<double> project(const Partition& partition,
                            std::span<const double> angles,
                            double tolerance = kClusterTolerance);

}  // namespace khet
