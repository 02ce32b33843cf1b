// Copyright 2026 The khet Authors
// SPDX-License-Identifier: Apache-2.0

// Equilibria of the normalized Kuramoto model: total synchrony (R = 1),
// fat/slim 2-clusters (R = 2 alpha - 1) and N-bar linkages (R = 0).

#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace khet {

/// Default tolerance of classify_state.
inline constexpr double kClassifyTolerance = 1e-6;

enum class EquilibriumClass { synchrony, two_cluster, linkage };

const char* to_string(EquilibriumClass kind) noexcept;

struct Equilibrium {
  EquilibriumClass kind = EquilibriumClass::synchrony;
  /// Sorted zero-based fat index set J (two_cluster; all indices for synchrony).
  std::vector<std::size_t> fat_set;
  /// |J| / N for two_cluster, 1 for synchrony, 0 for linkage.
  double alpha = 1.0;
  double R = 1.0;
  /// Angles with sum zero.
  std::vector<double> representative;

  std::size_t oscillator_count() const noexcept { return representative.size(); }
};

struct EigenvalueMultiplicity {
  double value = 0.0;
  std::size_t multiplicity = 0;
};

/// Closed-form spectrum on the zero-mean space of dimension N - 1.
struct Spectrum {
  std::vector<EigenvalueMultiplicity> eigenvalues;
  std::size_t space_dim = 0;

  /// Eigenvalues repeated by multiplicity, ascending.
  std::vector<double> expanded() const;
};

Equilibrium synchrony_equilibrium(std::size_t n);
/// Requires N/2 < |J| < N. J is zero-based.
Equilibrium two_cluster_equilibrium(std::span<const std::size_t> fat_set, std::size_t n);

int morse_index(const Equilibrium& eq);
Spectrum linearization_spectrum(const Equilibrium& eq);

/// Orthonormal basis (N x (N-1)) of the zero-mean subspace.
Eigen::MatrixXd zero_mean_basis(std::size_t n);
/// Central-difference Jacobian of the full vector field restricted to the
/// zero-mean subspace, expressed in zero_mean_basis(N).
Eigen::MatrixXd jacobian_fd(std::span<const double> angles, double h);
/// Central-difference Jacobian (M x M) of the cluster-reduced field.
Eigen::MatrixXd cluster_jacobian_fd(std::span<const double> alpha,
                                    std::span<const double> x, double h);
/// Sorted eigenvalues of a symmetrized matrix.
std::vector<double> symmetric_eigenvalues(const Eigen::MatrixXd& m);

/// (mu_1, mu_2) at the 2-cluster equilibrium of the 3-cluster system on the
/// side where the two clusters other than `side` (zero-based) coincide.
std::pair<double, double> three_cluster_boundary_eigenvalues(
    const std::array<double, 3>& alpha, std::size_t side);

/// Closed triangle sum_m alpha_m exp(i x_m) = 0, normalized so that
/// sum_m alpha_m x_m = 0, with the gap x_2 - x_1 taken in (0, pi).
/// Throws Error{no_linkage} unless every alpha_m < 1/2 (after scaling to
/// unit sum).
std::array<double, 3> solve_3bar_linkage(const std::array<double, 3>& alpha);

enum class StateClass { non_equilibrium, synchrony, two_cluster, linkage };

const char* to_string(StateClass kind) noexcept;

struct Classification {
  StateClass kind = StateClass::non_equilibrium;
  std::vector<std::size_t> fat_set;  ///< two_cluster only
  double R = 0.0;
};

Classification classify_state(std::span<const double> angles,
                              double tol = kClassifyTolerance);

/// Proximity test used on integration endpoints: if every angle lies within
/// `tol` of Psi or Psi + pi and the Psi side is a strict majority, returns
/// that side as the fat set (all indices when nothing sits at Psi + pi).
std::optional<std::vector<std::size_t>> nearest_two_cluster(
    std::span<const double> angles, double tol);

/// Sup-norm distance from `angles` to the orbit of `eq` under uniform
/// rotation, comparing modulo 2 pi.
double distance_to_equilibrium(std::span<const double> angles, const Equilibrium& eq);

}  // namespace khet
