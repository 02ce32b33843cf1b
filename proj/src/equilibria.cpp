// Copyright 2026 The khet Authors
// SPDX-License-Identifier: Apache-2.0

#include "khet/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <sstream>

#include "khet/core_model.hpp"
#include "khet/error.hpp"

namespace khet {

const char* to_string(EquilibriumClass kind) noexcept {
  switch (kind) {
    case EquilibriumClass::synchrony: return "synchrony";
    case EquilibriumClass::two_cluster: return "two_cluster";
    case EquilibriumClass::linkage: return "linkage";
  }
  return "unknown";
}

const char* to_string(StateClass kind) noexcept {
  switch (kind) {
    case StateClass::non_equilibrium: return "non_equilibrium";
    case StateClass::synchrony: return "synchrony";
    case StateClass::two_cluster: return "two_cluster";
    case StateClass::linkage: return "linkage";
  }
  return "unknown";
}

std::vector<double> Spectrum::expanded() const {
  std::vector<double> out;
  out.reserve(space_dim);
  for (const auto& e : eigenvalues) out.insert(out.end(), e.multiplicity, e.value);
  std::sort(out.begin(), out.end());
  return out;
}

Equilibrium synchrony_equilibrium(std::size_t n) {
  if (n < 2) throw Error(ErrorCode::invalid_argument, "need N >= 2");
  Equilibrium eq;
  eq.kind = EquilibriumClass::synchrony;
  eq.fat_set.resize(n);
  std::iota(eq.fat_set.begin(), eq.fat_set.end(), std::size_t{0});
  eq.alpha = 1.0;
  eq.R = 1.0;
  eq.representative.assign(n, 0.0);
  return eq;
}

Equilibrium two_cluster_equilibrium(std::span<const std::size_t> fat_set, std::size_t n) {
  if (n < 2) throw Error(ErrorCode::invalid_argument, "need N >= 2");
  std::vector<std::size_t> fat(fat_set.begin(), fat_set.end());
  std::sort(fat.begin(), fat.end());
  if (std::adjacent_find(fat.begin(), fat.end()) != fat.end() ||
      (!fat.empty() && fat.back() >= n)) {
    throw Error(ErrorCode::invalid_argument, "fat set has repeated or out-of-range indices");
  }
  if (2 * fat.size() <= n) {
    std::ostringstream msg;
    msg << "fat set of size " << fat.size() << " is not a strict majority of N=" << n;
    throw Error(ErrorCode::invalid_fat_set, msg.str());
  }
  if (fat.size() == n) {
    throw Error(ErrorCode::invalid_fat_set,
                "fat set covers all oscillators; use the synchrony equilibrium");
  }
  Equilibrium eq;
  eq.kind = EquilibriumClass::two_cluster;
  eq.alpha = static_cast<double>(fat.size()) / static_cast<double>(n);
  eq.R = 2.0 * eq.alpha - 1.0;
  eq.representative.assign(n, eq.alpha * kPi);
  for (std::size_t j : fat) eq.representative[j] = (eq.alpha - 1.0) * kPi;
  eq.fat_set = std::move(fat);
  return eq;
}

int morse_index(const Equilibrium& eq) {
  switch (eq.kind) {
    case EquilibriumClass::synchrony: return 0;
    case EquilibriumClass::two_cluster:
      return static_cast<int>(eq.oscillator_count() - eq.fat_set.size());
    case EquilibriumClass::linkage: break;
  }
  throw Error(ErrorCode::unsupported, "Morse index of a linkage equilibrium is not supported");
}

Spectrum linearization_spectrum(const Equilibrium& eq) {
  const std::size_t n = eq.oscillator_count();
  Spectrum sp;
  sp.space_dim = n - 1;
  switch (eq.kind) {
    case EquilibriumClass::synchrony:
      sp.eigenvalues.push_back({-1.0, n - 1});
      return sp;
    case EquilibriumClass::two_cluster: {
      const std::size_t n1 = eq.fat_set.size();
      const std::size_t n2 = n - n1;
      // Relative motion of the two clusters, then the two intra-cluster blocks.
      sp.eigenvalues.push_back({1.0, 1});
      if (n1 > 1) sp.eigenvalues.push_back({-eq.R, n1 - 1});
      if (n2 > 1) sp.eigenvalues.push_back({eq.R, n2 - 1});
      return sp;
    }
    case EquilibriumClass::linkage: break;
  }
  throw Error(ErrorCode::unsupported, "spectrum of a linkage equilibrium is not supported");
}

Eigen::MatrixXd zero_mean_basis(std::size_t n) {
  // Helmert basis.
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                            static_cast<Eigen::Index>(n - 1));
  for (std::size_t k = 1; k < n; ++k) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(k * (k + 1)));
    const auto col = static_cast<Eigen::Index>(k - 1);
    for (std::size_t i = 0; i < k; ++i) q(static_cast<Eigen::Index>(i), col) = scale;
    q(static_cast<Eigen::Index>(k), col) = -static_cast<double>(k) * scale;
  }
  return q;
}

Eigen::MatrixXd jacobian_fd(std::span<const double> angles, double h) {
  if (!(h > 0.0)) throw Error(ErrorCode::invalid_argument, "finite-difference step must be positive");
  const std::size_t n = angles.size();
  const Eigen::MatrixXd q = zero_mean_basis(n);
  const auto dim = static_cast<Eigen::Index>(n - 1);
  Eigen::MatrixXd jac(dim, dim);
  std::vector<double> plus(n), minus(n), fp(n), fm(n);
  for (Eigen::Index k = 0; k < dim; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      const double d = h * q(static_cast<Eigen::Index>(i), k);
      plus[i] = angles[i] + d;
      minus[i] = angles[i] - d;
    }
    vector_field(plus, fp);
    vector_field(minus, fm);
    Eigen::VectorXd diff(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      diff(static_cast<Eigen::Index>(i)) = (fp[i] - fm[i]) / (2.0 * h);
    }
    jac.col(k) = q.transpose() * diff;
  }
  return jac;
}

Eigen::MatrixXd cluster_jacobian_fd(std::span<const double> alpha,
                                    std::span<const double> x, double h) {
  if (!(h > 0.0)) throw Error(ErrorCode::invalid_argument, "finite-difference step must be positive");
  const std::size_t m = x.size();
  Eigen::MatrixXd jac(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  std::vector<double> plus(x.begin(), x.end()), minus(x.begin(), x.end()), fp(m), fm(m);
  for (std::size_t k = 0; k < m; ++k) {
    plus[k] = x[k] + h;
    minus[k] = x[k] - h;
    cluster_vector_field(alpha, plus, fp);
    cluster_vector_field(alpha, minus, fm);
    for (std::size_t i = 0; i < m; ++i) {
      jac(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = (fp[i] - fm[i]) / (2.0 * h);
    }
    plus[k] = x[k];
    minus[k] = x[k];
  }
  return jac;
}

std::vector<double> symmetric_eigenvalues(const Eigen::MatrixXd& m) {
  const Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd ev = solver.eigenvalues();
  std::vector<double> out(ev.data(), ev.data() + ev.size());
  std::sort(out.begin(), out.end());
  return out;
}

std::pair<double, double> three_cluster_boundary_eigenvalues(
    const std::array<double, 3>& alpha, std::size_t side) {
  if (side > 2) throw Error(ErrorCode::invalid_argument, "side must be 0, 1 or 2");
  return {1.0, 2.0 * alpha[side] - 1.0};
}

std::array<double, 3> solve_3bar_linkage(const std::array<double, 3>& alpha) {
  const double total = alpha[0] + alpha[1] + alpha[2];
  if (!(alpha[0] > 0.0 && alpha[1] > 0.0 && alpha[2] > 0.0) || !std::isfinite(total)) {
    throw Error(ErrorCode::invalid_argument, "linkage fractions must be positive");
  }
  const double a1 = alpha[0] / total, a2 = alpha[1] / total, a3 = alpha[2] / total;
  if (!(a1 < 0.5 && a2 < 0.5 && a3 < 0.5)) {
    std::ostringstream msg;
    msg << "no 3-bar linkage: fractions (" << a1 << ", " << a2 << ", " << a3
        << ") violate the triangle inequality";
    throw Error(ErrorCode::no_linkage, msg.str());
  }
  // |a1 + a2 e^{i phi}| = a3 fixes the gap phi = x2 - x1.
  const double c = std::clamp((a3 * a3 - a1 * a1 - a2 * a2) / (2.0 * a1 * a2), -1.0, 1.0);
  const double phi = std::acos(c);
  const std::complex<double> closing = -(a1 + a2 * std::polar(1.0, phi));
  std::array<double, 3> x{0.0, phi, std::arg(closing)};
  const double shift = a1 * x[0] + a2 * x[1] + a3 * x[2];
  for (double& v : x) v -= shift;
  return x;
}

Classification classify_state(std::span<const double> angles, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorCode::invalid_argument, "tolerance must be positive");
  Classification out;
  const std::vector<double> f = vector_field(angles);
  double fmax = 0.0;
  for (double v : f) fmax = std::max(fmax, std::abs(v));
  const OrderParameter op = order_parameter(angles);
  out.R = op.R;
  if (fmax > tol) return out;
  if (op.R > 1.0 - tol) {
    out.kind = StateClass::synchrony;
    out.fat_set.resize(angles.size());
    std::iota(out.fat_set.begin(), out.fat_set.end(), std::size_t{0});
    return out;
  }
  if (op.R < tol) {
    out.kind = StateClass::linkage;
    return out;
  }
  for (std::size_t j = 0; j < angles.size(); ++j) {
    if (std::abs(wrap_angle(angles[j] - op.Psi)) <= tol) {
      out.fat_set.push_back(j);
    } else if (std::abs(wrap_angle(angles[j] - op.Psi - kPi)) > tol) {
      std::ostringstream msg;
      msg << "stationary state with R=" << op.R << " has angle " << j + 1
          << " away from both Psi and Psi+pi";
      throw Error(ErrorCode::classification_inconsistency, msg.str());
    }
  }
  out.kind = StateClass::two_cluster;
  return out;
}

std::optional<std::vector<std::size_t>> nearest_two_cluster(
    std::span<const double> angles, double tol) {
  const OrderParameter op = order_parameter(angles);
  if (op.r_is_zero) return std::nullopt;
  std::vector<std::size_t> fat;
  for (std::size_t j = 0; j < angles.size(); ++j) {
    if (std::abs(wrap_angle(angles[j] - op.Psi)) <= tol) {
      fat.push_back(j);
    } else if (std::abs(wrap_angle(angles[j] - op.Psi - kPi)) > tol) {
      return std::nullopt;
    }
  }
  if (2 * fat.size() <= angles.size()) return std::nullopt;
  return fat;
}

double distance_to_equilibrium(std::span<const double> angles, const Equilibrium& eq) {
  if (angles.size() != eq.oscillator_count()) {
    throw Error(ErrorCode::dimension, "state and equilibrium sizes differ");
  }
  std::complex<double> z{0.0, 0.0};
  for (std::size_t j = 0; j < angles.size(); ++j) {
    z += std::polar(1.0, angles[j] - eq.representative[j]);
  }
  const double psi = std::arg(z);
  double dist = 0.0;
  for (std::size_t j = 0; j < angles.size(); ++j) {
    dist = std::max(dist, std::abs(wrap_angle(angles[j] - eq.representative[j] - psi)));
  }
  return dist;
}

}  // namespace khet
