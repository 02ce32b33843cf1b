// Copyright 2026 The khet Authors
// SPDX-License-Identifier: Apache-2.0

// Rebellion heteroclinic orbits between 2-cluster equilibria.
//
// A rebellion splits a rebel cluster off the slim cluster of the source
// equilibrium and lets it join the fat cluster of the target. Orbits are
// traced backwards in time from a small perturbation of the target along its
// stable direction until the rebel lands back on the slim cluster.
//
// 3-cluster labeling throughout: cluster 1 is the source fat set J-, cluster 2
// the rebels J+ \ J-, cluster 3 the target slim set J+^c. A right rebellion
// (symbol +) keeps x1 < x2 < x3 < x1 + 2 pi, a left rebellion (symbol -)
// keeps x1 < x3 < x2 < x1 + 2 pi, modulo 2 pi.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "khet/core_model.hpp"
#include "khet/equilibria.hpp"
#include "khet/integrator.hpp"

namespace khet {

enum class RebellionSymbol : int { left = -1, right = +1 };

constexpr int sign_of(RebellionSymbol s) noexcept { return static_cast<int>(s); }
constexpr char to_char(RebellionSymbol s) noexcept {
  return s == RebellionSymbol::right ? '+' : '-';
}

class SymbolSequence {
 public:
  explicit SymbolSequence(std::vector<RebellionSymbol> symbols);
  /// Parses a word over {+, -}, e.g. "+-+--+-+++".
  static SymbolSequence parse(std::string_view word);

  std::size_t size() const noexcept { return symbols_.size(); }
  RebellionSymbol operator[](std::size_t i) const { return symbols_.at(i); }
  const std::vector<RebellionSymbol>& symbols() const noexcept { return symbols_; }
  std::string str() const;
  int sign_sum() const noexcept;

 private:
  std::vector<RebellionSymbol> symbols_;
};

using ThreeFractions = std::array<double, 3>;

/// Numerical settings shared by traces, concatenations and swarms.
struct RebellionOptions {
  double step = 1e-2;
  double eps_mag = 1e-2;
  double delta_stop = 1e-2;
  std::size_t max_steps = 10'000'000;
  std::size_t record_every = 1;
  /// Largest accepted endpoint distance to the source equilibrium.
  double tau_eq = 5e-2;
};

/// Target 2-cluster (x+, x+, x+ + pi) with x+ = (alpha1 + alpha2 - 1) pi.
std::array<double, 3> rebellion_target(const ThreeFractions& alpha);

/// Target plus (eps1, eps2, 0) with eps2 = s * eps_mag and
/// alpha1 eps1 + alpha2 eps2 = 0.
std::array<double, 3> perturb_near_target(const ThreeFractions& alpha,
                                          RebellionSymbol s, double eps_mag);

/// Sum over l of s_l alpha2_l pi.
double predicted_phase_shift(const SymbolSequence& s, std::span<const double> alpha2);

/// True when the 3-cluster point has the cyclic order required by `s`.
bool has_rebellion_ordering(std::span<const double> x, RebellionSymbol s);

struct RebellionResult {
  ThreeFractions alpha{};
  RebellionSymbol symbol = RebellionSymbol::right;
  /// Forward-ordered 3-cluster trajectory; times run from stop_time up to 0.
  Trajectory trajectory;
  double observed_shift = 0.0;
  double predicted_shift = 0.0;
  /// Finite negative time at which the backward run stopped.
  double stop_time = 0.0;
  /// Endpoint distance to the source 2-cluster, modulo rotation.
  double source_distance = 0.0;
  /// Fat fraction recovered from the endpoint.
  double source_fat_fraction = 0.0;

  // Filled when the rebellion was posed on index sets.
  std::optional<Partition> partition;
  std::optional<Equilibrium> source;
  std::optional<Equilibrium> target;
  std::vector<std::size_t> observed_source_fat_set;
};

/// Requires 1/2 < alpha1 < 1, alpha2 > 0, alpha3 >= 0 summing to 1. alpha3 = 0
/// is the final 2-cluster transient into synchrony (x3 is then a weightless
/// marker at the antipode). Throws non_convergence, wrong_basin or
/// ordering_violation.
RebellionResult trace_rebellion(const ThreeFractions& alpha, RebellionSymbol s,
                                const RebellionOptions& options = {});

/// Same, posed on fat sets J- strictly inside J+ (zero-based).
RebellionResult trace_rebellion(std::size_t n, std::span<const std::size_t> fat_source,
                                std::span<const std::size_t> fat_target,
                                RebellionSymbol s, const RebellionOptions& options = {});

struct ConcatResult {
  std::size_t n = 0;
  SymbolSequence symbols{{RebellionSymbol::right}};
  /// J_0 subset J_1 subset ... subset J_n.
  std::vector<std::vector<std::size_t>> fat_sets;
  std::vector<std::size_t> rebels;
  /// Forward order: segment l goes from Theta_{l-1} to Theta_l.
  std::vector<RebellionResult> segments;
  /// Full phase-space orbit, time from 0 upwards.
  Trajectory stitched;
  std::vector<double> segment_start_times;
  /// Uniform shift applied to each segment to join it to its predecessor.
  std::vector<double> segment_offsets;
  /// Largest per-oscillator jump at a junction, after 2 pi bookkeeping.
  double max_junction_jump = 0.0;
  double cumulative_shift = 0.0;
  double predicted_cumulative_shift = 0.0;
  EquilibriumClass final_class = EquilibriumClass::two_cluster;
};

/// One-man rebellions J_0 -> J_n following `symbols`. The rebel of each step
/// is the lowest index of the current slim set. Segment failures are rethrown
/// with their segment number.
ConcatResult concat_rebellions(std::size_t n, std::span<const std::size_t> initial_fat,
                               const SymbolSequence& symbols,
                               const RebellionOptions& options = {});

struct SwarmSpec {
  std::size_t n = 0;
  std::vector<std::size_t> fat_source;  ///< J-
  std::vector<std::size_t> fat_target;  ///< J+, with nonempty complement
  /// Clusters 2..m_star are right rebels, m_star+1..M-1 left rebels.
  std::size_t m_star = 1;
  double epsilon = 1e-2;
  /// One-sided swarm: offset the rebel mean instead of splitting by m_star.
  std::optional<RebellionSymbol> unilateral;
  /// Randomizes the rebel offsets (signs and ordering are kept).
  std::optional<std::uint64_t> seed;
};

/// Cluster layout of a swarm: J-, one block per rebel (ascending index), J+^c.
Partition swarm_partition(const SwarmSpec& spec);

/// Rebel offsets xi over J+ \ J- in ascending index order (before epsilon).
std::vector<double> swarm_offsets(const SwarmSpec& spec);

/// Perturbed target state inside Fix(S_{J-}) and Fix(S_{J+^c}).
std::vector<double> swarm_initial_condition(const SwarmSpec& spec);

struct SwarmResult {
  SwarmSpec spec;
  Partition partition{1, {{0}}};
  std::size_t right_count = 0;
  std::size_t left_count = 0;
  /// Forward-ordered full state, shifted so every slim angle at the source
  /// sits on the sheet of x1 + pi and the mean angle is zero.
  Trajectory trajectory;
  double stop_time = 0.0;
  double source_distance = 0.0;
  double observed_shift = 0.0;
  /// (right - left) pi / N, with right/left counted by cluster index m.
  double predicted_shift = 0.0;
  /// The opposite convention, right rebels counted as s = -.
  double predicted_shift_swapped = 0.0;
  double min_rebel_gap = 0.0;
  double max_fix_spread = 0.0;
  /// Cluster angles at the source and the target ends of the trajectory.
  std::vector<double> source_phases;
  std::vector<double> target_phases;
};

SwarmResult run_swarm(const SwarmSpec& spec, const RebellionOptions& options = {});

}  // namespace khet
