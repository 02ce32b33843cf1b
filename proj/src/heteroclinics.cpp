// Copyright 2026 The khet Authors
// SPDX-License-Identifier: Apache-2.0

#include "khet/heteroclinics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <random>
#include <sstream>

#include "khet/error.hpp"

namespace khet {
namespace {

std::vector<std::size_t> sorted_unique_set(std::span<const std::size_t> set, std::size_t n,
                                           const char* name) {
  std::vector<std::size_t> out(set.begin(), set.end());
  std::sort(out.begin(), out.end());
  if (std::adjacent_find(out.begin(), out.end()) != out.end() ||
      (!out.empty() && out.back() >= n)) {
    std::ostringstream msg;
    msg << name << " has repeated or out-of-range indices";
    throw Error(ErrorCode::invalid_argument, msg.str());
  }
  return out;
}

std::vector<std::size_t> set_difference(const std::vector<std::size_t>& a,
                                        const std::vector<std::size_t>& b) {
  std::vector<std::size_t> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<std::size_t> complement(const std::vector<std::size_t>& set, std::size_t n) {
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), std::size_t{0});
  return set_difference(all, set);
}

void check_options(const RebellionOptions& o) {
  if (!(o.step > 0.0) || !(o.eps_mag > 0.0) || !(o.delta_stop > 0.0) || !(o.tau_eq > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "step, eps_mag, delta_stop and tau_eq must be positive");
  }
  if (o.max_steps < 1 || o.record_every < 1) {
    throw Error(ErrorCode::invalid_argument, "max_steps and record_every must be at least 1");
  }
}

void check_fractions(const ThreeFractions& a) {
  const double total = a[0] + a[1] + a[2];
  if (!(std::abs(total - 1.0) <= 1e-12)) {
    throw Error(ErrorCode::invalid_argument, "cluster fractions must sum to 1");
  }
  if (!(a[0] > 0.5 && a[0] < 1.0) || !(a[1] > 0.0) || !(a[2] >= 0.0)) {
    std::ostringstream msg;
    msg << "rebellion needs 1/2 < alpha1 < 1, alpha2 > 0, alpha3 >= 0; got (" << a[0] << ", "
        << a[1] << ", " << a[2] << ")";
    throw Error(ErrorCode::invalid_argument, msg.str());
  }
}

// 3-cluster point -> full state; a missing third block means alpha3 = 0.
std::vector<double> lift_three(const Partition& p, std::span<const double> x) {
  return lift(p, x.first(p.cluster_count()));
}

}  // namespace

SymbolSequence::SymbolSequence(std::vector<RebellionSymbol> symbols)
    : symbols_(std::move(symbols)) {
  if (symbols_.empty()) throw Error(ErrorCode::invalid_argument, "symbol sequence is empty");
}

SymbolSequence SymbolSequence::parse(std::string_view word) {
  std::vector<RebellionSymbol> out;
  for (char c : word) {
    if (c == '+') {
      out.push_back(RebellionSymbol::right);
    } else if (c == '-') {
      out.push_back(RebellionSymbol::left);
    } else {
      std::ostringstream msg;
      msg << "invalid rebellion symbol '" << c << "' (expected + or -)";
      throw Error(ErrorCode::invalid_argument, msg.str());
    }
  }
  return SymbolSequence(std::move(out));
}

std::string SymbolSequence::str() const {
  std::string out;
  for (RebellionSymbol s : symbols_) out.push_back(to_char(s));
  return out;
}

int SymbolSequence::sign_sum() const noexcept {
  int sum = 0;
  for (RebellionSymbol s : symbols_) sum += sign_of(s);
  return sum;
}

std::array<double, 3> rebellion_target(const ThreeFractions& alpha) {
  const double x_plus = (alpha[0] + alpha[1] - 1.0) * kPi;
  return {x_plus, x_plus, x_plus + kPi};
}

std::array<double, 3> perturb_near_target(const ThreeFractions& alpha, RebellionSymbol s,
                                          double eps_mag) {
  std::array<double, 3> x = rebellion_target(alpha);
  const double eps2 = sign_of(s) * eps_mag;
  const double eps1 = -alpha[1] * eps2 / alpha[0];
  x[0] += eps1;
  x[1] += eps2;
  return x;
}

double predicted_phase_shift(const SymbolSequence& s, std::span<const double> alpha2) {
  if (alpha2.size() != s.size()) {
    throw Error(ErrorCode::dimension, "one rebel fraction per symbol is required");
  }
  double total = 0.0;
  for (std::size_t l = 0; l < s.size(); ++l) total += sign_of(s[l]) * alpha2[l];
  return total * kPi;
}

bool has_rebellion_ordering(std::span<const double> x, RebellionSymbol s) {
  const double rebel = wrap_positive(x[1] - x[0]);
  const double slim = wrap_positive(x[2] - x[0]);
  if (rebel == 0.0 || slim == 0.0) return false;
  return s == RebellionSymbol::right ? rebel < slim : slim < rebel;
}

RebellionResult trace_rebellion(const ThreeFractions& alpha, RebellionSymbol s,
                                const RebellionOptions& options) {
  check_fractions(alpha);
  check_options(options);

  const std::array<double, 3> start = perturb_near_target(alpha, s, options.eps_mag);
  IntegrationConfig cfg;
  cfg.step = options.step;
  cfg.direction = Direction::backward;
  cfg.max_steps = options.max_steps;
  cfg.record_every = options.record_every;

  const std::span<const double> weights(alpha);
  auto rate = [weights](std::span<const double> x, std::span<double> dx) {
    cluster_vector_field(weights, x, dx);
  };
  auto stop = [&](std::span<const double> x) {
    return std::abs(wrap_angle(x[1] - x[2])) < options.delta_stop;
  };
  auto observe = [weights](std::span<const double> x) {
    return order_parameter(weights, x).R;
  };

  Trajectory backward = integrate(rate, {start.begin(), start.end()}, cfg, stop, observe);
  if (backward.stop_reason != StopReason::condition_met) {
    std::ostringstream msg;
    msg << "backward run did not reach |x2 - x3| < " << options.delta_stop << " within "
        << options.max_steps << " steps";
    throw Error(ErrorCode::non_convergence, msg.str());
  }

  RebellionResult res;
  res.alpha = alpha;
  res.symbol = s;
  res.stop_time = backward.final_time();
  const std::vector<double> end = backward.final_state();

  // Endpoint must sit next to the source: cluster 1 alone at Psi, the rest at
  // Psi + pi. Weightless clusters are ignored.
  const OrderParameter op = order_parameter(weights, end);
  double fat_fraction = 0.0;
  bool cluster1_fat = false;
  for (std::size_t m = 0; m < 3; ++m) {
    if (alpha[m] == 0.0) continue;
    const double d0 = std::abs(wrap_angle(end[m] - op.Psi));
    const double d1 = std::abs(wrap_angle(end[m] - op.Psi - kPi));
    if (d0 <= options.tau_eq) {
      fat_fraction += alpha[m];
      if (m == 0) cluster1_fat = true;
    } else if (d1 > options.tau_eq) {
      fat_fraction = -1.0;
      break;
    }
  }
  res.source_fat_fraction = fat_fraction;
  {
    const std::array<double, 3> rep{end[0], end[0] + kPi, end[0] + kPi};
    std::complex<double> z{0.0, 0.0};
    for (std::size_t m = 0; m < 3; ++m) z += alpha[m] * std::polar(1.0, end[m] - rep[m]);
    const double psi = std::arg(z);
    double dist = 0.0;
    for (std::size_t m = 0; m < 3; ++m) {
      if (alpha[m] == 0.0) continue;
      dist = std::max(dist, std::abs(wrap_angle(end[m] - rep[m] - psi)));
    }
    res.source_distance = dist;
  }
  if (!cluster1_fat || std::abs(fat_fraction - alpha[0]) > 1e-12 ||
      res.source_distance > options.tau_eq) {
    std::ostringstream msg;
    msg << "backward endpoint at t=" << res.stop_time
        << " is not the source 2-cluster (distance " << res.source_distance
        << ", fat fraction " << fat_fraction << ")";
    throw Error(ErrorCode::wrong_basin, msg.str());
  }

  res.trajectory = reversed(std::move(backward));
  for (std::size_t k = 0; k < res.trajectory.size(); ++k) {
    if (!has_rebellion_ordering(res.trajectory.states[k], s)) {
      std::ostringstream msg;
      msg << (s == RebellionSymbol::right ? "right" : "left")
          << " rebellion ordering lost at t=" << res.trajectory.times[k];
      throw Error(ErrorCode::ordering_violation, msg.str());
    }
  }
  res.observed_shift = res.trajectory.final_state()[0] - res.trajectory.states.front()[0];
  res.predicted_shift = sign_of(s) * alpha[1] * kPi;
  return res;
}

RebellionResult trace_rebellion(std::size_t n, std::span<const std::size_t> fat_source,
                                std::span<const std::size_t> fat_target, RebellionSymbol s,
                                const RebellionOptions& options) {
  if (n < 2) throw Error(ErrorCode::invalid_argument, "need N >= 2");
  const auto jm = sorted_unique_set(fat_source, n, "source fat set");
  const auto jp = sorted_unique_set(fat_target, n, "target fat set");
  if (2 * jm.size() <= n) {
    throw Error(ErrorCode::invalid_fat_set, "source set is not a strict majority");
  }
  if (!std::includes(jp.begin(), jp.end(), jm.begin(), jm.end()) || jp.size() == jm.size()) {
    throw Error(ErrorCode::invalid_fat_set,
                "target fat set must strictly contain the source fat set");
  }
  std::vector<std::vector<std::size_t>> blocks{jm, set_difference(jp, jm)};
  const std::vector<std::size_t> slim = complement(jp, n);
  if (!slim.empty()) blocks.push_back(slim);
  Partition partition(n, std::move(blocks));

  const double nd = static_cast<double>(n);
  const ThreeFractions alpha{static_cast<double>(jm.size()) / nd,
                             static_cast<double>(jp.size() - jm.size()) / nd,
                             static_cast<double>(slim.size()) / nd};
  RebellionResult res = trace_rebellion(alpha, s, options);

  res.source = two_cluster_equilibrium(jm, n);
  res.target = slim.empty() ? synchrony_equilibrium(n) : two_cluster_equilibrium(jp, n);
  const std::vector<double> end = lift_three(partition, res.trajectory.states.front());
  res.source_distance = distance_to_equilibrium(end, *res.source);
  const auto observed = nearest_two_cluster(end, options.tau_eq);
  if (!observed || *observed != jm || res.source_distance > options.tau_eq) {
    throw Error(ErrorCode::wrong_basin,
                "backward endpoint does not classify as the source fat set");
  }
  res.observed_source_fat_set = *observed;
  res.partition = std::move(partition);
  return res;
}

ConcatResult concat_rebellions(std::size_t n, std::span<const std::size_t> initial_fat,
                               const SymbolSequence& symbols, const RebellionOptions& options) {
  if (n < 2) throw Error(ErrorCode::invalid_argument, "need N >= 2");
  check_options(options);
  const auto j0 = sorted_unique_set(initial_fat, n, "initial fat set");
  if (2 * j0.size() <= n) {
    throw Error(ErrorCode::invalid_fat_set, "initial fat set is not a strict majority");
  }
  const std::size_t len = symbols.size();
  if (len > n - j0.size()) {
    std::ostringstream msg;
    msg << len << " one-man rebellions exceed the slim cluster size " << n - j0.size();
    throw Error(ErrorCode::invalid_argument, msg.str());
  }

  ConcatResult out;
  out.n = n;
  out.symbols = symbols;
  out.fat_sets.push_back(j0);
  for (std::size_t l = 0; l < len; ++l) {
    const auto slim = complement(out.fat_sets.back(), n);
    const std::size_t rebel = slim.front();
    auto next = out.fat_sets.back();
    next.insert(std::upper_bound(next.begin(), next.end(), rebel), rebel);
    out.rebels.push_back(rebel);
    out.fat_sets.push_back(std::move(next));
  }

  // Backwards from the final target, one segment per step.
  out.segments.resize(len);
  for (std::size_t l = len; l-- > 0;) {
    try {
      out.segments[l] = trace_rebellion(n, out.fat_sets[l], out.fat_sets[l + 1], symbols[l], options);
    } catch (const Error& e) {
      std::ostringstream msg;
      msg << "segment " << l + 1 << " (rebel " << out.rebels[l] + 1 << "): " << e.what();
      throw Error(e.code(), msg.str());
    }
  }

  // Stitch in forward time, joining segments by a uniform shift that keeps
  // the J_0 phase continuous plus per-oscillator multiples of 2 pi.
  const std::size_t anchor = j0.front();
  Trajectory& st = out.stitched;
  st.stop_reason = StopReason::completed;
  double t0 = 0.0;
  for (std::size_t l = 0; l < len; ++l) {
    const RebellionResult& seg = out.segments[l];
    const Partition& part = *seg.partition;
    std::vector<double> offsets(n, 0.0);
    double uniform = 0.0;
    if (l > 0) {
      const std::vector<double>& prev = st.states.back();
      const std::vector<double> first = lift_three(part, seg.trajectory.states.front());
      uniform = prev[anchor] - first[anchor];
      for (std::size_t j = 0; j < n; ++j) {
        const double k = std::round((prev[j] - first[j] - uniform) / kTwoPi);
        offsets[j] = uniform + kTwoPi * k;
        out.max_junction_jump =
            std::max(out.max_junction_jump, std::abs(prev[j] - first[j] - offsets[j]));
      }
      t0 = st.times.back() + options.step;
    }
    out.segment_offsets.push_back(uniform);
    out.segment_start_times.push_back(t0);
    for (std::size_t k = 0; k < seg.trajectory.size(); ++k) {
      std::vector<double> full = lift_three(part, seg.trajectory.states[k]);
      for (std::size_t j = 0; j < n; ++j) full[j] += offsets[j];
      st.times.push_back(t0 + (seg.trajectory.times[k] - seg.stop_time));
      st.R_values.push_back(order_parameter(full).R);
      st.states.push_back(std::move(full));
    }
    st.steps_taken += seg.trajectory.steps_taken;
  }

  out.cumulative_shift = st.final_state()[anchor] - st.states.front()[anchor];
  out.predicted_cumulative_shift = kPi * symbols.sign_sum() / static_cast<double>(n);
  out.final_class = out.fat_sets.back().size() == n ? EquilibriumClass::synchrony
                                                    : EquilibriumClass::two_cluster;
  return out;
}

Partition swarm_partition(const SwarmSpec& spec) {
  const std::size_t n = spec.n;
  if (n < 3) throw Error(ErrorCode::invalid_argument, "a swarm needs N >= 3");
  const auto jm = sorted_unique_set(spec.fat_source, n, "source fat set");
  const auto jp = sorted_unique_set(spec.fat_target, n, "target fat set");
  if (2 * jm.size() <= n) {
    throw Error(ErrorCode::invalid_fat_set, "source set is not a strict majority");
  }
  if (!std::includes(jp.begin(), jp.end(), jm.begin(), jm.end()) || jp.size() == jm.size()) {
    throw Error(ErrorCode::invalid_fat_set,
                "target fat set must strictly contain the source fat set");
  }
  if (jp.size() == n) {
    throw Error(ErrorCode::invalid_fat_set, "swarm target needs a nonempty slim cluster");
  }
  std::vector<std::vector<std::size_t>> blocks{jm};
  for (std::size_t j : set_difference(jp, jm)) blocks.push_back({j});
  blocks.push_back(complement(jp, n));
  Partition partition(n, std::move(blocks));
  const std::size_t m_total = partition.cluster_count();
  if (!spec.unilateral && (spec.m_star < 1 || spec.m_star > m_total - 1)) {
    std::ostringstream msg;
    msg << "m_star must lie in [1, " << m_total - 1 << "]";
    throw Error(ErrorCode::invalid_argument, msg.str());
  }
  if (!(spec.epsilon > 0.0)) throw Error(ErrorCode::invalid_argument, "epsilon must be positive");
  return partition;
}

std::vector<double> swarm_offsets(const SwarmSpec& spec) {
  const Partition partition = swarm_partition(spec);
  const std::size_t rebels = partition.cluster_count() - 2;
  std::mt19937_64 rng(spec.seed.value_or(0));
  std::uniform_real_distribution<double> unit(0.5, 1.5);

  // Ascending magnitudes; distinct so no two rebels share a cluster.
  auto graded = [&](std::size_t count) {
    std::vector<double> mags(count);
    for (std::size_t k = 0; k < count; ++k) {
      mags[k] = spec.seed ? unit(rng) : static_cast<double>(k + 1);
    }
    std::sort(mags.begin(), mags.end());
    return mags;
  };

  std::vector<double> xi(rebels);
  if (spec.unilateral) {
    const double side = sign_of(*spec.unilateral);
    const auto mags = graded(rebels);
    const double mean = std::accumulate(mags.begin(), mags.end(), 0.0) / static_cast<double>(rebels);
    const double spread = std::max(mags.back() - mags.front(), 1.0);
    // Small zero-average spread on top of a unit mean offset.
    for (std::size_t k = 0; k < rebels; ++k) {
      xi[k] = side + 0.1 * (mags[k] - mean) / spread;
    }
    return xi;
  }

  const std::size_t right = spec.m_star - 1;
  const std::size_t left = rebels - right;
  if (right == 0 || left == 0) {
    throw Error(ErrorCode::unconstructible,
                "all rebels on one side cannot have a zero-average offset; use unilateral mode");
  }
  const auto pos = graded(right);
  const auto neg = graded(left);
  const double pos_sum = std::accumulate(pos.begin(), pos.end(), 0.0);
  const double neg_sum = std::accumulate(neg.begin(), neg.end(), 0.0);
  for (std::size_t k = 0; k < right; ++k) xi[k] = pos[k] / pos_sum;
  // Left rebels: most negative first, so angles increase with the index.
  for (std::size_t k = 0; k < left; ++k) xi[right + k] = -neg[left - 1 - k] / neg_sum;
  const double scale = std::max(pos.back() / pos_sum, neg.back() / neg_sum);
  for (double& v : xi) v /= scale;
  return xi;
}

std::vector<double> swarm_initial_condition(const SwarmSpec& spec) {
  const Partition partition = swarm_partition(spec);
  const std::vector<double> xi = swarm_offsets(spec);
  const Equilibrium target = two_cluster_equilibrium(spec.fat_target, spec.n);
  std::vector<double> theta = target.representative;
  double rebel_sum = 0.0;
  for (std::size_t k = 0; k < xi.size(); ++k) {
    theta[partition.block(k + 1).front()] += spec.epsilon * xi[k];
    rebel_sum += spec.epsilon * xi[k];
  }
  // Nonzero rebel mean (unilateral mode) is balanced by the J- cluster.
  const double fat_shift = -rebel_sum / static_cast<double>(partition.block_size(0));
  for (std::size_t j : partition.block(0)) theta[j] += fat_shift;
  return theta;
}

SwarmResult run_swarm(const SwarmSpec& spec, const RebellionOptions& options) {
  check_options(options);
  SwarmResult res;
  res.spec = spec;
  res.partition = swarm_partition(spec);
  const Partition& part = res.partition;
  const std::size_t n = spec.n;
  const std::size_t m_total = part.cluster_count();
  const std::size_t rebels = m_total - 2;
  if (spec.unilateral) {
    res.right_count = *spec.unilateral == RebellionSymbol::right ? rebels : 0;
  } else {
    res.right_count = spec.m_star - 1;
  }
  res.left_count = rebels - res.right_count;

  const std::size_t fat_rep = part.block(0).front();
  const std::size_t slim_rep = part.block(m_total - 1).front();

  IntegrationConfig cfg;
  cfg.step = options.step;
  cfg.direction = Direction::backward;
  cfg.max_steps = options.max_steps;
  cfg.record_every = options.record_every;
  auto rate = [](std::span<const double> y, std::span<double> dy) { vector_field(y, dy); };
  const double delta = options.delta_stop;
  auto stop = [&](std::span<const double> y) {
    for (std::size_t m = 1; m < m_total; ++m) {
      const std::size_t j = part.block(m).front();
      if (std::abs(wrap_angle(y[j] - y[fat_rep] - kPi)) >= delta) return false;
    }
    return true;
  };
  auto observe = [](std::span<const double> y) { return order_parameter(y).R; };

  Trajectory backward = integrate(rate, swarm_initial_condition(spec), cfg, stop, observe);
  if (backward.stop_reason != StopReason::condition_met) {
    throw Error(ErrorCode::non_convergence,
                "swarm did not return to a neighborhood of the source within max_steps");
  }
  res.stop_time = backward.final_time();
  const Equilibrium source = two_cluster_equilibrium(spec.fat_source, n);
  res.source_distance = distance_to_equilibrium(backward.final_state(), source);
  if (res.source_distance > options.tau_eq) {
    std::ostringstream msg;
    msg << "swarm endpoint is " << res.source_distance << " away from the source";
    throw Error(ErrorCode::wrong_basin, msg.str());
  }

  // Cyclic order measured from x1: right rebels, slim cluster, left rebels.
  std::vector<std::size_t> order;
  for (std::size_t k = 0; k < res.right_count; ++k) order.push_back(part.block(k + 1).front());
  order.push_back(slim_rep);
  for (std::size_t k = res.right_count; k < rebels; ++k) order.push_back(part.block(k + 1).front());

  res.min_rebel_gap = kTwoPi;
  for (std::size_t s = 0; s < backward.size(); ++s) {
    const auto& y = backward.states[s];
    double prev = 0.0;
    for (std::size_t j : order) {
      const double a = wrap_positive(y[j] - y[fat_rep]);
      if (!(a > prev)) {
        std::ostringstream msg;
        msg << "swarm ordering violated at t=" << backward.times[s] << " (oscillator " << j + 1
            << ")";
        throw Error(ErrorCode::ordering_violation, msg.str());
      }
      if (prev > 0.0) res.min_rebel_gap = std::min(res.min_rebel_gap, a - prev);
      prev = a;
    }
    for (std::size_t m : {std::size_t{0}, m_total - 1}) {
      const auto& blk = part.block(m);
      const auto [lo, hi] = std::minmax_element(
          blk.begin(), blk.end(), [&](std::size_t a, std::size_t b) { return y[a] < y[b]; });
      res.max_fix_spread = std::max(res.max_fix_spread, y[*hi] - y[*lo]);
    }
  }
  if (res.min_rebel_gap <= kClusterTolerance) {
    throw Error(ErrorCode::ordering_violation, "two swarm clusters merged");
  }

  // Put every non-fat oscillator on the x1 + pi sheet at the source, then
  // restore the zero mean.
  std::vector<double> sheet(n, 0.0);
  const auto& src = backward.final_state();
  for (std::size_t j = 0; j < n; ++j) {
    if (part.block_of(j) == 0) continue;
    sheet[j] = -kTwoPi * std::round((src[j] - src[fat_rep] - kPi) / kTwoPi);
  }
  const double mean_shift = std::accumulate(sheet.begin(), sheet.end(), 0.0) / static_cast<double>(n);
  for (auto& y : backward.states) {
    for (std::size_t j = 0; j < n; ++j) y[j] += sheet[j] - mean_shift;
  }

  res.trajectory = reversed(std::move(backward));
  const auto& first = res.trajectory.states.front();
  const auto& last = res.trajectory.final_state();
  for (std::size_t m = 0; m < m_total; ++m) {
    res.source_phases.push_back(first[part.block(m).front()]);
    res.target_phases.push_back(last[part.block(m).front()]);
  }
  res.observed_shift = last[fat_rep] - first[fat_rep];
  res.predicted_shift = (static_cast<double>(res.right_count) - static_cast<double>(res.left_count)) *
                        kPi / static_cast<double>(n);
  res.predicted_shift_swapped = -res.predicted_shift;
  return res;
}

}  // namespace khet
