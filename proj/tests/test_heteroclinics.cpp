// Copyright 2026 The khet Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "khet/core_model.hpp"
#include "khet/equilibria.hpp"
#include "khet/error.hpp"
#include "khet/heteroclinics.hpp"
#include "oracles.hpp"

using namespace khet;

namespace {

std::vector<std::size_t> range(std::size_t lo, std::size_t hi) {
  std::vector<std::size_t> out(hi - lo);
  std::iota(out.begin(), out.end(), lo);
  return out;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode{};
}

const ThreeFractions kAlpha{0.6, 0.2, 0.2};

}  // namespace

TEST_CASE("symbol sequences") {
  const auto s = SymbolSequence::parse("+-+--+-+++");
  CHECK(s.size() == 10);
  CHECK(s.str() == "+-+--+-+++");
  CHECK(s.sign_sum() == 2);
  CHECK(s[1] == RebellionSymbol::left);
  CHECK(code_of([] { SymbolSequence::parse("+x"); }) == ErrorCode::invalid_argument);
  CHECK(code_of([] { SymbolSequence::parse(""); }) == ErrorCode::invalid_argument);
}

TEST_CASE("target and perturbation") {
  const auto t = rebellion_target(kAlpha);
  CHECK(t[0] == doctest::Approx(-0.2 * kPi));
  CHECK(t[1] == t[0]);
  CHECK(t[2] == doctest::Approx(0.8 * kPi));
  for (RebellionSymbol s : {RebellionSymbol::right, RebellionSymbol::left}) {
    const auto x = perturb_near_target(kAlpha, s, 1e-2);
    const double e1 = x[0] - t[0], e2 = x[1] - t[1];
    CHECK(e2 == doctest::Approx(sign_of(s) * 1e-2));
    CHECK(std::abs(kAlpha[0] * e1 + kAlpha[1] * e2) < 1e-15);
    CHECK(x[2] == t[2]);
    CHECK(has_rebellion_ordering(x, s));
    CHECK_FALSE(has_rebellion_ordering(x, s == RebellionSymbol::right ? RebellionSymbol::left
                                                                      : RebellionSymbol::right));
  }
}

TEST_CASE("predicted phase shift") {
  const auto s = SymbolSequence::parse("+-+");
  const std::vector<double> a{0.1, 0.2, 0.3};
  CHECK(predicted_phase_shift(s, a) == doctest::Approx(0.2 * kPi));
  CHECK(code_of([&] { predicted_phase_shift(s, std::vector<double>{0.1}); }) == ErrorCode::dimension);
}

TEST_CASE("ordering predicate") {
  CHECK(has_rebellion_ordering(std::vector<double>{0.0, 1.0, 2.0}, RebellionSymbol::right));
  CHECK(has_rebellion_ordering(std::vector<double>{0.0, 2.0, 1.0}, RebellionSymbol::left));
  // Works modulo 2 pi.
  CHECK(has_rebellion_ordering(std::vector<double>{kTwoPi, 1.0 - kTwoPi, 2.0},
                               RebellionSymbol::right));
  CHECK_FALSE(has_rebellion_ordering(std::vector<double>{0.0, 0.0, 2.0}, RebellionSymbol::right));
}

TEST_CASE("rebellion trace (3,1,1)/5 in both directions") {
  for (RebellionSymbol s : {RebellionSymbol::right, RebellionSymbol::left}) {
    const RebellionResult r = trace_rebellion(kAlpha, s);
    CHECK(r.stop_time < 0.0);
    CHECK(std::isfinite(r.stop_time));
    const auto& src = r.trajectory.states.front();
    CHECK(std::abs(oracle::wrap(src[1] - src[2])) < 1e-2);
    CHECK(r.source_fat_fraction == doctest::Approx(0.6));
    CHECK(r.source_distance < 5e-2);
    CHECK(r.trajectory.times.back() == 0.0);
    for (const auto& x : r.trajectory.states) CHECK(has_rebellion_ordering(x, s));
    CHECK(r.predicted_shift == doctest::Approx(sign_of(s) * 0.2 * kPi));
    CHECK(std::abs(r.observed_shift - r.predicted_shift) < 5e-2);
    // R is nondecreasing along the forward orbit.
    for (std::size_t k = 1; k < r.trajectory.R_values.size(); ++k) {
      CHECK(r.trajectory.R_values[k] >= r.trajectory.R_values[k - 1] - 1e-12);
    }
  }
}

TEST_CASE("traced orbit is a solution of the full model") {
  // Lift windows of the orbit to N = 5 and integrate the pairwise oracle
  // forward across each window. Windows stay short: the source is a saddle.
  const RebellionResult r = trace_rebellion(5, range(0, 3), range(0, 4), RebellionSymbol::right);
  const Partition& p = *r.partition;
  constexpr std::size_t window = 200;
  for (std::size_t k = 0; k + window < r.trajectory.size(); k += window) {
    const auto end = oracle::rk4_pairwise(lift(p, r.trajectory.states[k]), 1e-2, window);
    const auto expect = lift(p, r.trajectory.states[k + window]);
    for (std::size_t j = 0; j < 5; ++j) CHECK(std::abs(end[j] - expect[j]) < 1e-9);
  }
}

TEST_CASE("trace on index sets checks the source classification") {
  const RebellionResult r = trace_rebellion(5, range(0, 3), range(0, 4), RebellionSymbol::left);
  CHECK(r.observed_source_fat_set == range(0, 3));
  REQUIRE(r.source.has_value());
  REQUIRE(r.target.has_value());
  CHECK(r.target->fat_set == range(0, 4));
  CHECK(r.partition->cluster_count() == 3);
}

TEST_CASE("final rebellion into synchrony") {
  const RebellionResult r = trace_rebellion(5, range(0, 4), range(0, 5), RebellionSymbol::right);
  CHECK(r.partition->cluster_count() == 2);
  CHECK(r.target->kind == EquilibriumClass::synchrony);
  CHECK(std::abs(r.observed_shift - kPi / 5) < 5e-2);
}

TEST_CASE("invalid rebellions") {
  const auto right = RebellionSymbol::right;
  CHECK(code_of([&] { trace_rebellion(ThreeFractions{0.5, 0.25, 0.25}, right); }) ==
        ErrorCode::invalid_argument);
  CHECK(code_of([&] { trace_rebellion(ThreeFractions{0.6, 0.2, 0.3}, right); }) ==
        ErrorCode::invalid_argument);
  CHECK(code_of([&] { trace_rebellion(ThreeFractions{0.6, 0.0, 0.4}, right); }) ==
        ErrorCode::invalid_argument);
  // Incomparable or non-increasing fat sets.
  CHECK(code_of([&] {
          trace_rebellion(5, std::vector<std::size_t>{0, 1, 2}, std::vector<std::size_t>{1, 2, 3, 4},
                          right);
        }) == ErrorCode::invalid_fat_set);
  CHECK(code_of([&] { trace_rebellion(5, range(0, 3), range(0, 3), right); }) ==
        ErrorCode::invalid_fat_set);
  CHECK(code_of([&] { trace_rebellion(5, range(0, 2), range(0, 4), right); }) ==
        ErrorCode::invalid_fat_set);
  RebellionOptions o;
  o.step = -1.0;
  CHECK(code_of([&] { trace_rebellion(kAlpha, right, o); }) == ErrorCode::invalid_argument);
}

TEST_CASE("step budget exhaustion is non-convergence") {
  RebellionOptions o;
  o.max_steps = 100;
  CHECK(code_of([&] { trace_rebellion(kAlpha, RebellionSymbol::right, o); }) ==
        ErrorCode::non_convergence);
}

TEST_CASE("tight endpoint tolerance is a wrong basin") {
  RebellionOptions o;
  o.tau_eq = 1e-4;
  CHECK(code_of([&] { trace_rebellion(kAlpha, RebellionSymbol::right, o); }) ==
        ErrorCode::wrong_basin);
}

TEST_CASE("concatenation N=7 from |J0|=4") {
  const auto word = SymbolSequence::parse("+-+");
  const ConcatResult c = concat_rebellions(7, range(0, 4), word);
  CHECK(c.rebels == std::vector<std::size_t>{4, 5, 6});
  CHECK(c.fat_sets.back() == range(0, 7));
  CHECK(c.final_class == EquilibriumClass::synchrony);
  CHECK(c.predicted_cumulative_shift == doctest::Approx(kPi / 7));
  CHECK(std::abs(c.cumulative_shift - c.predicted_cumulative_shift) < 0.1);
  CHECK(c.max_junction_jump < 5e-2);
  // Stitched time is increasing and starts at zero.
  CHECK(c.stitched.times.front() == 0.0);
  for (std::size_t k = 1; k < c.stitched.size(); ++k) {
    CHECK(c.stitched.times[k] > c.stitched.times[k - 1]);
  }
  // The stitched orbit ends at synchrony.
  CHECK(classify_state(c.stitched.final_state(), 5e-2).kind == StateClass::synchrony);
}

TEST_CASE("concatenation errors") {
  const auto word = SymbolSequence::parse("++++");
  CHECK(code_of([&] { concat_rebellions(7, range(0, 4), word); }) == ErrorCode::invalid_argument);
  CHECK(code_of([&] { concat_rebellions(7, range(0, 3), SymbolSequence::parse("+")); }) ==
        ErrorCode::invalid_fat_set);
  RebellionOptions o;
  o.max_steps = 50;
  try {
    concat_rebellions(7, range(0, 4), SymbolSequence::parse("+-"), o);
    FAIL("expected failure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::non_convergence);
    CHECK(std::string(e.what()).find("segment 2") != std::string::npos);
  }
}

TEST_CASE("swarm construction") {
  SwarmSpec spec;
  spec.n = 9;
  spec.fat_source = range(0, 5);
  spec.fat_target = range(0, 8);
  spec.m_star = 3;
  const Partition p = swarm_partition(spec);
  CHECK(p.cluster_count() == 5);
  CHECK(p.block(1) == std::vector<std::size_t>{5});
  CHECK(p.block(4) == std::vector<std::size_t>{8});

  const auto xi = swarm_offsets(spec);
  REQUIRE(xi.size() == 3);
  CHECK(xi[0] > 0.0);
  CHECK(xi[1] > xi[0]);
  CHECK(xi[2] < 0.0);
  CHECK(std::abs(std::accumulate(xi.begin(), xi.end(), 0.0)) < 1e-15);

  const auto theta = swarm_initial_condition(spec);
  CHECK(std::abs(std::accumulate(theta.begin(), theta.end(), 0.0)) < 1e-12);
  for (std::size_t j : p.block(0)) CHECK(theta[j] == theta[p.block(0).front()]);

  SwarmSpec bad = spec;
  bad.m_star = 5;
  CHECK(code_of([&] { swarm_partition(bad); }) == ErrorCode::invalid_argument);
  bad.m_star = 1;
  CHECK(code_of([&] { swarm_offsets(bad); }) == ErrorCode::unconstructible);
  bad.unilateral = RebellionSymbol::left;
  CHECK_NOTHROW(swarm_offsets(bad));
  bad = spec;
  bad.fat_target = range(0, 9);
  CHECK(code_of([&] { swarm_partition(bad); }) == ErrorCode::invalid_fat_set);
}

TEST_CASE("seeded offsets are deterministic and keep the sign layout") {
  SwarmSpec spec;
  spec.n = 11;
  spec.fat_source = range(0, 6);
  spec.fat_target = range(0, 10);
  spec.m_star = 3;
  spec.seed = 42;
  const auto a = swarm_offsets(spec);
  CHECK(a == swarm_offsets(spec));
  CHECK(a[0] > 0.0);
  CHECK(a[1] > 0.0);
  CHECK(a[2] < 0.0);
  CHECK(a[3] < 0.0);
  spec.seed = 43;
  CHECK(a != swarm_offsets(spec));
}

TEST_CASE("small swarm run") {
  SwarmSpec spec;
  spec.n = 9;
  spec.fat_source = range(0, 5);
  spec.fat_target = range(0, 8);
  spec.m_star = 3;
  const SwarmResult s = run_swarm(spec);
  CHECK(s.right_count == 2);
  CHECK(s.left_count == 1);
  CHECK(s.source_distance < 5e-2);
  CHECK(s.min_rebel_gap > 0.0);
  CHECK(s.max_fix_spread < 1e-10);
  CHECK(s.predicted_shift == doctest::Approx(kPi / 9));
  CHECK(std::abs(s.observed_shift - s.predicted_shift) < 5e-2);
  CHECK(s.source_phases.front() == doctest::Approx(-4.0 * kPi / 9).epsilon(1e-2));
}
