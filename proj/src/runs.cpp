// Copyright 2026 The khet Authors
// SPDX-License-Identifier: Apache-2.0

#include "khet/runs.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "khet/core_model.hpp"
#include "khet/equilibria.hpp"
#include "khet/error.hpp"
#include "khet/integrator.hpp"

namespace khet {
namespace {

using nlohmann::ordered_json;

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::size_t> one_based(const std::vector<std::size_t>& set) {
  std::vector<std::size_t> out(set);
  for (auto& j : out) ++j;
  return out;
}

void add_column(Table& t, std::string name, bool angle) {
  t.columns.push_back(std::move(name));
  t.is_angle.push_back(angle);
}

Table phase_table(std::string name, const Trajectory& traj) {
  Table t;
  t.name = std::move(name);
  const std::size_t n = traj.states.empty() ? 0 : traj.states.front().size();
  add_column(t, "t", false);
  for (std::size_t j = 1; j <= n; ++j) add_column(t, "theta_" + std::to_string(j), true);
  add_column(t, "R", false);
  add_column(t, "Psi", true);
  t.rows.reserve(traj.size());
  for (std::size_t k = 0; k < traj.size(); ++k) {
    std::vector<double> row;
    row.reserve(n + 3);
    row.push_back(traj.times[k]);
    row.insert(row.end(), traj.states[k].begin(), traj.states[k].end());
    const OrderParameter op = order_parameter(traj.states[k]);
    row.push_back(op.R);
    row.push_back(op.Psi);
    t.rows.push_back(std::move(row));
  }
  return t;
}

// t, x_1..x_M, <weight>_1..<weight>_M, R
Table cluster_table(std::string name, std::size_t clusters, const std::string& weight) {
  Table t;
  t.name = std::move(name);
  add_column(t, "t", false);
  for (std::size_t m = 1; m <= clusters; ++m) add_column(t, "x_" + std::to_string(m), true);
  for (std::size_t m = 1; m <= clusters; ++m) add_column(t, weight + "_" + std::to_string(m), false);
  add_column(t, "R", false);
  return t;
}

std::vector<double> cluster_row(double time, std::span<const double> x,
                                std::span<const double> weights, double R) {
  std::vector<double> row{time};
  row.insert(row.end(), x.begin(), x.end());
  row.insert(row.end(), weights.begin(), weights.end());
  row.push_back(R);
  return row;
}

double max_R_drop(const std::vector<double>& r) {
  double drop = 0.0;
  for (std::size_t k = 1; k < r.size(); ++k) drop = std::max(drop, r[k - 1] - r[k]);
  return drop;
}

std::vector<double> column_R(const Table& t) {
  std::vector<double> r;
  const std::size_t col = static_cast<std::size_t>(
      std::find(t.columns.begin(), t.columns.end(), "R") - t.columns.begin());
  for (const auto& row : t.rows) r.push_back(row[col]);
  return r;
}

ordered_json spectrum_json(const Spectrum& s) {
  ordered_json arr = ordered_json::array();
  for (const auto& e : s.eigenvalues) {
    arr.push_back({{"value", e.value}, {"multiplicity", e.multiplicity}});
  }
  return arr;
}

ordered_json options_json(const RebellionOptions& o) {
  return {{"step", o.step},
          {"eps_mag", o.eps_mag},
          {"delta_stop", o.delta_stop},
          {"tau_eq", o.tau_eq},
          {"max_steps", o.max_steps},
          {"record_every", o.record_every}};
}

ordered_json trace_json(const RebellionResult& r) {
  ordered_json j;
  j["alpha"] = r.alpha;
  j["symbol"] = std::string(1, to_char(r.symbol));
  j["ordering"] = r.symbol == RebellionSymbol::right ? "x1<x2<x3" : "x1<x3<x2";
  j["stop_time"] = r.stop_time;
  j["steps"] = r.trajectory.steps_taken;
  j["observed_shift"] = r.observed_shift;
  j["predicted_shift"] = r.predicted_shift;
  j["shift_error"] = std::abs(r.observed_shift - r.predicted_shift);
  j["source_distance"] = r.source_distance;
  j["source_fat_fraction"] = r.source_fat_fraction;
  if (r.source) j["fat_source"] = one_based(r.source->fat_set);
  if (r.target) j["fat_target"] = one_based(r.target->fat_set);
  if (!r.observed_source_fat_set.empty()) {
    j["observed_source_fat_set"] = one_based(r.observed_source_fat_set);
  }
  j["max_R_drop"] = max_R_drop(r.trajectory.R_values);
  return j;
}

}  // namespace

std::string Table::to_csv(bool wrap) const {
  std::string out;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (c) out += ',';
    out += columns[c];
  }
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += format_number(wrap && is_angle[c] ? wrap_angle(row[c]) : row[c]);
    }
    out += '\n';
  }
  return out;
}

Run cmd_simulate(const std::vector<double>& angles, double duration,
                 const RebellionOptions& options) {
  const PhaseState state(angles);
  if (!(duration >= 0.0) || !std::isfinite(duration)) {
    throw Error(ErrorCode::invalid_argument, "duration must be finite and nonnegative");
  }
  IntegrationConfig cfg;
  cfg.step = options.step;
  cfg.max_steps = steps_for_duration(duration, options.step);
  cfg.record_every = options.record_every;
  const Trajectory traj = integrate(
      [](std::span<const double> y, std::span<double> dy) { vector_field(y, dy); },
      std::vector<double>(angles), cfg);

  Run run;
  run.tables.push_back(phase_table("trajectory", traj));
  const auto r = column_R(run.tables.front());
  run.report["command"] = "simulate";
  run.report["N"] = state.size();
  run.report["T"] = traj.final_time();
  run.report["step"] = options.step;
  run.report["steps"] = traj.steps_taken;
  run.report["rows"] = traj.size();
  run.report["R_initial"] = r.front();
  run.report["R_final"] = r.back();
  run.report["max_R_drop"] = max_R_drop(r);
  const Classification c = classify_state(traj.final_state(), 1e-6);
  run.report["final_class"] = to_string(c.kind);
  if (c.kind == StateClass::two_cluster) run.report["final_fat_set"] = one_based(c.fat_set);
  return run;
}

Run cmd_equilibrium(std::size_t n, const std::vector<std::size_t>& fat_set, bool verify) {
  const Equilibrium eq =
      fat_set.size() == n ? synchrony_equilibrium(n) : two_cluster_equilibrium(fat_set, n);
  const Spectrum spec = linearization_spectrum(eq);

  Run run;
  auto& j = run.report;
  j["command"] = "equilibrium";
  j["class"] = to_string(eq.kind);
  j["N"] = n;
  j["fat_set"] = one_based(eq.fat_set);
  j["alpha"] = eq.alpha;
  j["R"] = eq.R;
  j["morse_index"] = morse_index(eq);
  j["representative"] = eq.representative;
  const auto f = vector_field(eq.representative);
  double residual = 0.0;
  for (double v : f) residual = std::max(residual, std::abs(v));
  j["residual"] = residual;
  j["spectrum"] = spectrum_json(spec);
  if (verify) {
    constexpr double h = 1e-5;
    const auto fd = symmetric_eigenvalues(jacobian_fd(eq.representative, h));
    const auto closed = spec.expanded();
    double err = 0.0;
    for (std::size_t k = 0; k < fd.size(); ++k) err = std::max(err, std::abs(fd[k] - closed[k]));
    j["verification"] = {{"h", h}, {"eigenvalues", fd}, {"max_error", err}};
  }
  return run;
}

Run cmd_linkage(const std::array<double, 3>& alpha) {
  const auto x = solve_3bar_linkage(alpha);
  const double sum = alpha[0] + alpha[1] + alpha[2];
  const std::array<double, 3> a{alpha[0] / sum, alpha[1] / sum, alpha[2] / sum};
  const OrderParameter op = order_parameter(a, x);
  Run run;
  run.report["command"] = "equilibrium";
  run.report["class"] = "linkage";
  run.report["alpha"] = a;
  run.report["x"] = x;
  run.report["R"] = op.R;
  return run;
}

namespace {

Run trace_run(const RebellionResult& r, const std::vector<double>& weights,
              const std::string& weight_name) {
  Run run;
  run.report["command"] = "trace";
  const ordered_json fields = trace_json(r);
  for (const auto& [k, v] : fields.items()) run.report[k] = v;
  Table t = cluster_table("clusters", 3, weight_name);
  for (std::size_t k = 0; k < r.trajectory.size(); ++k) {
    t.rows.push_back(cluster_row(r.trajectory.times[k], r.trajectory.states[k], weights,
                                 r.trajectory.R_values[k]));
  }
  run.tables.push_back(std::move(t));
  return run;
}

}  // namespace

Run cmd_trace(const ThreeFractions& alpha, RebellionSymbol s, const RebellionOptions& options) {
  const RebellionResult r = trace_rebellion(alpha, s, options);
  Run run = trace_run(r, {alpha.begin(), alpha.end()}, "alpha");
  run.report["options"] = options_json(options);
  return run;
}

Run cmd_trace(std::size_t n, const std::vector<std::size_t>& fat_source,
              const std::vector<std::size_t>& fat_target, RebellionSymbol s,
              const RebellionOptions& options) {
  const RebellionResult r = trace_rebellion(n, fat_source, fat_target, s, options);
  const Partition& p = *r.partition;
  std::vector<double> sizes(3, 0.0);
  for (std::size_t m = 0; m < p.cluster_count(); ++m) sizes[m] = static_cast<double>(p.block_size(m));
  Run run = trace_run(r, sizes, "N");
  run.report["N"] = n;
  run.report["options"] = options_json(options);
  return run;
}

Run cmd_concat(std::size_t n, const std::vector<std::size_t>& initial_fat,
               const SymbolSequence& symbols, const RebellionOptions& options) {
  const ConcatResult c = concat_rebellions(n, initial_fat, symbols, options);

  Run run;
  auto& j = run.report;
  j["command"] = "concat";
  j["N"] = n;
  j["initial_fat_set"] = one_based(c.fat_sets.front());
  j["symbols"] = symbols.str();
  j["rebels"] = one_based(c.rebels);
  ordered_json segs = ordered_json::array();
  Table clusters = cluster_table("clusters", 3, "N");
  clusters.columns.insert(clusters.columns.begin() + 1, "segment");
  clusters.is_angle.insert(clusters.is_angle.begin() + 1, false);
  std::size_t row = 0;
  for (std::size_t l = 0; l < c.segments.size(); ++l) {
    const RebellionResult& seg = c.segments[l];
    ordered_json sj;
    sj["index"] = l + 1;
    sj["rebel"] = c.rebels[l] + 1;
    sj["start_time"] = c.segment_start_times[l];
    sj["offset"] = c.segment_offsets[l];
    const ordered_json fields = trace_json(seg);
    for (const auto& [k, v] : fields.items()) sj[k] = v;
    segs.push_back(std::move(sj));

    const Partition& p = *seg.partition;
    std::vector<double> sizes(3, 0.0);
    for (std::size_t m = 0; m < p.cluster_count(); ++m) sizes[m] = static_cast<double>(p.block_size(m));
    for (std::size_t k = 0; k < seg.trajectory.size(); ++k, ++row) {
      std::vector<double> x = seg.trajectory.states[k];
      for (std::size_t m = 0; m < 3; ++m) {
        // Keep x_m on the sheet the stitched orbit uses for that cluster.
        if (m < p.cluster_count()) {
          x[m] = c.stitched.states[row][p.block(m).front()];
        } else {
          x[m] += c.segment_offsets[l];
        }
      }
      auto r = cluster_row(c.stitched.times[row], x, sizes, c.stitched.R_values[row]);
      r.insert(r.begin() + 1, static_cast<double>(l + 1));
      clusters.rows.push_back(std::move(r));
    }
  }
  j["segments"] = std::move(segs);
  j["cumulative_shift"] = c.cumulative_shift;
  j["predicted_cumulative_shift"] = c.predicted_cumulative_shift;
  j["shift_error"] = std::abs(c.cumulative_shift - c.predicted_cumulative_shift);
  j["max_junction_jump"] = c.max_junction_jump;
  j["final_class"] = to_string(c.final_class);
  j["final_fat_set"] = one_based(c.fat_sets.back());
  j["options"] = options_json(options);
  run.tables.push_back(std::move(clusters));
  run.tables.push_back(phase_table("stitched", c.stitched));
  return run;
}

Run cmd_swarm(const SwarmSpec& spec, const RebellionOptions& options) {
  const SwarmResult s = run_swarm(spec, options);
  const Partition& p = s.partition;
  const std::size_t m_total = p.cluster_count();

  Run run;
  auto& j = run.report;
  j["command"] = "swarm";
  j["N"] = spec.n;
  j["fat_source"] = one_based(p.block(0));
  {
    std::vector<std::size_t> jp(p.block(0));
    for (std::size_t m = 1; m + 1 < m_total; ++m) jp.push_back(p.block(m).front());
    std::sort(jp.begin(), jp.end());
    j["fat_target"] = one_based(jp);
  }
  j["clusters"] = m_total;
  if (spec.unilateral) {
    j["unilateral"] = std::string(1, to_char(*spec.unilateral));
  } else {
    j["m_star"] = spec.m_star;
  }
  j["epsilon"] = spec.epsilon;
  if (spec.seed) j["seed"] = *spec.seed;
  j["right_rebels"] = s.right_count;
  j["left_rebels"] = s.left_count;
  j["stop_time"] = s.stop_time;
  j["steps"] = s.trajectory.steps_taken;
  j["source_distance"] = s.source_distance;
  j["observed_shift"] = s.observed_shift;
  j["predicted_shift"] = s.predicted_shift;
  j["predicted_shift_swapped"] = s.predicted_shift_swapped;
  j["min_rebel_gap"] = s.min_rebel_gap;
  j["max_fix_spread"] = s.max_fix_spread;
  j["source_phases_over_pi"] = [&] {
    std::vector<double> v;
    for (double x : s.source_phases) v.push_back(x / kPi);
    return v;
  }();
  j["target_phases_over_pi"] = [&] {
    std::vector<double> v;
    for (double x : s.target_phases) v.push_back(x / kPi);
    return v;
  }();
  j["max_R_drop"] = max_R_drop(s.trajectory.R_values);
  j["options"] = options_json(options);

  std::vector<double> sizes(m_total);
  for (std::size_t m = 0; m < m_total; ++m) sizes[m] = static_cast<double>(p.block_size(m));
  Table clusters = cluster_table("clusters", m_total, "N");
  for (std::size_t k = 0; k < s.trajectory.size(); ++k) {
    std::vector<double> x(m_total);
    for (std::size_t m = 0; m < m_total; ++m) x[m] = s.trajectory.states[k][p.block(m).front()];
    clusters.rows.push_back(cluster_row(s.trajectory.times[k], x, sizes,
                                        order_parameter(s.trajectory.states[k]).R));
  }
  run.tables.push_back(std::move(clusters));
  run.tables.push_back(phase_table("trajectory", s.trajectory));
  return run;
}

Run cmd_graph(std::size_t n, bool adjacency_only, GraphFormat format) {
  const ConnectionGraph g = build_graph(n, adjacency_only);
  Run run;
  run.report["command"] = "graph";
  run.report["N"] = n;
  run.report["adjacency_only"] = adjacency_only;
  run.report["vertices"] = g.vertices.size();
  run.report["edges"] = g.edges.size();
  run.report["format"] = format == GraphFormat::dot ? "dot" : "json";
  run.text = export_graph(g, format);
  return run;
}

}  // namespace khet
