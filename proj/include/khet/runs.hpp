// Copyright 2026 The khet Authors
// SPDX-License-Identifier: Apache-2.0

// Command-level runs: each wraps one library operation and packages its
// outcome as a JSON report plus CSV-ready tables. The C API and the CLI sit
// on top of these.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "khet/connection_graph.hpp"
#include "khet/heteroclinics.hpp"

namespace khet {

struct Table {
  std::string name;
  std::vector<std::string> columns;
  /// Columns holding angles (eligible for wrapping on output).
  std::vector<bool> is_angle;
  std::vector<std::vector<double>> rows;

  std::string to_csv(bool wrap = false) const;
};

struct Run {
  nlohmann::ordered_json report;
  std::vector<Table> tables;
  /// Free-form payload (graph exports).
  std::string text;
};

Run cmd_simulate(const std::vector<double>& angles, double duration,
                 const RebellionOptions& options);
Run cmd_equilibrium(std::size_t n, const std::vector<std::size_t>& fat_set, bool verify);
Run cmd_linkage(const std::array<double, 3>& alpha);
Run cmd_trace(const ThreeFractions& alpha, RebellionSymbol s, const RebellionOptions& options);
Run cmd_trace(std::size_t n, const std::vector<std::size_t>& fat_source,
              const std::vector<std::size_t>& fat_target, RebellionSymbol s,
              const RebellionOptions& options);
Run cmd_concat(std::size_t n, const std::vector<std::size_t>& initial_fat,
               const SymbolSequence& symbols, const RebellionOptions& options);
Run cmd_swarm(const SwarmSpec& spec, const RebellionOptions& options);
Run cmd_graph(std::size_t n, bool adjacency_only, GraphFormat format);

}  // namespace khet
