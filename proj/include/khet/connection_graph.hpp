// Copyright 2026 The khet Authors
// SPDX-License-Identifier: Apache-2.0

// Connection graph of the equilibria with R > 0: fat index sets ordered by
// inclusion, synchrony as the full set, and one artificial top vertex standing
// for the whole linkage set {R = 0}.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace khet {

/// Largest N accepted by build_graph.
inline constexpr std::size_t kMaxGraphOscillators = 24;

enum class VertexKind { top, fat, sync };

const char* to_string(VertexKind kind) noexcept;

using IndexMask = std::uint64_t;

struct GraphVertex {
  VertexKind kind = VertexKind::fat;
  /// Fat set as a bit mask over zero-based indices (all bits for sync, 0 for top).
  IndexMask fat = 0;
  /// Morse index N - |J|; -1 marks the top vertex.
  int level = 0;
  double R = 0.0;

  std::vector<std::size_t> fat_set(std::size_t n) const;
  std::vector<std::size_t> slim_set(std::size_t n) const;
};

struct ConnectionGraph {
  std::size_t n = 0;
  bool adjacency_only = true;
  /// Sorted: top first, then by descending level, then by ascending slim set.
  std::vector<GraphVertex> vertices;
  /// Sorted (from, to) pairs of vertex positions.
  std::vector<std::pair<std::size_t, std::size_t>> edges;

  std::size_t find(IndexMask fat) const;  ///< vertex position, or npos
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

/// Adjacency mode keeps the Hasse diagram (top -> minimal fat sets, and
/// J -> J + {j}); otherwise every pair related by strict inclusion is an edge.
ConnectionGraph build_graph(std::size_t n, bool adjacency_only = true);

/// 1 + sum_{N1 = floor(N/2)+1}^{N} C(N, N1).
std::uint64_t vertex_count(std::size_t n);

/// Heteroclinic reachability between fat sets (or the full set): strict
/// inclusion. Throws Error{invalid_vertex} on non-fat input.
bool reachable(std::size_t n, std::span<const std::size_t> fat_source,
               std::span<const std::size_t> fat_target);

enum class GraphFormat { dot, json };

std::string export_graph(const ConnectionGraph& graph, GraphFormat format);

/// Rebuilds a graph from its JSON export.
ConnectionGraph graph_from_json(const std::string& text);

}  // namespace khet
