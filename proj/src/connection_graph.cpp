// Copyright 2026 The khet Authors
// SPDX-License-Identifier: Apache-2.0

#include "khet/connection_graph.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "khet/error.hpp"

namespace khet {
namespace {

IndexMask full_mask(std::size_t n) {
  return n == 64 ? ~IndexMask{0} : (IndexMask{1} << n) - 1;
}

std::string set_label(const std::vector<std::size_t>& set) {
  if (set.empty()) return "{}";
  std::ostringstream out;
  out << '{';
  for (std::size_t i = 0; i < set.size(); ++i) out << (i ? "," : "") << set[i] + 1;
  out << '}';
  return out.str();
}

IndexMask to_mask(std::span<const std::size_t> set, std::size_t n) {
  IndexMask mask = 0;
  for (std::size_t j : set) {
    if (j >= n) throw Error(ErrorCode::invalid_vertex, "index out of range");
    const IndexMask bit = IndexMask{1} << j;
    if (mask & bit) throw Error(ErrorCode::invalid_vertex, "repeated index");
    mask |= bit;
  }
  return mask;
}

// Slim sets ordered by size, then lexicographically on sorted indices.
bool slim_less(IndexMask a, IndexMask b, std::size_t n) {
  std::vector<std::size_t> sa, sb;
  for (std::size_t j = 0; j < n; ++j) {
    if (!(a >> j & 1)) sa.push_back(j);
    if (!(b >> j & 1)) sb.push_back(j);
  }
  if (sa.size() != sb.size()) return sa.size() > sb.size();
  return sa < sb;
}

}  // namespace

const char* to_string(VertexKind kind) noexcept {
  switch (kind) {
    case VertexKind::top: return "top";
    case VertexKind::fat: return "fat";
    case VertexKind::sync: return "sync";
  }
  return "unknown";
}

std::vector<std::size_t> GraphVertex::fat_set(std::size_t n) const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < n; ++j) {
    if (fat >> j & 1) out.push_back(j);
  }
  return out;
}

std::vector<std::size_t> GraphVertex::slim_set(std::size_t n) const {
  std::vector<std::size_t> out;
  if (kind == VertexKind::top) return out;
  for (std::size_t j = 0; j < n; ++j) {
    if (!(fat >> j & 1)) out.push_back(j);
  }
  return out;
}

std::size_t ConnectionGraph::find(IndexMask fat) const {
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (vertices[i].kind != VertexKind::top && vertices[i].fat == fat) return i;
  }
  return npos;
}

std::uint64_t vertex_count(std::size_t n) {
  if (n < 2) throw Error(ErrorCode::invalid_argument, "need N >= 2");
  if (n > 62) throw Error(ErrorCode::invalid_argument, "vertex count overflows for N > 62");
  std::uint64_t total = 1;
  std::uint64_t binom = 1;  // C(n, k), walked down from k = n
  for (std::size_t k = n; k > n / 2; --k) {
    total += binom;
    // C(n, k-1) = C(n, k) k / (n-k+1), reduced first to stay exact in 64 bits.
    const std::uint64_t d = n - k + 1;
    const std::uint64_t g = std::gcd(binom, d);
    binom = (binom / g) * (k / (d / g));
  }
  return total;
}

ConnectionGraph build_graph(std::size_t n, bool adjacency_only) {
  if (n < 2) throw Error(ErrorCode::invalid_argument, "need N >= 2");
  if (n > kMaxGraphOscillators) {
    std::ostringstream msg;
    msg << "graph construction is limited to N <= " << kMaxGraphOscillators;
    throw Error(ErrorCode::invalid_argument, msg.str());
  }
  ConnectionGraph g;
  g.n = n;
  g.adjacency_only = adjacency_only;

  std::vector<IndexMask> fats;
  const IndexMask all = full_mask(n);
  for (IndexMask mask = 1; mask <= all; ++mask) {
    const auto size = static_cast<std::size_t>(std::popcount(mask));
    if (2 * size > n) fats.push_back(mask);
    if (mask == all) break;
  }
  std::sort(fats.begin(), fats.end(), [n](IndexMask a, IndexMask b) { return slim_less(a, b, n); });

  g.vertices.push_back({VertexKind::top, 0, -1, 0.0});
  std::vector<std::size_t> position(fats.size());
  for (IndexMask mask : fats) {
    const auto size = static_cast<std::size_t>(std::popcount(mask));
    GraphVertex v;
    v.kind = mask == all ? VertexKind::sync : VertexKind::fat;
    v.fat = mask;
    v.level = static_cast<int>(n - size);
    v.R = mask == all ? 1.0 : 2.0 * static_cast<double>(size) / static_cast<double>(n) - 1.0;
    g.vertices.push_back(v);
  }

  // Index of each mask for edge construction.
  std::vector<std::pair<IndexMask, std::size_t>> lookup;
  for (std::size_t i = 1; i < g.vertices.size(); ++i) lookup.emplace_back(g.vertices[i].fat, i);
  std::sort(lookup.begin(), lookup.end());
  auto index_of = [&](IndexMask m) {
    auto it = std::lower_bound(lookup.begin(), lookup.end(), std::make_pair(m, std::size_t{0}));
    return it != lookup.end() && it->first == m ? it->second : ConnectionGraph::npos;
  };

  const std::size_t min_fat = n / 2 + 1;
  for (std::size_t i = 1; i < g.vertices.size(); ++i) {
    const GraphVertex& v = g.vertices[i];
    if (!adjacency_only || static_cast<std::size_t>(std::popcount(v.fat)) == min_fat) {
      g.edges.emplace_back(0, i);
    }
    if (adjacency_only) {
      for (std::size_t j = 0; j < n; ++j) {
        const IndexMask bit = IndexMask{1} << j;
        if (v.fat & bit) continue;
        g.edges.emplace_back(i, index_of(v.fat | bit));
      }
    } else {
      // Every strict superset: enumerate subsets of the complement.
      const IndexMask rest = all & ~v.fat;
      for (IndexMask sub = rest; sub != 0; sub = (sub - 1) & rest) {
        g.edges.emplace_back(i, index_of(v.fat | sub));
      }
    }
  }
  std::sort(g.edges.begin(), g.edges.end());
  return g;
}

bool reachable(std::size_t n, std::span<const std::size_t> fat_source,
               std::span<const std::size_t> fat_target) {
  if (n < 2 || n > 64) throw Error(ErrorCode::invalid_vertex, "need 2 <= N <= 64");
  const IndexMask a = to_mask(fat_source, n);
  const IndexMask b = to_mask(fat_target, n);
  if (2 * fat_source.size() <= n || 2 * fat_target.size() <= n) {
    throw Error(ErrorCode::invalid_vertex, "reachability is defined between fat sets only");
  }
  return (a & b) == a && a != b;
}

std::string export_graph(const ConnectionGraph& g, GraphFormat format) {
  std::ostringstream out;
  if (format == GraphFormat::dot) {
    out << "digraph connection_graph {\n";
    out << "  // N = " << g.n << "; vertices labeled by slim sets J^c\n";
    out << "  rankdir=TB;\n  node [shape=plaintext];\n";
    std::vector<int> levels;
    for (const auto& v : g.vertices) levels.push_back(v.level);
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    // Top first (level -1), then Morse levels from high to low.
    std::sort(levels.begin(), levels.end(), [](int a, int b) {
      if (a == -1 || b == -1) return a == -1 && b != -1;
      return a > b;
    });
    for (int level : levels) {
      out << "  { rank=same;";
      for (std::size_t i = 0; i < g.vertices.size(); ++i) {
        if (g.vertices[i].level == level) out << " v" << i << ';';
      }
      out << " }\n";
    }
    for (std::size_t i = 0; i < g.vertices.size(); ++i) {
      const auto& v = g.vertices[i];
      std::string label;
      if (v.kind == VertexKind::top) {
        label = "0";
      } else if (v.kind == VertexKind::sync) {
        label = "{}";
      } else {
        label = set_label(v.slim_set(g.n));
      }
      out << "  v" << i << " [label=\"" << label << "\"];\n";
    }
    for (const auto& [a, b] : g.edges) out << "  v" << a << " -> v" << b << ";\n";
    out << "}\n";
    return out.str();
  }

  nlohmann::ordered_json doc;
  doc["N"] = g.n;
  doc["adjacency_only"] = g.adjacency_only;
  nlohmann::ordered_json verts = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < g.vertices.size(); ++i) {
    const auto& v = g.vertices[i];
    nlohmann::ordered_json jv;
    jv["id"] = i;
    jv["kind"] = to_string(v.kind);
    nlohmann::ordered_json fat = nlohmann::ordered_json::array();
    for (std::size_t j : v.fat_set(g.n)) fat.push_back(j + 1);
    jv["fat_set"] = fat;
    if (v.level < 0) {
      jv["level"] = nullptr;
    } else {
      jv["level"] = v.level;
    }
    jv["R"] = v.R;
    verts.push_back(jv);
  }
  doc["vertices"] = verts;
  nlohmann::ordered_json edges = nlohmann::ordered_json::array();
  for (const auto& [a, b] : g.edges) edges.push_back({a, b});
  doc["edges"] = edges;
  return doc.dump(2) + "\n";
}

ConnectionGraph graph_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::invalid_argument, std::string("graph JSON: ") + e.what());
  }
  try {
    ConnectionGraph g;
    g.n = doc.at("N").get<std::size_t>();
    g.adjacency_only = doc.at("adjacency_only").get<bool>();
    for (const auto& jv : doc.at("vertices")) {
      GraphVertex v;
      const std::string kind = jv.at("kind").get<std::string>();
      v.kind = kind == "top" ? VertexKind::top : kind == "sync" ? VertexKind::sync : VertexKind::fat;
      for (std::size_t j : jv.at("fat_set").get<std::vector<std::size_t>>()) {
        v.fat |= IndexMask{1} << (j - 1);
      }
      v.level = jv.at("level").is_null() ? -1 : jv.at("level").get<int>();
      v.R = jv.at("R").get<double>();
      g.vertices.push_back(v);
    }
    for (const auto& e : doc.at("edges")) {
      g.edges.emplace_back(e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>());
    }
    return g;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::invalid_argument, std::string("graph JSON: ") + e.what());
  }
}

}  // namespace khet
