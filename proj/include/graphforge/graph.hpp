#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "graphforge/config.hpp"
#include "graphforge/point_set.hpp"

namespace graphforge {

struct Edge {
  NodeIndex u = 0;
  NodeIndex v = 0;

  auto operator<=>(const Edge&) const = default;
};

/// Edge list graph. Canonical form: edges sorted lexicographically, no
/// duplicates, no self-loops, and u < v for undirected graphs. When present,
/// `weights` is aligned with `edges`.
struct Graph {
  std::size_t n_nodes = 0;
  bool directed = false;
  std::vector<Edge> edges;
  std::optional<std::vector<double>> weights;
  ConstructionConfig config;
  std::string dataset_checksum;

  std::size_t n_edges() const { return edges.size(); }
  bool has_edge(NodeIndex u, NodeIndex v) const;

  /// Brings edges (and weights) into canonical form. Self-loops are dropped;
  /// among duplicate edges the first weight is kept.
  void canonicalize();

  /// Throws std::invalid_argument if the canonical-form invariants fail.
  void check_invariants() const;

  bool operator==(const Graph&) const = default;
};

}  // namespace graphforge
