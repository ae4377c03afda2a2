#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "graphforge/graph.hpp"
#include "graphforge/point_set.hpp"

namespace graphforge {

/// Union-find with path halving and union by size.
class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n);
  std::size_t find(std::size_t x);
  bool unite(std::size_t a, std::size_t b);
  std::size_t size_of(std::size_t x) { return size_[find(x)]; }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
};

struct Components {
  std::size_t count = 0;
  /// Dense ids 0..count-1, numbered by each component's smallest node.
  std::vector<std::size_t> id;
};

/// Components of the underlying undirected graph (weak components for
/// directed graphs).
Components connected_components(const Graph& g);

struct TopologyReport {
  std::size_t n_nodes = 0;
  std::size_t n_edges = 0;
  bool directed = false;
  double min_degree = 0.0;
  double max_degree = 0.0;
  double mean_degree = 0.0;
  std::size_t isolated_count = 0;
  std::size_t n_components = 0;
  double largest_component_fraction = 0.0;
  /// Fraction of edges whose endpoints share a label.
  std::optional<double> homophily;
  /// Per class: among edges touching the class, the fraction with both
  /// endpoints in it. Classes without incident edges are omitted.
  std::map<std::string, double> class_homophily;

  std::string to_json() const;
  std::string to_table() const;
};

/// Degrees are out-degrees for directed graphs. Isolation and components are
/// judged on the underlying undirected graph.
TopologyReport topology_report(const Graph& g, const std::optional<Labels>& labels = std::nullopt);

}  // namespace graphforge
