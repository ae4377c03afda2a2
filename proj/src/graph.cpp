#include "graphforge/graph.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace graphforge {

bool Graph::has_edge(NodeIndex u, NodeIndex v) const {
  if (!directed && u > v) std::swap(u, v);
  return std::binary_search(edges.begin(), edges.end(), Edge{u, v});
}

void Graph::canonicalize() {
  if (!directed) {
    for (auto& e : edges) {
      if (e.u > e.v) std::swap(e.u, e.v);
    }
  }
  if (!weights) {
    std::erase_if(edges, [](const Edge& e) { return e.u == e.v; });
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return;
  }
  if (weights->size() != edges.size()) throw std::invalid_argument("edge weights not aligned with edges");
  std::vector<std::size_t> order(edges.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return edges[a] < edges[b]; });
  std::vector<Edge> sorted_edges;
  std::vector<double> sorted_weights;
  sorted_edges.reserve(edges.size());
  sorted_weights.reserve(edges.size());
  for (auto i : order) {
    const Edge& e = edges[i];
    if (e.u == e.v) continue;
    if (!sorted_edges.empty() && sorted_edges.back() == e) continue;
    sorted_edges.push_back(e);
    sorted_weights.push_back((*weights)[i]);
  }
  edges = std::move(sorted_edges);
  weights = std::move(sorted_weights);
}

void Graph::check_invariants() const {
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto& e = edges[i];
    const std::string where = "edge " + std::to_string(i) + " (" + std::to_string(e.u) + "," + std::to_string(e.v) + ")";
    if (e.u >= n_nodes || e.v >= n_nodes) throw std::invalid_argument(where + ": index out of range");
    if (e.u == e.v) throw std::invalid_argument(where + ": self-loop");
    if (!directed && e.u > e.v) throw std::invalid_argument(where + ": undirected edge not stored with u < v");
    if (i > 0 && !(edges[i - 1] < e)) throw std::invalid_argument(where + ": edges not sorted or duplicated");
  }
  if (weights) {
    if (weights->size() != edges.size()) throw std::invalid_argument("edge weights not aligned with edges");
    for (double w : *weights) {
      if (!(w >= 0.0)) throw std::invalid_argument("negative or non-finite edge weight");
    }
  }
}

}  // namespace graphforge
