#include "graphforge/reference.hpp"

#include <algorithm>
#include <stdexcept>

#include "graphforge/constructors.hpp"
#include "graphforge/distance.hpp"

namespace graphforge::reference {

namespace {

std::vector<NeighborList> all_lists(const PointSet& ps, std::size_t k) {
  std::vector<NeighborList> lists;
  lists.reserve(ps.size());
  for (std::size_t i = 0; i < ps.size(); ++i) lists.push_back(brute_force_knn(ps, static_cast<NodeIndex>(i), k));
  return lists;
}

bool in_list(const NeighborList& list, NodeIndex idx) {
  for (const auto& nb : list.neighbors) {
    if (nb.index == idx) return true;
  }
  return false;
}

Graph blank(const PointSet& ps, bool directed, const ConstructionConfig& cfg) {
  if (ps.size() < 2) throw ConstructionError("graph construction needs at least 2 points");
  Graph g;
  g.n_nodes = ps.size();
  g.directed = directed;
  g.config = cfg;
  g.dataset_checksum = dataset_checksum(ps);
  return g;
}

}  // namespace

NeighborList brute_force_knn(const PointSet& ps, NodeIndex query_id, std::size_t k) {
  if (query_id >= ps.size()) throw std::out_of_range("query id out of range");
  if (k == 0) throw std::invalid_argument("k must be positive");
  std::vector<Neighbor> all;
  all.reserve(ps.size());
  for (std::size_t j = 0; j < ps.size(); ++j) {
    if (j == query_id) continue;
    all.push_back({static_cast<NodeIndex>(j), euclidean_distance(ps.row(query_id), ps.row(j))});
  }
  std::sort(all.begin(), all.end(), neighbor_less);
  all.resize(std::min(k, all.size()));
  return {query_id, k, std::move(all)};
}

std::vector<NodeIndex> brute_force_range(const PointSet& ps, NodeIndex query_id, double radius) {
  if (query_id >= ps.size()) throw std::out_of_range("query id out of range");
  if (!(radius > 0.0)) throw std::invalid_argument("radius must be positive");
  std::vector<NodeIndex> hits;
  for (std::size_t j = 0; j < ps.size(); ++j) {
    if (j != query_id && euclidean_distance(ps.row(query_id), ps.row(j)) < radius) {
      hits.push_back(static_cast<NodeIndex>(j));
    }
  }
  return hits;
}

Graph knn_graph(const PointSet& ps, std::size_t k, Symmetrize symmetrize) {
  ConstructionConfig cfg;
  cfg.method = Method::knn;
  cfg.k = k;
  cfg.symmetrize = symmetrize;
  Graph g = blank(ps, symmetrize == Symmetrize::none, cfg);
  for (const auto& list : all_lists(ps, k)) {
    for (const auto& nb : list.neighbors) g.edges.push_back({list.query_id, nb.index});
  }
  g.canonicalize();
  return g;
}

Graph mnn_graph(const PointSet& ps, std::size_t k) {
  ConstructionConfig cfg;
  cfg.method = Method::mnn;
  cfg.k = k;
  Graph g = blank(ps, false, cfg);
  const auto lists = all_lists(ps, k);
  for (NodeIndex i = 0; i < ps.size(); ++i) {
    for (NodeIndex j = i + 1; j < ps.size(); ++j) {
      if (in_list(lists[i], j) && in_list(lists[j], i)) g.edges.push_back({i, j});
    }
  }
  return g;
}

Graph snn_graph(const PointSet& ps, std::size_t k, std::size_t theta, bool weighted) {
  if (theta < 1 || theta > k) throw ConstructionError("theta must lie in [1, k]");
  ConstructionConfig cfg;
  cfg.method = Method::snn;
  cfg.k = k;
  cfg.theta = theta;
  cfg.snn_weighted = weighted;
  Graph g = blank(ps, false, cfg);
  const auto lists = all_lists(ps, k);
  std::vector<double> weights;
  for (NodeIndex a = 0; a < ps.size(); ++a) {
    for (NodeIndex b = a + 1; b < ps.size(); ++b) {
      std::size_t shared = 0;
      for (const auto& x : lists[a].neighbors) shared += in_list(lists[b], x.index) ? 1 : 0;
      if (shared >= theta) {
        g.edges.push_back({a, b});
        weights.push_back(static_cast<double>(shared));
      }
    }
  }
  if (weighted) g.weights = std::move(weights);
  return g;
}

Graph epsilon_graph(const PointSet& ps, double epsilon) {
  if (!(epsilon > 0.0)) throw ConstructionError("epsilon must be positive");
  ConstructionConfig cfg;
  cfg.method = Method::epsilon;
  cfg.epsilon = epsilon;
  Graph g = blank(ps, false, cfg);
  for (NodeIndex i = 0; i < ps.size(); ++i) {
    for (NodeIndex j = i + 1; j < ps.size(); ++j) {
      if (euclidean_distance(ps.row(i), ps.row(j)) < epsilon) g.edges.push_back({i, j});
    }
  }
  return g;
}

Graph gabriel_graph(const PointSet& ps, GabrielMode mode, std::size_t candidates, GabrielBoundary boundary) {
  ConstructionConfig cfg;
  cfg.method = Method::gabriel;
  cfg.gabriel_mode = mode;
  cfg.gabriel_candidates = candidates;
  cfg.gabriel_boundary = boundary;
  Graph g = blank(ps, false, cfg);
  std::vector<NeighborList> lists;
  if (mode == GabrielMode::candidate) lists = all_lists(ps, candidates);
  for (NodeIndex a = 0; a < ps.size(); ++a) {
    for (NodeIndex b = a + 1; b < ps.size(); ++b) {
      if (mode == GabrielMode::candidate && !in_list(lists[a], b) && !in_list(lists[b], a)) continue;
      // gabriel_pair_test is itself the O(n) definition scan.
      if (graphforge::gabriel_pair_test(ps, a, b, boundary)) g.edges.push_back({a, b});
    }
  }
  return g;
}

Graph build_graph(const PointSet& ps, const ConstructionConfig& cfg) {
  cfg.validate();
  Graph g;
  switch (cfg.method) {
    case Method::knn: g = reference::knn_graph(ps, cfg.k, cfg.symmetrize); break;
    case Method::mnn: g = reference::mnn_graph(ps, cfg.k); break;
    case Method::snn: g = reference::snn_graph(ps, cfg.k, cfg.effective_theta(), cfg.snn_weighted); break;
    case Method::epsilon: g = reference::epsilon_graph(ps, cfg.epsilon); break;
    case Method::gabriel: g = reference::gabriel_graph(ps, cfg.gabriel_mode, cfg.gabriel_candidates, cfg.gabriel_boundary); break;
  }
  g.config = cfg;
  return g;
}

}  // namespace graphforge::reference
