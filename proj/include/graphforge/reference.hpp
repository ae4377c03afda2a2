#pragma once

#include <cstddef>
#include <vector>

#include "graphforge/config.hpp"
#include "graphforge/graph.hpp"
#include "graphforge/kd_tree.hpp"
#include "graphforge/point_set.hpp"

/// Serial brute-force implementations of every query and constructor, written
/// straight from the defining conditions with no index and no pruning. They
/// back the test suites and the `validate` command.
namespace graphforge::reference {

/// Full O(n) scan; same contract as KdTree::knn.
NeighborList brute_force_knn(const PointSet& ps, NodeIndex query_id, std::size_t k);

/// Full O(n) scan; same contract as KdTree::range.
std::vector<NodeIndex> brute_force_range(const PointSet& ps, NodeIndex query_id, double radius);

Graph knn_graph(const PointSet& ps, std::size_t k, Symmetrize symmetrize);
Graph mnn_graph(const PointSet& ps, std::size_t k);
/// Tests every pair's shared-neighbor count; O(n^2 k).
Graph snn_graph(const PointSet& ps, std::size_t k, std::size_t theta, bool weighted);
Graph epsilon_graph(const PointSet& ps, double epsilon);
/// O(n^3) evaluation of the emptiness condition over all pairs (exact mode),
/// or over the candidate pairs only.
Graph gabriel_graph(const PointSet& ps, GabrielMode mode, std::size_t candidates, GabrielBoundary boundary);

Graph build_graph(const PointSet& ps, const ConstructionConfig& cfg);

}  // namespace graphforge::reference
