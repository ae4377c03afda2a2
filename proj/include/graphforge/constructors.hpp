#pragma once

#include <cstddef>
#include <vector>

#include "graphforge/config.hpp"
#include "graphforge/graph.hpp"
#include "graphforge/kd_tree.hpp"
#include "graphforge/point_set.hpp"

namespace graphforge {

/// Exact k-nearest-neighbor lists for every node, computed in parallel.
std::vector<NeighborList> all_knn(const KdTree& index, std::size_t k);

/// Directed i -> j for each of i's k nearest neighbors, or the undirected
/// union of that relation with its transpose.
Graph knn_graph(const PointSet& ps, std::size_t k, Symmetrize symmetrize);

/// Undirected {i, j} iff each is among the other's k nearest neighbors.
Graph mnn_graph(const PointSet& ps, std::size_t k);

/// |N_k(a) ∩ N_k(b)|, neighbor sets excluding the query point itself.
std::size_t snn_similarity(const PointSet& ps, NodeIndex a, NodeIndex b, std::size_t k);

/// Undirected {a, b} iff the shared-neighbor count reaches `theta`. Only
/// pairs that share at least one neighbor are ever examined, which loses
/// nothing for theta >= 1.
Graph snn_graph(const PointSet& ps, std::size_t k, std::size_t theta, bool weighted);

/// Undirected {i, j} iff distance(i, j) < epsilon (strict).
Graph epsilon_graph(const PointSet& ps, double epsilon);

/// Gabriel emptiness test for the pair (a, b) against every other point,
/// ||C - (A+B)/2||^2 compared with ||A - B||^2 / 4. O(n) scan.
bool gabriel_pair_test(const PointSet& ps, NodeIndex a, NodeIndex b,
                       GabrielBoundary boundary = GabrielBoundary::open);

/// Gabriel graph. In exact mode every pair is tested; in candidate mode only
/// pairs where one endpoint is among the other's `candidates` nearest
/// neighbors, so its edges are a subset of the exact graph. Each tested pair
/// is checked against all points through the index.
Graph gabriel_graph(const PointSet& ps, GabrielMode mode, std::size_t candidates = ConstructionConfig::kDefaultCandidates,
                    GabrielBoundary boundary = GabrielBoundary::open);

/// Dispatches on cfg.method after validating cfg. The returned graph carries
/// cfg and the dataset checksum as provenance.
Graph build_graph(const PointSet& ps, const ConstructionConfig& cfg);

}  // namespace graphforge
