#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "graphforge/point_set.hpp"

namespace graphforge {

struct Neighbor {
  NodeIndex index = 0;
  double distance = 0.0;

  bool operator==(const Neighbor&) const = default;
};

/// Exact neighbors of one query node, ascending by distance with ties broken
/// by ascending node index. Never contains the query itself.
struct NeighborList {
  NodeIndex query_id = 0;
  std::size_t k = 0;
  std::vector<Neighbor> neighbors;

  bool operator==(const NeighborList&) const = default;
};

/// Strict total order used for every neighbor ranking.
inline bool neighbor_less(const Neighbor& a, const Neighbor& b) {
  return a.distance < b.distance || (a.distance == b.distance && a.index < b.index);
}

/// Immutable k-d tree over a snapshot of a point set. All queries are exact
/// and safe to issue concurrently.
class KdTree {
 public:
  explicit KdTree(const PointSet& ps, std::size_t leaf_size = 16);

  std::size_t size() const { return n_; }
  std::size_t dim() const { return dim_; }
  /// Coordinates of original node `i`.
  std::span<const double> point(std::size_t i) const;

  NeighborList knn(NodeIndex query_id, std::size_t k) const;

  /// Indices j != query_id with distance < radius, ascending.
  std::vector<NodeIndex> range(NodeIndex query_id, double radius) const;

  /// True when some point other than `skip_a`/`skip_b` has squared distance
  /// to `center` below `radius_sq` (or equal to it, when `inclusive`).
  bool any_in_ball(std::span<const double> center, double radius_sq, bool inclusive, NodeIndex skip_a,
                   NodeIndex skip_b) const;

 private:
  struct Node {
    std::uint32_t begin = 0;
    std::uint32_t end = 0;
    std::int32_t left = -1;
    std::int32_t right = -1;
  };

  std::int32_t build(std::uint32_t begin, std::uint32_t end);
  double box_sq_distance(std::int32_t node, std::span<const double> q) const;
  void check_query(NodeIndex query_id) const;

  std::size_t n_ = 0;
  std::size_t dim_ = 0;
  std::size_t leaf_size_ = 16;
  std::vector<double> points_;  // tree order after construction
  std::vector<NodeIndex> order_;     // tree position -> node
  std::vector<NodeIndex> position_;  // node -> tree position
  std::vector<Node> nodes_;
  std::vector<double> lo_;
  std::vector<double> hi_;
};

}  // namespace graphforge
