#include "graphforge/kd_tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <string>

#include "graphforge/distance.hpp"

namespace graphforge {

KdTree::KdTree(const PointSet& ps, std::size_t leaf_size)
    : n_(ps.size()), dim_(ps.dim()), leaf_size_(std::max<std::size_t>(1, leaf_size)) {
  if (ps.empty()) throw std::invalid_argument("cannot build an index over an empty point set");
  if (n_ > std::numeric_limits<NodeIndex>::max()) throw std::invalid_argument("point set too large for index");
  order_.resize(n_);
  std::iota(order_.begin(), order_.end(), NodeIndex{0});
  nodes_.reserve(2 * (n_ / leaf_size_ + 1));
  // Snapshot the coordinates up front; build() reads them through point().
  points_ = ps.values();
  build(0, static_cast<std::uint32_t>(n_));
  // Re-lay the coordinates in tree order so leaf scans are contiguous.
  std::vector<double> reordered(points_.size());
  for (std::size_t pos = 0; pos < n_; ++pos) {
    std::copy_n(points_.begin() + static_cast<std::ptrdiff_t>(order_[pos] * dim_), dim_,
                reordered.begin() + static_cast<std::ptrdiff_t>(pos * dim_));
  }
  points_ = std::move(reordered);
  std::vector<NodeIndex> position(n_);
  for (std::size_t pos = 0; pos < n_; ++pos) position[order_[pos]] = static_cast<NodeIndex>(pos);
  position_ = std::move(position);
}

std::int32_t KdTree::build(std::uint32_t begin, std::uint32_t end) {
  const auto id = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back({begin, end, -1, -1});
  lo_.resize(lo_.size() + dim_);
  hi_.resize(hi_.size() + dim_);
  double* lo = lo_.data() + static_cast<std::size_t>(id) * dim_;
  double* hi = hi_.data() + static_cast<std::size_t>(id) * dim_;
  for (std::size_t l = 0; l < dim_; ++l) {
    lo[l] = hi[l] = points_[order_[begin] * dim_ + l];
  }
  for (auto i = begin + 1; i < end; ++i) {
    const double* p = points_.data() + order_[i] * dim_;
    for (std::size_t l = 0; l < dim_; ++l) {
      lo[l] = std::min(lo[l], p[l]);
      hi[l] = std::max(hi[l], p[l]);
    }
  }
  if (end - begin <= leaf_size_) return id;

  std::size_t split = 0;
  double widest = -1.0;
  for (std::size_t l = 0; l < dim_; ++l) {
    if (hi[l] - lo[l] > widest) {
      widest = hi[l] - lo[l];
      split = l;
    }
  }
  if (widest <= 0.0) return id;  // all points coincide

  const auto mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](NodeIndex a, NodeIndex b) {
                     const double va = points_[a * dim_ + split];
                     const double vb = points_[b * dim_ + split];
                     return va < vb || (va == vb && a < b);
                   });
  const auto left = build(begin, mid);
  const auto right = build(mid, end);
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

double KdTree::box_sq_distance(std::int32_t node, std::span<const double> q) const {
  const double* lo = lo_.data() + static_cast<std::size_t>(node) * dim_;
  const double* hi = hi_.data() + static_cast<std::size_t>(node) * dim_;
  double sum = 0.0;
  for (std::size_t l = 0; l < dim_; ++l) {
    double gap = 0.0;
    if (q[l] < lo[l]) {
      gap = lo[l] - q[l];
    } else if (q[l] > hi[l]) {
      gap = q[l] - hi[l];
    }
    sum += gap * gap;
  }
  return sum;
}

void KdTree::check_query(NodeIndex query_id) const {
  if (query_id >= n_) {
    throw std::out_of_range("query id " + std::to_string(query_id) + " out of range (n=" + std::to_string(n_) + ")");
  }
}

std::span<const double> KdTree::point(std::size_t i) const {
  return {points_.data() + static_cast<std::size_t>(position_[i]) * dim_, dim_};
}

NeighborList KdTree::knn(NodeIndex query_id, std::size_t k) const {
  check_query(query_id);
  if (k == 0) throw std::invalid_argument("k must be positive");
  NeighborList out{query_id, k, {}};
  const std::size_t want = std::min(k, n_ - 1);
  if (want == 0) return out;

  const auto q = point(query_id);
  auto worse = [](const Neighbor& a, const Neighbor& b) { return neighbor_less(a, b); };
  std::priority_queue<Neighbor, std::vector<Neighbor>, decltype(worse)> best(worse);

  auto visit = [&](auto&& self, std::int32_t node_id) -> void {
    if (best.size() == want && std::sqrt(box_sq_distance(node_id, q)) > best.top().distance) return;
    const Node& node = nodes_[static_cast<std::size_t>(node_id)];
    if (node.left < 0) {
      for (auto pos = node.begin; pos < node.end; ++pos) {
        const NodeIndex idx = order_[pos];
        if (idx == query_id) continue;
        const Neighbor cand{idx, std::sqrt(squared_distance(q, {points_.data() + pos * dim_, dim_}))};
        if (best.size() < want) {
          best.push(cand);
        } else if (neighbor_less(cand, best.top())) {
          best.pop();
          best.push(cand);
        }
      }
      return;
    }
    const double dl = box_sq_distance(node.left, q);
    const double dr = box_sq_distance(node.right, q);
    if (dl <= dr) {
      self(self, node.left);
      self(self, node.right);
    } else {
      self(self, node.right);
      self(self, node.left);
    }
  };
  visit(visit, 0);

  out.neighbors.resize(best.size());
  for (auto i = out.neighbors.size(); i-- > 0;) {
    out.neighbors[i] = best.top();
    best.pop();
  }
  return out;
}

std::vector<NodeIndex> KdTree::range(NodeIndex query_id, double radius) const {
  check_query(query_id);
  if (!(radius > 0.0)) throw std::invalid_argument("radius must be positive");
  const auto q = point(query_id);
  std::vector<NodeIndex> hits;
  auto visit = [&](auto&& self, std::int32_t node_id) -> void {
    if (std::sqrt(box_sq_distance(node_id, q)) >= radius) return;
    const Node& node = nodes_[static_cast<std::size_t>(node_id)];
    if (node.left < 0) {
      for (auto pos = node.begin; pos < node.end; ++pos) {
        const NodeIndex idx = order_[pos];
        if (idx == query_id) continue;
        if (std::sqrt(squared_distance(q, {points_.data() + pos * dim_, dim_})) < radius) hits.push_back(idx);
      }
      return;
    }
    self(self, node.left);
    self(self, node.right);
  };
  visit(visit, 0);
  std::sort(hits.begin(), hits.end());
  return hits;
}

bool KdTree::any_in_ball(std::span<const double> center, double radius_sq, bool inclusive, NodeIndex skip_a,
                         NodeIndex skip_b) const {
  auto inside = [&](double d2) { return inclusive ? d2 <= radius_sq : d2 < radius_sq; };
  auto visit = [&](auto&& self, std::int32_t node_id) -> bool {
    if (!inside(box_sq_distance(node_id, center))) return false;
    const Node& node = nodes_[static_cast<std::size_t>(node_id)];
    if (node.left < 0) {
      for (auto pos = node.begin; pos < node.end; ++pos) {
        const NodeIndex idx = order_[pos];
        if (idx == skip_a || idx == skip_b) continue;
        if (inside(squared_distance({points_.data() + pos * dim_, dim_}, center))) return true;
      }
      return false;
    }
    const double dl = box_sq_distance(node.left, center);
    const double dr = box_sq_distance(node.right, center);
    return dl <= dr ? (self(self, node.left) || self(self, node.right))
                    : (self(self, node.right) || self(self, node.left));
  };
  return visit(visit, 0);
}

}  // namespace graphforge
