#include "graphforge/constructors.hpp"

#include <algorithm>
#include <string>

#include "graphforge/distance.hpp"

namespace graphforge {

namespace {

void require_pairs(const PointSet& ps) {
  if (ps.size() < 2) throw ConstructionError("graph construction needs at least 2 points");
}

Graph make_graph(const PointSet& ps, bool directed, ConstructionConfig cfg) {
  Graph g;
  g.n_nodes = ps.size();
  g.directed = directed;
  g.config = std::move(cfg);
  g.dataset_checksum = dataset_checksum(ps);
  return g;
}

/// Concatenates per-node edge buckets in node order, so the result does not
/// depend on how nodes were scheduled across threads.
template <typename Bucket>
std::vector<Edge> flatten(const std::vector<Bucket>& buckets) {
  std::size_t total = 0;
  for (const auto& b : buckets) total += b.size();
  std::vector<Edge> out;
  out.reserve(total);
  for (const auto& b : buckets) out.insert(out.end(), b.begin(), b.end());
  return out;
}

bool lists_contains(const NeighborList& list, NodeIndex idx) {
  return std::any_of(list.neighbors.begin(), list.neighbors.end(),
                     [idx](const Neighbor& nb) { return nb.index == idx; });
}

void reject_coincident(const std::vector<NeighborList>& nearest) {
  for (const auto& list : nearest) {
    if (!list.neighbors.empty() && list.neighbors.front().distance == 0.0) {
      throw ConstructionError("coincident points " + std::to_string(list.query_id) + " and " +
                              std::to_string(list.neighbors.front().index) +
                              " (run dedup before gabriel construction)");
    }
  }
}

/// Blocker search through the index: true when no third point lies in the
/// diametral ball of (a, b).
bool gabriel_empty(const KdTree& index, NodeIndex a, NodeIndex b, GabrielBoundary boundary,
                   std::vector<double>& mid) {
  const auto pa = index.point(a);
  const auto pb = index.point(b);
  for (std::size_t l = 0; l < pa.size(); ++l) mid[l] = (pa[l] + pb[l]) / 2.0;
  const double radius_sq = squared_distance(pa, pb) / 4.0;
  return !index.any_in_ball(mid, radius_sq, boundary == GabrielBoundary::closed, a, b);
}

}  // namespace

std::vector<NeighborList> all_knn(const KdTree& index, std::size_t k) {
  const auto n = static_cast<std::int64_t>(index.size());
  std::vector<NeighborList> lists(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(dynamic, 256)
  for (std::int64_t i = 0; i < n; ++i) {
    lists[static_cast<std::size_t>(i)] = index.knn(static_cast<NodeIndex>(i), k);
  }
  return lists;
}

Graph knn_graph(const PointSet& ps, std::size_t k, Symmetrize symmetrize) {
  require_pairs(ps);
  if (k < 1) throw ConstructionError("k must be at least 1");
  ConstructionConfig cfg;
  cfg.method = Method::knn;
  cfg.k = k;
  cfg.symmetrize = symmetrize;
  Graph g = make_graph(ps, symmetrize == Symmetrize::none, cfg);

  const KdTree index(ps);
  const auto lists = all_knn(index, k);
  g.edges.reserve(ps.size() * std::min(k, ps.size() - 1));
  for (const auto& list : lists) {
    for (const auto& nb : list.neighbors) g.edges.push_back({list.query_id, nb.index});
  }
  g.canonicalize();
  return g;
}

Graph mnn_graph(const PointSet& ps, std::size_t k) {
  require_pairs(ps);
  if (k < 1) throw ConstructionError("k must be at least 1");
  ConstructionConfig cfg;
  cfg.method = Method::mnn;
  cfg.k = k;
  Graph g = make_graph(ps, false, cfg);

  const KdTree index(ps);
  const auto lists = all_knn(index, k);
  for (const auto& list : lists) {
    for (const auto& nb : list.neighbors) {
      if (list.query_id < nb.index && lists_contains(lists[nb.index], list.query_id)) {
        g.edges.push_back({list.query_id, nb.index});
      }
    }
  }
  g.canonicalize();
  return g;
}

std::size_t snn_similarity(const PointSet& ps, NodeIndex a, NodeIndex b, std::size_t k) {
  if (a >= ps.size() || b >= ps.size()) throw std::out_of_range("snn_similarity: node index out of range");
  if (a == b) throw ConstructionError("snn_similarity: endpoints must differ");
  if (k < 1) throw ConstructionError("k must be at least 1");
  const KdTree index(ps);
  const auto na = index.knn(a, k);
  const auto nb = index.knn(b, k);
  std::size_t shared = 0;
  for (const auto& x : na.neighbors) shared += lists_contains(nb, x.index) ? 1 : 0;
  return shared;
}

Graph snn_graph(const PointSet& ps, std::size_t k, std::size_t theta, bool weighted) {
  require_pairs(ps);
  if (k < 1) throw ConstructionError("k must be at least 1");
  if (theta < 1) throw ConstructionError("theta must be at least 1");
  if (theta > k) {
    throw ConstructionError("theta (" + std::to_string(theta) + ") exceeds k (" + std::to_string(k) + ")");
  }
  ConstructionConfig cfg;
  cfg.method = Method::snn;
  cfg.k = k;
  cfg.theta = theta;
  cfg.snn_weighted = weighted;
  Graph g = make_graph(ps, false, cfg);

  const std::size_t n = ps.size();
  const KdTree index(ps);
  const auto lists = all_knn(index, k);

  // Reverse neighbor lists: holders[c] = nodes whose k-NN contain c, ascending.
  std::vector<std::size_t> offset(n + 1, 0);
  for (const auto& list : lists) {
    for (const auto& nb : list.neighbors) ++offset[nb.index + 1];
  }
  for (std::size_t c = 0; c < n; ++c) offset[c + 1] += offset[c];
  std::vector<NodeIndex> holders(offset[n]);
  {
    auto cursor = offset;
    for (const auto& list : lists) {
      for (const auto& nb : list.neighbors) holders[cursor[nb.index]++] = list.query_id;
    }
  }

  struct WeightedEdge {
    Edge e;
    std::size_t shared;
  };
  std::vector<std::vector<WeightedEdge>> buckets(n);
  const auto n_signed = static_cast<std::int64_t>(n);
#pragma omp parallel
  {
    std::vector<std::uint32_t> count(n, 0);
    std::vector<NodeIndex> touched;
#pragma omp for schedule(dynamic, 256)
    for (std::int64_t ai = 0; ai < n_signed; ++ai) {
      const auto a = static_cast<NodeIndex>(ai);
      touched.clear();
      for (const auto& c : lists[a].neighbors) {
        for (auto h = offset[c.index]; h < offset[c.index + 1]; ++h) {
          const NodeIndex b = holders[h];
          if (b <= a) continue;
          if (count[b]++ == 0) touched.push_back(b);
        }
      }
      std::sort(touched.begin(), touched.end());
      auto& out = buckets[a];
      for (auto b : touched) {
        if (count[b] >= theta) out.push_back({{a, b}, count[b]});
        count[b] = 0;
      }
    }
  }

  for (const auto& bucket : buckets) {
    for (const auto& we : bucket) g.edges.push_back(we.e);
  }
  if (weighted) {
    std::vector<double> w;
    w.reserve(g.edges.size());
    for (const auto& bucket : buckets) {
      for (const auto& we : bucket) w.push_back(static_cast<double>(we.shared));
    }
    g.weights = std::move(w);
  }
  g.canonicalize();
  return g;
}

Graph epsilon_graph(const PointSet& ps, double epsilon) {
  require_pairs(ps);
  if (!(epsilon > 0.0)) throw ConstructionError("epsilon must be positive");
  ConstructionConfig cfg;
  cfg.method = Method::epsilon;
  cfg.epsilon = epsilon;
  Graph g = make_graph(ps, false, cfg);

  const KdTree index(ps);
  const auto n = static_cast<std::int64_t>(ps.size());
  // Dense radii can produce hundreds of millions of edges, so buckets hold
  // only the higher endpoint and are released as they are copied out.
  std::vector<std::vector<NodeIndex>> buckets(ps.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto a = static_cast<NodeIndex>(i);
    auto hits = index.range(a, epsilon);
    std::erase_if(hits, [a](NodeIndex b) { return b <= a; });
    hits.shrink_to_fit();
    buckets[a] = std::move(hits);
  }
  std::size_t total = 0;
  for (const auto& b : buckets) total += b.size();
  g.edges.reserve(total);
  for (NodeIndex a = 0; a < buckets.size(); ++a) {
    for (auto b : buckets[a]) g.edges.push_back({a, b});
    std::vector<NodeIndex>().swap(buckets[a]);
  }
  // Already canonical: rows in node order, each range result ascending.
  return g;
}

bool gabriel_pair_test(const PointSet& ps, NodeIndex a, NodeIndex b, GabrielBoundary boundary) {
  if (a >= ps.size() || b >= ps.size()) throw std::out_of_range("gabriel_pair_test: node index out of range");
  if (a == b) throw ConstructionError("gabriel_pair_test: endpoints must differ");
  const auto pa = ps.row(a);
  const auto pb = ps.row(b);
  const double radius_sq = squared_distance(pa, pb) / 4.0;
  if (radius_sq == 0.0) {
    throw ConstructionError("gabriel_pair_test: coincident endpoints " + std::to_string(a) + " and " + std::to_string(b));
  }
  std::vector<double> mid(ps.dim());
  for (std::size_t l = 0; l < mid.size(); ++l) mid[l] = (pa[l] + pb[l]) / 2.0;
  for (std::size_t c = 0; c < ps.size(); ++c) {
    if (c == a || c == b) continue;
    const double d2 = squared_distance(ps.row(c), mid);
    const bool blocks = boundary == GabrielBoundary::closed ? d2 <= radius_sq : d2 < radius_sq;
    if (blocks) return false;
  }
  return true;
}

Graph gabriel_graph(const PointSet& ps, GabrielMode mode, std::size_t candidates, GabrielBoundary boundary) {
  require_pairs(ps);
  if (mode == GabrielMode::candidate && candidates < 1) {
    throw ConstructionError("gabriel candidate count must be positive");
  }
  ConstructionConfig cfg;
  cfg.method = Method::gabriel;
  cfg.gabriel_mode = mode;
  cfg.gabriel_candidates = candidates;
  cfg.gabriel_boundary = boundary;
  Graph g = make_graph(ps, false, cfg);

  const std::size_t n = ps.size();
  const KdTree index(ps);
  const std::size_t probe = mode == GabrielMode::candidate ? candidates : 1;
  const auto lists = all_knn(index, probe);
  reject_coincident(lists);

  std::vector<std::vector<Edge>> buckets(n);
  const auto n_signed = static_cast<std::int64_t>(n);
#pragma omp parallel
  {
    std::vector<double> mid(ps.dim());
#pragma omp for schedule(dynamic, 16)
    for (std::int64_t ai = 0; ai < n_signed; ++ai) {
      const auto a = static_cast<NodeIndex>(ai);
      auto& out = buckets[a];
      if (mode == GabrielMode::exact) {
        for (auto b = a + 1; b < n; ++b) {
          if (gabriel_empty(index, a, b, boundary, mid)) out.push_back({a, b});
        }
        continue;
      }
      for (const auto& nb : lists[a].neighbors) {
        const NodeIndex b = nb.index;
        // A pair listed from both sides is tested once, from its lower endpoint.
        if (b < a && lists_contains(lists[b], a)) continue;
        if (gabriel_empty(index, a, b, boundary, mid)) out.push_back({std::min(a, b), std::max(a, b)});
      }
    }
  }
  g.edges = flatten(buckets);
  g.canonicalize();
  return g;
}

Graph build_graph(const PointSet& ps, const ConstructionConfig& cfg) {
  cfg.validate();
  Graph g;
  switch (cfg.method) {
    case Method::knn: g = knn_graph(ps, cfg.k, cfg.symmetrize); break;
    case Method::mnn: g = mnn_graph(ps, cfg.k); break;
    case Method::snn: g = snn_graph(ps, cfg.k, cfg.effective_theta(), cfg.snn_weighted); break;
    case Method::epsilon: g = epsilon_graph(ps, cfg.epsilon); break;
    case Method::gabriel: g = gabriel_graph(ps, cfg.gabriel_mode, cfg.gabriel_candidates, cfg.gabriel_boundary); break;
  }
  g.config = cfg;
  return g;
}

}  // namespace graphforge
