#include <gtest/gtest.h>

#include "graphforge/constructors.hpp"
#include "graphforge/parallel.hpp"
#include "graphforge/reference.hpp"
#include "oracles.hpp"

using namespace graphforge;
using oracle::EdgeSet;

namespace {

PointSet line(std::initializer_list<double> xs) {
  std::vector<std::vector<double>> rows;
  for (double x : xs) rows.push_back({x});
  return PointSet::from_rows(rows);
}

const PointSet& three_points() {
  static const PointSet ps = PointSet::from_rows({{0, 0}, {1, 0}, {10, 0}});
  return ps;
}

void expect_canonical(const Graph& g) {
  EXPECT_NO_THROW(g.check_invariants());
}

}  // namespace

// --- kNN -------------------------------------------------------------------

TEST(KnnGraph, DirectedSmallExample) {
  const auto g = knn_graph(three_points(), 1, Symmetrize::none);
  EXPECT_TRUE(g.directed);
  EXPECT_EQ(oracle::edges_of(g), (EdgeSet{{0, 1}, {1, 0}, {2, 1}}));
}

TEST(KnnGraph, UnionSymmetrized) {
  const auto g = knn_graph(three_points(), 1, Symmetrize::union_);
  EXPECT_FALSE(g.directed);
  EXPECT_EQ(oracle::edges_of(g), (EdgeSet{{0, 1}, {1, 2}}));
}

TEST(KnnGraph, KCappedForTwoNodes) {
  const auto g = knn_graph(PointSet::from_rows({{0.0}, {1.0}}), 3, Symmetrize::none);
  EXPECT_EQ(oracle::edges_of(g), (EdgeSet{{0, 1}, {1, 0}}));
}

TEST(KnnGraph, OutDegreeAndNoIsolatedNodes) {
  const auto ps = oracle::uniform_points(300, 6, 5);
  const auto g = knn_graph(ps, 3, Symmetrize::none);
  std::vector<int> out(ps.size(), 0);
  for (const auto& e : g.edges) ++out[e.u];
  for (int d : out) EXPECT_EQ(d, 3);
  const auto u = knn_graph(ps, 3, Symmetrize::union_);
  std::vector<int> deg(ps.size(), 0);
  for (const auto& e : u.edges) ++deg[e.u], ++deg[e.v];
  for (int d : deg) EXPECT_GE(d, 3);
}

TEST(KnnGraph, Errors) {
  EXPECT_THROW(knn_graph(PointSet::from_rows({{0.0}}), 1, Symmetrize::none), ConstructionError);
  EXPECT_THROW(knn_graph(three_points(), 0, Symmetrize::none), ConstructionError);
}

// --- MNN -------------------------------------------------------------------

TEST(MnnGraph, SmallExamples) {
  EXPECT_EQ(oracle::edges_of(mnn_graph(three_points(), 1)), (EdgeSet{{0, 1}}));
  EXPECT_EQ(oracle::edges_of(mnn_graph(PointSet::from_rows({{0.0}, {5.0}}), 4)), (EdgeSet{{0, 1}}));
}

TEST(MnnGraph, SubsetOfUnionKnn) {
  const auto ps = oracle::uniform_points(100, 2, 8);
  for (std::size_t k : {1, 3, 6}) {
    const auto m = oracle::edges_of(mnn_graph(ps, k));
    const auto u = oracle::edges_of(knn_graph(ps, k, Symmetrize::union_));
    EXPECT_TRUE(std::includes(u.begin(), u.end(), m.begin(), m.end()));
  }
}

// --- SNN -------------------------------------------------------------------

TEST(SnnSimilarity, CollinearExample) {
  // N2(0) = {1, 2}, N2(1) = {0, 2}, N2(2) = {0, 1}, N2(3) = {1, 2}.
  const auto ps = line({0, 1, 2, 9});
  EXPECT_EQ(snn_similarity(ps, 0, 1, 2), 1u);
  EXPECT_EQ(snn_similarity(ps, 0, 3, 2), 2u);
  EXPECT_EQ(snn_similarity(ps, 3, 0, 2), 2u);
  EXPECT_THROW(snn_similarity(ps, 1, 1, 2), ConstructionError);
}

TEST(SnnSimilarity, DisjointClustersShareNothing) {
  const auto ps = line({0, 0.1, 0.2, 0.3, 100, 100.1, 100.2, 100.3});
  EXPECT_EQ(snn_similarity(ps, 0, 5, 2), 0u);
}

TEST(SnnSimilarity, SymmetricAndBoundedOnRandomPairs) {
  const auto ps = oracle::uniform_points(120, 3, 21);
  std::mt19937_64 rng(2);
  for (int t = 0; t < 1000; ++t) {
    const auto a = static_cast<NodeIndex>(rng() % ps.size());
    auto b = static_cast<NodeIndex>(rng() % ps.size());
    if (a == b) b = (b + 1) % ps.size();
    const auto s = snn_similarity(ps, a, b, 4);
    EXPECT_EQ(s, snn_similarity(ps, b, a, 4));
    EXPECT_LE(s, 4u);
  }
}

TEST(SnnGraph, CollinearWithThetaOne) {
  const auto g = snn_graph(line({0, 1, 2, 9}), 2, 1, true);
  EXPECT_TRUE(g.has_edge(0, 1));
  // Every pair shares at least one neighbor here; {0, 3} shares two.
  EXPECT_EQ(g.n_edges(), 6u);
  ASSERT_TRUE(g.weights);
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    const double expect = (g.edges[i] == Edge{0, 3}) ? 2.0 : 1.0;
    EXPECT_EQ((*g.weights)[i], expect);
  }
  EXPECT_EQ(oracle::edges_of(snn_graph(line({0, 1, 2, 9}), 2, 2, false)), (EdgeSet{{0, 3}}));
}

TEST(SnnGraph, MonotoneInTheta) {
  const auto ps = oracle::uniform_points(200, 6, 13);
  EdgeSet previous;
  for (std::size_t theta = 5; theta >= 1; --theta) {
    const auto cur = oracle::edges_of(snn_graph(ps, 5, theta, false));
    EXPECT_TRUE(std::includes(cur.begin(), cur.end(), previous.begin(), previous.end()));
    previous = cur;
  }
}

TEST(SnnGraph, MatchesOracleOnRandomData) {
  const auto ps = oracle::uniform_points(300, 6, 77);
  EXPECT_EQ(oracle::edges_of(snn_graph(ps, 3, 2, false)), oracle::snn(ps, 3, 2));
  EXPECT_EQ(snn_graph(ps, 3, 2, true), reference::snn_graph(ps, 3, 2, true));
}

TEST(SnnGraph, Errors) {
  EXPECT_THROW(snn_graph(three_points(), 2, 3, false), ConstructionError);
  EXPECT_THROW(snn_graph(three_points(), 2, 0, false), ConstructionError);
}

// --- epsilon ---------------------------------------------------------------

TEST(EpsilonGraph, StrictBoundary) {
  EXPECT_EQ(epsilon_graph(PointSet::from_rows({{0.0}, {0.4}}), 0.5).n_edges(), 1u);
  EXPECT_EQ(epsilon_graph(PointSet::from_rows({{0.0}, {0.5}}), 0.5).n_edges(), 0u);
  EXPECT_THROW(epsilon_graph(three_points(), 0.0), ConstructionError);
  EXPECT_THROW(epsilon_graph(three_points(), -1.0), ConstructionError);
}

TEST(EpsilonGraph, NestedAndMatchesOracle) {
  const auto ps = oracle::uniform_points(500, 2, 99);
  EdgeSet previous;
  for (double eps : {0.1, 0.5, 1.0}) {
    const auto cur = oracle::edges_of(epsilon_graph(ps, eps));
    EXPECT_EQ(cur, oracle::epsilon(ps, eps));
    EXPECT_TRUE(std::includes(cur.begin(), cur.end(), previous.begin(), previous.end()));
    previous = cur;
  }
}

// --- Gabriel ---------------------------------------------------------------

TEST(GabrielPairTest, HandExamples) {
  const auto mid = PointSet::from_rows({{0, 0}, {2, 0}, {1, 0}});
  EXPECT_FALSE(gabriel_pair_test(mid, 0, 1));
  const auto on_sphere = PointSet::from_rows({{0, 0}, {2, 0}, {1, 1}});
  EXPECT_TRUE(gabriel_pair_test(on_sphere, 0, 1));
  EXPECT_FALSE(gabriel_pair_test(on_sphere, 0, 1, GabrielBoundary::closed));
  const auto far = PointSet::from_rows({{0, 0}, {2, 0}, {5, 5}});
  EXPECT_TRUE(gabriel_pair_test(far, 0, 1));
  EXPECT_TRUE(gabriel_pair_test(far, 0, 1, GabrielBoundary::closed));
}

TEST(GabrielPairTest, Errors) {
  const auto dup = PointSet::from_rows({{1, 1}, {1, 1}, {3, 3}});
  EXPECT_THROW(gabriel_pair_test(dup, 0, 1), ConstructionError);
  EXPECT_THROW(gabriel_pair_test(dup, 2, 2), ConstructionError);
}

TEST(GabrielGraph, CollinearMiddleBlocks) {
  const auto g = gabriel_graph(line({0, 1, 2}), GabrielMode::exact);
  EXPECT_EQ(oracle::edges_of(g), (EdgeSet{{0, 1}, {1, 2}}));
}

TEST(GabrielGraph, UnitSquareBoundaryModes) {
  // Each diagonal's midpoint is (0.5, 0.5) and the other corners sit exactly
  // on its diametral circle: squared offset 0.5 against radius^2 2/4 = 0.5.
  const auto square = PointSet::from_rows({{0, 0}, {1, 0}, {0, 1}, {1, 1}});
  EXPECT_EQ(oracle::edges_of(gabriel_graph(square, GabrielMode::exact)),
            (EdgeSet{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}));
  EXPECT_EQ(oracle::edges_of(gabriel_graph(square, GabrielMode::exact, 20, GabrielBoundary::closed)),
            (EdgeSet{{0, 1}, {0, 2}, {1, 3}, {2, 3}}));
}

TEST(GabrielGraph, CoincidentPointsRejected) {
  const auto dup = PointSet::from_rows({{0, 0}, {1, 1}, {0, 0}});
  EXPECT_THROW(gabriel_graph(dup, GabrielMode::exact), ConstructionError);
  EXPECT_THROW(gabriel_graph(dup, GabrielMode::candidate, 2), ConstructionError);
}

TEST(GabrielGraph, ContainsNearestNeighborEdgesAndIsConnected) {
  const auto ps = oracle::uniform_points(200, 2, 31);
  const auto g = gabriel_graph(ps, GabrielMode::exact);
  for (NodeIndex i = 0; i < ps.size(); ++i) {
    const auto nn = oracle::knn(ps, i, 1).front();
    EXPECT_TRUE(g.has_edge(i, nn)) << i;
  }
  EXPECT_EQ(oracle::component_count(ps.size(), oracle::edges_of(g)), 1u);
}

TEST(GabrielGraph, CandidateModeIsSubsetOfExact) {
  const auto ps = oracle::uniform_points(300, 6, 41);
  const auto exact = oracle::edges_of(gabriel_graph(ps, GabrielMode::exact));
  EdgeSet previous;
  for (std::size_t kc : {1, 3, 8, 20, 299}) {
    const auto cand = oracle::edges_of(gabriel_graph(ps, GabrielMode::candidate, kc));
    EXPECT_TRUE(std::includes(exact.begin(), exact.end(), cand.begin(), cand.end())) << kc;
    EXPECT_TRUE(std::includes(cand.begin(), cand.end(), previous.begin(), previous.end())) << kc;
    EXPECT_EQ(cand, oracle::edges_of(reference::gabriel_graph(ps, GabrielMode::candidate, kc, GabrielBoundary::open)));
    previous = cand;
  }
  // With every other point as a candidate the two modes coincide.
  EXPECT_EQ(previous, exact);
}

TEST(GabrielGraph, MatchesAngleOracle) {
  for (std::size_t d : {2, 6}) {
    const auto ps = oracle::uniform_points(150, d, 50 + d);
    EXPECT_EQ(oracle::edges_of(gabriel_graph(ps, GabrielMode::exact)), oracle::gabriel(ps));
    EXPECT_EQ(oracle::edges_of(gabriel_graph(ps, GabrielMode::exact, 20, GabrielBoundary::closed)),
              oracle::gabriel(ps, true));
  }
}

TEST(GabrielGraph, LatticeBoundaryTies) {
  // Integer grids put many third points exactly on diametral circles.
  std::vector<std::vector<double>> rows;
  for (int x = 0; x < 5; ++x)
    for (int y = 0; y < 5; ++y) rows.push_back({double(x), double(y)});
  const auto ps = PointSet::from_rows(rows);
  for (auto boundary : {GabrielBoundary::open, GabrielBoundary::closed}) {
    EXPECT_EQ(gabriel_graph(ps, GabrielMode::exact, 20, boundary),
              reference::gabriel_graph(ps, GabrielMode::exact, 20, boundary));
    EXPECT_EQ(oracle::edges_of(gabriel_graph(ps, GabrielMode::exact, 20, boundary)),
              oracle::gabriel(ps, boundary == GabrielBoundary::closed));
  }
}

// --- shared properties -------------------------------------------------------

TEST(Constructors, ProvenanceAndCanonicalForm) {
  const auto ps = oracle::uniform_points(120, 6, 3);
  ConstructionConfig cfg;
  cfg.method = Method::snn;
  cfg.theta = 1;
  cfg.epsilon = 0.9;  // unused by snn but recorded
  const auto g = build_graph(ps, cfg);
  EXPECT_EQ(g.config, cfg);
  EXPECT_EQ(g.dataset_checksum, dataset_checksum(ps));
  expect_canonical(g);
}

TEST(Constructors, IndependentOfThreadCount) {
  const auto ps = oracle::uniform_points(400, 6, 64);
  std::vector<ConstructionConfig> cfgs(5);
  cfgs[0].method = Method::knn;
  cfgs[1].method = Method::mnn;
  cfgs[2].method = Method::snn;
  cfgs[3].method = Method::epsilon;
  cfgs[4].method = Method::gabriel;
  cfgs[4].gabriel_mode = GabrielMode::candidate;
  for (const auto& cfg : cfgs) {
    set_thread_count(1);
    const auto one = build_graph(ps, cfg);
    set_thread_count(8);
    const auto eight = build_graph(ps, cfg);
    EXPECT_EQ(one, eight) << to_string(cfg.method);
  }
  set_thread_count(0);
}

TEST(Config, ValidationAndParsing) {
  ConstructionConfig cfg;
  cfg.method = Method::snn;
  cfg.k = 3;
  cfg.theta = 4;
  EXPECT_THROW(cfg.validate(), ConstructionError);
  cfg.theta.reset();
  EXPECT_EQ(cfg.effective_theta(), 2u);
  EXPECT_NO_THROW(cfg.validate());
  cfg.metric = "cosine";
  EXPECT_THROW(cfg.validate(), ConstructionError);

  ConstructionConfig g;
  parse_gabriel_mode("candidate:7", g);
  EXPECT_EQ(g.gabriel_mode, GabrielMode::candidate);
  EXPECT_EQ(g.gabriel_candidates, 7u);
  EXPECT_THROW(parse_gabriel_mode("candidate:0", g), ConstructionError);
  EXPECT_THROW(parse_gabriel_mode("fuzzy", g), ConstructionError);
  EXPECT_EQ(ConstructionConfig::from_json(g.to_json()), g);
}
