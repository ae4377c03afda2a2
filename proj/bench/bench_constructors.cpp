// Indexed OpenMP constructors against the serial brute-force reference on the
// same random point sets. Pass --benchmark_filter to narrow the run.

#include <benchmark/benchmark.h>

#include <map>
#include <utility>

#include "graphforge/constructors.hpp"
#include "graphforge/reference.hpp"
#include "graphforge/rng.hpp"

namespace {

using namespace graphforge;

const PointSet& points(std::size_t n, std::size_t d) {
  static std::map<std::pair<std::size_t, std::size_t>, PointSet> cache;
  auto it = cache.find({n, d});
  if (it == cache.end()) {
    SampleRng rng(n * 31 + d);
    std::vector<double> values(n * d);
    for (auto& v : values) v = rng.unit();
    std::vector<std::uint64_t> ids(n);
    for (std::size_t i = 0; i < n; ++i) ids[i] = i;
    it = cache.emplace(std::make_pair(n, d), PointSet(d, std::move(values), std::move(ids))).first;
  }
  return it->second;
}

ConstructionConfig config_for(Method m) {
  ConstructionConfig cfg;
  cfg.method = m;
  cfg.k = 5;
  cfg.theta = 2;
  cfg.epsilon = 0.3;
  return cfg;
}

template <bool Indexed>
void BM_Build(benchmark::State& state) {
  const auto method = static_cast<Method>(state.range(0));
  const auto& ps = points(static_cast<std::size_t>(state.range(1)), 6);
  const auto cfg = config_for(method);
  std::size_t edges = 0;
  for (auto _ : state) {
    const auto g = Indexed ? build_graph(ps, cfg) : reference::build_graph(ps, cfg);
    edges = g.n_edges();
    benchmark::DoNotOptimize(edges);
  }
  state.SetLabel(to_string(method));
  state.counters["edges"] = static_cast<double>(edges);
}

void methods(benchmark::internal::Benchmark* b) {
  for (auto m : {Method::knn, Method::mnn, Method::snn, Method::epsilon, Method::gabriel})
    for (long n : {500, 2000}) b->Args({static_cast<long>(m), n});
  b->Unit(benchmark::kMillisecond);
}

BENCHMARK(BM_Build<true>)->Name("indexed")->Apply(methods);
BENCHMARK(BM_Build<false>)->Name("serial")->Apply(methods);

}  // namespace

BENCHMARK_MAIN();
