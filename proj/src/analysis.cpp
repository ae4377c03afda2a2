#include "graphforge/analysis.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace graphforge {

DisjointSets::DisjointSets(std::size_t n) : parent_(n), size_(n, 1) {
  std::iota(parent_.begin(), parent_.end(), std::size_t{0});
}

std::size_t DisjointSets::find(std::size_t x) {
  while (parent_[x] != x) {
    parent_[x] = parent_[parent_[x]];
    x = parent_[x];
  }
  return x;
}

bool DisjointSets::unite(std::size_t a, std::size_t b) {
  a = find(a);
  b = find(b);
  if (a == b) return false;
  if (size_[a] < size_[b]) std::swap(a, b);
  parent_[b] = a;
  size_[a] += size_[b];
  return true;
}

Components connected_components(const Graph& g) {
  DisjointSets sets(g.n_nodes);
  for (const auto& e : g.edges) sets.unite(e.u, e.v);
  Components out;
  out.id.assign(g.n_nodes, 0);
  constexpr auto kUnset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> root_id(g.n_nodes, kUnset);
  for (std::size_t v = 0; v < g.n_nodes; ++v) {
    auto& slot = root_id[sets.find(v)];
    if (slot == kUnset) slot = out.count++;
    out.id[v] = slot;
  }
  return out;
}

TopologyReport topology_report(const Graph& g, const std::optional<Labels>& labels) {
  if (labels && labels->codes.size() != g.n_nodes) {
    throw std::invalid_argument("label count " + std::to_string(labels->codes.size()) + " does not match " +
                                std::to_string(g.n_nodes) + " nodes");
  }
  TopologyReport r;
  r.n_nodes = g.n_nodes;
  r.n_edges = g.n_edges();
  r.directed = g.directed;

  std::vector<std::size_t> degree(g.n_nodes, 0);
  std::vector<char> touched(g.n_nodes, 0);
  for (const auto& e : g.edges) {
    ++degree[e.u];
    if (!g.directed) ++degree[e.v];
    touched[e.u] = touched[e.v] = 1;
  }
  if (g.n_nodes > 0) {
    const auto [lo, hi] = std::minmax_element(degree.begin(), degree.end());
    r.min_degree = static_cast<double>(*lo);
    r.max_degree = static_cast<double>(*hi);
    r.mean_degree = static_cast<double>(std::accumulate(degree.begin(), degree.end(), std::size_t{0})) /
                    static_cast<double>(g.n_nodes);
  }
  r.isolated_count = static_cast<std::size_t>(std::count(touched.begin(), touched.end(), 0));

  const auto comps = connected_components(g);
  r.n_components = comps.count;
  if (g.n_nodes > 0) {
    std::vector<std::size_t> sizes(comps.count, 0);
    for (auto c : comps.id) ++sizes[c];
    r.largest_component_fraction =
        static_cast<double>(*std::max_element(sizes.begin(), sizes.end())) / static_cast<double>(g.n_nodes);
  }

  if (labels) {
    std::size_t same = 0;
    std::vector<std::size_t> incident(labels->num_classes(), 0), internal(labels->num_classes(), 0);
    for (const auto& e : g.edges) {
      const auto cu = labels->codes[e.u];
      const auto cv = labels->codes[e.v];
      if (cu == cv) {
        ++same;
        ++incident[cu];
        ++internal[cu];
      } else {
        ++incident[cu];
        ++incident[cv];
      }
    }
    r.homophily = g.edges.empty() ? 0.0 : static_cast<double>(same) / static_cast<double>(g.n_edges());
    for (std::size_t c = 0; c < labels->num_classes(); ++c) {
      if (incident[c] > 0) {
        r.class_homophily[labels->class_names[c]] =
            static_cast<double>(internal[c]) / static_cast<double>(incident[c]);
      }
    }
  }
  return r;
}

std::string TopologyReport::to_json() const {
  nlohmann::ordered_json j;
  j["n_nodes"] = n_nodes;
  j["n_edges"] = n_edges;
  j["directed"] = directed;
  j["min_degree"] = min_degree;
  j["max_degree"] = max_degree;
  j["mean_degree"] = mean_degree;
  j["isolated_count"] = isolated_count;
  j["n_components"] = n_components;
  j["largest_component_fraction"] = largest_component_fraction;
  j["homophily"] = homophily ? nlohmann::ordered_json(*homophily) : nlohmann::ordered_json(nullptr);
  j["class_homophily"] = nlohmann::ordered_json::object();
  for (const auto& [name, h] : class_homophily) j["class_homophily"][name] = h;
  return j.dump(2) + "\n";
}

std::string TopologyReport::to_table() const {
  std::vector<std::pair<std::string, std::string>> rows;
  auto num = [](double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return std::string(buf);
  };
  rows.emplace_back("nodes", std::to_string(n_nodes));
  rows.emplace_back("edges", std::to_string(n_edges));
  rows.emplace_back("directed", directed ? "yes" : "no");
  rows.emplace_back(directed ? "out-degree min" : "degree min", num(min_degree));
  rows.emplace_back(directed ? "out-degree max" : "degree max", num(max_degree));
  rows.emplace_back(directed ? "out-degree mean" : "degree mean", num(mean_degree));
  rows.emplace_back("isolated nodes", std::to_string(isolated_count));
  rows.emplace_back("components", std::to_string(n_components));
  rows.emplace_back("largest component", num(largest_component_fraction));
  if (homophily) rows.emplace_back("homophily", num(*homophily));
  for (const auto& [name, h] : class_homophily) rows.emplace_back("homophily[" + name + "]", num(h));

  std::size_t width = 0;
  for (const auto& row : rows) width = std::max(width, row.first.size());
  std::ostringstream out;
  for (const auto& [key, value] : rows) {
    out << key << std::string(width - key.size() + 2, ' ') << value << '\n';
  }
  return out.str();
}

}  // namespace graphforge
