#pragma once

#include <filesystem>
#include <stdexcept>
#include <utility>

#include "graphforge/graph.hpp"
#include "graphforge/point_set.hpp"

namespace graphforge {

inline constexpr int kBundleFormatVersion = 1;

/// Unreadable, inconsistent or tampered bundle.
class BundleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Writes meta.json, edges.csv, features.csv and, when present, labels.csv and
/// weights.csv. Output bytes depend only on (g, ps). The bundle is assembled in
/// a sibling temporary directory and renamed into place, replacing any
/// existing directory at `dir`.
void write_bundle(const Graph& g, const PointSet& ps, const std::filesystem::path& dir);

struct LoadedBundle {
  Graph graph;
  PointSet points;
};

LoadedBundle read_bundle(const std::filesystem::path& dir);

}  // namespace graphforge
