#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "graphforge/point_set.hpp"

namespace graphforge {

struct CsvOptions {
  std::optional<std::string> label_column;
  char delimiter = ',';
};

/// Reads a headered CSV. Every non-label column must hold finite reals.
/// Row ids are the 0-based data row order in the file.
PointSet load_csv(const std::filesystem::path& path, const CsvOptions& opts = {});
PointSet parse_csv(std::string_view text, const CsvOptions& opts = {});

/// Writes features (and the label column last, when present) with
/// shortest round-trip decimals.
void write_csv(const PointSet& ps, const std::filesystem::path& path,
               const std::string& label_column = "label", char delimiter = ',');

/// Keeps the first occurrence of every bitwise-identical row. Labels take part
/// in the comparison when present.
PointSet dedup(const PointSet& ps);

struct ClassBalanceSpec {
  std::map<std::string, std::size_t> targets;
  std::uint64_t seed = 0;
};

/// Parses "A:10,B:5" style target lists.
std::map<std::string, std::size_t> parse_class_targets(const std::string& text);

/// Per-class uniform sampling without replacement. Classes not named in the
/// spec are dropped. Retained rows keep their relative order.
PointSet stratified_downsample(const PointSet& ps, const ClassBalanceSpec& spec);

/// Number of test rows per class code for a stratified split: per-class floor
/// of fraction * count, with the remainder up to round(fraction * n) handed to
/// the largest fractional parts (ties to the lower class code).
std::vector<std::size_t> stratified_test_quota(const std::vector<std::size_t>& class_counts,
                                               double test_fraction);

struct SplitResult {
  PointSet train;
  PointSet test;
};

SplitResult train_test_split(const PointSet& ps, double test_fraction, std::uint64_t seed);

struct ColumnRange {
  double min = 0.0;
  double max = 0.0;
};

struct ScalerParams {
  std::vector<std::string> columns;
  std::vector<ColumnRange> ranges;

  std::string to_json() const;
  static ScalerParams from_json(const std::string& text);
  PointSet apply(const PointSet& ps) const;
};

struct ScaledSplit {
  PointSet train;
  PointSet test;
  ScalerParams params;
};

/// Min-max scaling fit on `train` only. Constant columns map to 0; test
/// values are not clipped.
ScaledSplit standardize_fit_transform(const PointSet& train, const PointSet& test);

}  // namespace graphforge
