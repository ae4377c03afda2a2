#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace graphforge {

using NodeIndex = std::uint32_t;

/// Malformed or inconsistent input data (CSV contents, labels, sampling specs).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Class labels stored as dense codes into a name table. Codes follow the
/// order in which class names first appear in the source data.
struct Labels {
  std::vector<std::int32_t> codes;
  std::vector<std::string> class_names;

  std::size_t num_classes() const { return class_names.size(); }
  const std::string& name_of(std::size_t row) const { return class_names[codes[row]]; }
  /// Returns -1 when the class is unknown.
  std::int32_t code_of(const std::string& name) const;

  bool operator==(const Labels&) const = default;
};

/// Dense row-major n x d feature matrix with optional labels and stable
/// source row identifiers.
class PointSet {
 public:
  PointSet() = default;
  PointSet(std::size_t dim, std::vector<double> values, std::vector<std::uint64_t> row_ids,
           std::optional<Labels> labels = std::nullopt,
           std::vector<std::string> feature_names = {});

  /// Row ids default to 0..n-1.
  static PointSet from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t size() const { return row_ids_.size(); }
  std::size_t dim() const { return dim_; }
  bool empty() const { return row_ids_.empty(); }

  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * dim_, dim_};
  }
  double at(std::size_t i, std::size_t c) const { return values_[i * dim_ + c]; }
  const std::vector<double>& values() const { return values_; }
  const std::vector<std::uint64_t>& row_ids() const { return row_ids_; }
  const std::optional<Labels>& labels() const { return labels_; }
  bool has_labels() const { return labels_.has_value(); }
  const std::vector<std::string>& feature_names() const { return feature_names_; }

  bool dedup_applied() const { return dedup_applied_; }
  void mark_dedup_applied(bool v = true) { dedup_applied_ = v; }

  /// Subset in the given row order; labels, names and flags carry over.
  PointSet select(std::span<const std::size_t> rows) const;

  bool operator==(const PointSet&) const = default;

 private:
  std::size_t dim_ = 0;
  std::vector<double> values_;
  std::vector<std::uint64_t> row_ids_;
  std::optional<Labels> labels_;
  std::vector<std::string> feature_names_;
  bool dedup_applied_ = false;
};

/// Canonical features.csv text: header "row_id,<names>", then one line per
/// row with shortest round-trip decimals. Locale independent.
std::string canonical_features_csv(const PointSet& ps);

/// SHA-256 hex digest of canonical_features_csv(ps).
std::string dataset_checksum(const PointSet& ps);

/// Shortest decimal string that round-trips to exactly `v`.
std::string format_double(double v);

}  // namespace graphforge
