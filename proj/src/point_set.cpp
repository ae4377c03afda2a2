#include "graphforge/point_set.hpp"

#include <charconv>
#include <unordered_set>

#include "graphforge/checksum.hpp"

namespace graphforge {

std::int32_t Labels::code_of(const std::string& name) const {
  for (std::size_t c = 0; c < class_names.size(); ++c) {
    if (class_names[c] == name) return static_cast<std::int32_t>(c);
  }
  return -1;
}

PointSet::PointSet(std::size_t dim, std::vector<double> values, std::vector<std::uint64_t> row_ids,
                   std::optional<Labels> labels, std::vector<std::string> feature_names)
    : dim_(dim),
      values_(std::move(values)),
      row_ids_(std::move(row_ids)),
      labels_(std::move(labels)),
      feature_names_(std::move(feature_names)) {
  if (dim_ == 0) throw DataError("point set dimension must be at least 1");
  if (values_.size() != row_ids_.size() * dim_) {
    throw DataError("feature matrix size does not match rows x dimension");
  }
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(row_ids_.size());
  for (auto id : row_ids_) {
    if (!seen.insert(id).second) throw DataError("duplicate row id " + std::to_string(id));
  }
  if (labels_) {
    if (labels_->codes.size() != row_ids_.size()) {
      throw DataError("label count does not match row count");
    }
    for (auto c : labels_->codes) {
      if (c < 0 || static_cast<std::size_t>(c) >= labels_->class_names.size()) {
        throw DataError("label code out of range");
      }
    }
  }
  if (feature_names_.empty()) {
    for (std::size_t c = 0; c < dim_; ++c) feature_names_.push_back("f" + std::to_string(c));
  } else if (feature_names_.size() != dim_) {
    throw DataError("feature name count does not match dimension");
  }
}

PointSet PointSet::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw DataError("no data rows");
  const std::size_t d = rows.front().size();
  std::vector<double> values;
  values.reserve(rows.size() * d);
  std::vector<std::uint64_t> ids;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != d) throw DataError("inconsistent row dimension at row " + std::to_string(i));
    values.insert(values.end(), rows[i].begin(), rows[i].end());
    ids.push_back(i);
  }
  return PointSet(d, std::move(values), std::move(ids));
}

PointSet PointSet::select(std::span<const std::size_t> rows) const {
  std::vector<double> values;
  values.reserve(rows.size() * dim_);
  std::vector<std::uint64_t> ids;
  ids.reserve(rows.size());
  std::optional<Labels> labels;
  if (labels_) labels = Labels{{}, labels_->class_names};
  for (auto r : rows) {
    auto src = row(r);
    values.insert(values.end(), src.begin(), src.end());
    ids.push_back(row_ids_[r]);
    if (labels) labels->codes.push_back(labels_->codes[r]);
  }
  PointSet out(dim_, std::move(values), std::move(ids), std::move(labels), feature_names_);
  out.dedup_applied_ = dedup_applied_;
  return out;
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string canonical_features_csv(const PointSet& ps) {
  std::string out = "row_id";
  for (const auto& name : ps.feature_names()) {
    out += ',';
    out += name;
  }
  out += '\n';
  out.reserve(out.size() + ps.size() * (ps.dim() + 1) * 20);
  char buf[64];
  for (std::size_t i = 0; i < ps.size(); ++i) {
    auto res = std::to_chars(buf, buf + sizeof(buf), ps.row_ids()[i]);
    out.append(buf, res.ptr);
    for (double v : ps.row(i)) {
      out += ',';
      res = std::to_chars(buf, buf + sizeof(buf), v);
      out.append(buf, res.ptr);
    }
    out += '\n';
  }
  return out;
}

std::string dataset_checksum(const PointSet& ps) { return sha256_hex(canonical_features_csv(ps)); }

}  // namespace graphforge
