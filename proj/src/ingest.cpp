#include "graphforge/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "graphforge/rng.hpp"

namespace graphforge {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_line(std::string_view line, char delim) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(delim, start);
    if (pos == std::string_view::npos) {
      cells.push_back(trim(line.substr(start)));
      break;
    }
    cells.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
  return cells;
}

bool parse_finite(std::string_view cell, double& out) {
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  const auto* end = cell.data() + cell.size();
  auto res = std::from_chars(cell.data(), end, out);
  return res.ec == std::errc() && res.ptr == end && std::isfinite(out);
}

}  // namespace

PointSet parse_csv(std::string_view text, const CsvOptions& opts) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    auto pos = text.find('\n', start);
    if (pos == std::string_view::npos) pos = text.size();
    lines.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) throw DataError("missing header row");

  const auto header = split_line(lines[0], opts.delimiter);
  std::optional<std::size_t> label_col;
  if (opts.label_column) {
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (header[c] == *opts.label_column) label_col = c;
    }
    if (!label_col) throw DataError("label column '" + *opts.label_column + "' not found in header");
  }
  std::vector<std::string> names;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c != label_col) names.emplace_back(header[c]);
  }
  if (names.empty()) throw DataError("no feature columns");
  if (lines.size() == 1) throw DataError("no data rows");

  const std::size_t d = names.size();
  const std::size_t n = lines.size() - 1;
  std::vector<double> values;
  values.reserve(n * d);
  std::vector<std::uint64_t> ids(n);
  std::optional<Labels> labels;
  std::unordered_map<std::string, std::int32_t> class_index;
  if (label_col) labels.emplace();

  for (std::size_t r = 0; r < n; ++r) {
    const auto cells = split_line(lines[r + 1], opts.delimiter);
    if (cells.size() != header.size()) {
      throw DataError("row " + std::to_string(r + 1) + ": expected " + std::to_string(header.size()) +
                      " columns, found " + std::to_string(cells.size()));
    }
    std::size_t feature = 0;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c == label_col) {
        std::string name(cells[c]);
        auto [it, inserted] = class_index.emplace(name, static_cast<std::int32_t>(labels->class_names.size()));
        if (inserted) labels->class_names.push_back(name);
        labels->codes.push_back(it->second);
        continue;
      }
      double v = 0.0;
      if (!parse_finite(cells[c], v)) {
        throw DataError("row " + std::to_string(r + 1) + ", column '" + names[feature] +
                        "': not a finite number: '" + std::string(cells[c]) + "'");
      }
      values.push_back(v);
      ++feature;
    }
    ids[r] = r;
  }
  return PointSet(d, std::move(values), std::move(ids), std::move(labels), std::move(names));
}

PointSet load_csv(const std::filesystem::path& path, const CsvOptions& opts) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open input file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str(), opts);
}

void write_csv(const PointSet& ps, const std::filesystem::path& path, const std::string& label_column,
               char delimiter) {
  std::string out;
  for (std::size_t c = 0; c < ps.dim(); ++c) {
    if (c) out += delimiter;
    out += ps.feature_names()[c];
  }
  if (ps.has_labels()) {
    out += delimiter;
    out += label_column;
  }
  out += '\n';
  for (std::size_t i = 0; i < ps.size(); ++i) {
    for (std::size_t c = 0; c < ps.dim(); ++c) {
      if (c) out += delimiter;
      out += format_double(ps.at(i, c));
    }
    if (ps.has_labels()) {
      out += delimiter;
      out += ps.labels()->name_of(i);
    }
    out += '\n';
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw DataError("cannot write file: " + path.string());
  f << out;
  if (!f) throw DataError("write failed: " + path.string());
}

PointSet dedup(const PointSet& ps) {
  const std::size_t d = ps.dim();
  const bool labelled = ps.has_labels();
  auto same_row = [&](std::size_t a, std::size_t b) {
    if (labelled && ps.labels()->codes[a] != ps.labels()->codes[b]) return false;
    return std::memcmp(ps.row(a).data(), ps.row(b).data(), d * sizeof(double)) == 0;
  };
  auto row_hash = [&](std::size_t i) {
    // FNV-1a over the raw bytes of the row and its label code.
    std::uint64_t h = 1469598103934665603ULL;
    const auto* bytes = reinterpret_cast<const unsigned char*>(ps.row(i).data());
    for (std::size_t b = 0; b < d * sizeof(double); ++b) h = (h ^ bytes[b]) * 1099511628211ULL;
    if (labelled) h = (h ^ static_cast<std::uint64_t>(ps.labels()->codes[i])) * 1099511628211ULL;
    return h;
  };

  // Visit rows by ascending row id so the survivor is the lowest id.
  std::vector<std::size_t> order(ps.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return ps.row_ids()[a] < ps.row_ids()[b]; });

  std::unordered_map<std::uint64_t, std::vector<std::size_t>> buckets;
  buckets.reserve(ps.size());
  std::vector<char> kept(ps.size(), 0);
  for (auto i : order) {
    auto& bucket = buckets[row_hash(i)];
    if (std::none_of(bucket.begin(), bucket.end(), [&](std::size_t j) { return same_row(i, j); })) {
      bucket.push_back(i);
      kept[i] = 1;
    }
  }
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (kept[i]) keep.push_back(i);
  }
  PointSet out = ps.select(keep);
  out.mark_dedup_applied();
  return out;
}

std::map<std::string, std::size_t> parse_class_targets(const std::string& text) {
  std::map<std::string, std::size_t> targets;
  std::string_view rest = text;
  while (!rest.empty()) {
    auto comma = rest.find(',');
    auto item = trim(rest.substr(0, comma));
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    if (item.empty()) continue;
    const auto colon = item.rfind(':');
    if (colon == std::string_view::npos) throw DataError("class target '" + std::string(item) + "' lacks ':'");
    const auto name = trim(item.substr(0, colon));
    const auto count = trim(item.substr(colon + 1));
    std::size_t value = 0;
    auto res = std::from_chars(count.data(), count.data() + count.size(), value);
    if (name.empty() || res.ec != std::errc() || res.ptr != count.data() + count.size()) {
      throw DataError("malformed class target '" + std::string(item) + "'");
    }
    if (!targets.emplace(std::string(name), value).second) {
      throw DataError("class '" + std::string(name) + "' listed twice");
    }
  }
  if (targets.empty()) throw DataError("empty class target list");
  return targets;
}

namespace {

std::vector<std::vector<std::size_t>> rows_by_class(const PointSet& ps) {
  std::vector<std::vector<std::size_t>> rows(ps.labels()->num_classes());
  for (std::size_t i = 0; i < ps.size(); ++i) rows[ps.labels()->codes[i]].push_back(i);
  return rows;
}

}  // namespace

PointSet stratified_downsample(const PointSet& ps, const ClassBalanceSpec& spec) {
  if (!ps.has_labels()) throw DataError("stratified down-sampling requires labels");
  const auto& labels = *ps.labels();
  std::vector<std::optional<std::size_t>> target(labels.num_classes());
  for (const auto& [name, count] : spec.targets) {
    const auto code = labels.code_of(name);
    if (code < 0) throw DataError("unknown class in spec: '" + name + "'");
    target[code] = count;
  }
  const auto by_class = rows_by_class(ps);
  SampleRng rng(spec.seed);
  std::vector<std::size_t> keep;
  for (std::size_t c = 0; c < by_class.size(); ++c) {
    if (!target[c]) continue;
    if (*target[c] > by_class[c].size()) {
      throw DataError("target exceeds available for class '" + labels.class_names[c] + "': " +
                      std::to_string(*target[c]) + " > " + std::to_string(by_class[c].size()));
    }
    for (auto pick : sample_without_replacement(by_class[c].size(), *target[c], rng)) {
      keep.push_back(by_class[c][pick]);
    }
  }
  std::sort(keep.begin(), keep.end());
  return ps.select(keep);
}

std::vector<std::size_t> stratified_test_quota(const std::vector<std::size_t>& class_counts,
                                               double test_fraction) {
  std::size_t n = 0;
  for (auto c : class_counts) n += c;
  const auto total = static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(n)));
  std::vector<std::size_t> quota(class_counts.size());
  std::vector<double> frac(class_counts.size());
  std::size_t assigned = 0;
  for (std::size_t c = 0; c < class_counts.size(); ++c) {
    const double exact = test_fraction * static_cast<double>(class_counts[c]);
    // Absorb representation error such as 0.7 * 10 = 6.9999...
    double whole = std::floor(exact + 1e-9);
    quota[c] = static_cast<std::size_t>(whole);
    frac[c] = std::max(0.0, exact - whole);
    assigned += quota[c];
  }
  std::vector<std::size_t> order(class_counts.size());
  for (std::size_t c = 0; c < order.size(); ++c) order[c] = c;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return frac[a] > frac[b]; });
  for (std::size_t i = 0; assigned < total && i < order.size(); ++i) {
    const auto c = order[i];
    if (quota[c] < class_counts[c]) {
      ++quota[c];
      ++assigned;
    }
  }
  return quota;
}

SplitResult train_test_split(const PointSet& ps, double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw DataError("test fraction must lie in (0, 1)");
  }
  if (!ps.has_labels()) throw DataError("stratified split requires labels");
  if (ps.size() < 5) throw DataError("split requires at least 5 rows");
  const auto by_class = rows_by_class(ps);
  std::vector<std::size_t> counts;
  for (const auto& rows : by_class) counts.push_back(rows.size());
  const auto quota = stratified_test_quota(counts, test_fraction);

  SampleRng rng(seed);
  std::vector<char> is_test(ps.size(), 0);
  for (std::size_t c = 0; c < by_class.size(); ++c) {
    for (auto pick : sample_without_replacement(by_class[c].size(), quota[c], rng)) {
      is_test[by_class[c][pick]] = 1;
    }
  }
  std::vector<std::size_t> train_rows, test_rows;
  for (std::size_t i = 0; i < ps.size(); ++i) (is_test[i] ? test_rows : train_rows).push_back(i);
  return {ps.select(train_rows), ps.select(test_rows)};
}

std::string ScalerParams::to_json() const {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (std::size_t c = 0; c < columns.size(); ++c) {
    j[columns[c]] = {{"min", ranges[c].min}, {"max", ranges[c].max}};
  }
  return j.dump(2) + "\n";
}

ScalerParams ScalerParams::from_json(const std::string& text) {
  ScalerParams p;
  try {
    const auto j = nlohmann::ordered_json::parse(text);
    for (const auto& [name, range] : j.items()) {
      p.columns.push_back(name);
      p.ranges.push_back({range.at("min").get<double>(), range.at("max").get<double>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed scaler parameters: ") + e.what());
  }
  return p;
}

PointSet ScalerParams::apply(const PointSet& ps) const {
  if (ps.dim() != ranges.size()) throw DataError("scaler dimension mismatch");
  std::vector<double> values(ps.values());
  for (std::size_t i = 0; i < ps.size(); ++i) {
    for (std::size_t c = 0; c < ps.dim(); ++c) {
      const auto& r = ranges[c];
      const double span = r.max - r.min;
      double& v = values[i * ps.dim() + c];
      v = span > 0.0 ? (v - r.min) / span : 0.0;
    }
  }
  PointSet out(ps.dim(), std::move(values), ps.row_ids(), ps.labels(), ps.feature_names());
  out.mark_dedup_applied(false);
  return out;
}

ScaledSplit standardize_fit_transform(const PointSet& train, const PointSet& test) {
  if (train.dim() != test.dim()) throw DataError("train/test dimension mismatch");
  if (train.empty()) throw DataError("cannot fit scaler on an empty training set");
  ScalerParams params;
  params.columns = train.feature_names();
  params.ranges.resize(train.dim());
  for (std::size_t c = 0; c < train.dim(); ++c) {
    double lo = train.at(0, c), hi = lo;
    for (std::size_t i = 1; i < train.size(); ++i) {
      lo = std::min(lo, train.at(i, c));
      hi = std::max(hi, train.at(i, c));
    }
    params.ranges[c] = {lo, hi};
  }
  return {params.apply(train), params.apply(test), params};
}

}  // namespace graphforge
