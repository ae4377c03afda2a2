#include "graphforge/bundle.hpp"

#include <charconv>
#include <fstream>
#include <random>
#include <sstream>
#include <string_view>

#include <json.hpp>

#include "graphforge/checksum.hpp"

namespace graphforge {

namespace fs = std::filesystem;

namespace {

void write_file(const fs::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw BundleError("cannot create " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw BundleError("write failed: " + path.string());
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw BundleError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string edges_csv(const Graph& g) {
  std::string out = "u,v\n";
  out.reserve(out.size() + g.edges.size() * 14);
  char buf[16];
  for (const auto& e : g.edges) {
    auto r = std::to_chars(buf, buf + sizeof(buf), e.u);
    out.append(buf, r.ptr);
    out += ',';
    r = std::to_chars(buf, buf + sizeof(buf), e.v);
    out.append(buf, r.ptr);
    out += '\n';
  }
  return out;
}

std::string weights_csv(const Graph& g) {
  std::string out = "u,v,weight\n";
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    out += std::to_string(g.edges[i].u) + "," + std::to_string(g.edges[i].v) + "," +
           format_double((*g.weights)[i]) + "\n";
  }
  return out;
}

std::string labels_csv(const PointSet& ps) {
  std::string out = "label\n";
  for (std::size_t i = 0; i < ps.size(); ++i) {
    out += ps.labels()->name_of(i);
    out += '\n';
  }
  return out;
}

/// Splits text into lines, dropping the trailing empty line; tolerates CRLF.
std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    auto pos = text.find('\n', start);
    if (pos == std::string_view::npos) pos = text.size();
    auto line = text.substr(start, pos - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = pos + 1;
  }
  return lines;
}

std::vector<std::string_view> fields_of(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

template <typename T>
T parse_number(std::string_view field, const std::string& where) {
  T value{};
  auto res = std::from_chars(field.data(), field.data() + field.size(), value);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
    throw BundleError(where + ": malformed number '" + std::string(field) + "'");
  }
  return value;
}

std::vector<Edge> parse_edges(std::string_view text, std::size_t n, const std::string& file, std::size_t columns,
                              std::vector<double>* weights) {
  const auto lines = lines_of(text);
  if (lines.empty()) throw BundleError(file + ": missing header");
  std::vector<Edge> edges;
  edges.reserve(lines.size() - 1);
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const std::string where = file + " row " + std::to_string(r);
    const auto f = fields_of(lines[r]);
    if (f.size() != columns) throw BundleError(where + ": expected " + std::to_string(columns) + " fields");
    const auto u = parse_number<NodeIndex>(f[0], where);
    const auto v = parse_number<NodeIndex>(f[1], where);
    if (u >= n || v >= n) {
      throw BundleError(where + ": edge (" + std::to_string(u) + "," + std::to_string(v) +
                        ") references a node >= n=" + std::to_string(n));
    }
    edges.push_back({u, v});
    if (weights) weights->push_back(parse_number<double>(f[2], where));
  }
  return edges;
}

}  // namespace

void write_bundle(const Graph& g, const PointSet& ps, const fs::path& dir) {
  if (g.n_nodes != ps.size()) {
    throw BundleError("graph has " + std::to_string(g.n_nodes) + " nodes but point set has " +
                      std::to_string(ps.size()) + " rows");
  }
  g.check_invariants();

  const std::string features = canonical_features_csv(ps);
  nlohmann::ordered_json meta;
  meta["format_version"] = kBundleFormatVersion;
  meta["n_nodes"] = g.n_nodes;
  meta["n_edges"] = g.n_edges();
  meta["directed"] = g.directed;
  meta["dimension"] = ps.dim();
  meta["has_labels"] = ps.has_labels();
  meta["has_weights"] = g.weights.has_value();
  meta["dedup_applied"] = ps.dedup_applied();
  meta["class_names"] = ps.has_labels() ? ps.labels()->class_names : std::vector<std::string>{};
  meta["config"] = g.config.to_json();
  meta["dataset_checksum"] = sha256_hex(features);

  const fs::path target = fs::absolute(dir).lexically_normal();
  const fs::path parent = target.parent_path();
  fs::create_directories(parent);
  std::random_device rd;
  const fs::path staging = parent / (target.filename().string() + ".tmp-" + std::to_string(rd()));
  try {
    fs::create_directory(staging);
    write_file(staging / "meta.json", meta.dump(2) + "\n");
    write_file(staging / "edges.csv", edges_csv(g));
    write_file(staging / "features.csv", features);
    if (ps.has_labels()) write_file(staging / "labels.csv", labels_csv(ps));
    if (g.weights) write_file(staging / "weights.csv", weights_csv(g));
    if (fs::exists(target)) fs::remove_all(target);
    fs::rename(staging, target);
  } catch (const fs::filesystem_error& e) {
    std::error_code ignored;
    fs::remove_all(staging, ignored);
    throw BundleError(std::string("bundle write failed: ") + e.what());
  } catch (...) {
    std::error_code ignored;
    fs::remove_all(staging, ignored);
    throw;
  }
}

LoadedBundle read_bundle(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw BundleError("bundle directory not found: " + dir.string());
  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(read_file(dir / "meta.json"));
  } catch (const nlohmann::json::exception& e) {
    throw BundleError(std::string("meta.json: ") + e.what());
  }

  try {
    const int version = meta.at("format_version").get<int>();
    if (version != kBundleFormatVersion) {
      throw BundleError("unsupported bundle format version " + std::to_string(version) + " (expected " +
                        std::to_string(kBundleFormatVersion) + ")");
    }
    const auto n = meta.at("n_nodes").get<std::size_t>();
    const auto dim = meta.at("dimension").get<std::size_t>();
    const bool has_labels = meta.at("has_labels").get<bool>();
    const bool has_weights = meta.at("has_weights").get<bool>();

    const std::string features = read_file(dir / "features.csv");
    if (sha256_hex(features) != meta.at("dataset_checksum").get<std::string>()) {
      throw BundleError("features.csv checksum mismatch (file modified or corrupt)");
    }
    const auto feature_lines = lines_of(features);
    if (feature_lines.empty()) throw BundleError("features.csv: missing header");
    const auto header = fields_of(feature_lines[0]);
    if (header.size() != dim + 1 || header[0] != "row_id") throw BundleError("features.csv: unexpected header");
    if (feature_lines.size() - 1 != n) throw BundleError("features.csv: row count does not match n_nodes");
    std::vector<std::string> names(header.begin() + 1, header.end());
    std::vector<double> values;
    values.reserve(n * dim);
    std::vector<std::uint64_t> ids;
    ids.reserve(n);
    for (std::size_t r = 1; r < feature_lines.size(); ++r) {
      const std::string where = "features.csv row " + std::to_string(r);
      const auto f = fields_of(feature_lines[r]);
      if (f.size() != dim + 1) throw BundleError(where + ": expected " + std::to_string(dim + 1) + " fields");
      ids.push_back(parse_number<std::uint64_t>(f[0], where));
      for (std::size_t c = 1; c < f.size(); ++c) values.push_back(parse_number<double>(f[c], where));
    }

    std::optional<Labels> labels;
    if (has_labels) {
      labels.emplace();
      labels->class_names = meta.at("class_names").get<std::vector<std::string>>();
      const std::string label_text = read_file(dir / "labels.csv");
      const auto label_lines = lines_of(label_text);
      if (label_lines.empty() || label_lines.size() - 1 != n) throw BundleError("labels.csv: row count mismatch");
      for (std::size_t r = 1; r < label_lines.size(); ++r) {
        const auto code = labels->code_of(std::string(label_lines[r]));
        if (code < 0) throw BundleError("labels.csv row " + std::to_string(r) + ": unknown class");
        labels->codes.push_back(code);
      }
    }

    PointSet ps(dim, std::move(values), std::move(ids), std::move(labels), std::move(names));
    ps.mark_dedup_applied(meta.value("dedup_applied", false));

    Graph g;
    g.n_nodes = n;
    g.directed = meta.at("directed").get<bool>();
    g.config = ConstructionConfig::from_json(meta.at("config"));
    g.dataset_checksum = meta.at("dataset_checksum").get<std::string>();
    g.edges = parse_edges(read_file(dir / "edges.csv"), n, "edges.csv", 2, nullptr);
    if (g.edges.size() != meta.at("n_edges").get<std::size_t>()) throw BundleError("edges.csv: edge count mismatch");
    if (has_weights) {
      std::vector<double> w;
      const auto weighted = parse_edges(read_file(dir / "weights.csv"), n, "weights.csv", 3, &w);
      if (weighted != g.edges) throw BundleError("weights.csv: edges differ from edges.csv");
      g.weights = std::move(w);
    }
    try {
      g.check_invariants();
    } catch (const std::invalid_argument& e) {
      throw BundleError(std::string("edges.csv: ") + e.what());
    }
    return {std::move(g), std::move(ps)};
  } catch (const nlohmann::json::exception& e) {
    throw BundleError(std::string("meta.json: ") + e.what());
  } catch (const DataError& e) {
    throw BundleError(std::string("bundle data: ") + e.what());
  }
}

}  // namespace graphforge
