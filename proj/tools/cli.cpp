#include "cli.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "graphforge/analysis.hpp"
#include "graphforge/bundle.hpp"
#include "graphforge/checksum.hpp"
#include "graphforge/constructors.hpp"
#include "graphforge/ingest.hpp"
#include "graphforge/parallel.hpp"
#include "graphforge/reference.hpp"
#include "graphforge/rng.hpp"

namespace graphforge::cli {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

/// Argument combinations CLI11 cannot express on its own.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string file_checksum(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw DataError("cannot open " + p.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return sha256_hex(buf.str());
}

class StageClock {
 public:
  void mark(const std::string& stage) {
    const auto now = std::chrono::steady_clock::now();
    timings_[stage] = std::chrono::duration<double>(now - last_).count();
    last_ = now;
  }
  const Json& timings() const { return timings_; }

 private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
  Json timings_ = Json::object();
};

/// One manifest per run.
struct Manifest {
  Json body = Json::object();

  Manifest(const std::string& command, const std::vector<std::string>& args) {
    Json line = Json::array();
    line.push_back("graphforge");
    for (const auto& a : args) line.push_back(a);
    body["command"] = command;
    body["command_line"] = line;
  }

  void write(const fs::path& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write manifest " + path.string());
    out << body.dump(2) << "\n";
  }
};

struct CommonOptions {
  int threads = 0;
  std::string manifest;
};

void apply_threads(const CommonOptions& opt) {
  int threads = opt.threads > 0 ? opt.threads : thread_count_from_env();
  set_thread_count(threads);
}

CsvOptions csv_options(const std::string& label_col, const std::string& delimiter) {
  if (delimiter.size() != 1) throw UsageError("--delimiter must be a single character");
  CsvOptions o;
  if (!label_col.empty()) o.label_column = label_col;
  o.delimiter = delimiter[0];
  return o;
}

std::string describe_difference(const Graph& fast, const Graph& ref) {
  if (fast.directed != ref.directed) return "directedness differs";
  if (fast.n_nodes != ref.n_nodes) return "node counts differ";
  std::size_t i = 0;
  while (i < fast.edges.size() && i < ref.edges.size() && fast.edges[i] == ref.edges[i]) ++i;
  if (i < fast.edges.size() || i < ref.edges.size()) {
    std::ostringstream s;
    s << "edge lists diverge at position " << i << " (fast " << fast.edges.size() << " edges, reference "
      << ref.edges.size() << " edges)";
    if (i < fast.edges.size()) s << "; fast has (" << fast.edges[i].u << "," << fast.edges[i].v << ")";
    if (i < ref.edges.size()) s << "; reference has (" << ref.edges[i].u << "," << ref.edges[i].v << ")";
    return s.str();
  }
  if (fast.weights != ref.weights) return "edge weights differ";
  return {};
}

PointSet random_points(std::size_t n, std::size_t dim, std::uint64_t seed) {
  SampleRng rng(seed);
  std::vector<double> v(n * dim);
  for (auto& x : v) x = rng.unit();
  std::vector<std::uint64_t> ids(n);
  for (std::size_t i = 0; i < n; ++i) ids[i] = i;
  return PointSet(dim, std::move(v), std::move(ids));
}

// ---------------------------------------------------------------------------

struct BuildOptions {
  CommonOptions common;
  std::string input;
  std::string out;
  std::string method;
  std::string config_file;
  std::string label_col;
  std::string delimiter = ",";
  std::size_t k = ConstructionConfig::kDefaultK;
  double epsilon = ConstructionConfig::kDefaultEpsilon;
  std::size_t theta = 0;
  std::string symmetrize = "union";
  std::string gabriel_mode = "exact";
  std::string gabriel_boundary = "open";
  bool snn_weighted = false;
  bool dedup = false;
  std::uint64_t seed = 0;
};

int cmd_build(const BuildOptions& o, CLI::App& sub, const std::vector<std::string>& args, std::ostream& out) {
  // Precedence: flags > config file > defaults.
  ConstructionConfig cfg;
  if (!o.config_file.empty()) {
    std::ifstream in(o.config_file);
    if (!in) throw UsageError("cannot open config file " + o.config_file);
    try {
      cfg = ConstructionConfig::from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::exception& e) {
      throw UsageError(std::string("config file: ") + e.what());
    } catch (const ConstructionError& e) {
      throw UsageError(std::string("config file: ") + e.what());
    }
  }
  try {
    if (sub.count("--method")) cfg.method = parse_method(o.method);
    if (sub.count("--k")) cfg.k = o.k;
    if (sub.count("--epsilon")) cfg.epsilon = o.epsilon;
    if (sub.count("--theta")) cfg.theta = o.theta;
    if (sub.count("--symmetrize")) cfg.symmetrize = parse_symmetrize(o.symmetrize);
    if (sub.count("--gabriel-mode")) parse_gabriel_mode(o.gabriel_mode, cfg);
    if (sub.count("--gabriel-boundary")) cfg.gabriel_boundary = parse_gabriel_boundary(o.gabriel_boundary);
    if (sub.count("--snn-weighted")) cfg.snn_weighted = o.snn_weighted;
    if (!sub.count("--method") && o.config_file.empty()) throw UsageError("--method is required");
    if (cfg.method == Method::snn && !cfg.theta) {
      throw UsageError("snn requires an explicit --theta (shared-neighbor threshold θ, 1 <= θ <= k)");
    }
    cfg.validate();
  } catch (const ConstructionError& e) {
    throw UsageError(e.what());
  }
  apply_threads(o.common);

  StageClock clock;
  Manifest manifest("build", args);
  PointSet ps = load_csv(o.input, csv_options(o.label_col, o.delimiter));
  clock.mark("load");
  if (o.dedup) {
    ps = dedup(ps);
    clock.mark("dedup");
  }
  Graph g = build_graph(ps, cfg);
  clock.mark("construct");
  write_bundle(g, ps, o.out);
  clock.mark("write");

  manifest.body["config"] = cfg.to_json();
  manifest.body["seeds"] = {{"seed", o.seed}};
  manifest.body["threads"] = thread_count();
  manifest.body["inputs"] = {{{"path", o.input}, {"sha256", file_checksum(o.input)}}};
  manifest.body["outputs"] = {{"bundle", o.out}};
  manifest.body["dataset_checksum"] = g.dataset_checksum;
  manifest.body["n_nodes"] = g.n_nodes;
  manifest.body["n_edges"] = g.n_edges();
  manifest.body["timings_seconds"] = clock.timings();
  manifest.write(o.common.manifest.empty() ? fs::path(o.out) / "run_manifest.json" : fs::path(o.common.manifest));

  out << "wrote " << to_string(cfg.method) << " graph: " << g.n_nodes << " nodes, " << g.n_edges() << " edges -> "
      << o.out << "\n";
  return kOk;
}

// ---------------------------------------------------------------------------

struct StatsOptions {
  CommonOptions common;
  std::string bundle;
  std::string json_out;
  bool json_stdout = false;
};

int cmd_stats(const StatsOptions& o, const std::vector<std::string>& args, std::ostream& out) {
  StageClock clock;
  const auto loaded = read_bundle(o.bundle);
  clock.mark("load");
  const auto report = topology_report(loaded.graph, loaded.points.labels());
  clock.mark("analyze");
  out << (o.json_stdout ? report.to_json() : report.to_table());
  if (!o.json_out.empty()) {
    std::ofstream f(o.json_out, std::ios::binary | std::ios::trunc);
    if (!f) throw DataError("cannot write " + o.json_out);
    f << report.to_json();
  }
  if (!o.common.manifest.empty()) {
    Manifest m("stats", args);
    m.body["inputs"] = {{{"bundle", o.bundle}, {"dataset_checksum", loaded.graph.dataset_checksum}}};
    m.body["outputs"] = o.json_out.empty() ? Json::object() : Json{{"report", o.json_out}};
    m.body["timings_seconds"] = clock.timings();
    m.write(o.common.manifest);
  }
  return kOk;
}

// ---------------------------------------------------------------------------

struct ValidateOptions {
  CommonOptions common;
  std::string bundle;
  bool random = false;
  std::size_t n = 200;
  std::size_t dim = 6;
  std::size_t trials = 5;
  std::uint64_t seed = 1;
};

std::vector<ConstructionConfig> validation_configs() {
  std::vector<ConstructionConfig> cfgs;
  for (auto sym : {Symmetrize::none, Symmetrize::union_}) {
    ConstructionConfig c;
    c.method = Method::knn;
    c.symmetrize = sym;
    cfgs.push_back(c);
  }
  ConstructionConfig mnn;
  mnn.method = Method::mnn;
  cfgs.push_back(mnn);
  for (std::size_t theta : {1, 2, 3}) {
    ConstructionConfig c;
    c.method = Method::snn;
    c.theta = theta;
    c.snn_weighted = true;
    cfgs.push_back(c);
  }
  for (double eps : {0.1, 0.25, 0.5}) {
    ConstructionConfig c;
    c.method = Method::epsilon;
    c.epsilon = eps;
    cfgs.push_back(c);
  }
  for (auto boundary : {GabrielBoundary::open, GabrielBoundary::closed}) {
    ConstructionConfig c;
    c.method = Method::gabriel;
    c.gabriel_boundary = boundary;
    cfgs.push_back(c);
  }
  ConstructionConfig cand;
  cand.method = Method::gabriel;
  cand.gabriel_mode = GabrielMode::candidate;
  cand.gabriel_candidates = 5;
  cfgs.push_back(cand);
  return cfgs;
}

int cmd_validate(const ValidateOptions& o, const std::vector<std::string>& args, std::ostream& out,
                 std::ostream& err) {
  if (o.bundle.empty() == !o.random) throw UsageError("validate needs exactly one of --bundle or --random");
  apply_threads(o.common);
  StageClock clock;
  std::size_t checks = 0, mismatches = 0;
  auto compare = [&](const std::string& what, const Graph& fast, const Graph& ref) {
    ++checks;
    const auto diff = describe_difference(fast, ref);
    if (!diff.empty()) {
      ++mismatches;
      err << "MISMATCH " << what << ": " << diff << "\n";
    }
  };

  if (!o.bundle.empty()) {
    const auto loaded = read_bundle(o.bundle);
    Graph ref = reference::build_graph(loaded.points, loaded.graph.config);
    compare("bundle " + o.bundle + " (" + to_string(loaded.graph.config.method) + ")", loaded.graph, ref);
    // The on-disk graph must also match a fresh indexed build.
    Graph fast = build_graph(loaded.points, loaded.graph.config);
    compare("rebuild " + o.bundle, fast, ref);
  } else {
    if (o.n < 2 || o.dim < 1) throw UsageError("--n must be >= 2 and --dim >= 1");
    for (std::size_t t = 0; t < o.trials; ++t) {
      const auto ps = random_points(o.n, o.dim, o.seed + t);
      const KdTree index(ps);
      for (std::size_t k : {1, 3, 10}) {
        for (NodeIndex q = 0; q < ps.size(); ++q) {
          ++checks;
          if (index.knn(q, k) != reference::brute_force_knn(ps, q, k)) {
            ++mismatches;
            err << "MISMATCH knn query " << q << " k=" << k << " trial " << t << "\n";
          }
        }
      }
      for (const auto& cfg : validation_configs()) {
        compare(to_string(cfg.method) + " trial " + std::to_string(t), build_graph(ps, cfg),
                reference::build_graph(ps, cfg));
      }
    }
  }
  clock.mark("validate");
  if (!o.common.manifest.empty()) {
    Manifest m("validate", args);
    m.body["seeds"] = {{"seed", o.seed}};
    m.body["checks"] = checks;
    m.body["mismatches"] = mismatches;
    m.body["timings_seconds"] = clock.timings();
    m.write(o.common.manifest);
  }
  out << (mismatches == 0 ? "OK" : "FAILED") << ": " << checks << " checks, " << mismatches << " mismatches\n";
  return mismatches == 0 ? kOk : kFailure;
}

// ---------------------------------------------------------------------------

struct SampleOptions {
  CommonOptions common;
  std::string input;
  std::string out;
  std::string label_col;
  std::string delimiter = ",";
  std::string targets;
  bool dedup = false;
  std::uint64_t seed = 0;
};

int cmd_sample(const SampleOptions& o, const std::vector<std::string>& args, std::ostream& out) {
  if (o.label_col.empty()) throw UsageError("sample requires --label-col");
  ClassBalanceSpec spec;
  try {
    spec.targets = parse_class_targets(o.targets);
  } catch (const DataError& e) {
    throw UsageError(e.what());
  }
  spec.seed = o.seed;
  StageClock clock;
  PointSet ps = load_csv(o.input, csv_options(o.label_col, o.delimiter));
  clock.mark("load");
  const std::size_t loaded = ps.size();
  if (o.dedup) {
    ps = dedup(ps);
    clock.mark("dedup");
  }
  const std::size_t unique = ps.size();
  ps = stratified_downsample(ps, spec);
  clock.mark("sample");
  write_csv(ps, o.out, o.label_col, o.delimiter[0]);
  clock.mark("write");

  Manifest m("sample", args);
  m.body["seeds"] = {{"seed", o.seed}};
  m.body["targets"] = spec.targets;
  m.body["inputs"] = {{{"path", o.input}, {"sha256", file_checksum(o.input)}}};
  m.body["outputs"] = {{"csv", o.out}};
  m.body["rows"] = {{"loaded", loaded}, {"after_dedup", unique}, {"sampled", ps.size()}};
  m.body["timings_seconds"] = clock.timings();
  m.write(o.common.manifest.empty() ? fs::path(o.out + ".manifest.json") : fs::path(o.common.manifest));
  out << "sampled " << ps.size() << " of " << unique << " rows -> " << o.out << "\n";
  return kOk;
}

struct SplitOptions {
  CommonOptions common;
  std::string input;
  std::string out_train;
  std::string out_test;
  std::string label_col;
  std::string delimiter = ",";
  std::string scaler_out;
  double test_fraction = 0.2;
  bool dedup = false;
  bool scale = false;
  std::uint64_t seed = 0;
};

int cmd_split(const SplitOptions& o, const std::vector<std::string>& args, std::ostream& out) {
  if (o.label_col.empty()) throw UsageError("split requires --label-col");
  if (!(o.test_fraction > 0.0 && o.test_fraction < 1.0)) throw UsageError("--test-fraction must lie in (0, 1)");
  if (!o.scaler_out.empty() && !o.scale) throw UsageError("--scaler-out requires --scale");
  StageClock clock;
  PointSet ps = load_csv(o.input, csv_options(o.label_col, o.delimiter));
  clock.mark("load");
  if (o.dedup) {
    ps = dedup(ps);
    clock.mark("dedup");
  }
  auto split = train_test_split(ps, o.test_fraction, o.seed);
  clock.mark("split");
  Json outputs = {{"train", o.out_train}, {"test", o.out_test}};
  if (o.scale) {
    auto scaled = standardize_fit_transform(split.train, split.test);
    split.train = std::move(scaled.train);
    split.test = std::move(scaled.test);
    if (!o.scaler_out.empty()) {
      std::ofstream f(o.scaler_out, std::ios::binary | std::ios::trunc);
      if (!f) throw DataError("cannot write " + o.scaler_out);
      f << scaled.params.to_json();
      outputs["scaler"] = o.scaler_out;
    }
    clock.mark("scale");
  }
  write_csv(split.train, o.out_train, o.label_col, o.delimiter[0]);
  write_csv(split.test, o.out_test, o.label_col, o.delimiter[0]);
  clock.mark("write");

  Manifest m("split", args);
  m.body["seeds"] = {{"seed", o.seed}};
  m.body["test_fraction"] = o.test_fraction;
  m.body["inputs"] = {{{"path", o.input}, {"sha256", file_checksum(o.input)}}};
  m.body["outputs"] = outputs;
  m.body["rows"] = {{"train", split.train.size()}, {"test", split.test.size()}};
  m.body["timings_seconds"] = clock.timings();
  m.write(o.common.manifest.empty() ? fs::path(o.out_train + ".manifest.json") : fs::path(o.common.manifest));
  out << "split " << ps.size() << " rows: " << split.train.size() << " train, " << split.test.size() << " test\n";
  return kOk;
}

void add_common(CLI::App* sub, CommonOptions& c) {
  sub->add_option("--threads", c.threads, "Worker cap (default: GRAPHFORGE_THREADS or all cores)")
      ->check(CLI::PositiveNumber);
  sub->add_option("--manifest", c.manifest, "Run manifest path");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"graphforge: tabular data to proximity graph datasets"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  BuildOptions build;
  auto* build_cmd = app.add_subcommand("build", "Construct a graph bundle from a CSV file");
  build_cmd->add_option("--input", build.input, "Input CSV")->required()->check(CLI::ExistingFile);
  build_cmd->add_option("--out", build.out, "Output bundle directory")->required();
  build_cmd->add_option("--method", build.method, "knn | mnn | snn | epsilon | gabriel");
  build_cmd->add_option("--config", build.config_file, "JSON construction config (flags take precedence)");
  build_cmd->add_option("--k", build.k, "Neighbor count")->check(CLI::PositiveNumber);
  build_cmd->add_option("--epsilon", build.epsilon, "Radius for the epsilon graph")->check(CLI::PositiveNumber);
  build_cmd->add_option("--theta", build.theta, "SNN shared-neighbor threshold")->check(CLI::PositiveNumber);
  build_cmd->add_option("--symmetrize", build.symmetrize, "kNN symmetrization: union | none");
  build_cmd->add_option("--gabriel-mode", build.gabriel_mode, "exact | candidate:N");
  build_cmd->add_option("--gabriel-boundary", build.gabriel_boundary, "open (boundary passes) | closed");
  build_cmd->add_flag("--snn-weighted", build.snn_weighted, "Store SNN counts as edge weights");
  build_cmd->add_option("--label-col", build.label_col, "Label column name");
  build_cmd->add_option("--delimiter", build.delimiter, "CSV delimiter");
  build_cmd->add_flag("--dedup", build.dedup, "Drop duplicate rows before construction");
  build_cmd->add_option("--seed", build.seed, "Seed recorded in the manifest");
  add_common(build_cmd, build.common);

  StatsOptions stats;
  auto* stats_cmd = app.add_subcommand("stats", "Print topology diagnostics for a bundle");
  stats_cmd->add_option("--bundle", stats.bundle, "Bundle directory")->required();
  stats_cmd->add_option("--json", stats.json_out, "Also write the report as JSON");
  stats_cmd->add_flag("--print-json", stats.json_stdout, "Print JSON instead of the table");
  add_common(stats_cmd, stats.common);

  ValidateOptions validate;
  auto* validate_cmd = app.add_subcommand("validate", "Compare indexed constructors with brute-force references");
  validate_cmd->add_option("--bundle", validate.bundle, "Bundle to re-derive and check");
  validate_cmd->add_flag("--random", validate.random, "Check all constructors on random point sets");
  validate_cmd->add_option("--n", validate.n, "Points per random set");
  validate_cmd->add_option("--dim", validate.dim, "Dimension of random sets");
  validate_cmd->add_option("--trials", validate.trials, "Number of random sets");
  validate_cmd->add_option("--seed", validate.seed, "Seed of the first random set");
  add_common(validate_cmd, validate.common);

  SampleOptions sample;
  auto* sample_cmd = app.add_subcommand("sample", "Class-balanced down-sampling");
  sample_cmd->add_option("--input", sample.input, "Input CSV")->required()->check(CLI::ExistingFile);
  sample_cmd->add_option("--out", sample.out, "Output CSV")->required();
  sample_cmd->add_option("--label-col", sample.label_col, "Label column name");
  sample_cmd->add_option("--targets", sample.targets, "Per-class counts, e.g. Normal:500,Mirai:500")->required();
  sample_cmd->add_option("--delimiter", sample.delimiter, "CSV delimiter");
  sample_cmd->add_flag("--dedup", sample.dedup, "Drop duplicate rows first");
  sample_cmd->add_option("--seed", sample.seed, "Sampling seed");
  add_common(sample_cmd, sample.common);

  SplitOptions split;
  auto* split_cmd = app.add_subcommand("split", "Stratified train/test split with optional min-max scaling");
  split_cmd->add_option("--input", split.input, "Input CSV")->required()->check(CLI::ExistingFile);
  split_cmd->add_option("--out-train", split.out_train, "Training CSV")->required();
  split_cmd->add_option("--out-test", split.out_test, "Test CSV")->required();
  split_cmd->add_option("--label-col", split.label_col, "Label column name");
  split_cmd->add_option("--test-fraction", split.test_fraction, "Test share (default 0.2, a 4:1 split)");
  split_cmd->add_option("--delimiter", split.delimiter, "CSV delimiter");
  split_cmd->add_flag("--dedup", split.dedup, "Drop duplicate rows first");
  split_cmd->add_flag("--scale", split.scale, "Min-max scale both parts using training ranges");
  split_cmd->add_option("--scaler-out", split.scaler_out, "Write scaler parameters as JSON");
  split_cmd->add_option("--seed", split.seed, "Split seed");
  add_common(split_cmd, split.common);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kBadArguments;
  }

  try {
    if (*build_cmd) return cmd_build(build, *build_cmd, args, out);
    if (*stats_cmd) return cmd_stats(stats, args, out);
    if (*validate_cmd) return cmd_validate(validate, args, out, err);
    if (*sample_cmd) return cmd_sample(sample, args, out);
    if (*split_cmd) return cmd_split(split, args, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kBadArguments;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return kDataError;
  } catch (const BundleError& e) {
    err << "bundle error: " << e.what() << "\n";
    return kDataError;
  } catch (const ConstructionError& e) {
    err << "construction error: " << e.what() << "\n";
    return kConstructionError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kBadArguments;
}

}  // namespace graphforge::cli
