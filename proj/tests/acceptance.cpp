// Acceptance gate. Prints one PASS/FAIL line per criterion and exits non-zero
// if any criterion fails. All thresholds are pinned below.

#include <sys/resource.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "graphforge/constructors.hpp"
#include "graphforge/ingest.hpp"
#include "graphforge/reference.hpp"
#include "graphforge/rng.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace graphforge;

namespace {

constexpr double kOracleBudgetSeconds = 300.0;
constexpr double kScaleBudgetSeconds = 600.0;
constexpr double kScaleMemoryBudgetMb = 8192.0;
constexpr std::size_t kScaleN = 100000;
constexpr std::size_t kScaleDim = 6;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double peak_rss_mb() {
  rusage ru{};
  getrusage(RUSAGE_SELF, &ru);
  return static_cast<double>(ru.ru_maxrss) / 1024.0;
}

int failures = 0;

void report(const std::string& name, bool ok, const std::string& detail) {
  std::printf("%s %s: %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

bool subset(const oracle::EdgeSet& a, const oracle::EdgeSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

// Runs `check` and turns an escaping exception into a failed criterion.
void guarded(const std::string& name, const std::function<void()>& check) {
  try {
    check();
  } catch (const std::exception& e) {
    report(name, false, std::string("exception: ") + e.what());
  }
}

void oracle_equivalence() {
  const auto t0 = Clock::now();
  const std::size_t sizes[] = {50, 200, 500};
  const std::size_t dims[] = {2, 6};
  constexpr std::size_t k = 5;
  constexpr std::size_t theta = 2;
  std::size_t mismatches = 0, checks = 0;
  std::ostringstream first;
  for (std::size_t trial = 0; trial < 100; ++trial) {
    const std::size_t n = sizes[trial % 3];
    const std::size_t d = dims[(trial / 3) % 2];
    const double eps = d == 2 ? 0.08 : 0.35;
    const auto ps = oracle::uniform_points(n, d, 1000 + trial);
    auto expect = [&](const char* what, const oracle::EdgeSet& want, const Graph& fast, const Graph& ref) {
      checks += 2;
      for (const auto* g : {&fast, &ref}) {
        if (oracle::edges_of(*g) != want) {
          if (mismatches++ == 0)
            first << " first mismatch: " << what << (g == &fast ? " (indexed)" : " (serial)") << " trial " << trial
                  << " n=" << n << " d=" << d;
        }
      }
    };
    expect("knn-directed", oracle::knn_directed(ps, k), knn_graph(ps, k, Symmetrize::none),
           reference::knn_graph(ps, k, Symmetrize::none));
    expect("knn-union", oracle::knn_union(ps, k), knn_graph(ps, k, Symmetrize::union_),
           reference::knn_graph(ps, k, Symmetrize::union_));
    expect("mnn", oracle::mnn(ps, k), mnn_graph(ps, k), reference::mnn_graph(ps, k));
    expect("snn", oracle::snn(ps, k, theta), snn_graph(ps, k, theta, false),
           reference::snn_graph(ps, k, theta, false));
    expect("epsilon", oracle::epsilon(ps, eps), epsilon_graph(ps, eps), reference::epsilon_graph(ps, eps));
    expect("gabriel", oracle::gabriel(ps), gabriel_graph(ps, GabrielMode::exact),
           reference::gabriel_graph(ps, GabrielMode::exact, 0, GabrielBoundary::open));
  }
  const double secs = seconds_since(t0);
  std::ostringstream detail;
  detail << "100 point sets, " << checks << " edge-set comparisons, " << mismatches << " mismatches, " << secs
         << " s (budget " << kOracleBudgetSeconds << " s)" << first.str();
  report("oracle_equivalence", mismatches == 0 && secs < kOracleBudgetSeconds, detail.str());
}

void proximity_hierarchy() {
  constexpr std::size_t n = 200;
  constexpr std::size_t k = 6;
  const double radii[] = {0.03, 0.06, 0.1, 0.15};
  std::map<std::string, std::size_t> violations;
  for (const char* p : {"nn_in_gabriel", "gabriel_connected", "mnn_in_knn", "epsilon_nested", "snn_monotone"})
    violations[p] = 0;
  for (std::size_t trial = 0; trial < 100; ++trial) {
    const auto ps = oracle::uniform_points(n, 2, 5000 + trial);
    const auto gabriel = oracle::edges_of(gabriel_graph(ps, GabrielMode::exact));
    if (!subset(oracle::edges_of(knn_graph(ps, 1, Symmetrize::union_)), gabriel)) ++violations["nn_in_gabriel"];
    if (oracle::component_count(n, gabriel) != 1) ++violations["gabriel_connected"];
    if (!subset(oracle::edges_of(mnn_graph(ps, k)), oracle::edges_of(knn_graph(ps, k, Symmetrize::union_))))
      ++violations["mnn_in_knn"];
    oracle::EdgeSet previous;
    for (double r : radii) {
      auto current = oracle::edges_of(epsilon_graph(ps, r));
      if (!subset(previous, current)) ++violations["epsilon_nested"];
      previous = std::move(current);
    }
    previous.clear();
    for (std::size_t theta = k; theta >= 1; --theta) {
      auto current = oracle::edges_of(snn_graph(ps, k, theta, false));
      if (!subset(previous, current)) ++violations["snn_monotone"];
      previous = std::move(current);
    }
  }
  std::size_t total = 0;
  std::ostringstream detail;
  detail << "100 sets of 200 2-D points;";
  for (const auto& [name, count] : violations) {
    total += count;
    detail << " " << name << "=" << count;
  }
  detail << " violations";
  report("proximity_hierarchy", total == 0, detail.str());
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Every file of a bundle except the run manifest, which records timings.
std::map<std::string, std::string> bundle_bytes(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const auto name = entry.path().filename().string();
    if (name != "run_manifest.json") files[name] = slurp(entry.path());
  }
  return files;
}

int run_tool(const std::string& args) {
  const std::string cmd = std::string("\"") + GRAPHFORGE_EXE + "\" " + args + " > /dev/null 2>&1";
  return std::system(cmd.c_str());
}

void determinism(const fs::path& work) {
  // Labelled input with injected duplicates, sampled with a seed and then built.
  SampleRng rng(99);
  std::vector<std::vector<double>> rows;
  std::vector<std::string> classes;
  for (std::size_t i = 0; i < 3000; ++i) {
    rows.push_back({rng.normal(), rng.normal(), rng.normal(), rng.normal()});
    classes.push_back(i % 3 == 0 ? "A" : (i % 3 == 1 ? "B" : "C"));
    if (i % 50 == 0) {
      rows.push_back(rows.back());
      classes.push_back(classes.back());
    }
  }
  std::string text = "x0,x1,x2,x3,label\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (double v : rows[i]) text += format_double(v) + ",";
    text += classes[i] + "\n";
  }
  const auto input = work / "input.csv";
  std::ofstream(input) << text;

  std::size_t compared = 0, differing = 0, tool_errors = 0;
  std::ostringstream first;
  std::map<std::string, std::string> sampled;
  for (int rep = 0; rep < 2; ++rep) {
    const auto out = work / ("sampled" + std::to_string(rep) + ".csv");
    if (run_tool("sample --input " + input.string() + " --label-col label --dedup --targets A:800,B:700,C:600 --seed 17 --out " +
                 out.string()) != 0)
      ++tool_errors;
    sampled[std::to_string(rep)] = slurp(out);
  }
  ++compared;
  if (sampled["0"] != sampled["1"] || sampled["0"].empty()) {
    ++differing;
    first << " first difference: sample output";
  }
  const auto sample_path = work / "sampled0.csv";

  const std::vector<std::string> methods = {
      "--method knn --k 5", "--method mnn --k 5", "--method snn --k 6 --theta 2 --snn-weighted",
      "--method epsilon --epsilon 0.6", "--method gabriel --gabriel-mode exact",
      "--method gabriel --gabriel-mode candidate:20"};
  for (std::size_t m = 0; m < methods.size(); ++m) {
    std::map<std::string, std::string> baseline;
    int run = 0;
    for (int threads : {1, 8, 1, 8}) {
      const auto out = work / ("bundle_" + std::to_string(m) + "_" + std::to_string(run++));
      if (run_tool("build --input " + sample_path.string() + " --label-col label --seed 17 --threads " +
                   std::to_string(threads) + " " + methods[m] + " --out " + out.string()) != 0) {
        ++tool_errors;
        continue;
      }
      auto files = bundle_bytes(out);
      if (baseline.empty()) {
        baseline = std::move(files);
        continue;
      }
      ++compared;
      if (files != baseline) {
        if (differing++ == 0) first << " first difference: " << methods[m] << " at --threads " << threads;
      }
    }
  }
  std::ostringstream detail;
  detail << compared << " repeated outputs compared byte-for-byte (threads 1 and 8), " << differing << " differ, "
         << tool_errors << " tool failures" << first.str();
  report("determinism", differing == 0 && tool_errors == 0, detail.str());
}

void scale() {
  SampleRng rng(2024);
  std::vector<double> values(kScaleN * kScaleDim);
  for (auto& v : values) v = rng.unit();
  std::vector<std::uint64_t> ids(kScaleN);
  for (std::size_t i = 0; i < kScaleN; ++i) ids[i] = i;
  const PointSet ps(kScaleDim, std::move(values), std::move(ids));

  struct Case {
    std::string name;
    std::function<Graph()> build;
  };
  const std::vector<Case> cases = {
      {"knn(k=3)", [&] { return knn_graph(ps, 3, Symmetrize::union_); }},
      {"mnn(k=3)", [&] { return mnn_graph(ps, 3); }},
      {"snn(k=3,theta=2)", [&] { return snn_graph(ps, 3, 2, false); }},
      {"epsilon(0.5)", [&] { return epsilon_graph(ps, 0.5); }},
      {"gabriel(candidate:20)", [&] { return gabriel_graph(ps, GabrielMode::candidate, 20); }},
  };
  bool ok = true;
  std::ostringstream detail;
  detail << kScaleN << " uniform points in [0,1]^" << kScaleDim << ";";
  for (const auto& c : cases) {
    const auto t0 = Clock::now();
    const auto g = c.build();
    const double secs = seconds_since(t0);
    const double rss = peak_rss_mb();
    ok = ok && secs < kScaleBudgetSeconds && rss < kScaleMemoryBudgetMb;
    char buf[160];
    std::snprintf(buf, sizeof buf, " %s %zu edges %.1f s peak %.0f MB;", c.name.c_str(), g.n_edges(), secs, rss);
    detail << buf;
  }
  detail << " budgets " << kScaleBudgetSeconds << " s and " << kScaleMemoryBudgetMb << " MB per method";
  report("scale", ok, detail.str());
}

void ingest_protocol() {
  // Class sizes exceed the targets; every 20th row is repeated verbatim.
  const std::map<std::string, std::size_t> available = {{"A", 9000}, {"B", 7000}, {"C", 3000}};
  SampleRng rng(7);
  std::vector<std::vector<double>> rows;
  std::vector<std::string> classes;
  std::size_t injected = 0;
  for (const auto& [name, count] : available) {
    for (std::size_t i = 0; i < count; ++i) {
      rows.push_back({rng.unit(), rng.unit(), rng.unit()});
      classes.push_back(name);
      if (i % 20 == 0) {
        rows.push_back(rows.back());
        classes.push_back(name);
        ++injected;
      }
    }
  }
  std::string text = "f0,f1,f2,label\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (double v : rows[i]) text += format_double(v) + ",";
    text += classes[i] + "\n";
  }
  CsvOptions opts;
  opts.label_column = "label";
  const auto raw = parse_csv(text, opts);
  const auto unique = dedup(raw);

  ClassBalanceSpec spec;
  spec.targets = parse_class_targets("A:5000,B:5000,C:2322");
  spec.seed = 42;
  const auto sampled = stratified_downsample(unique, spec);

  std::map<std::string, std::size_t> counts;
  for (std::size_t i = 0; i < sampled.size(); ++i) ++counts[sampled.labels()->name_of(i)];
  const double total = static_cast<double>(sampled.size());
  const bool counts_ok = raw.size() - unique.size() == injected && counts["A"] == 5000 && counts["B"] == 5000 &&
                         counts["C"] == 2322 && sampled.size() == 12322;
  const auto pct = [&](const char* c) { return std::round(10000.0 * counts[c] / total) / 100.0; };
  const bool pct_ok = pct("A") == 40.58 && pct("B") == 40.58 && pct("C") == 18.84;

  const auto split = train_test_split(sampled, 0.2, 42);
  std::set<std::uint64_t> train_ids(split.train.row_ids().begin(), split.train.row_ids().end());
  std::set<std::uint64_t> test_ids(split.test.row_ids().begin(), split.test.row_ids().end());
  std::set<std::uint64_t> all_ids(sampled.row_ids().begin(), sampled.row_ids().end());
  std::set<std::uint64_t> joined = train_ids;
  joined.insert(test_ids.begin(), test_ids.end());
  const bool partition = train_ids.size() == split.train.size() && test_ids.size() == split.test.size() &&
                         train_ids.size() + test_ids.size() == all_ids.size() && joined == all_ids;
  std::map<std::string, std::size_t> test_counts;
  for (std::size_t i = 0; i < split.test.size(); ++i) ++test_counts[split.test.labels()->name_of(i)];
  bool stratified = true;
  std::ostringstream per_class;
  for (const auto& [name, count] : counts) {
    const double want = 0.2 * static_cast<double>(count);
    stratified = stratified && std::abs(static_cast<double>(test_counts[name]) - want) < 1.0;
    per_class << " " << name << ":" << count - test_counts[name] << "/" << test_counts[name];
  }

  std::ostringstream detail;
  detail << "dedup removed " << raw.size() - unique.size() << "/" << injected << " duplicates; counts A=" << counts["A"]
         << " B=" << counts["B"] << " C=" << counts["C"] << "; shares " << pct("A") << "/" << pct("B") << "/"
         << pct("C") << "%; split train/test" << per_class.str() << (partition ? ", exact partition" : ", NOT a partition");
  report("ingest_protocol", counts_ok && pct_ok && partition && stratified, detail.str());
}

void tie_and_boundary() {
  std::vector<std::string> failed;
  auto check = [&](const std::string& what, bool ok) {
    if (!ok) failed.push_back(what);
  };

  // Distance exactly 5 between nodes 0 and 1.
  const auto pair = PointSet::from_rows({{0.0, 0.0}, {3.0, 4.0}});
  const double above = std::nextafter(5.0, 10.0);
  check("epsilon excludes d == eps", epsilon_graph(pair, 5.0).n_edges() == 0);
  check("epsilon includes d < eps", epsilon_graph(pair, above).n_edges() == 1);
  check("serial epsilon excludes d == eps", reference::epsilon_graph(pair, 5.0).n_edges() == 0);
  check("serial epsilon includes d < eps", reference::epsilon_graph(pair, above).n_edges() == 1);

  // Node 0 has four neighbors at distance 1; the lowest indices win.
  const auto cross = PointSet::from_rows({{0, 0}, {0, -1}, {-1, 0}, {1, 0}, {0, 1}, {5, 5}});
  const auto directed = knn_graph(cross, 2, Symmetrize::none);
  const auto serial = reference::knn_graph(cross, 2, Symmetrize::none);
  check("knn tie keeps lowest indices", directed.has_edge(0, 1) && directed.has_edge(0, 2) &&
                                            !directed.has_edge(0, 3) && !directed.has_edge(0, 4));
  check("serial knn tie keeps lowest indices", serial.edges == directed.edges);

  // Node 2 lies exactly on the circle with diameter 0-1.
  const auto circle = PointSet::from_rows({{0, 0}, {2, 0}, {1, 1}});
  check("default boundary is open", ConstructionConfig{}.gabriel_boundary == GabrielBoundary::open);
  for (auto mode : {GabrielMode::exact, GabrielMode::candidate}) {
    const std::string m = mode == GabrielMode::exact ? "exact" : "candidate";
    check("open " + m + " keeps boundary edge", gabriel_graph(circle, mode, 20, GabrielBoundary::open).has_edge(0, 1));
    check("closed " + m + " drops boundary edge",
          !gabriel_graph(circle, mode, 20, GabrielBoundary::closed).has_edge(0, 1));
    check("serial open " + m + " keeps boundary edge",
          reference::gabriel_graph(circle, mode, 20, GabrielBoundary::open).has_edge(0, 1));
    check("serial closed " + m + " drops boundary edge",
          !reference::gabriel_graph(circle, mode, 20, GabrielBoundary::closed).has_edge(0, 1));
  }
  check("pair test open", gabriel_pair_test(circle, 0, 1, GabrielBoundary::open));
  check("pair test closed", !gabriel_pair_test(circle, 0, 1, GabrielBoundary::closed));

  std::ostringstream detail;
  detail << "epsilon strict boundary, kNN index tie-break, Gabriel open and closed boundary;";
  if (failed.empty()) {
    detail << " all checks hold";
  } else {
    for (const auto& f : failed) detail << " failed: " << f << ";";
  }
  report("tie_and_boundary", failed.empty(), detail.str());
}

}  // namespace

int main() {
  const fs::path work = fs::temp_directory_path() / ("graphforge_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(work);
  fs::create_directories(work);

  guarded("oracle_equivalence", oracle_equivalence);
  guarded("proximity_hierarchy", proximity_hierarchy);
  guarded("determinism", [&] { determinism(work); });
  guarded("scale", scale);
  guarded("ingest_protocol", ingest_protocol);
  guarded("tie_and_boundary", tie_and_boundary);

  fs::remove_all(work);
  std::printf("%s: %d criteria failed\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
  return failures == 0 ? 0 : 1;
}
