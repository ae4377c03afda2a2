#include "graphforge/config.hpp"

#include <charconv>

namespace graphforge {

std::string to_string(Method m) {
  switch (m) {
    case Method::knn: return "knn";
    case Method::mnn: return "mnn";
    case Method::snn: return "snn";
    case Method::epsilon: return "epsilon";
    case Method::gabriel: return "gabriel";
  }
  return "?";
}

std::string to_string(Symmetrize s) { return s == Symmetrize::none ? "none" : "union"; }
std::string to_string(GabrielMode m) { return m == GabrielMode::exact ? "exact" : "candidate"; }
std::string to_string(GabrielBoundary b) { return b == GabrielBoundary::open ? "open" : "closed"; }

Method parse_method(const std::string& s) {
  for (auto m : {Method::knn, Method::mnn, Method::snn, Method::epsilon, Method::gabriel}) {
    if (to_string(m) == s) return m;
  }
  throw ConstructionError("unknown method '" + s + "'");
}

Symmetrize parse_symmetrize(const std::string& s) {
  if (s == "none") return Symmetrize::none;
  if (s == "union") return Symmetrize::union_;
  throw ConstructionError("unknown symmetrization '" + s + "'");
}

GabrielBoundary parse_gabriel_boundary(const std::string& s) {
  if (s == "open") return GabrielBoundary::open;
  if (s == "closed") return GabrielBoundary::closed;
  throw ConstructionError("unknown gabriel boundary '" + s + "'");
}

void parse_gabriel_mode(const std::string& s, ConstructionConfig& cfg) {
  if (s == "exact") {
    cfg.gabriel_mode = GabrielMode::exact;
    return;
  }
  const std::string prefix = "candidate";
  if (s.rfind(prefix, 0) == 0) {
    cfg.gabriel_mode = GabrielMode::candidate;
    if (s.size() == prefix.size()) {
      cfg.gabriel_candidates = ConstructionConfig::kDefaultCandidates;
      return;
    }
    std::size_t value = 0;
    const char* first = s.data() + prefix.size() + 1;
    const char* last = s.data() + s.size();
    if (s[prefix.size()] == ':') {
      auto res = std::from_chars(first, last, value);
      if (res.ec == std::errc() && res.ptr == last && value > 0) {
        cfg.gabriel_candidates = value;
        return;
      }
    }
  }
  throw ConstructionError("gabriel mode must be 'exact' or 'candidate:N', got '" + s + "'");
}

void ConstructionConfig::validate() const {
  if (metric != "euclidean") throw ConstructionError("unsupported metric '" + metric + "' (only euclidean)");
  switch (method) {
    case Method::knn:
    case Method::mnn:
      if (k < 1) throw ConstructionError("k must be at least 1");
      break;
    case Method::snn:
      if (k < 1) throw ConstructionError("k must be at least 1");
      if (effective_theta() < 1) throw ConstructionError("theta must be at least 1");
      if (effective_theta() > k) {
        throw ConstructionError("theta (" + std::to_string(effective_theta()) + ") exceeds k (" +
                                std::to_string(k) + ")");
      }
      break;
    case Method::epsilon:
      if (!(epsilon > 0.0)) throw ConstructionError("epsilon must be positive");
      break;
    case Method::gabriel:
      if (gabriel_mode == GabrielMode::candidate && gabriel_candidates < 1) {
        throw ConstructionError("gabriel candidate count must be positive");
      }
      break;
  }
}

nlohmann::ordered_json ConstructionConfig::to_json() const {
  nlohmann::ordered_json j;
  j["method"] = to_string(method);
  j["k"] = k;
  j["theta"] = theta ? nlohmann::ordered_json(*theta) : nlohmann::ordered_json(nullptr);
  j["epsilon"] = epsilon;
  j["metric"] = metric;
  j["symmetrize"] = to_string(symmetrize);
  j["gabriel_mode"] = to_string(gabriel_mode);
  j["gabriel_candidates"] = gabriel_candidates;
  j["gabriel_boundary"] = to_string(gabriel_boundary);
  j["snn_weighted"] = snn_weighted;
  return j;
}

ConstructionConfig ConstructionConfig::from_json(const nlohmann::json& j) {
  ConstructionConfig c;
  try {
    if (j.contains("method")) c.method = parse_method(j.at("method").get<std::string>());
    if (j.contains("k")) c.k = j.at("k").get<std::size_t>();
    if (j.contains("theta") && !j.at("theta").is_null()) c.theta = j.at("theta").get<std::size_t>();
    if (j.contains("epsilon")) c.epsilon = j.at("epsilon").get<double>();
    if (j.contains("metric")) c.metric = j.at("metric").get<std::string>();
    if (j.contains("symmetrize")) c.symmetrize = parse_symmetrize(j.at("symmetrize").get<std::string>());
    if (j.contains("gabriel_mode")) {
      const auto mode = j.at("gabriel_mode").get<std::string>();
      if (mode == "candidate" && j.contains("gabriel_candidates")) {
        c.gabriel_mode = GabrielMode::candidate;
      } else {
        parse_gabriel_mode(mode, c);
      }
    }
    if (j.contains("gabriel_candidates")) c.gabriel_candidates = j.at("gabriel_candidates").get<std::size_t>();
    if (j.contains("gabriel_boundary")) {
      c.gabriel_boundary = parse_gabriel_boundary(j.at("gabriel_boundary").get<std::string>());
    }
    if (j.contains("snn_weighted")) c.snn_weighted = j.at("snn_weighted").get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw ConstructionError(std::string("malformed construction config: ") + e.what());
  }
  return c;
}

}  // namespace graphforge
