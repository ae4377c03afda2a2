#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace graphforge {

/// Invalid construction parameters or inputs a constructor cannot handle
/// (for example coincident points under the Gabriel rule).
class ConstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Method { knn, mnn, snn, epsilon, gabriel };
enum class Symmetrize { none, union_ };
enum class GabrielMode { exact, candidate };

/// `open`: points exactly on the diametral sphere do not block an edge
/// (non-strict ||C - mid||^2 >= r^2 passes). `closed`: they do.
enum class GabrielBoundary { open, closed };

std::string to_string(Method m);
std::string to_string(Symmetrize s);
std::string to_string(GabrielMode m);
std::string to_string(GabrielBoundary b);
Method parse_method(const std::string& s);
Symmetrize parse_symmetrize(const std::string& s);
GabrielBoundary parse_gabriel_boundary(const std::string& s);

struct ConstructionConfig {
  static constexpr std::size_t kDefaultK = 3;
  static constexpr double kDefaultEpsilon = 0.5;
  static constexpr std::size_t kDefaultTheta = 2;
  static constexpr std::size_t kDefaultCandidates = 20;

  Method method = Method::knn;
  std::size_t k = kDefaultK;
  std::optional<std::size_t> theta;
  double epsilon = kDefaultEpsilon;
  std::string metric = "euclidean";
  Symmetrize symmetrize = Symmetrize::union_;
  GabrielMode gabriel_mode = GabrielMode::exact;
  std::size_t gabriel_candidates = kDefaultCandidates;
  GabrielBoundary gabriel_boundary = GabrielBoundary::open;
  bool snn_weighted = false;

  /// Throws ConstructionError when the parameters the method needs are
  /// missing or inconsistent.
  void validate() const;

  /// theta, or the default of 2 when unset.
  std::size_t effective_theta() const { return theta.value_or(kDefaultTheta); }

  nlohmann::ordered_json to_json() const;
  static ConstructionConfig from_json(const nlohmann::json& j);

  bool operator==(const ConstructionConfig&) const = default;
};

/// "exact" or "candidate:N".
void parse_gabriel_mode(const std::string& s, ConstructionConfig& cfg);

}  // namespace graphforge
