#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>

namespace graphforge {

/// Sum of squared coordinate differences, accumulated in dimension order.
/// Every distance comparison in the library goes through this routine so
/// that the indexed and brute-force paths round identically.
inline double squared_distance(std::span<const double> x, std::span<const double> y) {
  double sum = 0.0;
  for (std::size_t l = 0; l < x.size(); ++l) {
    const double diff = x[l] - y[l];
    sum += diff * diff;
  }
  return sum;
}

inline double euclidean_distance(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("euclidean_distance: dimension mismatch");
  return std::sqrt(squared_distance(x, y));
}

}  // namespace graphforge
