#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "rmstscreen/error.hpp"

namespace rmstscreen {

// Linear-interpolation quantile (R type 7) of already sorted values.
inline double quantile_sorted(const std::vector<double>& sorted, double prob) {
  if (sorted.empty()) throw Error(ErrorCode::kInvalidArgument, "quantile of an empty sample");
  if (!(prob >= 0.0 && prob <= 1.0)) throw Error(ErrorCode::kInvalidArgument, "probability outside [0, 1]");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * prob;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

inline double quantile_type7(std::vector<double> values, double prob) {
  std::sort(values.begin(), values.end());
  return quantile_sorted(values, prob);
}

}  // namespace rmstscreen
