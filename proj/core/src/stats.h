// stats.h

// Copyright 2026  speechcur authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef SPEECHCUR_SRC_STATS_H_
#define SPEECHCUR_SRC_STATS_H_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace speechcur::internal {

/// Percentile with linear interpolation between closest ranks (q in [0, 1]).
/// Reorders `values`. Requires a non-empty input.
template <typename T>
double Percentile(std::vector<T>& values, double q) {
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const double frac = pos - static_cast<double>(lo);
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(lo),
                   values.end());
  const double lo_value = values[lo];
  if (frac == 0.0 || lo + 1 >= values.size()) return lo_value;
  const double hi_value = *std::min_element(
      values.begin() + static_cast<std::ptrdiff_t>(lo) + 1, values.end());
  return lo_value + frac * (hi_value - lo_value);
}

}  // namespace speechcur::internal

#endif  // SPEECHCUR_SRC_STATS_H_
