// Copyright 2026 The lgc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <boost/math/distributions/chi_squared.hpp>

#include <cstdint>
#include <vector>

namespace lgc::testing {

// Pearson goodness of fit. Cells with expected count below 5 are pooled.
inline double chi_square_pvalue(const std::vector<double>& probabilities,
                                const std::vector<std::int64_t>& counts,
                                std::int64_t draws) {
  double stat = 0.0;
  int cells = 0;
  double pooled_e = 0.0, pooled_o = 0.0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    const double e = probabilities[i] * static_cast<double>(draws);
    if (e < 5.0) {
      pooled_e += e;
      pooled_o += static_cast<double>(counts[i]);
      continue;
    }
    const double o = static_cast<double>(counts[i]);
    stat += (o - e) * (o - e) / e;
    ++cells;
  }
  if (pooled_e > 0.0) {
    stat += (pooled_o - pooled_e) * (pooled_o - pooled_e) / pooled_e;
    ++cells;
  }
  boost::math::chi_squared dist(cells - 1);
  return boost::math::cdf(boost::math::complement(dist, stat));
}

}  // namespace lgc::testing
