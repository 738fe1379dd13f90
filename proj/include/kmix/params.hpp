// Licensed under the Apache License, Version 2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "kmix/common.hpp"

namespace kmix {

struct AutoParams {
  bool compact_only = false;  // k = 1: no short/long split
  int64_t mu = 0, h = 0, gamma = 0;
};

// Short/long split for a text of length n. Even k uses exponent
// (2k+2)/(k+2); odd k uses 2k/(k+1) - eps. Logarithms are base 2. The
// alphabet size does not enter the formula.
inline AutoParams auto_params(int64_t n, int k, int64_t /*sigma*/, double eps = 0.1) {
  require(n >= 1 && k >= 1, "auto_params: need n >= 1 and k >= 1");
  AutoParams ap;
  if (k == 1) {
    ap.compact_only = true;
    return ap;
  }
  const double lg = std::max(1.0, std::log2(static_cast<double>(n)));
  const double e = k % 2 == 0 ? (2.0 * k + 2) / (k + 2) : 2.0 * k / (k + 1) - eps;
  ap.mu = std::clamp<int64_t>(static_cast<int64_t>(std::floor(std::pow(lg, e) + 1e-9)), 1, n);
  ap.h = k % 2 == 0 ? k / 2 : (k - 1) / 2;
  ap.gamma = std::max<int64_t>(2, ap.mu / (k + 1));
  return ap;
}

}  // namespace kmix
