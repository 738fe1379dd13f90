// Licensed under the Apache License, Version 2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace kmix {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool cond, const char* what) {
  if (!cond) throw Error(what);
}
inline void require(bool cond, const std::string& what) {
  if (!cond) throw Error(what);
}

using Bytes = std::string;
using BytesView = std::string_view;

// Widened character domain: bytes are 0..255, the placeholder psi is 256.
using WChar = int;
inline constexpr WChar kPsi = 256;

// Sorted, duplicate-free list of starting positions.
using OccurrenceSet = std::vector<int64_t>;

inline int floor_log2(uint64_t x) {
  int r = -1;
  while (x) {
    x >>= 1;
    ++r;
  }
  return r;
}

inline void sort_unique(std::vector<int64_t>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace kmix
