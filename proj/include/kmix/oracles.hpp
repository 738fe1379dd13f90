// Licensed under the Apache License, Version 2.0
#pragma once

#include <cstdint>
#include <vector>

#include "kmix/common.hpp"

namespace kmix {

inline int64_t hamming_at(BytesView t, size_t i, BytesView p, int64_t cap) {
  int64_t d = 0;
  for (size_t j = 0; j < p.size() && d <= cap; ++j) d += t[i + j] != p[j];
  return d;
}

// All i with Hamming(T[i..i+m), P) <= k, by direct scan.
inline OccurrenceSet brute_kmismatch(BytesView t, BytesView p, int64_t k) {
  OccurrenceSet out;
  if (p.size() > t.size()) return out;
  for (size_t i = 0; i + p.size() <= t.size(); ++i)
    if (hamming_at(t, i, p, k) <= k) out.push_back(static_cast<int64_t>(i));
  return out;
}

// All i where P matches T[i..i+m) with `wild` matching any byte.
inline OccurrenceSet brute_wildcard(BytesView t, BytesView p, char wild = '?') {
  OccurrenceSet out;
  if (p.size() > t.size()) return out;
  for (size_t i = 0; i + p.size() <= t.size(); ++i) {
    bool ok = true;
    for (size_t j = 0; j < p.size() && ok; ++j) ok = p[j] == wild || p[j] == t[i + j];
    if (ok) out.push_back(static_cast<int64_t>(i));
  }
  return out;
}

// Smallest period by testing every candidate.
inline int64_t naive_period(BytesView u) {
  const int64_t n = static_cast<int64_t>(u.size());
  for (int64_t p = 1; p < n; ++p) {
    bool ok = true;
    for (int64_t i = 0; i + p < n && ok; ++i) ok = u[i] == u[i + p];
    if (ok) return p;
  }
  return n;
}

// Every misperiod of S with respect to S[i..j).
inline std::vector<int64_t> naive_misper(BytesView s, int64_t i, int64_t j) {
  std::vector<int64_t> out;
  const int64_t p = j - i;
  for (int64_t a = 0; a < static_cast<int64_t>(s.size()); ++a) {
    if (a >= i && a < j) continue;
    int64_t b = i;
    while ((b - a) % p != 0) ++b;
    if (s[a] != s[b]) out.push_back(a);
  }
  return out;
}

// Whether T[j..j+m) is a k-nearly periodic occurrence of P for block length
// gamma and tau, evaluated from the definition.
inline bool classify_nearly_periodic(BytesView t, BytesView p, int64_t j, int64_t gamma, int64_t tau, int64_t k) {
  const int64_t m = static_cast<int64_t>(p.size());
  const BytesView tp = t.substr(j, m);
  const int64_t d = hamming_at(t, j, p, m);
  require(d <= k, "classify_nearly_periodic: more than k mismatches");
  for (int64_t i = 0; i <= k && (i + 1) * gamma <= m; ++i) {
    const BytesView blk = p.substr(i * gamma, gamma);
    const int64_t per = naive_period(blk);
    if (3 * per > tau) continue;
    if (blk != tp.substr(i * gamma, gamma)) continue;
    const auto x = naive_misper(p, i * gamma, i * gamma + per);
    const auto y = naive_misper(tp, i * gamma, i * gamma + per);
    if (d == static_cast<int64_t>(x.size() + y.size())) return true;
  }
  return false;
}

// Synchronizing-set conditions checked by direct string comparison.
inline bool sync_consistent_naive(BytesView t, int64_t tau, const std::vector<int32_t>& a) {
  const int64_t n = static_cast<int64_t>(t.size());
  std::vector<char> in(n, 0);
  for (int32_t x : a) {
    if (x < 0 || x > n - 2 * tau) return false;
    in[x] = 1;
  }
  for (int64_t i = 0; i + 2 * tau <= n; ++i)
    for (int64_t j = i + 1; j + 2 * tau <= n; ++j)
      if (in[i] != in[j] && t.substr(i, 2 * tau) == t.substr(j, 2 * tau)) return false;
  return true;
}

inline bool sync_dense_naive(BytesView t, int64_t tau, const std::vector<int32_t>& a) {
  const int64_t n = static_cast<int64_t>(t.size());
  std::vector<char> in(n, 0);
  for (int32_t x : a) in[x] = 1;
  for (int64_t i = 0; i + 3 * tau - 1 <= n; ++i) {
    bool empty = true;
    for (int64_t q = i; q < i + tau; ++q) empty = empty && !in[q];
    const bool periodic = 3 * naive_period(t.substr(i, 3 * tau - 1)) <= tau;
    if (empty != periodic) return false;
  }
  return true;
}

}  // namespace kmix
