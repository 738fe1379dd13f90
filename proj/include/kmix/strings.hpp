// Licensed under the Apache License, Version 2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <utility>
#include <vector>

#include "kmix/common.hpp"
#include "kmix/text_lcp.hpp"

namespace kmix {

inline int64_t hamming(BytesView u, BytesView v) {
  require(u.size() == v.size(), "hamming: length mismatch");
  int64_t d = 0;
  for (size_t i = 0; i < u.size(); ++i) d += u[i] != v[i];
  return d;
}

inline std::vector<int32_t> failure_function(BytesView u) {
  std::vector<int32_t> f(u.size() + 1, 0);
  if (u.empty()) return f;
  f[0] = -1;
  int32_t k = -1;
  for (size_t i = 0; i < u.size(); ++i) {
    while (k >= 0 && u[k] != u[i]) k = f[k];
    f[i + 1] = ++k;
  }
  return f;
}

inline int64_t smallest_period(BytesView u) {
  require(!u.empty(), "smallest_period: empty string");
  auto f = failure_function(u);
  return static_cast<int64_t>(u.size()) - f[u.size()];
}

// Offset of the lexicographically minimal rotation of u (Booth).
inline int64_t minimal_rotation(BytesView u) {
  const int64_t n = static_cast<int64_t>(u.size());
  if (n == 0) return 0;
  int64_t i = 0, j = 1, k = 0;
  auto at = [&](int64_t x) { return static_cast<unsigned char>(u[x % n]); };
  while (i < n && j < n && k < n) {
    unsigned char a = at(i + k), b = at(j + k);
    if (a == b) {
      ++k;
      continue;
    }
    if (a > b)
      i = i + k + 1;
    else
      j = j + k + 1;
    if (i == j) ++j;
    k = 0;
  }
  return std::min(i, j);
}

// Returns d in [start, start+period) with T[d..d+period) the minimal rotation.
inline int64_t lyndon_root(BytesView t, int64_t start, int64_t period) {
  require(period >= 1 && start >= 0 && start + period <= static_cast<int64_t>(t.size()),
          "lyndon_root: range out of text");
  BytesView u = t.substr(start, period);
  require(smallest_period(u) == period || period % smallest_period(u) != 0,
          "lyndon_root: period string is not primitive");
  return start + minimal_rotation(u);
}

struct Run {
  int64_t start = 0;  // inclusive
  int64_t end = 0;    // inclusive
  int64_t period = 0;
  int64_t lyndon_offset = 0;
  int64_t length() const { return end - start + 1; }
  friend bool operator==(const Run&, const Run&) = default;
};

// All maximal repetitions, sorted by (start, period). For each period p the
// positions 0, p, 2p, ... are probed and extended with forward/backward LCE.
inline std::vector<Run> compute_runs(const TextLcpIndex& fwd, const TextLcpIndex& rev) {
  const BytesView t = fwd.text();
  const int64_t n = static_cast<int64_t>(t.size());
  std::vector<Run> out;
  std::set<std::pair<int64_t, int64_t>> seen;
  for (int64_t p = 1; 2 * p <= n; ++p) {
    for (int64_t i = 0; i + p < n; i += p) {
      int64_t f = fwd.lce(static_cast<int32_t>(i), static_cast<int32_t>(i + p));
      int64_t b = i == 0 ? 0 : rev.lce(static_cast<int32_t>(n - i), static_cast<int32_t>(n - i - p));
      int64_t s = i - b, e = i + p + f - 1;
      if (e - s + 1 < 2 * p) continue;
      if (!seen.insert({s, e}).second) continue;
      out.push_back({s, e, p, lyndon_root(t, s, p) - s});
    }
  }
  std::sort(out.begin(), out.end(), [](const Run& a, const Run& b) {
    return a.start != b.start ? a.start < b.start : a.period < b.period;
  });
  return out;
}

inline Bytes reversed(BytesView s) { return Bytes(s.rbegin(), s.rend()); }

inline std::vector<Run> compute_runs(BytesView t) {
  TextLcpIndex fwd{Bytes(t)}, rev{reversed(t)};
  return compute_runs(fwd, rev);
}

inline std::vector<Run> tau_runs(const std::vector<Run>& runs, int64_t tau) {
  require(tau >= 1, "tau_runs: tau must be positive");
  std::vector<Run> out;
  for (const Run& r : runs)
    if (r.length() >= 3 * tau - 1 && 3 * r.period <= tau) out.push_back(r);
  return out;
}

struct Misper {
  std::vector<int64_t> left, right;
  std::vector<int64_t> all() const {
    std::vector<int64_t> v = left;
    v.insert(v.end(), right.begin(), right.end());
    return v;
  }
};

// Positions outside [i..j) disagreeing with the periodic extension of S[i..j).
inline Misper misper(BytesView s, int64_t i, int64_t j, int64_t limit) {
  require(0 <= i && i < j && j <= static_cast<int64_t>(s.size()), "misper: need 0 <= i < j <= |S|");
  const int64_t p = j - i, n = static_cast<int64_t>(s.size());
  auto ref = [&](int64_t a) { return i + (((a - i) % p) + p) % p; };
  Misper m;
  for (int64_t a = i - 1; a >= 0 && static_cast<int64_t>(m.left.size()) < limit; --a)
    if (s[a] != s[ref(a)]) m.left.push_back(a);
  std::reverse(m.left.begin(), m.left.end());
  for (int64_t a = j; a < n && static_cast<int64_t>(m.right.size()) < limit; ++a)
    if (s[a] != s[ref(a)]) m.right.push_back(a);
  return m;
}

namespace detail {
// Right-side misperiods of T[i..j) found by LCE jumps against the verified
// periodic stretch starting at i.
inline std::vector<int64_t> misper_right_lce(const TextLcpIndex& idx, int64_t i, int64_t j,
                                             int64_t limit) {
  const int64_t n = idx.size(), p = j - i;
  std::vector<int64_t> out;
  int64_t good_end = j, cur = j;
  while (cur < n && static_cast<int64_t>(out.size()) < limit) {
    int64_t r = i + (cur - i) % p;
    int64_t cap = std::min(good_end - r, n - cur);
    int64_t l = std::min<int64_t>(idx.lce(static_cast<int32_t>(cur), static_cast<int32_t>(r)), cap);
    if (cur == good_end) good_end += l;
    cur += l;
    if (l < cap) {
      out.push_back(cur);
      ++cur;
    }
  }
  return out;
}
}  // namespace detail

inline Misper misper_lce(const TextLcpIndex& fwd, const TextLcpIndex& rev, int64_t i, int64_t j,
                         int64_t limit) {
  const int64_t n = fwd.size();
  require(0 <= i && i < j && j <= n, "misper: need 0 <= i < j <= |S|");
  Misper m;
  m.right = detail::misper_right_lce(fwd, i, j, limit);
  for (int64_t a : detail::misper_right_lce(rev, n - j, n - i, limit)) m.left.push_back(n - 1 - a);
  std::reverse(m.left.begin(), m.left.end());
  return m;
}

struct Substitution {
  int64_t pos = 0;
  unsigned char new_char = 0;
  friend bool operator==(const Substitution&, const Substitution&) = default;
};

struct ModifiedFragment {
  int64_t start = 0;
  int64_t end = 0;
  std::vector<Substitution> subs;

  int64_t length() const { return end - start; }

  void validate(BytesView t, size_t max_subs) const {
    require(0 <= start && start <= end && end <= static_cast<int64_t>(t.size()), "fragment out of text");
    require(subs.size() <= max_subs, "too many substitutions");
    for (size_t q = 0; q < subs.size(); ++q) {
      require(subs[q].pos >= 0 && subs[q].pos < length(), "substitution offset out of fragment");
      require(q == 0 || subs[q - 1].pos < subs[q].pos, "substitutions not strictly increasing");
      require(static_cast<unsigned char>(t[start + subs[q].pos]) != subs[q].new_char,
              "substitution writes the original byte");
    }
  }

  unsigned char char_at(BytesView t, int64_t off) const {
    require(off >= 0 && off < length(), "char_at: offset out of range");
    auto it = std::lower_bound(subs.begin(), subs.end(), off,
                               [](const Substitution& s, int64_t o) { return s.pos < o; });
    if (it != subs.end() && it->pos == off) return it->new_char;
    return static_cast<unsigned char>(t[start + off]);
  }
};

inline Bytes materialize(const ModifiedFragment& mf, BytesView t) {
  require(0 <= mf.start && mf.start <= mf.end && mf.end <= static_cast<int64_t>(t.size()),
          "materialize: fragment out of text");
  Bytes s(t.substr(mf.start, mf.length()));
  for (const auto& sub : mf.subs) {
    require(sub.pos >= 0 && sub.pos < mf.length(), "materialize: substitution out of range");
    s[sub.pos] = static_cast<char>(sub.new_char);
  }
  return s;
}

inline int64_t alphabet_size(BytesView t) {
  bool seen[256] = {};
  int64_t c = 0;
  for (unsigned char ch : t)
    if (!seen[ch]) seen[ch] = true, ++c;
  return c;
}

inline std::vector<unsigned char> alphabet(BytesView t) {
  bool seen[256] = {};
  for (unsigned char ch : t) seen[ch] = true;
  std::vector<unsigned char> a;
  for (int c = 0; c < 256; ++c)
    if (seen[c]) a.push_back(static_cast<unsigned char>(c));
  return a;
}

}  // namespace kmix
