// Licensed under the Apache License, Version 2.0
#pragma once

#include <algorithm>
#include <array>
#include <cstdint>

#include "kmix/common.hpp"
#include "kmix/strings.hpp"
#include "kmix/text_lcp.hpp"

namespace kmix {

// Compact in-trie form of a modified suffix or fragment of the text:
// T[start..start+len) with up to kMaxSubs substitutions (offset, widened char).
inline constexpr int kMaxSubs = 4;

struct ModStr {
  int32_t start = 0;
  int32_t len = 0;
  uint8_t nsub = 0;
  std::array<int32_t, kMaxSubs> off{};
  std::array<uint16_t, kMaxSubs> ch{};

  static ModStr plain(int32_t start, int32_t len) {
    ModStr s;
    s.start = start;
    s.len = len;
    return s;
  }
};

inline WChar mod_at(BytesView t, const ModStr& s, int32_t o) {
  for (int q = 0; q < s.nsub; ++q)
    if (s.off[q] == o) return s.ch[q];
  return static_cast<unsigned char>(t[s.start + o]);
}

// Drops the first d characters.
inline ModStr mod_shift(const ModStr& s, int32_t d) {
  ModStr r;
  r.start = s.start + d;
  r.len = s.len - d;
  for (int q = 0; q < s.nsub; ++q)
    if (s.off[q] >= d) {
      r.off[r.nsub] = s.off[q] - d;
      r.ch[r.nsub] = s.ch[q];
      ++r.nsub;
    }
  return r;
}

inline ModStr mod_prefix(const ModStr& s, int32_t len) {
  ModStr r = s;
  r.len = len;
  r.nsub = 0;
  for (int q = 0; q < s.nsub; ++q)
    if (s.off[q] < len) {
      r.off[r.nsub] = s.off[q];
      r.ch[r.nsub] = s.ch[q];
      ++r.nsub;
    }
  return r;
}

// Sets position o to c; a write of the original byte removes the substitution.
inline ModStr mod_set(BytesView t, const ModStr& s, int32_t o, WChar c) {
  ModStr r = s;
  r.nsub = 0;
  const bool original = c < 256 && static_cast<unsigned char>(t[s.start + o]) == c;
  auto push = [&r](int32_t off, WChar ch) {
    require(r.nsub < kMaxSubs, "too many substitutions in a modified suffix");
    r.off[r.nsub] = off;
    r.ch[r.nsub] = static_cast<uint16_t>(ch);
    ++r.nsub;
  };
  bool done = false;
  for (int q = 0; q < s.nsub; ++q) {
    if (!done && s.off[q] >= o) {
      done = true;
      if (!original) push(o, c);
      if (s.off[q] == o) continue;
    }
    push(s.off[q], s.ch[q]);
  }
  if (!done && !original) push(o, c);
  return r;
}

inline ModStr to_modstr(const ModifiedFragment& mf) {
  require(mf.subs.size() <= static_cast<size_t>(kMaxSubs), "too many substitutions");
  ModStr s = ModStr::plain(static_cast<int32_t>(mf.start), static_cast<int32_t>(mf.length()));
  for (const auto& sub : mf.subs) {
    s.off[s.nsub] = static_cast<int32_t>(sub.pos);
    s.ch[s.nsub] = sub.new_char;
    ++s.nsub;
  }
  return s;
}

inline ModifiedFragment to_fragment(const ModStr& s) {
  ModifiedFragment mf;
  mf.start = s.start;
  mf.end = s.start + s.len;
  for (int q = 0; q < s.nsub; ++q) {
    require(s.ch[q] < 256, "placeholder character has no byte form");
    mf.subs.push_back({s.off[q], static_cast<unsigned char>(s.ch[q])});
  }
  return mf;
}

inline std::basic_string<WChar> mod_materialize(BytesView t, const ModStr& s) {
  std::basic_string<WChar> r(s.len, 0);
  for (int32_t o = 0; o < s.len; ++o) r[o] = static_cast<unsigned char>(t[s.start + o]);
  for (int q = 0; q < s.nsub; ++q) r[s.off[q]] = s.ch[q];
  return r;
}

// LCP of a[da..] and b[db..] by jumping between substitutions with text LCE.
inline int32_t lcp_tt(const TextLcpIndex& tx, const ModStr& a, int32_t da, const ModStr& b, int32_t db) {
  const BytesView t = tx.text();
  int32_t ia = 0, ib = 0;
  while (ia < a.nsub && a.off[ia] < da) ++ia;
  while (ib < b.nsub && b.off[ib] < db) ++ib;
  int32_t pa = da, pb = db, total = 0;
  while (pa < a.len && pb < b.len) {
    const bool sa = ia < a.nsub && a.off[ia] == pa;
    const bool sb = ib < b.nsub && b.off[ib] == pb;
    if (sa || sb) {
      WChar ca = sa ? a.ch[ia] : static_cast<unsigned char>(t[a.start + pa]);
      WChar cb = sb ? b.ch[ib] : static_cast<unsigned char>(t[b.start + pb]);
      if (ca != cb) return total;
      ia += sa;
      ib += sb;
      ++pa, ++pb, ++total;
      continue;
    }
    int32_t ea = ia < a.nsub ? a.off[ia] : a.len;
    int32_t eb = ib < b.nsub ? b.off[ib] : b.len;
    int32_t cap = std::min(ea - pa, eb - pb);
    int32_t l = std::min(cap, tx.lce(a.start + pa, b.start + pb));
    total += l;
    pa += l;
    pb += l;
    if (l < cap) return total;
  }
  return total;
}

// Three-way comparison of a[da..] and b[db..]; psi sorts after every byte.
inline int compare_tt(const TextLcpIndex& tx, const ModStr& a, int32_t da, const ModStr& b, int32_t db) {
  int32_t l = lcp_tt(tx, a, da, b, db);
  const bool ea = da + l >= a.len, eb = db + l >= b.len;
  if (ea && eb) return 0;
  if (ea) return -1;
  if (eb) return 1;
  WChar ca = mod_at(tx.text(), a, da + l), cb = mod_at(tx.text(), b, db + l);
  return ca < cb ? -1 : 1;
}

// Query adaptor for descending tries with another modified text string.
struct TextQuery {
  const TextLcpIndex* tx;
  ModStr q;
  int32_t len() const { return q.len; }
  WChar at(int32_t o) const { return mod_at(tx->text(), q, o); }
  int32_t lcp(const ModStr& s, int32_t from) const { return lcp_tt(*tx, s, from, q, from); }
};

}  // namespace kmix
