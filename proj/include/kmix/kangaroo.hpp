// Licensed under the Apache License, Version 2.0
#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <vector>

#include "kmix/common.hpp"
#include "kmix/modstr.hpp"
#include "kmix/trie.hpp"

namespace kmix {

// Per-pattern preprocessing: for every suffix P[i..m), the locus of its
// longest prefix occurring in T (matching statistics) and one occurrence.
class PatternContext {
 public:
  PatternContext(const SuffixTree& st, BytesView p) : st_(&st), p_(p) {
    const int32_t m = static_cast<int32_t>(p_.size());
    ms_len_.assign(m, 0);
    ms_pos_.assign(m, 0);
    ms_ref_.assign(m, NodeRef{});
    const CompactTrie& tr = st.trie();
    const BytesView t = st.text().text();
    NodeRef cur{0, 0};
    for (int32_t i = 0; i < m; ++i) {
      // Extend the locus of P[i..i+d) character by character.
      int32_t y = cur.node, d = cur.depth;
      for (;;) {
        if (d < tr.node(y).depth) {
          const int32_t s = tr.str(tr.node(y).lo).start;
          while (d < tr.node(y).depth && i + d < m && t[s + d] == p_[i + d]) ++d;
          if (d < tr.node(y).depth) break;
        }
        if (i + d >= m) break;
        int32_t c = tr.find_child(y, static_cast<unsigned char>(p_[i + d]));
        if (c < 0) break;
        y = c;
      }
      cur = {y, d};
      ms_len_[i] = d;
      ms_ref_[i] = cur;
      ms_pos_[i] = d > 0 ? tr.str(tr.node(y).lo).start : 0;
      if (d == 0) continue;
      // Follow the suffix link of the nearest explicit ancestor, then skip/count.
      int32_t x = tr.explicit_ancestor(cur);
      int32_t base = x == 0 ? 0 : st.slink(x);
      const int32_t target = d - 1;
      int32_t z = base;
      while (tr.node(z).depth < target) z = tr.find_child(z, static_cast<unsigned char>(p_[i + 1 + tr.node(z).depth]));
      cur = {z, target};
    }
  }

  const SuffixTree& tree() const { return *st_; }
  const TextLcpIndex& text() const { return st_->text(); }
  const Bytes& pattern() const { return p_; }
  int32_t size() const { return static_cast<int32_t>(p_.size()); }
  int32_t ms_len(int32_t i) const { return ms_len_[i]; }
  int32_t ms_pos(int32_t i) const { return ms_pos_[i]; }
  NodeRef ms_ref(int32_t i) const { return ms_ref_[i]; }

  // Diagnostics for the truncated pattern partition.
  mutable uint64_t kangaroo_calls = 0;
  mutable uint64_t discarded_reached = 0;

 private:
  const SuffixTree* st_;
  Bytes p_;
  std::vector<int32_t> ms_len_, ms_pos_;
  std::vector<NodeRef> ms_ref_;
};

// A modified suffix (or prefix of one) of the pattern: P[q..q+len) with
// substitutions at relative offsets; characters may be psi.
inline constexpr int kMaxPatSubs = 12;

struct PatStr {
  int32_t q = 0;
  int32_t len = 0;
  uint8_t nsub = 0;
  std::array<int32_t, kMaxPatSubs> off{};
  std::array<uint16_t, kMaxPatSubs> ch{};

  static PatStr suffix(int32_t q, int32_t len) {
    PatStr s;
    s.q = q;
    s.len = len;
    return s;
  }
};

inline WChar pat_at(BytesView p, const PatStr& s, int32_t o) {
  for (int k = 0; k < s.nsub; ++k)
    if (s.off[k] == o) return s.ch[k];
  return static_cast<unsigned char>(p[s.q + o]);
}

inline PatStr pat_shift(const PatStr& s, int32_t d) {
  PatStr r;
  r.q = s.q + d;
  r.len = s.len - d;
  for (int k = 0; k < s.nsub; ++k)
    if (s.off[k] >= d) {
      r.off[r.nsub] = s.off[k] - d;
      r.ch[r.nsub] = s.ch[k];
      ++r.nsub;
    }
  return r;
}

inline PatStr pat_set(BytesView p, const PatStr& s, int32_t o, WChar c) {
  PatStr r = s;
  r.nsub = 0;
  const bool original = c < 256 && static_cast<unsigned char>(p[s.q + o]) == c;
  auto push = [&r](int32_t off, WChar ch) {
    require(r.nsub < kMaxPatSubs, "too many pattern substitutions");
    r.off[r.nsub] = off;
    r.ch[r.nsub] = static_cast<uint16_t>(ch);
    ++r.nsub;
  };
  bool done = false;
  for (int k = 0; k < s.nsub; ++k) {
    if (!done && s.off[k] >= o) {
      done = true;
      if (!original) push(o, c);
      if (s.off[k] == o) continue;
    }
    push(s.off[k], s.ch[k]);
  }
  if (!done && !original) push(o, c);
  return r;
}

inline std::basic_string<WChar> pat_materialize(BytesView p, const PatStr& s) {
  std::basic_string<WChar> r(s.len, 0);
  for (int32_t o = 0; o < s.len; ++o) r[o] = pat_at(p, s, o);
  return r;
}

namespace detail {
struct Frag {
  int32_t tpos;  // text position, or -1 for a single character
  int32_t len;
  WChar c;
};
}  // namespace detail

// LCP(S[ds..], Q[dq..]) where S is a modified text string and Q a modified
// pattern string. S is cut into text fragments and single substituted
// characters; Q into pattern fragments and substitutions, with every pattern
// fragment further cut by matching statistics into text fragments. The
// pattern partition is truncated after y+2x+1 pieces; reaching the discarded
// remainder is counted.
inline int32_t kangaroo_lcp(const PatternContext& ctx, const ModStr& s, int32_t ds, const PatStr& q, int32_t dq) {
  using detail::Frag;
  ++ctx.kangaroo_calls;
  const TextLcpIndex& tx = ctx.text();
  const BytesView t = tx.text();
  const BytesView p = ctx.pattern();
  std::array<Frag, 2 * kMaxSubs + 2> xs;
  int x = 0;
  {
    int32_t pos = ds;
    for (int k = 0; k <= s.nsub; ++k) {
      int32_t e = k < s.nsub ? s.off[k] : s.len;
      if (e < ds) continue;
      if (e > pos) xs[x++] = {s.start + pos, e - pos, 0};
      if (k < s.nsub) {
        xs[x++] = {-1, 1, s.ch[k]};
        pos = e + 1;
      }
    }
  }
  // Pattern-side fragments Y.
  std::array<Frag, 2 * kMaxPatSubs + 2> ys;
  int y = 0;
  {
    int32_t pos = dq;
    for (int k = 0; k <= q.nsub; ++k) {
      int32_t e = k < q.nsub ? q.off[k] : q.len;
      if (e < dq) continue;
      if (e > pos) ys[y++] = {q.q + pos, e - pos, 0};  // tpos holds a pattern position here
      if (k < q.nsub) {
        ys[y++] = {-1, 1, q.ch[k]};
        pos = e + 1;
      }
    }
  }
  const int limit = y + 2 * x + 1;
  int zcount = 0;
  int yi = 0;
  int32_t yoff = 0;  // consumed prefix of ys[yi]
  auto next_z = [&](Frag& z) -> bool {
    if (yi >= y) return false;
    if (zcount >= limit) ++ctx.discarded_reached;
    ++zcount;
    const Frag& f = ys[yi];
    if (f.tpos < 0) {
      z = f;
      ++yi;
      return true;
    }
    const int32_t u = f.tpos + yoff, rem = f.len - yoff;
    if (rem == 1 || ctx.ms_len(u) == 0) {
      z = {-1, 1, static_cast<unsigned char>(p[u])};
      if (rem == 1) {
        ++yi;
        yoff = 0;
      } else {
        ++yoff;
      }
      return true;
    }
    const int32_t l = std::min(rem, ctx.ms_len(u));
    z = {ctx.ms_pos(u), l, 0};
    yoff += l;
    if (yoff == f.len) {
      ++yi;
      yoff = 0;
    }
    return true;
  };
  int32_t lcp = 0;
  int i = 0;
  Frag xf = x > 0 ? xs[0] : Frag{};
  Frag zf{};
  bool have_z = next_z(zf);
  while (i < x && have_z) {
    if (xf.tpos < 0) {
      WChar zc = zf.tpos < 0 ? zf.c : static_cast<unsigned char>(t[zf.tpos]);
      if (zc != xf.c) break;
      if (zf.len == 1) {
        have_z = next_z(zf);
      } else {
        ++zf.tpos;
        --zf.len;
      }
      if (++i < x) xf = xs[i];
      ++lcp;
    } else if (zf.tpos < 0) {
      if (static_cast<unsigned char>(t[xf.tpos]) != zf.c) break;
      ++xf.tpos;
      if (--xf.len == 0 && ++i < x) xf = xs[i];
      have_z = next_z(zf);
      ++lcp;
    } else {
      const int32_t l = std::min({tx.lce(xf.tpos, zf.tpos), xf.len, zf.len});
      lcp += l;
      if (l < std::min(xf.len, zf.len)) break;
      if (l == xf.len) {
        if (++i < x) xf = xs[i];
      } else {
        xf.tpos += l;
        xf.len -= l;
      }
      if (l == zf.len) {
        have_z = next_z(zf);
      } else {
        zf.tpos += l;
        zf.len -= l;
      }
    }
  }
  return lcp;
}

// Query adaptor for descending tries with a modified pattern string.
struct PatQuery {
  const PatternContext* ctx;
  PatStr q;
  int32_t len() const { return q.len; }
  WChar at(int32_t o) const { return pat_at(ctx->pattern(), q, o); }
  int32_t lcp(const ModStr& s, int32_t from) const {
    if (from >= s.len || from >= q.len) return 0;
    return std::min(std::min(s.len, q.len) - from, kangaroo_lcp(*ctx, s, from, q, from));
  }
};

// Three-way comparison of a text-side string against a pattern-side string.
inline int compare_tp(const PatternContext& ctx, const ModStr& s, int32_t ds, const PatStr& q, int32_t dq) {
  int32_t l = kangaroo_lcp(ctx, s, ds, q, dq);
  const bool es = ds + l >= s.len, eq = dq + l >= q.len;
  if (es && eq) return 0;
  if (es) return -1;
  if (eq) return 1;
  WChar a = mod_at(ctx.text().text(), s, ds + l), b = pat_at(ctx.pattern(), q, dq + l);
  return a < b ? -1 : 1;
}

}  // namespace kmix
