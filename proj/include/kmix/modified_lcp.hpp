// Licensed under the Apache License, Version 2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "kmix/common.hpp"
#include "kmix/kangaroo.hpp"
#include "kmix/trie.hpp"

namespace kmix {

inline bool is_plain_trie(const CompactTrie& t) {
  for (const auto& s : t.strings())
    if (s.nsub) return false;
  return true;
}

// True iff no terminal T[a..b) with b < n has an outgoing edge along T[b].
inline bool is_canonical(const CompactTrie& t) {
  const int32_t n = t.text().size();
  for (int32_t i = 0; i < t.num_terminals(); ++i) {
    const ModStr& s = t.str(i);
    if (s.start + s.len >= n) continue;
    TextQuery q{&t.text(), ModStr::plain(s.start, s.len + 1)};
    if (t.descend(q, NodeRef{t.term_node(i), s.len}).depth > s.len) return false;
  }
  return true;
}

// Extends every terminal fragment along the trie while an edge on the next
// text character exists. The set of path labels is unchanged.
inline CompactTrie canonicalize(const CompactTrie& t) {
  require(is_plain_trie(t), "canonicalize: trie has modified strings");
  const TextLcpIndex& tx = t.text();
  const int32_t n = tx.size();
  std::vector<CompactTrie::Entry> e;
  for (int32_t i = 0; i < t.num_terminals(); ++i) {
    const ModStr& s = t.str(i);
    TextQuery q{&tx, ModStr::plain(s.start, n - s.start)};
    int32_t len = t.descend(q, NodeRef{t.term_node(i), s.len}).depth;
    for (int32_t p = t.label_begin(i); p < t.label_end(i); ++p) e.push_back({ModStr::plain(s.start, len), t.label(p)});
  }
  return CompactTrie::build(tx, std::move(e));
}

// Unrooted LCP queries on a canonical trie of text fragments, answered on the
// companion trie of the corresponding suffixes and trimmed by a weighted
// ancestor query at the fragment's length.
class CanonicalFragmentLcp {
 public:
  explicit CanonicalFragmentLcp(const CompactTrie& t) : t_(&t) {
    require(is_plain_trie(t), "canonical_fragment_lcp: trie has modified strings");
    require(is_canonical(t), "canonical_fragment_lcp: trie is not in canonical form");
    const int32_t n = t.text().size();
    std::vector<CompactTrie::Entry> e;
    for (int32_t i = 0; i < t.num_terminals(); ++i) e.push_back({ModStr::plain(t.str(i).start, n - t.str(i).start), i});
    ext_ = CompactTrie::build(t.text(), std::move(e));
    ext_.enable_lifting();
    to_ext_.assign(t.num_terminals(), -1);
    for (int32_t s = 0; s < ext_.num_terminals(); ++s)
      for (int32_t p = ext_.label_begin(s); p < ext_.label_end(s); ++p) to_ext_[ext_.label(p)] = s;
  }

  const CompactTrie& trie() const { return *t_; }
  const CompactTrie& companion() const { return ext_; }

  template <class Q>
  NodeRef query(const NodeRef& v, const Q& q, ProbeCounters* pc = nullptr) const {
    const CompactTrie& t = *t_;
    const int32_t f = t.node(v.node).lo;
    const int32_t s = to_ext_[f];
    NodeRef v2 = ext_.weighted_ancestor(ext_.term_node(s), v.depth);
    NodeRef w2 = ext_.tree_lcp_unrooted(v2, q, pc);
    const int32_t s2 = ext_.node(w2.node).lo;
    const int32_t f2 = ext_.label(ext_.label_begin(s2));
    const int32_t depth = std::min(t.str(f2).len, w2.depth);
    return t.weighted_ancestor(t.term_node(f2), depth);
  }

 private:
  const CompactTrie* t_;
  CompactTrie ext_;
  std::vector<int32_t> to_ext_;
};

// Decomposition of a trie of (<=k)-modified suffixes into canonical tries of
// text fragments (odd phases) and depth-one tries of single characters (even
// phases). Queries walk the fragments of a modified pattern string across the
// decomposition.
class ModifiedTrieLcp {
 public:
  struct OddTree {
    std::unique_ptr<CompactTrie> trie;
    std::unique_ptr<CanonicalFragmentLcp> lcp;
    int32_t base_depth = 0;  // string depth in the host trie of this tree's root
    std::vector<int32_t> members;  // host string indices
    // Per node: a host string whose unextended fragment passes through it.
    std::vector<int32_t> cover;
    // Hanging even trees keyed by (locus node, locus depth) in this trie.
    std::map<std::pair<int32_t, int32_t>, int32_t> even_at;
  };
  struct EvenTree {
    int32_t base_depth = 0;
    std::vector<std::pair<WChar, int32_t>> children;  // char -> odd tree id
    int32_t rep = 0;  // host string index through this point
  };

  explicit ModifiedTrieLcp(const CompactTrie& host) : host_(&host) {
    std::vector<int32_t> all(host.num_terminals());
    for (int32_t i = 0; i < host.num_terminals(); ++i) all[i] = i;
    if (!all.empty()) decompose(all, 0);
  }

  int32_t num_odd() const { return static_cast<int32_t>(odd_.size()); }
  int32_t num_even() const { return static_cast<int32_t>(even_.size()); }
  const OddTree& odd(int32_t i) const { return odd_[i]; }
  const EvenTree& even(int32_t i) const { return even_[i]; }
  int32_t phases() const { return max_phase_; }

  // Rooted TreeLCP of the host trie for a modified pattern string.
  NodeRef query(const PatternContext& ctx, const PatStr& q, ProbeCounters* pc = nullptr) const {
    if (odd_.empty()) return {0, 0};
    const BytesView p = ctx.pattern();
    int32_t tree = 0;
    NodeRef u{0, 0};
    int32_t consumed = 0;
    int32_t rep = odd_[0].members.front();
    while (consumed < q.len) {
      const OddTree& ot = odd_[tree];
      // Current pattern fragment [consumed, fend): a substitution or a plain run.
      int32_t fend = q.len;
      for (int k = 0; k < q.nsub; ++k)
        if (q.off[k] >= consumed) {
          fend = q.off[k] == consumed ? consumed + 1 : q.off[k];
          break;
        }
      const int32_t flen = fend - consumed;
      PatStr frag = pat_shift(q, consumed - u.depth);
      frag.len = u.depth + flen;
      NodeRef w = flen == 1 ? ot.trie->descend(PatQuery{&ctx, frag}, u, pc)
                            : ot.lcp->query(u, PatQuery{&ctx, frag}, pc);
      const int32_t l = w.depth - u.depth;
      consumed += l;
      if (l > 0) rep = ot.cover[w.node];
      if (consumed >= q.len) break;
      if (l == flen) {
        u = w;
        continue;
      }
      // Mismatch inside this odd tree: continue in the hanging even tree.
      auto it = ot.even_at.find({w.node, w.depth});
      if (it == ot.even_at.end()) break;
      const EvenTree& et = even_[it->second];
      const WChar c = pat_at(p, q, consumed);
      int32_t next = -1;
      for (auto& [ch, id] : et.children)
        if (ch == c) next = id;
      if (next < 0) break;
      ++consumed;
      tree = next;
      u = {0, 0};
      rep = odd_[tree].members.front();
    }
    const CompactTrie& h = *host_;
    return h.weighted_ancestor(h.term_node(rep), consumed);
  }

 private:
  int32_t decompose(const std::vector<int32_t>& members, int32_t d0, int phase = 1) {
    const CompactTrie& h = *host_;
    const TextLcpIndex& tx = h.text();
    max_phase_ = std::max(max_phase_, phase);
    const int32_t id = static_cast<int32_t>(odd_.size());
    odd_.emplace_back();
    std::vector<CompactTrie::Entry> frags;
    for (size_t i = 0; i < members.size(); ++i) {
      const ModStr& s = h.str(members[i]);
      int32_t e = s.len;
      for (int k = 0; k < s.nsub; ++k)
        if (s.off[k] >= d0) {
          e = s.off[k];
          break;
        }
      frags.push_back({ModStr::plain(s.start + d0, e - d0), members[i]});
    }
    auto trie = std::make_unique<CompactTrie>(canonicalize(CompactTrie::build(tx, std::move(frags))));
    trie->enable_lifting();
    auto lcp = std::make_unique<CanonicalFragmentLcp>(*trie);
    // Leaving points of every member string.
    std::map<std::pair<int32_t, int32_t>, std::map<WChar, std::vector<int32_t>>> groups;
    for (size_t i = 0; i < members.size(); ++i) {
      const ModStr& s = h.str(members[i]);
      ModStr rest = mod_shift(s, d0);
      NodeRef w = trie->descend(TextQuery{&tx, rest}, NodeRef{0, 0});
      const int32_t e = d0 + w.depth;
      if (e >= s.len) continue;
      groups[{w.node, w.depth}][mod_at(tx.text(), s, e)].push_back(members[i]);
    }
    {
      std::vector<int32_t> best(trie->num_nodes(), -1), blen(trie->num_nodes(), -1);
      for (int32_t v = trie->num_nodes() - 1; v >= 0; --v) {
        const auto& nd = trie->node(v);
        if (nd.term >= 0)
          for (int32_t q = trie->label_begin(nd.term); q < trie->label_end(nd.term); ++q) {
            int32_t m = trie->label(q);
            int32_t ol = orig_len(m, d0);
            if (ol > blen[v]) blen[v] = ol, best[v] = m;
          }
        for (int32_t i = 0; i < nd.ccnt; ++i) {
          int32_t c = trie->child_at(v, i);
          if (blen[c] > blen[v]) blen[v] = blen[c], best[v] = best[c];
        }
      }
      odd_[id].cover = std::move(best);
    }
    odd_[id].trie = std::move(trie);
    odd_[id].lcp = std::move(lcp);
    odd_[id].base_depth = d0;
    odd_[id].members = members;
    for (auto& [at, bychar] : groups) {
      const int32_t eid = static_cast<int32_t>(even_.size());
      even_.emplace_back();
      even_[eid].base_depth = d0 + at.second;
      even_[eid].rep = bychar.begin()->second.front();
      odd_[id].even_at[at] = eid;
      for (auto& [c, ms] : bychar) {
        int32_t child = decompose(ms, d0 + at.second + 1, phase + 2);
        even_[eid].children.push_back({c, child});
      }
    }
    return id;
  }

  int32_t orig_len(int32_t m, int32_t d0) const {
    const ModStr& s = host_->str(m);
    for (int k = 0; k < s.nsub; ++k)
      if (s.off[k] >= d0) return s.off[k] - d0;
    return s.len - d0;
  }

  const CompactTrie* host_;
  std::vector<OddTree> odd_;
  std::vector<EvenTree> even_;
  int max_phase_ = 0;
};

}  // namespace kmix
