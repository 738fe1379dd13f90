// Licensed under the Apache License, Version 2.0
#pragma once

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "kmix/common.hpp"
#include "kmix/kangaroo.hpp"
#include "kmix/modified_lcp.hpp"
#include "kmix/trie.hpp"

namespace kmix {

// Prefix-range search over an implicit sorted list of modified strings that
// is only accessible element by element. A compact trie over every step-th
// element (plus the first and last) narrows the answer to O(1) gaps of at
// most step elements, which are then binary searched.
class SampledRange {
 public:
  SampledRange() = default;

  // get(i) returns the i-th string of the sorted, duplicate-free list.
  template <class Get>
  void build(const TextLcpIndex& tx, int32_t size, int32_t step, Get&& get, bool modified_lcp = false) {
    size_ = size;
    trie_.reset();
    mlcp_.reset();
    step = std::max<int32_t>(step, 1);
    // Short lists are binary searched directly.
    if (size <= 2 * step) return;
    std::vector<ModStr> strs;
    std::vector<int32_t> off{0}, labels, lcps;
    for (int32_t i = 0; i < size; i += step) {
      strs.push_back(get(i));
      labels.push_back(i);
      off.push_back(static_cast<int32_t>(labels.size()));
    }
    if (labels.back() != size - 1) {
      strs.push_back(get(size - 1));
      labels.push_back(size - 1);
      off.push_back(static_cast<int32_t>(labels.size()));
    }
    lcps.push_back(0);
    for (size_t i = 1; i < strs.size(); ++i) lcps.push_back(lcp_tt(tx, strs[i - 1], 0, strs[i], 0));
    trie_ = std::make_unique<CompactTrie>(
        CompactTrie::from_sorted(tx, std::move(strs), std::move(off), std::move(labels), lcps));
    if (modified_lcp) {
      trie_->enable_lifting();
      mlcp_ = std::make_unique<ModifiedTrieLcp>(*trie_);
    }
  }

  int32_t size() const { return size_; }
  const CompactTrie* sampled() const { return trie_.get(); }
  size_t memory_bytes() const { return trie_ ? trie_->memory_bytes() : 0; }

  // Range [lo, hi) of elements with q as a prefix. cmp(i) compares the
  // length-|q| prefix of element i with q (-1, 0, +1).
  template <class Cmp>
  std::pair<int32_t, int32_t> range(const PatternContext& ctx, const PatStr& q, Cmp&& cmp,
                                    ProbeCounters* pc = nullptr) const {
    if (size_ == 0) return {0, 0};
    // First index in [a, b) whose comparison is not below `bound`.
    auto search = [&](int32_t a, int32_t b, int bound) {
      while (a < b) {
        int32_t mid = a + (b - a) / 2;
        if (cmp(mid) < bound)
          a = mid + 1;
        else
          b = mid;
      }
      return a;
    };
    if (!trie_) {
      const int32_t lo = search(0, size_, 0);
      return {lo, search(lo, size_, 1)};
    }
    const CompactTrie& t = *trie_;
    const NodeRef r = mlcp_ ? mlcp_->query(ctx, q, pc) : t.tree_lcp_rooted(PatQuery{&ctx, q}, pc);
    auto num = [&](int32_t term) { return t.label(t.label_begin(term)); };
    const int32_t nt = t.num_terminals();
    if (r.depth >= q.len) {
      const int32_t lo = t.node(r.node).lo, hi = t.node(r.node).hi;
      const int32_t xmin = num(lo), xmax = num(hi - 1);
      const int32_t y = lo > 0 ? num(lo - 1) + 1 : 0;
      const int32_t z = hi < nt ? num(hi) : size_;
      return {search(y, xmin, 0), search(xmax + 1, z, 1)};
    }
    // Largest sampled terminal below q.
    int32_t left = -1;
    const int32_t w = r.node;
    if (!t.is_explicit(r)) {
      left = t.edge_char(w, r.depth) < pat_at(ctx.pattern(), q, r.depth) ? t.node(w).hi - 1 : t.node(w).lo - 1;
    } else {
      const WChar c = pat_at(ctx.pattern(), q, r.depth);
      int32_t best = -1;
      for (int32_t i = 0; i < t.node(w).ccnt; ++i) {
        int32_t ch = t.child_at(w, i);
        if (t.node(ch).key < c) best = ch;
      }
      if (best >= 0)
        left = t.node(best).hi - 1;
      else
        left = t.node(w).term >= 0 ? t.node(w).term : t.node(w).lo - 1;
    }
    if (left < 0) return {0, 0};
    const int32_t a = num(left) + 1;
    const int32_t b = left + 1 < nt ? num(left + 1) : size_;
    const int32_t lo = search(a, b, 0);
    return {lo, search(lo, b, 1)};
  }

 private:
  int32_t size_ = 0;
  std::unique_ptr<CompactTrie> trie_;
  std::unique_ptr<ModifiedTrieLcp> mlcp_;
};

// Three-way comparison of the length-|q| prefix of s with q.
inline int prefix_compare(const PatternContext& ctx, const ModStr& s, const PatStr& q) {
  const int32_t l = kangaroo_lcp(ctx, s, 0, q, 0);
  if (l >= q.len) return 0;
  if (l >= s.len) return -1;
  return mod_at(ctx.text().text(), s, l) < pat_at(ctx.pattern(), q, l) ? -1 : 1;
}

}  // namespace kmix
