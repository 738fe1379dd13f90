// Licensed under the Apache License, Version 2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numeric>
#include <vector>

#include "kmix/common.hpp"
#include "kmix/errata.hpp"
#include "kmix/kangaroo.hpp"
#include "kmix/sampled.hpp"
#include "kmix/succinct.hpp"
#include "kmix/trie.hpp"

namespace kmix {

// Sorted list of the strings of several subtrees of one trie, stored without
// the strings: element i lives in subtree tree_ptr[st_rank[i]-1] as the
// terminal whose rank among that subtree's terminals is the restricted rank
// of i+1 in mrank[st_rank[i]-1].
struct SubtreeListStore {
  int32_t anchor = 0;  // node v (node store) or heavy path id (path store)
  int32_t depth = 0;   // depth(v), or depth of the path head
  std::vector<uint32_t> st_rank;
  std::vector<int32_t> tree_ptr;
  std::vector<IncreasingSeq> mrank;
  BitVecRS diff;  // diff[i] = 1 iff elements i and i+1 (1-based) come from different edges
  SampledRange sampled;

  int32_t size() const { return static_cast<int32_t>(st_rank.size()); }
  int32_t subtree(int32_t i) const { return tree_ptr[st_rank[i] - 1]; }
  int32_t terminal(const CompactTrie& t, int32_t i) const {
    const uint32_t r = st_rank[i];
    const auto jj = mrank[r - 1].rank(i + 1);
    return t.node(tree_ptr[r - 1]).lo + static_cast<int32_t>(*jj) - 1;
  }
  uint64_t st_rank_bits() const {
    uint64_t b = 0;
    for (uint32_t r : st_rank) b += r > 1 ? static_cast<uint64_t>(std::ceil(std::log2(r))) : 0;
    return b;
  }
};

// Trimmed suffix below v: the string after the branching character.
inline ModStr node_store_string(const CompactTrie& t, const SubtreeListStore& s, int32_t term) {
  return mod_shift(t.str(term), s.depth + 1);
}

// Heavy-path store string: the branching character is overwritten with the
// heavy character, and the common path prefix above the head is dropped.
inline ModStr path_store_string(const CompactTrie& t, const SubtreeListStore& s, int32_t u, int32_t term) {
  const int32_t v = t.node(u).parent;
  const int32_t dv = t.node(v).depth;
  return mod_shift(mod_set(t.text().text(), t.str(term), dv, t.node(t.node(v).heavy).key), s.depth);
}

enum class CompactKind : uint8_t { kMismatch = 0, kWildcard = 1 };

struct CompactStats {
  std::vector<int64_t> terminals_per_level;
  int64_t explicit_terminals = 0;  // over levels 0..k-1
  int64_t node_stores = 0, path_stores = 0;
  int64_t node_elements = 0, path_elements = 0;
  uint64_t st_rank_bits = 0;       // node stores
  uint64_t path_st_rank_bits = 0;  // path stores
  uint64_t mrank_bits = 0;
  size_t memory_bytes = 0;
};

// k-mismatch (or k-wildcard) index: an explicit errata tree of depth k-1 whose
// last substitution is answered from the list stores.
class CompactIndex {
 public:
  static std::unique_ptr<CompactIndex> build(Bytes text, int k, CompactKind kind = CompactKind::kMismatch,
                                             char wildcard = '?') {
    require(k >= 1 && k <= kMaxSubs, "compact: k out of range");
    require(!text.empty(), "compact: empty text");
    if (kind == CompactKind::kWildcard)
      require(text.find(wildcard) == Bytes::npos, "wildcard index: text contains the wildcard byte");
    std::unique_ptr<CompactIndex> ix(new CompactIndex());
    ix->k_ = k;
    ix->kind_ = kind;
    ix->wild_ = wildcard;
    ix->tx_ = std::make_unique<TextLcpIndex>(std::move(text));
    ix->st_ = std::make_unique<SuffixTree>(*ix->tx_);
    const int32_t n = ix->tx_->size();
    std::vector<int32_t> pos(n);
    std::iota(pos.begin(), pos.end(), 0);
    ErrataOptions opt;
    opt.kind = kind == CompactKind::kWildcard ? ErrataKind::kWildcard : ErrataKind::kMismatch;
    opt.build_top = false;
    ix->et_ = std::make_unique<ErrataTree>(ErrataTree::build(*ix->tx_, pos, k, opt));
    ix->step_ = std::max(1, floor_log2(static_cast<uint64_t>(n)));
    ix->build_stores();
    return ix;
  }

  int k() const { return k_; }
  CompactKind kind() const { return kind_; }
  char wildcard() const { return wild_; }
  const TextLcpIndex& text_index() const { return *tx_; }
  const SuffixTree& suffix_tree() const { return *st_; }
  const ErrataTree& errata() const { return *et_; }
  int32_t num_node_stores() const { return static_cast<int32_t>(nstores_.size()); }
  int32_t num_path_stores() const { return static_cast<int32_t>(pstores_.size()); }
  const SubtreeListStore& node_store(int32_t i) const { return nstores_[i]; }
  const SubtreeListStore& path_store(int32_t i) const { return pstores_[i]; }
  int32_t node_store_trie(int32_t i) const { return nstore_trie_[i]; }
  int32_t path_store_trie(int32_t i) const { return pstore_trie_[i]; }

  // Sorted store strings, for tests.
  ModStr node_element(int32_t s, int32_t i) const {
    const CompactTrie& t = et_->trie(nstore_trie_[s]).trie;
    return node_store_string(t, nstores_[s], nstores_[s].terminal(t, i));
  }
  ModStr path_element(int32_t s, int32_t i) const {
    const CompactTrie& t = et_->trie(pstore_trie_[s]).trie;
    const SubtreeListStore& st = pstores_[s];
    return path_store_string(t, st, st.subtree(i), st.terminal(t, i));
  }
  // Text position where the trimmed string of node-store element i begins.
  int32_t node_label_prime(int32_t s, int32_t i) const { return tx_->size() - 1 - node_element(s, i).len; }
  // Start of the full suffix behind path-store element i.
  int32_t path_label(int32_t s, int32_t i) const {
    return tx_->size() - (path_element(s, i).len + pstores_[s].depth);
  }

  struct QueryCounters {
    uint64_t reported = 0;
    uint64_t skipped_runs = 0;
    uint64_t filtered = 0;
  };

  // Positions i with Hamming(T[i..i+m), P) <= k.
  OccurrenceSet query(BytesView p, QueryCounters* qc = nullptr) const {
    require(kind_ == CompactKind::kMismatch, "compact: not a mismatch index");
    return run(p, PatStr::suffix(0, static_cast<int32_t>(p.size())), k_, qc);
  }

  // Positions where P matches with its wildcard bytes matching anything.
  OccurrenceSet query_wildcard(BytesView p, QueryCounters* qc = nullptr) const {
    require(kind_ == CompactKind::kWildcard, "compact: not a wildcard index");
    PatStr q = PatStr::suffix(0, static_cast<int32_t>(p.size()));
    int w = 0;
    for (size_t i = 0; i < p.size(); ++i)
      if (p[i] == wild_) {
        require(w < k_, "wildcard query: more than k wildcards");
        require(w < kMaxPatSubs, "wildcard query: too many wildcards");
        q = pat_set(p, q, static_cast<int32_t>(i), kPsi);
        ++w;
      }
    return run(p, q, w, qc);
  }

  CompactStats stats() const {
    CompactStats s;
    const ErrataStats es = et_->stats();
    s.terminals_per_level = es.terminals_per_level;
    for (int l = 0; l < k_; ++l) s.explicit_terminals += es.terminals_per_level[l];
    s.memory_bytes = es.memory_bytes + tx_->size() * 8;
    s.node_stores = static_cast<int64_t>(nstores_.size());
    s.path_stores = static_cast<int64_t>(pstores_.size());
    auto acc = [&](const SubtreeListStore& st, uint64_t* bits, int64_t* elems) {
      *bits += st.st_rank_bits();
      *elems += st.size();
      for (const auto& m : st.mrank) s.mrank_bits += m.encoded_bits();
      s.memory_bytes += st.st_rank.size() * 4 + st.tree_ptr.size() * 4 + st.diff.memory_bytes() +
                        st.sampled.memory_bytes();
      for (const auto& m : st.mrank) s.memory_bytes += m.memory_bytes();
    };
    for (const auto& st : nstores_) acc(st, &s.st_rank_bits, &s.node_elements);
    for (const auto& st : pstores_) acc(st, &s.path_st_rank_bits, &s.path_elements);
    return s;
  }

 private:
  CompactIndex() = default;

  struct Hooks {
    const CompactIndex* ix;
    const PatternContext* ctx;
    std::vector<int64_t>* out;
    QueryCounters* qc;
    const ErrataTree& et() const { return *ix->et_; }
    void emit(const ErrataTrie& tr, int32_t term) {
      for (int32_t q = tr.trie.label_begin(term); q < tr.trie.label_end(term); ++q) out->push_back(tr.trie.label(q));
      if (qc) ++qc->reported;
    }
    void report(int32_t tid, const NodeRef& r) {
      const ErrataTrie& tr = et().trie(tid);
      for (int32_t i = tr.trie.node(r.node).lo; i < tr.trie.node(r.node).hi; ++i) emit(tr, i);
    }
    void report_sorted(int32_t, int32_t, int32_t) { require(false, "compact: unexpected top level"); }
    void path_groups(int32_t tid, int32_t path, int32_t dlo, int32_t dhi, const PatStr& q, int budget) {
      const ErrataTrie& tr = et().trie(tid);
      if (tr.level + 1 < ix->k_) {
        et().query_path_groups(*ctx, tid, path, dlo, dhi, q, budget, *this);
        return;
      }
      require(budget == 0, "compact: budget left at the last level");
      const int32_t sid = ix->path_of_[tid].empty() ? -1 : ix->path_of_[tid][path];
      if (sid < 0) return;
      const SubtreeListStore& st = ix->pstores_[sid];
      const CompactTrie& t = tr.trie;
      const PatStr qs = pat_shift(q, st.depth);
      auto [lo, hi] = st.sampled.range(*ctx, qs, [&](int32_t i) {
        return prefix_compare(*ctx, path_store_string(t, st, st.subtree(i), st.terminal(t, i)), qs);
      });
      for (int32_t i = lo; i < hi; ++i) {
        const int32_t dv = t.node(t.node(st.subtree(i)).parent).depth;
        // Branching at or below the end of the match means an exact match.
        if (dv < dlo || dv >= dhi) {
          if (qc) ++qc->filtered;
          continue;
        }
        emit(tr, st.terminal(t, i));
      }
    }
    void node_groups(int32_t tid, int32_t node, WChar skip, const PatStr& q, int budget) {
      const ErrataTrie& tr = et().trie(tid);
      if (tr.level + 1 < ix->k_) {
        et().query_node_groups(*ctx, tid, node, skip, q, budget, *this);
        return;
      }
      require(budget == 0, "compact: budget left at the last level");
      const int32_t sid = ix->node_of_[tid].empty() ? -1 : ix->node_of_[tid][node];
      if (sid < 0) return;
      const SubtreeListStore& st = ix->nstores_[sid];
      const CompactTrie& t = tr.trie;
      const PatStr qs = pat_shift(q, st.depth + 1);
      auto [lo, hi] = st.sampled.range(*ctx, qs, [&](int32_t i) {
        return prefix_compare(*ctx, node_store_string(t, st, st.terminal(t, i)), qs);
      });
      auto first_char = [&](int32_t i) { return static_cast<WChar>(t.node(st.subtree(i)).key); };
      for (int32_t i = lo; i < hi;) {
        if (first_char(i) == skip) {
          // Jump past the run of elements sharing this first character.
          if (qc) ++qc->skipped_runs;
          const int64_t ones = st.diff.rank1(i);
          if (ones >= st.diff.ones()) break;
          i = static_cast<int32_t>(st.diff.select1(ones + 1));
          continue;
        }
        emit(tr, st.terminal(t, i));
        ++i;
      }
    }
  };

  OccurrenceSet run(BytesView p, const PatStr& q, int budget, QueryCounters* qc) const {
    OccurrenceSet out;
    if (p.size() > static_cast<size_t>(tx_->size())) return out;
    PatternContext ctx(*st_, p);
    std::vector<int64_t> labels;
    Hooks h{this, &ctx, &labels, qc};
    et_->query_trie(ctx, 0, q, budget, h);
    for (int64_t l : labels)
      if (l + static_cast<int64_t>(p.size()) <= tx_->size()) out.push_back(l);
    std::sort(out.begin(), out.end());
    return out;
  }

  void build_stores() {
    node_of_.assign(et_->num_tries(), {});
    path_of_.assign(et_->num_tries(), {});
    for (int32_t tid = 0; tid < et_->num_tries(); ++tid) {
      const ErrataTrie& tr = et_->trie(tid);
      if (tr.level != k_ - 1) continue;
      const CompactTrie& t = tr.trie;
      node_of_[tid].assign(t.num_nodes(), -1);
      for (int32_t v = 0; v < t.num_nodes(); ++v) {
        if (t.node(v).ccnt < 2) continue;
        std::vector<int32_t> subs;
        for (int32_t i = 0; i < t.node(v).ccnt; ++i)
          if (t.child_at(v, i) != t.node(v).heavy) subs.push_back(t.child_at(v, i));
        SubtreeListStore st;
        st.anchor = v;
        st.depth = t.node(v).depth;
        fill_store(t, st, subs, [&](int32_t, int32_t term) { return node_store_string(t, st, term); }, false);
        node_of_[tid][v] = static_cast<int32_t>(nstores_.size());
        nstores_.push_back(std::move(st));
        nstore_trie_.push_back(tid);
      }
      if (kind_ == CompactKind::kWildcard) continue;
      path_of_[tid].assign(t.num_paths(), -1);
      for (int32_t path = 0; path < t.num_paths(); ++path) {
        auto [pb, pe] = t.path_nodes(path);
        std::vector<int32_t> subs;
        for (const int32_t* it = pb; it != pe; ++it)
          for (int32_t i = 0; i < t.node(*it).ccnt; ++i)
            if (t.child_at(*it, i) != t.node(*it).heavy) subs.push_back(t.child_at(*it, i));
        if (subs.empty()) continue;
        SubtreeListStore st;
        st.anchor = path;
        st.depth = t.node(*pb).depth;
        fill_store(t, st, subs, [&](int32_t u, int32_t term) { return path_store_string(t, st, u, term); }, true);
        path_of_[tid][path] = static_cast<int32_t>(pstores_.size());
        pstores_.push_back(std::move(st));
        pstore_trie_.push_back(tid);
      }
    }
  }

  template <class StrOf>
  void fill_store(const CompactTrie& t, SubtreeListStore& st, std::vector<int32_t> subs, StrOf&& str_of,
                  bool modified) {
    // Larger subtrees get smaller ranks; ties by string depth, then edge byte.
    std::stable_sort(subs.begin(), subs.end(), [&](int32_t a, int32_t b) {
      if (t.subtree_size(a) != t.subtree_size(b)) return t.subtree_size(a) > t.subtree_size(b);
      const int32_t da = t.node(t.node(a).parent).depth, db = t.node(t.node(b).parent).depth;
      if (da != db) return da < db;
      return t.node(a).key < t.node(b).key;
    });
    struct Elem {
      ModStr s;
      uint32_t rank;
      int32_t term;
    };
    std::vector<Elem> el;
    for (size_t r = 0; r < subs.size(); ++r) {
      const int32_t u = subs[r];
      for (int32_t j = t.node(u).lo; j < t.node(u).hi; ++j) el.push_back({str_of(u, j), static_cast<uint32_t>(r + 1), j});
    }
    const TextLcpIndex& tx = t.text();
    std::sort(el.begin(), el.end(), [&](const Elem& a, const Elem& b) { return compare_tt(tx, a.s, 0, b.s, 0) < 0; });
    st.tree_ptr = subs;
    std::vector<std::vector<int32_t>> mr(subs.size());
    st.st_rank.resize(el.size());
    std::vector<bool> diff(el.empty() ? 0 : el.size() - 1);
    for (size_t i = 0; i < el.size(); ++i) {
      st.st_rank[i] = el[i].rank;
      auto& seq = mr[el[i].rank - 1];
      require(seq.size() == static_cast<size_t>(el[i].term - t.node(subs[el[i].rank - 1]).lo),
              "compact: subtree order not preserved in the sorted list");
      seq.push_back(static_cast<int32_t>(i + 1));
      if (i + 1 < el.size()) diff[i] = t.node(subs[el[i].rank - 1]).key != t.node(subs[el[i + 1].rank - 1]).key;
    }
    for (auto& seq : mr) st.mrank.emplace_back(std::move(seq), static_cast<int64_t>(el.size()));
    st.diff = BitVecRS(diff);
    st.sampled.build(tx, static_cast<int32_t>(el.size()), step_, [&](int32_t i) { return el[i].s; }, modified);
  }

  int k_ = 1;
  CompactKind kind_ = CompactKind::kMismatch;
  char wild_ = '?';
  int32_t step_ = 1;
  std::unique_ptr<TextLcpIndex> tx_;
  std::unique_ptr<SuffixTree> st_;
  std::unique_ptr<ErrataTree> et_;
  std::vector<SubtreeListStore> nstores_, pstores_;
  std::vector<int32_t> nstore_trie_, pstore_trie_;
  std::vector<std::vector<int32_t>> node_of_, path_of_;
};

}  // namespace kmix
