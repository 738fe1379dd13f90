// Licensed under the Apache License, Version 2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <vector>

#include "kmix/common.hpp"
#include "kmix/kangaroo.hpp"
#include "kmix/modstr.hpp"
#include "kmix/trie.hpp"

namespace kmix {

enum class ErrataKind : uint8_t { kMismatch = 0, kWildcard = 1 };

struct ErrataOptions {
  ErrataKind kind = ErrataKind::kMismatch;
  // Build level k as sorted arrays. When false only levels 0..k-1 exist and
  // the caller supplies the last substitution through walk hooks.
  bool build_top = true;
};

// A set of substitution trees merged into group tries arranged as a weighted
// search tree: every node covers a contiguous item range and has up to three
// children (left part, middle item, right part).
struct GroupSet {
  struct GNode {
    int32_t lo = 0, hi = 0;
    int32_t kid[3] = {-1, -1, -1};
    int32_t trie = -1;
    int64_t size = 0;
  };
  std::vector<int32_t> keys;  // edge character (node groups) or node depth (path groups)
  std::vector<int64_t> weights;
  std::vector<GNode> nodes;

  // Items in [lo, hi) except `skip`, as a minimal list of group tries.
  template <class F>
  void cover(int32_t lo, int32_t hi, int32_t skip, F&& f, int32_t g = 0) const {
    if (nodes.empty() || lo >= hi) return;
    const GNode& nd = nodes[g];
    if (nd.hi <= lo || nd.lo >= hi) return;
    if (nd.lo >= lo && nd.hi <= hi && (skip < nd.lo || skip >= nd.hi)) {
      f(nd.trie);
      return;
    }
    for (int32_t c : nd.kid)
      if (c >= 0) cover(lo, hi, skip, f, c);
  }

  // Sizes of the group tries containing item j, root to leaf.
  std::vector<int64_t> chain(int32_t j) const {
    std::vector<int64_t> out;
    int32_t g = 0;
    while (g >= 0) {
      out.push_back(nodes[g].size);
      int32_t next = -1;
      for (int32_t c : nodes[g].kid)
        if (c >= 0 && nodes[c].lo <= j && j < nodes[c].hi) next = c;
      g = next;
    }
    return out;
  }
};

// One compact trie of the structure. Levels below the top are compact tries
// with group links; the top level keeps its strings sorted.
struct ErrataTrie {
  enum Kind : uint8_t { kRoot = 0, kWildEdge = 1, kMainPath = 2 };
  int32_t level = 0;
  Kind kind = kRoot;
  bool has_main = false;
  ModStr main;  // string label of the main path
  bool sorted_only = false;
  CompactTrie trie;
  std::vector<ModStr> sorted;
  std::vector<int32_t> sorted_labels;
  std::vector<int32_t> node_group;  // per node: group set of off-path children, or -1
  std::vector<int32_t> path_group;  // per heavy path: group set of its nodes, or -1

  int32_t num_terminals() const { return sorted_only ? static_cast<int32_t>(sorted.size()) : trie.num_terminals(); }
  int32_t label_of(int32_t i, std::vector<int32_t>* out) const {
    if (sorted_only) {
      out->push_back(sorted_labels[i]);
      return 1;
    }
    for (int32_t q = trie.label_begin(i); q < trie.label_end(i); ++q) out->push_back(trie.label(q));
    return trie.label_end(i) - trie.label_begin(i);
  }
};

struct ErrataHit {
  int32_t trie = 0;
  int32_t lo = 0, hi = 0;  // terminal range
  NodeRef ref{};           // locus, for compact tries
};

struct ErrataResult {
  std::vector<ErrataHit> hits;
  std::vector<int32_t> labels;
};

struct ErrataStats {
  std::vector<int64_t> tries_per_level;
  std::vector<int64_t> terminals_per_level;
  int64_t group_sets = 0;
  size_t memory_bytes = 0;
};

class ErrataTree {
 public:
  ErrataTree() = default;
  ErrataTree(const ErrataTree&) = delete;
  ErrataTree& operator=(const ErrataTree&) = delete;
  ErrataTree(ErrataTree&&) = default;
  ErrataTree& operator=(ErrataTree&&) = default;

  static ErrataTree build(const TextLcpIndex& tx, const std::vector<int32_t>& positions, int k,
                          ErrataOptions opt = {}) {
    require(!positions.empty(), "errata: empty suffix set");
    require(k >= 0 && k <= kMaxSubs, "errata: k out of range");
    ErrataTree et;
    et.tx_ = &tx;
    et.k_ = k;
    et.opt_ = opt;
    const int32_t n = tx.size();
    std::vector<CompactTrie::Entry> e;
    e.reserve(positions.size());
    for (int32_t p : positions) {
      require(p >= 0 && p < n, "errata: suffix position out of range");
      e.push_back({ModStr::plain(p, n - p), p});
    }
    {
      std::vector<int32_t> s = positions;
      std::sort(s.begin(), s.end());
      require(std::adjacent_find(s.begin(), s.end()) == s.end(), "errata: duplicate suffix positions");
    }
    et.make_trie(0, ErrataTrie::kRoot, nullptr, std::move(e));
    for (size_t i = 0; i < et.tries_.size(); ++i) et.expand(static_cast<int32_t>(i));
    return et;
  }

  const TextLcpIndex& text() const { return *tx_; }
  int k() const { return k_; }
  const ErrataOptions& options() const { return opt_; }
  int32_t num_tries() const { return static_cast<int32_t>(tries_.size()); }
  const ErrataTrie& trie(int32_t id) const { return *tries_[id]; }
  int32_t num_group_sets() const { return static_cast<int32_t>(groups_.size()); }
  const GroupSet& group_set(int32_t g) const { return groups_[g]; }

  // Labels of all occurrences of P' with at most `budget` mismatches (or
  // wildcards, for the wildcard kind) among the input suffixes.
  ErrataResult query(const PatternContext& ctx, const PatStr& q, int budget) const;

  // Default recursion policy: walks group tries at the next level.
  struct Collector {
    const ErrataTree* et;
    const PatternContext* ctx;
    ErrataResult* out;
    void report(int32_t tid, const NodeRef& r) {
      const CompactTrie& t = et->trie(tid).trie;
      out->hits.push_back({tid, t.node(r.node).lo, t.node(r.node).hi, r});
    }
    void report_sorted(int32_t tid, int32_t lo, int32_t hi) {
      if (lo < hi) out->hits.push_back({tid, lo, hi, NodeRef{-1, 0}});
    }
    void path_groups(int32_t tid, int32_t path, int32_t dlo, int32_t dhi, const PatStr& q, int budget) {
      et->query_path_groups(*ctx, tid, path, dlo, dhi, q, budget, *this);
    }
    void node_groups(int32_t tid, int32_t node, WChar skip, const PatStr& q, int budget) {
      et->query_node_groups(*ctx, tid, node, skip, q, budget, *this);
    }
  };

  // Query of one trie from the root.
  template <class H>
  void query_trie(const PatternContext& ctx, int32_t tid, const PatStr& q, int budget, H& h) const {
    const ErrataTrie& et = *tries_[tid];
    if (et.sorted_only) {
      auto [lo, hi] = sorted_range(ctx, et, q);
      h.report_sorted(tid, lo, hi);
      return;
    }
    if (opt_.kind == ErrataKind::kWildcard)
      walk_wild(ctx, tid, q, budget, NodeRef{0, 0}, h);
    else
      walk(ctx, tid, q, budget, NodeRef{0, 0}, 0, h);
  }

  // Group tries of path `path` over nodes with depth in [dlo, dhi); q is
  // unshifted and the substituted position is already paid for in budget.
  template <class H>
  void query_path_groups(const PatternContext& ctx, int32_t tid, int32_t path, int32_t dlo, int32_t dhi,
                         const PatStr& q, int budget, H& h) const {
    const ErrataTrie& et = *tries_[tid];
    if (et.path_group.empty() || et.path_group[path] < 0) return;
    const GroupSet& gs = groups_[et.path_group[path]];
    int32_t lo = static_cast<int32_t>(std::lower_bound(gs.keys.begin(), gs.keys.end(), dlo) - gs.keys.begin());
    int32_t hi = static_cast<int32_t>(std::lower_bound(gs.keys.begin(), gs.keys.end(), dhi) - gs.keys.begin());
    const int32_t d0 = et.trie.node(et.trie.path_head(path)).depth;
    const PatStr qs = pat_shift(q, d0);
    gs.cover(lo, hi, -1, [&](int32_t g) { query_trie(ctx, g, qs, budget, h); });
  }

  // Group tries of off-path children of `node` except the child keyed `skip`.
  template <class H>
  void query_node_groups(const PatternContext& ctx, int32_t tid, int32_t node, WChar skip, const PatStr& q,
                         int budget, H& h) const {
    const ErrataTrie& et = *tries_[tid];
    if (et.node_group.empty() || et.node_group[node] < 0) return;
    const GroupSet& gs = groups_[et.node_group[node]];
    auto it = std::lower_bound(gs.keys.begin(), gs.keys.end(), skip);
    int32_t sk = it != gs.keys.end() && *it == skip ? static_cast<int32_t>(it - gs.keys.begin()) : -1;
    const int32_t d = et.trie.node(node).depth;
    PatStr qs = pat_set(ctx.pattern(), pat_shift(q, d), 0, kPsi);
    gs.cover(0, static_cast<int32_t>(gs.keys.size()), sk, [&](int32_t g) { query_trie(ctx, g, qs, budget, h); });
  }

  // Walk of a compact trie from locus r (q matches the path to r). Mismatches
  // at node depths in [entry, ...) on the current heavy path are delegated to
  // path groups.
  template <class H>
  void walk(const PatternContext& ctx, int32_t tid, const PatStr& q, int budget, NodeRef r, int32_t entry,
            H& h) const {
    const CompactTrie& t = tries_[tid]->trie;
    const BytesView p = ctx.pattern();
    const PatQuery pq{&ctx, q};
    for (;;) {
      const int32_t path = t.node(r.node).path;
      auto [pb, pe] = t.path_nodes(path);
      const int32_t bottom = *(pe - 1);
      const ModStr& L = t.str(t.node(bottom).term);
      const int32_t e = r.depth + pq.lcp(L, r.depth);
      // First path node at depth >= e.
      const int32_t* it = std::lower_bound(pb, pe, e, [&](int32_t v, int32_t d) { return t.node(v).depth < d; });
      const int32_t w = *it;
      if (e >= q.len) {
        h.report(tid, NodeRef{w, e});
        if (budget > 0) h.path_groups(tid, path, entry, e, q, budget - 1);
        return;
      }
      if (budget > 0) h.path_groups(tid, path, entry, e, q, budget - 1);
      if (e < t.node(w).depth) {
        if (budget > 0) walk(ctx, tid, pat_set(p, q, e, t.edge_char(w, e)), budget - 1, NodeRef{w, e}, e + 1, h);
        return;
      }
      // Leaving the heavy path at explicit node w.
      const WChar c = pat_at(p, q, e);
      const int32_t hv = t.node(w).heavy;
      if (budget > 0) {
        h.node_groups(tid, w, c, q, budget - 1);
        if (hv >= 0) walk(ctx, tid, pat_set(p, q, e, t.node(hv).key), budget - 1, NodeRef{hv, e}, e + 1, h);
      }
      const int32_t ch = t.find_child(w, c);
      if (ch < 0) return;
      r = NodeRef{ch, e};
      entry = e + 1;
    }
  }

  // Wildcard walk: psi positions of q are the wildcards; budget counts them.
  template <class H>
  void walk_wild(const PatternContext& ctx, int32_t tid, PatStr q, int budget, NodeRef r, H& h) const {
    const CompactTrie& t = tries_[tid]->trie;
    const BytesView p = ctx.pattern();
    for (;;) {
      r = t.descend(PatQuery{&ctx, q}, r);
      if (r.depth >= q.len) {
        h.report(tid, r);
        return;
      }
      const int32_t d = r.depth;
      if (pat_at(p, q, d) != kPsi || budget == 0) return;
      --budget;
      if (!t.is_explicit(r)) {
        q = pat_set(p, q, d, t.edge_char(r.node, d));
        continue;
      }
      const int32_t hv = t.node(r.node).heavy;
      h.node_groups(tid, r.node, kPsi, q, budget);
      if (hv < 0) return;
      q = pat_set(p, q, d, t.node(hv).key);
      r = NodeRef{hv, d};
    }
  }

  // Terminals whose strings have q as a prefix in a sorted top-level trie.
  std::pair<int32_t, int32_t> sorted_range(const PatternContext& ctx, const ErrataTrie& et, const PatStr& q) const {
    auto cmp = [&](const ModStr& s) {
      // Compares the length-|q| prefix of s with q.
      int32_t l = kangaroo_lcp(ctx, s, 0, q, 0);
      if (l >= q.len) return 0;
      if (l >= s.len) return -1;
      WChar a = mod_at(tx_->text(), s, l), b = pat_at(ctx.pattern(), q, l);
      return a < b ? -1 : 1;
    };
    auto lo = std::partition_point(et.sorted.begin(), et.sorted.end(), [&](const ModStr& s) { return cmp(s) < 0; });
    auto hi = std::partition_point(lo, et.sorted.end(), [&](const ModStr& s) { return cmp(s) == 0; });
    return {static_cast<int32_t>(lo - et.sorted.begin()), static_cast<int32_t>(hi - et.sorted.begin())};
  }

  void expand_hits(const ErrataResult& r, std::vector<int32_t>* labels) const {
    for (const auto& hit : r.hits)
      for (int32_t i = hit.lo; i < hit.hi; ++i) tries_[hit.trie]->label_of(i, labels);
  }

  // Total occurrences of every label over all tries; throws if a label
  // repeats inside one trie.
  std::map<int32_t, int64_t> label_multiplicity_stats() const {
    std::map<int32_t, int64_t> cnt;
    std::vector<int32_t> buf;
    for (const auto& tp : tries_) {
      buf.clear();
      for (int32_t i = 0; i < tp->num_terminals(); ++i) tp->label_of(i, &buf);
      std::sort(buf.begin(), buf.end());
      require(std::adjacent_find(buf.begin(), buf.end()) == buf.end(), "errata: label repeated within a trie");
      for (int32_t l : buf) ++cnt[l];
    }
    return cnt;
  }

  ErrataStats stats() const {
    ErrataStats s;
    s.tries_per_level.assign(k_ + 1, 0);
    s.terminals_per_level.assign(k_ + 1, 0);
    for (const auto& tp : tries_) {
      ++s.tries_per_level[tp->level];
      s.terminals_per_level[tp->level] += tp->num_terminals();
      s.memory_bytes += tp->trie.memory_bytes() + tp->sorted.size() * (sizeof(ModStr) + 4) +
                        (tp->node_group.size() + tp->path_group.size()) * 4;
    }
    s.group_sets = static_cast<int64_t>(groups_.size());
    for (const auto& g : groups_) s.memory_bytes += g.nodes.size() * sizeof(GroupSet::GNode) + g.keys.size() * 12;
    return s;
  }

 private:
  int32_t make_trie(int32_t level, ErrataTrie::Kind kind, const ModStr* main, std::vector<CompactTrie::Entry> e) {
    auto et = std::make_unique<ErrataTrie>();
    et->level = level;
    et->kind = kind;
    if (main) {
      et->has_main = true;
      et->main = *main;
    }
    if (level == k_) {
      et->sorted_only = true;
      std::sort(e.begin(), e.end(), [&](const CompactTrie::Entry& a, const CompactTrie::Entry& b) {
        return compare_tt(*tx_, a.s, 0, b.s, 0) < 0;
      });
      for (auto& x : e) {
        et->sorted.push_back(x.s);
        et->sorted_labels.push_back(x.label);
      }
    } else {
      et->trie = CompactTrie::build(*tx_, std::move(e));
      if (main) force_main(*et);
    }
    tries_.push_back(std::move(et));
    return static_cast<int32_t>(tries_.size()) - 1;
  }

  // Makes the main path heavy wherever the trie follows it.
  void force_main(ErrataTrie& et) {
    CompactTrie& t = et.trie;
    std::vector<int32_t> forced(t.num_nodes(), -1);
    const TextQuery mq{tx_, et.main};
    int32_t v = 0;
    while (t.node(v).depth < mq.len()) {
      int32_t c = t.find_child(v, mq.at(t.node(v).depth));
      if (c < 0) break;
      forced[v] = c;
      const int32_t d = t.node(v).depth;
      const int32_t cap = std::min(t.node(c).depth, mq.len()) - d;
      if (mq.lcp(t.str(t.node(c).lo), d) < cap || t.node(c).depth > mq.len()) break;
      v = c;
    }
    t.compute_heavy(&forced);
  }

  // Builds the next level from trie `id`.
  void expand(int32_t id) {
    ErrataTrie& et = *tries_[id];
    if (et.sorted_only || et.level >= k_) return;
    if (et.level + 1 == k_ && !opt_.build_top) return;
    const CompactTrie& t = et.trie;
    const BytesView text = tx_->text();
    et.node_group.assign(t.num_nodes(), -1);
    const bool wild = opt_.kind == ErrataKind::kWildcard;
    if (!wild) et.path_group.assign(t.num_paths(), -1);
    for (int32_t path = 0; path < t.num_paths(); ++path) {
      auto [pb, pe] = t.path_nodes(path);
      const int32_t head = *pb;
      const int32_t d0 = t.node(head).depth;
      std::vector<std::vector<CompactTrie::Entry>> b_items;
      std::vector<int32_t> b_keys;
      for (const int32_t* it = pb; it != pe; ++it) {
        const int32_t v = *it;
        const auto& nd = t.node(v);
        if (nd.ccnt < 2) continue;
        const int32_t dv = nd.depth;
        std::vector<std::vector<CompactTrie::Entry>> a_items;
        std::vector<int32_t> a_keys;
        std::vector<CompactTrie::Entry> b_item;
        const WChar hb = t.node(nd.heavy).key;
        for (int32_t ci = 0; ci < nd.ccnt; ++ci) {
          const int32_t u = t.child_at(v, ci);
          if (u == nd.heavy) continue;
          std::vector<CompactTrie::Entry> a_item;
          for (int32_t i = t.node(u).lo; i < t.node(u).hi; ++i) {
            const ModStr& s = t.str(i);
            for (int32_t q = t.label_begin(i); q < t.label_end(i); ++q) {
              const int32_t lab = t.label(q);
              a_item.push_back({mod_set(text, mod_shift(s, dv), 0, kPsi), lab});
              if (!wild) b_item.push_back({mod_set(text, mod_shift(s, d0), dv - d0, hb), lab});
            }
          }
          if (wild && !a_items.empty()) {
            // A wildcard matches every off-path child: one merged group.
            for (auto& x : a_item) a_items[0].push_back(x);
          } else {
            a_items.push_back(std::move(a_item));
            a_keys.push_back(t.node(u).key);
          }
        }
        et.node_group[v] = make_groups(et.level + 1, ErrataTrie::kWildEdge, nullptr, std::move(a_items),
                                       std::move(a_keys), !wild);
        if (!wild) {
          b_items.push_back(std::move(b_item));
          b_keys.push_back(dv);
        }
      }
      if (!wild && !b_items.empty()) {
        const ModStr main = mod_shift(t.str(t.node(*(pe - 1)).term), d0);
        et.path_group[path] =
            make_groups(et.level + 1, ErrataTrie::kMainPath, &main, std::move(b_items), std::move(b_keys), true);
      }
    }
  }

  int32_t make_groups(int32_t level, ErrataTrie::Kind kind, const ModStr* main,
                      std::vector<std::vector<CompactTrie::Entry>> items, std::vector<int32_t> keys, bool split) {
    GroupSet gs;
    gs.keys = std::move(keys);
    for (auto& it : items) gs.weights.push_back(static_cast<int64_t>(it.size()));
    const int32_t r = static_cast<int32_t>(items.size());
    std::vector<int64_t> pre(r + 1, 0);
    for (int32_t i = 0; i < r; ++i) pre[i + 1] = pre[i] + gs.weights[i];
    // Weighted ternary split: both side parts weigh at most half the range.
    auto rec = [&](auto& self, int32_t lo, int32_t hi) -> int32_t {
      const int32_t id = static_cast<int32_t>(gs.nodes.size());
      gs.nodes.push_back({});
      gs.nodes[id].lo = lo;
      gs.nodes[id].hi = hi;
      gs.nodes[id].size = pre[hi] - pre[lo];
      std::vector<CompactTrie::Entry> e;
      for (int32_t i = lo; i < hi; ++i) e.insert(e.end(), items[i].begin(), items[i].end());
      const int32_t tid = make_trie(level, kind, main, std::move(e));
      gs.nodes[id].trie = tid;
      if (!split || hi - lo == 1) return id;
      const int64_t half = (pre[hi] - pre[lo]) / 2;
      int32_t m = lo;
      while (m + 1 < hi && pre[m + 1] - pre[lo] <= half) ++m;
      int32_t k0 = lo < m ? self(self, lo, m) : -1;
      int32_t k1 = self(self, m, m + 1);
      int32_t k2 = m + 1 < hi ? self(self, m + 1, hi) : -1;
      gs.nodes[id].kid[0] = k0;
      gs.nodes[id].kid[1] = k1;
      gs.nodes[id].kid[2] = k2;
      return id;
    };
    rec(rec, 0, r);
    groups_.push_back(std::move(gs));
    return static_cast<int32_t>(groups_.size()) - 1;
  }

  const TextLcpIndex* tx_ = nullptr;
  int k_ = 0;
  ErrataOptions opt_;
  std::vector<std::unique_ptr<ErrataTrie>> tries_;
  std::vector<GroupSet> groups_;
};

inline ErrataResult ErrataTree::query(const PatternContext& ctx, const PatStr& q, int budget) const {
  require(&ctx.text() == tx_, "errata: pattern context built over a different text");
  require(budget >= 0 && budget <= k_, "errata: budget exceeds k");
  ErrataResult out;
  Collector c{this, &ctx, &out};
  query_trie(ctx, 0, q, budget, c);
  expand_hits(out, &out.labels);
  std::sort(out.labels.begin(), out.labels.end());
  return out;
}

inline ErrataTree build_errata(const TextLcpIndex& tx, const std::vector<int32_t>& positions, int k,
                               ErrataOptions opt = {}) {
  return ErrataTree::build(tx, positions, k, opt);
}

}  // namespace kmix
