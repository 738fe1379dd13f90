// Licensed under the Apache License, Version 2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

#include "kmix/common.hpp"
#include "kmix/modstr.hpp"
#include "kmix/text_lcp.hpp"

namespace kmix {

// Locus in a compact trie: the nearest explicit node at or below it and its
// string depth. The locus is explicit iff depth equals the node's depth.
struct NodeRef {
  int32_t node = 0;
  int32_t depth = 0;
  friend bool operator==(const NodeRef&, const NodeRef&) = default;
};

struct ProbeCounters {
  uint64_t descents = 0;
  uint64_t unrooted = 0;
  uint64_t comparisons = 0;
};

class CompactTrie {
 public:
  struct Node {
    int32_t parent = -1;
    int32_t depth = 0;
    int32_t lo = 0, hi = 0;  // terminal (string index) interval of the subtree
    int32_t term = -1;       // string index if terminal
    int32_t heavy = -1;
    int32_t cbeg = 0, ccnt = 0;
    int32_t table = -1;  // offset into dispatch tables when fan-out >= kFanout
    int32_t path = -1;   // heavy path id
    uint16_t key = 0;    // first character of the incoming edge
  };
  static constexpr int32_t kFanout = 8;

  struct Entry {
    ModStr s;
    int32_t label;
  };

  CompactTrie() = default;

  // Sorts, merges duplicates and builds the trie.
  static CompactTrie build(const TextLcpIndex& tx, std::vector<Entry> entries) {
    std::stable_sort(entries.begin(), entries.end(), [&](const Entry& a, const Entry& b) {
      int c = compare_tt(tx, a.s, 0, b.s, 0);
      return c != 0 ? c < 0 : a.label < b.label;
    });
    std::vector<ModStr> strs;
    std::vector<int32_t> label_off{0}, labels, lcps;
    for (size_t i = 0; i < entries.size(); ++i) {
      if (i > 0) {
        int32_t l = lcp_tt(tx, entries[i - 1].s, 0, entries[i].s, 0);
        if (l == entries[i].s.len && l == entries[i - 1].s.len) {
          labels.push_back(entries[i].label);
          label_off.back() = static_cast<int32_t>(labels.size());
          continue;
        }
        lcps.push_back(l);
      } else {
        lcps.push_back(0);
      }
      strs.push_back(entries[i].s);
      labels.push_back(entries[i].label);
      label_off.push_back(static_cast<int32_t>(labels.size()));
    }
    return from_sorted(tx, std::move(strs), std::move(label_off), std::move(labels), lcps);
  }

  // Strings must be sorted and distinct; lcps[i] = LCP(strs[i-1], strs[i]).
  static CompactTrie from_sorted(const TextLcpIndex& tx, std::vector<ModStr> strs, std::vector<int32_t> label_off,
                                 std::vector<int32_t> labels, const std::vector<int32_t>& lcps) {
    CompactTrie t;
    t.tx_ = &tx;
    t.strs_ = std::move(strs);
    t.label_off_ = std::move(label_off);
    t.labels_ = std::move(labels);
    t.construct(lcps);
    return t;
  }

  const TextLcpIndex& text() const { return *tx_; }
  int32_t num_nodes() const { return static_cast<int32_t>(nodes_.size()); }
  int32_t num_terminals() const { return static_cast<int32_t>(strs_.size()); }
  int32_t num_labels() const { return static_cast<int32_t>(labels_.size()); }
  const Node& node(int32_t v) const { return nodes_[v]; }
  const ModStr& str(int32_t i) const { return strs_[i]; }
  const std::vector<ModStr>& strings() const { return strs_; }
  int32_t term_node(int32_t i) const { return term_node_[i]; }
  int32_t label_begin(int32_t i) const { return label_off_[i]; }
  int32_t label_end(int32_t i) const { return label_off_[i + 1]; }
  int32_t label(int32_t pos) const { return labels_[pos]; }
  const std::vector<int32_t>& labels() const { return labels_; }
  const std::vector<int32_t>& label_offsets() const { return label_off_; }
  int32_t subtree_size(int32_t v) const { return nodes_[v].hi - nodes_[v].lo; }
  int32_t child_at(int32_t v, int32_t i) const { return children_[nodes_[v].cbeg + i]; }
  WChar edge_char(int32_t v, int32_t depth) const { return mod_at(tx_->text(), strs_[nodes_[v].lo], depth); }

  int32_t find_child(int32_t v, WChar c) const {
    const Node& nd = nodes_[v];
    if (nd.table >= 0) return tables_[nd.table + c];
    const int32_t* b = children_.data() + nd.cbeg;
    const int32_t* e = b + nd.ccnt;
    const int32_t* it = std::lower_bound(b, e, c, [&](int32_t x, WChar key) { return nodes_[x].key < key; });
    return it != e && nodes_[*it].key == c ? *it : -1;
  }

  bool is_explicit(const NodeRef& r) const { return nodes_[r.node].depth == r.depth; }
  // Nearest explicit ancestor of a locus and the characters consumed below it.
  int32_t explicit_ancestor(const NodeRef& r) const { return is_explicit(r) ? r.node : nodes_[r.node].parent; }
  int32_t on_edge_depth(const NodeRef& r) const {
    return is_explicit(r) ? 0 : r.depth - nodes_[nodes_[r.node].parent].depth;
  }

  // Heavy paths: ids, head node, and nodes top-down.
  int32_t num_paths() const { return static_cast<int32_t>(path_head_.size()); }
  int32_t path_head(int32_t p) const { return path_head_[p]; }
  std::pair<const int32_t*, const int32_t*> path_nodes(int32_t p) const {
    return {path_list_.data() + path_off_[p], path_list_.data() + path_off_[p + 1]};
  }

  // Recomputes heavy children; forced[v] >= 0 overrides the choice at v.
  void compute_heavy(const std::vector<int32_t>* forced = nullptr) {
    for (int32_t v = 0; v < num_nodes(); ++v) {
      Node& nd = nodes_[v];
      nd.heavy = -1;
      if (forced && (*forced)[v] >= 0) {
        nd.heavy = (*forced)[v];
        continue;
      }
      int32_t best = -1;
      for (int32_t i = 0; i < nd.ccnt; ++i) {
        int32_t c = children_[nd.cbeg + i];
        if (best < 0 || subtree_size(c) > subtree_size(best)) best = c;
      }
      nd.heavy = best;
    }
    path_head_.clear();
    path_off_.assign(1, 0);
    path_list_.clear();
    for (int32_t v = 0; v < num_nodes(); ++v) {
      if (v != 0 && nodes_[nodes_[v].parent].heavy == v) continue;
      int32_t pid = static_cast<int32_t>(path_head_.size());
      path_head_.push_back(v);
      for (int32_t x = v; x >= 0; x = nodes_[x].heavy) {
        nodes_[x].path = pid;
        path_list_.push_back(x);
      }
      path_off_.push_back(static_cast<int32_t>(path_list_.size()));
    }
  }

  // Binary lifting for weighted ancestors; optional since it costs memory.
  void enable_lifting() {
    const int32_t n = num_nodes();
    int lv = 1;
    while ((1 << lv) < n) ++lv;
    up_.assign(lv, std::vector<int32_t>(n, 0));
    for (int32_t v = 0; v < n; ++v) up_[0][v] = v == 0 ? 0 : nodes_[v].parent;
    for (int j = 1; j < lv; ++j)
      for (int32_t v = 0; v < n; ++v) up_[j][v] = up_[j - 1][up_[j - 1][v]];
  }

  NodeRef weighted_ancestor(const NodeRef& r, int32_t depth) const {
    require(depth >= 0 && depth <= r.depth, "weighted_ancestor: depth exceeds string depth");
    int32_t v = r.node;
    if (!up_.empty()) {
      for (int j = static_cast<int>(up_.size()) - 1; j >= 0; --j) {
        int32_t a = up_[j][v];
        if (a != v && nodes_[a].depth >= depth) v = a;
      }
      if (v != 0 && nodes_[v].depth >= depth && nodes_[nodes_[v].parent].depth >= depth) v = nodes_[v].parent;
    } else {
      while (v != 0 && nodes_[nodes_[v].parent].depth >= depth) v = nodes_[v].parent;
    }
    return {v, depth};
  }
  NodeRef weighted_ancestor(int32_t v, int32_t depth) const { return weighted_ancestor({v, nodes_[v].depth}, depth); }

  // Descends from a locus whose path matches q[0..from.depth).
  template <class Q>
  NodeRef descend(const Q& q, NodeRef from, ProbeCounters* pc = nullptr) const {
    int32_t y = from.node, d = from.depth;
    const int32_t m = q.len();
    if (pc) ++pc->descents;
    for (;;) {
      if (d < nodes_[y].depth) {
        int32_t cap = std::min(nodes_[y].depth, m) - d;
        int32_t l = std::min(cap, q.lcp(strs_[nodes_[y].lo], d));
        if (pc) ++pc->comparisons;
        d += l;
        if (d < nodes_[y].depth) return {y, d};
      }
      if (d >= m) return {y, d};
      int32_t c = find_child(y, q.at(d));
      if (c < 0) return {y, d};
      y = c;
    }
  }
  template <class Q>
  NodeRef tree_lcp_rooted(const Q& q, ProbeCounters* pc = nullptr) const {
    return descend(q, NodeRef{0, 0}, pc);
  }

  // Binary search over the terminal interval of v; q must agree with the path to v.
  template <class Q>
  NodeRef tree_lcp_unrooted(const NodeRef& v, const Q& q, ProbeCounters* pc = nullptr) const {
    if (pc) ++pc->unrooted;
    const int32_t d = v.depth;
    if (d >= q.len()) return v;
    int32_t lo = nodes_[v.node].lo, hi = nodes_[v.node].hi;
    int32_t a = lo, b = hi;
    int32_t best = -1, bestl = -1;
    while (a < b) {
      int32_t mid = (a + b) / 2;
      int32_t l = q.lcp(strs_[mid], d);
      if (pc) ++pc->comparisons;
      if (l > bestl) bestl = l, best = mid;
      bool smaller;
      if (d + l >= q.len()) {
        smaller = false;
      } else if (d + l >= strs_[mid].len) {
        smaller = true;
      } else {
        smaller = mod_at(tx_->text(), strs_[mid], d + l) < q.at(d + l);
      }
      if (smaller)
        a = mid + 1;
      else
        b = mid;
    }
    for (int32_t c : {a - 1, a}) {
      if (c < lo || c >= hi) continue;
      int32_t l = q.lcp(strs_[c], d);
      if (pc) ++pc->comparisons;
      if (l > bestl) bestl = l, best = c;
    }
    int32_t target = d + std::min(bestl, q.len() - d);
    target = std::max(target, d);
    return weighted_ancestor(NodeRef{term_node_[best], strs_[best].len}, target);
  }

  // Range of terminals [lo, hi) whose strings have q as a prefix.
  template <class Q>
  std::pair<int32_t, int32_t> prefix_range(const Q& q) const {
    NodeRef r = tree_lcp_rooted(q);
    if (r.depth < q.len()) return {0, 0};
    return {nodes_[r.node].lo, nodes_[r.node].hi};
  }

  size_t memory_bytes() const {
    size_t b = nodes_.size() * sizeof(Node) + strs_.size() * sizeof(ModStr) +
               (labels_.size() + label_off_.size() + children_.size() + tables_.size() + term_node_.size()) * 4 +
               (path_head_.size() + path_off_.size() + path_list_.size()) * 4;
    for (auto& u : up_) b += u.size() * 4;
    return b;
  }

 private:
  void construct(const std::vector<int32_t>& lcps) {
    const int32_t ns = static_cast<int32_t>(strs_.size());
    // Stack construction over sorted strings with adjacent LCPs.
    std::vector<Node> raw(1);
    raw[0].depth = 0;
    std::vector<int32_t> stack{0};
    for (int32_t i = 0; i < ns; ++i) {
      const int32_t l = i == 0 ? 0 : lcps[i];
      int32_t last = -1;
      while (raw[stack.back()].depth > l) {
        last = stack.back();
        stack.pop_back();
      }
      if (last != -1 && raw[stack.back()].depth < l) {
        Node w;
        w.depth = l;
        w.parent = stack.back();
        raw.push_back(w);
        int32_t wid = static_cast<int32_t>(raw.size()) - 1;
        raw[last].parent = wid;
        stack.push_back(wid);
      }
      int32_t top = stack.back();
      if (strs_[i].len == raw[top].depth) {
        raw[top].term = i;
      } else {
        Node leaf;
        leaf.depth = strs_[i].len;
        leaf.parent = top;
        leaf.term = i;
        raw.push_back(leaf);
        stack.push_back(static_cast<int32_t>(raw.size()) - 1);
      }
    }
    const int32_t nn = static_cast<int32_t>(raw.size());
    // Children lists from parent pointers; keys from any subtree string.
    std::vector<int32_t> cnt(nn + 1, 0), minterm(nn, INT32_MAX);
    for (int32_t v = 0; v < nn; ++v)
      if (raw[v].term >= 0) minterm[v] = raw[v].term;
    // Raw nodes are not topologically ordered because of splits; propagate
    // min terminal by repeated relaxation along parent chains.
    {
      std::vector<int32_t> order(nn);
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&](int32_t a, int32_t b) { return raw[a].depth > raw[b].depth; });
      for (int32_t v : order)
        if (v != 0) minterm[raw[v].parent] = std::min(minterm[raw[v].parent], minterm[v]);
    }
    for (int32_t v = 1; v < nn; ++v) ++cnt[raw[v].parent + 1];
    for (int32_t v = 0; v < nn; ++v) cnt[v + 1] += cnt[v];
    std::vector<int32_t> kids(nn > 0 ? nn - 1 : 0);
    {
      std::vector<int32_t> pos(cnt.begin(), cnt.end() - 1);
      for (int32_t v = 1; v < nn; ++v) kids[pos[raw[v].parent]++] = v;
    }
    for (int32_t v = 0; v < nn; ++v)
      std::sort(kids.begin() + cnt[v], kids.begin() + cnt[v + 1],
                [&](int32_t a, int32_t b) { return minterm[a] < minterm[b]; });
    // Renumber in preorder.
    nodes_.clear();
    nodes_.reserve(nn);
    children_.clear();
    children_.resize(kids.size());
    std::vector<int32_t> newid(nn, -1);
    std::vector<std::pair<int32_t, int32_t>> st{{0, -1}};
    while (!st.empty()) {
      auto [v, par] = st.back();
      st.pop_back();
      int32_t id = static_cast<int32_t>(nodes_.size());
      newid[v] = id;
      Node nd;
      nd.parent = par;
      nd.depth = raw[v].depth;
      nd.term = raw[v].term;
      nd.ccnt = cnt[v + 1] - cnt[v];
      nodes_.push_back(nd);
      for (int32_t q = cnt[v + 1] - 1; q >= cnt[v]; --q) st.push_back({kids[q], id});
    }
    // Fill children arrays (preorder: children of v appear after v).
    {
      int32_t off = 0;
      for (int32_t id = 0; id < nn; ++id) {
        nodes_[id].cbeg = off;
        off += nodes_[id].ccnt;
      }
      std::vector<int32_t> fill(nn, 0);
      for (int32_t id = 1; id < nn; ++id) {
        int32_t p = nodes_[id].parent;
        children_[nodes_[p].cbeg + fill[p]++] = id;
      }
    }
    term_node_.assign(ns, -1);
    for (int32_t id = nn - 1; id >= 0; --id) {
      Node& nd = nodes_[id];
      if (nd.term >= 0) term_node_[nd.term] = id;
      nd.lo = nd.term >= 0 ? nd.term : INT32_MAX;
      nd.hi = nd.term >= 0 ? nd.term + 1 : INT32_MIN;
      for (int32_t i = 0; i < nd.ccnt; ++i) {
        const Node& c = nodes_[children_[nd.cbeg + i]];
        nd.lo = std::min(nd.lo, c.lo);
        nd.hi = std::max(nd.hi, c.hi);
      }
      if (nd.lo == INT32_MAX) nd.lo = nd.hi = 0;
    }
    const BytesView t = tx_->text();
    for (int32_t id = 1; id < nn; ++id) nodes_[id].key = static_cast<uint16_t>(mod_at(t, strs_[nodes_[id].lo], nodes_[nodes_[id].parent].depth));
    tables_.clear();
    for (int32_t id = 0; id < nn; ++id) {
      Node& nd = nodes_[id];
      if (nd.ccnt >= kFanout) {
        nd.table = static_cast<int32_t>(tables_.size());
        tables_.resize(tables_.size() + 257, -1);
        for (int32_t i = 0; i < nd.ccnt; ++i) {
          int32_t c = children_[nd.cbeg + i];
          tables_[nd.table + nodes_[c].key] = c;
        }
      }
    }
    compute_heavy();
  }

  const TextLcpIndex* tx_ = nullptr;
  std::vector<ModStr> strs_;
  std::vector<int32_t> label_off_{0};
  std::vector<int32_t> labels_;
  std::vector<Node> nodes_;
  std::vector<int32_t> children_;
  std::vector<int32_t> tables_;
  std::vector<int32_t> term_node_;
  std::vector<int32_t> path_head_, path_off_{0}, path_list_;
  std::vector<std::vector<int32_t>> up_;
};

inline CompactTrie build_compact_trie(const TextLcpIndex& tx, const std::vector<ModifiedFragment>& frags,
                                      const std::vector<int32_t>& labels) {
  require(!frags.empty(), "build_compact_trie: no strings");
  require(frags.size() == labels.size(), "build_compact_trie: label count mismatch");
  std::vector<CompactTrie::Entry> e;
  for (size_t i = 0; i < frags.size(); ++i) {
    frags[i].validate(tx.text(), kMaxSubs);
    e.push_back({to_modstr(frags[i]), labels[i]});
  }
  return CompactTrie::build(tx, std::move(e));
}

// Suffix tree with suffix links (terminator-free: a suffix that is a prefix of
// another suffix is a terminal at an internal node).
class SuffixTree {
 public:
  explicit SuffixTree(const TextLcpIndex& tx) : tx_(&tx) {
    const int32_t n = tx.size();
    require(n >= 1, "suffix tree: empty text");
    std::vector<ModStr> strs(n);
    std::vector<int32_t> off(n + 1), labels(n), lcps(n);
    for (int32_t r = 0; r < n; ++r) {
      int32_t s = tx.sa()[r];
      strs[r] = ModStr::plain(s, n - s);
      off[r + 1] = r + 1;
      labels[r] = s;
      lcps[r] = tx.lcp()[r];
    }
    trie_ = CompactTrie::from_sorted(tx, std::move(strs), std::move(off), std::move(labels), lcps);
    trie_.enable_lifting();
    slink_.assign(trie_.num_nodes(), 0);
    for (int32_t v = 1; v < trie_.num_nodes(); ++v) {
      const auto& nd = trie_.node(v);
      if (nd.depth <= 1) continue;
      int32_t s = trie_.str(nd.lo).start;
      // Terminal of suffix s+1 exists since depth(v) >= 2 implies s+1 < n.
      int32_t leaf = trie_.term_node(tx.isa()[s + 1]);
      NodeRef w = trie_.weighted_ancestor(leaf, nd.depth - 1);
      require(trie_.is_explicit(w), "suffix tree: suffix link target is implicit");
      slink_[v] = w.node;
    }
  }
  const CompactTrie& trie() const { return trie_; }
  const TextLcpIndex& text() const { return *tx_; }
  int32_t slink(int32_t v) const { return slink_[v]; }

 private:
  const TextLcpIndex* tx_;
  CompactTrie trie_;
  std::vector<int32_t> slink_;
};

inline CompactTrie build_suffix_tree(const TextLcpIndex& tx) { return SuffixTree(tx).trie(); }

}  // namespace kmix
