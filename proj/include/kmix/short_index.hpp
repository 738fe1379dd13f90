// Licensed under the Apache License, Version 2.0
#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "kmix/common.hpp"
#include "kmix/kangaroo.hpp"
#include "kmix/sampled.hpp"
#include "kmix/succinct.hpp"
#include "kmix/trie.hpp"

namespace kmix {

// Largest power of two dividing t.
inline int64_t f_pow2(int64_t t) {
  require(t >= 1, "f: argument must be positive");
  return ((t ^ (t - 1)) + 1) / 2;
}

// j, j - f(j), ... down to the last positive element. The intervals
// [t - f(t) .. t) over the sequence tile [0 .. j).
inline std::vector<int64_t> f_sequence(int64_t j) {
  require(j >= 1, "f_sequence: argument must be positive");
  std::vector<int64_t> out;
  for (int64_t t = j; t > 0; t -= f_pow2(t)) out.push_back(t);
  return out;
}

inline std::vector<WChar> text_alphabet(BytesView t) {
  std::array<bool, 256> seen{};
  for (char c : t) seen[static_cast<unsigned char>(c)] = true;
  std::vector<WChar> a;
  for (int c = 0; c < 256; ++c)
    if (seen[c]) a.push_back(c);
  return a;
}

struct ShortParams {
  int32_t mu = 16;
  int h = 1;
  int k = 2;
  bool keep_basic = false;  // keep the ungrouped tries for query_basic
  int64_t max_terminals = 100'000'000;
};

struct ShortStats {
  int64_t base_terminals = 0;
  int64_t grouped_terminals = 0;
  int64_t sampled_terminals = 0;
  int64_t list_size = 0;
  uint64_t triad_bits = 0;
  uint64_t mytriad_bits = 0;
  uint64_t cut_bits = 0;
  size_t memory_bytes = 0;
};

struct ShortQueryCounters {
  uint64_t range_queries = 0;
  uint64_t reported = 0;
  uint64_t filtered = 0;
  int64_t max_multiplicity = 0;
};

// k-mismatch index for patterns of length at most mu. Tries of kappa-modified
// suffixes (kappa <= h, substitutions in the first mu positions) are grouped
// by base intervals of the position of their last substitution; each group is
// kept only as a sampled trie plus a retrieval store for its sorted strings.
class ShortIndex {
 public:
  struct Triad {
    int32_t p = -1;
    uint16_t c_old = 0, c_new = 0;
    friend bool operator<(const Triad& a, const Triad& b) {
      return std::tie(a.p, a.c_old, a.c_new) < std::tie(b.p, b.c_old, b.c_new);
    }
    friend bool operator==(const Triad& a, const Triad& b) = default;
  };
  struct GroupStore {
    int32_t size = 0;
    std::vector<uint32_t> triads;  // per terminal, index into table
    std::vector<Triad> table;
    std::vector<IncreasingSeq> my, cut;
    SampledRange sampled;
  };

  static std::unique_ptr<ShortIndex> build(Bytes text, ShortParams prm) {
    require(!text.empty(), "short index: empty text");
    require(prm.h >= 1 && prm.h < prm.k, "short index: need 1 <= h < k");
    require(prm.h <= kMaxSubs && prm.k <= kMaxSubs, "short index: k too large");
    require(prm.mu >= 1, "short index: mu must be positive");
    std::unique_ptr<ShortIndex> ix(new ShortIndex());
    ix->prm_ = prm;
    ix->prm_.mu = std::min<int32_t>(prm.mu, static_cast<int32_t>(text.size()));
    ix->tx_ = std::make_unique<TextLcpIndex>(std::move(text));
    ix->st_ = std::make_unique<SuffixTree>(*ix->tx_);
    ix->alpha_ = text_alphabet(ix->tx_->text());
    ix->foreign_.fill(true);
    for (WChar c : ix->alpha_) ix->foreign_[c] = false;
    ix->build_all();
    return ix;
  }

  const ShortParams& params() const { return prm_; }
  int32_t mu() const { return prm_.mu; }
  const TextLcpIndex& text_index() const { return *tx_; }
  const std::vector<WChar>& alphabet() const { return alpha_; }

  // Group (kappa, t), t in [1..mu].
  int32_t group_size(int kappa, int32_t t) const { return groups_[gid(kappa, t)].size; }
  const GroupStore& group(int kappa, int32_t t) const { return groups_[gid(kappa, t)]; }
  const std::vector<ModStr>& list() const { return L_; }

  // The i-th (0-based) string of group (kappa, t) in lexicographic order.
  ModStr retrieve(int kappa, int32_t t, int32_t i) const { return retrieve(groups_[gid(kappa, t)], i); }

  // Range [lo, hi) of group (kappa, t) terminals having q as a prefix.
  std::pair<int32_t, int32_t> terminal_range(int kappa, int32_t t, const PatternContext& ctx, const PatStr& q,
                                             ShortQueryCounters* qc = nullptr) const {
    const GroupStore& g = groups_[gid(kappa, t)];
    if (qc) ++qc->range_queries;
    if (g.size == 0) return {0, 0};
    return g.sampled.range(ctx, q, [&](int32_t i) { return prefix_compare(ctx, retrieve(g, i), q); });
  }

  // Base (ungrouped) sorted lists; available with keep_basic.
  bool has_basic() const { return !base_.empty(); }
  const std::vector<ModStr>& base_list(int kappa, int32_t j) const { return base_[bid(kappa, j)]; }
  std::vector<ModStr> grouped_materialized(int kappa, int32_t t) const {
    require(has_basic(), "short index: built without basic tries");
    return merge_group(kappa, t);
  }

  OccurrenceSet query(BytesView p, int k, ShortQueryCounters* qc = nullptr) const {
    return run(p, k, qc, false);
  }
  OccurrenceSet query(BytesView p, ShortQueryCounters* qc = nullptr) const { return run(p, prm_.k, qc, false); }
  // Same scheme over the ungrouped tries with trie descents.
  OccurrenceSet query_basic(BytesView p, int k, ShortQueryCounters* qc = nullptr) const {
    require(has_basic(), "short index: built without basic tries");
    return run(p, k, qc, true);
  }
  OccurrenceSet query_basic(BytesView p, ShortQueryCounters* qc = nullptr) const {
    return query_basic(p, prm_.k, qc);
  }

  ShortStats stats() const {
    ShortStats s = stats_;
    s.memory_bytes = L_.size() * sizeof(ModStr) + tx_->size() * 8;
    for (const auto& g : groups_) {
      s.memory_bytes += g.triads.size() * 4 + g.table.size() * sizeof(Triad) + g.sampled.memory_bytes();
      for (const auto& q : g.my) s.memory_bytes += q.memory_bytes();
      for (const auto& q : g.cut) s.memory_bytes += q.memory_bytes();
    }
    return s;
  }

 private:
  ShortIndex() = default;

  int32_t gid(int kappa, int32_t t) const {
    require(kappa >= 0 && kappa <= prm_.h && t >= 1 && t <= prm_.mu, "short index: group out of range");
    return kappa * prm_.mu + (t - 1);
  }
  int32_t bid(int kappa, int32_t j) const {
    require(kappa >= 0 && kappa <= prm_.h && j >= 0 && j < prm_.mu, "short index: base trie out of range");
    return kappa * prm_.mu + j;
  }

  ModStr retrieve(const GroupStore& g, int32_t i) const {
    const uint32_t id = g.triads[i];
    const Triad& tr = g.table[id];
    const int64_t a = *g.my[id].rank(i + 1);
    const int64_t x = g.cut[id].select(a);
    const ModStr& s = L_[x - 1];
    return tr.p < 0 ? s : mod_set(tx_->text(), s, tr.p, tr.c_new);
  }

  struct Key {
    int32_t start;
    uint8_t nsub;
    std::array<int32_t, kMaxSubs> off;
    std::array<uint16_t, kMaxSubs> ch;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    size_t operator()(const Key& k) const {
      uint64_t h = static_cast<uint64_t>(k.start) * 0x9E3779B97F4A7C15ULL ^ k.nsub;
      for (int i = 0; i < k.nsub; ++i) h = (h ^ (static_cast<uint64_t>(k.off[i]) << 16 ^ k.ch[i])) * 0xBF58476D1CE4E5B9ULL;
      return static_cast<size_t>(h ^ (h >> 31));
    }
  };
  static Key key_of(const ModStr& s) {
    Key k{s.start, s.nsub, {}, {}};
    for (int i = 0; i < s.nsub; ++i) k.off[i] = s.off[i], k.ch[i] = s.ch[i];
    return k;
  }

  bool less(const ModStr& a, const ModStr& b) const { return compare_tt(*tx_, a, 0, b, 0) < 0; }

  std::vector<ModStr> merge_group(int kappa, int32_t t) const {
    const int32_t lo = std::max<int32_t>(static_cast<int32_t>(t - f_pow2(t)), kappa == 0 ? 0 : kappa - 1);
    const int32_t hi = kappa == 0 ? std::min<int32_t>(t, 1) : t;
    std::vector<ModStr> out;
    for (int32_t i = lo; i < hi; ++i) {
      const auto& b = base_[bid(kappa, i)];
      const size_t mid = out.size();
      out.insert(out.end(), b.begin(), b.end());
      std::inplace_merge(out.begin(), out.begin() + mid, out.end(),
                         [&](const ModStr& x, const ModStr& y) { return less(x, y); });
    }
    return out;
  }

  void build_all() {
    const BytesView t = tx_->text();
    const int32_t n = tx_->size(), mu = prm_.mu, h = prm_.h;
    const int64_t sig = static_cast<int64_t>(alpha_.size()) - 1;
    // Predicted size before enumerating.
    {
      const int lg = floor_log2(static_cast<uint64_t>(mu)) + 1;
      double total = 0;
      for (int32_t s = 0; s < n; ++s) {
        const int64_t lim = std::min<int64_t>(mu, n - s);
        double c = 1, p = 1;
        for (int kk = 0; kk <= h; ++kk) {
          total += c * p;
          c = c * static_cast<double>(lim - kk) / (kk + 1);
          p *= static_cast<double>(sig);
        }
      }
      require(total * lg <= static_cast<double>(prm_.max_terminals), "short index: predicted size over budget");
    }
    base_.assign(static_cast<size_t>(h + 1) * mu, {});
    std::function<void(const ModStr&, int32_t, int)> rec = [&](const ModStr& s, int32_t from, int depth) {
      base_[bid(depth, depth == 0 ? 0 : s.off[depth - 1])].push_back(s);
      if (depth == h) return;
      const int32_t lim = std::min<int32_t>(mu, s.len);
      for (int32_t o = from; o < lim; ++o)
        for (WChar c : alpha_)
          if (c != static_cast<unsigned char>(t[s.start + o])) rec(mod_set(t, s, o, c), o + 1, depth + 1);
    };
    for (int32_t s = 0; s < n; ++s) rec(ModStr::plain(s, n - s), 0, 0);
    for (auto& b : base_) {
      std::sort(b.begin(), b.end(), [&](const ModStr& x, const ModStr& y) { return less(x, y); });
      stats_.base_terminals += static_cast<int64_t>(b.size());
    }
    // The list of (<= h-1)-modified suffixes and its index.
    for (int kappa = 0; kappa < h; ++kappa)
      for (int32_t j = 0; j < mu; ++j) L_.insert(L_.end(), base_[bid(kappa, j)].begin(), base_[bid(kappa, j)].end());
    std::sort(L_.begin(), L_.end(), [&](const ModStr& x, const ModStr& y) { return less(x, y); });
    stats_.list_size = static_cast<int64_t>(L_.size());
    std::unordered_map<Key, int32_t, KeyHash> where;
    where.reserve(L_.size() * 2);
    for (size_t i = 0; i < L_.size(); ++i) where.emplace(key_of(L_[i]), static_cast<int32_t>(i + 1));

    const int32_t step = std::max(1, floor_log2(static_cast<uint64_t>(n)));
    groups_.clear();
    groups_.resize(static_cast<size_t>(h + 1) * mu);
    for (int kappa = 0; kappa <= h; ++kappa)
      for (int32_t tt = 1; tt <= mu; ++tt) {
        std::vector<ModStr> g = merge_group(kappa, tt);
        GroupStore& gs = groups_[gid(kappa, tt)];
        gs.size = static_cast<int32_t>(g.size());
        stats_.grouped_terminals += gs.size;
        if (g.empty()) continue;
        // Triads in terminal order.
        std::vector<Triad> tri(g.size());
        for (size_t i = 0; i < g.size(); ++i) {
          const ModStr& s = g[i];
          if (s.nsub) {
            const int32_t p = s.off[s.nsub - 1];
            tri[i] = {p, static_cast<uint16_t>(static_cast<unsigned char>(t[s.start + p])), s.ch[s.nsub - 1]};
          }
        }
        gs.table = tri;
        std::sort(gs.table.begin(), gs.table.end());
        gs.table.erase(std::unique(gs.table.begin(), gs.table.end()), gs.table.end());
        std::vector<std::vector<int32_t>> my(gs.table.size()), cut(gs.table.size());
        gs.triads.resize(g.size());
        for (size_t i = 0; i < g.size(); ++i) {
          const uint32_t id =
              static_cast<uint32_t>(std::lower_bound(gs.table.begin(), gs.table.end(), tri[i]) - gs.table.begin());
          gs.triads[i] = id;
          my[id].push_back(static_cast<int32_t>(i + 1));
          const ModStr& s = g[i];
          const ModStr cutstr = s.nsub ? mod_set(t, s, tri[i].p, tri[i].c_old) : s;
          auto it = where.find(key_of(cutstr));
          require(it != where.end(), "short index: cut string missing from the list");
          require(cut[id].empty() || cut[id].back() < it->second, "short index: cut sequence not increasing");
          cut[id].push_back(it->second);
        }
        for (size_t id = 0; id < gs.table.size(); ++id) {
          gs.my.emplace_back(std::move(my[id]), gs.size);
          gs.cut.emplace_back(std::move(cut[id]), static_cast<int64_t>(L_.size()));
          stats_.mytriad_bits += gs.my.back().encoded_bits();
          stats_.cut_bits += gs.cut.back().encoded_bits();
        }
        stats_.triad_bits += static_cast<uint64_t>(g.size()) *
                             static_cast<uint64_t>(std::max(1, floor_log2(gs.table.size()) + 1));
        gs.sampled.build(*tx_, gs.size, step, [&](int32_t i) { return g[i]; }, true);
        if (const CompactTrie* st = gs.sampled.sampled()) stats_.sampled_terminals += st->num_terminals();
      }
    if (prm_.keep_basic) {
      basic_.resize(base_.size());
      for (size_t b = 0; b < base_.size(); ++b) {
        std::vector<CompactTrie::Entry> e;
        for (const ModStr& s : base_[b]) e.push_back({s, s.start});
        if (!e.empty()) basic_[b] = std::make_unique<CompactTrie>(CompactTrie::build(*tx_, std::move(e)));
      }
    } else {
      base_.clear();
      base_.shrink_to_fit();
    }
  }

  // Reports from one trie probe; positions in `forbid` must not carry a
  // substitution of the reported string.
  struct Sink {
    std::vector<int64_t> out;
    std::vector<int32_t> forbid;
  };

  void report_group(const GroupStore& g, int32_t lo, int32_t hi, Sink& sk, ShortQueryCounters* qc) const {
    for (int32_t i = lo; i < hi; ++i) {
      if (!sk.forbid.empty()) {
        const ModStr s = retrieve(g, i);
        if (has_sub_at(s, sk.forbid)) {
          if (qc) ++qc->filtered;
          continue;
        }
        sk.out.push_back(s.start);
      } else {
        sk.out.push_back(L_[g.cut[g.triads[i]].select(*g.my[g.triads[i]].rank(i + 1)) - 1].start);
      }
      if (qc) ++qc->reported;
    }
  }
  void report_basic(const CompactTrie& tr, const NodeRef& r, Sink& sk, ShortQueryCounters* qc) const {
    for (int32_t i = tr.node(r.node).lo; i < tr.node(r.node).hi; ++i) {
      if (!sk.forbid.empty() && has_sub_at(tr.str(i), sk.forbid)) {
        if (qc) ++qc->filtered;
        continue;
      }
      for (int32_t q = tr.label_begin(i); q < tr.label_end(i); ++q) sk.out.push_back(tr.label(q));
      if (qc) ++qc->reported;
    }
  }
  static bool has_sub_at(const ModStr& s, const std::vector<int32_t>& pos) {
    for (int i = 0; i < s.nsub; ++i)
      if (std::binary_search(pos.begin(), pos.end(), s.off[i])) return true;
    return false;
  }

  // Locus probe of q in the tries of rightmost-substitution offsets [0..j)
  // with kappa substitutions.
  void probe(const PatternContext& ctx, const PatStr& q, int kappa, int32_t j, bool basic, Sink& sk,
             ShortQueryCounters* qc) const {
    if (j <= 0) return;
    if (basic) {
      const int32_t lo = kappa == 0 ? 0 : kappa - 1;
      const int32_t hi = kappa == 0 ? 1 : j;
      for (int32_t i = lo; i < hi; ++i) {
        const auto& tr = basic_[bid(kappa, i)];
        if (!tr) continue;
        if (qc) ++qc->range_queries;
        const NodeRef r = tr->tree_lcp_rooted(PatQuery{&ctx, q});
        if (r.depth >= q.len) report_basic(*tr, r, sk, qc);
      }
      return;
    }
    for (int64_t t : f_sequence(j)) {
      auto [lo, hi] = terminal_range(kappa, static_cast<int32_t>(t), ctx, q, qc);
      report_group(groups_[gid(kappa, static_cast<int32_t>(t))], lo, hi, sk, qc);
    }
  }

  // Occurrences of q (m = q.len) with at most b mismatches, none of them at
  // positions in sk.forbid.
  void core(const PatternContext& ctx, const PatStr& q, int b, bool basic, Sink& sk,
            ShortQueryCounters* qc) const {
    const BytesView p = ctx.pattern();
    const int32_t m = q.len;
    const int h = prm_.h;
    // At most h substitutions: all inside the pattern window.
    for (int kappa = 0; kappa <= std::min(h, b); ++kappa) probe(ctx, q, kappa, m, basic, sk, qc);
    if (b <= h) return;
    // More than h: the first h mismatches are text-side substitutions, the
    // rest are applied to the pattern; j is the first pattern-side change.
    std::function<void(const PatStr&, int32_t, int, int32_t)> gen = [&](const PatStr& cur, int32_t from, int left,
                                                                         int32_t first) {
      for (int32_t o = from; o < m; ++o) {
        if (std::binary_search(sk.forbid.begin(), sk.forbid.end(), o)) continue;
        const WChar orig = pat_at(p, q, o);
        for (WChar c : alpha_) {
          if (c == orig) continue;
          const PatStr nx = pat_set(p, cur, o, c);
          const int32_t j = first < 0 ? o : first;
          probe(ctx, nx, h, j, basic, sk, qc);
          if (left > 1) gen(nx, o + 1, left - 1, j);
        }
      }
    };
    gen(q, 0, b - h, -1);
  }

  OccurrenceSet run(BytesView p, int k, ShortQueryCounters* qc, bool basic) const {
    require(k >= 0 && k <= prm_.k, "short index: k above the built maximum");
    require(!p.empty(), "short index: empty pattern");
    require(static_cast<int64_t>(p.size()) <= prm_.mu, "short index: pattern longer than mu");
    OccurrenceSet res;
    PatternContext ctx(*st_, p);
    const int32_t m = static_cast<int32_t>(p.size());
    Sink sk;
    for (int32_t i = 0; i < m; ++i)
      if (foreign_[static_cast<unsigned char>(p[i])]) sk.forbid.push_back(i);
    const int f = static_cast<int>(sk.forbid.size());
    if (f > k) return res;
    // Bytes absent from the text always mismatch: try every text byte there
    // and forbid further substitutions at those positions.
    std::function<void(PatStr, int)> assign = [&](PatStr q, int idx) {
      if (idx == f) {
        core(ctx, q, k - f, basic, sk, qc);
        return;
      }
      for (WChar c : alpha_) assign(pat_set(p, q, sk.forbid[idx], c), idx + 1);
    };
    assign(PatStr::suffix(0, m), 0);
    res = std::move(sk.out);
    std::sort(res.begin(), res.end());
    int64_t run_len = 0, mx = res.empty() ? 0 : 1;
    for (size_t i = 0; i < res.size(); ++i) {
      run_len = i > 0 && res[i] == res[i - 1] ? run_len + 1 : 1;
      mx = std::max(mx, run_len);
    }
    if (qc) qc->max_multiplicity = std::max(qc->max_multiplicity, mx);
    res.erase(std::unique(res.begin(), res.end()), res.end());
    return res;
  }

  ShortParams prm_;
  std::unique_ptr<TextLcpIndex> tx_;
  std::unique_ptr<SuffixTree> st_;
  std::vector<WChar> alpha_;
  std::array<bool, 256> foreign_{};
  std::vector<std::vector<ModStr>> base_;
  std::vector<std::unique_ptr<CompactTrie>> basic_;
  std::vector<ModStr> L_;
  std::vector<GroupStore> groups_;
  ShortStats stats_;
};

}  // namespace kmix
