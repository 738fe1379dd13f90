// Licensed under the Apache License, Version 2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <memory>
#include <unordered_map>
#include <vector>

#include "kmix/common.hpp"
#include "kmix/errata.hpp"
#include "kmix/kangaroo.hpp"
#include "kmix/strings.hpp"
#include "kmix/succinct.hpp"
#include "kmix/text_lcp.hpp"
#include "kmix/trie.hpp"

namespace kmix {

// Marks every i such that T[i..i+len) lies inside a run with 3p <= tau, i.e.
// has period at most tau/3.
inline std::vector<char> short_period_windows(int64_t n, const std::vector<Run>& runs, int64_t tau, int64_t len) {
  std::vector<int32_t> diff(n + 2, 0);
  for (const Run& r : runs) {
    if (3 * r.period > tau || r.length() < len) continue;
    diff[r.start] += 1;
    diff[r.end - len + 2] -= 1;
  }
  std::vector<char> out(n, 0);
  int32_t cur = 0;
  for (int64_t i = 0; i < n; ++i) {
    cur += diff[i];
    out[i] = cur > 0;
  }
  return out;
}

struct SyncSet {
  int64_t tau = 0;
  std::vector<int32_t> positions;    // sorted, within [0, n-2tau]
  std::vector<int32_t> next_anchor;  // size n+1; n when there is none

  bool contains(int64_t i) const { return std::binary_search(positions.begin(), positions.end(), i); }
};

// Synchronizing set from the identifier phi(i) = rank of T[i..i+tau) (infinite
// on short-period windows): i is selected when the minimum of phi over
// [i..i+tau] is finite and attained at i or i+tau. Both defining conditions
// are rechecked before returning.
inline SyncSet build_sync_set(const TextLcpIndex& tx, const std::vector<Run>& runs, int64_t tau) {
  const int64_t n = tx.size();
  require(tau >= 1 && 2 * tau <= n, "sync set: need 1 <= tau <= n/2");
  constexpr int64_t kInf = std::numeric_limits<int64_t>::max();
  const std::vector<char> q1 = short_period_windows(n, runs, tau, tau);
  const std::vector<char> q3 = short_period_windows(n, runs, tau, 3 * tau - 1);
  std::vector<int64_t> phi(n - tau + 1, kInf);
  {
    int64_t rank = -1;
    for (int32_t r = 0; r < n; ++r) {
      if (r == 0 || tx.lcp()[r] < tau) ++rank;
      const int32_t s = tx.sa()[r];
      if (s <= n - tau && !q1[s]) phi[s] = rank;
    }
  }
  SyncSet ss;
  ss.tau = tau;
  std::deque<int64_t> win;  // indices with increasing phi
  for (int64_t j = 0; j <= n - tau; ++j) {
    while (!win.empty() && phi[win.back()] >= phi[j]) win.pop_back();
    win.push_back(j);
    const int64_t i = j - tau;
    if (i < 0) continue;
    while (win.front() < i) win.pop_front();
    const int64_t mn = phi[win.front()];
    if (mn != kInf && (phi[i] == mn || phi[i + tau] == mn)) ss.positions.push_back(static_cast<int32_t>(i));
  }
  ss.next_anchor.assign(n + 1, static_cast<int32_t>(n));
  {
    size_t q = ss.positions.size();
    for (int64_t i = n; i >= 0; --i) {
      while (q > 0 && ss.positions[q - 1] >= i) --q;
      if (q < ss.positions.size()) ss.next_anchor[i] = ss.positions[q];
    }
  }
  // Consistency: suffixes sharing a 2tau prefix agree on membership.
  std::vector<char> in(n, 0);
  for (int32_t a : ss.positions) in[a] = 1;
  int32_t prev = -1;
  for (int32_t r = 0; r < n; ++r) {
    const int32_t s = tx.sa()[r];
    if (s > n - 2 * tau) continue;
    if (prev >= 0 && tx.lce(prev, s) >= 2 * tau) require(in[prev] == in[s], "sync set: consistency check failed");
    prev = s;
  }
  // Density: [i..i+tau) is anchor-free iff T[i..i+3tau-1) has period <= tau/3.
  for (int64_t i = 0; i + 3 * tau - 1 <= n; ++i) {
    const bool empty = ss.next_anchor[i] >= i + tau;
    require(empty == (q3[i] != 0), "sync set: density check failed");
  }
  return ss;
}

inline SyncSet build_sync_set(BytesView t, int64_t tau) {
  TextLcpIndex fwd{Bytes(t)}, rev{reversed(t)};
  return build_sync_set(fwd, compute_runs(fwd, rev), tau);
}

struct AnchorSets {
  SyncSet sync;
  std::vector<int32_t> a1, a2;  // sorted
  std::vector<Run> runs;        // tau-runs
  std::vector<Misper> run_misper;
};

inline AnchorSets build_anchors(const TextLcpIndex& fwd, const TextLcpIndex& rev, int64_t gamma, int k) {
  const int64_t n = fwd.size();
  require(k >= 0 && gamma >= 2 && gamma <= n / (k + 1), "anchors: gamma out of range");
  const int64_t tau = std::max<int64_t>(1, gamma / 3);
  AnchorSets as;
  const std::vector<Run> runs = compute_runs(fwd, rev);
  as.sync = build_sync_set(fwd, runs, tau);
  as.a1 = as.sync.positions;
  as.runs = tau_runs(runs, tau);
  for (const Run& r : as.runs) {
    as.run_misper.push_back(misper_lce(fwd, rev, r.start, r.start + r.period, k + 1));
    for (int64_t x : as.run_misper.back().all()) as.a2.push_back(static_cast<int32_t>(x));
  }
  std::sort(as.a2.begin(), as.a2.end());
  as.a2.erase(std::unique(as.a2.begin(), as.a2.end()), as.a2.end());
  return as;
}

struct PatternAnchors {
  std::vector<int32_t> b1, b2;  // sorted, duplicate-free offsets into P
};

struct LongStats {
  int64_t n = 0, gamma = 0, tau = 0;
  int k = 0;
  int64_t a1 = 0, a2 = 0, tau_runs = 0, roots = 0, near_intervals = 0;
  std::vector<int64_t> join_points;  // per anchor set
  size_t memory_bytes = 0;
};

struct LongQueryCounters {
  int64_t b1 = 0, b2 = 0;
  int64_t anchored_reports = 0, near_reports = 0;
  int64_t max_multiplicity = 0;
};

class LongIndex {
 public:
  struct NearPayload {
    int64_t alpha, beta;  // extreme starts of the residue class
    int64_t rlo, rhi;     // r_b (or minimum) and r_{b+1}
    int64_t p;
  };

  static std::unique_ptr<LongIndex> build(Bytes text, int64_t gamma, int k) {
    require(!text.empty(), "long index: empty text");
    require(k >= 1 && k <= kMaxSubs, "long index: k out of range");
    const int64_t n = static_cast<int64_t>(text.size());
    require(gamma >= 2 && gamma <= n / (k + 1), "long index: gamma out of range");
    std::unique_ptr<LongIndex> ix(new LongIndex());
    ix->gamma_ = gamma;
    ix->k_ = k;
    ix->rev_text_ = std::make_unique<TextLcpIndex>(reversed(text));
    ix->tx_ = std::make_unique<TextLcpIndex>(std::move(text));
    ix->st_ = std::make_unique<SuffixTree>(*ix->tx_);
    ix->rst_ = std::make_unique<SuffixTree>(*ix->rev_text_);
    ix->anchors_ = build_anchors(*ix->tx_, *ix->rev_text_, gamma, k);
    ix->tau_ = ix->anchors_.sync.tau;
    ix->build_join(0, ix->anchors_.a1);
    ix->build_join(1, ix->anchors_.a2);
    ix->build_near();
    return ix;
  }

  const TextLcpIndex& text_index() const { return *tx_; }
  const Bytes& text() const { return tx_->text(); }
  int64_t gamma() const { return gamma_; }
  int64_t tau() const { return tau_; }
  int k() const { return k_; }
  const AnchorSets& anchors() const { return anchors_; }

  PatternAnchors pattern_anchors(BytesView p) const {
    require(static_cast<int64_t>(p.size()) >= (k_ + 1) * gamma_, "long index: pattern shorter than (k+1)gamma");
    PatternContext ctx(*st_, Bytes(p));
    return pattern_anchors(ctx);
  }

  OccurrenceSet query(BytesView p, LongQueryCounters* qc = nullptr) const {
    const int64_t m = static_cast<int64_t>(p.size());
    require(m >= (k_ + 1) * gamma_, "long index: pattern shorter than (k+1)gamma");
    OccurrenceSet out;
    if (m > tx_->size()) return out;
    PatternContext ctx(*st_, Bytes(p));
    PatternContext rctx(*rst_, reversed(p));
    const PatternAnchors pa = pattern_anchors(ctx);
    if (qc) qc->b1 = static_cast<int64_t>(pa.b1.size()), qc->b2 = static_cast<int64_t>(pa.b2.size());
    for (int t = 0; t < 2; ++t)
      for (int32_t b : t == 0 ? pa.b1 : pa.b2) anchored(t, ctx, rctx, b, out);
    const size_t anchored_count = out.size();
    near_periodic(ctx, out);
    if (qc) {
      qc->anchored_reports = static_cast<int64_t>(anchored_count);
      qc->near_reports = static_cast<int64_t>(out.size() - anchored_count);
    }
    std::sort(out.begin(), out.end());
    if (qc) {
      for (size_t i = 0; i < out.size();) {
        size_t j = i;
        while (j < out.size() && out[j] == out[i]) ++j;
        qc->max_multiplicity = std::max<int64_t>(qc->max_multiplicity, static_cast<int64_t>(j - i));
        i = j;
      }
    }
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  // Occurrences produced by the nearly periodic phase alone.
  OccurrenceSet query_near_periodic(BytesView p) const {
    require(static_cast<int64_t>(p.size()) >= (k_ + 1) * gamma_, "long index: pattern shorter than (k+1)gamma");
    OccurrenceSet out;
    if (static_cast<int64_t>(p.size()) > tx_->size()) return out;
    PatternContext ctx(*st_, Bytes(p));
    near_periodic(ctx, out);
    sort_unique(out);
    return out;
  }

  LongStats stats() const {
    LongStats s;
    s.n = tx_->size(), s.gamma = gamma_, s.tau = tau_, s.k = k_;
    s.a1 = static_cast<int64_t>(anchors_.a1.size());
    s.a2 = static_cast<int64_t>(anchors_.a2.size());
    s.tau_runs = static_cast<int64_t>(anchors_.runs.size());
    s.roots = static_cast<int64_t>(roots_.size());
    size_t mem = 0;
    for (const auto& [key, st] : near_) {
      s.near_intervals += static_cast<int64_t>(st.size());
      mem += st.memory_bytes();
    }
    for (const Join& j : join_) {
      int64_t pts = 0;
      for (const auto& rr : j.rr) {
        pts += static_cast<int64_t>(rr.size());
        mem += rr.memory_bytes();
      }
      for (const Side* sd : {&j.fwd, &j.rev}) {
        if (!sd->et) continue;
        mem += sd->et->stats().memory_bytes + sd->s.size() * 4;
      }
      s.join_points.push_back(pts);
    }
    s.memory_bytes = mem;
    return s;
  }

 private:
  // One direction of an anchor set: errata tree plus the terminal labels of
  // all its tries concatenated in level order.
  struct Side {
    std::unique_ptr<ErrataTree> et;
    std::vector<int64_t> off;        // per trie, start in s
    std::vector<int64_t> level_end;  // labels in tries of level <= l
    std::vector<int32_t> s;
  };
  struct Join {
    Side fwd, rev;
    std::vector<RangeReport2D<int32_t>> rr;  // per forward budget
  };

  LongIndex() = default;

  void fill_side(Side& sd, const TextLcpIndex& tx, const std::vector<int32_t>& pos) {
    sd.et = std::make_unique<ErrataTree>(ErrataTree::build(tx, pos, k_));
    const ErrataTree& et = *sd.et;
    std::vector<int32_t> order(et.num_tries());
    for (int32_t i = 0; i < et.num_tries(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](int32_t a, int32_t b) { return et.trie(a).level < et.trie(b).level; });
    sd.off.assign(et.num_tries(), 0);
    sd.level_end.assign(k_ + 1, 0);
    for (int32_t id : order) {
      const ErrataTrie& t = et.trie(id);
      sd.off[id] = static_cast<int64_t>(sd.s.size());
      for (int32_t i = 0; i < t.num_terminals(); ++i) t.label_of(i, &sd.s);
      for (int l = t.level; l <= k_; ++l) sd.level_end[l] = static_cast<int64_t>(sd.s.size());
    }
  }

  void build_join(int t, const std::vector<int32_t>& anchors) {
    Join& j = join_[t];
    if (anchors.empty()) return;
    const int32_t n = tx_->size();
    fill_side(j.fwd, *tx_, anchors);
    std::vector<int32_t> rpos;
    for (int32_t a : anchors)
      if (a > 0) rpos.push_back(n - a);
    if (rpos.empty()) return;
    fill_side(j.rev, *rev_text_, rpos);
    // ys[a]: positions in the reverse label string that name anchor a.
    std::vector<std::vector<int32_t>> ys(n + 1);
    for (size_t y = 0; y < j.rev.s.size(); ++y) ys[n - j.rev.s[y]].push_back(static_cast<int32_t>(y));
    j.rr.resize(k_ + 1);
    for (int k1 = 0; k1 <= k_; ++k1) {
      std::vector<RangeReport2D<int32_t>::Point> pts;
      const int64_t xe = j.fwd.level_end[k1], ye = j.rev.level_end[k_ - k1];
      for (int64_t x = 0; x < xe; ++x) {
        const int32_t a = j.fwd.s[x];
        for (int32_t y : ys[a]) {
          if (y >= ye) break;
          pts.push_back({x, y, a});
        }
      }
      j.rr[k1] = RangeReport2D<int32_t>(std::move(pts));
    }
  }

  // Hits of q with at most `budget` mismatches as ranges of the side's s.
  std::vector<std::pair<int64_t, int64_t>> side_ranges(const Side& sd, const PatternContext& ctx, const PatStr& q,
                                                       int budget) const {
    ErrataResult res;
    ErrataTree::Collector c{sd.et.get(), &ctx, &res};
    sd.et->query_trie(ctx, 0, q, budget, c);
    std::vector<std::pair<int64_t, int64_t>> out;
    for (const ErrataHit& h : res.hits) {
      if (h.lo >= h.hi) continue;
      const ErrataTrie& t = sd.et->trie(h.trie);
      const int64_t o = sd.off[h.trie];
      if (t.sorted_only)
        out.push_back({o + h.lo, o + h.hi});
      else
        out.push_back({o + t.trie.label_begin(h.lo), o + t.trie.label_end(h.hi - 1)});
    }
    return out;
  }

  void anchored(int t, const PatternContext& ctx, const PatternContext& rctx, int32_t b, OccurrenceSet& out) const {
    const Join& j = join_[t];
    if (!j.fwd.et) return;
    const int32_t m = ctx.size();
    if (b == 0) {
      for (auto [x1, x2] : side_ranges(j.fwd, ctx, PatStr::suffix(0, m), k_))
        for (int64_t x = x1; x < x2; ++x) out.push_back(j.fwd.s[x]);
      return;
    }
    if (!j.rev.et) return;
    for (int k1 = 0; k1 <= k_; ++k1) {
      const auto fr = side_ranges(j.fwd, ctx, PatStr::suffix(b, m - b), k1);
      if (fr.empty()) continue;
      const auto rr = side_ranges(j.rev, rctx, PatStr::suffix(m - b, b), k_ - k1);
      for (auto [x1, x2] : fr)
        for (auto [y1, y2] : rr)
          j.rr[k1].query(x1, x2 - 1, y1, y2 - 1, [&](const auto& pt) { out.push_back(pt.payload - b); });
    }
  }

  PatternAnchors pattern_anchors(const PatternContext& ctx) const {
    PatternAnchors pa;
    const BytesView p = ctx.pattern();
    const int64_t m = static_cast<int64_t>(p.size());
    for (int64_t i = 0; i <= k_ && (i + 1) * gamma_ <= m; ++i) {
      const int64_t s = i * gamma_;
      if (ctx.ms_len(static_cast<int32_t>(s)) < gamma_) continue;
      const int64_t l = ctx.ms_pos(static_cast<int32_t>(s));
      const int64_t a = anchors_.sync.next_anchor[l];
      if (a - l <= gamma_ - 2 * tau_) pa.b1.push_back(static_cast<int32_t>(a - l + s));
      const int64_t per = smallest_period(p.substr(s, gamma_));
      if (3 * per > tau_) continue;
      for (int64_t x : misper(p, s, s + per, k_ + 1).all()) pa.b2.push_back(static_cast<int32_t>(x));
    }
    for (auto* v : {&pa.b1, &pa.b2}) {
      std::sort(v->begin(), v->end());
      v->erase(std::unique(v->begin(), v->end()), v->end());
    }
    return pa;
  }

  static uint64_t near_key(int32_t root, int c, int64_t t) {
    return static_cast<uint64_t>(root) << 32 | static_cast<uint64_t>(c) << 24 | static_cast<uint64_t>(t);
  }

  void build_near() {
    const Bytes& T = tx_->text();
    const int64_t n = tx_->size();
    std::unordered_map<uint64_t, std::vector<StabStruct<NearPayload>::Interval>> ivs;
    for (size_t ri = 0; ri < anchors_.runs.size(); ++ri) {
      const Run& run = anchors_.runs[ri];
      const int64_t x = run.start, y = run.end, p = run.period, d = x + run.lyndon_offset;
      require(p < (int64_t{1} << 24), "long index: period too large for residue keys");
      auto [it, fresh] = roots_.try_emplace(T.substr(d, p), static_cast<int32_t>(roots_.size()));
      const int32_t root = it->second;
      const Misper& mp = anchors_.run_misper[ri];
      std::vector<int64_t> L(mp.left.rbegin(), mp.left.rend()), R = mp.right;
      if (static_cast<int>(L.size()) <= k_) L.push_back(-1);
      if (static_cast<int>(R.size()) <= k_) R.push_back(n);
      for (int a = 0; a < static_cast<int>(L.size()); ++a) {
        const int64_t jlo = a == 0 ? x : L[a] + 1, jhi = a == 0 ? y : L[a - 1];
        for (int b = 0; b < static_cast<int>(R.size()) && a + b <= k_; ++b) {
          const int64_t rb1 = R[b];
          const int64_t rb = b == 0 ? std::numeric_limits<int64_t>::min() : R[b - 1];
          for (int64_t t = 0; t < p; ++t) {
            // Starts j in [jlo, jhi] with (d - j) mod p == t.
            const int64_t res = ((d - t) % p + p) % p;
            const int64_t alpha = jlo + ((res - jlo) % p + p) % p;
            const int64_t beta = jhi - ((jhi - res) % p + p) % p;
            if (alpha > beta) continue;
            const int64_t mlo = b == 0 ? 1 : std::max<int64_t>(1, rb - beta + 1);
            const int64_t mhi = rb1 - alpha;
            if (mlo > mhi || mhi < (k_ + 1) * gamma_) continue;
            ivs[near_key(root, a + b, t)].push_back({mlo, mhi, NearPayload{alpha, beta, rb, rb1, p}});
          }
        }
      }
    }
    for (auto& [key, v] : ivs) near_.emplace(key, StabStruct<NearPayload>(v));
  }

  void near_periodic(const PatternContext& ctx, OccurrenceSet& out) const {
    const BytesView P = ctx.pattern();
    const int64_t m = static_cast<int64_t>(P.size());
    for (int64_t i = 0; i <= k_ && (i + 1) * gamma_ <= m; ++i) {
      const int64_t s = i * gamma_;
      if (ctx.ms_len(static_cast<int32_t>(s)) < gamma_) continue;
      const int64_t per = smallest_period(P.substr(s, gamma_));
      if (3 * per > tau_) continue;
      const std::vector<int64_t> X = misper(P, s, s + per, k_ + 1).all();
      if (static_cast<int64_t>(X.size()) > k_) continue;
      const int64_t dp = s + minimal_rotation(P.substr(s, per));
      auto it = roots_.find(Bytes(P.substr(dp, per)));
      if (it == roots_.end()) continue;
      for (int c = 0; c + static_cast<int>(X.size()) <= k_; ++c) {
        auto st = near_.find(near_key(it->second, c, dp % per));
        if (st == near_.end()) continue;
        st->second.stab(m, [&](const NearPayload& np) {
          int64_t lo = np.alpha;
          if (np.rlo != std::numeric_limits<int64_t>::min()) lo = std::max(lo, np.rlo - m + 1);
          const int64_t hi = std::min(np.beta, np.rhi - m);
          lo += ((np.alpha - lo) % np.p + np.p) % np.p;
          for (int64_t j = lo; j <= hi; j += np.p) out.push_back(j);
        });
      }
    }
  }

  int64_t gamma_ = 0, tau_ = 0;
  int k_ = 0;
  std::unique_ptr<TextLcpIndex> tx_, rev_text_;
  std::unique_ptr<SuffixTree> st_, rst_;
  AnchorSets anchors_;
  Join join_[2];
  std::unordered_map<Bytes, int32_t> roots_;
  std::unordered_map<uint64_t, StabStruct<NearPayload>> near_;
};

}  // namespace kmix
