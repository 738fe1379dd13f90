// Licensed under the Apache License, Version 2.0
#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>

#include "kmix/oracles.hpp"
#include "kmix/short_index.hpp"

using namespace kmix;

namespace {

Bytes random_text(std::mt19937_64& rng, size_t n, int sigma) {
  Bytes s(n, 'a');
  for (auto& c : s) c = static_cast<char>('a' + rng() % sigma);
  return s;
}

Bytes sample_pattern(std::mt19937_64& rng, BytesView t, int sigma, int k, size_t maxm) {
  const size_t m = 1 + rng() % std::min(t.size(), maxm);
  if (rng() % 4 == 0) return random_text(rng, m, sigma);
  Bytes p(t.substr(rng() % (t.size() - m + 1), m));
  const int subs = rng() % (k + 2);
  for (int i = 0; i < subs; ++i) p[rng() % m] = static_cast<char>('a' + rng() % sigma);
  return p;
}

OccurrenceSet brute(BytesView t, BytesView p, int k) {
  OccurrenceSet out;
  for (int64_t i : brute_kmismatch(t, p, k)) out.push_back(i);
  return out;
}

std::string materialize_mod(BytesView t, const ModStr& s) {
  std::string r;
  for (int32_t o = 0; o < s.len; ++o) r.push_back(static_cast<char>(mod_at(t, s, o)));
  return r;
}

}  // namespace

TEST(FSequence, Examples) {
  EXPECT_EQ(f_pow2(12), 4);
  EXPECT_EQ(f_pow2(8), 8);
  EXPECT_EQ(f_pow2(13), 1);
  EXPECT_EQ(f_sequence(13), (std::vector<int64_t>{13, 12, 8}));
  EXPECT_EQ(f_sequence(6), (std::vector<int64_t>{6, 4}));
  EXPECT_THROW(f_pow2(0), Error);
  EXPECT_THROW(f_sequence(0), Error);
}

TEST(FSequence, TilesPrefixes) {
  for (int64_t j = 1; j <= 4096; ++j) {
    const auto fs = f_sequence(j);
    EXPECT_LE(static_cast<int>(fs.size()), floor_log2(j) + 1);
    // Intervals [t - f(t), t) listed right to left must chain down to 0.
    int64_t expect_right = j;
    for (int64_t t : fs) {
      EXPECT_EQ(t, expect_right);
      expect_right = t - f_pow2(t);
    }
    EXPECT_EQ(expect_right, 0);
  }
}

TEST(ShortIndex, RejectsBadParameters) {
  EXPECT_THROW(ShortIndex::build("banana", {4, 2, 2}), Error);
  EXPECT_THROW(ShortIndex::build("banana", {4, 0, 2}), Error);
  EXPECT_THROW(ShortIndex::build("", {4, 1, 2}), Error);
  ShortParams big{64, 2, 3};
  big.max_terminals = 1000;
  EXPECT_THROW(ShortIndex::build(Bytes(500, 'a') + "b", big), Error);
  auto ix = ShortIndex::build("banana", {4, 1, 2});
  EXPECT_THROW(ix->query("banana"), Error);
  EXPECT_THROW(ix->query("ana", 3), Error);
  EXPECT_THROW(ix->query_basic("ana"), Error);
}

TEST(ShortIndex, UnaryTextHasOnlySuffixTree) {
  auto ix = ShortIndex::build(Bytes(20, 'a'), {8, 1, 2});
  EXPECT_EQ(ix->stats().base_terminals, 20);
  EXPECT_EQ(ix->query("aaa"), brute(Bytes(20, 'a'), "aaa", 2));
  EXPECT_EQ(ix->query("aba"), brute(Bytes(20, 'a'), "aba", 2));
  EXPECT_EQ(ix->query("bbb"), OccurrenceSet{});
}

TEST(ShortIndex, TerminalCountMatchesEnumeration) {
  Bytes text;
  for (int i = 0; i < 8; ++i) text += "ab";
  ShortParams prm{4, 1, 2};
  prm.keep_basic = true;
  auto ix = ShortIndex::build(text, prm);
  int64_t expect = 0;
  const int32_t n = static_cast<int32_t>(text.size());
  for (int32_t s = 0; s < n; ++s) expect += 1 + std::min(4, n - s);
  EXPECT_EQ(ix->stats().base_terminals, expect);
}

TEST(ShortIndex, EveryModifiedSuffixInExactlyOneBaseTrie) {
  std::mt19937_64 rng(4);
  const Bytes text = random_text(rng, 40, 3);
  ShortParams prm{6, 2, 3};
  prm.keep_basic = true;
  auto ix = ShortIndex::build(text, prm);
  // Oracle: enumerate modified suffixes as strings directly.
  std::multiset<std::string> want, got;
  const int32_t n = static_cast<int32_t>(text.size());
  const std::string alpha = "abc";
  for (int32_t s = 0; s < n; ++s) {
    const std::string suf = text.substr(s);
    const int32_t lim = std::min(6, n - s);
    want.insert(suf);
    for (int32_t a = 0; a < lim; ++a)
      for (char ca : alpha) {
        if (ca == suf[a]) continue;
        std::string s1 = suf;
        s1[a] = ca;
        want.insert(s1);
        for (int32_t b = a + 1; b < lim; ++b)
          for (char cb : alpha) {
            if (cb == suf[b]) continue;
            std::string s2 = s1;
            s2[b] = cb;
            want.insert(s2);
          }
      }
  }
  std::map<std::string, int> groups_of;
  for (int kappa = 0; kappa <= 2; ++kappa)
    for (int32_t j = 0; j < 6; ++j)
      for (const ModStr& s : ix->base_list(kappa, j)) {
        EXPECT_EQ(s.nsub, kappa);
        if (kappa > 0) EXPECT_EQ(s.off[kappa - 1], j);
        got.insert(materialize_mod(text, s));
      }
  EXPECT_EQ(got, want);
  // Grouped membership: at most floor(log mu) + 1 groups per string.
  for (int kappa = 0; kappa <= 2; ++kappa)
    for (int32_t t = 1; t <= 6; ++t)
      for (const ModStr& s : ix->grouped_materialized(kappa, t)) ++groups_of[materialize_mod(text, s)];
  for (auto& [s, c] : groups_of) EXPECT_LE(c, floor_log2(6) + 1);
}

TEST(ShortIndex, RetrievalEqualsMaterializedGroups) {
  std::mt19937_64 rng(17);
  const Bytes text = random_text(rng, 256, 4);
  ShortParams prm{16, 1, 2};
  prm.keep_basic = true;
  auto ix = ShortIndex::build(text, prm);
  const TextLcpIndex& tx = ix->text_index();
  for (int kappa = 0; kappa <= 1; ++kappa)
    for (int32_t t = 1; t <= 16; ++t) {
      const auto g = ix->grouped_materialized(kappa, t);
      ASSERT_EQ(static_cast<int32_t>(g.size()), ix->group_size(kappa, t));
      for (int32_t i = 0; i < static_cast<int32_t>(g.size()); ++i) {
        const ModStr r = ix->retrieve(kappa, t, i);
        ASSERT_EQ(compare_tt(tx, r, 0, g[i], 0), 0);
        ASSERT_EQ(r.start, g[i].start);
        if (i > 0) ASSERT_LT(compare_tt(tx, ix->retrieve(kappa, t, i - 1), 0, r, 0), 0);
      }
      if (!g.empty() && g.size() <= 2) EXPECT_EQ(ix->group(kappa, t).sampled.sampled(), nullptr);
    }
  // Unmodified strings use the p = -1 triad and map into the list directly.
  const auto& g0 = ix->group(0, 1);
  for (const auto& tr : g0.table) EXPECT_EQ(tr.p, -1);
}

TEST(ShortIndex, TerminalRangeEqualsLinearScan) {
  std::mt19937_64 rng(23);
  const Bytes text = random_text(rng, 200, 3);
  ShortParams prm{16, 1, 2};
  prm.keep_basic = true;
  auto ix = ShortIndex::build(text, prm);
  TextLcpIndex tx(text);
  SuffixTree st(tx);
  for (int qi = 0; qi < 300; ++qi) {
    const Bytes p = sample_pattern(rng, text, 3, 1, 16);
    PatternContext ctx(st, p);
    PatStr q = PatStr::suffix(0, static_cast<int32_t>(p.size()));
    if (rng() % 2) q = pat_set(p, q, rng() % q.len, 'a' + rng() % 3);
    const int kappa = rng() % 2;
    const int32_t t = 1 + rng() % 16;
    const auto g = ix->grouped_materialized(kappa, t);
    int32_t lo = -1, hi = -1;
    for (int32_t i = 0; i < static_cast<int32_t>(g.size()); ++i)
      if (prefix_compare(ctx, g[i], q) == 0) {
        if (lo < 0) lo = i;
        hi = i + 1;
      }
    auto [a, b] = ix->terminal_range(kappa, t, ctx, q);
    if (lo < 0) {
      EXPECT_EQ(a, b);
    } else {
      EXPECT_EQ(a, lo);
      EXPECT_EQ(b, hi);
    }
  }
  // Empty pattern: everything.
  PatternContext ctx(st, "");
  auto [a, b] = ix->terminal_range(1, 8, ctx, PatStr::suffix(0, 0));
  EXPECT_EQ(a, 0);
  EXPECT_EQ(b, ix->group_size(1, 8));
}

TEST(ShortIndex, BananaAndEdgeCases) {
  ShortParams prm{4, 1, 2};
  prm.keep_basic = true;
  auto ix = ShortIndex::build("banana", prm);
  EXPECT_EQ(ix->query("ana"), brute("banana", "ana", 2));
  EXPECT_EQ(ix->query_basic("ana"), brute("banana", "ana", 2));
  EXPECT_EQ(ix->query("ana", 0), (OccurrenceSet{1, 3}));
  // A pattern byte absent from the text always mismatches.
  for (const char* p : {"bzn", "zzn", "az", "zz", "nzna"}) {
    EXPECT_EQ(ix->query(p), brute("banana", p, 2)) << p;
    EXPECT_EQ(ix->query_basic(p), brute("banana", p, 2)) << p;
    EXPECT_EQ(ix->query(p, 1), brute("banana", p, 1)) << p;
  }
  EXPECT_EQ(ix->query("a"), (OccurrenceSet{0, 1, 2, 3, 4, 5}));
}

TEST(ShortIndex, GroupedEqualsBasicEqualsBrute) {
  std::mt19937_64 rng(31);
  for (int round = 0; round < 8; ++round) {
    const int k = 2 + round % 2;
    const int h = 1 + (round / 2) % (k - 1);
    const int sigma = 2 + round % 3;
    const int32_t mu = round % 2 ? 12 : 7;
    const Bytes text = random_text(rng, h == 2 ? 80 : 150, sigma);
    ShortParams prm{mu, h, k};
    prm.keep_basic = true;
    auto ix = ShortIndex::build(text, prm);
    for (int qi = 0; qi < 80; ++qi) {
      const Bytes p = sample_pattern(rng, text, sigma + 1, k, mu);
      for (int kk = 0; kk <= k; ++kk) {
        ShortQueryCounters qa, qb;
        const OccurrenceSet want = brute(text, p, kk);
        ASSERT_EQ(ix->query(p, kk, &qa), want) << "text=" << text << " p=" << p << " k=" << kk << " h=" << h;
        ASSERT_EQ(ix->query_basic(p, kk, &qb), want) << "text=" << text << " p=" << p << " k=" << kk;
        EXPECT_LE(qa.max_multiplicity, 1);
        EXPECT_LE(qb.max_multiplicity, 1);
      }
    }
  }
}

TEST(ShortIndex, MediumRandomEqualsBrute) {
  std::mt19937_64 rng(2000);
  const Bytes text = random_text(rng, 2000, 4);
  auto ix = ShortIndex::build(text, {32, 1, 2});
  for (int qi = 0; qi < 500; ++qi) {
    const Bytes p = sample_pattern(rng, text, 4, 2, 32);
    ShortQueryCounters qc;
    ASSERT_EQ(ix->query(p, &qc), brute(text, p, 2)) << "p=" << p;
    EXPECT_LE(qc.max_multiplicity, 1);
    EXPECT_EQ(qc.reported, brute(text, p, 2).size());
  }
}
