// Licensed under the Apache License, Version 2.0
#include <gtest/gtest.h>

#include <random>

#include "kmix/long_index.hpp"
#include "kmix/oracles.hpp"

using namespace kmix;

namespace {

Bytes random_text(std::mt19937_64& rng, size_t n, int sigma) {
  Bytes s(n, 'a');
  for (auto& c : s) c = static_cast<char>('a' + rng() % sigma);
  return s;
}

// Repetitions of a short unit with sparse random edits.
Bytes periodic_text(std::mt19937_64& rng, size_t n, int sigma, size_t unit, double edit_rate) {
  const Bytes u = random_text(rng, unit, sigma);
  Bytes s(n, 'a');
  for (size_t i = 0; i < n; ++i) s[i] = u[i % unit];
  std::uniform_real_distribution<double> coin(0, 1);
  for (auto& c : s)
    if (coin(rng) < edit_rate) c = static_cast<char>('a' + rng() % sigma);
  return s;
}

Bytes sample_pattern(std::mt19937_64& rng, BytesView t, size_t m, int sigma, int k) {
  Bytes p(t.substr(rng() % (t.size() - m + 1), m));
  const int subs = rng() % (k + 1);
  for (int i = 0; i < subs; ++i) p[rng() % m] = static_cast<char>('a' + rng() % sigma);
  return p;
}

OccurrenceSet brute(BytesView t, BytesView p, int k) {
  OccurrenceSet out;
  for (int64_t i : brute_kmismatch(t, p, k)) out.push_back(i);
  return out;
}

bool in_sorted(const std::vector<int32_t>& v, int64_t x) { return std::binary_search(v.begin(), v.end(), x); }

// Checks one query against the oracle, the classifier and the anchor sets.
void check_query(const LongIndex& ix, BytesView p, int64_t* max_mult) {
  const BytesView t = ix.text();
  const int k = ix.k();
  LongQueryCounters qc;
  const OccurrenceSet got = ix.query(p, &qc);
  const OccurrenceSet want = brute(t, p, k);
  ASSERT_EQ(got, want) << "text=" << t << " p=" << p;
  ASSERT_LE(qc.max_multiplicity, 64 * (k + 1) * (k + 1) * (k + 1));
  *max_mult = std::max(*max_mult, qc.max_multiplicity);
  const PatternAnchors pa = ix.pattern_anchors(p);
  ASSERT_LE(static_cast<int>(pa.b1.size()), k + 1);
  ASSERT_LE(static_cast<int>(pa.b2.size()), 2 * (k + 1) * (k + 1));
  const OccurrenceSet near = ix.query_near_periodic(p);
  for (int64_t j : want) {
    if (classify_nearly_periodic(t, p, j, ix.gamma(), ix.tau(), k)) {
      EXPECT_TRUE(std::binary_search(near.begin(), near.end(), j)) << "nearly periodic j=" << j << " p=" << p;
      continue;
    }
    bool covered = false;
    for (int32_t b : pa.b1) covered = covered || in_sorted(ix.anchors().a1, j + b);
    for (int32_t b : pa.b2) covered = covered || in_sorted(ix.anchors().a2, j + b);
    EXPECT_TRUE(covered) << "uncovered j=" << j << " p=" << p;
  }
}

}  // namespace

TEST(SyncSet, UnaryTextHasNoAnchors) {
  const SyncSet ss = build_sync_set(Bytes(20, 'a'), 3);
  EXPECT_TRUE(ss.positions.empty());
  for (int32_t x : ss.next_anchor) EXPECT_EQ(x, 20);
}

TEST(SyncSet, DistinctBytesAreDense) {
  Bytes t;
  for (int c = 0; c < 60; ++c) t.push_back(static_cast<char>(c + 1));
  const int64_t n = static_cast<int64_t>(t.size()), tau = 2;
  const SyncSet ss = build_sync_set(t, tau);
  for (int64_t i = 0; i <= n - 3 * tau + 1; ++i) EXPECT_LT(ss.next_anchor[i], i + tau) << i;
}

TEST(SyncSet, RandomTextsSatisfyBothConditions) {
  std::mt19937_64 rng(31);
  double ratio_sum = 0;
  int counted = 0;
  for (int round = 0; round < 1000; ++round) {
    const int64_t tau = std::array<int64_t, 3>{2, 3, 5}[round % 3];
    const size_t n = 2 * tau + rng() % (500 - 2 * tau);
    const Bytes t = round % 4 == 3 ? periodic_text(rng, n, 2, 1 + rng() % 2, 0.02) : random_text(rng, n, 2);
    const SyncSet ss = build_sync_set(t, tau);
    ASSERT_TRUE(sync_consistent_naive(t, tau, ss.positions)) << t << " tau=" << tau;
    ASSERT_TRUE(sync_dense_naive(t, tau, ss.positions)) << t << " tau=" << tau;
    ratio_sum += static_cast<double>(ss.positions.size()) * tau / n;
    ++counted;
  }
  EXPECT_LT(ratio_sum / counted, 3.0);
}

TEST(SyncSet, RejectsLargeTau) {
  EXPECT_THROW(build_sync_set("abcab", 3), Error);
  EXPECT_THROW(build_sync_set("abcab", 0), Error);
}

TEST(Anchors, UnaryAndMisperiodExamples) {
  {
    const Bytes t(200, 'a');
    TextLcpIndex f(t), r(reversed(t));
    const AnchorSets as = build_anchors(f, r, 20, 1);
    EXPECT_TRUE(as.a1.empty());
    EXPECT_TRUE(as.a2.empty());
  }
  Bytes t;
  for (int i = 0; i < 50; ++i) t += "ab";
  const int32_t c = static_cast<int32_t>(t.size());
  t += "c";
  for (int i = 0; i < 50; ++i) t += "ab";
  TextLcpIndex f(t), r(reversed(t));
  const AnchorSets as = build_anchors(f, r, 18, 1);
  EXPECT_TRUE(in_sorted(as.a2, c));
  EXPECT_THROW(build_anchors(f, r, 1, 1), Error);
  EXPECT_THROW(build_anchors(f, r, 200, 1), Error);
}

TEST(Anchors, PatternAnchorsOnForeignAndVerbatimPatterns) {
  std::mt19937_64 rng(4);
  const Bytes t = random_text(rng, 600, 4);
  auto ix = LongIndex::build(t, 8, 1);
  const PatternAnchors none = ix->pattern_anchors(Bytes(20, 'z'));
  EXPECT_TRUE(none.b1.empty());
  EXPECT_TRUE(none.b2.empty());
  const PatternAnchors some = ix->pattern_anchors(t.substr(100, 40));
  EXPECT_GE(some.b1.size(), 1u);
  EXPECT_THROW(ix->pattern_anchors("abc"), Error);
  EXPECT_THROW(ix->query("abc"), Error);
}

TEST(Long, RepeatedUnitExample) {
  Bytes t;
  for (int i = 0; i < 512; ++i) t += "ab";
  auto ix = LongIndex::build(t, 24, 1);
  Bytes p;
  for (int i = 0; i < 24; ++i) p += "ab";
  OccurrenceSet want;
  for (int64_t j = 0; j + 48 <= 1024; j += 2) want.push_back(j);
  EXPECT_EQ(ix->query(p), want);
  EXPECT_EQ(ix->query_near_periodic(p), want);
  p[5] = 'a';
  EXPECT_EQ(ix->query(p), brute(t, p, 1));
}

TEST(Long, EqualsBruteOnRandomTexts) {
  std::mt19937_64 rng(77);
  for (int sigma : {2, 4}) {
    for (int k : {1, 2}) {
      const Bytes t = random_text(rng, 2000, sigma);
      const int64_t gamma = 8;
      auto ix = LongIndex::build(t, gamma, k);
      int64_t mult = 0;
      for (int qi = 0; qi < 400; ++qi) {
        const size_t m = (k + 1) * gamma + rng() % 40;
        const Bytes p = qi < 300 ? sample_pattern(rng, t, m, sigma, k) : random_text(rng, m, sigma);
        check_query(*ix, p, &mult);
        if (HasFatalFailure()) return;
      }
      RecordProperty("max_multiplicity_s" + std::to_string(sigma) + "_k" + std::to_string(k), mult);
    }
  }
}

TEST(Long, EqualsBruteOnNearlyPeriodicTexts) {
  std::mt19937_64 rng(13);
  for (int round = 0; round < 12; ++round) {
    const int k = 1 + round % 2;
    const int64_t gamma = round % 3 == 0 ? 24 : 30;
    const int sigma = 2 + round % 2;
    const size_t unit = 1 + rng() % (gamma / 10);
    const Bytes t = periodic_text(rng, 1200, sigma, unit, 0.01 + 0.01 * (round % 3));
    auto ix = LongIndex::build(t, gamma, k);
    int64_t mult = 0;
    int near_hits = 0;
    for (int qi = 0; qi < 150; ++qi) {
      const size_t m = (k + 1) * gamma + rng() % 60;
      const Bytes p = sample_pattern(rng, t, m, sigma, k);
      check_query(*ix, p, &mult);
      if (HasFatalFailure()) return;
      near_hits += !ix->query_near_periodic(p).empty();
    }
    EXPECT_GT(near_hits, 0);
  }
}

TEST(Long, StatsAndBuildErrors) {
  std::mt19937_64 rng(9);
  const Bytes t = random_text(rng, 4096, 4);
  auto ix = LongIndex::build(t, 32, 1);
  const LongStats s = ix->stats();
  EXPECT_EQ(s.tau, 10);
  EXPECT_GT(s.a1, 0);
  EXPECT_LT(static_cast<double>(s.a1) / (4096.0 / 32), 16.0);
  EXPECT_EQ(s.join_points.size(), 2u);
  EXPECT_THROW(LongIndex::build(t, 1, 1), Error);
  EXPECT_THROW(LongIndex::build(t, 4096, 1), Error);
  EXPECT_THROW(LongIndex::build("", 2, 1), Error);
}

TEST(Classifier, UnaryAndAperiodic) {
  const Bytes t(100, 'a');
  const Bytes p(32, 'a');
  for (int64_t j = 0; j + 32 <= 100; ++j) EXPECT_TRUE(classify_nearly_periodic(t, p, j, 16, 5, 1));
  const Bytes u = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ";
  EXPECT_FALSE(classify_nearly_periodic(u, u.substr(0, 32), 0, 16, 5, 1));
}

TEST(Classifier, RejectsFarOccurrence) {
  EXPECT_THROW(classify_nearly_periodic(Bytes(40, 'a'), Bytes(32, 'b'), 0, 16, 5, 1), Error);
}
