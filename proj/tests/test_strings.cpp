// Licensed under the Apache License, Version 2.0
#include <gtest/gtest.h>

#include <random>
#include <set>
#include <tuple>

#include "kmix/strings.hpp"
#include "kmix/text_lcp.hpp"

using namespace kmix;

namespace {

Bytes random_text(std::mt19937_64& rng, size_t n, int sigma) {
  Bytes s(n, 'a');
  for (auto& c : s) c = static_cast<char>('a' + rng() % sigma);
  return s;
}

int64_t naive_period(BytesView u) {
  for (size_t p = 1; p <= u.size(); ++p) {
    bool ok = true;
    for (size_t i = 0; i + p < u.size() && ok; ++i) ok = u[i] == u[i + p];
    if (ok) return static_cast<int64_t>(p);
  }
  return static_cast<int64_t>(u.size());
}

std::vector<Run> naive_runs(BytesView t) {
  const int64_t n = static_cast<int64_t>(t.size());
  std::vector<Run> out;
  for (int64_t i = 0; i < n; ++i)
    for (int64_t j = i + 1; j < n; ++j) {
      BytesView u = t.substr(i, j - i + 1);
      int64_t p = naive_period(u);
      if (2 * p > j - i + 1) continue;
      bool left = i > 0 && t[i - 1] == t[i - 1 + p];
      bool right = j + 1 < n && t[j + 1] == t[j + 1 - p];
      if (left || right) continue;
      int64_t best = 0;
      for (int64_t r = 1; r < p; ++r)
        if (u.substr(r, p) < u.substr(best, p)) best = r;
      out.push_back({i, j, p, best});
    }
  std::sort(out.begin(), out.end(), [](const Run& a, const Run& b) {
    return std::tie(a.start, a.period) < std::tie(b.start, b.period);
  });
  return out;
}

}  // namespace

TEST(Hamming, Examples) {
  EXPECT_EQ(hamming("abc", "abc"), 0);
  EXPECT_EQ(hamming("aba", "ana"), 1);
  EXPECT_EQ(hamming("ban", "ana"), 3);
  EXPECT_THROW(hamming("ab", "abc"), Error);
}

TEST(SmallestPeriod, Examples) {
  EXPECT_EQ(smallest_period("aaaa"), 1);
  EXPECT_EQ(smallest_period("abaab"), 3);
  EXPECT_EQ(smallest_period("abcd"), 4);
  EXPECT_THROW(smallest_period(""), Error);
}

TEST(SmallestPeriod, AllBinaryUpTo12MatchScan) {
  for (int len = 1; len <= 12; ++len)
    for (int mask = 0; mask < (1 << len); ++mask) {
      Bytes u(len, 'a');
      for (int i = 0; i < len; ++i)
        if (mask >> i & 1) u[i] = 'b';
      ASSERT_EQ(smallest_period(u), naive_period(u)) << u;
    }
}

TEST(SmallestPeriod, RandomLongBinary) {
  std::mt19937_64 rng(3);
  for (int it = 0; it < 2000; ++it) {
    Bytes u = random_text(rng, 1 + rng() % 64, 2);
    int64_t p = smallest_period(u);
    ASSERT_EQ(p, naive_period(u));
    for (size_t i = 0; i + p < u.size(); ++i) ASSERT_EQ(u[i], u[i + p]);
  }
}

TEST(LyndonRoot, Examples) {
  EXPECT_EQ(lyndon_root("ababab", 0, 2), 0);
  EXPECT_EQ(lyndon_root("bababa", 0, 2), 1);
  EXPECT_EQ(lyndon_root("aabaab", 0, 3), 0);
  EXPECT_THROW(lyndon_root("abab", 0, 4), Error);
}

TEST(Runs, Examples) {
  EXPECT_EQ(compute_runs("aaaa"), (std::vector<kmix::Run>{{0, 3, 1, 0}}));
  EXPECT_EQ(compute_runs("aabaab"), (std::vector<kmix::Run>{{0, 1, 1, 0}, {0, 5, 3, 0}, {3, 4, 1, 0}}));
  EXPECT_TRUE(compute_runs("abcdef").empty());
}

TEST(Runs, ExhaustiveBinaryUpTo16) {
  for (int len = 1; len <= 16; ++len)
    for (int mask = 0; mask < (1 << len); ++mask) {
      Bytes u(len, 'a');
      for (int i = 0; i < len; ++i)
        if (mask >> i & 1) u[i] = 'b';
      ASSERT_EQ(compute_runs(u), naive_runs(u)) << u;
    }
}

TEST(Runs, RandomUpTo200) {
  std::mt19937_64 rng(11);
  for (int it = 0; it < 1000; ++it) {
    Bytes u = random_text(rng, 1 + rng() % 200, 2 + rng() % 3);
    ASSERT_EQ(compute_runs(u), naive_runs(u)) << u;
  }
}

TEST(TauRuns, Examples) {
  EXPECT_TRUE(tau_runs(compute_runs("aaaa"), 1).empty());
  EXPECT_EQ(tau_runs(compute_runs(Bytes(20, 'a')), 3), (std::vector<kmix::Run>{{0, 19, 1, 0}}));
  EXPECT_TRUE(tau_runs({}, 5).empty());
}

TEST(Misper, Examples) {
  auto m = misper("abababcbab", 2, 4, 2);
  EXPECT_TRUE(m.left.empty());
  EXPECT_EQ(m.right, (std::vector<int64_t>{6}));
  m = misper("aaaa", 0, 1, 3);
  EXPECT_TRUE(m.left.empty() && m.right.empty());
  m = misper("baab", 1, 2, 1);
  EXPECT_EQ(m.left, (std::vector<int64_t>{0}));
  EXPECT_EQ(m.right, (std::vector<int64_t>{3}));
  EXPECT_THROW(misper("abc", 2, 2, 1), Error);
}

TEST(Misper, FullLimitEqualsDefinitionAndLceVariant) {
  std::mt19937_64 rng(5);
  for (int it = 0; it < 1500; ++it) {
    Bytes s = random_text(rng, 2 + rng() % 80, 1 + rng() % 3);
    if (rng() % 3 == 0) {
      // Mostly periodic text with a few defects.
      int64_t p = 1 + rng() % 4;
      for (size_t a = p; a < s.size(); ++a) s[a] = s[a - p];
      for (int d = 0; d < 3; ++d) s[rng() % s.size()] = 'x';
    }
    const int64_t n = static_cast<int64_t>(s.size());
    int64_t i = rng() % n, j = i + 1 + rng() % std::min<int64_t>(5, n - i);
    std::vector<int64_t> left, right;
    for (int64_t a = 0; a < n; ++a) {
      if (a >= i && a < j) continue;
      int64_t b = i + (((a - i) % (j - i)) + (j - i)) % (j - i);
      if (s[a] != s[b]) (a < i ? left : right).push_back(a);
    }
    auto m = misper(s, i, j, n);
    ASSERT_EQ(m.left, left);
    ASSERT_EQ(m.right, right);
    TextLcpIndex fwd{s}, rev{reversed(s)};
    int64_t lim = 1 + rng() % 4;
    auto a = misper(s, i, j, lim), b = misper_lce(fwd, rev, i, j, lim);
    ASSERT_EQ(a.left, b.left) << s << " " << i << " " << j;
    ASSERT_EQ(a.right, b.right) << s << " " << i << " " << j;
  }
}

TEST(ModifiedFragment, MaterializeAndCharAt) {
  ModifiedFragment mf{0, 6, {{0, 'd'}}};
  EXPECT_EQ(materialize(mf, "banana"), "danana");
  EXPECT_EQ(materialize(ModifiedFragment{1, 4, {}}, "banana"), "ana");
  EXPECT_EQ(mf.char_at("banana", 1), 'a');
  EXPECT_EQ(mf.char_at("banana", 0), 'd');
  EXPECT_THROW(mf.char_at("banana", 6), Error);
  EXPECT_THROW((ModifiedFragment{0, 6, {{0, 'b'}}}.validate("banana", 2)), Error);
}

TEST(ModifiedFragment, DiffersAtExactlySubstitutedPositions) {
  std::mt19937_64 rng(9);
  Bytes t = random_text(rng, 100, 4);
  for (int it = 0; it < 500; ++it) {
    int64_t s = rng() % 100, e = s + rng() % (101 - s);
    ModifiedFragment mf{s, e, {}};
    for (int64_t o = 0; o < e - s; ++o)
      if (rng() % 7 == 0) mf.subs.push_back({o, static_cast<unsigned char>(t[s + o] == 'z' ? 'y' : 'z')});
    mf.validate(t, 100);
    Bytes m = materialize(mf, t);
    int64_t d = hamming(m, BytesView(t).substr(s, e - s));
    ASSERT_EQ(d, static_cast<int64_t>(mf.subs.size()));
  }
}

TEST(TextLcp, SuffixArrayAndLce) {
  std::mt19937_64 rng(1);
  for (int it = 0; it < 300; ++it) {
    Bytes t = random_text(rng, 1 + rng() % 300, 1 + rng() % 4);
    TextLcpIndex idx{t};
    const int32_t n = idx.size();
    for (int32_t r = 1; r < n; ++r)
      ASSERT_LT(BytesView(t).substr(idx.sa()[r - 1]), BytesView(t).substr(idx.sa()[r]));
    for (int q = 0; q < 200; ++q) {
      int32_t i = rng() % n, j = rng() % n;
      int32_t l = 0;
      while (i + l < n && j + l < n && t[i + l] == t[j + l]) ++l;
      ASSERT_EQ(idx.lce(i, j), l);
      ASSERT_EQ(idx.lce(i, j), idx.lce(j, i));
    }
    ASSERT_EQ(idx.lce(0, 0), n);
  }
}
