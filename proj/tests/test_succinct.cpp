// Licensed under the Apache License, Version 2.0
#include <gtest/gtest.h>

#include <random>

#include "kmix/succinct.hpp"

using namespace kmix;

TEST(IncreasingSeq, Examples) {
  IncreasingSeq s({2, 5, 9}, 10);
  EXPECT_EQ(s.rank(5), 2);
  EXPECT_EQ(s.select(3), 9);
  EXPECT_FALSE(s.rank(4).has_value());
  EXPECT_THROW(s.select(4), Error);
  EXPECT_THROW(IncreasingSeq({3, 3}, 10), Error);
  std::vector<int32_t> id(50);
  for (int i = 0; i < 50; ++i) id[i] = i + 1;
  IncreasingSeq ident(id, 50);
  for (int x = 1; x <= 50; ++x) EXPECT_EQ(ident.rank(x), x);
}

TEST(IncreasingSeq, RandomEqualsDefinition) {
  std::mt19937_64 rng(2);
  for (int it = 0; it < 200; ++it) {
    int32_t r = 1 + rng() % 4096;
    std::vector<int32_t> v;
    double dens = (rng() % 100) / 100.0;
    for (int32_t x = 1; x <= r && v.size() < 1000; ++x)
      if ((rng() % 1000) / 1000.0 < dens) v.push_back(x);
    IncreasingSeq s(v, r);
    for (int32_t x = 0; x <= r + 1; ++x) {
      auto it = std::lower_bound(v.begin(), v.end(), x);
      auto rk = s.rank(x);
      if (it != v.end() && *it == x)
        ASSERT_EQ(rk, (it - v.begin()) + 1);
      else
        ASSERT_FALSE(rk.has_value());
    }
    for (size_t i = 0; i < v.size(); ++i) ASSERT_EQ(s.select(i + 1), v[i]);
  }
}

TEST(IncreasingSeqCollection, EmptyAndFull) {
  std::vector<int32_t> full(16);
  for (int i = 0; i < 16; ++i) full[i] = i + 1;
  IncreasingSeqCollection c({{}, full}, 16);
  EXPECT_EQ(c[0].size(), 0);
  EXPECT_FALSE(c[0].rank(3).has_value());
  EXPECT_EQ(c[1].rank(7), 7);
  EXPECT_GT(c.encoded_bits(), 0u);
  EXPECT_GT(c.jensen_bound_bits(), 0.0);
}

TEST(BitVecRS, Examples) {
  BitVecRS b({false, true, false, false, true});
  EXPECT_EQ(b.rank1(5), 2);
  EXPECT_EQ(b.select1(2), 5);
  EXPECT_EQ(b.select0(3), 4);
  BitVecRS z(std::vector<bool>(10, false));
  EXPECT_THROW(z.select1(1), Error);
}

TEST(BitVecRS, RandomEqualsScan) {
  std::mt19937_64 rng(4);
  for (int it = 0; it < 40; ++it) {
    size_t n = 1 + rng() % 4096;
    std::vector<bool> bits(n);
    for (size_t i = 0; i < n; ++i) bits[i] = rng() % (1 + it % 5) == 0;
    BitVecRS b(bits);
    int64_t c[2] = {0, 0};
    for (size_t x = 1; x <= n; ++x) {
      ++c[bits[x - 1]];
      ASSERT_EQ(b.rank1(x), c[1]);
      ASSERT_EQ(b.rank0(x), c[0]);
      ASSERT_EQ(b.select(bits[x - 1], c[bits[x - 1]]), static_cast<int64_t>(x));
    }
  }
}

TEST(RangeReport2D, RandomEqualsNaive) {
  std::mt19937_64 rng(6);
  std::vector<RangeReport2D<int>::Point> pts;
  for (int i = 0; i < 2000; ++i) pts.push_back({static_cast<int64_t>(rng() % 500), static_cast<int64_t>(rng() % 500), i});
  RangeReport2D<int> rr(pts);
  for (int q = 0; q < 2000; ++q) {
    int64_t x1 = rng() % 520 - 10, x2 = rng() % 520 - 10, y1 = rng() % 520 - 10, y2 = rng() % 520 - 10;
    auto got = rr.query(x1, x2, y1, y2);
    std::vector<int> want;
    for (auto& p : pts)
      if (x1 <= p.x && p.x <= x2 && y1 <= p.y && p.y <= y2) want.push_back(p.payload);
    std::sort(got.begin(), got.end());
    ASSERT_EQ(got, want);
  }
  EXPECT_TRUE(RangeReport2D<int>().query(0, 10, 0, 10).empty());
}

TEST(StabStruct, Examples) {
  StabStruct<int> s({{0, 9, 1}, {2, 5, 2}});
  auto r = s.stab(3);
  std::sort(r.begin(), r.end());
  EXPECT_EQ(r, (std::vector<int>{1, 2}));
  EXPECT_TRUE(s.stab(10).empty());
}
