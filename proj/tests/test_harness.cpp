// Licensed under the Apache License, Version 2.0
#include <gtest/gtest.h>

#include <random>

#include "kmix/kmix.hpp"

using namespace kmix;

namespace {

Bytes random_text(std::mt19937_64& rng, size_t n, int sigma) {
  Bytes s(n, 'a');
  for (auto& c : s) c = static_cast<char>('a' + rng() % sigma);
  return s;
}

}  // namespace

TEST(Oracles, BruteExamples) {
  EXPECT_EQ(brute_kmismatch("banana", "aba", 1), (OccurrenceSet{1, 3}));
  EXPECT_EQ(brute_kmismatch("banana", "xyz", 3), (OccurrenceSet{0, 1, 2, 3}));
  EXPECT_EQ(brute_kmismatch("ban", "bana", 4), OccurrenceSet{});
  EXPECT_EQ(brute_wildcard("banana", "b?n"), (OccurrenceSet{0}));
  EXPECT_EQ(brute_wildcard("banana", "???"), (OccurrenceSet{0, 1, 2, 3}));
  EXPECT_EQ(brute_wildcard("banana", ""), (OccurrenceSet{0, 1, 2, 3, 4, 5, 6}));
}

TEST(AutoParams, Examples) {
  const AutoParams a = auto_params(int64_t{1} << 20, 2, 4);
  EXPECT_FALSE(a.compact_only);
  EXPECT_EQ(a.mu, 89);
  EXPECT_EQ(a.h, 1);
  EXPECT_EQ(a.gamma, 29);
  EXPECT_TRUE(auto_params(1000, 1, 4).compact_only);
  const AutoParams tiny = auto_params(2, 2, 2);
  EXPECT_EQ(tiny.gamma, 2);
  EXPECT_LE(tiny.mu, 2);
  const AutoParams odd = auto_params(int64_t{1} << 20, 3, 4);
  EXPECT_EQ(odd.h, 1);
  // 20^(1.5 - 0.1)
  EXPECT_EQ(odd.mu, 66);
  EXPECT_EQ(odd.gamma, 16);
}

TEST(Index, EveryKindEqualsBrute) {
  std::mt19937_64 rng(21);
  const Bytes text = random_text(rng, 400, 3);
  for (IndexKind kind : {IndexKind::kErrata, IndexKind::kCompact, IndexKind::kShort, IndexKind::kLong,
                         IndexKind::kAuto}) {
    IndexParams prm;
    prm.k = 2;
    prm.mu = 12;
    prm.gamma = 6;
    auto ix = Index::build(text, kind, prm);
    for (int qi = 0; qi < 60; ++qi) {
      size_t m = 1 + rng() % 40;
      if (kind == IndexKind::kShort) m = 1 + rng() % 12;
      if (kind == IndexKind::kLong) m = 18 + rng() % 30;
      Bytes p(text.substr(rng() % (text.size() - m + 1), m));
      p[rng() % m] = static_cast<char>('a' + rng() % 3);
      EXPECT_EQ(ix->query(p), brute_kmismatch(text, p, 2)) << kind_name(kind) << " p=" << p;
    }
  }
}

TEST(Index, AutoRouting) {
  std::mt19937_64 rng(2);
  IndexParams prm;
  prm.k = 2;
  prm.mu = 10;
  prm.gamma = 8;
  auto ix = Index::build(random_text(rng, 300, 4), IndexKind::kAuto, prm);
  EXPECT_EQ(ix->route(10), IndexKind::kShort);
  EXPECT_EQ(ix->route(11), IndexKind::kCompact);
  EXPECT_EQ(ix->route(24), IndexKind::kLong);
  prm.k = 1;
  auto one = Index::build(random_text(rng, 300, 4), IndexKind::kAuto, prm);
  EXPECT_EQ(one->short_index(), nullptr);
  EXPECT_EQ(one->route(5), IndexKind::kCompact);
}

TEST(Index, WildcardAndEdgeCases) {
  auto w = Index::build("banana", IndexKind::kWild, IndexParams{.k = 2});
  EXPECT_EQ(w->query("?a?a"), (OccurrenceSet{0, 2}));
  EXPECT_EQ(w->query(""), (OccurrenceSet{0, 1, 2, 3, 4, 5, 6}));
  EXPECT_EQ(w->query("bananas"), OccurrenceSet{});
  EXPECT_THROW(Index::build("", IndexKind::kCompact, {}), Error);
  EXPECT_THROW(Index::build("banana", IndexKind::kShort, IndexParams{.k = 1}), Error);
  EXPECT_THROW(parse_kind("fancy"), Error);
  EXPECT_EQ(parse_kind("long"), IndexKind::kLong);
}

TEST(Container, RoundTripIsByteIdentical) {
  std::mt19937_64 rng(12);
  for (IndexKind kind : {IndexKind::kErrata, IndexKind::kCompact, IndexKind::kShort, IndexKind::kLong,
                         IndexKind::kWild, IndexKind::kAuto}) {
    const Bytes text = random_text(rng, 200, 4);
    IndexParams prm;
    prm.k = 2;
    auto ix = Index::build(text, kind, prm);
    const Bytes a = serialize(*ix);
    auto back = deserialize(a);
    EXPECT_EQ(serialize(*back), a) << kind_name(kind);
    EXPECT_EQ(back->params(), ix->params());
    for (int qi = 0; qi < 20; ++qi) {
      const size_t m = kind == IndexKind::kLong ? 3 * ix->params().gamma + rng() % 5 : 1 + rng() % 10;
      const Bytes p(text.substr(rng() % (text.size() - m + 1), m));
      EXPECT_EQ(back->query(p), ix->query(p));
    }
  }
}

TEST(Container, RejectsMalformedInput) {
  auto ix = Index::build("banana", IndexKind::kCompact, IndexParams{.k = 1});
  const Bytes good = serialize(*ix);
  EXPECT_NO_THROW(deserialize(good));
  Bytes bad = good;
  bad[0] = 'X';
  EXPECT_THROW(deserialize(bad), Error);
  bad = good;
  bad[4] = 9;  // version
  EXPECT_THROW(deserialize(bad), Error);
  EXPECT_THROW(deserialize(good.substr(0, good.size() - 3)), Error);
  EXPECT_THROW(deserialize(good + "x"), Error);
  bad = good;
  bad[bad.find("banana")] = 'c';
  EXPECT_THROW(deserialize(bad), Error);
  EXPECT_THROW(deserialize(""), Error);
}
