// Licensed under the Apache License, Version 2.0
#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "kmix/common.hpp"
#include "kmix/compact_index.hpp"
#include "kmix/errata.hpp"
#include "kmix/long_index.hpp"
#include "kmix/params.hpp"
#include "kmix/short_index.hpp"

namespace kmix {

enum class IndexKind : uint8_t { kErrata = 0, kCompact = 1, kShort = 2, kLong = 3, kWild = 4, kAuto = 5 };

inline const char* kind_name(IndexKind k) {
  switch (k) {
    case IndexKind::kErrata: return "errata";
    case IndexKind::kCompact: return "compact";
    case IndexKind::kShort: return "short";
    case IndexKind::kLong: return "long";
    case IndexKind::kWild: return "wild";
    case IndexKind::kAuto: return "auto";
  }
  return "?";
}

inline IndexKind parse_kind(const std::string& s) {
  for (uint8_t i = 0; i <= 5; ++i)
    if (s == kind_name(static_cast<IndexKind>(i))) return static_cast<IndexKind>(i);
  throw Error("unknown index kind: " + s);
}

// Zero means "choose automatically" for mu, h and gamma.
struct IndexParams {
  int k = 1;
  int64_t mu = 0, h = 0, gamma = 0, tau = 0, sigma = 0;
  char wildcard = '?';
  friend bool operator==(const IndexParams&, const IndexParams&) = default;
};

// One built index of any kind over an owned text.
class Index {
 public:
  static std::unique_ptr<Index> build(Bytes text, IndexKind kind, IndexParams prm) {
    require(!text.empty(), "index: empty text");
    require(prm.k >= 1 && prm.k <= kMaxSubs, "index: k out of range");
    const int64_t n = static_cast<int64_t>(text.size());
    std::unique_ptr<Index> ix(new Index());
    ix->kind_ = kind;
    prm.sigma = alphabet_size(text);
    const AutoParams ap = auto_params(n, prm.k, prm.sigma);
    if (kind == IndexKind::kShort || kind == IndexKind::kAuto) {
      if (prm.mu == 0) prm.mu = ap.compact_only ? std::min<int64_t>(16, n) : ap.mu;
      if (prm.h == 0) prm.h = std::max<int64_t>(1, ap.compact_only ? 1 : ap.h);
      prm.mu = std::min(prm.mu, n);
    }
    if (kind == IndexKind::kLong || kind == IndexKind::kAuto) {
      if (prm.gamma == 0) prm.gamma = ap.compact_only ? 2 : ap.gamma;
      prm.tau = std::max<int64_t>(1, prm.gamma / 3);
    }
    ix->prm_ = prm;
    switch (kind) {
      case IndexKind::kErrata: {
        ix->tx_ = std::make_unique<TextLcpIndex>(std::move(text));
        ix->st_ = std::make_unique<SuffixTree>(*ix->tx_);
        std::vector<int32_t> pos(n);
        for (int32_t i = 0; i < n; ++i) pos[i] = i;
        ix->errata_ = std::make_unique<ErrataTree>(ErrataTree::build(*ix->tx_, pos, prm.k));
        break;
      }
      case IndexKind::kCompact: ix->compact_ = CompactIndex::build(std::move(text), prm.k); break;
      case IndexKind::kWild:
        ix->compact_ = CompactIndex::build(std::move(text), prm.k, CompactKind::kWildcard, prm.wildcard);
        break;
      case IndexKind::kShort: ix->short_ = ShortIndex::build(std::move(text), short_params(prm)); break;
      case IndexKind::kLong: ix->long_ = LongIndex::build(std::move(text), prm.gamma, prm.k); break;
      case IndexKind::kAuto:
        if (!ap.compact_only && prm.h < prm.k) ix->short_ = ShortIndex::build(text, short_params(prm));
        if (prm.gamma >= 2 && prm.gamma <= n / (prm.k + 1)) ix->long_ = LongIndex::build(text, prm.gamma, prm.k);
        ix->compact_ = CompactIndex::build(std::move(text), prm.k);
        break;
    }
    return ix;
  }

  IndexKind kind() const { return kind_; }
  const IndexParams& params() const { return prm_; }
  const Bytes& text() const {
    if (tx_) return tx_->text();
    if (compact_) return compact_->text_index().text();
    if (short_) return short_->text_index().text();
    return long_->text();
  }

  const ErrataTree* errata() const { return errata_.get(); }
  const CompactIndex* compact() const { return compact_.get(); }
  const ShortIndex* short_index() const { return short_.get(); }
  const LongIndex* long_index() const { return long_.get(); }

  // Which structure answers a pattern of length m ("auto" dispatch).
  IndexKind route(int64_t m) const {
    if (kind_ != IndexKind::kAuto) return kind_;
    if (short_ && m <= prm_.mu) return IndexKind::kShort;
    if (long_ && m >= (prm_.k + 1) * prm_.gamma) return IndexKind::kLong;
    return IndexKind::kCompact;
  }

  OccurrenceSet query(BytesView p) const {
    const int64_t n = static_cast<int64_t>(text().size()), m = static_cast<int64_t>(p.size());
    OccurrenceSet out;
    if (m > n) return out;
    if (m == 0) {
      for (int64_t i = 0; i <= n; ++i) out.push_back(i);
      return out;
    }
    switch (route(m)) {
      case IndexKind::kErrata: {
        PatternContext ctx(*st_, Bytes(p));
        for (int32_t l : errata_->query(ctx, PatStr::suffix(0, static_cast<int32_t>(m)), prm_.k).labels)
          if (l + m <= n) out.push_back(l);
        return out;
      }
      case IndexKind::kCompact: return compact_->query(p);
      case IndexKind::kWild: return compact_->query_wildcard(p);
      case IndexKind::kShort:
        require(m <= prm_.mu, "short index: pattern longer than mu");
        return short_->query(p, prm_.k);
      case IndexKind::kLong: return long_->query(p);
      case IndexKind::kAuto: break;
    }
    return out;
  }

 private:
  Index() = default;

  static ShortParams short_params(const IndexParams& prm) {
    ShortParams sp;
    sp.mu = static_cast<int32_t>(prm.mu);
    sp.h = static_cast<int>(prm.h);
    sp.k = prm.k;
    return sp;
  }

  IndexKind kind_ = IndexKind::kErrata;
  IndexParams prm_;
  std::unique_ptr<TextLcpIndex> tx_;
  std::unique_ptr<SuffixTree> st_;
  std::unique_ptr<ErrataTree> errata_;
  std::unique_ptr<CompactIndex> compact_;
  std::unique_ptr<ShortIndex> short_;
  std::unique_ptr<LongIndex> long_;
};

}  // namespace kmix
