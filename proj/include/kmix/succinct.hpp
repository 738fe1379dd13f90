// Licensed under the Apache License, Version 2.0
#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "kmix/common.hpp"

namespace kmix {

// Strictly increasing a_1 < ... < a_l in [1..r] with select and restricted
// (membership) rank through an open-addressing table.
class IncreasingSeq {
 public:
  IncreasingSeq() = default;
  IncreasingSeq(std::vector<int32_t> values, int64_t r) : vals_(std::move(values)), r_(r) {
    for (size_t i = 0; i < vals_.size(); ++i) {
      require(vals_[i] >= 1 && vals_[i] <= r, "iseq: value outside [1..r]");
      require(i == 0 || vals_[i - 1] < vals_[i], "iseq: values not strictly increasing");
    }
    contiguous_ = vals_.empty() || vals_.back() - vals_.front() + 1 == static_cast<int32_t>(vals_.size());
    if (!contiguous_) {
      size_t cap = 4;
      while (cap < 2 * vals_.size()) cap <<= 1;
      table_.assign(cap, -1);
      for (size_t i = 0; i < vals_.size(); ++i) {
        size_t h = hash(vals_[i]) & (cap - 1);
        while (table_[h] >= 0) h = (h + 1) & (cap - 1);
        table_[h] = static_cast<int32_t>(i);
      }
    }
  }

  int64_t size() const { return static_cast<int64_t>(vals_.size()); }
  int64_t universe() const { return r_; }

  // i with a_i = x, or none.
  std::optional<int64_t> rank(int64_t x) const {
    if (vals_.empty()) return std::nullopt;
    if (contiguous_) {
      if (x < vals_.front() || x > vals_.back()) return std::nullopt;
      return x - vals_.front() + 1;
    }
    const size_t mask = table_.size() - 1;
    for (size_t h = hash(x) & mask;; h = (h + 1) & mask) {
      int32_t i = table_[h];
      if (i < 0) return std::nullopt;
      if (vals_[i] == x) return i + 1;
    }
  }

  int64_t select(int64_t i) const {
    require(i >= 1 && i <= size(), "iseq: select out of range");
    return vals_[i - 1];
  }

  // Size of an Elias-Fano style encoding, for reporting.
  uint64_t encoded_bits() const {
    if (vals_.empty()) return 0;
    const double ratio = static_cast<double>(r_) / static_cast<double>(vals_.size());
    const uint64_t low = ratio > 1 ? static_cast<uint64_t>(std::ceil(std::log2(ratio))) : 0;
    return vals_.size() * (2 + low);
  }
  uint64_t memory_bytes() const { return (vals_.size() + table_.size()) * 4; }

 private:
  static size_t hash(int64_t x) { return static_cast<size_t>(static_cast<uint64_t>(x) * 0x9E3779B97F4A7C15ULL >> 17); }
  std::vector<int32_t> vals_;
  std::vector<int32_t> table_;
  int64_t r_ = 0;
  bool contiguous_ = true;
};

class IncreasingSeqCollection {
 public:
  IncreasingSeqCollection() = default;
  IncreasingSeqCollection(const std::vector<std::vector<int32_t>>& seqs, int64_t r) : r_(r) {
    for (const auto& s : seqs) seqs_.emplace_back(s, r);
  }
  size_t size() const { return seqs_.size(); }
  const IncreasingSeq& operator[](size_t i) const { return seqs_[i]; }
  uint64_t encoded_bits() const {
    uint64_t b = 64 * seqs_.size();
    for (const auto& s : seqs_) b += s.encoded_bits();
    return b;
  }
  // l (1 + log(c r / l)) with l the total length, the concavity bound.
  double jensen_bound_bits() const {
    double l = 0;
    for (const auto& s : seqs_) l += static_cast<double>(s.size());
    if (l == 0) return 0;
    return l * (1 + std::log2(static_cast<double>(seqs_.size()) * static_cast<double>(r_) / l));
  }

 private:
  std::vector<IncreasingSeq> seqs_;
  int64_t r_ = 0;
};

// Bit vector with 1-based rank_q(x) = |{i in [1..x] : B[i] = q}| and select.
class BitVecRS {
 public:
  BitVecRS() = default;
  explicit BitVecRS(const std::vector<bool>& bits) : n_(static_cast<int64_t>(bits.size())) {
    words_.assign((bits.size() + 63) / 64, 0);
    for (size_t i = 0; i < bits.size(); ++i)
      if (bits[i]) words_[i / 64] |= uint64_t{1} << (i % 64);
    cum_.assign(words_.size() + 1, 0);
    for (size_t w = 0; w < words_.size(); ++w) cum_[w + 1] = cum_[w] + std::popcount(words_[w]);
  }
  int64_t size() const { return n_; }
  bool get(int64_t i) const { return words_[(i - 1) / 64] >> ((i - 1) % 64) & 1; }  // 1-based
  int64_t ones() const { return cum_.empty() ? 0 : cum_.back(); }

  int64_t rank1(int64_t x) const {
    require(x >= 0 && x <= n_, "bitvec: rank out of range");
    const int64_t w = x / 64, b = x % 64;
    int64_t r = cum_[w];
    if (b) r += std::popcount(words_[w] & ((uint64_t{1} << b) - 1));
    return r;
  }
  int64_t rank0(int64_t x) const { return x - rank1(x); }
  int64_t rank(int q, int64_t x) const { return q ? rank1(x) : rank0(x); }

  int64_t select(int q, int64_t i) const {
    const int64_t total = q ? ones() : n_ - ones();
    require(i >= 1 && i <= total, "bitvec: select out of range");
    auto cnt = [&](size_t w) { return q ? cum_[w] : static_cast<int64_t>(w) * 64 - cum_[w]; };
    size_t lo = 0, hi = words_.size();
    while (hi - lo > 1) {
      size_t mid = (lo + hi) / 2;
      if (cnt(mid) < i)
        lo = mid;
      else
        hi = mid;
    }
    int64_t need = i - cnt(lo);
    uint64_t w = q ? words_[lo] : ~words_[lo];
    for (int b = 0; b < 64; ++b)
      if (w >> b & 1 && --need == 0) return static_cast<int64_t>(lo) * 64 + b + 1;
    throw Error("bitvec: select inconsistent");
  }
  int64_t select1(int64_t i) const { return select(1, i); }
  int64_t select0(int64_t i) const { return select(0, i); }
  uint64_t memory_bytes() const { return words_.size() * 8 + cum_.size() * 8; }

 private:
  int64_t n_ = 0;
  std::vector<uint64_t> words_;
  std::vector<int64_t> cum_;
};

// Static merge tree over x-sorted points; each level keeps y-sorted runs.
template <class Payload>
class RangeReport2D {
 public:
  struct Point {
    int64_t x, y;
    Payload payload;
  };
  RangeReport2D() = default;
  explicit RangeReport2D(std::vector<Point> pts) : pts_(std::move(pts)) {
    std::sort(pts_.begin(), pts_.end(), [](const Point& a, const Point& b) { return a.x < b.x; });
    const size_t n = pts_.size();
    xs_.resize(n);
    for (size_t i = 0; i < n; ++i) xs_[i] = pts_[i].x;
    std::vector<int32_t> cur(n);
    for (size_t i = 0; i < n; ++i) cur[i] = static_cast<int32_t>(i);
    for (size_t w = 1;; w <<= 1) {
      // Runs of width w sorted by y.
      std::vector<int32_t> next(n);
      if (w == 1) {
        next = cur;
      } else {
        for (size_t s = 0; s < n; s += w) {
          size_t m = std::min(n, s + w / 2), e = std::min(n, s + w);
          std::merge(levels_.back().begin() + s, levels_.back().begin() + m, levels_.back().begin() + m,
                     levels_.back().begin() + e, next.begin() + s,
                     [&](int32_t a, int32_t b) { return pts_[a].y < pts_[b].y; });
        }
      }
      levels_.push_back(std::move(next));
      if (w >= n) break;
    }
  }

  size_t size() const { return pts_.size(); }

  template <class F>
  void query(int64_t x1, int64_t x2, int64_t y1, int64_t y2, F&& emit) const {
    if (x1 > x2 || y1 > y2 || pts_.empty()) return;
    size_t l = std::lower_bound(xs_.begin(), xs_.end(), x1) - xs_.begin();
    size_t r = std::upper_bound(xs_.begin(), xs_.end(), x2) - xs_.begin();
    // Decompose [l, r) into aligned blocks.
    while (l < r) {
      size_t lv = 0;
      while (lv + 1 < levels_.size() && l % (size_t{1} << (lv + 1)) == 0 && l + (size_t{1} << (lv + 1)) <= r) ++lv;
      const size_t w = size_t{1} << lv;
      const auto& arr = levels_[lv];
      auto b = arr.begin() + l, e = arr.begin() + std::min(l + w, pts_.size());
      auto it = std::lower_bound(b, e, y1, [&](int32_t a, int64_t y) { return pts_[a].y < y; });
      for (; it != e && pts_[*it].y <= y2; ++it) emit(pts_[*it]);
      l += w;
    }
  }
  std::vector<Payload> query(int64_t x1, int64_t x2, int64_t y1, int64_t y2) const {
    std::vector<Payload> out;
    query(x1, x2, y1, y2, [&](const Point& p) { out.push_back(p.payload); });
    return out;
  }
  uint64_t memory_bytes() const {
    uint64_t b = pts_.size() * sizeof(Point) + xs_.size() * 8;
    for (auto& l : levels_) b += l.size() * 4;
    return b;
  }

 private:
  std::vector<Point> pts_;
  std::vector<int64_t> xs_;
  std::vector<std::vector<int32_t>> levels_;
};

// Interval stabbing as a two-sided range query over points (l, r).
template <class Payload>
class StabStruct {
 public:
  struct Interval {
    int64_t l, r;
    Payload payload;
  };
  StabStruct() = default;
  explicit StabStruct(const std::vector<Interval>& ivs) {
    std::vector<typename RangeReport2D<Payload>::Point> pts;
    pts.reserve(ivs.size());
    for (const auto& iv : ivs) {
      require(iv.l <= iv.r, "stab: interval with l > r");
      pts.push_back({iv.l, iv.r, iv.payload});
    }
    rr_ = RangeReport2D<Payload>(std::move(pts));
  }
  size_t size() const { return rr_.size(); }
  std::vector<Payload> stab(int64_t a) const { return rr_.query(INT64_MIN, a, a, INT64_MAX); }
  template <class F>
  void stab(int64_t a, F&& emit) const {
    rr_.query(INT64_MIN, a, a, INT64_MAX, [&](const auto& p) { emit(p.payload); });
  }
  uint64_t memory_bytes() const { return rr_.memory_bytes(); }

 private:
  RangeReport2D<Payload> rr_;
};

}  // namespace kmix
