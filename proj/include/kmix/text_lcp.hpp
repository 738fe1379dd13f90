// Licensed under the Apache License, Version 2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "kmix/common.hpp"

namespace kmix {

// Suffix array by prefix doubling with counting sorts, O(n log n).
inline std::vector<int32_t> suffix_array(BytesView s) {
  const int32_t n = static_cast<int32_t>(s.size());
  std::vector<int32_t> sa(n), rank(n), tmp(n), cnt(std::max<int32_t>(n, 256) + 1);
  if (n == 0) return sa;
  for (int32_t i = 0; i < n; ++i) rank[i] = static_cast<unsigned char>(s[i]);
  std::iota(sa.begin(), sa.end(), 0);
  std::stable_sort(sa.begin(), sa.end(), [&](int32_t a, int32_t b) { return rank[a] < rank[b]; });
  {
    int32_t r = 0;
    tmp[sa[0]] = 0;
    for (int32_t i = 1; i < n; ++i) {
      if (rank[sa[i]] != rank[sa[i - 1]]) ++r;
      tmp[sa[i]] = r;
    }
    rank.swap(tmp);
    if (r == n - 1) return sa;
  }
  std::vector<int32_t> order(n);
  for (int32_t k = 1;; k <<= 1) {
    int32_t p = 0;
    for (int32_t i = n - k; i < n; ++i) order[p++] = i;
    for (int32_t j = 0; j < n; ++j)
      if (sa[j] >= k) order[p++] = sa[j] - k;
    std::fill(cnt.begin(), cnt.end(), 0);
    for (int32_t i = 0; i < n; ++i) ++cnt[rank[i] + 1];
    for (size_t i = 1; i < cnt.size(); ++i) cnt[i] += cnt[i - 1];
    for (int32_t j = 0; j < n; ++j) sa[cnt[rank[order[j]]]++] = order[j];
    auto second = [&](int32_t i) { return i + k < n ? rank[i + k] : -1; };
    int32_t r = 0;
    tmp[sa[0]] = 0;
    for (int32_t i = 1; i < n; ++i) {
      if (rank[sa[i]] != rank[sa[i - 1]] || second(sa[i]) != second(sa[i - 1])) ++r;
      tmp[sa[i]] = r;
    }
    rank.swap(tmp);
    if (r == n - 1) break;
  }
  return sa;
}

// Kasai et al.; lcp[r] = LCP of suffixes sa[r-1] and sa[r], lcp[0] = 0.
inline std::vector<int32_t> lcp_array(BytesView s, const std::vector<int32_t>& sa,
                                      const std::vector<int32_t>& isa) {
  const int32_t n = static_cast<int32_t>(s.size());
  std::vector<int32_t> lcp(n, 0);
  int32_t h = 0;
  for (int32_t i = 0; i < n; ++i) {
    if (isa[i] > 0) {
      int32_t j = sa[isa[i] - 1];
      while (i + h < n && j + h < n && s[i + h] == s[j + h]) ++h;
      lcp[isa[i]] = h;
      if (h > 0) --h;
    } else {
      h = 0;
    }
  }
  return lcp;
}

// Range-minimum over a fixed array: sparse table over blocks of 16, scan inside.
class BlockRmq {
 public:
  static constexpr int kBlock = 16;
  BlockRmq() = default;
  explicit BlockRmq(const std::vector<int32_t>* a) : a_(a) {
    const size_t n = a->size();
    const size_t nb = (n + kBlock - 1) / kBlock;
    if (nb == 0) return;
    table_.emplace_back(nb);
    for (size_t b = 0; b < nb; ++b) {
      int32_t m = INT32_MAX;
      for (size_t i = b * kBlock; i < std::min(n, (b + 1) * kBlock); ++i) m = std::min(m, (*a)[i]);
      table_[0][b] = m;
    }
    for (size_t lv = 1; (size_t{1} << lv) <= nb; ++lv) {
      const size_t w = size_t{1} << (lv - 1);
      std::vector<int32_t> next(nb - (size_t{1} << lv) + 1);
      for (size_t b = 0; b < next.size(); ++b) next[b] = std::min(table_[lv - 1][b], table_[lv - 1][b + w]);
      table_.push_back(std::move(next));
    }
  }
  // Minimum over [l, r], l <= r.
  int32_t min(size_t l, size_t r) const {
    const auto& a = *a_;
    size_t bl = l / kBlock, br = r / kBlock;
    int32_t m = INT32_MAX;
    if (bl == br) {
      for (size_t i = l; i <= r; ++i) m = std::min(m, a[i]);
      return m;
    }
    for (size_t i = l; i < (bl + 1) * kBlock; ++i) m = std::min(m, a[i]);
    for (size_t i = br * kBlock; i <= r; ++i) m = std::min(m, a[i]);
    if (bl + 1 <= br - 1) {
      size_t lo = bl + 1, hi = br - 1;
      int lv = floor_log2(hi - lo + 1);
      m = std::min({m, table_[lv][lo], table_[lv][hi - (size_t{1} << lv) + 1]});
    }
    return m;
  }
  size_t bytes() const {
    size_t b = 0;
    for (auto& t : table_) b += t.size() * sizeof(int32_t);
    return b;
  }

 private:
  const std::vector<int32_t>* a_ = nullptr;
  std::vector<std::vector<int32_t>> table_;
};

// Constant-ish time longest common extension between suffixes of one text.
class TextLcpIndex {
 public:
  TextLcpIndex() = default;
  explicit TextLcpIndex(Bytes text) : text_(std::move(text)) {
    n_ = static_cast<int32_t>(text_.size());
    sa_ = suffix_array(text_);
    isa_.assign(n_, 0);
    for (int32_t r = 0; r < n_; ++r) isa_[sa_[r]] = r;
    lcp_ = lcp_array(text_, sa_, isa_);
    rmq_ = BlockRmq(&lcp_);
  }
  TextLcpIndex(const TextLcpIndex&) = delete;
  TextLcpIndex& operator=(const TextLcpIndex&) = delete;

  int32_t size() const { return n_; }
  const Bytes& text() const { return text_; }
  const std::vector<int32_t>& sa() const { return sa_; }
  const std::vector<int32_t>& isa() const { return isa_; }
  const std::vector<int32_t>& lcp() const { return lcp_; }

  // LCP(T[i..n), T[j..n)); positions equal to n denote the empty suffix.
  int32_t lce(int32_t i, int32_t j) const {
    if (i >= n_ || j >= n_) return 0;
    if (i == j) return n_ - i;
    int32_t a = isa_[i], b = isa_[j];
    if (a > b) std::swap(a, b);
    return rmq_.min(a + 1, b);
  }

 private:
  Bytes text_;
  int32_t n_ = 0;
  std::vector<int32_t> sa_, isa_, lcp_;
  BlockRmq rmq_;
};

}  // namespace kmix
