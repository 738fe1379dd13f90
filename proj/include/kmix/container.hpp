// Licensed under the Apache License, Version 2.0
#pragma once

#include <cstdint>
#include <cstring>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "kmix/common.hpp"
#include "kmix/index.hpp"

namespace kmix {

inline constexpr char kMagic[4] = {'K', 'M', 'I', 'X'};
inline constexpr uint16_t kFormatVersion = 1;

namespace detail {

class Writer {
 public:
  template <class U>
  void put(U v) {
    for (size_t i = 0; i < sizeof(U); ++i) out_.push_back(static_cast<char>(static_cast<uint64_t>(v) >> (8 * i) & 0xFF));
  }
  void raw(BytesView s) { out_.append(s); }
  Bytes take() { return std::move(out_); }

 private:
  Bytes out_;
};

class Reader {
 public:
  explicit Reader(BytesView in) : in_(in) {}
  template <class U>
  U get() {
    need(sizeof(U));
    uint64_t v = 0;
    for (size_t i = 0; i < sizeof(U); ++i) v |= static_cast<uint64_t>(static_cast<unsigned char>(in_[pos_ + i])) << (8 * i);
    pos_ += sizeof(U);
    return static_cast<U>(v);
  }
  BytesView raw(uint64_t len) {
    need(len);
    BytesView s = in_.substr(pos_, len);
    pos_ += len;
    return s;
  }
  bool done() const { return pos_ == in_.size(); }

 private:
  void need(uint64_t len) const { require(len <= in_.size() - pos_, "container: truncated input"); }
  BytesView in_;
  size_t pos_ = 0;
};

inline uint64_t fnv1a(BytesView s) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) h = (h ^ c) * 0x100000001b3ULL;
  return h;
}

}  // namespace detail

// Layout: magic, u16 version, u8 kind, parameter block, u32 section count,
// then sections as (u16 name length, name, u64 payload length, payload).
// Structures are deterministic functions of the text and parameters, so
// only those are stored and the index is rebuilt on load.
inline Bytes serialize(const Index& ix) {
  detail::Writer w;
  w.raw(BytesView(kMagic, 4));
  w.put<uint16_t>(kFormatVersion);
  w.put<uint8_t>(static_cast<uint8_t>(ix.kind()));
  const IndexParams& p = ix.params();
  w.put<uint32_t>(static_cast<uint32_t>(p.k));
  for (int64_t v : {p.mu, p.h, p.gamma, p.tau, p.sigma}) w.put<uint64_t>(static_cast<uint64_t>(v));
  w.put<uint8_t>(static_cast<uint8_t>(p.wildcard));
  const Bytes& text = ix.text();
  Bytes check(8, '\0');
  const uint64_t h = detail::fnv1a(text);
  for (int i = 0; i < 8; ++i) check[i] = static_cast<char>(h >> (8 * i) & 0xFF);
  const std::vector<std::pair<std::string, BytesView>> sections{{"text", text}, {"checksum", check}};
  w.put<uint32_t>(static_cast<uint32_t>(sections.size()));
  for (const auto& [name, payload] : sections) {
    w.put<uint16_t>(static_cast<uint16_t>(name.size()));
    w.raw(name);
    w.put<uint64_t>(payload.size());
    w.raw(payload);
  }
  return w.take();
}

inline std::unique_ptr<Index> deserialize(BytesView in) {
  detail::Reader r(in);
  require(r.raw(4) == BytesView(kMagic, 4), "container: bad magic");
  require(r.get<uint16_t>() == kFormatVersion, "container: unsupported format version");
  const uint8_t kind = r.get<uint8_t>();
  require(kind <= static_cast<uint8_t>(IndexKind::kAuto), "container: unknown index kind");
  IndexParams p;
  p.k = static_cast<int>(r.get<uint32_t>());
  for (int64_t* v : {&p.mu, &p.h, &p.gamma, &p.tau, &p.sigma}) *v = static_cast<int64_t>(r.get<uint64_t>());
  p.wildcard = static_cast<char>(r.get<uint8_t>());
  const uint32_t count = r.get<uint32_t>();
  Bytes text;
  bool have_text = false, have_check = false;
  uint64_t check = 0;
  for (uint32_t i = 0; i < count; ++i) {
    const BytesView name = r.raw(r.get<uint16_t>());
    const BytesView payload = r.raw(r.get<uint64_t>());
    if (name == "text") {
      text = Bytes(payload);
      have_text = true;
    } else if (name == "checksum") {
      require(payload.size() == 8, "container: bad checksum section");
      for (int j = 0; j < 8; ++j) check |= static_cast<uint64_t>(static_cast<unsigned char>(payload[j])) << (8 * j);
      have_check = true;
    }
  }
  require(r.done(), "container: trailing bytes");
  require(have_text && have_check, "container: missing section");
  require(detail::fnv1a(text) == check, "container: checksum mismatch");
  auto ix = Index::build(std::move(text), static_cast<IndexKind>(kind), p);
  require(ix->params() == p, "container: parameter block inconsistent with text");
  return ix;
}

}  // namespace kmix
