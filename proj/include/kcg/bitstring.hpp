// Copyright 2026 The kcgame Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <compare>
#include <string>
#include <string_view>
#include <vector>

#include "kcg/errors.hpp"

namespace kcg {

// A finite binary string, at most kMaxBits long, packed into one word.
// Doubles as a vertex of the full binary tree: the string x names the
// interval I_x of all infinite sequences starting with x.
class BitString {
 public:
  static constexpr std::uint32_t kMaxBits = 62;

  constexpr BitString() = default;  // the empty string

  constexpr BitString(std::uint32_t length, std::uint64_t value)
      : len_(length), bits_(value) {
    if (length > kMaxBits) throw DepthExceeded("bit string longer than 62");
    if (length < 64 && (value >> length) != 0)
      throw Error("bit string value wider than its length");
  }

  static BitString parse(std::string_view text) {
    if (text == "eps") return {};
    if (text.empty()) throw ParseError("empty bit string literal (use \"eps\")");
    BitString out;
    for (char ch : text) {
      if (ch != '0' && ch != '1') throw ParseError("bad bit string literal");
      out = out.append(ch == '1');
    }
    return out;
  }

  constexpr std::uint32_t length() const { return len_; }
  constexpr std::uint64_t value() const { return bits_; }
  constexpr bool empty() const { return len_ == 0; }

  // Bit i counted from the front, i in [0, length).
  constexpr bool bit(std::uint32_t i) const {
    return (bits_ >> (len_ - 1 - i)) & 1u;
  }

  constexpr BitString append(bool b) const {
    return BitString(len_ + 1, (bits_ << 1) | (b ? 1u : 0u));
  }

  // This string followed by the low `extra` bits of `suffix`.
  constexpr BitString extended(std::uint32_t extra, std::uint64_t suffix) const {
    if (len_ + extra > kMaxBits) throw DepthExceeded("extension too deep");
    return BitString(len_ + extra, (bits_ << extra) | suffix);
  }

  constexpr BitString prefix(std::uint32_t n) const {
    if (n >= len_) return *this;
    return BitString(n, bits_ >> (len_ - n));
  }

  constexpr BitString parent() const {
    if (len_ == 0) throw Error("empty string has no parent");
    return BitString(len_ - 1, bits_ >> 1);
  }

  constexpr BitString sibling() const {
    if (len_ == 0) throw Error("empty string has no sibling");
    return BitString(len_, bits_ ^ 1u);
  }

  constexpr bool is_prefix_of(const BitString& other) const {
    return len_ <= other.len_ && (other.bits_ >> (other.len_ - len_)) == bits_;
  }

  // One is a prefix of the other, i.e. I_a and I_b intersect.
  constexpr bool comparable(const BitString& other) const {
    return is_prefix_of(other) || other.is_prefix_of(*this);
  }

  std::string str() const {
    if (len_ == 0) return "eps";
    std::string s(len_, '0');
    for (std::uint32_t i = 0; i < len_; ++i)
      if (bit(i)) s[i] = '1';
    return s;
  }

  // Level order: by length, then numerically. A total order used wherever a
  // deterministic enumeration of strings is needed.
  friend constexpr auto operator<=>(const BitString& a, const BitString& b) {
    if (a.len_ != b.len_) return a.len_ <=> b.len_;
    return a.bits_ <=> b.bits_;
  }
  friend constexpr bool operator==(const BitString&, const BitString&) = default;

 private:
  std::uint32_t len_ = 0;
  std::uint64_t bits_ = 0;
};

// Tree order: a proper prefix sorts before its extensions, otherwise the
// first differing bit decides. Under this order all extensions of x form a
// contiguous run immediately after x itself.
struct TreeOrder {
  constexpr bool operator()(const BitString& a, const BitString& b) const {
    std::uint32_t m = a.length() < b.length() ? a.length() : b.length();
    std::uint64_t pa = m < a.length() ? a.value() >> (a.length() - m) : a.value();
    std::uint64_t pb = m < b.length() ? b.value() >> (b.length() - m) : b.value();
    if (pa != pb) return pa < pb;
    return a.length() < b.length();
  }
};

inline std::string to_string(const BitString& x) { return x.str(); }

}  // namespace kcg
