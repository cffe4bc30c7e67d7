// Copyright 2026 The kcgame Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "kcg/bitstring.hpp"
#include "kcg/errors.hpp"
#include "kcg/universal_set.hpp"

namespace kcg {

// Length of a shortest description, with a distinguished value for "none".
class MinLength {
 public:
  static MinLength infinite() { return MinLength(); }
  static MinLength of(std::uint32_t n) {
    MinLength m;
    m.v_ = n;
    return m;
  }

  bool is_finite() const { return v_.has_value(); }
  std::uint32_t value() const {
    if (!v_) throw Error("no finite length");
    return *v_;
  }

  // True when this length is at least n; an infinite length beats everything.
  bool at_least(std::uint64_t n) const { return !v_ || *v_ >= n; }

  friend std::strong_ordering operator<=>(const MinLength& a, const MinLength& b) {
    if (a.v_ && b.v_) return *a.v_ <=> *b.v_;
    return b.v_.has_value() <=> a.v_.has_value();
  }
  friend bool operator==(const MinLength&, const MinLength&) = default;

  std::string str() const { return v_ ? std::to_string(*v_) : "inf"; }

 private:
  MinLength() = default;
  std::optional<std::uint32_t> v_;
};

// Graph of a partial map from descriptions to objects, built up one pair at a
// time. Keeps the shortest known description length per object.
class DescriptionTable {
 public:
  void define(const BitString& p, const BitString& x) {
    auto [it, inserted] = map_.emplace(p, x);
    if (!inserted) {
      if (it->second == x) return;
      throw Redefined("description already maps elsewhere: " + p.str());
    }
    auto [bit, fresh] = best_.emplace(x, p.length());
    if (!fresh && p.length() < bit->second) bit->second = p.length();
  }

  bool defined(const BitString& p) const { return map_.count(p) != 0; }

  std::optional<BitString> lookup(const BitString& p) const {
    auto it = map_.find(p);
    if (it == map_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t size() const { return map_.size(); }

  // Shortest description length of x under this table.
  MinLength min_length(const BitString& x) const {
    auto it = best_.find(x);
    if (it == best_.end()) return MinLength::infinite();
    return MinLength::of(it->second);
  }

  bool in_image(const BitString& x) const { return best_.count(x) != 0; }

  // Whether no description is a prefix of another.
  bool prefix_free() const {
    std::vector<BitString> dom;
    dom.reserve(map_.size());
    for (const auto& [p, x] : map_) dom.push_back(p);
    std::sort(dom.begin(), dom.end(), TreeOrder{});
    for (std::size_t i = 0; i + 1 < dom.size(); ++i)
      if (dom[i].is_prefix_of(dom[i + 1])) return false;
    return true;
  }

  auto begin() const { return map_.begin(); }
  auto end() const { return map_.end(); }

 private:
  std::map<BitString, BitString> map_;
  std::map<BitString, std::uint32_t> best_;
};

inline MinLength c_of(const DescriptionTable& t, const BitString& x) { return t.min_length(x); }

// Moves a table into the allowed set at the cost of two extra bits: a
// description p becomes the rank-value(p) allowed string of length |p| + 2.
// Injective, since ranks are distinct per length and lengths stay distinct.
// Needs at least a quarter of each target layer allowed, which any threshold
// of 1/4 or more guarantees.
inline DescriptionTable rebase(const DescriptionTable& t, const UniversalSet& A) {
  DescriptionTable out;
  for (const auto& [p, x] : t) {
    const std::uint64_t m = std::uint64_t{p.length()} + 2;
    if (m > BitString::kMaxBits) throw DepthExceeded("rebased description too long");
    BasicSet layer = A.level_set(m);
    if (A.allowed_count(m) <= p.value()) throw Error("target layer too thin to rebase");
    out.define(layer.nth_at_level(static_cast<std::uint32_t>(m), p.value()), x);
  }
  return out;
}

// Text form: one "description object" pair per line, blank lines and lines
// starting with '#' skipped.
inline void write_table(std::ostream& os, const DescriptionTable& t) {
  for (const auto& [p, x] : t) os << p.str() << ' ' << x.str() << '\n';
}

inline DescriptionTable read_table(std::istream& is) {
  DescriptionTable t;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string ps, xs, extra;
    if (!(ls >> ps >> xs) || (ls >> extra))
      throw ParseError("table line " + std::to_string(lineno) + ": want two fields");
    t.define(BitString::parse(ps), BitString::parse(xs));
  }
  return t;
}

}  // namespace kcg
