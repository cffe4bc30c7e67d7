// Copyright 2026 The kcgame Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <mutex>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "kcg/bitstring.hpp"
#include "kcg/dyadic.hpp"
#include "kcg/errors.hpp"

namespace kcg {

// A finite union of dyadic intervals, kept as the canonical minimal
// antichain: elements pairwise prefix-incomparable, never both children of a
// vertex (such pairs are merged into the parent), sorted in tree order.
// Canonical form is unique per point set, so operator== decides set equality.
//
// All set algebra walks the implicit binary trie recursively; nothing ever
// materializes a level unless the caller asks for it via represent_at.
class BasicSet {
 public:
  BasicSet() = default;  // empty set

  static BasicSet full() { return BasicSet({BitString{}}, Canonical{}); }

  static BasicSet from_strings(std::vector<BitString> elems) {
    canonicalize(elems);
    return BasicSet(std::move(elems), Canonical{});
  }

  static BasicSet of(std::initializer_list<std::string_view> elems) {
    std::vector<BitString> v;
    v.reserve(elems.size());
    for (auto s : elems) v.push_back(BitString::parse(s));
    return from_strings(std::move(v));
  }

  // Comma-separated elements, "eps" for the empty string; "" is the empty set.
  static BasicSet parse(std::string_view text) {
    std::vector<BitString> v;
    while (!text.empty()) {
      auto pos = text.find(',');
      auto tok = text.substr(0, pos);
      if (!tok.empty()) v.push_back(BitString::parse(tok));
      if (pos == std::string_view::npos) break;
      text.remove_prefix(pos + 1);
    }
    return from_strings(std::move(v));
  }

  const std::vector<BitString>& antichain() const { return elems_; }
  bool empty() const { return elems_.empty(); }
  std::size_t size() const { return elems_.size(); }

  DyadicMeasure measure() const {
    DyadicMeasure m;
    for (const auto& e : elems_) m = m.plus(DyadicMeasure::pow2(-std::int64_t(e.length())));
    return m;
  }

  // The shallowest level whose strings can tile this set exactly; equals the
  // deepest element length. Zero for the empty set.
  std::uint32_t min_level() const {
    std::uint32_t m = 0;
    for (const auto& e : elems_) m = std::max(m, e.length());
    return m;
  }

  // All length-n strings whose interval lies inside the set, in lex order.
  std::vector<BitString> represent_at(std::uint32_t n) const {
    if (n < min_level()) throw LevelTooLow("level below min_level");
    std::vector<BitString> out;
    out.reserve(static_cast<std::size_t>(count_at_level(n)));
    for (const auto& e : elems_) {
      std::uint64_t reps = std::uint64_t{1} << (n - e.length());
      for (std::uint64_t v = 0; v < reps; ++v) out.push_back(e.extended(n - e.length(), v));
    }
    return out;
  }

  std::uint64_t count_at_level(std::uint32_t n) const {
    if (n < min_level()) throw LevelTooLow("level below min_level");
    if (n > BitString::kMaxBits) throw DepthExceeded("level too deep to count");
    DyadicMeasure m = measure();
    return m.num() << (n - m.exp());
  }

  // The r-th length-n string of the set in lex order, r zero-based. Works
  // straight off the antichain, no level materialization.
  BitString nth_at_level(std::uint32_t n, std::uint64_t r) const {
    if (n < min_level()) throw LevelTooLow("level below min_level");
    for (const auto& e : elems_) {
      std::uint64_t reps = std::uint64_t{1} << (n - e.length());
      if (r < reps) return e.extended(n - e.length(), r);
      r -= reps;
    }
    throw Error("rank beyond set size at this level");
  }

  // Whether I_x is contained in the set, i.e. some element is a prefix of x.
  bool contains_interval(const BitString& x) const {
    auto it = std::upper_bound(elems_.begin(), elems_.end(), x, TreeOrder{});
    if (it == elems_.begin()) return false;
    --it;
    return it->is_prefix_of(x);
  }

  BasicSet union_with(const BasicSet& o) const { return binary(Op::unite, *this, o); }
  BasicSet intersect_with(const BasicSet& o) const { return binary(Op::intersect, *this, o); }
  BasicSet minus(const BasicSet& o) const { return binary(Op::subtract, *this, o); }

  BasicSet complement() const {
    std::vector<BitString> out;
    Cover c = comp_rec(elems_, 0, elems_.size(), BitString{}, out);
    if (c == Cover::full) return full();
    return BasicSet(std::move(out), Canonical{});
  }

  bool disjoint_with(const BasicSet& o) const {
    // Cheaper than building the intersection, same recursion shape.
    for (const auto& e : elems_)
      if (o.overlaps_interval(e)) return false;
    return true;
  }

  // Whether I_x meets the set (some element comparable with x).
  bool overlaps_interval(const BitString& x) const {
    if (contains_interval(x)) return true;
    auto it = std::lower_bound(elems_.begin(), elems_.end(), x, TreeOrder{});
    return it != elems_.end() && x.is_prefix_of(*it);
  }

  // Clip to granularity n: every element deeper than n is widened to its
  // level-n ancestor. The result is the smallest basic set with
  // min_level <= n covering this one.
  BasicSet truncated(std::uint32_t n) const {
    if (min_level() <= n) return *this;
    std::vector<BitString> v;
    v.reserve(elems_.size());
    for (const auto& e : elems_) v.push_back(e.prefix(n));
    canonicalize(v);
    return BasicSet(std::move(v), Canonical{});
  }

  std::string str() const {
    std::string s;
    for (const auto& e : elems_) {
      if (!s.empty()) s += ',';
      s += e.str();
    }
    return s;
  }

  friend bool operator==(const BasicSet&, const BasicSet&) = default;

 private:
  struct Canonical {};
  BasicSet(std::vector<BitString> elems, Canonical) : elems_(std::move(elems)) {}

  enum class Cover { empty, full, part };
  enum class Op { unite, intersect, subtract };

  using Span = std::vector<BitString>;

  static bool span_full(const Span& v, std::size_t lo, std::size_t hi,
                        const BitString& prefix) {
    return hi - lo == 1 && v[lo] == prefix;
  }

  // Split point of [lo,hi): elements whose bit at `depth` is 0 come first.
  static std::size_t split_at(const Span& v, std::size_t lo, std::size_t hi,
                              std::uint32_t depth) {
    while (lo < hi) {
      std::size_t mid = lo + (hi - lo) / 2;
      if (!v[mid].bit(depth))
        lo = mid + 1;
      else
        hi = mid;
    }
    return lo;
  }

  static Cover copy_span(const Span& v, std::size_t lo, std::size_t hi,
                         const BitString& prefix, std::vector<BitString>& out) {
    if (lo == hi) return Cover::empty;
    if (span_full(v, lo, hi, prefix)) return Cover::full;
    out.insert(out.end(), v.begin() + lo, v.begin() + hi);
    return Cover::part;
  }

  static Cover merge_children(Cover c0, Cover c1, std::size_t base,
                              const BitString& prefix, std::vector<BitString>& out) {
    if (c1 == Cover::full) {
      if (c0 == Cover::full && out.size() == base + 1) {
        out.pop_back();  // drop prefix0, both halves full
        return Cover::full;
      }
      out.push_back(prefix.append(true));
    }
    return out.size() > base ? Cover::part : Cover::empty;
  }

  static Cover op_rec(Op op, const Span& a, std::size_t alo, std::size_t ahi,
                      const Span& b, std::size_t blo, std::size_t bhi,
                      const BitString& prefix, std::vector<BitString>& out) {
    bool ae = alo == ahi, be = blo == bhi;
    bool af = !ae && span_full(a, alo, ahi, prefix);
    bool bf = !be && span_full(b, blo, bhi, prefix);
    switch (op) {
      case Op::unite:
        if (af || bf) return Cover::full;
        if (ae) return copy_span(b, blo, bhi, prefix, out);
        if (be) return copy_span(a, alo, ahi, prefix, out);
        break;
      case Op::intersect:
        if (ae || be) return Cover::empty;
        if (af) return copy_span(b, blo, bhi, prefix, out);
        if (bf) return copy_span(a, alo, ahi, prefix, out);
        break;
      case Op::subtract:
        if (ae || bf) return Cover::empty;
        if (be) return copy_span(a, alo, ahi, prefix, out);
        if (af) return comp_rec(b, blo, bhi, prefix, out);
        break;
    }
    std::uint32_t d = prefix.length();
    std::size_t am = split_at(a, alo, ahi, d), bm = split_at(b, blo, bhi, d);
    std::size_t base = out.size();
    Cover c0 = op_rec(op, a, alo, am, b, blo, bm, prefix.append(false), out);
    if (c0 == Cover::full) out.push_back(prefix.append(false));
    Cover c1 = op_rec(op, a, am, ahi, b, bm, bhi, prefix.append(true), out);
    return merge_children(c0, c1, base, prefix, out);
  }

  static Cover comp_rec(const Span& v, std::size_t lo, std::size_t hi,
                        const BitString& prefix, std::vector<BitString>& out) {
    if (lo == hi) return Cover::full;
    if (span_full(v, lo, hi, prefix)) return Cover::empty;
    std::uint32_t d = prefix.length();
    std::size_t mid = split_at(v, lo, hi, d);
    std::size_t base = out.size();
    Cover c0 = comp_rec(v, lo, mid, prefix.append(false), out);
    if (c0 == Cover::full) out.push_back(prefix.append(false));
    Cover c1 = comp_rec(v, mid, hi, prefix.append(true), out);
    return merge_children(c0, c1, base, prefix, out);
  }

  // Raw input -> canonical: sort, dedupe, drop absorbed extensions, then one
  // rebuild pass to merge sibling pairs bottom-up.
  static void canonicalize(std::vector<BitString>& v) {
    std::sort(v.begin(), v.end(), TreeOrder{});
    v.erase(std::unique(v.begin(), v.end()), v.end());
    std::size_t kept = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (kept > 0 && v[kept - 1].is_prefix_of(v[i])) continue;
      v[kept++] = v[i];
    }
    v.resize(kept);
    std::vector<BitString> out;
    out.reserve(v.size());
    Cover c = rebuild_rec(v, 0, v.size(), BitString{}, out);
    if (c == Cover::full)
      v = {BitString{}};
    else
      v = std::move(out);
  }

  static Cover rebuild_rec(const Span& v, std::size_t lo, std::size_t hi,
                           const BitString& prefix, std::vector<BitString>& out) {
    if (lo == hi) return Cover::empty;
    if (span_full(v, lo, hi, prefix)) return Cover::full;
    std::uint32_t d = prefix.length();
    std::size_t mid = split_at(v, lo, hi, d);
    std::size_t base = out.size();
    Cover c0 = rebuild_rec(v, lo, mid, prefix.append(false), out);
    if (c0 == Cover::full) out.push_back(prefix.append(false));
    Cover c1 = rebuild_rec(v, mid, hi, prefix.append(true), out);
    return merge_children(c0, c1, base, prefix, out);
  }

  static BasicSet binary(Op op, const BasicSet& a, const BasicSet& b) {
    std::vector<BitString> out;
    Cover c = op_rec(op, a.elems_, 0, a.elems_.size(), b.elems_, 0, b.elems_.size(),
                     BitString{}, out);
    if (c == Cover::full) return full();
    return BasicSet(std::move(out), Canonical{});
  }

  std::vector<BitString> elems_;
};

// Every canonical basic set with measure >= threshold and min_level <= limit,
// each exactly once, ordered by min_level and then lexicographically on the
// min_level expansion. Index 0 is always {eps}. Deterministic, so stable
// across runs; this ordering is what the block schedule consumes.
inline std::vector<BasicSet> enumerate_basic_sets(Rational threshold,
                                                  std::uint32_t granularity_limit) {
  if (threshold.num == 0 || 2 * threshold.num > threshold.den)
    throw Error("threshold must lie in (0, 1/2]");
  if (granularity_limit > 4)
    throw Error("granularity beyond 4 is not enumerable at desk scale");
  // The full list is rebuilt by every schedule audit; memoize per parameter.
  using Key = std::tuple<std::uint64_t, std::uint64_t, std::uint32_t>;
  static std::mutex cache_mu;
  static std::map<Key, std::vector<BasicSet>> cache;
  const Key key{threshold.num, threshold.den, granularity_limit};
  {
    std::scoped_lock lock(cache_mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  std::vector<BasicSet> out;
  for (std::uint32_t m = 0; m <= granularity_limit; ++m) {
    std::uint64_t leaves = std::uint64_t{1} << m;
    std::vector<std::pair<std::vector<BitString>, BasicSet>> batch;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << leaves); ++mask) {
      std::vector<BitString> elems;
      for (std::uint64_t j = 0; j < leaves; ++j)
        if (mask & (std::uint64_t{1} << j)) elems.push_back(BitString(m, j));
      BasicSet s = BasicSet::from_strings(std::move(elems));
      if (s.min_level() != m) continue;  // already listed in a shallower batch
      if (s.measure() < threshold) continue;
      batch.emplace_back(s.represent_at(m), std::move(s));
    }
    std::sort(batch.begin(), batch.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    for (auto& [expansion, s] : batch) out.push_back(std::move(s));
  }
  std::scoped_lock lock(cache_mu);
  return cache.emplace(key, std::move(out)).first->second;
}

}  // namespace kcg
