// Copyright 2026 The kcgame Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <mutex>
#include <optional>
#include <utility>
#include <vector>

#include "kcg/basic_set.hpp"
#include "kcg/dyadic.hpp"
#include "kcg/errors.hpp"

namespace kcg {

// One schedule entry: levels lo..hi (hi = 2*lo) all carry `set`, meaning a
// string of such a length is allowed iff its interval sits inside `set`.
// Levels deeper than 2^61 are not representable in a word; such blocks keep
// their position in the schedule but expose no level range.
struct Block {
  std::uint32_t k = 0;          // 1-based position in the schedule
  std::size_t set_index = 0;    // 1-based index into the enumeration
  BasicSet set;
  std::optional<std::pair<std::uint64_t, std::uint64_t>> levels;

  std::uint64_t lo() const { return levels->first; }
  std::uint64_t hi() const { return levels->second; }
  std::uint64_t thickness() const { return hi() - lo(); }
};

// The layered allowed set A. Block k carries the i-th enumerated basic set
// where (i, j) is the k-th pair of the diagonal walk over N x N, so every
// enumerated set recurs in infinitely many blocks. Levels not claimed by any
// block allow everything. Each level keeps at least a `threshold` fraction
// of its strings allowed, because every scheduled set has measure >=
// threshold.
//
// Immutable after construction; the schedule cache extends lazily behind a
// mutex, so concurrent readers see as-if-sequential behavior.
class UniversalSet {
 public:
  explicit UniversalSet(Rational threshold = Rational(1, 3),
                        std::uint32_t granularity_limit = 4)
      : impl_(std::make_shared<Impl>()) {
    if (threshold.num == 0 || 2 * threshold.num > threshold.den)
      throw Error("threshold must lie in (0, 1/2]");
    impl_->threshold = threshold;
    impl_->granularity = granularity_limit;
    impl_->enumeration = enumerate_basic_sets(threshold, granularity_limit);
  }

  // Hand-built finite schedule, mostly for tests: levels must be disjoint and
  // increasing, each block [lo, 2lo] with lo >= max(1, min_level(set)) and
  // measure(set) >= threshold. Levels outside every block allow everything.
  static UniversalSet with_blocks(std::vector<std::pair<std::uint64_t, BasicSet>> blocks,
                                  Rational threshold = Rational(1, 3)) {
    UniversalSet u(std::make_shared<Impl>());
    u.impl_->threshold = threshold;
    u.impl_->finite = true;
    std::uint64_t prev_hi = 0;
    std::uint32_t k = 1;
    for (auto& [lo, set] : blocks) {
      if (lo <= prev_hi || lo < 1) throw Error("block levels must increase");
      if (lo < set.min_level()) throw Error("block too shallow for its set");
      if (set.measure() < threshold) throw Error("block set below threshold");
      Block b;
      b.k = k++;
      b.set_index = 0;  // not drawn from an enumeration
      b.set = std::move(set);
      b.levels = {{lo, 2 * lo}};
      prev_hi = 2 * lo;
      u.impl_->blocks.push_back(std::move(b));
    }
    return u;
  }

  Rational threshold() const { return impl_->threshold; }

  // Zero for a hand-built schedule.
  std::uint32_t granularity() const { return impl_->granularity; }

  const std::vector<BasicSet>& enumeration() const { return impl_->enumeration; }

  // First K schedule entries.
  std::vector<Block> schedule_prefix(std::uint32_t K) const {
    std::scoped_lock lock(impl_->mu);
    ensure_blocks(K);
    std::vector<Block> out;
    out.reserve(std::min<std::size_t>(K, impl_->blocks.size()));
    for (std::size_t i = 0; i < impl_->blocks.size() && i < K; ++i)
      out.push_back(impl_->blocks[i]);
    return out;
  }

  // All schedule entries whose level range fits within `depth`.
  std::vector<Block> blocks_within_depth(std::uint64_t depth) const {
    std::scoped_lock lock(impl_->mu);
    while (!impl_->finite) {
      if (!impl_->blocks.empty()) {
        const Block& last = impl_->blocks.back();
        if (!last.levels || last.hi() > depth) break;
      }
      extend_one();
    }
    std::vector<Block> out;
    for (const Block& b : impl_->blocks) {
      if (!b.levels || b.hi() > depth) break;
      out.push_back(b);
    }
    return out;
  }

  // The block owning level m, or nullptr when m lies outside every block.
  // The pointer stays valid for the lifetime of this set.
  const Block* block_at_level(std::uint64_t m) const {
    if (m == 0) return nullptr;
    std::scoped_lock lock(impl_->mu);
    while (!impl_->finite) {
      if (!impl_->blocks.empty()) {
        const Block& last = impl_->blocks.back();
        if (!last.levels || last.hi() >= m) break;
      }
      extend_one();
    }
    for (const Block& b : impl_->blocks) {
      if (!b.levels) break;
      if (b.lo() > m) break;
      if (m <= b.hi()) return &b;
    }
    return nullptr;
  }

  bool contains(const BitString& x) const {
    const Block* b = block_at_level(x.length());
    return b == nullptr || b->set.contains_interval(x);
  }

  // Allowed strings of length m, as a basic set.
  BasicSet level_set(std::uint64_t m) const {
    const Block* b = block_at_level(m);
    return b ? b->set : BasicSet::full();
  }

  std::uint64_t allowed_count(std::uint64_t m) const {
    if (m > BitString::kMaxBits) throw DepthExceeded("level too deep to count");
    const Block* b = block_at_level(m);
    if (!b) return std::uint64_t{1} << m;
    DyadicMeasure mu = b->set.measure();
    return mu.num() << (m - mu.exp());
  }

 private:
  struct Impl {
    Rational threshold;
    std::uint32_t granularity = 0;
    std::vector<BasicSet> enumeration;
    bool finite = false;
    mutable std::mutex mu;
    mutable std::deque<Block> blocks;
    mutable std::uint64_t diag_d = 1, diag_r = 0;
  };

  explicit UniversalSet(std::shared_ptr<Impl> impl) : impl_(std::move(impl)) {}

  // Requires impl_->mu held.
  void ensure_blocks(std::uint32_t K) const {
    while (!impl_->finite && impl_->blocks.size() < K) extend_one();
  }

  // Requires impl_->mu held. Appends the next block of the diagonal walk,
  // skipping pairs whose set index falls beyond the enumeration.
  void extend_one() const {
    Impl& im = *impl_;
    std::size_t i;
    do {
      if (++im.diag_r > im.diag_d) {
        ++im.diag_d;
        im.diag_r = 1;
      }
      i = im.diag_r;
    } while (i > im.enumeration.size());
    Block b;
    b.k = static_cast<std::uint32_t>(im.blocks.size() + 1);
    b.set_index = i;
    b.set = im.enumeration[i - 1];
    bool prev_ok = im.blocks.empty() || im.blocks.back().levels.has_value();
    if (prev_ok) {
      std::uint64_t prev_hi = im.blocks.empty() ? 0 : im.blocks.back().hi();
      std::uint64_t lo = std::max<std::uint64_t>({prev_hi + 1, b.set.min_level(), 1});
      if (lo <= (std::uint64_t{1} << 61)) b.levels = {{lo, 2 * lo}};
    }
    im.blocks.push_back(std::move(b));
  }

  std::shared_ptr<Impl> impl_;
};

}  // namespace kcg
