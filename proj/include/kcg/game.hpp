// Copyright 2026 The kcgame Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "kcg/basic_set.hpp"
#include "kcg/bitstring.hpp"
#include "kcg/decompressor.hpp"
#include "kcg/dyadic.hpp"
#include "kcg/errors.hpp"
#include "kcg/universal_set.hpp"

namespace kcg {

struct EnumerationEvent {
  std::uint64_t t = 0;  // 1-based position in the enumeration
  BitString p, x;

  friend bool operator==(const EnumerationEvent&, const EnumerationEvent&) = default;
};

// Bob's side of the board: an enumeration of description-object pairs whose
// descriptions must be allowed, within depth, and pairwise incomparable.
class GameState {
 public:
  GameState(UniversalSet allowed, std::uint32_t depth_max)
      : allowed_(std::move(allowed)), depth_max_(depth_max) {
    if (depth_max_ > BitString::kMaxBits) throw DepthExceeded("depth bound too deep");
  }

  const UniversalSet& allowed() const { return allowed_; }
  std::uint32_t depth_max() const { return depth_max_; }
  std::uint64_t clock() const { return clock_; }
  const std::vector<EnumerationEvent>& events() const { return events_; }
  const DescriptionTable& table() const { return table_; }
  const BasicSet& shadow() const { return shadow_; }

  bool in_image(const BitString& x) const { return table_.in_image(x); }

  // A string is free while no enumerated description sits on its root path
  // or below it.
  bool is_free(const BitString& u) const {
    for (std::uint32_t k = 0; k < u.length(); ++k)
      if (domain_.count(u.prefix(k))) return false;
    auto it = domain_.lower_bound(u);
    return it == domain_.end() || !u.is_prefix_of(*it);
  }

  // Appends one pair to the enumeration, or throws without changing state:
  // DepthExceeded past the depth bound, NotAllowed outside the allowed set,
  // PrefixConflict when the description is comparable with an earlier one.
  void apply(const BitString& p, const BitString& x) {
    if (p.length() > depth_max_) throw DepthExceeded("description deeper than the bound: " + p.str());
    if (!allowed_.contains(p)) throw NotAllowed("description outside the allowed set: " + p.str());
    if (!is_free(p)) throw PrefixConflict("description comparable with the domain: " + p.str());
    table_.define(p, x);
    domain_.insert(p);
    shadow_ = shadow_.union_with(BasicSet::from_strings({p}));
    events_.push_back({++clock_, p, x});
  }

  // Strings of length n no enumerated description sits above or below.
  BasicSet free_set(std::uint32_t n) const { return shadow_.truncated(n).complement(); }

  // The allowed such strings.
  BasicSet free_allowed_set(std::uint32_t n) const {
    return allowed_.level_set(n).minus(shadow_.truncated(n));
  }

  // Fraction of all length-n strings that are free and allowed. Within one
  // block this never decreases as n grows, because every extension of a free
  // allowed string is still free and, the block's set being fixed, allowed.
  DyadicMeasure free_allowed_fraction(std::uint32_t n) const {
    return free_allowed_set(n).measure();
  }

  std::uint64_t free_allowed_count(std::uint32_t n) const {
    DyadicMeasure mu = free_allowed_fraction(n);
    return mu.num() << (n - mu.exp());
  }

 private:
  UniversalSet allowed_;
  std::uint32_t depth_max_;
  std::uint64_t clock_ = 0;
  std::vector<EnumerationEvent> events_;
  DescriptionTable table_;
  std::set<BitString, TreeOrder> domain_;
  BasicSet shadow_;
};

// One watcher per constant c. She waits for a block whose top level has
// fewer than an epsilon fraction of strings still free and allowed, then
// claims fresh objects slightly outnumbering what such a board can serve.
struct AliceConfig {
  std::uint32_t c = 1;

  explicit AliceConfig(std::uint32_t c_in) : c(c_in) {
    if (c == 0) throw Error("constant must be positive");
  }

  std::uint64_t min_thickness() const { return 3 * std::uint64_t{c}; }
  DyadicMeasure epsilon() const { return DyadicMeasure::pow2(-3 * static_cast<int>(c)); }
  DyadicMeasure budget() const { return DyadicMeasure::pow2(-static_cast<int>(c)); }
};

struct TriggerWindow {
  std::uint64_t l = 0, L = 0;

  friend bool operator==(const TriggerWindow&, const TriggerWindow&) = default;
};

struct FireRecord {
  std::uint64_t t = 0;  // clock value when fired
  std::uint32_t c = 0;
  std::uint64_t l = 0, L = 0;
  std::uint64_t N = 0;               // number of objects claimed
  DyadicMeasure fraction;            // free allowed fraction at level L, at fire time

  friend bool operator==(const FireRecord&, const FireRecord&) = default;
};

// Alice's claims ledger: at most one fire, objects claimed, and the mass
// granted per object; the total stays within budget 2^-c.
class AllocationLedger {
 public:
  explicit AllocationLedger(std::uint32_t c) : cfg_(c) {}

  const AliceConfig& config() const { return cfg_; }
  bool fired() const { return fire_.has_value(); }
  const std::optional<FireRecord>& fire() const { return fire_; }
  const std::vector<BitString>& targets() const { return targets_; }
  const std::map<BitString, DyadicMeasure>& grants() const { return grants_; }

  DyadicMeasure grant_of(const BitString& x) const {
    auto it = grants_.find(x);
    return it == grants_.end() ? DyadicMeasure::zero() : it->second;
  }

  DyadicMeasure total_granted() const {
    DyadicMeasure total = DyadicMeasure::zero();
    for (const auto& [x, q] : grants_) total = total.plus(q);
    return total;
  }

  void record_fire(FireRecord fr, std::vector<BitString> targets, DyadicMeasure grant_each) {
    if (fire_) throw AlreadyFired("already fired");
    if (grant_each.scaled(targets.size()) > cfg_.budget())
      throw BudgetExceeded("claims would exceed the budget");
    fire_ = fr;
    targets_ = std::move(targets);
    for (const BitString& x : targets_) grants_.emplace(x, grant_each);
  }

  // Reloads a fire as recorded elsewhere, without judging it; auditing a
  // reloaded ledger is the checker's job.
  void restore(FireRecord fr, const std::vector<std::pair<BitString, DyadicMeasure>>& grants) {
    if (fire_) throw AlreadyFired("already fired");
    fire_ = fr;
    for (const auto& [x, q] : grants) {
      targets_.push_back(x);
      grants_[x] = q;
    }
  }

 private:
  AliceConfig cfg_;
  std::optional<FireRecord> fire_;
  std::vector<BitString> targets_;
  std::map<BitString, DyadicMeasure> grants_;
};

// Mass granted across all watchers; bounded by sum of their budgets.
inline DyadicMeasure q_total(const std::vector<AllocationLedger>& ledgers) {
  DyadicMeasure total = DyadicMeasure::zero();
  for (const AllocationLedger& lg : ledgers) total = total.plus(lg.total_granted());
  return total;
}

// First block, in schedule order, that fits inside the depth bound, is at
// least 3c thick, and whose top level has free allowed fraction below
// epsilon = 2^-3c.
inline std::optional<TriggerWindow> scan_trigger(const GameState& st, const AliceConfig& cfg) {
  for (const Block& b : st.allowed().blocks_within_depth(st.depth_max())) {
    if (b.thickness() < cfg.min_thickness()) continue;
    if (st.free_allowed_fraction(static_cast<std::uint32_t>(b.hi())) < cfg.epsilon())
      return TriggerWindow{b.lo(), b.hi()};
  }
  return std::nullopt;
}

// Claims N = 2^(L-3c) + 2^l objects of length L+1, the first in value order
// among those not yet produced, each granted mass 2^(c-L). At fire time fewer
// than 2^(L-3c) descriptions of length l..L can still join the board, and
// fewer than 2^l of length below l exist at all, so the claims outnumber
// every possible future service and at least one object keeps shortest
// description length L or more for good.
inline FireRecord fire_allocation(const GameState& st, AllocationLedger& lg, TriggerWindow w) {
  if (lg.fired()) throw AlreadyFired("already fired");
  const std::uint32_t c = lg.config().c;
  const std::uint64_t l = w.l, L = w.L;
  if (L - l < lg.config().min_thickness()) throw Error("window thinner than 3c");
  if (L + 1 > BitString::kMaxBits) throw DepthExceeded("claimed objects too long");
  const std::uint64_t N = (std::uint64_t{1} << (L - 3 * c)) + (std::uint64_t{1} << l);
  const std::uint32_t len = static_cast<std::uint32_t>(L + 1);
  std::vector<BitString> targets;
  targets.reserve(N);
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << len) && targets.size() < N; ++v) {
    BitString x(len, v);
    if (!st.in_image(x)) targets.push_back(x);
  }
  if (targets.size() < N) throw Error("not enough fresh objects at length " + std::to_string(len));
  FireRecord fr{st.clock(), c, l, L, N,
                st.free_allowed_fraction(static_cast<std::uint32_t>(L))};
  lg.record_fire(fr, std::move(targets), DyadicMeasure::pow2(static_cast<int>(c) - static_cast<int>(L)));
  return fr;
}

struct WinWitness {
  std::uint32_t c = 0;
  BitString x;
  MinLength len = MinLength::infinite();
};

// Claimed objects whose shortest description length reached L or stayed
// undefined. Nonempty whenever some watcher fired, by the counting bound.
inline std::vector<WinWitness> check_win(const GameState& st,
                                         const std::vector<AllocationLedger>& ledgers) {
  std::vector<WinWitness> out;
  for (const AllocationLedger& lg : ledgers) {
    if (!lg.fired()) continue;
    for (const BitString& x : lg.targets()) {
      MinLength ml = st.table().min_length(x);
      if (ml.at_least(lg.fire()->L)) out.push_back({lg.config().c, x, ml});
    }
  }
  return out;
}

// Bob's callback interface: sees the full board and ledgers, proposes the
// next pair or stops.
struct BobView {
  const GameState& state;
  const std::vector<AllocationLedger>& ledgers;
};

using BobFn = std::function<std::optional<std::pair<BitString, BitString>>(const BobView&)>;

inline const AllocationLedger* find_ledger(const std::vector<AllocationLedger>& ledgers,
                                           std::uint32_t c) {
  for (const AllocationLedger& lg : ledgers)
    if (lg.config().c == c) return &lg;
  return nullptr;
}

}  // namespace kcg
