// Copyright 2026 The kcgame Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "kcg/game.hpp"

namespace kcg {

// Plays back a fixed list of pairs, ignoring the board.
inline BobFn make_replay_bob(std::vector<EnumerationEvent> events) {
  auto idx = std::make_shared<std::size_t>(0);
  return [events = std::move(events), idx](const BobView&) -> std::optional<std::pair<BitString, BitString>> {
    if (*idx >= events.size()) return std::nullopt;
    const EnumerationEvent& e = events[(*idx)++];
    return std::make_pair(e.p, e.x);
  };
}

// Serves a list of requested description lengths with the leftmost free
// allowed string of each length, mapped to itself. Unservable requests are
// dropped.
inline BobFn make_greedy_kc_bob(std::vector<std::uint32_t> lengths) {
  auto idx = std::make_shared<std::size_t>(0);
  return [lengths = std::move(lengths), idx](const BobView& v) -> std::optional<std::pair<BitString, BitString>> {
    while (*idx < lengths.size()) {
      const std::uint32_t n = lengths[(*idx)++];
      if (n > v.state.depth_max()) continue;
      if (v.state.free_allowed_count(n) == 0) continue;
      BitString p = v.state.free_allowed_set(n).nth_at_level(n, 0);
      return std::make_pair(p, p);
    }
    return std::nullopt;
  };
}

// Pushes the deepest block that watcher c can see below its trigger by
// enumerating random free allowed strings at the block's first level, then
// tries to serve her claimed objects cheapest first. The service phase runs
// out of room long before the claims run out.
inline BobFn make_adversarial_bob(std::uint64_t seed, std::uint32_t c) {
  auto rng = std::make_shared<std::mt19937_64>(seed);
  return [rng, c](const BobView& v) -> std::optional<std::pair<BitString, BitString>> {
    const GameState& st = v.state;
    std::vector<Block> blocks = st.allowed().blocks_within_depth(st.depth_max());
    const Block* deepest = nullptr;
    for (const Block& b : blocks)
      if (b.thickness() >= 3 * std::uint64_t{c}) deepest = &b;
    const AllocationLedger* lg = find_ledger(v.ledgers, c);
    if (!deepest || !lg) return std::nullopt;
    if (!lg->fired()) {
      const std::uint32_t n = static_cast<std::uint32_t>(deepest->lo());
      const std::uint64_t cnt = st.free_allowed_count(n);
      if (cnt == 0) return std::nullopt;
      BitString p = st.free_allowed_set(n).nth_at_level(n, (*rng)() % cnt);
      return std::make_pair(p, p);
    }
    for (const BitString& x : lg->targets()) {
      if (st.in_image(x)) continue;
      for (std::uint32_t n = 0; n <= st.depth_max(); ++n) {
        if (st.free_allowed_count(n) == 0) continue;
        return std::make_pair(st.free_allowed_set(n).nth_at_level(n, 0), x);
      }
      return std::nullopt;
    }
    return std::nullopt;
  };
}

// Enumerates a uniformly random free allowed string at a uniformly random
// level, mapped to itself; gives up once every level is exhausted.
inline BobFn make_random_bob(std::uint64_t seed) {
  auto rng = std::make_shared<std::mt19937_64>(seed);
  return [rng](const BobView& v) -> std::optional<std::pair<BitString, BitString>> {
    const GameState& st = v.state;
    const std::uint32_t depth = st.depth_max();
    if (depth == 0) return std::nullopt;
    for (std::uint32_t tries = 0; tries < 8 * depth; ++tries) {
      const std::uint32_t n = 1 + static_cast<std::uint32_t>((*rng)() % depth);
      const std::uint64_t cnt = st.free_allowed_count(n);
      if (cnt == 0) continue;
      BitString p = st.free_allowed_set(n).nth_at_level(n, (*rng)() % cnt);
      return std::make_pair(p, p);
    }
    for (std::uint32_t n = 1; n <= depth; ++n) {
      const std::uint64_t cnt = st.free_allowed_count(n);
      if (cnt == 0) continue;
      BitString p = st.free_allowed_set(n).nth_at_level(n, (*rng)() % cnt);
      return std::make_pair(p, p);
    }
    return std::nullopt;
  };
}

}  // namespace kcg
