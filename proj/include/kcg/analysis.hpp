// Copyright 2026 The kcgame Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kcg/game.hpp"
#include "kcg/strategies.hpp"
#include "kcg/trace.hpp"

namespace kcg {

// Layer guarantee at one level: the allowed fraction never drops below the
// schedule's threshold, because only sets of measure at least threshold get
// scheduled and unscheduled levels allow everything.
struct DensityReport {
  std::uint64_t level = 0;
  DyadicMeasure allowed;
  bool ok = false;
};

inline DensityReport density_check(const UniversalSet& A, std::uint64_t m) {
  const Block* b = A.block_at_level(m);
  DyadicMeasure mu = b ? b->set.measure() : DyadicMeasure::one();
  return {m, mu, !(mu < A.threshold())};
}

enum class BStop { below_epsilon, density_contradiction, exhausted };

inline std::string_view bstop_name(BStop r) {
  switch (r) {
    case BStop::below_epsilon: return "below-epsilon";
    case BStop::density_contradiction: return "density-contradiction";
    case BStop::exhausted: return "exhausted";
  }
  return "?";
}

struct BStep {
  std::uint32_t block_k = 0;
  std::uint64_t l = 0, L = 0;
  BasicSet set;          // free mass at level L not claimed by earlier steps
  DyadicMeasure measure;
};

struct BSequence {
  std::vector<BStep> steps;
  BStop reason = BStop::exhausted;
  std::optional<std::uint32_t> stop_block;  // block that came in under epsilon
};

// Walks the thick blocks within depth, collecting at each one the free mass
// at its top level that earlier steps did not already claim. The pieces are
// pairwise disjoint, so once their total reaches the threshold the walk has
// soaked up as much as any single level could hold and stops; a piece below
// epsilon stops it too, and that is exactly a trigger for watcher c.
inline BSequence b_sequence(const GameState& st, const AliceConfig& cfg) {
  BSequence out;
  BasicSet claimed;
  DyadicMeasure total = DyadicMeasure::zero();
  for (const Block& b : st.allowed().blocks_within_depth(st.depth_max())) {
    if (b.thickness() < cfg.min_thickness()) continue;
    BasicSet piece = st.free_set(static_cast<std::uint32_t>(b.hi())).minus(claimed);
    DyadicMeasure mu = piece.measure();
    if (mu < cfg.epsilon()) {
      out.reason = BStop::below_epsilon;
      out.stop_block = b.k;
      return out;
    }
    out.steps.push_back({b.k, b.lo(), b.hi(), piece, mu});
    claimed = claimed.union_with(piece);
    total = total.plus(mu);
    if (!(total < st.allowed().threshold())) {
      out.reason = BStop::density_contradiction;
      return out;
    }
  }
  out.reason = BStop::exhausted;
  return out;
}

struct AuditReport {
  bool ok = true;
  std::vector<std::string> problems;
};

// Replays a trace from scratch and checks every fire against what the rules
// force at that moment: the window, the claim count N = 2^(L-3c) + 2^l, the
// exact objects (first fresh ones in value order), the per-object grant
// 2^(c-L), the budget, and finally that every fired watcher keeps at least
// one claimed object at shortest description length L or beyond. Any edit to
// a fire, grant, or event shows up as a problem.
inline AuditReport counting_lemma_audit(const GameTrace& tr) {
  AuditReport rep;
  auto flag = [&rep](std::string s) {
    rep.ok = false;
    rep.problems.push_back(std::move(s));
  };
  if (tr.header.granularity == 0) {
    flag("hand-built schedule; nothing to rebuild the board from");
    return rep;
  }
  UniversalSet A(tr.header.threshold, tr.header.granularity);
  GameState st(A, tr.header.depth_max);
  std::vector<AllocationLedger> ledgers;
  for (std::uint32_t c : tr.header.alice_cs) ledgers.emplace_back(c);

  std::size_t fi = 0;
  for (const EnumerationEvent& e : tr.events) {
    try {
      st.apply(e.p, e.x);
    } catch (const Error& err) {
      flag("event " + std::to_string(e.t) + " is illegal: " + err.what());
      return rep;
    }
    if (e.t != st.clock()) flag("event numbered " + std::to_string(e.t) + " lands at " + std::to_string(st.clock()));
    for (AllocationLedger& lg : ledgers) {
      if (lg.fired()) continue;
      auto w = scan_trigger(st, lg.config());
      if (!w) continue;
      FireRecord fr = fire_allocation(st, lg, *w);
      if (fi >= tr.fires.size()) {
        flag("fire of watcher " + std::to_string(fr.c) + " at t=" + std::to_string(fr.t) +
             " missing from the trace");
        continue;
      }
      const FireRecord& want = tr.fires[fi++];
      if (want.t != fr.t || want.c != fr.c)
        flag("fire order: trace says watcher " + std::to_string(want.c) + " at t=" +
             std::to_string(want.t) + ", rules say watcher " + std::to_string(fr.c) + " at t=" +
             std::to_string(fr.t));
      if (want.l != fr.l || want.L != fr.L)
        flag("window of watcher " + std::to_string(fr.c) + ": trace says (" +
             std::to_string(want.l) + ", " + std::to_string(want.L) + "), rules say (" +
             std::to_string(fr.l) + ", " + std::to_string(fr.L) + ")");
      if (want.N != fr.N)
        flag("claim count of watcher " + std::to_string(fr.c) + ": trace says " +
             std::to_string(want.N) + ", rules say " + std::to_string(fr.N));
      const AllocationLedger* tlg = find_ledger(tr.ledgers, fr.c);
      if (!tlg || !tlg->fired()) {
        flag("trace ledger of watcher " + std::to_string(fr.c) + " never fired");
        continue;
      }
      if (tlg->targets() != lg.targets())
        flag("claimed objects of watcher " + std::to_string(fr.c) + " differ from the rules");
      if (tlg->grants() != lg.grants())
        flag("grants of watcher " + std::to_string(fr.c) + " differ from the rules");
      if (tlg->total_granted() > lg.config().budget())
        flag("grants of watcher " + std::to_string(fr.c) + " exceed the budget");
    }
  }
  if (fi < tr.fires.size()) flag("trace holds fire records the rules never produce");

  if (tr.violation) {
    bool rejected = false;
    try {
      st.apply(tr.violation->p, tr.violation->x);
    } catch (const Error&) {
      rejected = true;
    }
    if (!rejected) flag("recorded violation replays cleanly");
  }

  for (const AllocationLedger& lg : ledgers) {
    if (!lg.fired()) continue;
    bool witness = false;
    for (const BitString& x : lg.targets())
      if (st.table().min_length(x).at_least(lg.fire()->L)) {
        witness = true;
        break;
      }
    if (!witness)
      flag("every claim of watcher " + std::to_string(lg.config().c) +
           " got a short description, which the counting bound rules out");
  }
  return rep;
}

struct VerifyReport {
  bool ok = false;
  std::string reason;
};

// Parses a trace, replays its events against a fresh board built from the
// header, and demands the rerun serialize to the identical bytes. The
// checksum catches any flipped bit up front; the rerun catches records that
// are well formed but wrong.
inline VerifyReport replay_verify(std::string_view text) {
  GameTrace tr;
  try {
    tr = read_trace(text);
  } catch (const ParseError& e) {
    return {false, e.what()};
  }
  if (tr.header.granularity == 0)
    return {false, "hand-built schedule; nothing to rebuild the board from"};
  try {
    UniversalSet A(tr.header.threshold, tr.header.granularity);
    std::vector<EnumerationEvent> evs = tr.events;
    if (tr.violation) evs.push_back({0, tr.violation->p, tr.violation->x});
    RunOptions opt;
    opt.depth_max = tr.header.depth_max;
    opt.alice_cs = tr.header.alice_cs;
    opt.step_limit = tr.header.step_limit;
    opt.bob_label = tr.header.bob;
    opt.seed = tr.header.seed;
    GameTrace re = run_game(A, opt, make_replay_bob(std::move(evs)));
    if (write_trace(re) != text) return {false, "replay diverges from the recorded run"};
  } catch (const Error& e) {
    return {false, std::string("replay failed: ") + e.what()};
  }
  return {true, ""};
}

}  // namespace kcg
