// Copyright 2026 The kcgame Authors
// SPDX-License-Identifier: Apache-2.0
//
// End-to-end checks, one verdict line each, exercising the library the way a
// release gate would: exact mass accounting, schedule shape, game invariants
// under random play, and offline verification of recorded runs.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "kcg/kcg.hpp"

namespace {

using kcg::AliceConfig;
using kcg::AllocationLedger;
using kcg::BasicSet;
using kcg::BitString;
using kcg::DyadicMeasure;
using kcg::EnumerationEvent;
using kcg::GameState;
using kcg::GameTrace;
using kcg::RunOptions;
using kcg::UniversalSet;

int g_failures = 0;

class Criterion {
 public:
  Criterion(int num, std::string label) : num_(num), label_(std::move(label)) {}

  void expect(bool ok, const std::string& detail) {
    if (ok) return;
    failed_ = true;
    if (first_problem_.empty()) first_problem_ = detail;
  }

  void finish() {
    if (failed_) {
      ++g_failures;
      std::printf("FAIL criterion-%02d %s: %s\n", num_, label_.c_str(), first_problem_.c_str());
    } else {
      std::printf("PASS criterion-%02d %s\n", num_, label_.c_str());
    }
    std::fflush(stdout);
  }

  void run(const std::function<void(Criterion&)>& body) {
    try {
      body(*this);
    } catch (const std::exception& e) {
      expect(false, std::string("threw: ") + e.what());
    }
    finish();
  }

 private:
  int num_;
  std::string label_;
  bool failed_ = false;
  std::string first_problem_;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Criterion 1: over long random request streams the allocator serves exactly
// the requests that fit in the remaining mass, keeps all served strings
// pairwise incomparable, and accounts for every served bit.
void kraft_soundness(Criterion& cr) {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(101);
  for (int stream = 0; stream < 1000; ++stream) {
    kcg::KraftAllocator alloc;
    std::vector<BitString> served;
    DyadicMeasure spent = DyadicMeasure::zero();
    const int requests = 64 + static_cast<int>(rng() % 449);
    for (int i = 0; i < requests; ++i) {
      std::uint32_t n = static_cast<std::uint32_t>(rng() % 13);
      if (rng() % 50 == 0) n = 13 + static_cast<std::uint32_t>(rng() % 50);
      const bool fits = !(alloc.remaining() < DyadicMeasure::pow2(-static_cast<int>(n)));
      bool got = true;
      BitString p;
      try {
        p = alloc.allocate(n);
      } catch (const kcg::KraftExceeded&) {
        got = false;
      }
      if (got != fits) cr.expect(false, "serving disagrees with the mass oracle");
      if (!got) continue;
      if (p.length() != n) cr.expect(false, "wrong length served");
      for (const BitString& q : served)
        if (p.comparable(q)) cr.expect(false, p.str() + " overlaps " + q.str());
      served.push_back(p);
      spent = spent.plus(DyadicMeasure::pow2(-static_cast<int>(n)));
      if (!(alloc.remaining() == DyadicMeasure::one().minus(spent)))
        cr.expect(false, "remaining mass out of step with the served total");
    }
  }
  cr.expect(seconds_since(t0) < 10.0, "took too long");
}

// Criterion 2: the unit of mass is sharp; once it is spent every further
// request of every length is refused.
void kraft_boundary(Criterion& cr) {
  kcg::KraftAllocator alloc;
  bool ok = true;
  try {
    alloc.allocate(1);
    alloc.allocate(1);
  } catch (const kcg::KraftExceeded&) {
    ok = false;
  }
  cr.expect(ok, "two halves must fit");
  cr.expect(alloc.remaining() == DyadicMeasure::zero(), "mass left after two halves");
  std::mt19937_64 rng(202);
  for (int i = 0; i < 10000; ++i) {
    const std::uint32_t n = static_cast<std::uint32_t>(rng() % 63);
    bool refused = false;
    try {
      alloc.allocate(n);
    } catch (const kcg::KraftExceeded&) {
      refused = true;
    }
    cr.expect(refused, "request served from an exhausted allocator");
  }
}

// Criterion 3: every level of the allowed set keeps at least a third of its
// strings, counted exactly, and scheduled layers are the block set spread to
// the layer's depth.
void layer_density(Criterion& cr) {
  const auto t0 = std::chrono::steady_clock::now();
  UniversalSet A;
  for (std::uint32_t m = 1; m <= 16; ++m) {
    std::vector<BitString> brute;
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << m); ++v) {
      BitString u(m, v);
      if (A.contains(u)) brute.push_back(u);
    }
    cr.expect(A.allowed_count(m) == brute.size(), "allowed_count disagrees with brute force");
    cr.expect(3 * brute.size() >= (std::uint64_t{1} << m), "level thinner than a third");
    const kcg::Block* b = A.block_at_level(m);
    if (b && b->hi() <= 16)
      cr.expect(b->set.represent_at(m) == brute,
                "scheduled layer differs from the block set spread to its depth");
  }
  for (std::uint64_t m = 1; m <= 24; ++m)
    cr.expect(kcg::density_check(A, m).ok, "density check failed");
  cr.expect(seconds_since(t0) < 30.0, "took too long");
}

// Criterion 4: the schedule is one gapless chain of doubling blocks, and
// every small set keeps coming back.
void schedule_recurrence(Criterion& cr) {
  UniversalSet A;
  auto blocks = A.schedule_prefix(200);
  cr.expect(blocks.size() == 200, "short schedule");
  std::vector<int> uses(6, 0);
  std::uint64_t prev_hi = 0;
  for (const kcg::Block& b : blocks) {
    if (b.set_index <= 5) ++uses[b.set_index];
    if (!b.levels) continue;
    cr.expect(b.lo() == prev_hi + 1, "gap between blocks");
    cr.expect(b.hi() == 2 * b.lo(), "block does not double");
    prev_hi = b.hi();
  }
  for (int i = 1; i <= 5; ++i)
    cr.expect(uses[i] >= 3, "an early set shows up fewer than three times");
}

// Criterion 5: during random play the free allowed fraction never shrinks
// when moving deeper inside one block, and freeness matches its definition.
void fraction_monotonicity(Criterion& cr) {
  std::mt19937_64 rng(505);
  UniversalSet A;
  const std::uint32_t depth = 12;
  for (int round = 0; round < 100; ++round) {
    auto inner = kcg::make_random_bob(rng());
    auto checked = [&cr, &inner, &rng](const kcg::BobView& v)
        -> std::optional<std::pair<BitString, BitString>> {
      const GameState& st = v.state;
      for (std::uint32_t n = 1; n + 1 <= st.depth_max(); ++n) {
        const kcg::Block* a = st.allowed().block_at_level(n);
        const kcg::Block* b = st.allowed().block_at_level(n + 1);
        if (a && a == b)
          cr.expect(!(st.free_allowed_fraction(n + 1) < st.free_allowed_fraction(n)),
                    "fraction shrank from level " + std::to_string(n));
      }
      for (int probe = 0; probe < 5; ++probe) {
        const std::uint32_t n = 1 + static_cast<std::uint32_t>(rng() % st.depth_max());
        BitString u(n, rng() % (std::uint64_t{1} << n));
        bool comparable = false;
        for (const EnumerationEvent& e : st.events())
          if (u.comparable(e.p)) comparable = true;
        cr.expect(st.is_free(u) == !comparable, "freeness disagrees with the event list");
      }
      return inner(v);
    };
    RunOptions opt;
    opt.depth_max = depth;
    opt.bob_label = "random";
    GameTrace tr = run_game(A, opt, checked);
    cr.expect(!tr.violation.has_value(), "random play violated the rules");
  }
}

// Criterion 6: granted mass never outruns any watcher's budget at any point,
// and a depth-12 board fires watcher 1 on the exact-budget window only.
void ledger_conservation(Criterion& cr, std::vector<std::string>& trace_texts) {
  std::mt19937_64 rng(606);
  UniversalSet A;
  int fires_seen = 0;
  for (int round = 0; round < 100; ++round) {
    auto inner = kcg::make_random_bob(rng());
    auto checked = [&cr, &inner](const kcg::BobView& v)
        -> std::optional<std::pair<BitString, BitString>> {
      DyadicMeasure cap = DyadicMeasure::zero();
      for (const AllocationLedger& lg : v.ledgers) {
        cr.expect(!(lg.config().budget() < lg.total_granted()), "a ledger went over budget");
        cap = cap.plus(lg.config().budget());
        if (lg.config().c == 2)
          cr.expect(!lg.fired(), "watcher 2 fired though no block within depth is thick enough");
        if (lg.config().c == 1 && lg.fired())
          cr.expect(lg.total_granted() == DyadicMeasure::pow2(-1),
                    "watcher 1 fired off the exact-budget window");
      }
      cr.expect(!(cap < kcg::q_total(v.ledgers)), "granted mass exceeds the combined budgets");
      return inner(v);
    };
    RunOptions opt;
    opt.depth_max = 12;
    opt.alice_cs = {1, 2};
    opt.bob_label = "random";
    opt.seed = static_cast<std::uint64_t>(round);
    GameTrace tr = run_game(A, opt, checked);
    for (const kcg::FireRecord& fr : tr.fires) {
      ++fires_seen;
      cr.expect(fr.c == 1, "unexpected watcher fired");
      cr.expect(fr.l == 3 && fr.L == 6 && fr.N == 16, "wrong window or claim count");
    }
    trace_texts.push_back(kcg::write_trace(tr));
  }
  cr.expect(fires_seen >= 1, "no random run ever drained a block");
}

// Criterion 7: the adversarial drain always forces the same fire, the board
// serves at least one claim but can never serve them all, and the audit
// re-derives every recorded fire.
void counting_dichotomy(Criterion& cr, std::vector<std::string>& trace_texts,
                        std::vector<GameTrace>& fired_traces) {
  const auto t0 = std::chrono::steady_clock::now();
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    RunOptions opt;
    opt.depth_max = 14;
    opt.bob_label = "adversarial";
    opt.seed = seed;
    GameTrace tr = run_game(UniversalSet{}, opt, kcg::make_adversarial_bob(seed, 1));
    cr.expect(!tr.violation.has_value(), "adversary violated the rules");
    cr.expect(tr.fires.size() == 1, "expected exactly one fire");
    if (tr.fires.size() == 1) {
      const kcg::FireRecord& fr = tr.fires[0];
      cr.expect(fr.t == 49 && fr.c == 1 && fr.l == 7 && fr.L == 14 && fr.N == 2176,
                "fire departs from the forced drain pattern");
    }
    GameState st(UniversalSet{}, 14);
    for (const EnumerationEvent& e : tr.events) st.apply(e.p, e.x);
    std::size_t served = 0;
    for (const BitString& x : tr.ledgers[0].targets())
      if (st.in_image(x)) ++served;
    cr.expect(served >= 1, "board never answered a single claim");
    cr.expect(served < tr.ledgers[0].targets().size(), "board answered every claim");
    cr.expect(kcg::counting_lemma_audit(tr).ok, "audit rejected an honest run");
    trace_texts.push_back(kcg::write_trace(tr));
    fired_traces.push_back(std::move(tr));
  }
  if (!fired_traces.empty()) {
    GameTrace forged = fired_traces.front();
    forged.fires[0].N += 1;
    cr.expect(!kcg::counting_lemma_audit(forged).ok, "audit accepted a doctored claim count");
  }
  cr.expect(seconds_since(t0) < 60.0, "took too long");
}

// Criterion 8: whenever a watcher fired, some claimed object still lacks any
// description shorter than the window's top level.
void win_witness(Criterion& cr, const std::vector<GameTrace>& fired_traces,
                 const std::vector<std::string>& all_texts) {
  int boards_with_fires = 0;
  auto check_trace = [&cr, &boards_with_fires](const GameTrace& tr) {
    if (tr.fires.empty()) return;
    ++boards_with_fires;
    UniversalSet A(tr.header.threshold, tr.header.granularity);
    GameState st(A, tr.header.depth_max);
    for (const EnumerationEvent& e : tr.events) st.apply(e.p, e.x);
    auto wits = kcg::check_win(st, tr.ledgers);
    cr.expect(!wits.empty(), "a fired board has no surviving claim");
    for (const kcg::WinWitness& w : wits)
      cr.expect(w.len.at_least(tr.fires[0].L), "witness below the bar");
  };
  for (const GameTrace& tr : fired_traces) check_trace(tr);
  for (const std::string& text : all_texts) check_trace(kcg::read_trace(text));
  cr.expect(boards_with_fires >= 100, "too few fired boards to call this covered");
}

// Criterion 9: remapping descriptions into the allowed set keeps the table's
// shape: same size, prefix freeness preserved, every description allowed,
// every shortest length exactly two longer.
void rebase_shift(Criterion& cr) {
  std::mt19937_64 rng(909);
  UniversalSet A;
  for (int round = 0; round < 100; ++round) {
    kcg::DescriptionTable t;
    std::set<BitString, kcg::TreeOrder> dom;
    for (int i = 0; i < 16; ++i) {
      const std::uint32_t n = 1 + static_cast<std::uint32_t>(rng() % 9);
      BitString p(n, rng() % (std::uint64_t{1} << n));
      auto it = dom.lower_bound(p);
      if (it != dom.end() && p.comparable(*it)) continue;
      if (it != dom.begin() && p.comparable(*std::prev(it))) continue;
      dom.insert(p);
      t.define(p, BitString(6, rng() % 64));
    }
    kcg::DescriptionTable v = kcg::rebase(t, A);
    cr.expect(v.size() == t.size(), "entries lost in the remap");
    cr.expect(t.prefix_free() && v.prefix_free(), "prefix freeness lost in the remap");
    std::set<BitString> objects;
    for (const auto& [p, x] : v) {
      cr.expect(A.contains(p), "remapped description is not allowed");
      objects.insert(x);
    }
    for (const BitString& x : objects)
      cr.expect(kcg::c_of(v, x).value() == kcg::c_of(t, x).value() + 2,
                "shortest length shifted by something other than two");
  }
}

// Criterion 10: the disjoint-piece walk over a finished board reproduces the
// scripted pieces bit for bit.
void free_piece_walk(Criterion& cr) {
  auto drained = [](const std::vector<std::string>& descriptions) {
    GameState st(UniversalSet{}, 12);
    for (const std::string& s : descriptions) {
      BitString p = BitString::parse(s);
      st.apply(p, p);
    }
    return st;
  };
  {
    GameState st = drained({"10", "110"});
    auto seq = kcg::b_sequence(st, AliceConfig(1));
    cr.expect(seq.steps.size() == 1, "wrong step count");
    cr.expect(!seq.steps.empty() && seq.steps[0].set == BasicSet::of({"0", "111"}),
              "wrong first piece");
    cr.expect(seq.reason == kcg::BStop::density_contradiction, "walk should hit the threshold");
  }
  {
    GameState st = drained({"0", "10", "110"});
    auto seq = kcg::b_sequence(st, AliceConfig(1));
    cr.expect(seq.steps.size() == 1, "wrong step count");
    cr.expect(!seq.steps.empty() && seq.steps[0].set == BasicSet::of({"111"}),
              "wrong first piece");
    cr.expect(seq.reason == kcg::BStop::exhausted, "walk should run out of blocks");
  }
  {
    GameState st = drained({"0", "10", "110", "1110"});
    auto seq = kcg::b_sequence(st, AliceConfig(1));
    cr.expect(seq.steps.empty(), "no piece should be recorded");
    cr.expect(seq.reason == kcg::BStop::below_epsilon, "walk should find the trigger");
    cr.expect(seq.stop_block == std::optional<std::uint32_t>{2}, "wrong stopping block");
  }
}

// Criterion 11: every recorded run verifies byte for byte, and a single
// flipped bit is caught.
void trace_verification(Criterion& cr, const std::vector<std::string>& trace_texts) {
  cr.expect(trace_texts.size() >= 200, "too few traces collected");
  for (const std::string& text : trace_texts) {
    auto rep = kcg::replay_verify(text);
    cr.expect(rep.ok, "honest trace rejected: " + rep.reason);
  }
  if (!trace_texts.empty()) {
    std::string bad = trace_texts.front();
    const std::size_t pos = bad.size() / 2;
    bad[pos] = bad[pos] == '0' ? '1' : '0';
    cr.expect(!kcg::replay_verify(bad).ok, "flipped bit slipped through verification");
  }
}

}  // namespace

int main() {
  std::vector<std::string> trace_texts;
  std::vector<GameTrace> fired_traces;

  Criterion(1, "kraft-soundness").run(kraft_soundness);
  Criterion(2, "kraft-boundary").run(kraft_boundary);
  Criterion(3, "layer-density").run(layer_density);
  Criterion(4, "schedule-recurrence").run(schedule_recurrence);
  Criterion(5, "fraction-monotonicity").run(fraction_monotonicity);
  Criterion(6, "ledger-conservation").run([&](Criterion& cr) {
    ledger_conservation(cr, trace_texts);
  });
  Criterion(7, "counting-dichotomy").run([&](Criterion& cr) {
    counting_dichotomy(cr, trace_texts, fired_traces);
  });
  Criterion(8, "win-witness").run([&](Criterion& cr) {
    win_witness(cr, fired_traces, trace_texts);
  });
  Criterion(9, "rebase-shift").run(rebase_shift);
  Criterion(10, "free-piece-walk").run(free_piece_walk);
  Criterion(11, "trace-verification").run([&](Criterion& cr) {
    trace_verification(cr, trace_texts);
  });

  if (g_failures == 0) {
    std::printf("all criteria passed\n");
    return 0;
  }
  std::printf("%d criteria failed\n", g_failures);
  return 1;
}
