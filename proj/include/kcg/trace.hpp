// Copyright 2026 The kcgame Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kcg/game.hpp"

namespace kcg {

struct RunOptions {
  std::uint32_t depth_max = 12;
  std::vector<std::uint32_t> alice_cs = {1};
  std::uint64_t step_limit = 1000;
  bool stop_when_all_fired = false;
  std::string bob_label = "custom";
  std::uint64_t seed = 0;
};

struct Violation {
  std::uint64_t t = 0;  // position the rejected pair would have taken
  std::string kind;
  BitString p, x;

  friend bool operator==(const Violation&, const Violation&) = default;
};

struct TraceHeader {
  std::uint32_t depth_max = 0;
  std::vector<std::uint32_t> alice_cs;
  std::string bob;
  std::uint64_t seed = 0;
  std::uint64_t step_limit = 0;
  Rational threshold{1, 3};
  std::uint32_t granularity = 4;

  friend bool operator==(const TraceHeader&, const TraceHeader&) = default;
};

struct GameTrace {
  TraceHeader header;
  std::vector<EnumerationEvent> events;
  std::vector<FireRecord> fires;
  std::vector<AllocationLedger> ledgers;
  std::optional<Violation> violation;
};

// Runs the enumeration game: Bob proposes pairs, each legal pair is applied,
// and after each application every watcher that has not fired yet scans for
// a trigger, smaller constants first. An illegal proposal ends the run with
// the violation on record. The run also ends when Bob stops, the step limit
// is hit, or (if asked) once every watcher has fired.
inline GameTrace run_game(const UniversalSet& allowed, const RunOptions& opt, const BobFn& bob) {
  GameState st(allowed, opt.depth_max);
  std::vector<AllocationLedger> ledgers;
  for (std::uint32_t c : opt.alice_cs) ledgers.emplace_back(c);

  GameTrace tr;
  tr.header = {opt.depth_max, opt.alice_cs, opt.bob_label, opt.seed,
               opt.step_limit, allowed.threshold(), allowed.granularity()};

  for (std::uint64_t step = 1; step <= opt.step_limit; ++step) {
    auto mv = bob(BobView{st, ledgers});
    if (!mv) break;
    std::string kind;
    try {
      st.apply(mv->first, mv->second);
    } catch (const DepthExceeded&) {
      kind = "depth";
    } catch (const NotAllowed&) {
      kind = "not-allowed";
    } catch (const PrefixConflict&) {
      kind = "prefix-conflict";
    } catch (const Redefined&) {
      kind = "redefined";
    }
    if (!kind.empty()) {
      tr.violation = Violation{st.clock() + 1, kind, mv->first, mv->second};
      break;
    }
    tr.events.push_back(st.events().back());
    bool all_fired = true;
    for (AllocationLedger& lg : ledgers) {
      if (!lg.fired()) {
        if (auto w = scan_trigger(st, lg.config()))
          tr.fires.push_back(fire_allocation(st, lg, *w));
      }
      all_fired = all_fired && lg.fired();
    }
    if (opt.stop_when_all_fired && all_fired) break;
  }
  tr.ledgers = std::move(ledgers);
  return tr;
}

namespace detail {

inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex16(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) out[static_cast<std::size_t>(i)] = digits[v & 15];
  return out;
}

}  // namespace detail

// Line format, one record per line:
//   # kcgame-trace depth=D cs=1,2 bob=NAME seed=S steps=M threshold=P/Q granularity=G
//   T P X            enumeration event
//   T FIRE C l L N   watcher C fired at window (l, L) claiming N objects
//   Q C X NUM EXP    mass NUM/2^EXP granted to object X by watcher C
//   VIOLATION T KIND P X
//   S HEX            checksum over every preceding line, newlines included
// Fire lines follow the event that triggered them; grant lines follow their
// fire line in object order.
inline std::string write_trace(const GameTrace& tr) {
  std::ostringstream os;
  const TraceHeader& h = tr.header;
  os << "# kcgame-trace depth=" << h.depth_max << " cs=";
  for (std::size_t i = 0; i < h.alice_cs.size(); ++i) os << (i ? "," : "") << h.alice_cs[i];
  os << " bob=" << h.bob << " seed=" << h.seed << " steps=" << h.step_limit << " threshold="
     << h.threshold.num << "/" << h.threshold.den << " granularity=" << h.granularity << "\n";
  std::size_t fi = 0;
  auto emit_fires_at = [&](std::uint64_t t) {
    for (; fi < tr.fires.size() && tr.fires[fi].t == t; ++fi) {
      const FireRecord& fr = tr.fires[fi];
      os << fr.t << " FIRE " << fr.c << ' ' << fr.l << ' ' << fr.L << ' ' << fr.N << "\n";
      if (const AllocationLedger* lg = find_ledger(tr.ledgers, fr.c)) {
        for (const BitString& x : lg->targets()) {
          DyadicMeasure q = lg->grant_of(x);
          os << "Q " << fr.c << ' ' << x.str() << ' ' << q.num() << ' ' << q.exp() << "\n";
        }
      }
    }
  };
  for (const EnumerationEvent& e : tr.events) {
    os << e.t << ' ' << e.p.str() << ' ' << e.x.str() << "\n";
    emit_fires_at(e.t);
  }
  if (tr.violation)
    os << "VIOLATION " << tr.violation->t << ' ' << tr.violation->kind << ' '
       << tr.violation->p.str() << ' ' << tr.violation->x.str() << "\n";
  std::string body = os.str();
  return body + "S " + detail::hex16(detail::fnv1a64(body)) + "\n";
}

inline GameTrace read_trace(std::string_view text) {
  GameTrace tr;
  std::map<std::uint32_t, std::vector<std::pair<BitString, DyadicMeasure>>> grants_by_c;
  std::istringstream is{std::string(text)};
  std::string line;
  std::string body;
  bool saw_header = false, saw_checksum = false;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& why) -> ParseError {
    return ParseError("trace line " + std::to_string(lineno) + ": " + why);
  };
  while (std::getline(is, line)) {
    ++lineno;
    if (saw_checksum) throw fail("content after checksum");
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) throw fail("empty line");
    if (tok == "#") {
      std::string tag;
      if (!(ls >> tag) || tag != "kcgame-trace" || saw_header) throw fail("bad header");
      std::string kv;
      while (ls >> kv) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) throw fail("bad header field: " + kv);
        std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
        try {
          if (key == "depth") {
            tr.header.depth_max = static_cast<std::uint32_t>(std::stoul(val));
          } else if (key == "cs") {
            std::istringstream cs(val);
            std::string c;
            while (std::getline(cs, c, ','))
              tr.header.alice_cs.push_back(static_cast<std::uint32_t>(std::stoul(c)));
          } else if (key == "bob") {
            tr.header.bob = val;
          } else if (key == "seed") {
            tr.header.seed = std::stoull(val);
          } else if (key == "steps") {
            tr.header.step_limit = std::stoull(val);
          } else if (key == "threshold") {
            auto slash = val.find('/');
            if (slash == std::string::npos) throw fail("bad threshold");
            tr.header.threshold = Rational(std::stoull(val.substr(0, slash)),
                                           std::stoull(val.substr(slash + 1)));
          } else if (key == "granularity") {
            tr.header.granularity = static_cast<std::uint32_t>(std::stoul(val));
          } else {
            throw fail("unknown header field: " + key);
          }
        } catch (const std::logic_error&) {
          throw fail("bad header value: " + kv);
        }
      }
      saw_header = true;
      body += line + "\n";
      for (std::uint32_t c : tr.header.alice_cs) tr.ledgers.emplace_back(c);
      continue;
    }
    if (!saw_header) throw fail("missing header");
    if (tok == "S") {
      std::string hex, extra;
      if (!(ls >> hex) || (ls >> extra)) throw fail("bad checksum line");
      if (hex != detail::hex16(detail::fnv1a64(body))) throw ParseError("checksum mismatch");
      saw_checksum = true;
      continue;
    }
    body += line + "\n";
    if (tok == "Q") {
      std::uint32_t c;
      std::string xs;
      std::uint64_t num;
      std::uint32_t exp;
      std::string extra;
      if (!(ls >> c >> xs >> num >> exp) || (ls >> extra)) throw fail("bad grant line");
      if (find_ledger(tr.ledgers, c) == nullptr) throw fail("grant for unknown watcher");
      if (tr.fires.empty() || tr.fires.back().c != c) throw fail("grant before its fire");
      grants_by_c[c].emplace_back(BitString::parse(xs), DyadicMeasure::from_parts(num, exp));
      continue;
    }
    if (tok == "VIOLATION") {
      std::uint64_t t;
      std::string kind, ps, xs, extra;
      if (!(ls >> t >> kind >> ps >> xs) || (ls >> extra)) throw fail("bad violation line");
      tr.violation = Violation{t, kind, BitString::parse(ps), BitString::parse(xs)};
      continue;
    }
    std::uint64_t t;
    try {
      t = std::stoull(tok);
    } catch (const std::logic_error&) {
      throw fail("unknown record: " + tok);
    }
    std::string second;
    if (!(ls >> second)) throw fail("short record");
    if (second == "FIRE") {
      FireRecord fr;
      fr.t = t;
      std::string extra;
      if (!(ls >> fr.c >> fr.l >> fr.L >> fr.N) || (ls >> extra)) throw fail("bad fire line");
      tr.fires.push_back(fr);
      continue;
    }
    std::string xs, extra;
    if (!(ls >> xs) || (ls >> extra)) throw fail("bad event line");
    if (t != tr.events.size() + 1) throw fail("event out of order");
    tr.events.push_back({t, BitString::parse(second), BitString::parse(xs)});
  }
  if (!saw_checksum) throw ParseError("missing checksum");
  for (const FireRecord& fr : tr.fires) {
    AllocationLedger* lg = nullptr;
    for (AllocationLedger& l : tr.ledgers)
      if (l.config().c == fr.c) lg = &l;
    if (!lg) throw ParseError("fire for unknown watcher " + std::to_string(fr.c));
    try {
      lg->restore(fr, grants_by_c[fr.c]);
    } catch (const AlreadyFired&) {
      throw ParseError("watcher " + std::to_string(fr.c) + " fires twice");
    }
  }
  return tr;
}

}  // namespace kcg
