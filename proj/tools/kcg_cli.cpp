// Copyright 2026 The kcgame Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kcg/kcg.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw kcg::Error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string describe_block(const kcg::Block& b) {
  std::ostringstream os;
  os << "block " << b.k << ": levels ";
  if (b.levels)
    os << "[" << b.lo() << ", " << b.hi() << "]";
  else
    os << "beyond the level cap";
  os << ", set {" << b.set.str() << "}, measure " << b.set.measure().str();
  return os.str();
}

kcg::BobFn pick_bob(const std::string& name, std::uint64_t seed, std::uint32_t first_c,
                    const std::vector<std::uint32_t>& lengths) {
  if (name == "greedy") return kcg::make_greedy_kc_bob(lengths);
  if (name == "random") return kcg::make_random_bob(seed);
  return kcg::make_adversarial_bob(seed, first_c);
}

int cmd_simulate(std::uint32_t depth, std::vector<std::uint32_t> cs, const std::string& bob,
                 std::uint64_t seed, std::uint64_t steps, bool stop_when_fired,
                 std::vector<std::uint32_t> lengths, const std::string& out) {
  kcg::RunOptions opt;
  opt.depth_max = depth;
  opt.alice_cs = std::move(cs);
  opt.step_limit = steps;
  opt.stop_when_all_fired = stop_when_fired;
  opt.bob_label = bob;
  opt.seed = seed;
  const std::uint32_t first_c = opt.alice_cs.empty() ? 1 : opt.alice_cs.front();
  if (lengths.empty()) lengths.assign(64, 7);

  kcg::GameTrace tr =
      kcg::run_game(kcg::UniversalSet{}, opt, pick_bob(bob, seed, first_c, lengths));
  const std::string text = kcg::write_trace(tr);
  if (out == "-") {
    std::cout << text;
  } else {
    std::ofstream of(out, std::ios::binary);
    if (!of) throw kcg::Error("cannot write " + out);
    of << text;
  }

  std::cerr << "events: " << tr.events.size() << "\n";
  for (const kcg::FireRecord& fr : tr.fires)
    std::cerr << "fire: watcher " << fr.c << " at t=" << fr.t << " window (" << fr.l << ", "
              << fr.L << ") claims " << fr.N << "\n";
  if (tr.violation) {
    std::cerr << "violation at t=" << tr.violation->t << ": " << tr.violation->kind << " "
              << tr.violation->p.str() << "\n";
    return 1;
  }
  return 0;
}

int cmd_schedule(std::uint64_t count) {
  kcg::UniversalSet A;
  for (const kcg::Block& b : A.schedule_prefix(count)) std::cout << describe_block(b) << "\n";
  return 0;
}

int cmd_kc_demo(const std::vector<std::uint32_t>& lengths) {
  kcg::KraftAllocator alloc;
  for (std::uint32_t n : lengths) {
    try {
      kcg::BitString p = alloc.allocate(n);
      std::cout << n << " -> " << p.str() << "\n";
    } catch (const kcg::KraftExceeded&) {
      std::cout << n << " -> refused\n";
    }
  }
  std::cout << "remaining " << alloc.remaining().str() << "\n";
  return 0;
}

int cmd_member(const std::string& bits) {
  kcg::UniversalSet A;
  kcg::BitString x = kcg::BitString::parse(bits);
  const kcg::Block* b = A.block_at_level(x.length());
  const bool in = A.contains(x);
  std::cout << x.str() << (in ? " allowed" : " blocked") << "\n";
  if (b)
    std::cout << describe_block(*b) << "\n";
  else
    std::cout << "level " << x.length() << " is outside every block; everything is allowed\n";
  return in ? 0 : 1;
}

int cmd_verify(const std::string& path) {
  kcg::VerifyReport rep = kcg::replay_verify(read_file(path));
  if (rep.ok) {
    std::cout << "ok\n";
    return 0;
  }
  std::cout << "FAIL: " << rep.reason << "\n";
  return 1;
}

int cmd_audit(const std::string& path) {
  kcg::GameTrace tr;
  try {
    tr = kcg::read_trace(read_file(path));
  } catch (const kcg::ParseError& e) {
    std::cout << "FAIL: " << e.what() << "\n";
    return 1;
  }
  kcg::AuditReport rep = kcg::counting_lemma_audit(tr);
  if (rep.ok) {
    std::cout << "ok\n";
    return 0;
  }
  for (const std::string& p : rep.problems) std::cout << "FAIL: " << p << "\n";
  return 1;
}

int cmd_density(std::uint64_t up_to) {
  kcg::UniversalSet A;
  bool all_ok = true;
  for (std::uint64_t m = 1; m <= up_to; ++m) {
    kcg::DensityReport rep = kcg::density_check(A, m);
    std::cout << "level " << m << ": allowed " << rep.allowed.str()
              << (rep.ok ? " ok" : " BELOW THRESHOLD") << "\n";
    all_ok = all_ok && rep.ok;
  }
  return all_ok ? 0 : 1;
}

int cmd_bseq(const std::string& path, std::uint32_t c) {
  kcg::GameTrace tr = kcg::read_trace(read_file(path));
  if (tr.header.granularity == 0) throw kcg::Error("hand-built schedule; cannot rebuild the board");
  kcg::UniversalSet A(tr.header.threshold, tr.header.granularity);
  kcg::GameState st(A, tr.header.depth_max);
  for (const kcg::EnumerationEvent& e : tr.events) st.apply(e.p, e.x);
  kcg::BSequence seq = kcg::b_sequence(st, kcg::AliceConfig(c));
  for (std::size_t i = 0; i < seq.steps.size(); ++i) {
    const kcg::BStep& s = seq.steps[i];
    std::cout << "B" << i << " at block " << s.block_k << " (" << s.l << ", " << s.L
              << "): measure " << s.measure.str() << ", set {" << s.set.str() << "}\n";
  }
  std::cout << "stopped: " << kcg::bstop_name(seq.reason);
  if (seq.stop_block) std::cout << " at block " << *seq.stop_block;
  std::cout << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Enumeration games on a layered set of allowed descriptions.\n"
      "Simulate a run, then verify or audit its trace file offline."};
  app.require_subcommand(1);

  auto* sim = app.add_subcommand("simulate", "Run a game and write its trace");
  std::uint32_t depth = 14;
  std::vector<std::uint32_t> cs = {1};
  std::string bob = "adversarial";
  std::uint64_t seed = 0, steps = 1000;
  bool stop_when_fired = false;
  std::vector<std::uint32_t> lengths;
  std::string out = "-";
  sim->add_option("-d,--depth", depth, "Longest description the board accepts")
      ->capture_default_str();
  sim->add_option("-c,--alice", cs, "Watcher constants, one ledger each")->capture_default_str();
  sim->add_option("-b,--bob", bob, "Strategy: adversarial, greedy, or random")
      ->check(CLI::IsMember({"adversarial", "greedy", "random"}))
      ->capture_default_str();
  sim->add_option("-s,--seed", seed, "Seed for the seeded strategies")->capture_default_str();
  sim->add_option("-n,--steps", steps, "Step limit")->capture_default_str();
  sim->add_flag("--stop-when-fired", stop_when_fired, "Stop once every watcher has fired");
  sim->add_option("--lengths", lengths, "Description lengths for the greedy strategy");
  sim->add_option("-o,--out", out, "Trace file path, - for stdout")->capture_default_str();

  auto* sch = app.add_subcommand("schedule", "Print the first blocks of the level schedule");
  std::uint64_t block_count = 8;
  sch->add_option("-k,--blocks", block_count, "How many blocks")->capture_default_str();

  auto* kcd = app.add_subcommand("kc-demo", "Serve description lengths from one unit of mass");
  std::vector<std::uint32_t> kc_lengths;
  kcd->add_option("lengths", kc_lengths, "Lengths to request, in order")->required();

  auto* mem = app.add_subcommand("member", "Test whether a string is allowed");
  std::string bits;
  mem->add_option("bits", bits, "Bit string, or eps for the empty one")->required();

  auto* ver = app.add_subcommand("verify-trace", "Re-run a trace and demand identical bytes");
  std::string verify_path;
  ver->add_option("file", verify_path, "Trace file")->required();

  auto* aud = app.add_subcommand("audit-counting", "Re-derive every fire a trace records");
  std::string audit_path;
  aud->add_option("file", audit_path, "Trace file")->required();

  auto* den = app.add_subcommand("density", "Allowed fraction per level");
  std::uint64_t up_to = 16;
  den->add_option("-m,--up-to", up_to, "Check levels 1 through this")->capture_default_str();

  auto* bsq = app.add_subcommand("b-seq", "Walk the disjoint free pieces of a finished board");
  std::string bseq_path;
  std::uint32_t bseq_c = 1;
  bsq->add_option("file", bseq_path, "Trace file")->required();
  bsq->add_option("-c,--alice", bseq_c, "Watcher constant")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*sim)
      return cmd_simulate(depth, cs, bob, seed, steps, stop_when_fired, lengths, out);
    if (*sch) return cmd_schedule(block_count);
    if (*kcd) return cmd_kc_demo(kc_lengths);
    if (*mem) return cmd_member(bits);
    if (*ver) return cmd_verify(verify_path);
    if (*aud) return cmd_audit(audit_path);
    if (*den) return cmd_density(up_to);
    if (*bsq) return cmd_bseq(bseq_path, bseq_c);
  } catch (const kcg::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
