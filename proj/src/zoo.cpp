#include "qfa/zoo.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <sstream>

#include "qfa/builder.hpp"
#include "qfa/evolution.hpp"

namespace qfa {

namespace {

MachineSpec a3_walk(bool rotation_tail, const std::vector<long>& members, int m_max) {
  PermBuilder bld(Kind::QFA, 2, {"a"});
  // Round invariant: an odd round turns (h, 0) into (0, 3h) moving head 2 up
  // three cells per head-1 step down; an even round turns (0, H) into (3H, 0).
  // The probe state pk checks whether head 1 overshot the input exactly.
  bld.state("s0", 'n', {0, 0});
  bld.state("w", 'n', {0, 1});
  bld.state("pk", 'n', {1, 0});
  bld.state("oR", 'n', {-1, 0});
  bld.state("o1", 'n', {-1, 1});
  bld.state("o2", 'n', {0, 1});
  bld.state("o3", 'n', {0, 1});
  bld.state("eR", 'n', {0, 0});
  bld.state("e1", 'n', {1, -1});
  bld.state("e2", 'n', {1, 0});
  bld.state("e3", 'n', {1, 0});
  if (rotation_tail) {
    bld.state("rot1", 'n', {-1, 0});
    bld.state("rot2", 'n', {-1, 0});
    bld.state("racc", 'a', {0, 0});
    bld.state("rrej", 'r', {0, 0});
  } else {
    bld.state("acc", 'a', {0, 0});
  }
  bld.state("rjA", 'r', {0, 0});
  bld.state("rjB", 'r', {0, 0});
  bld.state("rjC", 'r', {0, 0});
  bld.initial("s0");

  bld.single({"<", "<"}, "s0", "w");
  bld.single({"<", "a"}, "w", "e1");
  bld.single({"<", "a"}, "o1", "eR");
  bld.single({"<", "a"}, "eR", "e2");
  bld.single({"<", ">"}, "w", "rjB");
  bld.single({"<", ">"}, "o1", "rjA");
  bld.single({"a", "<"}, "e1", "pk");
  bld.single({"a", "<"}, "pk", "oR");
  bld.single({"a", "<"}, "oR", "o2");
  bld.single({"a", "a"}, "o1", "o2");
  bld.single({"a", "a"}, "o2", "o3");
  bld.single({"a", "a"}, "o3", "o1");
  bld.single({"a", "a"}, "e1", "e2");
  bld.single({"a", "a"}, "e2", "e3");
  bld.single({"a", "a"}, "e3", "e1");
  bld.single({"a", ">"}, "o1", "rjA");
  bld.single({"a", ">"}, "o2", "rjB");
  bld.single({"a", ">"}, "o3", "rjC");
  bld.single({">", "<"}, "e1", "rjA");
  bld.single({">", "a"}, "e1", "rjA");
  bld.single({">", "a"}, "e2", "rjB");
  bld.single({">", "a"}, "e3", "rjC");

  if (!rotation_tail) {
    bld.single({">", "<"}, "pk", "acc");
  } else {
    bld.single({">", "<"}, "pk", "rot1");
    // theta = 2 pi * sum over included A3 members n of (-1)^[n in set] / (9 n)
    Rat q(0);
    long n = 1;
    for (int m = 0; m <= m_max; ++m) {
      bool in = std::find(members.begin(), members.end(), n) != members.end();
      Rat term = Rat(1, 9) / Rat(n);
      q += in ? -term : term;
      n *= 9;
    }
    Rat two_q = 2 * q;  // R_theta entries are cos/sin of (2q) pi
    AmpExpr c = AmpExpr::cos_pi(two_q), s = AmpExpr::sin_pi(two_q);
    bld.block({"a", "<"}, {"rot1", "rot2"}, {"rot1", "rot2"},
              {{c, s.negated()}, {s, c}});
    // Final shift of pi/2 + 2 pi/9 = 13 pi/18 recentres members at
    // probability sin^2(n theta + shift) ~ 1; then relabel and measure.
    Rat sh(13, 18);
    AmpExpr cs = AmpExpr::cos_pi(sh), sn = AmpExpr::sin_pi(sh);
    bld.block({"<", "<"}, {"rot1", "rot2"}, {"racc", "rrej"},
              {{sn, cs}, {cs, sn.negated()}});
  }
  return bld.finish();
}

}  // namespace

ZooEntry machine_a3() {
  ZooEntry e;
  e.id = "a3";
  e.spec = a3_walk(false, {}, 0);
  e.provenance =
      "Two-head reversible walk tripling one head against the other; accepts a^n iff "
      "n is an even power of 3. Unreachable (state, symbol-pair) combinations are "
      "completed to per-symbol permutations so the evolution matrix stays a "
      "permutation at every input length. This walk also accepts a^1 (= 3^0).";
  e.expected = {{"aaa", "rej=1"},
                {"aaaaaaaaa", "acc=1"},
                {std::string(81, 'a'), "acc=1"},
                {std::string(5, 'a'), "rej=1"},
                {std::string(27, 'a'), "rej=1"}};
  return e;
}

ZooEntry machine_l_eps(const Rat& eps) {
  if (eps < Rat(1, 2) || eps > 1)
    throw Error("l_eps: eps must lie in [1/2, 1] to keep entries nonnegative");
  MachineSpec m;
  m.kind = Kind::PFA;
  m.heads = 1;
  m.motion = HeadMotion::OneWay;
  m.states = {"q0", "q1", "q2", "q3", "q4"};
  m.initial = 0;
  m.accepting = {3};
  m.rejecting = {4};
  m.alphabet = {"0", "1"};
  Rat inv2e = Rat(1) / (2 * eps);
  Rat rest = (2 * eps - 1) / (2 * eps);
  auto add = [&](const std::string& sym, int from, int to, Rat w) {
    if (w == 0) return;
    Transition t;
    t.from = from;
    t.to = to;
    t.scan = {m.symbol_id(sym)};
    t.move = {1};
    t.weight = AmpExpr::rational(w);
    m.transitions.push_back(std::move(t));
  };
  // A_cent, A_0, A_1 blocks plus identity on the halting pair
  for (const std::string& sym : {std::string("<"), std::string("0"), std::string("1")}) {
    add(sym, 3, 3, Rat(1));
    add(sym, 4, 4, Rat(1));
  }
  add("<", 0, 0, inv2e);
  add("<", 0, 2, rest);
  add("<", 1, 2, Rat(1));
  add("<", 2, 2, Rat(1));
  add("0", 0, 0, Rat(1));
  add("0", 1, 0, Rat(1, 2));
  add("0", 1, 1, Rat(1, 2));
  add("0", 2, 2, Rat(1));
  add("1", 0, 0, Rat(1, 2));
  add("1", 0, 1, Rat(1, 2));
  add("1", 1, 1, Rat(1));
  add("1", 2, 2, Rat(1));
  // B block at the right endmarker
  add(">", 0, 4, Rat(1));
  add(">", 1, 3, Rat(1));
  add(">", 2, 4, Rat(1));
  add(">", 3, 3, Rat(1));
  add(">", 4, 4, Rat(1));
  m.reindex();

  ZooEntry e;
  e.id = "l_eps(" + rat_str(eps) + ")";
  e.spec = std::move(m);
  e.provenance =
      "Five-state one-way pfa whose acceptance probability on input y equals "
      "0.(y reversed in binary)/(2 eps); eps below 1/2 would need a negative entry.";
  if (eps == Rat(1, 2)) {
    e.expected = {{"1", "acc=1/2"}, {"11", "acc=3/4"}, {"10", "acc=1/4"}, {"01", "acc=1/2"}};
  }
  return e;
}

ZooEntry machine_rotation(const std::vector<long>& members, int m_max) {
  if (m_max > 3) throw Error("rotation machine: m_max above 3 exceeds the float budget");
  for (long n : members)
    if (n != 9 && n != 81 && n != 6561)
      throw Error("rotation machine: members must be drawn from {9, 81, 6561}");
  ZooEntry e;
  std::ostringstream id;
  id << "rotation(";
  for (size_t i = 0; i < members.size(); ++i) id << (i ? "," : "") << members[i];
  id << ";m" << m_max << ")";
  e.id = id.str();
  e.spec = a3_walk(true, members, m_max);
  e.provenance =
      "a3 walk feeding a two-state rotation loop: each leftward step over 'a' applies "
      "R_theta, then a final shift of 13 pi/18 recentres members at measurement "
      "probability sin^2 ~ 1. Truncating theta at m_max keeps the deviation of "
      "n*theta inside the pi/36 tail bound for the tested n.";
  for (long n : {9L, 81L}) {
    bool in = std::find(members.begin(), members.end(), n) != members.end();
    e.expected.push_back({std::string(n, 'a'), in ? "acc>=2/3" : "rej>=2/3"});
  }
  e.expected.push_back({std::string(5, 'a'), "rej=1"});
  return e;
}

ZooEntry machine_coin() {
  PermBuilder bld(Kind::QFA, 1, {"a"});
  bld.state("q0", 'n', {1});
  bld.state("qa", 'a', {1});
  bld.state("qr", 'r', {1});
  bld.initial("q0");
  AmpExpr p35 = AmpExpr::rational(Rat(3, 5)), p45 = AmpExpr::rational(Rat(4, 5));
  bld.block({"<"}, {"q0", "qa"}, {"qa", "qr"}, {{p35, p45}, {p45, p35.negated()}});
  bld.single({"<"}, "qr", "q0");
  bld.single({"a"}, "q0", "q0");
  bld.single({"a"}, "qa", "qa");
  bld.single({"a"}, "qr", "qr");
  bld.single({">"}, "q0", "q0");
  bld.single({">"}, "qa", "qa");
  bld.single({">"}, "qr", "qr");
  ZooEntry e;
  e.id = "coin";
  e.spec = bld.finish();
  e.provenance = "Rational unitary column (3/5, 4/5) splitting the start state into "
                 "accept/reject in one step.";
  e.expected = {{"", "acc=9/25"}, {"a", "acc=9/25"}, {"aa", "acc=9/25"}};
  return e;
}

namespace {
ZooEntry trivial(bool accept) {
  PermBuilder bld(Kind::QFA, 1, {"a"});
  bld.state("q0", 'n', {1});
  bld.state("qh", accept ? 'a' : 'r', {1});
  bld.state("qo", accept ? 'r' : 'a', {1});
  bld.initial("q0");
  for (const std::string& s : {std::string("<"), std::string("a"), std::string(">")}) {
    bld.single({s}, "q0", "qh");
    bld.single({s}, "qh", "qo");
    bld.single({s}, "qo", "q0");
  }
  ZooEntry e;
  e.id = accept ? "trivial-accept" : "trivial-reject";
  e.spec = bld.finish();
  e.provenance = "Single non-halting state feeding a halting state in one step.";
  e.expected = {{"", accept ? "acc=1" : "rej=1"}, {"a", accept ? "acc=1" : "rej=1"}};
  return e;
}
}  // namespace

ZooEntry machine_trivial_accept() { return trivial(true); }
ZooEntry machine_trivial_reject() { return trivial(false); }

ZooEntry machine_spinner() {
  MachineSpec m;
  m.kind = Kind::QFA;
  m.heads = 1;
  m.states = {"q0"};
  m.initial = 0;
  m.alphabet = {"a"};
  for (const std::string& s : {std::string("<"), std::string("a"), std::string(">")}) {
    Transition t;
    t.from = 0;
    t.to = 0;
    t.scan = {m.symbol_id(s)};
    t.move = {1};
    t.weight = AmpExpr::rational(Rat(1));
    m.transitions.push_back(std::move(t));
  }
  m.reindex();
  ZooEntry e;
  e.id = "spinner";
  e.spec = std::move(m);
  e.provenance = "One state cycling around the circular tape forever.";
  return e;
}

ZooEntry machine_leaky(const Rat& leak) {
  if (leak <= 0 || leak >= 1) throw Error("leaky: leak must lie in (0,1)");
  PermBuilder bld(Kind::QFA, 1, {"a"});
  bld.state("q0", 'n', {1});
  bld.state("qa", 'a', {1});
  bld.initial("q0");
  AmpExpr stay = AmpExpr::sqrt_of(Rat(1) - leak), go = AmpExpr::sqrt_of(leak);
  for (const std::string& s : {std::string("<"), std::string("a"), std::string(">")}) {
    bld.block({s}, {"q0", "qa"}, {"q0", "qa"}, {{stay, go.negated()}, {go, stay}});
  }
  ZooEntry e;
  e.id = "leaky(" + rat_str(leak) + ")";
  e.spec = bld.finish();
  e.provenance = "Leaks a fixed fraction of the surviving mass into acceptance each "
                 "step; halts completely but not absolutely.";
  return e;
}

std::vector<std::string> zoo_ids() {
  return {"a3", "coin", "trivial-accept", "trivial-reject", "l_eps(1/2)",
          "rotation", "spinner", "leaky(9/25)", "leaky(1/4)"};
}

ZooEntry zoo_entry(const std::string& id) {
  if (id == "a3") return machine_a3();
  if (id == "coin") return machine_coin();
  if (id == "trivial-accept") return machine_trivial_accept();
  if (id == "trivial-reject") return machine_trivial_reject();
  if (id == "l_eps(1/2)" || id == "l_half") return machine_l_eps(Rat(1, 2));
  if (id.rfind("l_eps(", 0) == 0 && id.back() == ')') {
    std::string arg = id.substr(6, id.size() - 7);
    size_t slash = arg.find('/');
    Rat eps = slash == std::string::npos
                  ? Rat(mpz_class(arg))
                  : Rat(mpz_class(arg.substr(0, slash)), mpz_class(arg.substr(slash + 1)));
    eps.canonicalize();
    return machine_l_eps(eps);
  }
  if (id == "rotation") return machine_rotation({9, 81}, 3);
  if (id == "spinner") return machine_spinner();
  if (id == "leaky(9/25)") return machine_leaky(Rat(9, 25));
  if (id == "leaky(1/4)") return machine_leaky(Rat(1, 4));
  throw Error("unknown zoo machine: " + id);
}

void certify_zoo_entry(const ZooEntry& entry) {
  for (const auto& row : entry.expected) {
    long long tmax = default_t_max(entry.spec, static_cast<int>(row.input.size()));
    RunTrace tr = step_simulate(entry.spec, row.input, tmax);
    auto fail = [&](const std::string& why) {
      throw Error("zoo " + entry.id + " on '" + row.input + "': " + why);
    };
    std::string b = row.behavior;
    auto val = [&](const std::string& s) {
      size_t slash = s.find('/');
      if (slash == std::string::npos) return Rat(mpz_class(s));
      Rat r(mpz_class(s.substr(0, slash)), mpz_class(s.substr(slash + 1)));
      r.canonicalize();
      return r;
    };
    if (b.rfind("acc>=", 0) == 0 || b.rfind("rej>=", 0) == 0) {
      double thr = val(b.substr(5)).get_d();
      double got = b[0] == 'a' ? tr.cum_acc.cf().real() : tr.cum_rej.cf().real();
      if (got < thr) fail("expected " + b + ", got " + std::to_string(got));
    } else if (b.rfind("acc=", 0) == 0 || b.rfind("rej=", 0) == 0) {
      Rat want = val(b.substr(4));
      const Scalar& got = b[0] == 'a' ? tr.cum_acc : tr.cum_rej;
      if (tr.backend == Backend::Exact) {
        if (!(got.cr() == CRat(want))) fail("expected " + b + ", got " + got.str());
      } else if (std::abs(got.cf().real() - want.get_d()) > 1e-9) {
        fail("expected " + b + ", got " + got.str());
      }
    } else {
      fail("bad expected-behavior syntax " + b);
    }
  }
}

}  // namespace qfa
