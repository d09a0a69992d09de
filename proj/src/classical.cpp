#include "qfa/classical.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <sstream>
#include <unordered_map>

#include "json.hpp"

namespace qfa {

PfaRunResult pfa_run_exact(const MachineSpec& spec, const std::string& x, long long t_max) {
  return pfa_run_exact_from(spec, x, t_max, spec.initial,
                            std::vector<int>(spec.heads, 0));
}

PfaRunResult pfa_run_exact_from(const MachineSpec& spec, const std::string& x, long long t_max,
                                int state, const std::vector<int>& positions) {
  if (spec.kind != Kind::PFA) throw Error("pfa_run_exact expects a pfa");
  if (!spec.exact_representable()) throw Error("pfa_run_exact expects rational weights");
  EvolutionOp op(spec, x);
  PfaRunResult res;
  res.space = op.space();
  std::map<long long, Rat> dist;
  long long init = op.space().index(state, positions);
  if (op.is_halting(init)) {
    res.absorbed[init] = Rat(1);
    res.residual = Rat(0);
    res.halted_all = true;
    (op.is_acc(init) ? res.p_acc : res.p_rej) = Rat(1);
    return res;
  }
  dist[init] = Rat(1);
  for (long long t = 1; t <= t_max && !dist.empty(); ++t) {
    std::map<long long, Rat> next;
    for (const auto& [cfg, mass] : dist) {
      for (const auto& [tgt, w] : op.column(cfg)) {
        Rat add = mass * w.cr().re;
        if (add == 0) continue;
        if (op.is_halting(tgt)) {
          res.absorbed[tgt] += add;
          (op.is_acc(tgt) ? res.p_acc : res.p_rej) += add;
        } else {
          next[tgt] += add;
        }
      }
    }
    for (auto it = next.begin(); it != next.end();)
      it = it->second == 0 ? next.erase(it) : std::next(it);
    dist = std::move(next);
    res.steps = t;
  }
  res.residual = Rat(1) - res.p_acc - res.p_rej;
  res.halted_all = dist.empty();
  return res;
}

SampleResult pfa_sample(const MachineSpec& spec, const std::string& x, long long shots,
                        long long t_max, unsigned seed) {
  if (spec.kind != Kind::PFA) throw Error("pfa_sample expects a pfa");
  EvolutionOp op(spec, x);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  SampleResult out;
  out.shots = shots;
  for (long long s = 0; s < shots; ++s) {
    long long cfg = op.initial_config();
    bool resolved = false;
    for (long long t = 0; t < t_max; ++t) {
      double coin = u(rng), acc = 0;
      long long next = -1;
      for (const auto& [tgt, w] : op.column(cfg)) {
        acc += w.cf().real();
        if (coin < acc) {
          next = tgt;
          break;
        }
      }
      if (next < 0) break;  // numerical slack on the last branch
      cfg = next;
      if (op.is_halting(cfg)) {
        (op.is_acc(cfg) ? out.accepted : out.rejected) += 1;
        resolved = true;
        break;
      }
    }
    if (!resolved) ++out.unresolved;
  }
  return out;
}

// ---------------------------------------------------------------------------
// machine-building helpers

namespace {

class PfaBuilder {
 public:
  PfaBuilder(int heads, std::vector<std::string> alphabet) {
    m_.kind = Kind::PFA;
    m_.heads = heads;
    m_.alphabet = std::move(alphabet);
  }

  int state(const std::string& name, char cls = 'n') {
    int id = static_cast<int>(m_.states.size());
    m_.states.push_back(name);
    if (cls == 'a') m_.accepting.insert(id);
    if (cls == 'r') m_.rejecting.insert(id);
    return id;
  }
  void initial(int id) { m_.initial = id; }

  using Guard = std::function<bool(const std::vector<int>&)>;

  /// Adds `from -> to` with the given probability for every scanned tuple the
  /// guard admits. Guards of one source state must partition the tuple space.
  void rule(int from, int to, std::vector<int> move, Rat prob, const Guard& guard) {
    std::vector<int> scan(m_.heads, 0);
    emit(0, scan, from, to, move, prob, guard);
  }

  Guard always() const {
    return [](const std::vector<int>&) { return true; };
  }
  Guard at(int head, int sym) const {
    return [head, sym](const std::vector<int>& sc) { return sc[head] == sym; };
  }
  Guard not_at(int head, int sym) const {
    return [head, sym](const std::vector<int>& sc) { return sc[head] != sym; };
  }
  static Guard all_of(std::vector<Guard> gs) {
    return [gs](const std::vector<int>& sc) {
      for (const auto& g : gs)
        if (!g(sc)) return false;
      return true;
    };
  }

  MachineSpec finish() {
    m_.reindex();
    return m_;
  }
  int symbols() const { return m_.num_symbols(); }

 private:
  void emit(int h, std::vector<int>& scan, int from, int to, const std::vector<int>& move,
            const Rat& prob, const Guard& guard) {
    if (h == m_.heads) {
      if (!guard(scan)) return;
      Transition t;
      t.from = from;
      t.to = to;
      t.scan = scan;
      t.move = move;
      t.weight = AmpExpr::rational(prob);
      m_.transitions.push_back(std::move(t));
      return;
    }
    for (int s = 0; s < m_.num_symbols(); ++s) {
      scan[h] = s;
      emit(h + 1, scan, from, to, move, prob, guard);
    }
  }

  MachineSpec m_;
};

std::vector<int> mv(int heads, std::initializer_list<std::pair<int, int>> moves) {
  std::vector<int> v(heads, 0);
  for (auto [h, d] : moves) v[h] = d;
  return v;
}

}  // namespace

// ---------------------------------------------------------------------------
// counter

const char* kCounterDoneState = "done";

long long counter_done_step(int nq, int n) {
  return 4LL * nq * nq * (n + 2) * (n + 2);
}

MachineSpec build_counter(int nq) {
  if (nq < 1) throw Error("counter: need |Q| >= 1");
  // Boustrophedon sweep: each cell visit costs 4|Q|^2 - 1 idles plus one
  // move; (n+2)^2 visits total. Head 2 counts full laps, the last two laps
  // are tracked in the phase bit.
  PfaBuilder b(2, {"a"});
  int idles = 4 * nq * nq - 1;
  std::vector<std::vector<std::vector<int>>> sid(2, std::vector<std::vector<int>>(2));
  for (int dir = 0; dir < 2; ++dir)
    for (int phase = 0; phase < 2; ++phase)
      for (int i = 0; i <= idles; ++i) {
        std::ostringstream name;
        name << (dir ? "L" : "R") << (phase ? "B" : "A") << i;
        sid[dir][phase].push_back(b.state(name.str()));
      }
  int done = b.state(kCounterDoneState, 'a');
  b.initial(sid[0][0][0]);
  for (int dir = 0; dir < 2; ++dir)
    for (int phase = 0; phase < 2; ++phase) {
      for (int i = 0; i < idles; ++i)
        b.rule(sid[dir][phase][i], sid[dir][phase][i + 1], mv(2, {}), Rat(1), b.always());
      int from = sid[dir][phase][idles];
      int boundary = dir == 0 ? kRightEnd : kLeftEnd;
      int fwd = dir == 0 ? 1 : -1;
      b.rule(from, sid[dir][phase][0], mv(2, {{0, fwd}}), Rat(1), b.not_at(0, boundary));
      // lap end: flip direction; advance head 2 until it parks at the right
      // endmarker, then burn the two phase laps
      b.rule(from, sid[1 - dir][phase][0], mv(2, {{0, -fwd}, {1, 1}}), Rat(1),
             PfaBuilder::all_of({b.at(0, boundary), b.not_at(1, kRightEnd)}));
      if (phase == 0) {
        b.rule(from, sid[1 - dir][1][0], mv(2, {{0, -fwd}}), Rat(1),
               PfaBuilder::all_of({b.at(0, boundary), b.at(1, kRightEnd)}));
      } else {
        b.rule(from, done, mv(2, {{0, -fwd}}), Rat(1),
               PfaBuilder::all_of({b.at(0, boundary), b.at(1, kRightEnd)}));
      }
    }
  b.rule(done, done, mv(2, {}), Rat(1), b.always());
  return b.finish();
}

// ---------------------------------------------------------------------------
// equiprob generator

int equiprob_rounds(int n) {
  int k = 0;
  long long v = 1;
  while (v < n + 2) {
    v *= 2;
    ++k;
  }
  return k;
}

Rat gen_probability(int nq, int n) {
  mpz_class den = 1;
  mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), 2 * equiprob_rounds(n));
  return Rat(1, 4 * nq * nq) / Rat(den);
}

std::string equiprob_done_state(int h) { return "done#" + std::to_string(h); }

MachineSpec build_equiprob(int nq) {
  if (nq < 1) throw Error("equiprob: need |Q| >= 1");
  // Heads: 0 and 1 carry the generated positions, 2 is the doubling scratch,
  // 3 counts rounds. Each coordinate takes ceil(log2(n+2)) fair coin flips;
  // a value pushed past the right endmarker rejects, so every surviving
  // position pair has probability exactly 2^(-2 rounds), and the halting
  // branch fans out over the 4|Q|^2 h-parts.
  PfaBuilder b(4, {"a"});
  const int S = 2, C = 3;
  struct Ids {
    int ph0t0, ph0t1, ph0copy, down, down2, flip, w0a, w0b, w1a, w1b, tail, copy;
  };
  Ids ids[2];
  int start = b.state("start");
  for (int reg = 0; reg < 2; ++reg) {
    std::string r = std::to_string(reg);
    ids[reg] = {b.state("ph0t0#" + r),  b.state("ph0t1#" + r), b.state("ph0copy#" + r),
                b.state("down#" + r),   b.state("down2#" + r), b.state("flip#" + r),
                b.state("w0a#" + r),    b.state("w0b#" + r),   b.state("w1a#" + r),
                b.state("w1b#" + r),    b.state("tail#" + r),  b.state("copy#" + r)};
  }
  int rej = b.state("reject", 'r');
  std::vector<int> dones;
  for (int h = 0; h < 4 * nq * nq; ++h) dones.push_back(b.state(equiprob_done_state(h), 'a'));
  b.initial(start);

  b.rule(start, ids[0].ph0t0, mv(4, {{0, 1}, {C, 1}}), Rat(1), b.always());
  for (int reg = 0; reg < 2; ++reg) {
    int out = reg;
    const Ids& q = ids[reg];
    auto L = [&](int h) { return b.at(h, kLeftEnd); };
    auto nL = [&](int h) { return b.not_at(h, kLeftEnd); };
    auto R = [&](int h) { return b.at(h, kRightEnd); };
    auto nR = [&](int h) { return b.not_at(h, kRightEnd); };

    // ph0: repeated doubling out <-> S; C counts rounds until the doubling
    // overflows, leaving C = ceil(log2(n+2)).
    b.rule(q.ph0t0, q.ph0t1, mv(4, {{out, -1}, {S, 1}}), Rat(1),
           PfaBuilder::all_of({nL(out), nR(S)}));
    b.rule(q.ph0t0, q.down, mv(4, {}), Rat(1), PfaBuilder::all_of({nL(out), R(S)}));
    b.rule(q.ph0t0, q.ph0copy, mv(4, {}), Rat(1), L(out));
    b.rule(q.ph0t1, q.ph0t0, mv(4, {{S, 1}}), Rat(1), nR(S));
    b.rule(q.ph0t1, q.down, mv(4, {}), Rat(1), R(S));
    b.rule(q.ph0copy, q.ph0copy, mv(4, {{S, -1}, {out, 1}}), Rat(1), nL(S));
    b.rule(q.ph0copy, q.ph0t0, mv(4, {{C, 1}}), Rat(1), L(S));
    b.rule(q.down, q.down, mv(4, {{S, -1}}), Rat(1), nL(S));
    b.rule(q.down, q.down2, mv(4, {}), Rat(1), L(S));
    b.rule(q.down2, q.down2, mv(4, {{out, -1}}), Rat(1), nL(out));
    b.rule(q.down2, q.flip, mv(4, {}), Rat(1), L(out));

    // generation: while C > 0, flip a coin and set value := 2 value + c
    b.rule(q.flip, q.w0a, mv(4, {}), Rat(1, 2), nL(C));
    b.rule(q.flip, q.w1a, mv(4, {}), Rat(1, 2), nL(C));
    b.rule(q.w0a, q.w0b, mv(4, {{out, -1}, {S, 1}}), Rat(1),
           PfaBuilder::all_of({nL(out), nR(S)}));
    b.rule(q.w0a, rej, mv(4, {}), Rat(1), PfaBuilder::all_of({nL(out), R(S)}));
    b.rule(q.w0a, q.copy, mv(4, {}), Rat(1), L(out));
    b.rule(q.w0b, q.w0a, mv(4, {{S, 1}}), Rat(1), nR(S));
    b.rule(q.w0b, rej, mv(4, {}), Rat(1), R(S));
    b.rule(q.w1a, q.w1b, mv(4, {{out, -1}, {S, 1}}), Rat(1),
           PfaBuilder::all_of({nL(out), nR(S)}));
    b.rule(q.w1a, rej, mv(4, {}), Rat(1), PfaBuilder::all_of({nL(out), R(S)}));
    b.rule(q.w1a, q.tail, mv(4, {}), Rat(1), L(out));
    b.rule(q.w1b, q.w1a, mv(4, {{S, 1}}), Rat(1), nR(S));
    b.rule(q.w1b, rej, mv(4, {}), Rat(1), R(S));
    b.rule(q.tail, q.copy, mv(4, {{S, 1}}), Rat(1), nR(S));
    b.rule(q.tail, rej, mv(4, {}), Rat(1), R(S));
    b.rule(q.copy, q.copy, mv(4, {{S, -1}, {out, 1}}), Rat(1), nL(S));
    b.rule(q.copy, q.flip, mv(4, {{C, -1}}), Rat(1), L(S));

    // coordinate finished (C drained)
    if (reg == 0) {
      b.rule(q.flip, ids[1].ph0t0, mv(4, {{1, 1}, {C, 1}}), Rat(1), L(C));
    } else {
      for (int h = 0; h < 4 * nq * nq; ++h)
        b.rule(q.flip, dones[h], mv(4, {}), Rat(1, 4 * nq * nq), L(C));
    }
  }
  b.rule(rej, rej, mv(4, {}), Rat(1), b.always());
  for (int d : dones) b.rule(d, d, mv(4, {}), Rat(1), b.always());
  return b.finish();
}

// ---------------------------------------------------------------------------
// comparator

MachineSpec build_comparator() {
  // Heads 0-1: positions of conf1; heads 2-3: positions of conf2;
  // heads 4-5: scratch copies; head 6: working head for the copy subroutine.
  // The h-block comparison is state data: start in start_gt / start_lt /
  // start_eq according to it. Verdicts: q1 iff conf1 >= conf2.
  PfaBuilder b(7, {"a"});
  int start_gt = b.state("start_gt"), start_lt = b.state("start_lt"),
      start_eq = b.state("start_eq");
  int a1 = b.state("copyL1a"), a2 = b.state("copyL1b");
  int b1 = b.state("copyM1a"), b2 = b.state("copyM1b");
  int c1 = b.state("cmp1");
  int d4q1 = b.state("drain4_q1");
  int da1 = b.state("copyL2a"), da2 = b.state("copyL2b");
  int db1 = b.state("copyM2a"), db2 = b.state("copyM2b");
  int dc = b.state("cmp2");
  int e5q2 = b.state("drain5_q2");
  int q1 = b.state("q1", 'a'), q2 = b.state("q2", 'r');
  b.initial(start_eq);

  auto L = [&](int h) { return b.at(h, kLeftEnd); };
  auto nL = [&](int h) { return b.not_at(h, kLeftEnd); };
  auto A = PfaBuilder::all_of;

  b.rule(start_gt, q1, mv(7, {}), Rat(1), b.always());
  b.rule(start_lt, q2, mv(7, {}), Rat(1), b.always());
  // copy head0 -> head4 via head6, restoring head0
  b.rule(start_eq, a1, mv(7, {}), Rat(1), b.always());
  b.rule(a1, a1, mv(7, {{0, -1}, {6, 1}}), Rat(1), nL(0));
  b.rule(a1, a2, mv(7, {}), Rat(1), L(0));
  b.rule(a2, a2, mv(7, {{6, -1}, {0, 1}, {4, 1}}), Rat(1), nL(6));
  b.rule(a2, b1, mv(7, {}), Rat(1), L(6));
  // copy head2 -> head5 via head6
  b.rule(b1, b1, mv(7, {{2, -1}, {6, 1}}), Rat(1), nL(2));
  b.rule(b1, b2, mv(7, {}), Rat(1), L(2));
  b.rule(b2, b2, mv(7, {{6, -1}, {2, 1}, {5, 1}}), Rat(1), nL(6));
  b.rule(b2, c1, mv(7, {}), Rat(1), L(6));
  // compare l1 (head4) against m1 (head5): smaller position hits < first
  b.rule(c1, da1, mv(7, {}), Rat(1), A({L(4), L(5)}));
  b.rule(c1, e5q2, mv(7, {}), Rat(1), A({L(4), nL(5)}));  // l1 < m1 -> conf2 > conf1
  b.rule(c1, d4q1, mv(7, {}), Rat(1), A({nL(4), L(5)}));  // m1 < l1 -> conf2 < conf1
  b.rule(c1, c1, mv(7, {{4, -1}, {5, -1}}), Rat(1), A({nL(4), nL(5)}));
  b.rule(d4q1, d4q1, mv(7, {{4, -1}}), Rat(1), nL(4));
  b.rule(d4q1, q1, mv(7, {}), Rat(1), L(4));
  b.rule(e5q2, e5q2, mv(7, {{5, -1}}), Rat(1), nL(5));
  b.rule(e5q2, q2, mv(7, {}), Rat(1), L(5));
  // copy head1 -> head4 and head3 -> head5, then the tie-break m2 <= l2
  b.rule(da1, da1, mv(7, {{1, -1}, {6, 1}}), Rat(1), nL(1));
  b.rule(da1, da2, mv(7, {}), Rat(1), L(1));
  b.rule(da2, da2, mv(7, {{6, -1}, {1, 1}, {4, 1}}), Rat(1), nL(6));
  b.rule(da2, db1, mv(7, {}), Rat(1), L(6));
  b.rule(db1, db1, mv(7, {{3, -1}, {6, 1}}), Rat(1), nL(3));
  b.rule(db1, db2, mv(7, {}), Rat(1), L(3));
  b.rule(db2, db2, mv(7, {{6, -1}, {3, 1}, {5, 1}}), Rat(1), nL(6));
  b.rule(db2, dc, mv(7, {}), Rat(1), L(6));
  b.rule(dc, d4q1, mv(7, {}), Rat(1), L(5));                 // m2 <= l2 -> q1
  b.rule(dc, e5q2, mv(7, {}), Rat(1), A({L(4), nL(5)}));     // l2 < m2 -> q2
  b.rule(dc, dc, mv(7, {{4, -1}, {5, -1}}), Rat(1), A({nL(4), nL(5)}));
  b.rule(q1, q1, mv(7, {}), Rat(1), b.always());
  b.rule(q2, q2, mv(7, {}), Rat(1), b.always());
  return b.finish();
}

// ---------------------------------------------------------------------------
// clow walk evaluator

Rat walk_determinant(long long dim, const RowOracle& row,
                     const std::function<bool(long long, long long)>& special) {
  // Exact stage-level propagation of the clow-walk machine with the uniform
  // generation factor divided out. State: (clow head c0, current vertex c1)
  // with the walk's parity folded into a signed weight; closings pool into
  // fresh heads via a prefix sum over the CONF_* order.
  std::unordered_map<long long, Rat> cur;
  for (long long c0 = 0; c0 < dim; ++c0) cur.emplace(c0 * dim + c0, Rat(1));
  std::vector<Rat> closing(static_cast<size_t>(dim));
  for (long long count = 1; count <= dim - 1; ++count) {
    std::unordered_map<long long, Rat> next;
    next.reserve(cur.size() * 2);
    std::fill(closing.begin(), closing.end(), Rat(0));
    for (const auto& [key, t] : cur) {
      long long c0 = key / dim, c1 = key % dim;
      for (const auto& [c2, e] : row(c1)) {
        if (e == 0 || c2 < c0) continue;
        bool flip = c2 == c1;
        if (special(c1, c2)) flip = !flip;
        Rat tt = t * (e > 0 ? e : Rat(-e));
        if (flip) tt = -tt;
        if (c2 > c0) {
          next[c0 * dim + c2] += tt;
        } else {
          closing[static_cast<size_t>(c0)] -= tt;  // new-clow sign flip
        }
      }
    }
    Rat prefix(0);
    for (long long c3 = 0; c3 < dim; ++c3) {
      if (prefix != 0) next[c3 * dim + c3] += prefix;
      prefix += closing[static_cast<size_t>(c3)];
    }
    for (auto it = next.begin(); it != next.end();)
      it = it->second == 0 ? next.erase(it) : std::next(it);
    cur = std::move(next);
  }
  Rat total(0);
  for (const auto& [key, t] : cur) {
    long long c0 = key / dim, c1 = key % dim;
    for (const auto& [c2, e] : row(c1)) {
      if (c2 != c0 || e == 0) continue;
      bool flip = c2 == c1;
      if (special(c1, c2)) flip = !flip;
      Rat tt = t * (e > 0 ? e : Rat(-e));
      if (flip) tt = -tt;
      total += tt;
    }
  }
  return -total;
}

namespace {

RowOracle t_row_oracle(const SplitEvolution& split) {
  return [&split](long long r) {
    std::vector<std::pair<long long, Rat>> out;
    Rat diag = split.t_entry(r, r);
    if (diag != 0) out.emplace_back(r, diag);
    for (const auto& [c, w] : split.t_row_offdiag(r))
      if (c != r && w != 0) out.emplace_back(c, w);
    return out;
  };
}

Rat rat_pow(const Rat& base, long long e) {
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num().get_mpz_t(), static_cast<unsigned long>(e));
  mpz_pow_ui(den.get_mpz_t(), base.get_den().get_mpz_t(), static_cast<unsigned long>(e));
  Rat r(num, den);
  r.canonicalize();
  return r;
}

Rat f1_of(int nq, int n) {
  return rat_pow(gen_probability(nq, n), 8LL * nq * nq * (n + 2) * (n + 2) - 1);
}

}  // namespace

int generator_heads();

DetGenerator build_det_generator(const SplitEvolution& split) {
  DetGenerator g;
  g.heads = generator_heads();
  g.nq = static_cast<int>(split.spec().states.size());
  g.n = split.input_length();
  g.conf_dim = split.conf().dim();
  g.f1 = f1_of(g.nq, g.n);
  Rat det = walk_determinant(g.conf_dim, t_row_oracle(split),
                             [](long long, long long) { return false; });
  g.gap = g.f1 * det;
  return g;
}

DetGenerator build_det_generator_minor(const SplitEvolution& split, long long j_hat, int chi) {
  DetGenerator g;
  g.heads = generator_heads();
  g.nq = static_cast<int>(split.spec().states.size());
  g.n = split.input_length();
  g.conf_dim = split.conf().dim();
  g.f1 = f1_of(g.nq, g.n);
  long long i0 = split.i0();
  if (i0 == j_hat) throw Error("minor walk: target coincides with the initial configuration");
  auto base = t_row_oracle(split);
  RowOracle row = [base, i0, j_hat](long long r) {
    auto out = base(r);
    std::erase_if(out, [&](const auto& e) { return e.first == j_hat; });
    if (r == i0) out.emplace_back(j_hat, Rat(1));
    return out;
  };
  Rat det = walk_determinant(
      g.conf_dim, row, [i0, j_hat](long long r, long long c) { return r == i0 && c == j_hat; });
  g.gap = g.f1 * (chi > 0 ? det : Rat(-det));
  return g;
}

int generator_heads() {
  // two heads per stored configuration (clow head, current vertex, fresh
  // candidate), two counter heads, plus the widest subroutine workspace
  // (the comparator's copy pair and working head)
  int bookkeeping = 6 + 2;
  int workspace = 3;
  return bookkeeping + workspace;
}

GapPair assemble_gap_pair(const MachineSpec& qfa, const std::string& x) {
  SplitEvolution split(qfa, x);
  GapPair pair;
  pair.heads = generator_heads();
  pair.nq = static_cast<int>(qfa.states.size());
  pair.n = static_cast<int>(x.size());
  pair.conf_dim = split.conf().dim();
  pair.f1 = f1_of(pair.nq, pair.n);
  int na = static_cast<int>(qfa.accepting.size());
  if (na == 0) throw Error("gap pair: machine has no accepting states");
  Rat sel(1, 4 * na);
  {
    mpz_class den = 1;
    mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), 2 * equiprob_rounds(pair.n));
    sel /= Rat(den);
  }
  pair.f2 = sel * pair.f1;

  DetGenerator n1 = build_det_generator(split);
  pair.gap_n1 = n1.gap;
  pair.gap_n1_prime = sel * n1.gap;
  pair.gap_n2 = Rat(0);
  for (const auto& [j_hat, chi] : split.targets(true)) {
    DetGenerator m = build_det_generator_minor(split, j_hat, chi);
    pair.gap_n2 += sel * m.gap;
  }
  pair.det_t = resolvent_determinant(split);
  return pair;
}

CombinedCutpoint cutpoint_combine(const GapPair& pair) {
  // components halt completely, so each has p = (1 +- gap)/2
  Rat p1a = (1 + pair.gap_n1_prime) / 2, p1r = (1 - pair.gap_n1_prime) / 2;
  Rat p2a = (1 + pair.gap_n2) / 2, p2r = (1 - pair.gap_n2) / 2;
  CombinedCutpoint c;
  c.p_acc = p1r / 4 + p2a / 2 + Rat(1, 8);
  c.p_rej = p1a / 4 + p2r / 2 + Rat(1, 8);
  return c;
}

std::string GapPair::to_json() const {
  nlohmann::json j;
  j["nq"] = nq;
  j["n"] = n;
  j["conf_dim"] = conf_dim;
  j["heads"] = heads;
  j["f1"] = rat_str(f1);
  j["f2"] = rat_str(f2);
  j["gap_n1"] = rat_str(gap_n1);
  j["gap_n1_prime"] = rat_str(gap_n1_prime);
  j["gap_n2"] = rat_str(gap_n2);
  j["det"] = rat_str(det_t);
  return j.dump(2);
}

}  // namespace qfa
