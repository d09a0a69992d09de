#include "qfa/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "qfa/evolution.hpp"

namespace qfa {

namespace {

std::vector<std::vector<int>> all_scan_tuples(const MachineSpec& m) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(m.heads, 0);
  while (true) {
    out.push_back(cur);
    int h = m.heads - 1;
    while (h >= 0 && ++cur[h] == m.num_symbols()) cur[h--] = 0;
    if (h < 0) break;
  }
  return out;
}

void add_rule(MachineSpec& m, int from, std::vector<int> scan, int to, std::vector<int> move,
              AmpExpr w) {
  Scalar v = w.eval();
  if (v.is_zero()) return;
  Transition t;
  t.from = from;
  t.scan = std::move(scan);
  t.to = to;
  t.move = std::move(move);
  t.weight = std::move(w);
  m.transitions.push_back(std::move(t));
}

int add_state(MachineSpec& m, const std::string& name, char cls) {
  int id = static_cast<int>(m.states.size());
  m.states.push_back(name);
  if (cls == 'a') m.accepting.insert(id);
  if (cls == 'r') m.rejecting.insert(id);
  return id;
}

// Hadamard rows over a fresh quadruple, amplitude 1/2 each.
const int kH4[4][4] = {{1, 1, 1, 1}, {1, -1, 1, -1}, {1, 1, -1, -1}, {1, -1, -1, 1}};

}  // namespace

TransformResult complement(const MachineSpec& spec) {
  TransformResult r;
  r.spec = spec;
  std::swap(r.spec.accepting, r.spec.rejecting);
  r.spec.reindex();
  r.cert = {"complement", {}, Relation::SwapAccRej, Rat(0), Rat(0),
            static_cast<int>(spec.states.size()), static_cast<int>(r.spec.states.size()),
            {}, "accepting and rejecting sets exchanged"};
  return r;
}

TransformResult complex_to_real(const MachineSpec& spec) {
  if (spec.kind != Kind::QFA) throw Error("complex_to_real expects a qfa");
  TransformResult r;
  MachineSpec& m = r.spec;
  m.kind = Kind::QFA;
  m.heads = spec.heads;
  m.alphabet = spec.alphabet;
  m.motion = spec.motion;
  int n = static_cast<int>(spec.states.size());
  auto rid = [&](int q) { return q; };          // real copy
  auto iid = [&](int q) { return n + q; };      // imaginary copy
  for (int q = 0; q < n; ++q) m.states.push_back(spec.states[q] + "#R");
  for (int q = 0; q < n; ++q) m.states.push_back(spec.states[q] + "#I");
  for (int q : spec.accepting) {
    m.accepting.insert(rid(q));
    m.accepting.insert(iid(q));
  }
  for (int q : spec.rejecting) {
    m.rejecting.insert(rid(q));
    m.rejecting.insert(iid(q));
  }
  m.initial = rid(spec.initial);
  for (const auto& t : spec.transitions) {
    auto [re, im] = t.weight.split_re_im();
    // b = c: Re; R -> I: Im; I -> R: -Im
    add_rule(m, rid(t.from), t.scan, rid(t.to), t.move, re);
    add_rule(m, iid(t.from), t.scan, iid(t.to), t.move, re);
    add_rule(m, rid(t.from), t.scan, iid(t.to), t.move, im);
    add_rule(m, iid(t.from), t.scan, rid(t.to), t.move, im.negated());
  }
  m.reindex();
  r.cert = {"complex_to_real", {}, Relation::SameProbs, Rat(0), Rat(0),
            n, 2 * n, {}, "state set doubled with the Re/Im wiring"};
  return r;
}

TransformResult half_split(const MachineSpec& spec) {
  if (spec.kind != Kind::QFA) throw Error("half_split expects a qfa");
  TransformResult r;
  MachineSpec m = spec;
  std::vector<int> zero_move(m.heads, 0);
  AmpExpr half = AmpExpr::rational(Rat(1, 2));
  std::vector<int> original_acc(spec.accepting.begin(), spec.accepting.end());
  m.accepting.clear();
  int counter = 0;
  for (int q : original_acc) {
    std::string suffix = "#" + std::to_string(counter++);
    int f[4];
    f[0] = add_state(m, "acc1" + suffix, 'a');
    f[1] = add_state(m, "acc2" + suffix, 'a');
    f[2] = add_state(m, "rej1" + suffix, 'r');
    f[3] = add_state(m, "rej2" + suffix, 'r');
    // move q's original columns onto the fourth fresh state
    for (auto& t : m.transitions)
      if (t.from == q) t.from = f[3];
    // q and the first three fresh states fill the Hadamard block
    int sources[4] = {q, f[0], f[1], f[2]};
    for (const auto& scan : all_scan_tuples(m)) {
      for (int row = 0; row < 4; ++row) {
        for (int col = 0; col < 4; ++col) {
          AmpExpr w = kH4[row][col] > 0 ? half : half.negated();
          add_rule(m, sources[row], scan, f[col], zero_move, w);
        }
      }
    }
    r.cert.renames[spec.states[q]] = "demoted; halting rerouted through " + suffix;
  }
  m.reindex();
  r.spec = std::move(m);
  r.cert.name = "half_split";
  r.cert.relation = Relation::HalfAcc;
  r.cert.states_in = static_cast<int>(spec.states.size());
  r.cert.states_out = static_cast<int>(r.spec.states.size());
  r.cert.notes = "each acceptance event split 1/2-1/2 over fresh accept/reject pairs";
  return r;
}

TransformResult damp(const MachineSpec& spec, const Rat& alpha) {
  if (alpha <= 0 || alpha >= 1) throw Error("damp: alpha must lie in (0,1)");
  TransformResult r;
  MachineSpec m = spec;
  std::vector<int> zero_move(m.heads, 0);
  int q0 = spec.initial;
  int nq0 = add_state(m, spec.states[q0] + "#damp", 'n');
  int qrej = add_state(m, "rej#damp", 'r');
  m.initial = nq0;
  AmpExpr ra = AmpExpr::sqrt_of(alpha), rb = AmpExpr::sqrt_of(Rat(1) - alpha);
  // rotate {fresh rejecting direction, original q0 column}
  std::vector<Transition> extra;
  for (const auto& t : m.transitions) {
    if (t.from != q0) continue;
    Transition nt = t;
    nt.from = nq0;
    nt.weight = rb * t.weight;
    extra.push_back(std::move(nt));
  }
  for (auto& t : m.transitions) {
    if (t.from != q0) continue;
    t.weight = (ra * t.weight).negated();
  }
  for (auto& t : extra) m.transitions.push_back(std::move(t));
  for (const auto& scan : all_scan_tuples(m)) {
    add_rule(m, nq0, scan, qrej, zero_move, ra);
    add_rule(m, q0, scan, qrej, zero_move, rb);
    add_rule(m, qrej, scan, nq0, zero_move, AmpExpr::rational(Rat(1)));
  }
  m.reindex();
  r.spec = std::move(m);
  r.cert = {"damp", {}, Relation::Damped, alpha, Rat(0),
            static_cast<int>(spec.states.size()), static_cast<int>(r.spec.states.size()),
            {{spec.states[q0], spec.states[q0] + "#damp"}},
            "initial step leaks alpha into a fresh rejecting state; relation assumes the "
            "original initial state never re-acquires amplitude"};
  return r;
}

namespace {

struct Lift {
  int offset;  // state-id offset in the combined machine
};

// Lifts a one-head machine into a two-head machine driving head `which`,
// the other head never moving.
void lift_copy(MachineSpec& m, const MachineSpec& src, const std::string& prefix, int which,
               int* offset) {
  *offset = static_cast<int>(m.states.size());
  for (const auto& s : src.states) m.states.push_back(prefix + s);
  for (int q : src.accepting) m.accepting.insert(*offset + q);
  for (int q : src.rejecting) m.rejecting.insert(*offset + q);
  for (const auto& t : src.transitions) {
    for (int other = 0; other < m.num_symbols(); ++other) {
      Transition nt;
      nt.from = *offset + t.from;
      nt.to = *offset + t.to;
      nt.scan = which == 0 ? std::vector<int>{t.scan[0], other}
                           : std::vector<int>{other, t.scan[0]};
      nt.move = which == 0 ? std::vector<int>{t.move[0], 0} : std::vector<int>{0, t.move[0]};
      nt.weight = t.weight;
      m.transitions.push_back(std::move(nt));
    }
  }
}

}  // namespace

TransformResult affine_combine(const MachineSpec& f, const MachineSpec& g, const Rat& alpha,
                               const Rat& beta) {
  if (alpha < 0 || beta < 0 || alpha + beta > 1)
    throw Error("affine_combine: need alpha, beta >= 0 and alpha + beta <= 1");
  if (f.heads != 1 || g.heads != 1 || f.kind != Kind::QFA || g.kind != Kind::QFA)
    throw Error("affine_combine expects one-head qfas");
  if (f.alphabet != g.alphabet) throw Error("affine_combine: alphabets differ");

  TransformResult r;
  MachineSpec m;
  m.kind = Kind::QFA;
  m.heads = 2;
  m.alphabet = f.alphabet;
  int x0 = add_state(m, "x0", 'n');
  int x1 = add_state(m, "x1", 'n');
  int x2 = add_state(m, "x2", 'n');
  int xrej = add_state(m, "xrej", 'r');
  int foff, goff;
  lift_copy(m, f, "f.", 0, &foff);
  lift_copy(m, g, "g.", 0, &goff);
  m.initial = x0;

  const std::vector<int> LL{kLeftEnd, kLeftEnd}, LR{kLeftEnd, kRightEnd};
  // head 2 swings left (wrapping to the right endmarker), branches, and returns
  add_rule(m, x0, LL, x1, {0, -1}, AmpExpr::rational(Rat(1)));

  Rat gamma = Rat(1) - alpha - beta;
  AmpExpr sa = AmpExpr::sqrt_of(alpha);
  AmpExpr sb1 = AmpExpr::sqrt_of(Rat(1) - alpha);
  // first rotation at (<,>): { image of f's first step (head 2 parked at >), x2 }
  std::vector<Transition> f_first;  // f's initial-state column at '<'
  for (const auto& t : f.transitions)
    if (t.from == f.initial && t.scan[0] == kLeftEnd) f_first.push_back(t);
  for (const auto& t : f_first) {
    add_rule(m, x1, LR, foff + t.to, {t.move[0], 0}, sa * t.weight);
    add_rule(m, foff + f.initial, LR, foff + t.to, {t.move[0], 0}, (sb1 * t.weight).negated());
  }
  add_rule(m, x1, LR, x2, {0, 1}, sb1);
  add_rule(m, foff + f.initial, LR, x2, {0, 1}, sa);
  // drop the plain lifted (f initial, (<,>)) rules we just replaced
  std::erase_if(m.transitions, [&](const Transition& t) {
    if (t.from != foff + f.initial) return false;
    if (t.scan != LR) return false;
    // keep only the rotation rules added above (they carry sqrt factors)
    for (const auto& a : t.weight.atoms)
      if (a.type == AmpAtom::Type::Sqrt) return false;
    return true;
  });

  // second rotation at (<,<): { image of g's first step (head 2 back at 0), xrej }
  if (alpha < 1) {
    Rat bprime = beta / (Rat(1) - alpha);
    Rat gprime = gamma / (Rat(1) - alpha);
    AmpExpr sb = AmpExpr::sqrt_of(bprime), sg = AmpExpr::sqrt_of(gprime);
    std::vector<Transition> g_first;
    for (const auto& t : g.transitions)
      if (t.from == g.initial && t.scan[0] == kLeftEnd) g_first.push_back(t);
    for (const auto& t : g_first) {
      add_rule(m, x2, LL, goff + t.to, {t.move[0], 0}, sb * t.weight);
      add_rule(m, goff + g.initial, LL, goff + t.to, {t.move[0], 0}, (sg * t.weight).negated());
    }
    add_rule(m, x2, LL, xrej, {0, 0}, sg);
    add_rule(m, goff + g.initial, LL, xrej, {0, 0}, sb);
    std::erase_if(m.transitions, [&](const Transition& t) {
      if (t.from != goff + g.initial) return false;
      if (t.scan != LL) return false;
      for (const auto& a : t.weight.atoms)
        if (a.type == AmpAtom::Type::Sqrt) return false;
      return true;
    });
  } else {
    add_rule(m, x2, LL, xrej, {0, 0}, AmpExpr::rational(Rat(1)));
  }
  // close the unitary bookkeeping: the fresh rejecting column feeds x0
  add_rule(m, xrej, LL, x0, {0, 0}, AmpExpr::rational(Rat(1)));
  // idle self-loops at every scan where no dance rule owns the column
  for (const auto& scan : all_scan_tuples(m)) {
    std::vector<int> zero{0, 0};
    if (scan != LL) add_rule(m, x0, scan, x0, zero, AmpExpr::rational(Rat(1)));
    if (scan != LR) add_rule(m, x1, scan, x1, zero, AmpExpr::rational(Rat(1)));
    if (scan != LL) add_rule(m, x2, scan, x2, zero, AmpExpr::rational(Rat(1)));
    if (scan != LL) add_rule(m, xrej, scan, xrej, zero, AmpExpr::rational(Rat(1)));
  }
  m.reindex();
  r.spec = std::move(m);
  r.cert = {"affine_combine", {"f", "g"}, Relation::AffineAcc, alpha, beta,
            static_cast<int>(f.states.size() + g.states.size()),
            static_cast<int>(r.spec.states.size()), {},
            "two-stage rotation cascade; exact when alpha, beta/(1-alpha) and "
            "(1-alpha-beta)/(1-alpha) are rational squares"};
  return r;
}

namespace {

TransformResult tensor_pair(const MachineSpec& f, const MachineSpec& g, bool square) {
  if (f.heads != 1 || g.heads != 1) throw Error("tensor construction expects one-head machines");
  if (f.alphabet != g.alphabet) throw Error("tensor construction: alphabets differ");
  TransformResult r;
  MachineSpec m;
  m.kind = Kind::QFA;
  m.heads = 2;
  m.alphabet = f.alphabet;
  int ng = static_cast<int>(g.states.size());
  auto pid = [&](int qf, int qg) { return qf * ng + qg; };
  for (const auto& sf : f.states)
    for (const auto& sg : g.states) m.states.push_back(sf + "|" + sg);
  m.initial = pid(f.initial, g.initial);
  for (int qf = 0; qf < static_cast<int>(f.states.size()); ++qf)
    for (int qg = 0; qg < ng; ++qg) {
      bool fa = f.accepting.count(qf), fr = f.rejecting.count(qf);
      bool ga = g.accepting.count(qg), gr = g.rejecting.count(qg);
      if (square) {
        if ((fa && ga) || (fr && gr)) m.accepting.insert(pid(qf, qg));
        if ((fa && gr) || (fr && ga)) m.rejecting.insert(pid(qf, qg));
      } else {
        // (rej, rej) pairs also halt; leaving them live would let the
        // unitary-completion columns recirculate their mass
        if (fa && ga) m.accepting.insert(pid(qf, qg));
        if ((fa && gr) || (fr && ga) || (fr && gr)) m.rejecting.insert(pid(qf, qg));
      }
    }
  for (const auto& tf : f.transitions)
    for (const auto& tg : g.transitions) {
      Transition t;
      t.from = pid(tf.from, tg.from);
      t.to = pid(tf.to, tg.to);
      t.scan = {tf.scan[0], tg.scan[0]};
      t.move = {tf.move[0], tg.move[0]};
      t.weight = tf.weight * tg.weight;
      Scalar v = t.weight.eval();
      if (v.is_zero()) continue;
      m.transitions.push_back(std::move(t));
    }
  m.reindex();
  r.spec = std::move(m);
  return r;
}

}  // namespace

TransformResult product_machine(const MachineSpec& f, const MachineSpec& g) {
  TransformResult r = tensor_pair(f, g, false);
  r.cert = {"product", {"f", "g"}, Relation::ProductAcc, Rat(0), Rat(0),
            static_cast<int>(f.states.size() + g.states.size()),
            static_cast<int>(r.spec.states.size()), {},
            "tensor machine; accepting set acc x acc"};
  return r;
}

TransformResult square_pair(const MachineSpec& spec) {
  for (const auto& t : spec.transitions) {
    Scalar v = t.weight.eval();
    if (!v.is_real()) throw Error("square_pair expects real amplitudes");
  }
  TransformResult r = tensor_pair(spec, spec, true);
  r.cert = {"square_pair", {"m"}, Relation::SquareAcc, Rat(0), Rat(0),
            static_cast<int>(spec.states.size()), static_cast<int>(r.spec.states.size()), {},
            "pair machine accepting on matching halting outcomes"};
  return r;
}

TransformResult one_way_embed(const MachineSpec& spec, bool all_to_reject) {
  if (spec.motion != HeadMotion::OneWay) throw Error("one_way_embed expects a one-way machine");
  if (spec.heads != 1) throw Error("one_way_embed expects one head");
  TransformResult r;
  MachineSpec m = spec;
  m.motion = HeadMotion::TwoWay;
  std::vector<int> nonhalting;
  for (int q = 0; q < static_cast<int>(spec.states.size()); ++q)
    if (!spec.is_halting(q)) nonhalting.push_back(q);
  std::map<int, int> wait_of, ret_of;
  for (int p : nonhalting) {
    wait_of[p] = add_state(m, spec.states[p] + "#w", all_to_reject ? 'r' : 'n');
    ret_of[p] = add_state(m, spec.states[p] + "#r", 'n');
  }
  // retarget survivors of the right-endmarker step into the wait states
  for (auto& t : m.transitions) {
    if (t.scan[0] != kRightEnd) continue;
    if (t.from >= static_cast<int>(spec.states.size())) continue;
    auto it = wait_of.find(t.to);
    if (it != wait_of.end()) t.to = it->second;
  }
  AmpExpr one = AmpExpr::rational(Rat(1)), half = AmpExpr::rational(Rat(1, 2));
  bool stochastic = spec.kind == Kind::PFA;
  for (int p : nonhalting) {
    int w = wait_of[p], ret = ret_of[p];
    if (!all_to_reject && !stochastic) {
      int f[4];
      std::string sfx = "#" + spec.states[p];
      f[0] = add_state(m, "acc1" + sfx, 'a');
      f[1] = add_state(m, "acc2" + sfx, 'a');
      f[2] = add_state(m, "rej1" + sfx, 'r');
      f[3] = add_state(m, "rej2" + sfx, 'r');
      int sources[4] = {w, f[0], f[1], f[2]};
      for (int sym = 0; sym < m.num_symbols(); ++sym) {
        for (int row = 0; row < 4; ++row)
          for (int col = 0; col < 4; ++col)
            add_rule(m, sources[row], {sym}, f[col], {0},
                     kH4[row][col] > 0 ? half : half.negated());
        // the spare fresh column and the return chain keep U a permutation
        add_rule(m, f[3], {sym}, ret, {0}, one);
        add_rule(m, ret, {sym}, sym == kRightEnd ? p : w, {1}, one);
      }
    } else if (!all_to_reject) {
      // stochastic split: no orthogonality bookkeeping needed
      int fa = add_state(m, "acc#" + spec.states[p], 'a');
      int fr = add_state(m, "rej#" + spec.states[p], 'r');
      for (int sym = 0; sym < m.num_symbols(); ++sym) {
        add_rule(m, w, {sym}, fa, {0}, half);
        add_rule(m, w, {sym}, fr, {0}, half);
        add_rule(m, fa, {sym}, fa, {0}, one);
        add_rule(m, fr, {sym}, fr, {0}, one);
        add_rule(m, ret, {sym}, ret, {0}, one);
      }
    } else if (stochastic) {
      for (int sym = 0; sym < m.num_symbols(); ++sym) {
        add_rule(m, w, {sym}, w, {0}, one);
        add_rule(m, ret, {sym}, ret, {0}, one);
      }
    } else {
      for (int sym = 0; sym < m.num_symbols(); ++sym) {
        add_rule(m, w, {sym}, ret, {0}, one);
        add_rule(m, ret, {sym}, sym == kRightEnd ? p : w, {1}, one);
      }
    }
  }
  m.reindex();
  r.spec = std::move(m);
  r.cert = {"one_way_embed", {}, all_to_reject ? Relation::OneWayReject : Relation::OneWaySplit,
            Rat(0), Rat(0), static_cast<int>(spec.states.size()),
            static_cast<int>(r.spec.states.size()), {},
            all_to_reject ? "survivors past the right endmarker all reject"
                          : "survivors split 1/2-1/2 into fresh accept/reject"};
  return r;
}

std::vector<std::string> transform_test_corpus(const MachineSpec& spec, int count, unsigned seed) {
  std::vector<std::string> out{""};
  int k = static_cast<int>(spec.alphabet.size());
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> len(0, 6), pick(0, std::max(0, k - 1));
  while (static_cast<int>(out.size()) < count) {
    int n = len(rng);
    std::string x(n, 'a');
    for (int i = 0; i < n; ++i) x[i] = spec.alphabet[pick(rng)][0];
    out.push_back(x);
  }
  return out;
}

void check_transform_relation(const TransformResult& result,
                              const std::vector<const MachineSpec*>& inputs,
                              const std::vector<std::string>& test_inputs, long long t_max) {
  for (const auto& x : test_inputs) {
    long long tm = t_max > 0 ? t_max
                             : default_t_max(result.spec, static_cast<int>(x.size()));
    RunTrace out = step_simulate(result.spec, x, tm);
    std::vector<RunTrace> in;
    for (const MachineSpec* m : inputs) in.push_back(step_simulate(*m, x, tm));
    bool exact = out.backend == Backend::Exact;
    for (const auto& tr : in) exact = exact && tr.backend == Backend::Exact;

    auto expect = [&](const Scalar& got, const std::function<Rat()>& want_exact,
                      double want_float, const std::string& label) {
      if (exact) {
        Rat w = want_exact();
        if (!(got.cr() == CRat(w)))
          throw Error("transform " + result.cert.name + " on '" + x + "': " + label +
                      " expected " + rat_str(w) + ", got " + got.str());
      } else {
        double g = got.cf().real();
        if (std::abs(g - want_float) > 1e-9)
          throw Error("transform " + result.cert.name + " on '" + x + "': " + label +
                      " expected " + std::to_string(want_float) + ", got " + std::to_string(g));
      }
    };
    auto acc = [&](int i) { return exact ? in[i].cum_acc.cr().re : Rat(0); };
    auto rej = [&](int i) { return exact ? in[i].cum_rej.cr().re : Rat(0); };
    auto facc = [&](int i) { return in[i].cum_acc.cf().real(); };
    auto frej = [&](int i) { return in[i].cum_rej.cf().real(); };

    switch (result.cert.relation) {
      case Relation::SwapAccRej:
        expect(out.cum_acc, [&]() -> Rat { return rej(0); }, frej(0), "p_acc");
        expect(out.cum_rej, [&]() -> Rat { return acc(0); }, facc(0), "p_rej");
        break;
      case Relation::SameProbs:
        expect(out.cum_acc, [&]() -> Rat { return acc(0); }, facc(0), "p_acc");
        expect(out.cum_rej, [&]() -> Rat { return rej(0); }, frej(0), "p_rej");
        break;
      case Relation::HalfAcc:
        expect(out.cum_acc, [&]() -> Rat { return acc(0) / 2; }, facc(0) / 2, "p_acc");
        expect(out.cum_rej, [&]() -> Rat { return rej(0) + acc(0) / 2; }, frej(0) + facc(0) / 2, "p_rej");
        break;
      case Relation::Damped: {
        Rat a = result.cert.alpha;
        expect(out.cum_acc, [&]() -> Rat { return (1 - a) * acc(0); }, (1 - a.get_d()) * facc(0), "p_acc");
        expect(out.cum_rej, [&]() -> Rat { return a + (1 - a) * rej(0); },
               a.get_d() + (1 - a.get_d()) * frej(0), "p_rej");
        break;
      }
      case Relation::AffineAcc: {
        Rat a = result.cert.alpha, b = result.cert.beta;
        expect(out.cum_acc, [&]() -> Rat { return a * acc(0) + b * acc(1); },
               a.get_d() * facc(0) + b.get_d() * facc(1), "p_acc");
        break;
      }
      case Relation::ProductAcc:
        expect(out.cum_acc, [&]() -> Rat { return acc(0) * acc(1); }, facc(0) * facc(1), "p_acc");
        break;
      case Relation::SquareAcc:
        expect(out.cum_acc, [&]() -> Rat { return acc(0) * acc(0) + rej(0) * rej(0); },
               facc(0) * facc(0) + frej(0) * frej(0), "p_acc");
        expect(out.cum_rej, [&]() -> Rat { return 2 * acc(0) * rej(0); }, 2 * facc(0) * frej(0), "p_rej");
        break;
      case Relation::OneWaySplit: {
        expect(out.cum_acc, [&]() -> Rat { return acc(0) + (1 - acc(0) - rej(0)) / 2; },
               facc(0) + (1 - facc(0) - frej(0)) / 2, "p_acc");
        break;
      }
      case Relation::OneWayReject: {
        expect(out.cum_rej, [&]() -> Rat { return rej(0) + (1 - acc(0) - rej(0)); },
               frej(0) + (1 - facc(0) - frej(0)), "p_rej");
        break;
      }
    }
  }
}

}  // namespace qfa
