#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <random>

#include "doctest.h"
#include "qfa/evolution.hpp"
#include "qfa/resolvent.hpp"
#include "qfa/zoo.hpp"
#include "test_support.hpp"

using namespace qfa;
using namespace qfa::test;

TEST_CASE("conf star enumeration size") {
  // |Q| = 1, n = 0: 1 * 2^2 * 2^2 = 16 elements
  MachineSpec m = machine_spinner().spec;
  auto confs = conf_star_order(m, 0);
  CHECK(confs.size() == 16);
}

TEST_CASE("conf star comparator is a total order matching the enumeration") {
  MachineSpec coin = machine_coin().spec;  // |Q| = 3 keeps the grid small
  auto confs = conf_star_order(coin, 1);
  ConfStar cs{3, 3};
  // comparator coincides with index order
  for (size_t i = 0; i < confs.size(); ++i) {
    CHECK(cs.index(confs[i]) == static_cast<long long>(i));
    for (size_t j = 0; j < confs.size(); ++j) {
      bool lt = conf_less(confs[i], confs[j]);
      CHECK(lt == (i < j));                               // enumeration order
      if (i != j) CHECK(lt != conf_less(confs[j], confs[i]));  // antisymmetry
    }
  }
  // sorting a shuffled enumeration reproduces it
  auto shuffled = confs;
  std::mt19937 rng(5);
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  std::sort(shuffled.begin(), shuffled.end(), conf_less);
  for (size_t i = 0; i < confs.size(); ++i) CHECK(shuffled[i] == confs[i]);
}

TEST_CASE("split of a nonnegative machine has empty negative part") {
  SplitEvolution se(machine_trivial_accept().spec, "a");
  for (const auto& col : se.dminus_cols()) CHECK(col.empty());
}

TEST_CASE("negative amplitudes land in the negative part only") {
  // 2-state machine with a -1 amplitude on a non-halting column
  PermBuilder b(Kind::QFA, 1, {"a"});
  b.state("q0", 'n', {1});
  b.state("q1", 'a', {1});
  b.initial("q0");
  for (const std::string s : {"<", "a", ">"}) {
    b.block({s}, {"q0"}, {"q1"}, {{AmpExpr::rational(Rat(-1))}});
    b.single({s}, "q1", "q0");
  }
  MachineSpec m = b.finish();
  SplitEvolution se(m, "a");
  bool has_minus = false;
  for (const auto& col : se.dminus_cols()) has_minus = has_minus || !col.empty();
  CHECK(has_minus);
  for (const auto& col : se.dplus_cols()) CHECK(col.empty());
  // D+ - D- = D and disjoint supports hold by construction; acceptance is
  // unaffected by the sign
  ResolventResult r = acceptance_resolvent(m, "a");
  CHECK(r.p_acc == Scalar::exact(Rat(1)));
}

TEST_CASE("paired series matches step simulation on the coin machine") {
  MachineSpec coin = machine_coin().spec;
  SplitEvolution se(coin, "a");
  Scalar series = acceptance_series_pair(se, 50);
  RunTrace tr = step_simulate(coin, "a", 50);
  CHECK(series == tr.cum_acc);
  Scalar rej = acceptance_series_pair(se, 50, false);
  CHECK(rej == tr.cum_rej);
}

TEST_CASE("paired series converges on the leaky machine") {
  MachineSpec leaky = machine_leaky(Rat(9, 25)).spec;
  SplitEvolution se(leaky, "a");
  Scalar series = acceptance_series_pair(se, 200);
  CHECK(series.cf().real() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("resolvent probabilities on the fixtures") {
  CHECK(acceptance_resolvent(machine_coin().spec, "a").p_acc == Scalar::exact(Rat(9, 25)));
  CHECK(acceptance_resolvent(machine_coin().spec, "a").p_rej == Scalar::exact(Rat(16, 25)));
  CHECK(acceptance_resolvent(machine_trivial_accept().spec, "").p_acc == Scalar::exact(Rat(1)));
  CHECK(acceptance_resolvent(machine_trivial_reject().spec, "aa").p_rej == Scalar::exact(Rat(1)));
  // geometric halting: the resolvent sums the series exactly
  CHECK(acceptance_resolvent(machine_leaky(Rat(9, 25)).spec, "a").p_acc == Scalar::exact(Rat(1)));
}

TEST_CASE("resolvent agrees with simulation on random absolute halters") {
  std::mt19937 rng(777);
  int used = 0;
  for (int trial = 0; trial < 30 && used < 10; ++trial) {
    MachineSpec m = random_unitary_machine(rng);
    std::string x(trial % 3, 'a');
    RunTrace tr = step_simulate(m, x, 4000);
    if (tr.verdict != TraceVerdict::HaltedAll) continue;
    ++used;
    ResolventResult r = acceptance_resolvent(m, x);
    CHECK(r.p_acc == tr.cum_acc);
    CHECK(r.p_rej == tr.cum_rej);
  }
  CHECK(used >= 5);
}

TEST_CASE("spinner triggers the restricted fallback solve") {
  ResolventResult r = acceptance_resolvent(machine_spinner().spec, "a");
  CHECK(r.fallback);
  CHECK(r.p_acc.is_zero());
  CHECK(r.p_rej.is_zero());
}

TEST_CASE("resolvent determinant of nilpotent fixtures is 1") {
  SplitEvolution coin(machine_coin().spec, "a");
  CHECK(resolvent_determinant(coin) == Rat(1));
  SplitEvolution triv(machine_trivial_accept().spec, "");
  CHECK(resolvent_determinant(triv) == Rat(1));
}

TEST_CASE("resolvent determinant of the leaky machine") {
  // I - Pt has det prod(1 - lambda_i); computed independently against the
  // dense exact determinant
  MachineSpec leaky = machine_leaky(Rat(9, 25)).spec;
  SplitEvolution se(leaky, "");
  long long dim = se.conf().dim();
  Matrix t(static_cast<int>(dim), static_cast<int>(dim), Backend::Exact);
  for (long long c = 0; c < dim; ++c) {
    t.at(static_cast<int>(c), static_cast<int>(c)) = Scalar::one(Backend::Exact);
    for (const auto& [r, w] : se.pt_column(c))
      t.at(static_cast<int>(r), static_cast<int>(c)) =
          t.at(static_cast<int>(r), static_cast<int>(c)) - Scalar::exact(w);
  }
  CHECK(resolvent_determinant(se) == determinant(t).cr().re);
}

TEST_CASE("clow determinant basics") {
  Matrix m(2, 2, Backend::Exact);
  m.at(0, 0) = Scalar::exact(Rat(3));
  m.at(0, 1) = Scalar::exact(Rat(5, 2));
  m.at(1, 0) = Scalar::exact(Rat(-1, 3));
  m.at(1, 1) = Scalar::exact(Rat(7));
  CHECK(clow_determinant(m) == Scalar::exact(Rat(3) * Rat(7) - Rat(5, 2) * Rat(-1, 3)));
  CHECK(clow_determinant(Matrix::identity(3, Backend::Exact)) == Scalar::exact(Rat(1)));
}

TEST_CASE("clow determinant equals Bareiss elimination on random matrices") {
  std::mt19937 rng(31337);
  for (int trial = 0; trial < 50; ++trial) {
    Matrix a = random_exact_matrix(rng, 5);
    CHECK(clow_determinant(a) == determinant(a));
  }
}

TEST_CASE("clow determinant enforces the dimension cap") {
  CHECK_THROWS_AS(clow_determinant(Matrix::identity(8, Backend::Exact)), Error);
  CHECK_NOTHROW(clow_determinant(Matrix::identity(7, Backend::Exact)));
}

TEST_CASE("resolvent reproduces genuine interference between signed paths") {
  // two superposed branches reach the same halting configurations with
  // opposite signs: constructive into accept, destructive into reject
  PermBuilder b(Kind::QFA, 1, {"a"});
  b.state("q0", 'n', {1});
  b.state("q1", 'n', {1});
  b.state("q2", 'n', {1});
  b.state("acc", 'a', {1});
  b.state("rej", 'r', {1});
  b.initial("q0");
  AmpExpr c = AmpExpr::rational(Rat(3, 5)), s = AmpExpr::rational(Rat(4, 5));
  for (const std::string sym : {"<", "a", ">"}) {
    b.block({sym}, {"q0", "acc"}, {"q1", "q2"}, {{c, s.negated()}, {s, c}});
    b.block({sym}, {"q1", "q2"}, {"acc", "rej"}, {{c, s}, {s, c.negated()}});
    b.single({sym}, "rej", "q0");
  }
  MachineSpec m = b.finish();
  REQUIRE(validate_wellformed(m, 4).all_ok);
  // amplitude into accept: (3/5)^2 + (4/5)^2 = 1; into reject: 0
  RunTrace tr = step_simulate(m, "aa", 50);
  CHECK(tr.cum_acc == Scalar::exact(Rat(1)));
  CHECK(tr.cum_rej.is_zero());
  ResolventResult r = acceptance_resolvent(m, "aa");
  CHECK(r.p_acc == Scalar::exact(Rat(1)));
  CHECK(r.p_rej.is_zero());
  // the negative split part is genuinely populated here
  SplitEvolution se(m, "aa");
  bool has_minus = false;
  for (const auto& col : se.dminus_cols()) has_minus = has_minus || !col.empty();
  CHECK(has_minus);
  // and the paired series agrees term-for-term
  CHECK(acceptance_series_pair(se, 60) == tr.cum_acc);
}

TEST_CASE("p_acc + p_rej is one exactly when the machine halts completely") {
  // completely halting fixtures sum to one
  for (const char* id : {"coin", "trivial-accept", "leaky(9/25)"}) {
    ResolventResult r = acceptance_resolvent(zoo_entry(id).spec, "a");
    CHECK(r.p_acc.cr().re + r.p_rej.cr().re == 1);
  }
  // the spinner never halts: the halting mass is strictly below one
  ResolventResult sp = acceptance_resolvent(machine_spinner().spec, "a");
  CHECK(sp.p_acc.cr().re + sp.p_rej.cr().re < 1);
}

TEST_CASE("stochastic resolvent matches exact propagation") {
  MachineSpec l = machine_l_eps(Rat(1, 2)).spec;
  for (const std::string x : {"", "1", "10", "011"}) {
    ResolventResult r = acceptance_resolvent(l, x);
    RunTrace tr = step_simulate(l, x, 100);
    CHECK(r.p_acc == tr.cum_acc);
    CHECK(r.p_rej == tr.cum_rej);
  }
}

TEST_CASE("float resolvent stays within 1e-9 of the series") {
  MachineSpec leaky = machine_leaky(Rat(1, 2)).spec;  // sqrt(1/2): float backend
  ResolventResult r = acceptance_resolvent(leaky, "a");
  CHECK(r.p_acc.backend() == Backend::Float);
  CHECK(r.p_acc.cf().real() == doctest::Approx(1.0).epsilon(1e-9));
  RunTrace tr = step_simulate(leaky, "a", 2000);
  CHECK(r.p_acc.cf().real() == doctest::Approx(tr.cum_acc.cf().real()).epsilon(1e-7));
}

TEST_CASE("split evolution rejects unsuitable machines") {
  CHECK_THROWS_AS(SplitEvolution(machine_a3().spec, "a"), Error);          // two heads
  CHECK_THROWS_AS(SplitEvolution(machine_leaky(Rat(1, 2)).spec, "a"), Error);  // float
}
