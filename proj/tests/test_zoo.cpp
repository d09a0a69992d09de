#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "qfa/classical.hpp"
#include "qfa/evolution.hpp"
#include "qfa/zoo.hpp"

using namespace qfa;

TEST_CASE("every zoo entry passes well-formedness validation") {
  for (const auto& id : zoo_ids()) {
    ZooEntry e = zoo_entry(id);
    ValidationReport rep = validate_wellformed(e.spec, 6);
    CHECK_MESSAGE(rep.all_ok, id);
  }
}

TEST_CASE("expected-behavior tables certify") {
  for (const auto& id : zoo_ids()) {
    ZooEntry e = zoo_entry(id);
    CHECK_NOTHROW(certify_zoo_entry(e));
  }
}

TEST_CASE("a3 membership matches the even powers of three within the linear bound") {
  MachineSpec a3 = machine_a3().spec;
  long long nq = static_cast<long long>(a3.states.size());
  for (int n = 3; n <= 100; ++n) {
    bool member = n == 9 || n == 81;
    // absolute halting within |Q|(n+2)+1 steps doubles as the linear-bound check
    RunTrace tr = step_simulate(a3, std::string(n, 'a'), nq * (n + 2) + 1);
    CHECK(tr.verdict == TraceVerdict::HaltedAll);
    if (member) {
      CHECK(tr.cum_acc == Scalar::exact(Rat(1)));
    } else {
      CHECK(tr.cum_rej == Scalar::exact(Rat(1)));
    }
  }
}

TEST_CASE("seeded sampler is demonstration output only but lands near the mass") {
  SampleResult s = pfa_sample(machine_l_eps(Rat(1, 2)).spec, "11", 4000, 100, 42);
  CHECK(s.accepted + s.rejected + s.unresolved == 4000);
  CHECK(std::abs(s.accepted / 4000.0 - 0.75) < 0.05);
}

TEST_CASE("a3 accepts a^1 under the completion that treats 1 = 3^0 as a member") {
  RunTrace tr = step_simulate(machine_a3().spec, "a", 100);
  CHECK(tr.cum_acc == Scalar::exact(Rat(1)));
}

TEST_CASE("l_eps acceptance equals the reversed binary value for all |x| <= 10") {
  MachineSpec l = machine_l_eps(Rat(1, 2)).spec;
  for (int n = 0; n <= 10; ++n) {
    for (long bits = 0; bits < (1L << n); ++bits) {
      std::string x(n, '0');
      Rat want(0);
      for (int i = 0; i < n; ++i) {
        if (bits & (1L << i)) x[i] = '1';
      }
      // p_acc(y) = 0.(y_n ... y_1) in binary: the last-read symbol is the
      // most significant bit
      for (int i = 0; i < n; ++i) {
        want /= 2;
        if (x[i] == '1') want += Rat(1, 2);
      }
      RunTrace tr = step_simulate(l, x, n + 4);
      CHECK(tr.cum_acc == Scalar::exact(want));
    }
  }
}

TEST_CASE("l_eps rejects eps below 1/2") {
  CHECK_THROWS_AS(machine_l_eps(Rat(1, 3)), Error);
}

TEST_CASE("l_eps column sums are exactly one") {
  ValidationReport rep = validate_wellformed(machine_l_eps(Rat(3, 4)).spec, 6);
  CHECK(rep.all_ok);
  CHECK(rep.max_deviation == 0.0);
}

TEST_CASE("rotation machine clears the 2/3 threshold with the stated margin") {
  double margin = std::cos(M_PI / 36) * std::cos(M_PI / 36) - 2.0 / 3.0 - 1e-6;
  ZooEntry rot = machine_rotation({9, 81}, 3);
  for (long n : {9L, 81L}) {
    RunTrace tr = step_simulate(rot.spec, std::string(n, 'a'), default_t_max(rot.spec, n));
    CHECK(tr.verdict == TraceVerdict::HaltedAll);
    CHECK(tr.cum_acc.cf().real() - 2.0 / 3.0 >= margin);
  }
}

TEST_CASE("rotation machine rejects non-members of the encoded set above 2/3") {
  ZooEntry rot = machine_rotation({81}, 3);
  RunTrace tr = step_simulate(rot.spec, std::string(9, 'a'), default_t_max(rot.spec, 9));
  CHECK(tr.cum_rej.cf().real() > 2.0 / 3.0);
  // and members still accept
  RunTrace tr81 = step_simulate(rot.spec, std::string(81, 'a'), default_t_max(rot.spec, 81));
  CHECK(tr81.cum_acc.cf().real() > 2.0 / 3.0);
}

TEST_CASE("rotation machine rejects strings outside A3 with probability 1") {
  ZooEntry rot = machine_rotation({9, 81}, 3);
  RunTrace tr = step_simulate(rot.spec, std::string(5, 'a'), default_t_max(rot.spec, 5));
  CHECK(tr.cum_rej.cf().real() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("rotation machine guards its parameters") {
  CHECK_THROWS_AS(machine_rotation({9}, 4), Error);
  CHECK_THROWS_AS(machine_rotation({10}, 3), Error);
}

TEST_CASE("coin machine complement accepts with 16/25") {
  MachineSpec coin = machine_coin().spec;
  MachineSpec comp = coin;
  std::swap(comp.accepting, comp.rejecting);
  comp.reindex();
  RunTrace tr = step_simulate(comp, "a", 50);
  CHECK(tr.cum_acc == Scalar::exact(Rat(16, 25)));
}
