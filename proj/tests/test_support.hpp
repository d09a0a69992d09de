#ifndef QFA_TEST_SUPPORT_HPP
#define QFA_TEST_SUPPORT_HPP

#include <random>

#include "qfa/builder.hpp"
#include "qfa/machine.hpp"
#include "qfa/matrix.hpp"

namespace qfa::test {

inline Rat random_rat(std::mt19937& rng, int num_range = 9, int den_range = 5) {
  std::uniform_int_distribution<int> num(-num_range, num_range), den(1, den_range);
  Rat r(num(rng), den(rng));
  r.canonicalize();
  return r;
}

inline Matrix random_exact_matrix(std::mt19937& rng, int n, bool complex_entries = false) {
  Matrix m(n, n, Backend::Exact);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      m.at(i, j) = complex_entries ? Scalar::exact(random_rat(rng), random_rat(rng))
                                   : Scalar::exact(random_rat(rng));
  return m;
}

// Leibniz permutation expansion; the independent determinant oracle.
inline Scalar leibniz_determinant(const Matrix& a) {
  int n = a.rows();
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  Scalar det = Scalar::zero(a.backend());
  do {
    int inv = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (perm[i] > perm[j]) ++inv;
    Scalar term = Scalar::one(a.backend());
    for (int i = 0; i < n; ++i) term = term * a.at(i, perm[i]);
    det = inv % 2 == 0 ? det + term : det - term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return det;
}

// Random rational-amplitude machine, unitary by construction: per scanned
// symbol a random permutation of the states decorated with random rational
// rotation blocks; per-state in-directions drawn at random. With
// trig_blocks the rotations use cos/sin of rational multiples of pi, which
// forces the float backend while keeping exact unitarity.
inline MachineSpec random_unitary_machine(std::mt19937& rng, int max_states = 4,
                                          bool want_halting = true, bool trig_blocks = false) {
  std::uniform_int_distribution<int> nq_pick(2, max_states), dir_pick(-1, 1);
  int nq = nq_pick(rng);
  PermBuilder b(Kind::QFA, 1, {"a"});
  std::vector<std::string> names;
  // state 0 is the non-halting start; the rest draw halting roles at random
  std::uniform_int_distribution<int> role(0, 3);
  int halting = 0;
  for (int q = 0; q < nq; ++q) {
    char cls = 'n';
    if (q > 0) {
      int r = role(rng);
      if (r == 1) cls = 'a';
      if (r == 2) cls = 'r';
    }
    if (cls != 'n') ++halting;
    names.push_back("q" + std::to_string(q));
    b.state(names.back(), cls, {dir_pick(rng)});
  }
  b.initial("q0");
  const std::pair<int, int> triples[] = {{3, 5}, {5, 13}, {8, 17}};
  for (const std::string sym : {std::string("<"), std::string("a"), std::string(">")}) {
    std::vector<int> perm(nq);
    for (int i = 0; i < nq; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<bool> in_block(nq, false);
    if (nq >= 2 && std::uniform_int_distribution<int>(0, 1)(rng)) {
      std::uniform_int_distribution<int> pick(0, nq - 1);
      int i = pick(rng), j = pick(rng);
      while (j == i) j = pick(rng);
      AmpExpr ce = AmpExpr::rational(Rat(1)), se = AmpExpr::rational(Rat(0));
      if (trig_blocks) {
        const int dens[] = {5, 7, 9, 11};
        Rat mult(1 + std::uniform_int_distribution<int>(0, 2)(rng),
                 dens[std::uniform_int_distribution<int>(0, 3)(rng)]);
        mult.canonicalize();
        ce = AmpExpr::cos_pi(mult);
        se = AmpExpr::sin_pi(mult);
      } else {
        auto [a, c] = triples[std::uniform_int_distribution<int>(0, 2)(rng)];
        Rat ca(a, c);
        Rat sa;
        rat_perfect_square(1 - ca * ca, &sa);
        ce = AmpExpr::rational(ca);
        se = AmpExpr::rational(sa);
      }
      b.block({sym}, {names[i], names[j]}, {names[perm[i]], names[perm[j]]},
              {{ce, se.negated()}, {se, ce}});
      in_block[i] = in_block[j] = true;
    }
    for (int i = 0; i < nq; ++i)
      if (!in_block[i]) b.single({sym}, names[i], names[perm[i]]);
  }
  MachineSpec m = b.finish();
  if (want_halting && halting == 0)
    return random_unitary_machine(rng, max_states, true, trig_blocks);
  return m;
}

}  // namespace qfa::test

#endif
