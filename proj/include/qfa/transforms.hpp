#ifndef QFA_TRANSFORMS_HPP
#define QFA_TRANSFORMS_HPP

#include <map>
#include <string>
#include <vector>

#include "qfa/machine.hpp"

namespace qfa {

enum class Relation {
  SwapAccRej,      // p_acc <-> p_rej
  SameProbs,       // identical p_acc and p_rej
  HalfAcc,         // p_acc' = p_acc / 2, p_rej' = p_rej + p_acc / 2
  Damped,          // p_acc' = (1-a) p_acc, p_rej' = a + (1-a) p_rej
  AffineAcc,       // p_acc' = a p_f + b p_g
  ProductAcc,      // p_acc' = p_f * p_g
  SquareAcc,       // p_acc' = p_acc^2 + p_rej^2, p_rej' = 2 p_acc p_rej
  OneWaySplit,     // p_acc' = p_acc + m/2 (m = non-halting mass)
  OneWayReject     // p_rej' = p_rej + m
};

struct TransformCert {
  std::string name;
  std::vector<std::string> inputs;  // descriptive ids
  Relation relation;
  Rat alpha = Rat(0), beta = Rat(0);
  int states_in = 0, states_out = 0;
  std::map<std::string, std::string> renames;
  std::string notes;
};

struct TransformResult {
  MachineSpec spec;
  TransformCert cert;
};

/// Machine-to-machine constructions. Each output passes well-formedness validation
/// and satisfies the certified probability relation on every input.
TransformResult complement(const MachineSpec& spec);
TransformResult complex_to_real(const MachineSpec& spec);
TransformResult half_split(const MachineSpec& spec);
TransformResult damp(const MachineSpec& spec, const Rat& alpha);
TransformResult affine_combine(const MachineSpec& f, const MachineSpec& g, const Rat& alpha,
                               const Rat& beta);
TransformResult product_machine(const MachineSpec& f, const MachineSpec& g);
TransformResult square_pair(const MachineSpec& spec);
TransformResult one_way_embed(const MachineSpec& spec, bool all_to_reject);

/// Simulates inputs and output on the given strings and checks the certified
/// relation exactly (exact backends) or within 1e-9. Throws on mismatch.
void check_transform_relation(const TransformResult& result,
                              const std::vector<const MachineSpec*>& inputs,
                              const std::vector<std::string>& test_inputs,
                              long long t_max = -1);

/// Seeded corpus of >= `count` strings over the machine's alphabet.
std::vector<std::string> transform_test_corpus(const MachineSpec& spec, int count,
                                               unsigned seed = 0xc0ffee);

}  // namespace qfa

#endif
