#ifndef QFA_CLASSICAL_HPP
#define QFA_CLASSICAL_HPP

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "qfa/evolution.hpp"
#include "qfa/machine.hpp"
#include "qfa/resolvent.hpp"

namespace qfa {

struct PfaRunResult {
  Rat p_acc = Rat(0), p_rej = Rat(0), residual = Rat(1);
  long long steps = 0;
  bool halted_all = false;
  std::map<long long, Rat> absorbed;  // halting configuration -> mass
  ConfigSpace space;
};

/// Exact distribution propagation of a stochastic machine.
PfaRunResult pfa_run_exact(const MachineSpec& spec, const std::string& x, long long t_max);
/// Same, from an arbitrary start configuration.
PfaRunResult pfa_run_exact_from(const MachineSpec& spec, const std::string& x, long long t_max,
                                int state, const std::vector<int>& positions);

struct SampleResult {
  long long shots = 0, accepted = 0, rejected = 0, unresolved = 0;
};

/// Seeded Monte-Carlo runs, demonstration output only; every verified
/// identity uses exact propagation instead.
SampleResult pfa_sample(const MachineSpec& spec, const std::string& x, long long shots,
                        long long t_max, unsigned seed);

/// Two-head deterministic counter: enters q_done exactly at step
/// 4 nq^2 (n+2)^2 via a boustrophedon sweep with 4 nq^2 - 1 idles per visit.
MachineSpec build_counter(int nq);
long long counter_done_step(int nq, int n);
extern const char* kCounterDoneState;

/// ceil(log2(n+2)); the per-coordinate coin-flip count of the generator.
int equiprob_rounds(int n);
/// Probability of one generated configuration: (1/(4 nq^2)) 2^(-2 rounds).
Rat gen_probability(int nq, int n);

/// Four-head machine generating a uniform (state-pair/sign-pair, position
/// pair) sample: h-part by a single uniform branch, each position by
/// ceil(log2(n+2)) binary-doubling coin flips, overflows rejecting.
/// Generated branches end in state "done#<h>" with heads 3-4 back at cell 0.
MachineSpec build_equiprob(int nq);
std::string equiprob_done_state(int h);

/// Seven-head deterministic comparator of two CONF_* configurations whose
/// position pairs sit on heads 1-2 and 3-4. The h-part comparison happens in
/// state space: start in start_gt / start_eq / start_lt according to the
/// h-block comparison. Ends in q1 (conf1 >= conf2) or q2 (conf1 < conf2)
/// with heads 5-7 back at cell 0 and heads 1-4 restored.
MachineSpec build_comparator();

/// Signed clow-sequence walk over a real matrix given by a row oracle: the
/// exact staged propagation of the clow-walk pfa with the generation factor
/// divided out. Entries must follow the I-minus-nonnegative sign pattern
/// except where `special` marks a +1 replacement entry. Returns det(M).
using RowOracle = std::function<std::vector<std::pair<long long, Rat>>(long long)>;
Rat walk_determinant(long long dim, const RowOracle& row,
                     const std::function<bool(long long, long long)>& special);

/// The generators built from a rational-amplitude one-head qfa. Machines are
/// evaluated by exact stage-level propagation; heads = 8 bookkeeping heads
/// (clow head, current vertex, candidate, counter) plus the comparator's 3
/// working heads shared with the generation scratch.
struct DetGenerator {
  int nq = 0, n = 0;
  long long conf_dim = 0;
  int heads = 11;
  Rat f1;
  Rat selection = Rat(1);  // probability burned before the walk

  Rat gap;    // p_acc - p_rej of the walk machine
  Rat p_acc() const { return (1 + gap) / 2; }
  Rat p_rej() const { return (1 - gap) / 2; }
};

/// N1: gap = f1 * det(I - Dt x Dt).
DetGenerator build_det_generator(const SplitEvolution& split);
/// Minor variant: the walk over T with column j-hat replaced by e_{i0}
/// (the Cramer numerator; carries the cofactor parity).
DetGenerator build_det_generator_minor(const SplitEvolution& split, long long j_hat, int chi);

struct GapPair {
  int nq = 0, n = 0;
  long long conf_dim = 0;
  int heads = 11;
  Rat f1, f2;
  Rat gap_n1;        // f1-scaled determinant walk
  Rat gap_n1_prime;  // f2-rescaled variant
  Rat gap_n2;        // summed Cramer-numerator walk
  Rat det_t;         // independent sparse elimination of det(I - Dt x Dt)

  std::string to_json() const;
};

GapPair assemble_gap_pair(const MachineSpec& qfa, const std::string& x);

struct CombinedCutpoint {
  Rat p_acc, p_rej;
};

/// Cut-point combiner: 1/4 N1'(flipped) + 1/2 N2 + 1/8 each to accept/reject;
/// p_acc - p_rej > 0 iff the source machine accepts above 1/2.
CombinedCutpoint cutpoint_combine(const GapPair& pair);

}  // namespace qfa

#endif
