#ifndef QFA_EVOLUTION_HPP
#define QFA_EVOLUTION_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qfa/machine.hpp"
#include "qfa/matrix.hpp"

namespace qfa {

/// Indexed basis of (state, head-position tuple) configurations for one input.
struct ConfigSpace {
  int nstates = 0;
  int heads = 1;
  int n = 0;  // input length; tape cells = n + 2

  int tape() const { return n + 2; }
  long long dim() const {
    long long d = nstates;
    for (int h = 0; h < heads; ++h) d *= tape();
    return d;
  }
  long long index(int state, const std::vector<int>& pos) const {
    long long idx = 0;
    for (int h = heads - 1; h >= 0; --h) idx = idx * tape() + pos[h];
    return idx * nstates + state;
  }
  void decode(long long idx, int* state, std::vector<int>* pos) const {
    *state = static_cast<int>(idx % nstates);
    idx /= nstates;
    pos->assign(heads, 0);
    for (int h = 0; h < heads; ++h) {
      (*pos)[h] = static_cast<int>(idx % tape());
      idx /= tape();
    }
  }
};

using SparseVec = std::map<long long, Scalar>;

/// Matrix-free application of the time-evolution operator for a fixed input.
class EvolutionOp {
 public:
  EvolutionOp(const MachineSpec& spec, const std::string& x);

  const ConfigSpace& space() const { return cs_; }
  Backend backend() const { return backend_; }
  long long initial_config() const;
  int tape_symbol(int cell) const { return tape_[cell]; }

  // state classification
  bool is_acc(long long cfg) const { return spec_->accepting.count(state_of(cfg)) > 0; }
  bool is_rej(long long cfg) const { return spec_->rejecting.count(state_of(cfg)) > 0; }
  bool is_halting(long long cfg) const { return spec_->is_halting(state_of(cfg)); }
  int state_of(long long cfg) const { return static_cast<int>(cfg % cs_.nstates); }

  /// Column of U at the given configuration.
  std::vector<std::pair<long long, Scalar>> column(long long cfg) const;
  /// v -> U v over sparse vectors.
  SparseVec apply(const SparseVec& v) const;

  const MachineSpec& spec() const { return *spec_; }

 private:
  const MachineSpec* spec_;
  ConfigSpace cs_;
  std::vector<int> tape_;  // symbol id per cell
  Backend backend_;
  const std::vector<Scalar>* weight_cache_ = nullptr;
};

struct DenseEvolution {
  Matrix U;
  Matrix P_acc, P_rej, P_non;  // diagonal 0/1 projections
  ConfigSpace cs;
};

/// Explicit matrices; guarded against oversized configuration spaces.
DenseEvolution build_evolution(const MachineSpec& spec, const std::string& x,
                               long long max_dim = 4096);

struct StepRecord {
  long long t = 0;
  double p_acc = 0, p_rej = 0, residual = 0;
};

enum class TraceVerdict { HaltedAll, Truncated };

struct RunTrace {
  Backend backend = Backend::Exact;
  std::vector<StepRecord> steps;
  Scalar cum_acc, cum_rej, residual;
  long long steps_run = 0;
  long long t_max = 0;
  TraceVerdict verdict = TraceVerdict::Truncated;

  double acc_low() const { return cum_acc.cf().real(); }
  double acc_high() const { return cum_acc.cf().real() + residual.cf().real(); }
  double rej_low() const { return cum_rej.cf().real(); }
  double rej_high() const { return cum_rej.cf().real() + residual.cf().real(); }

  std::string to_json() const;
};

long long default_t_max(const MachineSpec& spec, int n);

/// Step-wise simulation with projective measurement after every step.
RunTrace step_simulate(const MachineSpec& spec, const std::string& x, long long t_max,
                       bool keep_steps = false);

enum class Criterion { Bounded, Unbounded, ExactCutpoint, ZeroCutpoint, ErrorFree, OneSided };

struct CriterionSpec {
  Criterion criterion = Criterion::Unbounded;
  Rat parameter = Rat(0);  // epsilon or eta
  static CriterionSpec parse(const std::string& text);  // e.g. "bounded(1/3)"
  std::string str() const;
};

enum class Verdict { Accept, Reject, Undetermined };

struct ClassifyResult {
  Verdict verdict = Verdict::Undetermined;
  RunTrace trace;
};

ClassifyResult classify(const MachineSpec& spec, const std::string& x,
                        const CriterionSpec& criterion, long long t_max);

const char* verdict_name(Verdict v);

}  // namespace qfa

#endif
