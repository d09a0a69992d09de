#ifndef QFA_HALTING_HPP
#define QFA_HALTING_HPP

#include <string>
#include <vector>

#include "qfa/evolution.hpp"
#include "qfa/machine.hpp"

namespace qfa {

struct HaltingReport {
  std::vector<long long> chain_dims;  // dim(W_0), dim(W_1), ...
  long long d = 0;                    // stabilization index
  bool halts_absolutely = false;
  long long worst_case_steps = -1;  // d + 1 when absolute
  long long N = 0;                  // configuration-space dimension
  bool bound_check = false;         // worst_case_steps <= |Q|(n+2)+1
  long long linear_bound = 0;

  std::string to_json() const;
};

/// Kernel chain of (U Pi_non)^(i+1); exact when the machine is, float with
/// rank tolerance 1e-9 otherwise.
HaltingReport dimension_chain(const MachineSpec& spec, const std::string& x);

struct BoundViolation {
  int n = 0;
  std::string input;
  std::string what;
};

struct LinearBoundReport {
  bool ok = true;
  int inputs_checked = 0;
  std::vector<BoundViolation> violations;
};

/// Cross-checks dimension_chain against step_simulate on every sampled input
/// of each length: absolute halters must have zero residual by the reported
/// worst-case step, which must respect the |Q|(n+2)+1 bound.
LinearBoundReport verify_linear_bound(const MachineSpec& spec, const std::vector<int>& lengths);

struct SpectralEstimate {
  long long N = 0;
  long long dim_w_max = 0;
  long long d = 0;
  long long dim_undetermined = 0;
  long long dim_stationary = 0;
  bool a_invertible = true;   // Null(A) = {0}
  bool all_mass_halts = false;  // W_max is everything
  bool stationary_only = false; // no contracting part
  double lambda_max = 0;        // over the undetermined block
  double eps_prime = 0;
  double k_bound = 0;           // steps for halting mass within eps'

  std::string to_json() const;
};

/// Spectral split of the non-halting dynamics restricted to the complement of
/// W_max; float backend, eps in [0, 1/2].
SpectralEstimate spectral_runtime_estimate(const MachineSpec& spec, const std::string& x,
                                           double eps);

/// Exhaustively verifies W_{i+1} = span{K_{i+1}, W_i} with
/// K_{i+1} = U^{-1}(W_i) Π W_perp on an exact machine (dense; small inputs).
/// Also checks dim(W_0) = number of halting configurations. Throws on failure.
void verify_w_recursion(const MachineSpec& spec, const std::string& x);

}  // namespace qfa

#endif
