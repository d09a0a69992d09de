#ifndef QFA_MACHINE_HPP
#define QFA_MACHINE_HPP

#include <map>
#include <set>
#include <string>
#include <vector>

#include "qfa/expr.hpp"
#include "qfa/scalar.hpp"

namespace qfa {

enum class Kind { QFA, PFA };
enum class HeadMotion { TwoWay, OneWay };

// Symbol ids: 0 = left endmarker, 1 = right endmarker, 2+i = alphabet[i].
constexpr int kLeftEnd = 0;
constexpr int kRightEnd = 1;
constexpr int kFirstLetter = 2;

struct MachineParseError : Error {
  explicit MachineParseError(const std::string& msg) : Error("machine file: " + msg) {}
};

struct Transition {
  int from = 0;
  std::vector<int> scan;  // symbol ids, one per head
  int to = 0;
  std::vector<int> move;  // each in {-1,0,+1}, one per head
  AmpExpr weight;
};

struct MachineSpec {
  Kind kind = Kind::QFA;
  int heads = 1;
  std::vector<std::string> states;
  int initial = 0;
  std::set<int> accepting, rejecting;
  std::vector<std::string> alphabet;  // letters, excluding endmarkers
  HeadMotion motion = HeadMotion::TwoWay;
  std::vector<Transition> transitions;

  int num_symbols() const { return kFirstLetter + static_cast<int>(alphabet.size()); }
  std::string symbol_name(int sym) const;
  int symbol_id(const std::string& name) const;  // -1 when unknown
  int state_id(const std::string& name) const;   // -1 when unknown

  bool is_halting(int state) const {
    return accepting.count(state) || rejecting.count(state);
  }
  bool exact_representable() const;
  Backend backend() const {
    return exact_representable() ? Backend::Exact : Backend::Float;
  }

  /// Transition indices grouped by (from state, scanned tuple).
  const std::vector<int>& rules(int state, const std::vector<int>& scan) const;
  /// Evaluated transition weights in the machine's backend, cached.
  const std::vector<Scalar>& evaluated_weights() const;
  void reindex();  // rebuild the caches after edits

 private:
  mutable std::map<std::pair<int, std::vector<int>>, std::vector<int>> index_;
  mutable bool indexed_ = false;
  mutable std::vector<Scalar> weights_;
  mutable bool weights_cached_ = false;
  mutable int exact_cache_ = -1;
};

MachineSpec parse_machine(const std::string& text);
std::string serialize_machine(const MachineSpec& spec);

struct LengthCheck {
  int n = 0;
  bool ok = true;
  double max_deviation = 0;       // 0 for clean exact machines
  std::pair<int, int> worst_columns{-1, -1};
  int strings_checked = 0;
  bool sampled = false;  // true when only a subset of strings was checked
};

struct ValidationReport {
  bool is_unitary = false;    // meaningful for QFA
  bool is_stochastic = false; // meaningful for PFA
  bool all_ok = true;
  double max_deviation = 0;
  std::vector<LengthCheck> lengths;
};

/// Checks unitarity (QFA) / stochasticity (PFA) of the evolution matrix for
/// every input length n <= n_max, sampling strings when the alphabet makes
/// exhaustive checking infeasible.
ValidationReport validate_wellformed(const MachineSpec& spec, int n_max);

/// The inputs validate_wellformed would use for one length.
std::vector<std::string> validation_strings(const MachineSpec& spec, int n, int cap = 256,
                                            int samples = 64, unsigned seed = 0x5eed);

}  // namespace qfa

#endif
