#ifndef QFA_ZOO_HPP
#define QFA_ZOO_HPP

#include <string>
#include <vector>

#include "qfa/machine.hpp"

namespace qfa {

struct ZooExpectedRow {
  std::string input;
  std::string behavior;  // "acc=1", "rej=1", "acc=9/25", "acc>=2/3", "rej>=2/3"
};

struct ZooEntry {
  std::string id;
  MachineSpec spec;
  std::string provenance;
  std::vector<ZooExpectedRow> expected;
};

/// 2-head reversible acceptor of { a^n : n = 3^(2m) }.
ZooEntry machine_a3();

/// 5-state one-way pfa with p_acc(x reversed) = 0.x / (2 eps).
ZooEntry machine_l_eps(const Rat& eps);

/// 2-head float machine: a3 front-end, then a rotation loop; accepts members
/// of the encoded subset of {9, 81, 6561} with probability sin^2(n theta + shift).
ZooEntry machine_rotation(const std::vector<long>& members, int m_max);

/// 3-state rational-amplitude fixture halting in one step with p_acc = 9/25.
ZooEntry machine_coin();

/// 3-state deterministic fixtures halting in one step.
ZooEntry machine_trivial_accept();
ZooEntry machine_trivial_reject();

/// Single non-halting state cycling forever (never halts).
ZooEntry machine_spinner();

/// Two-state machine leaking `leak` of the remaining mass to an accepting
/// state every step; completely but not absolutely halting. Requires
/// sqrt(leak), sqrt(1-leak) in the amplitude grammar.
ZooEntry machine_leaky(const Rat& leak);

std::vector<std::string> zoo_ids();
ZooEntry zoo_entry(const std::string& id);

/// Runs the expected-behavior table; throws Error on any mismatch.
void certify_zoo_entry(const ZooEntry& entry);

}  // namespace qfa

#endif
