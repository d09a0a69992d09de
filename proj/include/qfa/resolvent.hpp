#ifndef QFA_RESOLVENT_HPP
#define QFA_RESOLVENT_HPP

#include <string>
#include <vector>

#include "qfa/machine.hpp"
#include "qfa/matrix.hpp"

namespace qfa {

struct SingularResolvent : Error {
  SingularResolvent() : Error("SINGULAR_RESOLVENT: det(I - Dt (x) Dt) = 0") {}
};

/// Index set Q^2 x [0,n+1]^2 x {+1,-1}^2 with the linear order: the
/// (state pair, sign pair) block h = (q1, q2, s1, s2) lexicographically
/// (sign 0 encodes +1 and precedes 1 = -1), then first position, then second.
struct ConfStar {
  int nq = 0;
  int tape = 0;  // n + 2

  long long dim() const { return 4LL * nq * nq * tape * tape; }

  struct Conf {
    int q1, q2, s1, s2, l1, l2;
    bool operator==(const Conf&) const = default;
  };

  long long index(const Conf& c) const {
    long long h = ((static_cast<long long>(c.q1) * nq + c.q2) * 2 + c.s1) * 2 + c.s2;
    return (h * tape + c.l1) * tape + c.l2;
  }
  Conf decode(long long idx) const {
    Conf c;
    c.l2 = static_cast<int>(idx % tape);
    idx /= tape;
    c.l1 = static_cast<int>(idx % tape);
    idx /= tape;
    c.s2 = static_cast<int>(idx % 2);
    idx /= 2;
    c.s1 = static_cast<int>(idx % 2);
    idx /= 2;
    c.q2 = static_cast<int>(idx % nq);
    c.q1 = static_cast<int>(idx / nq);
    return c;
  }
};

/// Case analysis of the configuration order; coincides with ConfStar index order.
bool conf_less(const ConfStar::Conf& a, const ConfStar::Conf& b);

/// Enumerates all of CONF_* in order.
std::vector<ConfStar::Conf> conf_star_order(const MachineSpec& spec, int n);

/// Nonnegative splitting of D = U Pi_non for a real-amplitude one-head
/// machine, with the doubled sign coordinate and the paired operator
/// Pt = Dt (x) Dt on CONF_*.
class SplitEvolution {
 public:
  SplitEvolution(const MachineSpec& spec, const std::string& x);

  const ConfStar& conf() const { return cs_; }
  int input_length() const { return n_; }
  const MachineSpec& spec() const { return *spec_; }
  bool exact() const { return exact_; }

  // single-copy sparse parts; configuration index = q * tape + l
  int sc_index(int q, int l) const { return q * cs_.tape + l; }
  const std::vector<std::vector<std::pair<int, Rat>>>& dplus_cols() const { return dplus_; }
  const std::vector<std::vector<std::pair<int, Rat>>>& dminus_cols() const { return dminus_; }

  /// Column of Pt at a CONF_* index: pairs (row, weight), weights >= 0.
  std::vector<std::pair<long long, Rat>> pt_column(long long col) const;
  /// Row of Pt at a CONF_* index.
  std::vector<std::pair<long long, Rat>> pt_row(long long row) const;
  /// Entry of T = I - Pt.
  Rat t_entry(long long row, long long col) const;
  /// Nonzero off-diagonal columns of row r of T (all equal to -Pt[r,c]).
  std::vector<std::pair<long long, Rat>> t_row_offdiag(long long row) const;

  long long i0() const;  // ((q0,q0),(0,0),(+1,+1))
  /// Halting target configurations ((q,q),(l,l),(s1,s2)) with the sign
  /// chi = (-1)^[s1 != s2] attached.
  std::vector<std::pair<long long, int>> targets(bool accepting) const;

  std::vector<long long> ini_vectors() const;   // y_ini per sign pair
  std::vector<std::pair<long long, int>> acc_vectors() const { return targets(true); }

 private:
  const MachineSpec* spec_;
  ConfStar cs_;
  int n_;
  bool exact_;
  std::vector<std::vector<std::pair<int, Rat>>> dplus_, dminus_;  // columns
  std::vector<std::vector<std::pair<int, Rat>>> rplus_, rminus_;  // rows
};

SplitEvolution split_positive_negative(const MachineSpec& spec, const std::string& x);

struct ResolventResult {
  Scalar p_acc, p_rej;
  bool fallback = false;  // stationary mass projected out
};

/// Acceptance/rejection probabilities via one resolvent solve. Quantum
/// machines use the paired operator (I - Dt (x) Dt) x = y_ini with the
/// signed halting-target sums, exactly on the exact backend and by dense
/// elimination within 1e-9 on floats; stochastic machines solve the
/// single-space absorption system (masses are linear, no pairing needed).
ResolventResult acceptance_resolvent(const MachineSpec& spec, const std::string& x);

/// det(I - Dt (x) Dt), exact machines only.
Rat resolvent_determinant(const SplitEvolution& split);

/// Truncated series sum of the paired-operator acceptance formula
/// (K applications of Pt); converges to p_acc on halting machines.
Scalar acceptance_series_pair(const SplitEvolution& split, int terms, bool accepting = true);

/// Division-free determinant by clow-sequence enumeration (heads ascending,
/// memoized walks); matrices above dimension 7 are refused.
Scalar clow_determinant(const Matrix& t);
constexpr int kClowDimensionCap = 7;

}  // namespace qfa

#endif
