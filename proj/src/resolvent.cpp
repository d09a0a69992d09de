#include "qfa/resolvent.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>

#include <Eigen/Dense>

#include "qfa/evolution.hpp"

namespace qfa {

bool conf_less(const ConfStar::Conf& a, const ConfStar::Conf& b) {
  // h-block first (state pair, then sign pair), then position 1, then position 2
  auto ha = std::make_tuple(a.q1, a.q2, a.s1, a.s2);
  auto hb = std::make_tuple(b.q1, b.q2, b.s1, b.s2);
  if (ha != hb) return ha < hb;
  if (a.l1 != b.l1) return a.l1 < b.l1;
  return a.l2 < b.l2;
}

std::vector<ConfStar::Conf> conf_star_order(const MachineSpec& spec, int n) {
  ConfStar cs{static_cast<int>(spec.states.size()), n + 2};
  std::vector<ConfStar::Conf> out;
  out.reserve(cs.dim());
  for (long long i = 0; i < cs.dim(); ++i) out.push_back(cs.decode(i));
  return out;
}

SplitEvolution::SplitEvolution(const MachineSpec& spec, const std::string& x) : spec_(&spec) {
  if (spec.heads != 1) throw Error("split evolution defined for one-head machines");
  n_ = static_cast<int>(x.size());
  cs_.nq = static_cast<int>(spec.states.size());
  cs_.tape = n_ + 2;
  exact_ = spec.exact_representable();
  if (!exact_) throw Error("split evolution requires exactly representable amplitudes");
  if (spec.is_halting(spec.initial))
    throw Error("split evolution requires a non-halting initial state");

  EvolutionOp op(spec, x);
  int sc_dim = cs_.nq * cs_.tape;
  dplus_.assign(sc_dim, {});
  dminus_.assign(sc_dim, {});
  rplus_.assign(sc_dim, {});
  rminus_.assign(sc_dim, {});
  for (int q = 0; q < cs_.nq; ++q) {
    if (spec.is_halting(q)) continue;  // D = U Pi_non kills halting columns
    for (int l = 0; l < cs_.tape; ++l) {
      std::vector<int> pos{l};
      long long cfg = op.space().index(q, pos);
      for (const auto& [tgt, w] : op.column(cfg)) {
        const CRat& v = w.cr();
        if (v.im != 0) throw Error("complex amplitudes present; apply complex_to_real first");
        if (v.re == 0) continue;
        int p, m;
        {
          int st;
          std::vector<int> tp;
          op.space().decode(tgt, &st, &tp);
          p = st;
          m = tp[0];
        }
        int col = sc_index(q, l), row = sc_index(p, m);
        if (v.re > 0) {
          dplus_[col].emplace_back(row, v.re);
          rplus_[row].emplace_back(col, v.re);
        } else {
          dminus_[col].emplace_back(row, -v.re);
          rminus_[row].emplace_back(col, -v.re);
        }
      }
    }
  }
}

namespace {

// Dtilde column at (q, l, a): entries ((p, m, b), w).
// b = a on the positive part, flipped on the negative part.
struct DtEntry {
  int p, m, b;
  const Rat* w;
};

template <typename F>
void dt_column(const SplitEvolution& se, const ConfStar& cs, int q, int l, int a, F&& f) {
  int col = q * cs.tape + l;
  for (const auto& [row, w] : se.dplus_cols()[col]) f(row / cs.tape, row % cs.tape, a, w);
  for (const auto& [row, w] : se.dminus_cols()[col]) f(row / cs.tape, row % cs.tape, 1 - a, w);
}

}  // namespace

std::vector<std::pair<long long, Rat>> SplitEvolution::pt_column(long long col) const {
  ConfStar::Conf c = cs_.decode(col);
  std::vector<std::pair<long long, Rat>> out;
  std::vector<std::tuple<int, int, int, Rat>> first, second;
  dt_column(*this, cs_, c.q1, c.l1, c.s1,
            [&](int p, int m, int b, const Rat& w) { first.emplace_back(p, m, b, w); });
  dt_column(*this, cs_, c.q2, c.l2, c.s2,
            [&](int p, int m, int b, const Rat& w) { second.emplace_back(p, m, b, w); });
  for (const auto& [p1, m1, b1, w1] : first)
    for (const auto& [p2, m2, b2, w2] : second)
      out.emplace_back(cs_.index({p1, p2, b1, b2, m1, m2}), w1 * w2);
  return out;
}

std::vector<std::pair<long long, Rat>> SplitEvolution::pt_row(long long row) const {
  ConfStar::Conf r = cs_.decode(row);
  std::vector<std::pair<long long, Rat>> out;
  auto one = [&](int p, int m, int b) {
    std::vector<std::tuple<int, int, int, Rat>> v;
    int ri = p * cs_.tape + m;
    for (const auto& [col, w] : rplus_[ri]) v.emplace_back(col / cs_.tape, col % cs_.tape, b, w);
    for (const auto& [col, w] : rminus_[ri])
      v.emplace_back(col / cs_.tape, col % cs_.tape, 1 - b, w);
    return v;
  };
  auto first = one(r.q1, r.l1, r.s1), second = one(r.q2, r.l2, r.s2);
  for (const auto& [q1, l1, a1, w1] : first)
    for (const auto& [q2, l2, a2, w2] : second)
      out.emplace_back(cs_.index({q1, q2, a1, a2, l1, l2}), w1 * w2);
  return out;
}

Rat SplitEvolution::t_entry(long long row, long long col) const {
  Rat v = row == col ? Rat(1) : Rat(0);
  for (const auto& [r, w] : pt_column(col))
    if (r == row) v -= w;
  return v;
}

std::vector<std::pair<long long, Rat>> SplitEvolution::t_row_offdiag(long long row) const {
  std::vector<std::pair<long long, Rat>> out;
  for (const auto& [c, w] : pt_row(row)) {
    if (c == row) continue;
    out.emplace_back(c, -w);
  }
  return out;
}

long long SplitEvolution::i0() const {
  return cs_.index({spec_->initial, spec_->initial, 0, 0, 0, 0});
}

std::vector<std::pair<long long, int>> SplitEvolution::targets(bool accepting) const {
  std::vector<std::pair<long long, int>> out;
  const auto& set = accepting ? spec_->accepting : spec_->rejecting;
  for (int q : set)
    for (int l = 0; l < cs_.tape; ++l)
      for (int s1 = 0; s1 < 2; ++s1)
        for (int s2 = 0; s2 < 2; ++s2)
          out.emplace_back(cs_.index({q, q, s1, s2, l, l}), s1 == s2 ? 1 : -1);
  return out;
}

std::vector<long long> SplitEvolution::ini_vectors() const {
  std::vector<long long> out;
  for (int s1 = 0; s1 < 2; ++s1)
    for (int s2 = 0; s2 < 2; ++s2)
      out.push_back(cs_.index({spec_->initial, spec_->initial, s1, s2, 0, 0}));
  return out;
}

SplitEvolution split_positive_negative(const MachineSpec& spec, const std::string& x) {
  return SplitEvolution(spec, x);
}

namespace {

// Sparse exact Gaussian elimination on rows of T = I - Pt.
// Solves T x = e_{i0}; when T is singular the inconsistent residue (the
// stationary mass) is dropped and `fallback` is set.
struct SparseSolve {
  std::vector<Rat> x;
  bool fallback = false;
  Rat det = Rat(1);
  bool det_valid = true;
};

SparseSolve solve_rows(const SplitEvolution& se, long long rhs_index, bool want_det) {
  long long dim = se.conf().dim();
  // rows as ordered maps col -> value, plus rhs
  std::vector<std::map<long long, Rat>> rows(dim);
  std::vector<Rat> rhs(dim, Rat(0));
  rhs[rhs_index] = 1;
  for (long long r = 0; r < dim; ++r) {
    rows[r][r] = Rat(1);
    for (const auto& [c, w] : se.t_row_offdiag(r)) {
      if (w == 0) continue;
      rows[r][c] += w;
      if (rows[r][c] == 0) rows[r].erase(c);
    }
    Rat diag = se.t_entry(r, r);
    if (diag != 1) {
      rows[r][r] = diag;
      if (diag == 0) rows[r].erase(r);
    }
  }
  SparseSolve out;
  std::vector<long long> pivot_row_of_col(dim, -1);
  std::vector<bool> row_used(dim, false);
  // forward elimination: process columns in order, choose the sparsest row
  for (long long c = 0; c < dim; ++c) {
    long long best = -1;
    size_t best_sz = SIZE_MAX;
    for (long long r = 0; r < dim; ++r) {
      if (row_used[r]) continue;
      auto it = rows[r].find(c);
      if (it == rows[r].end() || it->second == 0) continue;
      if (rows[r].size() < best_sz) {
        best_sz = rows[r].size();
        best = r;
      }
    }
    if (best < 0) {
      out.fallback = true;
      out.det_valid = false;
      continue;  // singular direction; leave x[c] free (zero)
    }
    row_used[best] = true;
    pivot_row_of_col[c] = best;
    Rat piv = rows[best][c];
    if (want_det) out.det *= piv;
    for (long long r = 0; r < dim; ++r) {
      if (r == best || row_used[r]) continue;
      auto it = rows[r].find(c);
      if (it == rows[r].end() || it->second == 0) continue;
      Rat f = it->second / piv;
      for (const auto& [cc, w] : rows[best]) {
        auto ri = rows[r].find(cc);
        if (ri == rows[r].end()) {
          Rat nv = -(f * w);
          if (nv != 0) rows[r].emplace(cc, std::move(nv));
        } else {
          ri->second -= f * w;
          if (ri->second == 0) rows[r].erase(ri);
        }
      }
      rhs[r] -= f * rhs[best];
    }
  }
  // sign of the determinant: permutation parity of pivot placement
  if (want_det && out.det_valid) {
    std::vector<long long> perm(dim);
    for (long long c = 0; c < dim; ++c) perm[c] = pivot_row_of_col[c];
    std::vector<bool> seen(dim, false);
    int sign = 1;
    for (long long i = 0; i < dim; ++i) {
      if (seen[i]) continue;
      long long j = i, len = 0;
      while (!seen[j]) {
        seen[j] = true;
        j = perm[j];
        ++len;
      }
      if (len % 2 == 0) sign = -sign;
    }
    if (sign < 0) out.det = -out.det;
  }
  // inconsistent rows => stationary residue; drop it
  for (long long r = 0; r < dim; ++r) {
    if (!row_used[r] && rhs[r] != 0) out.fallback = true;
  }
  // back substitution in reverse column order
  out.x.assign(dim, Rat(0));
  for (long long c = dim - 1; c >= 0; --c) {
    long long pr = pivot_row_of_col[c];
    if (pr < 0) continue;
    Rat acc = rhs[pr];
    for (const auto& [cc, w] : rows[pr]) {
      if (cc == c) continue;
      if (out.x[cc] != 0) acc -= w * out.x[cc];
    }
    out.x[c] = acc / rows[pr][c];
  }
  return out;
}

}  // namespace

namespace {

// Stochastic machines: p_acc = 1^T Pi_acc U (I - Pi_non U)^{-1} e_init.
ResolventResult pfa_resolvent(const MachineSpec& spec, const std::string& x) {
  EvolutionOp op(spec, x);
  long long dim = op.space().dim();
  // rows of (I - Pi_non U) as sparse maps
  std::vector<std::map<long long, Rat>> rows(dim);
  std::vector<Rat> rhs(dim, Rat(0));
  rhs[op.initial_config()] = 1;
  for (long long c = 0; c < dim; ++c) {
    rows[c][c] += Rat(1);
    for (const auto& [r, w] : op.column(c)) {
      if (op.is_halting(r)) continue;
      rows[r][c] -= w.cr().re;
      if (rows[r][c] == 0) rows[r].erase(c);
    }
  }
  ResolventResult res;
  // forward elimination (columns in order, sparsest pivot row)
  std::vector<long long> pivot_row_of_col(dim, -1);
  std::vector<bool> used(dim, false);
  for (long long c = 0; c < dim; ++c) {
    long long best = -1;
    size_t best_sz = SIZE_MAX;
    for (long long r = 0; r < dim; ++r) {
      if (used[r]) continue;
      auto it = rows[r].find(c);
      if (it == rows[r].end() || it->second == 0) continue;
      if (rows[r].size() < best_sz) {
        best_sz = rows[r].size();
        best = r;
      }
    }
    if (best < 0) {
      res.fallback = true;
      continue;
    }
    used[best] = true;
    pivot_row_of_col[c] = best;
    Rat piv = rows[best][c];
    for (long long r = 0; r < dim; ++r) {
      if (r == best || used[r]) continue;
      auto it = rows[r].find(c);
      if (it == rows[r].end() || it->second == 0) continue;
      Rat f = it->second / piv;
      for (const auto& [cc, w] : rows[best]) {
        auto ri = rows[r].find(cc);
        if (ri == rows[r].end()) {
          Rat nv = -(f * w);
          if (nv != 0) rows[r].emplace(cc, std::move(nv));
        } else {
          ri->second -= f * w;
          if (ri->second == 0) rows[r].erase(ri);
        }
      }
      rhs[r] -= f * rhs[best];
    }
  }
  for (long long r = 0; r < dim; ++r)
    if (!used[r] && rhs[r] != 0) res.fallback = true;
  std::vector<Rat> sol(dim, Rat(0));
  for (long long c = dim - 1; c >= 0; --c) {
    long long pr = pivot_row_of_col[c];
    if (pr < 0) continue;
    Rat acc = rhs[pr];
    for (const auto& [cc, w] : rows[pr]) {
      if (cc == c) continue;
      if (sol[cc] != 0) acc -= w * sol[cc];
    }
    sol[c] = acc / rows[pr][c];
  }
  Rat pa(0), prj(0);
  for (long long c = 0; c < dim; ++c) {
    if (sol[c] == 0 || op.is_halting(c)) continue;
    for (const auto& [r, w] : op.column(c)) {
      if (op.is_acc(r)) pa += sol[c] * w.cr().re;
      else if (op.is_rej(r)) prj += sol[c] * w.cr().re;
    }
  }
  res.p_acc = Scalar::exact(pa);
  res.p_rej = Scalar::exact(prj);
  return res;
}

// Float quantum machines: dense paired solve within 1e-9.
ResolventResult float_resolvent(const MachineSpec& spec, const std::string& x) {
  if (spec.heads != 1) throw Error("resolvent defined for one-head machines");
  if (spec.is_halting(spec.initial))
    throw Error("resolvent requires a non-halting initial state");
  EvolutionOp op(spec, x);
  int nq = static_cast<int>(spec.states.size());
  int tape = static_cast<int>(x.size()) + 2;
  int sc = nq * tape;
  // single-copy D = U Pi_non, real entries
  std::vector<std::vector<std::pair<int, double>>> dcols(sc);
  for (int q = 0; q < nq; ++q) {
    if (spec.is_halting(q)) continue;
    for (int l = 0; l < tape; ++l) {
      std::vector<int> pos{l};
      for (const auto& [tgt, w] : op.column(op.space().index(q, pos))) {
        std::complex<double> v = w.cf();
        if (std::abs(v.imag()) > 1e-12)
          throw Error("complex amplitudes present; apply complex_to_real first");
        if (v.real() == 0) continue;
        dcols[q * tape + l].emplace_back(static_cast<int>(tgt % nq) * tape +
                                             static_cast<int>(tgt / nq),
                                         v.real());
      }
    }
  }
  ConfStar cs{nq, tape};
  long long dim = cs.dim();
  if (dim > 2500) throw Error("float resolvent capped at CONF_* dimension 2500");
  Eigen::MatrixXd t = Eigen::MatrixXd::Identity(dim, dim);
  auto dt_col = [&](int q, int l, int s, auto&& f) {
    for (const auto& [row, w] : dcols[q * tape + l]) {
      int p = row / tape, mcell = row % tape;
      f(p, mcell, w > 0 ? s : 1 - s, std::abs(w));
    }
  };
  for (long long col = 0; col < dim; ++col) {
    ConfStar::Conf c = cs.decode(col);
    dt_col(c.q1, c.l1, c.s1, [&](int p1, int m1, int b1, double w1) {
      dt_col(c.q2, c.l2, c.s2, [&](int p2, int m2, int b2, double w2) {
        t(cs.index({p1, p2, b1, b2, m1, m2}), col) -= w1 * w2;
      });
    });
  }
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dim);
  rhs(cs.index({spec.initial, spec.initial, 0, 0, 0, 0})) = 1.0;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(t);
  ResolventResult res;
  if (!lu.isInvertible()) throw SingularResolvent();
  Eigen::VectorXd sol = lu.solve(rhs);
  auto total = [&](const std::set<int>& states) {
    double v = 0;
    for (int q : states)
      for (int l = 0; l < tape; ++l)
        for (int s1 = 0; s1 < 2; ++s1)
          for (int s2 = 0; s2 < 2; ++s2)
            v += (s1 == s2 ? 1.0 : -1.0) * sol(cs.index({q, q, s1, s2, l, l}));
    return v;
  };
  res.p_acc = Scalar::flt(total(spec.accepting));
  res.p_rej = Scalar::flt(total(spec.rejecting));
  return res;
}

}  // namespace

ResolventResult acceptance_resolvent(const MachineSpec& spec, const std::string& x) {
  if (spec.kind == Kind::PFA) return pfa_resolvent(spec, x);
  if (!spec.exact_representable()) return float_resolvent(spec, x);
  SplitEvolution se(spec, x);
  SparseSolve sol = solve_rows(se, se.i0(), false);
  ResolventResult res;
  res.fallback = sol.fallback;
  Rat pa(0), pr(0);
  for (const auto& [idx, chi] : se.targets(true))
    pa += chi > 0 ? sol.x[idx] : -sol.x[idx];
  for (const auto& [idx, chi] : se.targets(false))
    pr += chi > 0 ? sol.x[idx] : -sol.x[idx];
  res.p_acc = Scalar::exact(pa);
  res.p_rej = Scalar::exact(pr);
  return res;
}

Rat resolvent_determinant(const SplitEvolution& split) {
  SparseSolve sol = solve_rows(split, split.i0(), true);
  if (!sol.det_valid) return Rat(0);
  return sol.det;
}

Scalar acceptance_series_pair(const SplitEvolution& split, int terms, bool accepting) {
  // sum_k <targets| Pt^k |i0> with the chi signs
  std::unordered_map<long long, Rat> v;
  v[split.i0()] = Rat(1);
  auto tg = split.targets(accepting);
  Rat total(0);
  for (int k = 0; k <= terms; ++k) {
    for (const auto& [idx, chi] : tg) {
      auto it = v.find(idx);
      if (it != v.end()) total += chi > 0 ? it->second : -it->second;
    }
    if (v.empty()) break;
    std::unordered_map<long long, Rat> next;
    for (const auto& [c, w] : v) {
      for (const auto& [r, u] : split.pt_column(c)) {
        auto [it, fresh] = next.try_emplace(r, Rat(0));
        (void)fresh;
        it->second += u * w;
      }
    }
    v = std::move(next);
  }
  return Scalar::exact(total);
}

Scalar clow_determinant(const Matrix& t) {
  if (!t.square()) throw DimensionError("clow determinant of non-square matrix");
  int n = t.rows();
  if (n > kClowDimensionCap)
    throw Error("clow determinant capped at dimension " + std::to_string(kClowDimensionCap));
  Backend b = t.backend();
  if (n == 0) return Scalar::one(b);
  // S(h, len): signed sum over clow sequences with heads >= h and total
  // length len; S(n, 0) = 1. A(h, m): weight sum over single clows with
  // head h and length m, via walks through vertices > h.
  std::vector<std::vector<Scalar>> s(n + 1, std::vector<Scalar>(n + 1, Scalar::zero(b)));
  s[n][0] = Scalar::one(b);
  for (int h = n - 1; h >= 0; --h) {
    std::vector<Scalar> a(n + 1, Scalar::zero(b));
    std::vector<Scalar> walk(n, Scalar::zero(b));  // walk weight ending at v
    walk[h] = Scalar::one(b);
    for (int m = 1; m <= n; ++m) {
      for (int v = 0; v < n; ++v) {
        if (walk[v].is_zero()) continue;
        a[m] += walk[v] * t.at(v, h);
      }
      std::vector<Scalar> next(n, Scalar::zero(b));
      for (int u = 0; u < n; ++u) {
        if (walk[u].is_zero()) continue;
        for (int v = h + 1; v < n; ++v) next[v] += walk[u] * t.at(u, v);
      }
      walk = std::move(next);
    }
    for (int len = 0; len <= n; ++len) {
      Scalar acc = s[h + 1][len];
      for (int m = 1; m <= len; ++m) {
        if (a[m].is_zero() || s[h + 1][len - m].is_zero()) continue;
        acc = acc - a[m] * s[h + 1][len - m];
      }
      s[h][len] = acc;
    }
  }
  Scalar det = s[0][n];
  if (n % 2 == 1) det = -det;
  return det;
}

}  // namespace qfa
