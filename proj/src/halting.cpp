#include "qfa/halting.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>

#include "json.hpp"

namespace qfa {

namespace {

using SparseCols = std::vector<std::vector<std::pair<long long, CRat>>>;

// Columns of U * Pi_non: zero for halting states, U's column otherwise.
SparseCols build_upinon(const EvolutionOp& op) {
  long long dim = op.space().dim();
  SparseCols cols(dim);
  for (long long c = 0; c < dim; ++c) {
    if (op.is_halting(c)) continue;
    for (const auto& [r, w] : op.column(c)) cols[c].emplace_back(r, w.cr());
  }
  return cols;
}

SparseCols sparse_mul(const SparseCols& a, const SparseCols& b) {
  SparseCols out(b.size());
  for (size_t j = 0; j < b.size(); ++j) {
    std::map<long long, CRat> acc;
    for (const auto& [k, w] : b[j]) {
      for (const auto& [r, v] : a[static_cast<size_t>(k)]) {
        auto it = acc.find(r);
        if (it == acc.end()) acc.emplace(r, v * w);
        else it->second += v * w;
      }
    }
    for (auto& [r, v] : acc)
      if (!v.is_zero()) out[j].emplace_back(r, std::move(v));
  }
  return out;
}

std::vector<std::pair<long long, CRat>> sparse_apply(const SparseCols& a,
                                                     const std::vector<std::pair<long long, CRat>>& v) {
  std::map<long long, CRat> acc;
  for (const auto& [k, w] : v)
    for (const auto& [r, u] : a[static_cast<size_t>(k)]) {
      auto it = acc.find(r);
      if (it == acc.end()) acc.emplace(r, u * w);
      else it->second += u * w;
    }
  std::vector<std::pair<long long, CRat>> out;
  for (auto& [r, u] : acc)
    if (!u.is_zero()) out.emplace_back(r, std::move(u));
  return out;
}

// Rank by column elimination over sparse exact columns.
long long sparse_rank(const SparseCols& cols) {
  std::map<long long, std::map<long long, CRat>> pivots;  // pivot row -> reduced column
  long long rank = 0;
  for (const auto& col : cols) {
    if (col.empty()) continue;
    std::map<long long, CRat> v(col.begin(), col.end());
    while (!v.empty()) {
      long long lead = v.begin()->first;
      auto it = pivots.find(lead);
      if (it == pivots.end()) break;
      CRat f = v.begin()->second;
      for (const auto& [r, w] : it->second) {
        auto vi = v.find(r);
        if (vi == v.end()) v.emplace(r, -(f * w));
        else {
          vi->second -= f * w;
          if (vi->second.is_zero()) v.erase(vi);
        }
      }
    }
    if (v.empty()) continue;
    CRat inv = CRat(Rat(1)) / v.begin()->second;
    for (auto& [r, w] : v) w *= inv;
    pivots.emplace(v.begin()->first, std::move(v));
    ++rank;
  }
  return rank;
}

long long float_nullity(const Eigen::MatrixXcd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  const auto& sv = svd.singularValues();
  double tol = 1e-9 * (sv.size() ? std::max(1.0, sv(0)) : 1.0);
  long long rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > tol) ++rank;
  return m.cols() - rank;
}

}  // namespace

HaltingReport dimension_chain(const MachineSpec& spec, const std::string& x) {
  EvolutionOp op(spec, x);
  HaltingReport rep;
  rep.N = op.space().dim();
  rep.linear_bound = static_cast<long long>(spec.states.size()) * (op.space().n + 2) + 1;

  if (op.backend() == Backend::Exact) {
    SparseCols m = build_upinon(op);
    SparseCols power = m;
    long long prev = -1;
    long long dim = rep.N;
    while (true) {
      long long nullity = dim - sparse_rank(power);
      rep.chain_dims.push_back(nullity);
      if (prev == nullity) break;
      prev = nullity;
      if (nullity == dim) {
        // next power has the same kernel; chain is flat from here
        rep.chain_dims.push_back(nullity);
        break;
      }
      power = sparse_mul(power, m);
    }
    rep.d = static_cast<long long>(rep.chain_dims.size()) - 2;
    // membership of the initial configuration in W_d: (U Pi)^(d+1) e0 = 0
    std::vector<std::pair<long long, CRat>> v{{op.initial_config(), CRat(Rat(1))}};
    for (long long i = 0; i <= rep.d && !v.empty(); ++i) v = sparse_apply(m, v);
    rep.halts_absolutely = v.empty();
  } else {
    if (rep.N > 2048) throw Error("float dimension chain capped at dimension 2048");
    int n = static_cast<int>(rep.N);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    for (long long c = 0; c < rep.N; ++c) {
      if (op.is_halting(c)) continue;
      for (const auto& [r, w] : op.column(c)) m(static_cast<int>(r), static_cast<int>(c)) = w.cf();
    }
    Eigen::MatrixXcd power = m;
    long long prev = -1;
    while (true) {
      long long nullity = float_nullity(power);
      rep.chain_dims.push_back(nullity);
      if (prev == nullity) break;
      prev = nullity;
      if (nullity == rep.N) {
        rep.chain_dims.push_back(nullity);
        break;
      }
      power = power * m;
    }
    rep.d = static_cast<long long>(rep.chain_dims.size()) - 2;
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(n);
    v(static_cast<int>(op.initial_config())) = 1.0;
    for (long long i = 0; i <= rep.d; ++i) v = m * v;
    rep.halts_absolutely = v.norm() < 1e-9;
  }
  if (rep.d < 0) rep.d = 0;
  if (rep.halts_absolutely) {
    rep.worst_case_steps = rep.d + 1;
    rep.bound_check = rep.worst_case_steps <= rep.linear_bound;
  }
  return rep;
}

LinearBoundReport verify_linear_bound(const MachineSpec& spec, const std::vector<int>& lengths) {
  LinearBoundReport rep;
  for (int n : lengths) {
    for (const auto& x : validation_strings(spec, n)) {
      ++rep.inputs_checked;
      HaltingReport hr = dimension_chain(spec, x);
      if (!hr.halts_absolutely) continue;  // bound applies to absolute halters only
      if (!hr.bound_check) {
        rep.ok = false;
        rep.violations.push_back({n, x, "worst-case steps exceed |Q|(n+2)+1"});
        continue;
      }
      RunTrace tr = step_simulate(spec, x, hr.worst_case_steps);
      bool zero = tr.backend == Backend::Exact ? tr.residual.is_zero()
                                               : tr.residual.cf().real() < 1e-12;
      if (!zero) {
        rep.ok = false;
        rep.violations.push_back({n, x, "residual mass after reported worst-case step"});
      }
    }
  }
  return rep;
}

SpectralEstimate spectral_runtime_estimate(const MachineSpec& spec, const std::string& x,
                                           double eps) {
  if (eps < 0 || eps > 0.5) throw Error("spectral estimate: eps must lie in [0, 1/2]");
  EvolutionOp op(spec, x);
  SpectralEstimate est;
  est.N = op.space().dim();
  est.eps_prime = (1.0 - 2.0 * eps) / 4.0;
  if (est.N > 1024) throw Error("spectral estimate capped at dimension 1024");
  int n = static_cast<int>(est.N);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (long long c = 0; c < est.N; ++c) {
    if (op.is_halting(c)) continue;
    for (const auto& [r, w] : op.column(c)) m(static_cast<int>(r), static_cast<int>(c)) = w.cf();
  }
  // kernel chain of m^(i+1); stop at the first repeated nullity
  std::vector<Eigen::MatrixXcd> powers{m};
  long long prev = -1;
  size_t d_index = 0;
  while (true) {
    long long nullity = float_nullity(powers.back());
    if (nullity == prev) {
      d_index = powers.size() - 2;
      break;
    }
    prev = nullity;
    if (nullity == est.N) {
      d_index = powers.size() - 1;
      break;
    }
    powers.push_back(powers.back() * m);
  }
  est.d = static_cast<long long>(d_index);
  Eigen::MatrixXcd u_tilde = powers[d_index];  // (U Pi_non)^(d+1)

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(u_tilde, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  double tol = 1e-9 * (sv.size() ? std::max(1.0, sv(0)) : 1.0);
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > tol) ++rank;
  est.dim_w_max = est.N - rank;
  if (rank == 0) {
    est.all_mass_halts = true;
    est.stationary_only = false;
    est.k_bound = 0;
    return est;
  }
  // W_max-perp basis: leading right-singular vectors
  Eigen::MatrixXcd bperp = svd.matrixV().leftCols(rank);
  Eigen::MatrixXcd a = bperp.adjoint() * u_tilde * bperp;
  est.a_invertible = float_nullity(a) == 0;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(a, false);
  double lmax = 0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    double av = std::abs(es.eigenvalues()(i));
    if (std::abs(1.0 - av) <= 1e-8) {
      ++est.dim_stationary;
    } else {
      ++est.dim_undetermined;
      lmax = std::max(lmax, av);
    }
  }
  est.lambda_max = lmax;
  if (est.dim_undetermined == 0) {
    est.stationary_only = true;
    est.k_bound = 0;
  } else if (est.eps_prime <= 0) {
    est.k_bound = std::numeric_limits<double>::infinity();
  } else {
    est.k_bound = std::log(est.eps_prime) / (2.0 * std::log(lmax));
  }
  return est;
}

void verify_w_recursion(const MachineSpec& spec, const std::string& x) {
  DenseEvolution ev = build_evolution(spec, x);
  if (ev.U.backend() != Backend::Exact)
    throw Error("w-recursion check needs an exact machine");
  int n = ev.U.rows();
  Matrix m = ev.U * ev.P_non;

  long long halting_configs = 0;
  for (int i = 0; i < n; ++i)
    if (ev.P_non.at(i, i).is_zero()) ++halting_configs;

  std::vector<SubspaceBasis> w;
  Matrix power = m;
  while (true) {
    w.push_back(nullspace(power));
    if (w.size() >= 2 && w[w.size() - 1].dim() == w[w.size() - 2].dim()) break;
    if (w.back().dim() == n) {
      w.push_back(w.back());
      break;
    }
    power = power * m;
  }
  if (w[0].dim() != halting_configs)
    throw Error("dim(W_0) != number of halting configurations");

  Matrix uh = ev.U.hermitian();
  auto basis_matrix = [&](const std::vector<std::vector<Scalar>>& vecs) {
    Matrix b(n, static_cast<int>(vecs.size()), Backend::Exact);
    for (size_t j = 0; j < vecs.size(); ++j)
      for (int i = 0; i < n; ++i) b.at(i, static_cast<int>(j)) = vecs[j][i];
    return b;
  };
  auto hstack = [&](const Matrix& a, const Matrix& b) {
    Matrix r(n, a.cols() + b.cols(), Backend::Exact);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < a.cols(); ++j) r.at(i, j) = a.at(i, j);
      for (int j = 0; j < b.cols(); ++j) r.at(i, a.cols() + j) = b.at(i, j);
    }
    return r;
  };

  for (size_t i = 0; i + 1 < w.size(); ++i) {
    // K_{i+1} = U^{-1}(W_i) intersect W_perp
    Matrix c = uh * basis_matrix(w[i].vectors);  // columns span U^{-1}(W_i)
    // coefficients whose combination vanishes on halting coordinates
    Matrix h(static_cast<int>(halting_configs), c.cols(), Backend::Exact);
    int hr = 0;
    for (int r = 0; r < n; ++r) {
      if (!ev.P_non.at(r, r).is_zero()) continue;
      for (int j = 0; j < c.cols(); ++j) h.at(hr, j) = c.at(r, j);
      ++hr;
    }
    SubspaceBasis coef = nullspace(h);
    Matrix k(n, coef.dim(), Backend::Exact);
    for (int j = 0; j < coef.dim(); ++j) {
      std::vector<Scalar> combo(c.cols());
      for (int t = 0; t < c.cols(); ++t) combo[t] = coef.vectors[j][t];
      std::vector<Scalar> v = c.apply(combo);
      for (int r = 0; r < n; ++r) k.at(r, j) = v[r];
    }
    Matrix wi = basis_matrix(w[i].vectors);
    Matrix wnext = basis_matrix(w[i + 1].vectors);
    int dim_next = w[i + 1].dim();
    if (rank_of(hstack(k, wi)) != dim_next)
      throw Error("span{K_(i+1), W_i} has wrong dimension at i=" + std::to_string(i));
    if (rank_of(hstack(hstack(k, wi), wnext)) != dim_next)
      throw Error("span{K_(i+1), W_i} not contained in W_(i+1) at i=" + std::to_string(i));
  }
}

std::string HaltingReport::to_json() const {
  nlohmann::json j;
  j["chain_dims"] = chain_dims;
  j["d"] = d;
  j["halts_absolutely"] = halts_absolutely;
  j["worst_case_steps"] = worst_case_steps;
  j["N"] = N;
  j["linear_bound"] = linear_bound;
  j["bound_check"] = bound_check;
  return j.dump(2);
}

std::string SpectralEstimate::to_json() const {
  nlohmann::json j;
  j["N"] = N;
  j["dim_w_max"] = dim_w_max;
  j["d"] = d;
  j["dim_undetermined"] = dim_undetermined;
  j["dim_stationary"] = dim_stationary;
  j["a_invertible"] = a_invertible;
  j["all_mass_halts"] = all_mass_halts;
  j["stationary_only"] = stationary_only;
  j["lambda_max"] = lambda_max;
  j["eps_prime"] = eps_prime;
  j["k_bound"] = k_bound;
  return j.dump(2);
}

}  // namespace qfa
