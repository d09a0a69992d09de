#include "qfa/evolution.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"

namespace qfa {

EvolutionOp::EvolutionOp(const MachineSpec& spec, const std::string& x) : spec_(&spec) {
  cs_.nstates = static_cast<int>(spec.states.size());
  cs_.heads = spec.heads;
  cs_.n = static_cast<int>(x.size());
  tape_.assign(cs_.tape(), 0);
  tape_[0] = kLeftEnd;
  tape_[cs_.tape() - 1] = kRightEnd;
  for (int i = 0; i < cs_.n; ++i) {
    int sym = spec.symbol_id(std::string(1, x[i]));
    if (sym < kFirstLetter) throw Error("input symbol outside machine alphabet: " + std::string(1, x[i]));
    tape_[i + 1] = sym;
  }
  backend_ = spec.backend();
  weight_cache_ = &spec.evaluated_weights();
}

long long EvolutionOp::initial_config() const {
  std::vector<int> zeros(cs_.heads, 0);
  return cs_.index(spec_->initial, zeros);
}

std::vector<std::pair<long long, Scalar>> EvolutionOp::column(long long cfg) const {
  int state;
  std::vector<int> pos;
  cs_.decode(cfg, &state, &pos);
  std::vector<int> scan(cs_.heads);
  for (int h = 0; h < cs_.heads; ++h) scan[h] = tape_[pos[h]];
  std::vector<std::pair<long long, Scalar>> out;
  std::vector<int> npos(cs_.heads);
  for (int ti : spec_->rules(state, scan)) {
    const Transition& tr = spec_->transitions[ti];
    for (int h = 0; h < cs_.heads; ++h) {
      int p = pos[h] + tr.move[h];
      if (p < 0) p += cs_.tape();
      if (p >= cs_.tape()) p -= cs_.tape();
      npos[h] = p;
    }
    const Scalar& w = (*weight_cache_)[ti];
    if (w.is_zero()) continue;
    out.emplace_back(cs_.index(tr.to, npos), w);
  }
  return out;
}

SparseVec EvolutionOp::apply(const SparseVec& v) const {
  SparseVec out;
  for (const auto& [cfg, amp] : v) {
    if (amp.is_zero()) continue;
    for (const auto& [tgt, w] : column(cfg)) {
      auto it = out.find(tgt);
      if (it == out.end())
        out.emplace(tgt, amp * w);
      else
        it->second += amp * w;
    }
  }
  // drop exact zeros to keep the support tight
  for (auto it = out.begin(); it != out.end();) {
    if (it->second.is_zero())
      it = out.erase(it);
    else
      ++it;
  }
  return out;
}

DenseEvolution build_evolution(const MachineSpec& spec, const std::string& x, long long max_dim) {
  EvolutionOp op(spec, x);
  long long dim = op.space().dim();
  if (dim > max_dim)
    throw Error("configuration space too large for dense matrices (" + std::to_string(dim) + ")");
  int n = static_cast<int>(dim);
  Backend b = op.backend();
  DenseEvolution ev{Matrix(n, n, b), Matrix(n, n, b), Matrix(n, n, b), Matrix(n, n, b), op.space()};
  for (int c = 0; c < n; ++c) {
    for (const auto& [r, w] : op.column(c)) ev.U.at(static_cast<int>(r), c) = w;
    if (op.is_acc(c))
      ev.P_acc.at(c, c) = Scalar::one(b);
    else if (op.is_rej(c))
      ev.P_rej.at(c, c) = Scalar::one(b);
    else
      ev.P_non.at(c, c) = Scalar::one(b);
  }
  return ev;
}

long long default_t_max(const MachineSpec& spec, int n) {
  return static_cast<long long>(spec.states.size()) * (n + 2) * 64;
}

RunTrace step_simulate(const MachineSpec& spec, const std::string& x, long long t_max,
                       bool keep_steps) {
  EvolutionOp op(spec, x);
  Backend b = op.backend();
  // a one-way machine stops once the right endmarker has been read
  if (spec.motion == HeadMotion::OneWay)
    t_max = std::min<long long>(t_max, static_cast<long long>(x.size()) + 2);
  RunTrace trace;
  trace.backend = b;
  trace.t_max = t_max;
  trace.cum_acc = Scalar::zero(b);
  trace.cum_rej = Scalar::zero(b);

  SparseVec phi;
  phi[op.initial_config()] = Scalar::one(b);
  Scalar res_mass = Scalar::one(b);
  // quantum amplitudes are measured by squared norm; stochastic masses add up
  bool quantum = spec.kind == Kind::QFA;
  auto mass_of = [&](const Scalar& amp) { return quantum ? amp.abs2() : amp; };

  for (long long t = 1; t <= t_max; ++t) {
    if (phi.empty()) break;
    SparseVec next = op.apply(phi);
    Scalar step_acc = Scalar::zero(b), step_rej = Scalar::zero(b);
    SparseVec surviving;
    for (auto& [cfg, amp] : next) {
      Scalar m = mass_of(amp);
      if (op.is_acc(cfg))
        step_acc += m;
      else if (op.is_rej(cfg))
        step_rej += m;
      else
        surviving.emplace(cfg, amp);
    }
    trace.cum_acc += step_acc;
    trace.cum_rej += step_rej;
    phi = std::move(surviving);
    Scalar res = Scalar::zero(b);
    for (const auto& [cfg, amp] : phi) res += mass_of(amp);
    res_mass = res;
    trace.steps_run = t;
    if (keep_steps) {
      trace.steps.push_back({t, step_acc.cf().real(), step_rej.cf().real(), res.cf().real()});
    }
    bool halted = b == Backend::Exact ? res.is_zero() : res.cf().real() < 1e-12;
    if (halted) {
      trace.verdict = TraceVerdict::HaltedAll;
      res_mass = Scalar::zero(b);
      phi.clear();
      break;
    }
  }
  if (trace.verdict != TraceVerdict::HaltedAll && phi.empty() && t_max > 0) {
    // support vanished exactly
    trace.verdict = TraceVerdict::HaltedAll;
    res_mass = Scalar::zero(b);
  }
  trace.residual = res_mass;
  return trace;
}

std::string RunTrace::to_json() const {
  nlohmann::json j;
  j["backend"] = backend == Backend::Exact ? "exact" : "float";
  j["verdict"] = verdict == TraceVerdict::HaltedAll ? "HALTED_ALL" : "TRUNCATED";
  j["t_max"] = t_max;
  j["steps_run"] = steps_run;
  j["p_acc"] = cum_acc.cf().real();
  j["p_rej"] = cum_rej.cf().real();
  j["residual"] = residual.cf().real();
  if (backend == Backend::Exact) {
    j["p_acc_exact"] = rat_str(cum_acc.cr().re);
    j["p_rej_exact"] = rat_str(cum_rej.cr().re);
    j["residual_exact"] = rat_str(residual.cr().re);
  }
  nlohmann::json steps_j = nlohmann::json::array();
  for (const auto& s : steps) {
    steps_j.push_back({{"t", s.t}, {"p_acc", s.p_acc}, {"p_rej", s.p_rej}, {"residual", s.residual}});
  }
  j["steps"] = steps_j;
  return j.dump(2);
}

CriterionSpec CriterionSpec::parse(const std::string& text) {
  auto lp = text.find('(');
  std::string name = lp == std::string::npos ? text : text.substr(0, lp);
  std::string arg;
  if (lp != std::string::npos) {
    auto rp = text.rfind(')');
    if (rp == std::string::npos || rp < lp) throw Error("bad criterion syntax: " + text);
    arg = text.substr(lp + 1, rp - lp - 1);
  }
  auto rat_arg = [&](Rat dflt) {
    if (arg.empty()) return dflt;
    size_t slash = arg.find('/');
    if (slash == std::string::npos) return Rat(mpz_class(arg));
    Rat r(mpz_class(arg.substr(0, slash)), mpz_class(arg.substr(slash + 1)));
    r.canonicalize();
    return r;
  };
  CriterionSpec c;
  if (name == "bounded") {
    c.criterion = Criterion::Bounded;
    c.parameter = rat_arg(Rat(1, 3));
    if (c.parameter < 0 || c.parameter >= Rat(1, 2))
      throw Error("bounded-error epsilon must lie in [0, 1/2)");
  } else if (name == "unbounded") {
    c.criterion = Criterion::Unbounded;
  } else if (name == "exact-cutpoint") {
    c.criterion = Criterion::ExactCutpoint;
    c.parameter = rat_arg(Rat(1, 2));
    if (c.parameter <= 0 || c.parameter > 1)
      throw Error("exact cut point must lie in (0, 1]");
  } else if (name == "zero-cutpoint") {
    c.criterion = Criterion::ZeroCutpoint;
  } else if (name == "error-free") {
    c.criterion = Criterion::ErrorFree;
  } else if (name == "one-sided") {
    c.criterion = Criterion::OneSided;
    c.parameter = rat_arg(Rat(1, 3));
    if (c.parameter < 0 || c.parameter >= Rat(1, 2))
      throw Error("one-sided epsilon must lie in [0, 1/2)");
  } else {
    throw Error("unknown criterion: " + name);
  }
  return c;
}

std::string CriterionSpec::str() const {
  switch (criterion) {
    case Criterion::Bounded:
      return "bounded(" + rat_str(parameter) + ")";
    case Criterion::Unbounded:
      return "unbounded";
    case Criterion::ExactCutpoint:
      return "exact-cutpoint(" + rat_str(parameter) + ")";
    case Criterion::ZeroCutpoint:
      return "zero-cutpoint";
    case Criterion::ErrorFree:
      return "error-free";
    case Criterion::OneSided:
      return "one-sided(" + rat_str(parameter) + ")";
  }
  return "?";
}

ClassifyResult classify(const MachineSpec& spec, const std::string& x,
                        const CriterionSpec& criterion, long long t_max) {
  ClassifyResult r;
  r.trace = step_simulate(spec, x, t_max);
  const RunTrace& tr = r.trace;

  // Interval threshold tests; exact backend gets exact comparisons.
  bool exact = tr.backend == Backend::Exact;
  Rat acc_lo, rej_lo, res;
  double facc = tr.cum_acc.cf().real(), frej = tr.cum_rej.cf().real(),
         fres = tr.residual.cf().real();
  if (exact) {
    acc_lo = tr.cum_acc.cr().re;
    rej_lo = tr.cum_rej.cr().re;
    res = tr.residual.cr().re;
  }
  auto ge = [&](bool use_acc, const Rat& thr) {
    // guaranteed lower bound >= thr
    if (exact) return (use_acc ? acc_lo : rej_lo) >= thr;
    return (use_acc ? facc : frej) >= thr.get_d() - 1e-9;
  };
  auto gt = [&](bool use_acc, const Rat& thr) {
    if (exact) return (use_acc ? acc_lo : rej_lo) > thr;
    return (use_acc ? facc : frej) > thr.get_d() + 1e-9;
  };
  auto hi_le = [&](bool use_acc, const Rat& thr) {
    // guaranteed upper bound <= thr (uses captured + residual)
    if (exact) return (use_acc ? acc_lo : rej_lo) + res <= thr;
    return (use_acc ? facc : frej) + fres <= thr.get_d() + 1e-9;
  };

  const Rat& p = criterion.parameter;
  switch (criterion.criterion) {
    case Criterion::Bounded: {
      Rat thr = Rat(1) - p;
      if (ge(true, thr)) r.verdict = Verdict::Accept;
      else if (ge(false, thr)) r.verdict = Verdict::Reject;
      else r.verdict = Verdict::Undetermined;
      break;
    }
    case Criterion::Unbounded: {
      if (gt(true, Rat(1, 2))) r.verdict = Verdict::Accept;
      else if (ge(false, Rat(1, 2))) r.verdict = Verdict::Reject;
      else r.verdict = Verdict::Undetermined;
      break;
    }
    case Criterion::ExactCutpoint: {
      if (exact) {
        if (res == 0) r.verdict = acc_lo == p ? Verdict::Accept : Verdict::Reject;
        else if (acc_lo > p || acc_lo + res < p) r.verdict = Verdict::Reject;
        else r.verdict = Verdict::Undetermined;
      } else {
        if (fres < 1e-9) r.verdict = std::abs(facc - p.get_d()) <= 1e-9 ? Verdict::Accept : Verdict::Reject;
        else r.verdict = Verdict::Undetermined;
      }
      break;
    }
    case Criterion::ZeroCutpoint: {
      if (gt(true, Rat(0))) r.verdict = Verdict::Accept;
      else if (hi_le(true, Rat(0))) r.verdict = Verdict::Reject;
      else r.verdict = Verdict::Undetermined;  // residual could hide mass
      break;
    }
    case Criterion::ErrorFree: {
      if (ge(true, Rat(1))) r.verdict = Verdict::Accept;
      else if (ge(false, Rat(1))) r.verdict = Verdict::Reject;
      else r.verdict = Verdict::Undetermined;
      break;
    }
    case Criterion::OneSided: {
      Rat thr = Rat(1) - p;
      if (ge(true, thr)) r.verdict = Verdict::Accept;
      else if (ge(false, Rat(1))) r.verdict = Verdict::Reject;
      else r.verdict = Verdict::Undetermined;
      break;
    }
  }
  return r;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Accept: return "ACCEPT";
    case Verdict::Reject: return "REJECT";
    case Verdict::Undetermined: return "UNDETERMINED";
  }
  return "?";
}

}  // namespace qfa
