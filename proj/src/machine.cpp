#include "qfa/machine.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <unordered_map>

#include "json.hpp"
#include "qfa/evolution.hpp"

namespace qfa {

using nlohmann::json;

std::string MachineSpec::symbol_name(int sym) const {
  if (sym == kLeftEnd) return "<";
  if (sym == kRightEnd) return ">";
  return alphabet.at(sym - kFirstLetter);
}

int MachineSpec::symbol_id(const std::string& name) const {
  if (name == "<") return kLeftEnd;
  if (name == ">") return kRightEnd;
  for (size_t i = 0; i < alphabet.size(); ++i)
    if (alphabet[i] == name) return kFirstLetter + static_cast<int>(i);
  return -1;
}

int MachineSpec::state_id(const std::string& name) const {
  for (size_t i = 0; i < states.size(); ++i)
    if (states[i] == name) return static_cast<int>(i);
  return -1;
}

bool MachineSpec::exact_representable() const {
  if (exact_cache_ < 0) {
    exact_cache_ = 1;
    for (const auto& t : transitions)
      if (!t.weight.exact_representable()) {
        exact_cache_ = 0;
        break;
      }
  }
  return exact_cache_ == 1;
}

const std::vector<int>& MachineSpec::rules(int state, const std::vector<int>& scan) const {
  if (!indexed_) {
    index_.clear();
    for (size_t i = 0; i < transitions.size(); ++i)
      index_[{transitions[i].from, transitions[i].scan}].push_back(static_cast<int>(i));
    indexed_ = true;
  }
  static const std::vector<int> kEmpty;
  auto it = index_.find({state, scan});
  return it == index_.end() ? kEmpty : it->second;
}

const std::vector<Scalar>& MachineSpec::evaluated_weights() const {
  if (!weights_cached_) {
    weights_.clear();
    weights_.reserve(transitions.size());
    Backend b = backend();
    for (const auto& t : transitions) {
      Scalar w = t.weight.eval();
      weights_.push_back(b == Backend::Float ? w.to_float() : w);
    }
    weights_cached_ = true;
  }
  return weights_;
}

void MachineSpec::reindex() {
  indexed_ = false;
  weights_cached_ = false;
  exact_cache_ = -1;
  // build the caches eagerly so post-parse machines can be read concurrently
  rules(0, std::vector<int>(heads, 0));
  evaluated_weights();
}

namespace {

std::vector<int> parse_scan(const MachineSpec& spec, const json& arr, int heads) {
  if (!arr.is_array() || static_cast<int>(arr.size()) != heads)
    throw MachineParseError("scan tuple arity differs from head count " + std::to_string(heads));
  std::vector<int> out;
  for (const auto& s : arr) {
    if (!s.is_string()) throw MachineParseError("scan entries must be symbol strings");
    int id = spec.symbol_id(s.get<std::string>());
    if (id < 0) throw MachineParseError("unknown symbol '" + s.get<std::string>() + "' in scan tuple");
    out.push_back(id);
  }
  return out;
}

}  // namespace

MachineSpec parse_machine(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw MachineParseError(std::string("JSON syntax: ") + e.what());
  }
  MachineSpec m;
  try {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "qfa") m.kind = Kind::QFA;
    else if (kind == "pfa") m.kind = Kind::PFA;
    else throw MachineParseError("kind must be \"qfa\" or \"pfa\"");
    m.heads = j.at("heads").get<int>();
    if (m.heads < 1) throw MachineParseError("head count must be >= 1");
    for (const auto& s : j.at("states")) m.states.push_back(s.get<std::string>());
    if (m.states.empty()) throw MachineParseError("state list empty");
    {
      std::set<std::string> uniq(m.states.begin(), m.states.end());
      if (uniq.size() != m.states.size()) throw MachineParseError("duplicate state name");
    }
    m.initial = m.state_id(j.at("initial").get<std::string>());
    if (m.initial < 0) throw MachineParseError("unknown initial state");
    for (const auto& s : j.at("accepting")) {
      int id = m.state_id(s.get<std::string>());
      if (id < 0) throw MachineParseError("unknown accepting state '" + s.get<std::string>() + "'");
      m.accepting.insert(id);
    }
    for (const auto& s : j.at("rejecting")) {
      int id = m.state_id(s.get<std::string>());
      if (id < 0) throw MachineParseError("unknown rejecting state '" + s.get<std::string>() + "'");
      m.rejecting.insert(id);
    }
    for (int a : m.accepting)
      if (m.rejecting.count(a))
        throw MachineParseError("state '" + m.states[a] + "' both accepting and rejecting");
    for (const auto& s : j.at("alphabet")) {
      std::string sym = s.get<std::string>();
      if (sym == "<" || sym == ">") throw MachineParseError("endmarkers are implicit");
      m.alphabet.push_back(sym);
    }
    if (j.contains("head_motion")) {
      std::string hm = j.at("head_motion").get<std::string>();
      if (hm == "one_way") m.motion = HeadMotion::OneWay;
      else if (hm == "two_way") m.motion = HeadMotion::TwoWay;
      else throw MachineParseError("head_motion must be \"one_way\" or \"two_way\"");
    }
    int tno = 0;
    for (const auto& t : j.at("transitions")) {
      Transition tr;
      std::string where = "transition #" + std::to_string(tno);
      tr.from = m.state_id(t.at("from").get<std::string>());
      if (tr.from < 0) throw MachineParseError(where + ": unknown state '" + t.at("from").get<std::string>() + "'");
      tr.to = m.state_id(t.at("to").get<std::string>());
      if (tr.to < 0) throw MachineParseError(where + ": unknown state '" + t.at("to").get<std::string>() + "'");
      tr.scan = parse_scan(m, t.at("scan"), m.heads);
      if (!t.at("move").is_array() || static_cast<int>(t.at("move").size()) != m.heads)
        throw MachineParseError(where + ": move tuple arity differs from head count");
      for (const auto& d : t.at("move")) {
        int v = d.get<int>();
        if (v < -1 || v > 1) throw MachineParseError(where + ": moves must be -1, 0 or +1");
        if (m.motion == HeadMotion::OneWay && v != 1)
          throw MachineParseError(where + ": one-way machines only move +1");
        tr.move.push_back(v);
      }
      tr.weight = AmpExpr::parse(t.at("weight").get<std::string>());
      if (m.kind == Kind::PFA) {
        Scalar w = tr.weight.eval();
        if (!w.is_real() || w.cf().real() < 0 || w.cf().real() > 1)
          throw MachineParseError(where + ": pfa weights must be real in [0,1]");
      }
      m.transitions.push_back(std::move(tr));
      ++tno;
    }
  } catch (const json::exception& e) {
    throw MachineParseError(std::string("schema: ") + e.what());
  }
  return m;
}

std::string serialize_machine(const MachineSpec& m) {
  json j;
  j["kind"] = m.kind == Kind::QFA ? "qfa" : "pfa";
  j["heads"] = m.heads;
  j["states"] = m.states;
  j["initial"] = m.states[m.initial];
  json acc = json::array(), rej = json::array();
  for (int a : m.accepting) acc.push_back(m.states[a]);
  for (int r : m.rejecting) rej.push_back(m.states[r]);
  j["accepting"] = acc;
  j["rejecting"] = rej;
  j["alphabet"] = m.alphabet;
  if (m.motion == HeadMotion::OneWay) j["head_motion"] = "one_way";
  json ts = json::array();
  for (const auto& t : m.transitions) {
    json tj;
    tj["from"] = m.states[t.from];
    json scan = json::array();
    for (int s : t.scan) scan.push_back(m.symbol_name(s));
    tj["scan"] = scan;
    tj["to"] = m.states[t.to];
    tj["move"] = t.move;
    tj["weight"] = t.weight.str();
    ts.push_back(tj);
  }
  j["transitions"] = ts;
  return j.dump(2);
}

std::vector<std::string> validation_strings(const MachineSpec& spec, int n, int cap, int samples,
                                            unsigned seed) {
  std::vector<std::string> out;
  int k = static_cast<int>(spec.alphabet.size());
  if (n == 0 || k == 0) {
    out.push_back("");
    return out;
  }
  double total = std::pow(static_cast<double>(k), n);
  if (total <= cap) {
    std::string cur(n, ' ');
    std::vector<int> idx(n, 0);
    while (true) {
      for (int i = 0; i < n; ++i) cur[i] = spec.alphabet[idx[i]][0];
      out.push_back(cur);
      int i = n - 1;
      while (i >= 0 && ++idx[i] == k) idx[i--] = 0;
      if (i < 0) break;
    }
    return out;
  }
  for (int a = 0; a < k; ++a) out.push_back(std::string(n, spec.alphabet[a][0]));
  std::mt19937 rng(seed + static_cast<unsigned>(n));
  std::uniform_int_distribution<int> pick(0, k - 1);
  for (int s = 0; s < samples; ++s) {
    std::string x(n, ' ');
    for (int i = 0; i < n; ++i) x[i] = spec.alphabet[pick(rng)][0];
    out.push_back(x);
  }
  return out;
}

namespace {

// Columns orthonormality via row-grouped accumulation of U^H U.
void check_unitary(const EvolutionOp& op, LengthCheck* chk) {
  long long dim = op.space().dim();
  bool exact = op.backend() == Backend::Exact;
  // entries grouped by row
  std::unordered_map<long long, std::vector<std::pair<long long, Scalar>>> by_row;
  for (long long c = 0; c < dim; ++c)
    for (const auto& [r, w] : op.column(c)) by_row[r].emplace_back(c, w);
  // column norms and pairwise inner products
  std::map<std::pair<long long, long long>, Scalar> gram;
  for (const auto& [row, ents] : by_row) {
    (void)row;
    for (const auto& [ci, wi] : ents)
      for (const auto& [cj, wj] : ents) {
        if (ci > cj) continue;
        auto key = std::make_pair(ci, cj);
        auto it = gram.find(key);
        Scalar term = wi.conj() * wj;
        if (it == gram.end()) gram.emplace(key, term);
        else it->second += term;
      }
  }
  // expected: diag 1 (note columns absent from gram have norm 0 -> deviation 1)
  std::vector<bool> seen(dim, false);
  for (const auto& [key, val] : gram) {
    double dev;
    if (key.first == key.second) {
      seen[key.first] = true;
      dev = exact ? ((val.cr() == CRat(Rat(1))) ? 0.0 : 1.0)
                  : std::abs(val.cf() - std::complex<double>(1.0, 0.0));
    } else {
      dev = exact ? (val.is_zero() ? 0.0 : 1.0) : std::abs(val.cf());
    }
    if (dev > chk->max_deviation) {
      chk->max_deviation = dev;
      chk->worst_columns = {static_cast<int>(key.first), static_cast<int>(key.second)};
    }
  }
  for (long long c = 0; c < dim; ++c)
    if (!seen[c] && chk->max_deviation < 1.0) {
      chk->max_deviation = 1.0;
      chk->worst_columns = {static_cast<int>(c), static_cast<int>(c)};
    }
  double tol = exact ? 0.0 : 1e-9;
  if (chk->max_deviation > tol) chk->ok = false;
}

void check_stochastic(const EvolutionOp& op, LengthCheck* chk) {
  long long dim = op.space().dim();
  bool exact = op.backend() == Backend::Exact;
  for (long long c = 0; c < dim; ++c) {
    Scalar sum = Scalar::zero(op.backend());
    bool neg = false;
    for (const auto& [r, w] : op.column(c)) {
      (void)r;
      if (!w.is_real() || w.cf().real() < 0) neg = true;
      sum += w;
    }
    double dev = exact ? ((sum.cr() == CRat(Rat(1))) ? 0.0 : 1.0)
                       : std::abs(sum.cf() - std::complex<double>(1.0, 0.0));
    if (neg) dev = std::max(dev, 1.0);
    if (dev > chk->max_deviation) {
      chk->max_deviation = dev;
      chk->worst_columns = {static_cast<int>(c), static_cast<int>(c)};
    }
  }
  double tol = exact ? 0.0 : 1e-9;
  if (chk->max_deviation > tol) chk->ok = false;
}

}  // namespace

ValidationReport validate_wellformed(const MachineSpec& spec, int n_max) {
  ValidationReport rep;
  rep.is_unitary = spec.kind == Kind::QFA;
  rep.is_stochastic = spec.kind == Kind::PFA;
  for (int n = 0; n <= n_max; ++n) {
    LengthCheck chk;
    chk.n = n;
    auto strings = validation_strings(spec, n);
    double total = std::pow(static_cast<double>(std::max<size_t>(1, spec.alphabet.size())),
                            std::max(0, n));
    chk.sampled = total > static_cast<double>(strings.size());
    for (const auto& x : strings) {
      EvolutionOp op(spec, x);
      if (spec.kind == Kind::QFA) check_unitary(op, &chk);
      else check_stochastic(op, &chk);
      ++chk.strings_checked;
    }
    if (!chk.ok) {
      rep.all_ok = false;
      rep.is_unitary = false;
      rep.is_stochastic = false;
    }
    rep.max_deviation = std::max(rep.max_deviation, chk.max_deviation);
    rep.lengths.push_back(chk);
  }
  return rep;
}

}  // namespace qfa
