#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "qfa/classical.hpp"
#include "qfa/evolution.hpp"
#include "qfa/halting.hpp"
#include "qfa/resolvent.hpp"
#include "qfa/transforms.hpp"
#include "qfa/zoo.hpp"

using namespace qfa;
using nlohmann::json;

namespace {

constexpr int kExitAccept = 0;
constexpr int kExitReject = 1;
constexpr int kExitUndetermined = 2;
constexpr int kExitError = 3;
constexpr int kExitUsage = 4;

MachineSpec load_machine(const std::string& ref) {
  if (ref.rfind("zoo:", 0) == 0) return zoo_entry(ref.substr(4)).spec;
  std::ifstream in(ref);
  if (!in) throw Error("cannot open machine file: " + ref);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_machine(ss.str());
}

void write_out(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text << "\n";
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error("cannot write: " + path);
  out << text << "\n";
}

int cmd_run(const std::string& machine_ref, const std::string& input, long long t_max,
            const std::string& criterion, bool as_json) {
  MachineSpec m = load_machine(machine_ref);
  ValidationReport val = validate_wellformed(m, std::min<int>(6, static_cast<int>(input.size())));
  if (!val.all_ok) {
    std::cerr << "machine fails well-formedness validation (max deviation "
              << val.max_deviation << ")\n";
    return kExitError;
  }
  if (t_max < 0) t_max = default_t_max(m, static_cast<int>(input.size()));
  CriterionSpec crit = CriterionSpec::parse(criterion);
  ClassifyResult r = classify(m, input, crit, t_max);
  if (as_json) {
    json j;
    j["command"] = "run";
    j["inputs"] = {input};
    j["criterion"] = crit.str();
    j["verdict"] = verdict_name(r.verdict);
    j["trace"] = json::parse(r.trace.to_json());
    j["pass"] = r.verdict != Verdict::Undetermined;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "verdict: " << verdict_name(r.verdict) << " under " << crit.str() << "\n";
    std::cout << r.trace.to_json() << "\n";
  }
  switch (r.verdict) {
    case Verdict::Accept: return kExitAccept;
    case Verdict::Reject: return kExitReject;
    case Verdict::Undetermined: return kExitUndetermined;
  }
  return kExitError;
}

std::string prob_str(const Scalar& s) {
  if (s.backend() == Backend::Exact) return rat_str(s.cr().re);
  std::ostringstream os;
  os.precision(12);
  os << s.cf().real();
  return os.str();
}

int cmd_accept_prob(const std::string& machine_ref, const std::string& input,
                    const std::string& method, long long t_max, bool as_json) {
  MachineSpec m = load_machine(machine_ref);
  json j;
  j["command"] = "accept-prob";
  j["inputs"] = {input};
  j["method"] = method;
  Scalar p_acc, p_rej;
  if (method == "series") {
    if (t_max < 0) t_max = 10000;
    RunTrace tr = step_simulate(m, input, t_max);
    p_acc = tr.cum_acc;
    p_rej = tr.cum_rej;
    j["residual"] = prob_str(tr.residual);
  } else if (method == "resolvent") {
    ResolventResult r = acceptance_resolvent(m, input);
    p_acc = r.p_acc;
    p_rej = r.p_rej;
    if (r.fallback)
      j["note"] = "SINGULAR_RESOLVENT: stationary mass projected out (restricted solve)";
  } else if (method == "clow-check") {
    if (m.kind != Kind::QFA || !m.exact_representable())
      throw Error("clow-check needs an exact quantum machine");
    SplitEvolution split(m, input);
    long long dim = split.conf().dim();
    if (dim > kClowDimensionCap) {
      std::cerr << "clow-check refused: CONF_* dimension " << dim << " exceeds the cap of "
                << kClowDimensionCap << "\n";
      return kExitUsage;
    }
    Matrix t(static_cast<int>(dim), static_cast<int>(dim), Backend::Exact);
    for (long long c = 0; c < dim; ++c) {
      t.at(static_cast<int>(c), static_cast<int>(c)) = Scalar::one(Backend::Exact);
      for (const auto& [r, w] : split.pt_column(c))
        t.at(static_cast<int>(r), static_cast<int>(c)) =
            t.at(static_cast<int>(r), static_cast<int>(c)) - Scalar::exact(w);
    }
    Scalar den = clow_determinant(t);
    j["denominator_det"] = prob_str(den);
    ResolventResult r = acceptance_resolvent(m, input);
    p_acc = r.p_acc;
    p_rej = r.p_rej;
    j["numerator_det"] = prob_str(r.p_acc * den);
  } else {
    std::cerr << "unknown method: " << method << "\n";
    return kExitUsage;
  }
  j["p_acc"] = prob_str(p_acc);
  j["p_rej"] = prob_str(p_rej);
  j["pass"] = true;
  if (as_json) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "p_acc = " << prob_str(p_acc) << "\n";
    std::cout << "p_rej = " << prob_str(p_rej) << "\n";
  }
  return kExitAccept;
}

int cmd_analyze(const std::string& machine_ref, const std::string& input, double eps,
                bool spectral) {
  MachineSpec m = load_machine(machine_ref);
  HaltingReport hr = dimension_chain(m, input);
  json j;
  j["command"] = "analyze";
  j["inputs"] = {input};
  j["halting"] = json::parse(hr.to_json());
  if (spectral) {
    SpectralEstimate est = spectral_runtime_estimate(m, input, eps);
    j["spectral"] = json::parse(est.to_json());
  }
  j["pass"] = true;
  std::cout << j.dump(2) << "\n";
  return kExitAccept;
}

int cmd_transform(const std::string& name, const std::vector<std::string>& machines,
                  const std::string& alpha, const std::string& beta, bool all_to_reject,
                  const std::string& out) {
  auto rat = [](const std::string& s) {
    if (s.empty()) return Rat(0);
    size_t slash = s.find('/');
    Rat r = slash == std::string::npos
                ? Rat(mpz_class(s))
                : Rat(mpz_class(s.substr(0, slash)), mpz_class(s.substr(slash + 1)));
    r.canonicalize();
    return r;
  };
  if (machines.empty()) throw Error("transform needs a machine");
  MachineSpec first = load_machine(machines[0]);
  TransformResult r;
  if (name == "complement") r = complement(first);
  else if (name == "complex-to-real") r = complex_to_real(first);
  else if (name == "half-split") r = half_split(first);
  else if (name == "damp") r = damp(first, rat(alpha));
  else if (name == "square-pair") r = square_pair(first);
  else if (name == "one-way-embed") r = one_way_embed(first, all_to_reject);
  else if (name == "affine" || name == "product") {
    if (machines.size() < 2) throw Error(name + " needs two machines");
    MachineSpec second = load_machine(machines[1]);
    r = name == "affine" ? affine_combine(first, second, rat(alpha), rat(beta))
                         : product_machine(first, second);
  } else {
    std::cerr << "unknown transform: " << name << "\n";
    return kExitUsage;
  }
  write_out(out, serialize_machine(r.spec));
  std::cerr << "transform " << r.cert.name << ": states " << r.cert.states_in << " -> "
            << r.cert.states_out << "; " << r.cert.notes << "\n";
  return kExitAccept;
}

int cmd_gap(const std::string& machine_ref, const std::string& input, bool as_json) {
  MachineSpec m = load_machine(machine_ref);
  GapPair pair = assemble_gap_pair(m, input);
  Rat p_acc = acceptance_resolvent(m, input).p_acc.cr().re;
  bool det_ok = pair.gap_n1 == pair.f1 * pair.det_t;
  bool product_ok = pair.gap_n1_prime * p_acc == pair.gap_n2;
  CombinedCutpoint comb = cutpoint_combine(pair);
  json j = json::parse(pair.to_json());
  j["command"] = "gap";
  j["inputs"] = {input};
  j["p_acc"] = rat_str(p_acc);
  j["det_identity"] = det_ok;
  j["gap_product_identity"] = product_ok;
  j["combined_p_acc"] = rat_str(comb.p_acc);
  j["combined_p_rej"] = rat_str(comb.p_rej);
  j["pass"] = det_ok && product_ok;
  if (as_json) std::cout << j.dump(2) << "\n";
  else {
    std::cout << "det identity: " << (det_ok ? "ok" : "FAIL") << "\n"
              << "gap product identity: " << (product_ok ? "ok" : "FAIL") << "\n"
              << pair.to_json() << "\n";
  }
  return det_ok && product_ok ? kExitAccept : kExitReject;
}

int cmd_zoo(const std::string& id, const std::string& out) {
  if (id.empty()) {
    for (const auto& name : zoo_ids()) std::cout << name << "\n";
    return kExitAccept;
  }
  ZooEntry e = zoo_entry(id);
  certify_zoo_entry(e);
  if (!out.empty()) {
    write_out(out, serialize_machine(e.spec));
  } else {
    json j;
    j["id"] = e.id;
    j["provenance"] = e.provenance;
    json table = json::array();
    for (const auto& row : e.expected)
      table.push_back({{"input", row.input}, {"behavior", row.behavior}});
    j["expected"] = table;
    j["machine"] = json::parse(serialize_machine(e.spec));
    std::cout << j.dump(2) << "\n";
  }
  return kExitAccept;
}

int cmd_verify(const std::string& suite, int n_max, bool as_json) {
  json results = json::array();
  bool pass = true;
  auto add = [&](const std::string& name, bool ok, const std::string& detail = "") {
    results.push_back({{"check", name}, {"pass", ok}, {"detail", detail}});
    pass = pass && ok;
  };
  if (suite == "halting") {
    std::vector<int> lens;
    for (int n = 1; n <= std::max(1, n_max); ++n) lens.push_back(n);
    LinearBoundReport rep = verify_linear_bound(machine_a3().spec, lens);
    add("a3 linear halting bound", rep.ok,
        std::to_string(rep.inputs_checked) + " inputs checked");
    LinearBoundReport rep2 =
        verify_linear_bound(machine_l_eps(Rat(1, 2)).spec, {0, 1, 2, 3, 4});
    add("one-way linear bound", rep2.ok);
  } else if (suite == "transforms") {
    MachineSpec coin = machine_coin().spec;
    auto corpus = transform_test_corpus(coin, 20);
    auto try_rel = [&](const char* name, TransformResult r,
                       std::vector<const MachineSpec*> ins) {
      try {
        check_transform_relation(r, ins, corpus);
        add(name, true);
      } catch (const Error& e) {
        add(name, false, e.what());
      }
    };
    try_rel("complement", complement(coin), {&coin});
    try_rel("half_split", half_split(coin), {&coin});
    try_rel("damp", damp(coin, Rat(9, 25)), {&coin});
    try_rel("product", product_machine(coin, coin), {&coin, &coin});
    try_rel("square_pair", square_pair(coin), {&coin});
  } else if (suite == "gap") {
    for (const char* id : {"trivial-accept", "trivial-reject", "coin"}) {
      MachineSpec m = zoo_entry(id).spec;
      for (int n = 0; n <= std::min(1, n_max); ++n) {
        std::string x(n, 'a');
        GapPair pair = assemble_gap_pair(m, x);
        Rat p_acc = acceptance_resolvent(m, x).p_acc.cr().re;
        bool ok = pair.gap_n1 == pair.f1 * pair.det_t &&
                  pair.gap_n1_prime * p_acc == pair.gap_n2;
        add(std::string(id) + " n=" + std::to_string(n), ok);
      }
    }
  } else if (suite == "zoo") {
    for (const auto& id : zoo_ids()) {
      try {
        certify_zoo_entry(zoo_entry(id));
        add(id, true);
      } catch (const Error& e) {
        add(id, false, e.what());
      }
    }
  } else {
    std::cerr << "unknown suite: " << suite << "\n";
    return kExitUsage;
  }
  json j;
  j["command"] = "verify";
  j["inputs"] = {suite};
  j["results"] = results;
  j["pass"] = pass;
  if (as_json) std::cout << j.dump(2) << "\n";
  else
    for (const auto& r : results)
      std::cout << (r["pass"].get<bool>() ? "pass  " : "FAIL  ") << r["check"].get<std::string>()
                << "\n";
  return pass ? kExitAccept : kExitReject;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-way quantum finite automata toolkit"};
  app.require_subcommand(1);

  std::string machine, input, criterion = "unbounded", method = "resolvent";
  std::string out, suite, zoo_id, alpha, beta, tname;
  std::vector<std::string> tmachines;
  long long t_max = -1;
  int n_max = 8;
  double eps = 0.25;
  bool as_json = false, spectral = false, all_to_reject = false;

  auto* run = app.add_subcommand("run", "simulate and classify an input");
  run->add_option("machine", machine)->required();
  run->add_option("input", input);
  run->add_option("--t-max", t_max);
  run->add_option("--criterion", criterion);
  run->add_flag("--json", as_json);

  auto* ap = app.add_subcommand("accept-prob", "acceptance probability by chosen method");
  ap->add_option("machine", machine)->required();
  ap->add_option("input", input);
  ap->add_option("--method", method)->check(CLI::IsMember({"series", "resolvent", "clow-check"}));
  ap->add_option("--t-max", t_max);
  ap->add_flag("--json", as_json);

  auto* an = app.add_subcommand("analyze", "dimension-chain halting analysis");
  an->add_option("machine", machine)->required();
  an->add_option("input", input);
  an->add_option("--eps", eps);
  an->add_flag("--spectral", spectral);

  auto* tr = app.add_subcommand("transform", "apply a machine transform");
  tr->add_option("name", tname)->required();
  tr->add_option("machines", tmachines)->expected(1, 2);
  tr->add_option("--alpha", alpha);
  tr->add_option("--beta", beta);
  tr->add_flag("--all-to-reject", all_to_reject);
  tr->add_option("--out", out);

  auto* gp = app.add_subcommand("gap", "assemble and verify the gap-simulation pair");
  gp->add_option("machine", machine)->required();
  gp->add_option("input", input);
  gp->add_flag("--json", as_json);

  auto* vf = app.add_subcommand("verify", "run an invariant suite");
  vf->add_option("--suite", suite)->required();
  vf->add_option("--n-max", n_max);
  vf->add_flag("--json", as_json);

  auto* zc = app.add_subcommand("zoo", "list or export built-in machines");
  zc->add_option("id", zoo_id);
  zc->add_option("--out", out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (run->parsed()) return cmd_run(machine, input, t_max, criterion, as_json);
    if (ap->parsed()) return cmd_accept_prob(machine, input, method, t_max, as_json);
    if (an->parsed()) return cmd_analyze(machine, input, eps, spectral);
    if (tr->parsed()) return cmd_transform(tname, tmachines, alpha, beta, all_to_reject, out);
    if (gp->parsed()) return cmd_gap(machine, input, as_json);
    if (vf->parsed()) return cmd_verify(suite, n_max, as_json);
    if (zc->parsed()) return cmd_zoo(zoo_id, out);
  } catch (const MachineParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitError;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitError;
  }
  return kExitUsage;
}
