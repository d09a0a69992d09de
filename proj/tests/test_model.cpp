#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "qfa/machine.hpp"
#include "qfa/zoo.hpp"

using namespace qfa;

namespace {

const char* kMinimal = R"({
  "kind": "qfa",
  "heads": 1,
  "states": ["q0"],
  "initial": "q0",
  "accepting": ["q0"],
  "rejecting": [],
  "alphabet": ["a"],
  "transitions": [
    {"from": "q0", "scan": ["<"], "to": "q0", "move": [1], "weight": "1/1"},
    {"from": "q0", "scan": ["a"], "to": "q0", "move": [1], "weight": "1/1"},
    {"from": "q0", "scan": [">"], "to": "q0", "move": [1], "weight": "1/1"}
  ]
})";

}  // namespace

TEST_CASE("minimal one-state machine parses") {
  MachineSpec m = parse_machine(kMinimal);
  CHECK(m.states.size() == 1);
  CHECK(m.kind == Kind::QFA);
  CHECK(m.accepting.count(0) == 1);
  CHECK(m.transitions.size() == 3);
}

TEST_CASE("zoo machines round-trip through the serializer") {
  for (const auto& id : {"a3", "coin", "l_eps(1/2)", "rotation"}) {
    MachineSpec m = zoo_entry(id).spec;
    std::string once = serialize_machine(m);
    MachineSpec again = parse_machine(once);
    std::string twice = serialize_machine(again);
    CHECK(once == twice);
    CHECK(serialize_machine(parse_machine(twice)) == twice);
  }
}

TEST_CASE("arity mismatches are rejected") {
  std::string bad = kMinimal;
  // two-head machine with one-entry tuples
  bad.replace(bad.find("\"heads\": 1"), 10, "\"heads\": 2");
  CHECK_THROWS_AS(parse_machine(bad), MachineParseError);
}

TEST_CASE("unknown states and symbols are rejected") {
  std::string bad = kMinimal;
  bad.replace(bad.find("\"initial\": \"q0\""), 15, "\"initial\": \"qX\"");
  CHECK_THROWS_AS(parse_machine(bad), MachineParseError);
  std::string bad2 = kMinimal;
  bad2.replace(bad2.find("\"scan\": [\"a\"]"), 13, "\"scan\": [\"b\"]");
  CHECK_THROWS_AS(parse_machine(bad2), MachineParseError);
}

TEST_CASE("pfa weights outside [0,1] are rejected") {
  std::string bad = kMinimal;
  bad.replace(bad.find("\"kind\": \"qfa\""), 13, "\"kind\": \"pfa\"");
  bad.replace(bad.find("\"weight\": \"1/1\""), 15, "\"weight\": \"-1/2\"");
  CHECK_THROWS_AS(parse_machine(bad), MachineParseError);
}

TEST_CASE("validation: zoo a3 is an exact permutation up to n = 12") {
  ValidationReport rep = validate_wellformed(zoo_entry("a3").spec, 12);
  CHECK(rep.all_ok);
  CHECK(rep.is_unitary);
  CHECK(rep.max_deviation == 0.0);
}

TEST_CASE("validation: l_eps(1/2) columns sum to one exactly up to n = 8") {
  ValidationReport rep = validate_wellformed(zoo_entry("l_eps(1/2)").spec, 8);
  CHECK(rep.all_ok);
  CHECK(rep.is_stochastic);
  CHECK(rep.max_deviation == 0.0);
}

TEST_CASE("validation flags a non-unitary column") {
  // amplitude (1,1) on two outgoing edges: column norm 2
  std::string bad = R"({
    "kind": "qfa", "heads": 1,
    "states": ["q0", "qa", "qb"], "initial": "q0",
    "accepting": ["qa"], "rejecting": ["qb"],
    "alphabet": ["a"],
    "transitions": [
      {"from": "q0", "scan": ["<"], "to": "qa", "move": [1], "weight": "1/1"},
      {"from": "q0", "scan": ["<"], "to": "qb", "move": [1], "weight": "1/1"}
    ]
  })";
  ValidationReport rep = validate_wellformed(parse_machine(bad), 1);
  CHECK_FALSE(rep.all_ok);
  CHECK(rep.max_deviation > 0.5);
}

TEST_CASE("validation passing at n_max implies passing at every shorter length") {
  ValidationReport rep = validate_wellformed(zoo_entry("coin").spec, 6);
  REQUIRE(rep.all_ok);
  for (const auto& chk : rep.lengths) CHECK(chk.ok);
}

TEST_CASE("exact machines validate with zero deviation, never within tolerance") {
  for (const auto& id : {"coin", "trivial-accept", "spinner", "leaky(9/25)"}) {
    ValidationReport rep = validate_wellformed(zoo_entry(id).spec, 5);
    CHECK(rep.all_ok);
    CHECK(rep.max_deviation == 0.0);
  }
}

TEST_CASE("float machines validate within 1e-9") {
  ValidationReport rep = validate_wellformed(zoo_entry("rotation").spec, 5);
  CHECK(rep.all_ok);
  CHECK(rep.max_deviation <= 1e-9);
}
