#include <doctest.h>

#include <algorithm>
#include <fstream>

#include "spillplan/scenario.hpp"
#include "support.hpp"

using namespace spillplan;
using testsupport::json;

namespace {

json demo_json() {
  std::ifstream in(testsupport::demo_path());
  return json::parse(in);
}

bool mentions(const std::vector<std::string>& errs, const std::string& needle) {
  return std::any_of(errs.begin(), errs.end(),
                     [&](const std::string& e) { return e.find(needle) != std::string::npos; });
}

std::string error_of(const json& doc) {
  try {
    parse_scenario(doc.dump());
  } catch (const ScenarioError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("demo loads with twelve sectors and three sensitive areas") {
  const auto s = testsupport::load_demo();
  CHECK(s.sector_count() == 12);
  CHECK(s.source == "S1");
  CHECK(s.sensitive_targets == std::vector<std::string>{"H2", "H4", "H6"});
  CHECK(s.inventory.booms.size() == 4);
  CHECK(s.inventory.aircraft.size() == 1);
  CHECK(validate(s).empty());
}

TEST_CASE("serialize then parse gives the same scenario") {
  const auto s = testsupport::load_demo();
  const auto again = parse_scenario(serialize_scenario(s));
  CHECK(again == s);
  CHECK(serialize_scenario(again) == serialize_scenario(s));
}

TEST_CASE("injection follows the spill duration") {
  const auto s = testsupport::load_demo();
  CHECK(s.injection(0) == 1000.0);
  CHECK(s.injection(3) == 1000.0);
  CHECK(s.injection(4) == 0.0);
}

TEST_CASE("thickness falls back to the default") {
  auto doc = demo_json();
  doc["physics"]["thickness"] = {{"default", 1.5}, {"sectors", {{"S2", 0.5}}}};
  const auto s = parse_scenario(doc.dump());
  CHECK(s.thickness_at(s.require_index("S2")) == 0.5);
  CHECK(s.thickness_at(s.require_index("S3")) == 1.5);
}

TEST_CASE("hypotheses default to the nominal spread rate") {
  auto doc = demo_json();
  doc["physics"].erase("hypotheses");
  const auto s = parse_scenario(doc.dump());
  const auto h = s.effective_hypotheses();
  REQUIRE(h.size() == 1);
  CHECK(h[0].weight == 1.0);
  CHECK(h[0].spread_rate == 0.6);
}

TEST_CASE("out of range spread rate is named") {
  auto s = testsupport::load_demo();
  s.spread_rate = 1.5;
  CHECK(mentions(validate(s), "spread_rate: out of [0,1]"));
}

TEST_CASE("shore sector with an outgoing edge is rejected") {
  auto s = testsupport::load_demo();
  s.adjacency.emplace_back("H1", "S2");
  CHECK(mentions(validate(s), "shore sector has an outgoing edge"));
}

TEST_CASE("sensitive flag on a sea sector is rejected") {
  auto s = testsupport::load_demo();
  s.sectors[1].sensitive = true;
  CHECK(mentions(validate(s), "sensitive flag only allowed on shore sectors"));
}

TEST_CASE("validation table") {
  struct Case {
    const char* name;
    void (*mutate)(Scenario&);
    const char* expect;
  };
  const Case cases[] = {
      {"source on shore", [](Scenario& s) { s.source = "H1"; }, "source: source must be a sea sector"},
      {"unknown source", [](Scenario& s) { s.source = "X"; }, "source: unknown sector"},
      {"horizon", [](Scenario& s) { s.horizon = 1; }, "horizon_T: must be >= 2"},
      {"duration", [](Scenario& s) { s.spill_duration = 30; }, "spill_duration: must be <= horizon_T"},
      {"decay", [](Scenario& s) { s.natural_decay = -0.1; }, "natural_decay: out of [0,1]"},
      {"weights", [](Scenario& s) { s.hypotheses[0].weight = 0.5; }, "hypotheses: weights must sum to 1"},
      {"no aircraft", [](Scenario& s) { s.inventory.aircraft.clear(); }, "exactly one aircraft required"},
      {"two aircraft", [](Scenario& s) { s.inventory.aircraft.push_back({}); }, "exactly one aircraft required"},
      {"leak-proof boom", [](Scenario& s) { s.inventory.containment.max_fraction = 1.0; },
       "inventory.containment.max_fraction"},
      {"relocation", [](Scenario& s) { s.inventory.relocation_delay = 0; }, "inventory.relocation_delay"},
      {"self loop", [](Scenario& s) { s.adjacency.emplace_back("S2", "S2"); }, "self loop"},
      {"profile length", [](Scenario& s) { s.spread_profile = {1.0}; }, "spread_profile: length"},
  };
  for (const auto& c : cases) {
    CAPTURE(c.name);
    auto s = testsupport::load_demo();
    c.mutate(s);
    CHECK(mentions(validate(s), c.expect));
  }
}

TEST_CASE("unknown keys are rejected with their path") {
  auto doc = demo_json();
  doc["physics"]["wind"] = 3;
  CHECK(error_of(doc) == "physics.wind: unknown key");
  doc = demo_json();
  doc["extra"] = true;
  CHECK(error_of(doc) == "extra: unknown key");
}

TEST_CASE("missing keys and wrong types are parse errors") {
  auto doc = demo_json();
  doc.erase("source");
  CHECK(error_of(doc).find("source") != std::string::npos);
  doc = demo_json();
  doc["spill"]["duration"] = 4.5;
  CHECK(error_of(doc) == "spill.duration: expected an integer");
}

TEST_CASE("malformed text and missing files raise parse errors") {
  try {
    parse_scenario("{ not json");
    FAIL("expected a parse error");
  } catch (const ScenarioError& e) {
    CHECK(e.kind() == ScenarioError::Kind::Parse);
  }
  CHECK_THROWS_AS(load_scenario("/nonexistent/scenario.json"), ScenarioError);
}

TEST_CASE("validation failures carry the validation kind") {
  auto doc = demo_json();
  doc["physics"]["spread_rate"] = 2.0;
  try {
    parse_scenario(doc.dump());
    FAIL("expected a validation error");
  } catch (const ScenarioError& e) {
    CHECK(e.kind() == ScenarioError::Kind::Validation);
    CHECK(std::string(e.what()).find("spread_rate: out of [0,1]") != std::string::npos);
  }
}

TEST_CASE("random scenarios are valid") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    const auto s = testsupport::random_scenario(rng);
    CHECK(s.sector_count() <= 6);
    CHECK(validate(s).empty());
  }
}
