#include <doctest.h>

#include <numeric>

#include "spillplan/backbone.hpp"
#include "spillplan/trajectory.hpp"
#include "support.hpp"

using namespace spillplan;
using testsupport::json;

namespace {

// A -> B, B a shore sector.
Scenario two_sector(double rate) {
  json doc = {
      {"sectors", {{{"id", "A"}, {"kind", "sea"}, {"span", 100}}, {{"id", "B"}, {"kind", "shore"}, {"sensitive", true}, {"span", 100}}}},
      {"adjacency", json::array({json::array({"A", "B"})})},
      {"source", "A"},
      {"spill", {{"rate", 10}, {"duration", 1}}},
      {"physics", {{"horizon", 4}, {"spread_rate", rate}, {"uncertainty_factor", 0.0}}},
      {"inventory", {{"booms", json::array()}, {"aircraft", {{"prep_time", 1}, {"dispersant_efficiency", 0.5}}}}}};
  return parse_scenario(doc.dump());
}

// Fan-out DAG with spread_rate 1: every sea sector empties each period.
Scenario flushing_dag() {
  json doc = {
      {"sectors",
       {{{"id", "S1"}, {"kind", "sea"}, {"span", 100}},
        {{"id", "S2"}, {"kind", "sea"}, {"span", 100}},
        {{"id", "S3"}, {"kind", "sea"}, {"span", 100}},
        {{"id", "H1"}, {"kind", "shore"}, {"sensitive", true}, {"span", 100}},
        {{"id", "H2"}, {"kind", "shore"}, {"span", 100}}}},
      {"adjacency", json::array({json::array({"S1", "S2"}), json::array({"S1", "S3"}),
                             json::array({"S2", "H1"}), json::array({"S3", "H1"}),
                             json::array({"S3", "H2"})})},
      {"source", "S1"},
      {"spill", {{"rate", 250}, {"duration", 3}}},
      {"physics", {{"horizon", 8}, {"spread_rate", 1.0}, {"uncertainty_factor", 0.0}}},
      {"inventory", {{"booms", json::array()}, {"aircraft", {{"prep_time", 1}, {"dispersant_efficiency", 0.5}}}}}};
  return parse_scenario(doc.dump());
}

Deployment surveil_only() { return Deployment{{}, AircraftAction{AircraftKind::Surveil, "", 1}, {}}; }

}  // namespace

TEST_CASE("matrix basics") {
  const auto i3 = Matrix::identity(3);
  CHECK(is_row_stochastic(i3));
  Matrix m(3);
  m(0, 1) = 1.0;
  m(1, 2) = 1.0;
  m(2, 2) = 1.0;
  CHECK(multiply(i3, m) == m);
  CHECK(multiply(m, i3) == m);
  const auto m2 = multiply(m, m);
  CHECK(m2(0, 2) == 1.0);
  const std::vector<double> v{1, 2, 3};
  CHECK(left_multiply(v, m) == std::vector<double>{0, 1, 5});
  CHECK(right_multiply(m, v) == std::vector<double>{2, 3, 3});
  CHECK_THROWS_AS(multiply(i3, Matrix::identity(2)), std::invalid_argument);
  Matrix bad(2);
  bad(0, 0) = 0.5;
  bad(1, 1) = 1.0;
  CHECK_FALSE(is_row_stochastic(bad));
}

TEST_CASE("zero spreading is the identity") {
  auto s = testsupport::load_demo();
  CHECK(spreading_matrix(s, 0.0) == Matrix::identity(s.sector_count()));
}

TEST_CASE("zero uncertainty leaves the observed matrices unchanged") {
  auto s = testsupport::load_demo();
  s.uncertainty_factor = 0.0;
  const auto t = build_transitions(s);
  CHECK(t.uncertainty == Matrix::identity(s.sector_count()));
  for (int j = 0; j < s.horizon; ++j) CHECK(t.uncertain[j] == t.observed[j]);
}

TEST_CASE("demo spreading matrix entries") {
  const auto s = testsupport::load_demo();
  const auto m = spreading_matrix(s, 0.6);
  const auto s1 = s.require_index("S1"), s2 = s.require_index("S2"), s4 = s.require_index("S4");
  CHECK(m(s1, s1) == doctest::Approx(0.4));
  CHECK(m(s1, s2) == doctest::Approx(0.3));
  CHECK(m(s2, s4) == doctest::Approx(0.2));
  const auto h2 = s.require_index("H2");
  CHECK(m(h2, h2) == 1.0);
  CHECK(m(h2, s2) == 0.0);
}

TEST_CASE("transition rows sum to one, demo and random") {
  const auto demo = testsupport::load_demo();
  std::vector<Scenario> all{demo};
  std::mt19937_64 rng(11);
  for (int i = 0; i < 50; ++i) all.push_back(testsupport::random_scenario(rng));
  for (const auto& s : all) {
    const auto t = build_transitions(s);
    for (int j = 0; j < s.horizon; ++j) {
      CHECK(is_row_stochastic(t.observed[j], 1e-9));
      CHECK(is_row_stochastic(t.uncertain[j], 1e-9));
    }
  }
}

TEST_CASE("spread profile scales the rate per period") {
  auto s = two_sector(0.5);
  s.spread_profile = {1.0, 0.0, 2.0, 1.0};
  const auto t = build_transitions(s);
  CHECK(t.observed[0](0, 1) == 0.5);
  CHECK(t.observed[1](0, 1) == 0.0);
  CHECK(t.observed[2](0, 1) == 1.0);
}

TEST_CASE("propagate moves thirty percent") {
  const auto s = two_sector(0.3);
  const auto m = spreading_matrix(s, 0.3);
  OilState st{{10.0, 0.0}, {0.0, 0.0}, 0.5, 0};
  const std::vector<double> none{0.0, 0.0};
  const auto next = propagate(st, m, none);
  CHECK(next.quantities[0] == doctest::Approx(7.0));
  CHECK(next.quantities[1] == doctest::Approx(3.0));
  CHECK(next.period == 1);
  CHECK(next.landed[1] == 0.0);
  const auto after = propagate(next, m, none);
  CHECK(after.landed[1] == doctest::Approx(3.0));
  CHECK(after.quantities[1] == doctest::Approx(5.1));
}

TEST_CASE("propagate with full removal empties the state") {
  const auto s = two_sector(0.3);
  const auto m = spreading_matrix(s, 0.3);
  OilState st{{10.0, 4.0}, {0.0, 0.0}, 0.5, 0};
  const std::vector<double> all{10.0, 4.0};
  const auto next = propagate(st, m, all);
  CHECK(next.total() == 0.0);
}

TEST_CASE("propagate rejects impossible removals") {
  const auto s = two_sector(0.3);
  const auto m = spreading_matrix(s, 0.3);
  OilState st{{10.0, 0.0}, {0.0, 0.0}, 0.5, 0};
  const std::vector<double> too_much{10.5, 0.0};
  const std::vector<double> negative{-1.0, 0.0};
  const std::vector<double> short_vec{1.0};
  CHECK_THROWS_AS(propagate(st, m, too_much), std::invalid_argument);
  CHECK_THROWS_AS(propagate(st, m, negative), std::invalid_argument);
  CHECK_THROWS_AS(propagate(st, m, short_vec), std::invalid_argument);
}

TEST_CASE("flushing DAG delivers every barrel to shore") {
  const auto s = flushing_dag();
  const auto tr = run_trajectory(s, surveil_only(), std::nullopt);
  const auto& end = tr.states.back();
  CHECK(shore_mass(s, end) == doctest::Approx(750.0).epsilon(1e-12));
  CHECK(end.total() == doctest::Approx(750.0).epsilon(1e-12));
  // S1 -> S2 -> H1 carries half; S1 -> S3 splits the other half.
  CHECK(sensitive_mass(s, end) == doctest::Approx(750.0 * 0.75));
}

TEST_CASE("trace layout") {
  const auto s = testsupport::load_demo();
  const auto tr = run_trajectory(s, surveil_only(), std::nullopt);
  CHECK(tr.states.size() == static_cast<std::size_t>(s.horizon) + 1);
  CHECK(tr.removals.size() == static_cast<std::size_t>(s.horizon));
  CHECK(tr.states.front().total() == 0.0);
  CHECK(std::accumulate(tr.injections.begin(), tr.injections.end(), 0.0) == 4000.0);
  CHECK_THROWS_AS(run_trajectory(s, surveil_only(), s.horizon), std::out_of_range);
  CHECK_THROWS_AS(run_trajectory(s, surveil_only(), -1), std::out_of_range);
}

TEST_CASE("observation narrows the spread at the decision period") {
  const auto s = testsupport::load_demo();
  const auto blind = run_trajectory(s, surveil_only(), std::nullopt);
  const auto seen = run_trajectory(s, surveil_only(), 2);
  const int t2 = 3;
  CHECK(support(seen.states[t2]).size() < support(blind.states[t2]).size());
}

// Shore booms collect freshly arrived oil, so the absorbed total counts
// that collection alongside what is still on the shore.
TEST_CASE("mass balance, monotone absorption and linearity under deployments") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 40; ++i) {
    const auto s = testsupport::random_scenario(rng);
    const auto b = build_backbone(s);
    const auto d = plan_deployment(b, 0, AircraftKind::Disperse, b.second().boom_actions.size() - 1);
    for (bool observed : {false, true}) {
      const auto tr = run_trajectory(s, d, observed ? std::optional<int>(0) : std::nullopt);
      double collected = 0.0;
      for (int j = 0; j < s.horizon; ++j) {
        const double before = shore_mass(s, tr.states[j]) + collected;
        for (std::size_t k = 0; k < s.sector_count(); ++k) {
          if (s.is_shore(k)) collected += tr.removals[j][k];
        }
        const double removed = std::accumulate(tr.removals[j].begin(), tr.removals[j].end(), 0.0);
        const double expect = tr.states[j].total() + tr.injections[j] - removed;
        CHECK(std::abs(tr.states[j + 1].total() - expect) <= 1e-9 * std::max(1.0, expect));
        CHECK(shore_mass(s, tr.states[j + 1]) + collected >= before - 1e-9);
      }
      auto scaled = s;
      scaled.spill_rate *= 3.0;
      const auto tr3 = run_trajectory(scaled, d, observed ? std::optional<int>(0) : std::nullopt);
      for (std::size_t k = 0; k < s.sector_count(); ++k) {
        CHECK(tr3.states.back().quantities[k] ==
              doctest::Approx(3.0 * tr.states.back().quantities[k]).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("forward runs agree with the longhand reference") {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 40; ++i) {
    const auto s = testsupport::random_scenario(rng);
    const auto b = build_backbone(s);
    for (auto a : {AircraftKind::Surveil, AircraftKind::Disperse}) {
      const auto d = plan_deployment(b, 0, a, 0);
      const bool observed = a == AircraftKind::Surveil;
      const auto tr = run_trajectory(s, d, observed ? std::optional<int>(0) : std::nullopt);
      const double ref = testsupport::reference_terminal_mass(s, s.spread_rate, observed, d);
      CHECK(sensitive_mass(s, tr.states.back()) == doctest::Approx(ref).epsilon(1e-12));
    }
  }
}

TEST_CASE("adjoint functional matches forward runs from any period") {
  const auto s = testsupport::load_demo();
  const auto b = build_backbone(s);
  const auto t = build_transitions(s);
  for (std::size_t k = 0; k < b.second().boom_actions.size(); ++k) {
    const auto d = plan_deployment(b, 1, AircraftKind::Disperse, k);
    const auto tr = run_trajectory(s, t, d, std::nullopt);
    const double terminal = sensitive_mass(s, tr.states.back());
    for (int from : {0, 3, 4, 10, s.horizon}) {
      const auto v = terminal_value_functional(s, t.uncertain, d, from);
      CHECK(v.period == from);
      CHECK(v.evaluate(tr.states[from]) == doctest::Approx(terminal).epsilon(1e-12));
    }
  }
}

TEST_CASE("advance resumes a trace") {
  const auto s = testsupport::load_demo();
  const auto t = build_transitions(s);
  const auto d = surveil_only();
  const auto tr = run_trajectory(s, t, d, std::nullopt);
  const auto end = advance(s, t.uncertain, d, tr.states[5], s.horizon);
  CHECK(end.period == s.horizon);
  for (std::size_t k = 0; k < s.sector_count(); ++k) {
    CHECK(end.quantities[k] == tr.states.back().quantities[k]);
  }
  CHECK_THROWS_AS(advance(s, t.uncertain, d, tr.states[0], s.horizon + 1), std::out_of_range);
}
