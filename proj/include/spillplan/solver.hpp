#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "spillplan/backbone.hpp"
#include "spillplan/scenario.hpp"
#include "spillplan/trajectory.hpp"

namespace spillplan {

// second[h] is the point-2 boom action taken in hypothesis class h. Blind
// (disperse) policies hold one entry used for every class; surveil
// policies hold one entry per class. kNoAction encodes "no boom".
struct Policy {
  std::size_t first = kNoAction;
  AircraftKind aircraft = AircraftKind::Surveil;
  std::vector<std::size_t> second{kNoAction};

  static Policy none() { return {}; }
  bool contingent() const { return aircraft == AircraftKind::Surveil; }
  std::size_t second_for(std::size_t hypothesis) const {
    return second.size() == 1 ? second.front() : second.at(hypothesis);
  }
  bool operator==(const Policy&) const = default;
};

// Rows: second-period boom action; cols: aircraft (stage 2) or first-period
// action (stage 1). Missing cells were not evaluated (best-practice stars).
struct ReturnTable {
  int stage = 2;
  std::string title;
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
  std::vector<std::vector<std::optional<double>>> values;
  std::optional<std::pair<std::size_t, std::size_t>> optimal_cell;
};

struct PlanValue {
  std::size_t first = kNoAction;
  AircraftKind aircraft = AircraftKind::Surveil;
  std::size_t second = kNoAction;
  std::string label;
  double value = 0.0;  // normalised expectation with a fixed second action
};

struct SolveResult {
  std::string method;
  Policy optimal_policy;
  std::string policy_label;
  double value = 0.0;
  int evaluations_bruteforce = 0;
  int evaluations_staged = 0;
  std::vector<PlanValue> plans;
  std::vector<ReturnTable> stage_tables;
};

class DegenerateScenario : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Precomputed per-hypothesis transition sets and the no-action baseline.
class PolicyEvaluator {
 public:
  // Throws DegenerateScenario when the no-action sensitive-shore mass is 0.
  PolicyEvaluator(const Scenario& s, const DecisionBackbone& b);

  const Scenario& scenario() const { return *s_; }
  const DecisionBackbone& backbone() const { return *b_; }
  std::size_t hypothesis_count() const { return weights_.size(); }
  const std::vector<double>& weights() const { return weights_; }
  const TransitionSet& transitions(std::size_t h) const { return transitions_[h]; }
  double baseline() const { return baseline_; }

  // Terminal sensitive-shore mass for one plan, one entry per hypothesis.
  // Surveil plans run in the observed regime (knowledge collapse).
  std::vector<double> plan_masses(std::size_t first, AircraftKind aircraft,
                                  std::size_t second) const;
  double plan_mass(std::size_t hypothesis, std::size_t first, AircraftKind aircraft,
                   std::size_t second) const;

  double normalised(const std::vector<double>& masses) const;

 private:
  const Scenario* s_;
  const DecisionBackbone* b_;
  std::vector<double> weights_;
  std::vector<TransitionSet> transitions_;
  double baseline_ = 0.0;
};

std::string policy_label(const DecisionBackbone& b, const Policy& p);
std::string plan_label(const DecisionBackbone& b, std::size_t first, AircraftKind aircraft,
                       std::size_t second);

// Parses "none" or "<first>-<aircraft>-<second>" into a fixed-second policy.
std::optional<Policy> parse_policy(const DecisionBackbone& b, const std::string& name);
std::vector<std::string> policy_names(const DecisionBackbone& b);

// Objective fraction in [0,1]: expected sensitive-shore mass under p over
// the same under the no-action policy.
double evaluate_plan(const Scenario& s, const DecisionBackbone& b, const Policy& p);
double evaluate_plan(const PolicyEvaluator& ev, const Policy& p);

enum class Parallelism { Serial, OpenMP };

// Evaluates every (first, aircraft, second) plan by full forward runs.
SolveResult brute_force(const Scenario& s, const DecisionBackbone& b,
                        Parallelism par = Parallelism::OpenMP);

// Bellman backward induction: one adjoint sweep per stage-2 composite
// action gives its return function over all states at the decision
// period; one forward run per first action reaches that state.
SolveResult backward_induct(const Scenario& s, const DecisionBackbone& b,
                            Parallelism par = Parallelism::OpenMP);

ReturnTable stage_return_table(const Scenario& s, const DecisionBackbone& b, int stage);
ReturnTable stage_return_table(const PolicyEvaluator& ev, int stage);

struct SurveillanceValue {
  double net_voi = 0.0;  // best disperse - best surveil; negative: surveillance loses
  double free_voi = 0.0;   // blind best - best with a free observation, aircraft dispersing
};

SurveillanceValue value_of_surveillance(const Scenario& s, const DecisionBackbone& b);

nlohmann::ordered_json to_json(const SolveResult& r);
nlohmann::ordered_json to_json(const ReturnTable& t);

}  // namespace spillplan
