#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "spillplan/equipment.hpp"
#include "spillplan/scenario.hpp"

namespace spillplan {

// Enum order is the solver's tie-break order.
enum class StrategyName { Equal, Stabilize, Protect, Chase, None };

const char* to_string(StrategyName n);

// Target sector id (the ship's sector or a sensitive area) -> coverage.
struct Strategy {
  StrategyName name = StrategyName::None;
  std::map<std::string, int> boom_allocation;

  bool operator==(const Strategy&) const = default;
};

// A single boom able to reach a target before the horizon, with the
// coverage it provides there on its own.
struct BoomOption {
  std::string boom;
  std::string target;
  int coverage = 0;
  int arrival = 0;

  bool operator==(const BoomOption&) const = default;
};

// A strategy realised with concrete booms for one decision point.
struct BoomAction {
  Strategy strategy;
  int stage = 1;
  std::string label;
  std::map<std::string, std::string> placement;  // boom id -> target sector id
  std::vector<BoomAssignment> assignments;
  std::vector<Relocation> relocations;
  std::vector<std::string> notes;

  int coverage_at(const std::string& target) const {
    auto it = strategy.boom_allocation.find(target);
    return it == strategy.boom_allocation.end() ? 0 : it->second;
  }
};

enum class PruneReason { Dominance, InfeasibleByArrival, BestPractice };

const char* to_string(PruneReason r);

struct PrunedEntry {
  std::string action;
  PruneReason reason = PruneReason::Dominance;
  std::string detail;
};

struct DecisionPoint {
  int index = 1;
  int period = 0;
  std::vector<BoomAction> boom_actions;
  std::vector<AircraftKind> aircraft_options;  // empty at point 1
  std::vector<std::string> observes;

  std::size_t composite_count() const {
    return boom_actions.size() * std::max<std::size_t>(aircraft_options.size(), 1);
  }
};

struct DecisionBackbone {
  std::vector<DecisionPoint> points;
  std::vector<PrunedEntry> pruned;
  int decision_period = 1;        // period of decision point 2 / aircraft sortie
  std::string dispersant_target;  // sea sector hit by the dispersant sortie
  std::vector<int> oil_arrival;   // per sector, from the unobserved no-action trace
  // (point-1 index, point-2 boom index) pairs that move boom against the
  // spreading direction. They stay in the policy space; tables star them.
  std::set<std::pair<std::size_t, std::size_t>> best_practice_pairs;

  const DecisionPoint& first() const { return points.at(0); }
  const DecisionPoint& second() const { return points.at(1); }
  std::size_t policy_space_size() const {
    return first().boom_actions.size() * second().composite_count();
  }
};

class BackboneError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Every boom/target pair reachable before the horizon (depart at period 0),
// ordered by arrival, then coverage, then boom id.
std::vector<BoomOption> enumerate_feasible(const Scenario& s);

struct OptionPruning {
  std::vector<BoomOption> kept;
  std::vector<PrunedEntry> pruned;
};

// Keeps the earliest-arriving boom per (target, coverage).
OptionPruning prune_dominated(const std::vector<BoomOption>& options);

struct ActionPruning {
  std::vector<BoomAction> kept;
  std::vector<PrunedEntry> pruned;
};

// Among realisations of the same strategy, drops any whose arrival at every
// target is no earlier than another's. Exact arrival ties keep the first.
ActionPruning prune_dominated(const std::vector<BoomAction>& actions);

// Target coverage maps for the named strategies; the smallest sensitive
// area is the one with the smallest span.
Strategy make_strategy(const Scenario& s, StrategyName name);

// All single-boom-per-target realisations of a strategy for one stage.
// `prefer_dominant` = false disables dominance pruning (for soundness
// checks); the caller then sees every realisation.
std::vector<BoomAction> realise_strategy(const Scenario& s, const Strategy& strategy, int stage,
                                         int decision_period, bool prefer_dominant = true);

struct BackboneOptions {
  bool dominance_pruning = true;
};

// Two decision points: point 1 at period 0 (equal/stabilize/protect),
// point 2 at the aircraft sortie period (surveil|disperse x
// equal/stabilize/protect/chase). Throws BackboneError for unsupported
// structures (not exactly one aircraft, no sensitive area, sortie period
// outside the horizon).
DecisionBackbone build_backbone(const Scenario& s, const BackboneOptions& opts = {});

// Deployment for one plan. `first`/`second` index into the points' boom
// actions; kNoAction means no boom at that point.
inline constexpr std::size_t kNoAction = static_cast<std::size_t>(-1);

Deployment plan_deployment(const DecisionBackbone& b, std::size_t first, AircraftKind aircraft,
                           std::size_t second);

}  // namespace spillplan
