#include "spillplan/backbone.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <tuple>

#include <fmt/core.h>

#include "spillplan/trajectory.hpp"

namespace spillplan {

const char* to_string(StrategyName n) {
  switch (n) {
    case StrategyName::Equal: return "equal";
    case StrategyName::Stabilize: return "stabilize";
    case StrategyName::Protect: return "protect";
    case StrategyName::Chase: return "chase";
    case StrategyName::None: return "none";
  }
  return "?";
}

const char* to_string(PruneReason r) {
  switch (r) {
    case PruneReason::Dominance: return "dominance";
    case PruneReason::InfeasibleByArrival: return "infeasible-by-arrival";
    case PruneReason::BestPractice: return "best-practice";
  }
  return "?";
}

namespace {

// Ship first, then sensitive areas in file order.
std::vector<std::string> boom_targets(const Scenario& s) {
  std::vector<std::string> t{s.source};
  for (const auto& id : s.sensitive_targets) t.push_back(id);
  return t;
}

std::vector<std::string> sensitive_by_span(const Scenario& s) {
  std::vector<std::string> ids = s.sensitive_targets;
  std::stable_sort(ids.begin(), ids.end(), [&](const auto& a, const auto& b) {
    return s.sectors[s.require_index(a)].span < s.sectors[s.require_index(b)].span;
  });
  return ids;
}

int length_coverage(const Boom& b, double span) {
  return std::min(3, static_cast<int>(std::floor(b.length / span + 1e-9)));
}

std::optional<int> reach(const Scenario& s, const Boom& b, const std::string& target) {
  if (!b.transit_time.contains(target)) return std::nullopt;
  const int a = arrival_period(s.inventory, b.id, target, 0);
  if (a >= s.horizon) return std::nullopt;
  return a;
}

bool target_reachable(const Scenario& s, const std::string& target) {
  const double span = s.sectors[s.require_index(target)].span;
  return std::any_of(s.inventory.booms.begin(), s.inventory.booms.end(), [&](const Boom& b) {
    return reach(s, b, target) && length_coverage(b, span) >= 1;
  });
}

std::optional<std::string> defining_target(const Scenario& s, StrategyName n) {
  switch (n) {
    case StrategyName::Stabilize: return s.source;
    case StrategyName::Protect:
    case StrategyName::Chase: {
      auto ids = sensitive_by_span(s);
      if (ids.empty()) return std::nullopt;
      return ids.front();
    }
    default: return std::nullopt;
  }
}

struct Realisation {
  std::vector<std::pair<std::string, std::string>> placement;  // target -> boom, target order
  std::vector<int> arrivals;                                   // per target
};

bool dominates(const std::vector<int>& a, const std::vector<int>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i]) return false;
  }
  return true;
}

BoomAction none_action(int stage) {
  BoomAction a;
  a.strategy.name = StrategyName::None;
  a.stage = stage;
  a.label = "none";
  return a;
}

}  // namespace

std::vector<BoomOption> enumerate_feasible(const Scenario& s) {
  std::vector<BoomOption> out;
  const auto targets = boom_targets(s);
  for (const auto& b : s.inventory.booms) {
    for (const auto& t : targets) {
      auto a = reach(s, b, t);
      if (!a) continue;
      const int coverage = length_coverage(b, s.sectors[s.require_index(t)].span);
      if (coverage == 0) continue;  // under 1x is useless
      out.push_back({b.id, t, coverage, *a});
    }
  }
  auto target_rank = [&](const std::string& t) {
    return std::find(targets.begin(), targets.end(), t) - targets.begin();
  };
  std::stable_sort(out.begin(), out.end(), [&](const BoomOption& x, const BoomOption& y) {
    return std::make_tuple(x.arrival, x.coverage, x.boom, target_rank(x.target)) <
           std::make_tuple(y.arrival, y.coverage, y.boom, target_rank(y.target));
  });
  return out;
}

OptionPruning prune_dominated(const std::vector<BoomOption>& options) {
  OptionPruning r;
  std::map<std::pair<std::string, int>, const BoomOption*> best;
  for (const auto& o : options) {
    auto key = std::make_pair(o.target, o.coverage);
    auto it = best.find(key);
    if (it == best.end() || std::tie(o.arrival, o.boom) < std::tie(it->second->arrival, it->second->boom)) {
      best[key] = &o;
    }
  }
  for (const auto& o : options) {
    const BoomOption* winner = best.at({o.target, o.coverage});
    if (winner == &o) {
      r.kept.push_back(o);
    } else {
      r.pruned.push_back({fmt::format("{} -> {} ({}x)", o.boom, o.target, o.coverage),
                          PruneReason::Dominance,
                          fmt::format("arrives period {}, {} arrives period {}", o.arrival,
                                      winner->boom, winner->arrival)});
    }
  }
  return r;
}

ActionPruning prune_dominated(const std::vector<BoomAction>& actions) {
  ActionPruning r;
  auto arrivals = [](const BoomAction& a) {
    std::vector<int> v;
    for (const auto& asg : a.assignments) v.push_back(asg.arrival_period);
    return v;
  };
  for (std::size_t i = 0; i < actions.size(); ++i) {
    const auto ai = arrivals(actions[i]);
    std::optional<std::size_t> by;
    for (std::size_t j = 0; j < actions.size() && !by; ++j) {
      if (i == j || actions[j].strategy != actions[i].strategy ||
          actions[j].stage != actions[i].stage) {
        continue;
      }
      const auto aj = arrivals(actions[j]);
      if (aj.size() != ai.size() || !dominates(aj, ai)) continue;
      // Mutual dominance means identical arrivals: keep the earlier one.
      if (dominates(ai, aj) && j > i) continue;
      by = j;
    }
    if (by) {
      r.pruned.push_back({actions[i].label, PruneReason::Dominance,
                          fmt::format("arrivals no earlier than {}", actions[*by].label)});
    } else {
      r.kept.push_back(actions[i]);
    }
  }
  return r;
}

Strategy make_strategy(const Scenario& s, StrategyName name) {
  Strategy st;
  st.name = name;
  const auto areas = sensitive_by_span(s);
  switch (name) {
    case StrategyName::Equal:
      st.boom_allocation[s.source] = 1;
      for (const auto& a : areas) st.boom_allocation[a] = 1;
      break;
    case StrategyName::Stabilize:
      st.boom_allocation[s.source] = 3;
      for (std::size_t i = 1; i < areas.size(); ++i) st.boom_allocation[areas[i]] = 1;
      break;
    case StrategyName::Protect:
    case StrategyName::Chase:
      if (!areas.empty()) st.boom_allocation[areas.front()] = 3;
      for (std::size_t i = 1; i < areas.size(); ++i) st.boom_allocation[areas[i]] = 1;
      break;
    case StrategyName::None:
      break;
  }
  return st;
}

std::vector<BoomAction> realise_strategy(const Scenario& s, const Strategy& strategy, int stage,
                                         int decision_period, bool prefer_dominant) {
  std::vector<std::string> targets;
  for (const auto& t : boom_targets(s)) {
    if (strategy.boom_allocation.contains(t) && strategy.boom_allocation.at(t) > 0) {
      targets.push_back(t);
    }
  }
  if (targets.empty()) return {};

  // Candidate booms per target in (arrival, id) order so that the first
  // complete assignment found is the lexicographically earliest.
  std::vector<std::vector<std::pair<int, const Boom*>>> cands(targets.size());
  for (std::size_t t = 0; t < targets.size(); ++t) {
    const int need = strategy.boom_allocation.at(targets[t]);
    const double span = s.sectors[s.require_index(targets[t])].span;
    for (const auto& b : s.inventory.booms) {
      auto a = reach(s, b, targets[t]);
      if (a && length_coverage(b, span) >= need) cands[t].emplace_back(*a, &b);
    }
    std::stable_sort(cands[t].begin(), cands[t].end(), [](const auto& x, const auto& y) {
      return std::tie(x.first, x.second->id) < std::tie(y.first, y.second->id);
    });
  }

  std::vector<Realisation> found;
  Realisation cur;
  std::set<std::string> used;
  std::function<void(std::size_t)> search = [&](std::size_t t) {
    if (t == targets.size()) {
      found.push_back(cur);
      return;
    }
    for (const auto& [a, b] : cands[t]) {
      if (used.contains(b->id)) continue;
      used.insert(b->id);
      cur.placement.emplace_back(targets[t], b->id);
      cur.arrivals.push_back(a);
      search(t + 1);
      cur.placement.pop_back();
      cur.arrivals.pop_back();
      used.erase(b->id);
    }
  };
  search(0);

  const std::string smallest =
      strategy.name == StrategyName::Chase ? defining_target(s, StrategyName::Chase).value_or("")
                                           : "";
  std::vector<BoomAction> actions;
  for (const auto& r : found) {
    BoomAction act;
    act.strategy = strategy;
    act.stage = stage;
    act.label = to_string(strategy.name);
    for (std::size_t t = 0; t < targets.size(); ++t) {
      const auto& [target, boom] = r.placement[t];
      act.placement[boom] = target;
      BoomAssignment asg{target, strategy.boom_allocation.at(target), r.arrivals[t], kUntilHorizon};
      if (stage == 1) {
        asg.end_period = decision_period;
      } else {
        asg.arrival_period = std::max(decision_period, r.arrivals[t]);
        if (target == smallest) {
          const int arrive = relocation_arrival(s.inventory, asg.arrival_period);
          act.relocations.push_back({boom, s.source, target, decision_period, arrive});
          asg.arrival_period = arrive;
        }
      }
      act.assignments.push_back(std::move(asg));
    }
    actions.push_back(std::move(act));
  }

  if (prefer_dominant) actions = prune_dominated(actions).kept;
  if (actions.size() > 1) {
    for (std::size_t i = 0; i < actions.size(); ++i) {
      actions[i].label += fmt::format("#{}", i + 1);
    }
  }
  return actions;
}

namespace {

// Realise `name`, dropping unreachable or unaffordable non-defining
// targets. Returns empty when the strategy cannot be formed at all.
std::vector<BoomAction> form_strategy(const Scenario& s, StrategyName name, int stage,
                                      int decision_period, bool dominance,
                                      std::vector<PrunedEntry>& pruned) {
  Strategy st = make_strategy(s, name);
  const auto defining = defining_target(s, name);
  std::vector<std::string> notes;
  const std::string label = fmt::format("{} (point {})", to_string(name), stage);

  for (auto it = st.boom_allocation.begin(); it != st.boom_allocation.end();) {
    if (target_reachable(s, it->first)) {
      ++it;
      continue;
    }
    if (defining && it->first == *defining) {
      pruned.push_back({label, PruneReason::InfeasibleByArrival,
                        fmt::format("no boom reaches {} before the horizon", it->first)});
      return {};
    }
    notes.push_back(fmt::format("{} unreachable, left unprotected", it->first));
    it = st.boom_allocation.erase(it);
  }

  std::vector<std::string> droppable;
  for (const auto& id : sensitive_by_span(s)) {
    if (st.boom_allocation.contains(id) && (!defining || id != *defining)) droppable.push_back(id);
  }
  if (name == StrategyName::Equal && st.boom_allocation.contains(s.source)) {
    droppable.push_back(s.source);
  }

  auto actions = realise_strategy(s, st, stage, decision_period, dominance);
  std::size_t next_drop = 0;
  while (actions.empty() && next_drop < droppable.size()) {
    const auto& id = droppable[next_drop++];
    st.boom_allocation.erase(id);
    notes.push_back(fmt::format("boom shortfall: {} left unprotected", id));
    actions = realise_strategy(s, st, stage, decision_period, dominance);
  }
  if (actions.empty()) {
    pruned.push_back({label, PruneReason::InfeasibleByArrival,
                      "inventory cannot realise the required coverage"});
    return {};
  }
  for (auto& a : actions) a.notes = notes;
  return actions;
}

}  // namespace

DecisionBackbone build_backbone(const Scenario& s, const BackboneOptions& opts) {
  if (s.inventory.aircraft.size() != 1) {
    throw BackboneError(fmt::format("unsupported structure: {} aircraft (exactly one required)",
                                    s.inventory.aircraft.size()));
  }
  if (s.sensitive_targets.empty()) {
    throw BackboneError("unsupported structure: no sensitive area");
  }
  DecisionBackbone b;
  b.decision_period =
      std::max(1, static_cast<int>(std::ceil(s.inventory.aircraft.front().prep_time)));
  if (b.decision_period >= s.horizon) {
    throw BackboneError(fmt::format("unsupported structure: aircraft ready at period {} >= horizon",
                                    b.decision_period));
  }
  const int t2 = b.decision_period;

  const auto blind = run_trajectory(s, Deployment{}, std::nullopt);
  const std::size_t src = s.source_index();
  b.oil_arrival.assign(s.sector_count(), s.horizon);
  for (std::size_t k = 0; k < s.sector_count(); ++k) {
    if (k == src && s.spill_duration > 0) {
      b.oil_arrival[k] = 0;
      continue;
    }
    for (int j = 0; j <= s.horizon; ++j) {
      if (blind.states[j].quantities[k] > 1e-6) {
        b.oil_arrival[k] = j;
        break;
      }
    }
  }
  {
    auto at_sortie = blind.states[t2].quantities;
    at_sortie[src] += s.injection(t2);
    std::size_t best = src;
    for (std::size_t k = 0; k < s.sector_count(); ++k) {
      if (!s.is_shore(k) && at_sortie[k] > at_sortie[best]) best = k;
    }
    b.dispersant_target = s.sectors[best].id;
  }

  DecisionPoint p1{1, 0, {}, {}, {}};
  DecisionPoint p2{2, t2, {}, {AircraftKind::Surveil, AircraftKind::Disperse},
                   {"trajectory state (surveil branch only)"}};

  if (!s.inventory.booms.empty()) {
    b.pruned = prune_dominated(enumerate_feasible(s)).pruned;
    for (auto n : {StrategyName::Equal, StrategyName::Stabilize, StrategyName::Protect}) {
      for (auto& a : form_strategy(s, n, 1, t2, opts.dominance_pruning, b.pruned)) {
        p1.boom_actions.push_back(std::move(a));
      }
    }
    for (auto n : {StrategyName::Equal, StrategyName::Stabilize, StrategyName::Protect,
                   StrategyName::Chase}) {
      for (auto& a : form_strategy(s, n, 2, t2, opts.dominance_pruning, b.pruned)) {
        p2.boom_actions.push_back(std::move(a));
      }
    }
  }
  if (p1.boom_actions.empty()) p1.boom_actions.push_back(none_action(1));
  if (p2.boom_actions.empty()) p2.boom_actions.push_back(none_action(2));

  const int relocated_arrival = relocation_arrival(s.inventory, t2);
  for (std::size_t i = 0; i < p1.boom_actions.size(); ++i) {
    const auto& first = p1.boom_actions[i];
    for (std::size_t k = 0; k < p2.boom_actions.size(); ++k) {
      const auto& second = p2.boom_actions[k];
      for (const auto& [boom, target] : second.placement) {
        auto from = first.placement.find(boom);
        if (from == first.placement.end() || from->second == target) continue;
        const int oil_at_target = b.oil_arrival[s.require_index(target)];
        // Upstream move that lands after the oil has already passed.
        if (oil_at_target >= b.oil_arrival[s.require_index(from->second)]) continue;
        if (oil_at_target >= relocated_arrival) continue;
        b.best_practice_pairs.emplace(i, k);
        b.pruned.push_back(
            {fmt::format("{} -> {}", first.label, second.label), PruneReason::BestPractice,
             fmt::format("moves {} from {} to {} against the spreading direction "
                         "(oil there from period {}, boom at period {})",
                         boom, from->second, target, b.oil_arrival[s.require_index(target)],
                         relocated_arrival)});
        break;
      }
    }
  }

  b.points.push_back(std::move(p1));
  b.points.push_back(std::move(p2));
  return b;
}

Deployment plan_deployment(const DecisionBackbone& b, std::size_t first, AircraftKind aircraft,
                           std::size_t second) {
  Deployment d;
  if (first != kNoAction) {
    const auto& a = b.first().boom_actions.at(first);
    d.booms = a.assignments;
  }
  if (second != kNoAction) {
    const auto& a = b.second().boom_actions.at(second);
    d.booms.insert(d.booms.end(), a.assignments.begin(), a.assignments.end());
    d.relocations = a.relocations;
  }
  d.aircraft = AircraftAction{aircraft,
                              aircraft == AircraftKind::Disperse ? b.dispersant_target : "",
                              b.decision_period};
  return d;
}

}  // namespace spillplan
