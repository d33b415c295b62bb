#include "spillplan/solver.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>

#include <fmt/core.h>

namespace spillplan {

namespace {

// Runs fn(i) for i in [0, n). Every index writes only its own output slot,
// so the OpenMP and serial paths produce identical results.
template <class Fn>
void for_each_index(std::size_t n, Parallelism par, Fn&& fn) {
  if (par == Parallelism::Serial) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < static_cast<long long>(n); ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

// First index whose value is within tol of the minimum; index order is
// the tie-break order.
std::size_t argmin_first(const std::vector<double>& v, double tol) {
  const double lo = *std::min_element(v.begin(), v.end());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] <= lo + tol) return i;
  }
  return 0;
}

constexpr double kTieTolerance = 1e-12;

// masses[((f * A) + a) * K + k][h]
struct MassTable {
  std::size_t firsts = 0, aircraft = 0, seconds = 0;
  std::vector<std::vector<double>> masses;

  const std::vector<double>& at(std::size_t f, std::size_t a, std::size_t k) const {
    return masses[(f * aircraft + a) * seconds + k];
  }
  std::size_t size() const { return firsts * aircraft * seconds; }
};

MassTable empty_table(const DecisionBackbone& b) {
  MassTable t;
  t.firsts = b.first().boom_actions.size();
  t.aircraft = b.second().aircraft_options.size();
  t.seconds = b.second().boom_actions.size();
  t.masses.resize(t.size());
  return t;
}

struct BranchBest {
  std::vector<std::size_t> second;
  double value = 0.0;
};

BranchBest best_second(const PolicyEvaluator& ev, const MassTable& t, std::size_t f,
                       std::size_t a, bool contingent) {
  const auto& w = ev.weights();
  BranchBest best;
  if (contingent) {
    double num = 0.0;
    for (std::size_t h = 0; h < w.size(); ++h) {
      std::vector<double> col(t.seconds);
      for (std::size_t k = 0; k < t.seconds; ++k) col[k] = t.at(f, a, k)[h];
      const std::size_t k = argmin_first(col, kTieTolerance * ev.baseline());
      best.second.push_back(k);
      num += w[h] * col[k];
    }
    best.value = num / ev.baseline();
  } else {
    std::vector<double> vals(t.seconds);
    for (std::size_t k = 0; k < t.seconds; ++k) vals[k] = ev.normalised(t.at(f, a, k));
    const std::size_t k = argmin_first(vals, kTieTolerance);
    best.second = {k};
    best.value = vals[k];
  }
  return best;
}

SolveResult assemble(const PolicyEvaluator& ev, const MassTable& t, std::string method) {
  const auto& b = ev.backbone();
  SolveResult r;
  r.method = std::move(method);
  std::vector<Policy> candidates;
  std::vector<double> values;
  for (std::size_t f = 0; f < t.firsts; ++f) {
    for (std::size_t a = 0; a < t.aircraft; ++a) {
      const AircraftKind kind = b.second().aircraft_options[a];
      auto best = best_second(ev, t, f, a, kind == AircraftKind::Surveil);
      candidates.push_back({f, kind, best.second});
      values.push_back(best.value);
    }
  }
  const std::size_t i = argmin_first(values, kTieTolerance);
  r.optimal_policy = candidates[i];
  r.value = values[i];
  r.policy_label = policy_label(b, r.optimal_policy);
  for (std::size_t f = 0; f < t.firsts; ++f) {
    for (std::size_t a = 0; a < t.aircraft; ++a) {
      for (std::size_t k = 0; k < t.seconds; ++k) {
        const AircraftKind kind = b.second().aircraft_options[a];
        r.plans.push_back({f, kind, k, plan_label(b, f, kind, k), ev.normalised(t.at(f, a, k))});
      }
    }
  }
  r.stage_tables.push_back(stage_return_table(ev, 2));
  r.stage_tables.push_back(stage_return_table(ev, 1));
  return r;
}

MassTable forward_table(const PolicyEvaluator& ev, Parallelism par) {
  const auto& b = ev.backbone();
  MassTable t = empty_table(b);
  for_each_index(t.size(), par, [&](std::size_t i) {
    const std::size_t k = i % t.seconds;
    const std::size_t a = (i / t.seconds) % t.aircraft;
    const std::size_t f = i / (t.seconds * t.aircraft);
    t.masses[i] = ev.plan_masses(f, b.second().aircraft_options[a], k);
  });
  return t;
}

}  // namespace

// ---------------------------------------------------------------------------

PolicyEvaluator::PolicyEvaluator(const Scenario& s, const DecisionBackbone& b) : s_(&s), b_(&b) {
  for (const auto& h : s.effective_hypotheses()) {
    weights_.push_back(h.weight);
    transitions_.push_back(build_transitions(s, h.spread_rate));
  }
  const auto none = plan_masses(kNoAction, AircraftKind::Surveil, kNoAction);
  for (std::size_t h = 0; h < none.size(); ++h) baseline_ += weights_[h] * none[h];
  if (!(baseline_ > 0.0)) {
    throw DegenerateScenario("degenerate scenario: no oil reaches a sensitive area without action");
  }
}

double PolicyEvaluator::plan_mass(std::size_t h, std::size_t first, AircraftKind aircraft,
                                  std::size_t second) const {
  const auto d = plan_deployment(*b_, first, aircraft, second);
  const bool observed = aircraft == AircraftKind::Surveil;
  const auto end = advance(*s_, transitions_[h].regime(observed), d,
                           OilState::zero(s_->sector_count()), s_->horizon);
  return sensitive_mass(*s_, end);
}

std::vector<double> PolicyEvaluator::plan_masses(std::size_t first, AircraftKind aircraft,
                                                 std::size_t second) const {
  std::vector<double> out(weights_.size());
  for (std::size_t h = 0; h < out.size(); ++h) out[h] = plan_mass(h, first, aircraft, second);
  return out;
}

double PolicyEvaluator::normalised(const std::vector<double>& masses) const {
  double num = 0.0;
  for (std::size_t h = 0; h < masses.size(); ++h) num += weights_[h] * masses[h];
  return num / baseline_;
}

// ---------------------------------------------------------------------------

namespace {

std::string action_label(const DecisionPoint& p, std::size_t i) {
  return i == kNoAction ? "none" : p.boom_actions.at(i).label;
}

}  // namespace

std::string plan_label(const DecisionBackbone& b, std::size_t first, AircraftKind aircraft,
                       std::size_t second) {
  if (first == kNoAction && second == kNoAction && aircraft == AircraftKind::Surveil) {
    return "none";
  }
  return fmt::format("{}-{}-{}", action_label(b.first(), first), to_string(aircraft),
                     action_label(b.second(), second));
}

std::string policy_label(const DecisionBackbone& b, const Policy& p) {
  const bool uniform = std::all_of(p.second.begin(), p.second.end(),
                                   [&](std::size_t k) { return k == p.second.front(); });
  if (uniform) return plan_label(b, p.first, p.aircraft, p.second.front());
  std::string seconds;
  for (std::size_t i = 0; i < p.second.size(); ++i) {
    if (i) seconds += "|";
    seconds += action_label(b.second(), p.second[i]);
  }
  return fmt::format("{}-{}-[{}]", action_label(b.first(), p.first), to_string(p.aircraft),
                     seconds);
}

std::vector<std::string> policy_names(const DecisionBackbone& b) {
  std::vector<std::string> names{"none"};
  for (std::size_t f = 0; f < b.first().boom_actions.size(); ++f) {
    for (auto a : b.second().aircraft_options) {
      for (std::size_t k = 0; k < b.second().boom_actions.size(); ++k) {
        names.push_back(plan_label(b, f, a, k));
      }
    }
  }
  return names;
}

std::optional<Policy> parse_policy(const DecisionBackbone& b, const std::string& name) {
  if (name == "none") return Policy::none();
  for (std::size_t f = 0; f < b.first().boom_actions.size(); ++f) {
    for (auto a : b.second().aircraft_options) {
      for (std::size_t k = 0; k < b.second().boom_actions.size(); ++k) {
        if (plan_label(b, f, a, k) == name) return Policy{f, a, {k}};
      }
    }
  }
  return std::nullopt;
}

double evaluate_plan(const PolicyEvaluator& ev, const Policy& p) {
  if (p.second.size() != 1 && p.second.size() != ev.hypothesis_count()) {
    throw std::invalid_argument("contingent policy must name one action per hypothesis class");
  }
  double num = 0.0;
  for (std::size_t h = 0; h < ev.hypothesis_count(); ++h) {
    num += ev.weights()[h] * ev.plan_mass(h, p.first, p.aircraft, p.second_for(h));
  }
  return num / ev.baseline();
}

double evaluate_plan(const Scenario& s, const DecisionBackbone& b, const Policy& p) {
  return evaluate_plan(PolicyEvaluator(s, b), p);
}

SolveResult brute_force(const Scenario& s, const DecisionBackbone& b, Parallelism par) {
  PolicyEvaluator ev(s, b);
  const MassTable t = forward_table(ev, par);
  SolveResult r = assemble(ev, t, "brute");
  r.evaluations_bruteforce = static_cast<int>(t.size());
  return r;
}

SolveResult backward_induct(const Scenario& s, const DecisionBackbone& b, Parallelism par) {
  PolicyEvaluator ev(s, b);
  MassTable t = empty_table(b);
  const std::size_t stage2 = t.aircraft * t.seconds;
  if (stage2 == 1) {
    // Nothing to factor at point 2: evaluate each first action directly.
    t = forward_table(ev, par);
    SolveResult r = assemble(ev, t, "staged");
    r.evaluations_staged = static_cast<int>(t.firsts);
    return r;
  }

  const std::size_t H = ev.hypothesis_count();
  const int t2 = b.decision_period;
  const auto& aircraft = b.second().aircraft_options;

  // Stage 2: return functions V_2(a, b2; state at t2) per hypothesis.
  std::vector<std::vector<LinearValue>> returns(stage2);
  for_each_index(stage2, par, [&](std::size_t i) {
    const std::size_t a = i / t.seconds, k = i % t.seconds;
    const auto d = plan_deployment(b, kNoAction, aircraft[a], k);
    const bool observed = aircraft[a] == AircraftKind::Surveil;
    for (std::size_t h = 0; h < H; ++h) {
      returns[i].push_back(
          terminal_value_functional(s, ev.transitions(h).regime(observed), d, t2));
    }
  });

  // Stage 1: state at t2 for each first action, in both knowledge regimes.
  const bool need_observed = std::find(aircraft.begin(), aircraft.end(), AircraftKind::Surveil) !=
                             aircraft.end();
  const bool need_blind = std::find(aircraft.begin(), aircraft.end(), AircraftKind::Disperse) !=
                          aircraft.end();
  std::vector<std::vector<OilState>> at_t2_observed(t.firsts), at_t2_blind(t.firsts);
  for_each_index(t.firsts, par, [&](std::size_t f) {
    const auto d = plan_deployment(b, f, AircraftKind::Surveil, kNoAction);
    for (std::size_t h = 0; h < H; ++h) {
      const auto zero = OilState::zero(s.sector_count());
      if (need_observed) {
        at_t2_observed[f].push_back(advance(s, ev.transitions(h).regime(true), d, zero, t2));
      }
      if (need_blind) {
        at_t2_blind[f].push_back(advance(s, ev.transitions(h).regime(false), d, zero, t2));
      }
    }
  });

  for (std::size_t f = 0; f < t.firsts; ++f) {
    for (std::size_t a = 0; a < t.aircraft; ++a) {
      const auto& states =
          aircraft[a] == AircraftKind::Surveil ? at_t2_observed[f] : at_t2_blind[f];
      for (std::size_t k = 0; k < t.seconds; ++k) {
        auto& m = t.masses[(f * t.aircraft + a) * t.seconds + k];
        for (std::size_t h = 0; h < H; ++h) {
          m.push_back(returns[a * t.seconds + k][h].evaluate(states[h]));
        }
      }
    }
  }
  SolveResult r = assemble(ev, t, "staged");
  r.evaluations_staged = static_cast<int>(stage2 + t.firsts);
  return r;
}

ReturnTable stage_return_table(const PolicyEvaluator& ev, int stage) {
  const auto& b = ev.backbone();
  const auto& p1 = b.first();
  const auto& p2 = b.second();
  ReturnTable t;
  t.stage = stage;
  for (const auto& a : p2.boom_actions) t.row_labels.push_back(a.label);

  std::optional<double> best;
  auto consider = [&](std::size_t r, std::size_t c, double v) {
    if (!best || v < *best - kTieTolerance) {
      best = v;
      t.optimal_cell = std::make_pair(r, c);
    }
  };

  if (stage == 2) {
    t.title = "Fraction of oil left in sensitive areas after second-period controls";
    t.row_labels.push_back("(none)");
    for (auto a : p2.aircraft_options) t.col_labels.push_back(to_string(a));
    t.values.assign(t.row_labels.size(), std::vector<std::optional<double>>(t.col_labels.size()));
    for (std::size_t r = 0; r < t.row_labels.size(); ++r) {
      const std::size_t k = r < p2.boom_actions.size() ? r : kNoAction;
      for (std::size_t c = 0; c < p2.aircraft_options.size(); ++c) {
        const double v = ev.normalised(ev.plan_masses(kNoAction, p2.aircraft_options[c], k));
        t.values[r][c] = v;
        consider(r, c, v);
      }
    }
  } else if (stage == 1) {
    const bool has_disperse = std::find(p2.aircraft_options.begin(), p2.aircraft_options.end(),
                                        AircraftKind::Disperse) != p2.aircraft_options.end();
    const AircraftKind a = has_disperse ? AircraftKind::Disperse : p2.aircraft_options.front();
    t.title = fmt::format("Fraction of oil left in sensitive areas, controls in both periods ({})",
                          to_string(a));
    for (const auto& f : p1.boom_actions) t.col_labels.push_back(f.label);
    t.values.assign(t.row_labels.size(), std::vector<std::optional<double>>(t.col_labels.size()));
    for (std::size_t r = 0; r < t.row_labels.size(); ++r) {
      for (std::size_t c = 0; c < t.col_labels.size(); ++c) {
        if (b.best_practice_pairs.contains({c, r})) continue;
        const double v = ev.normalised(ev.plan_masses(c, a, r));
        t.values[r][c] = v;
        consider(r, c, v);
      }
    }
  } else {
    throw std::invalid_argument("stage must be 1 or 2");
  }
  return t;
}

ReturnTable stage_return_table(const Scenario& s, const DecisionBackbone& b, int stage) {
  return stage_return_table(PolicyEvaluator(s, b), stage);
}

SurveillanceValue value_of_surveillance(const Scenario& s, const DecisionBackbone& b) {
  PolicyEvaluator ev(s, b);
  const MassTable t = forward_table(ev, Parallelism::OpenMP);
  const auto& aircraft = b.second().aircraft_options;
  auto index_of = [&](AircraftKind k) -> std::optional<std::size_t> {
    auto it = std::find(aircraft.begin(), aircraft.end(), k);
    if (it == aircraft.end()) return std::nullopt;
    return static_cast<std::size_t>(it - aircraft.begin());
  };
  constexpr double inf = std::numeric_limits<double>::infinity();
  auto branch_best = [&](std::size_t a, bool contingent) {
    double best = inf;
    for (std::size_t f = 0; f < t.firsts; ++f) {
      best = std::min(best, best_second(ev, t, f, a, contingent).value);
    }
    return best;
  };

  SurveillanceValue v;
  const auto surveil = index_of(AircraftKind::Surveil);
  const auto disperse = index_of(AircraftKind::Disperse);
  if (surveil && disperse) {
    v.net_voi = branch_best(*disperse, false) - branch_best(*surveil, true);
  }
  const std::size_t a = disperse ? *disperse : 0;
  v.free_voi = branch_best(a, false) - branch_best(a, true);
  return v;
}

nlohmann::ordered_json to_json(const ReturnTable& t) {
  nlohmann::ordered_json j;
  j["stage"] = t.stage;
  j["title"] = t.title;
  j["rows"] = t.row_labels;
  j["cols"] = t.col_labels;
  auto values = nlohmann::ordered_json::array();
  for (const auto& row : t.values) {
    auto r = nlohmann::ordered_json::array();
    for (const auto& cell : row) {
      if (cell) {
        r.push_back(*cell);
      } else {
        r.push_back(nullptr);
      }
    }
    values.push_back(std::move(r));
  }
  j["values"] = std::move(values);
  if (t.optimal_cell) {
    j["optimal_cell"] = {{"row", t.row_labels[t.optimal_cell->first]},
                         {"col", t.col_labels[t.optimal_cell->second]}};
  } else {
    j["optimal_cell"] = nullptr;
  }
  return j;
}

nlohmann::ordered_json to_json(const SolveResult& r) {
  nlohmann::ordered_json j;
  j["method"] = r.method;
  j["optimal_policy"] = r.policy_label;
  j["value"] = r.value;
  j["evaluations"] = {{"bruteforce", r.evaluations_bruteforce},
                      {"staged", r.evaluations_staged}};
  auto plans = nlohmann::ordered_json::array();
  for (const auto& p : r.plans) plans.push_back({{"plan", p.label}, {"value", p.value}});
  j["plans"] = std::move(plans);
  auto tables = nlohmann::ordered_json::array();
  for (const auto& t : r.stage_tables) tables.push_back(to_json(t));
  j["stage_tables"] = std::move(tables);
  return j;
}

}  // namespace spillplan
