#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "spillplan/backbone.hpp"
#include "spillplan/scenario.hpp"
#include "spillplan/solver.hpp"

namespace testsupport {

using namespace spillplan;
using nlohmann::json;

inline std::filesystem::path data_dir() { return SPILLPLAN_DATA_DIR; }
inline std::filesystem::path golden_dir() { return SPILLPLAN_GOLDEN_DIR; }
inline std::filesystem::path demo_path() { return data_dir() / "demo.json"; }
inline Scenario load_demo() { return load_scenario(demo_path()); }

// Small chain of sea sectors draining into shores, shore H0 always
// sensitive and fed by the last sea sector, so the no-action policy puts
// oil on a sensitive area. At most six sectors.
struct RandomOptions {
  int min_hypotheses = 1;
  int max_hypotheses = 3;
  int max_booms = 3;
  bool allow_decay = true;
};

inline json random_scenario_json(std::mt19937_64& rng, RandomOptions opt = {}) {
  auto uni = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
  auto pick = [&](int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng); };

  const int ns = pick(1, 3);
  const int nh = pick(1, 6 - ns > 3 ? 3 : 6 - ns);
  json doc;
  std::vector<std::string> seas, shores;
  for (int i = 0; i < ns; ++i) {
    seas.push_back("S" + std::to_string(i));
    doc["sectors"].push_back({{"id", seas.back()}, {"kind", "sea"}, {"span", uni(100, 1500)}});
  }
  std::vector<std::string> sensitive;
  for (int i = 0; i < nh; ++i) {
    shores.push_back("H" + std::to_string(i));
    const bool sens = i == 0 || pick(0, 1) == 1;
    if (sens) sensitive.push_back(shores.back());
    doc["sectors"].push_back(
        {{"id", shores.back()}, {"kind", "shore"}, {"sensitive", sens}, {"span", uni(100, 1500)}});
  }
  json adj = json::array();
  for (int i = 0; i + 1 < ns; ++i) adj.push_back({seas[i], seas[i + 1]});
  adj.push_back({seas.back(), "H0"});
  for (int i = 0; i < ns; ++i) {
    for (int k = 1; k < nh; ++k) {
      if (pick(0, 2) == 0) adj.push_back({seas[i], shores[k]});
    }
  }
  doc["adjacency"] = adj;
  doc["source"] = "S0";

  const int horizon = pick(6, 12);
  doc["spill"] = {{"rate", uni(1, 2000)}, {"duration", pick(1, 4)}};
  json phys = {{"horizon", horizon},
               {"spread_rate", uni(0.2, 0.9)},
               {"uncertainty_factor", pick(0, 3) == 0 ? 0.0 : uni(0.0, 0.5)},
               {"thickness", uni(0.5, 3.0)},
               {"reference_thickness", uni(0.5, 3.0)}};
  if (opt.allow_decay && pick(0, 3) == 0) phys["natural_decay"] = uni(0.0, 0.1);
  const int nhyp = pick(opt.min_hypotheses, opt.max_hypotheses);
  if (nhyp > 1) {
    std::vector<double> w(nhyp);
    for (auto& x : w) x = uni(0.1, 1.0);
    double total = 0.0;
    for (double x : w) total += x;
    double used = 0.0;
    for (int h = 0; h < nhyp; ++h) {
      const double wh = h + 1 == nhyp ? 1.0 - used : w[h] / total;
      used += wh;
      phys["hypotheses"].push_back({{"weight", wh}, {"spread_rate", uni(0.1, 0.95)}});
    }
  }
  doc["physics"] = phys;

  std::vector<std::string> targets{"S0"};
  targets.insert(targets.end(), sensitive.begin(), sensitive.end());
  json booms = json::array();
  const int nb = pick(0, opt.max_booms);
  for (int b = 0; b < nb; ++b) {
    json tt = json::object();
    for (const auto& t : targets) {
      if (pick(0, 4) != 0) tt[t] = uni(0.0, 7.0);
    }
    booms.push_back({{"id", "B" + std::to_string(b)},
                     {"length", uni(100, 3000)},
                     {"staging_site", "port"},
                     {"transit_time", tt}});
  }
  doc["inventory"] = {{"booms", booms},
                      {"aircraft", {{"prep_time", uni(0.0, 4.0)}, {"dispersant_efficiency", uni(0.0, 0.95)}}},
                      {"containment", {{"max_fraction", uni(0.5, 0.95)}, {"exponent", uni(0.5, 2.0)}}},
                      {"relocation_delay", pick(1, 3)}};
  return doc;
}

inline Scenario random_scenario(std::mt19937_64& rng, RandomOptions opt = {}) {
  return parse_scenario(random_scenario_json(rng, opt).dump());
}

// Keeps at most `max_actions` boom actions per point, chosen at random.
// Starred pairs refer to the original indices, so they are dropped.
inline DecisionBackbone trim_backbone(DecisionBackbone b, std::mt19937_64& rng,
                                      std::size_t max_actions = 3) {
  for (auto& p : b.points) {
    auto& acts = p.boom_actions;
    while (acts.size() > max_actions) {
      const auto i = std::uniform_int_distribution<std::size_t>(0, acts.size() - 1)(rng);
      acts.erase(acts.begin() + static_cast<std::ptrdiff_t>(i));
    }
  }
  b.best_practice_pairs.clear();
  return b;
}

// ---------------------------------------------------------------------------
// Reference dynamics, written out longhand: no Matrix, no adjoint.

inline std::vector<std::vector<double>> ref_spread(const Scenario& s, double rate) {
  const std::size_t n = s.sectors.size();
  std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::size_t> nb;
    for (const auto& [from, to] : s.adjacency) {
      if (from == s.sectors[i].id) nb.push_back(s.require_index(to));
    }
    if (s.sectors[i].kind == SectorKind::Shore || nb.empty()) {
      m[i][i] = 1.0;
      continue;
    }
    m[i][i] = 1.0 - rate;
    for (auto k : nb) m[i][k] += rate / static_cast<double>(nb.size());
  }
  return m;
}

inline double ref_boom_fraction(const Scenario& s, int coverage, std::size_t k) {
  if (coverage == 0) return 0.0;
  const auto& c = s.inventory.containment;
  auto it = s.thickness.find(s.sectors[k].id);
  const double th = it == s.thickness.end() ? s.thickness_default : it->second;
  return c.max_fraction * std::pow(coverage / 3.0, c.exponent) *
         std::min(1.0, th / s.reference_thickness);
}

// Terminal sensitive-shore mass for one deployment and true spreading rate.
inline double reference_terminal_mass(const Scenario& s, double rate, bool observed,
                                      const Deployment& d) {
  const std::size_t n = s.sectors.size();
  const auto p = ref_spread(s, s.uncertainty_factor);
  std::vector<double> q(n, 0.0), landed(n, 0.0);
  const std::size_t src = s.require_index(s.source);
  for (int j = 0; j < s.horizon; ++j) {
    const double r = s.spread_profile.empty() ? rate : rate * s.spread_profile[j];
    auto m = ref_spread(s, r);
    if (!observed) {
      std::vector<std::vector<double>> pm(n, std::vector<double>(n, 0.0));
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
          for (std::size_t c = 0; c < n; ++c) pm[a][c] += p[a][b] * m[b][c];
      m = pm;
    }
    if (j < s.spill_duration) q[src] += s.spill_rate;

    std::vector<double> keep(n, 1.0);
    for (const auto& b : d.booms) {
      if (j < b.arrival_period || j >= b.end_period) continue;
      const auto k = s.require_index(b.sector);
      keep[k] *= 1.0 - ref_boom_fraction(s, b.coverage, k);
    }
    if (d.aircraft && d.aircraft->kind == AircraftKind::Disperse && d.aircraft->execute_period == j) {
      keep[s.require_index(d.aircraft->sector)] *= 1.0 - s.inventory.aircraft[0].dispersant_efficiency;
    }
    for (std::size_t k = 0; k < n; ++k) {
      if (s.sectors[k].kind == SectorKind::Sea) keep[k] *= 1.0 - s.natural_decay;
    }

    std::vector<double> rest(n);
    for (std::size_t k = 0; k < n; ++k) {
      if (s.sectors[k].kind == SectorKind::Shore) {
        rest[k] = landed[k] + (q[k] - landed[k]) * keep[k];
      } else {
        rest[k] = q[k] * keep[k];
      }
    }
    std::vector<double> next(n, 0.0);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t c = 0; c < n; ++c) next[c] += rest[a] * m[a][c];
    for (std::size_t k = 0; k < n; ++k) landed[k] = m[k][k] == 1.0 ? rest[k] : 0.0;
    q = next;
  }
  double total = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (s.sectors[k].sensitive) total += q[k];
  }
  return total;
}

struct OracleResult {
  double value = std::numeric_limits<double>::infinity();
  std::size_t policies = 0;
};

// Minimum over every policy: each first action, each aircraft option and,
// for surveil, every map from hypothesis class to second action.
inline OracleResult exhaustive_optimum(const Scenario& s, const DecisionBackbone& b) {
  const auto hyps = s.effective_hypotheses();
  const std::size_t H = hyps.size();
  auto mass = [&](std::size_t h, std::size_t f, AircraftKind a, std::size_t k) {
    return reference_terminal_mass(s, hyps[h].spread_rate, a == AircraftKind::Surveil,
                                   plan_deployment(b, f, a, k));
  };
  double baseline = 0.0;
  for (std::size_t h = 0; h < H; ++h) {
    baseline += hyps[h].weight * mass(h, kNoAction, AircraftKind::Surveil, kNoAction);
  }

  OracleResult out;
  const std::size_t F = b.first().boom_actions.size();
  const std::size_t K = b.second().boom_actions.size();
  for (std::size_t f = 0; f < F; ++f) {
    for (auto a : b.second().aircraft_options) {
      std::vector<std::vector<double>> m(K, std::vector<double>(H));
      for (std::size_t k = 0; k < K; ++k)
        for (std::size_t h = 0; h < H; ++h) m[k][h] = mass(h, f, a, k);
      const bool contingent = a == AircraftKind::Surveil;
      std::size_t maps = 1;
      for (std::size_t h = 0; h < (contingent ? H : 1); ++h) maps *= K;
      for (std::size_t code = 0; code < maps; ++code) {
        std::size_t rest = code;
        double num = 0.0;
        const std::size_t fixed = code;
        for (std::size_t h = 0; h < H; ++h) {
          const std::size_t k = contingent ? rest % K : fixed;
          if (contingent) rest /= K;
          num += hyps[h].weight * m[k][h];
        }
        out.value = std::min(out.value, num / baseline);
        ++out.policies;
      }
    }
  }
  return out;
}

}  // namespace testsupport
