#include "spillplan/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/core.h>

namespace spillplan {

using nlohmann::json;
using nlohmann::ordered_json;

std::optional<std::size_t> Scenario::index_of(const std::string& id) const {
  for (std::size_t i = 0; i < sectors.size(); ++i) {
    if (sectors[i].id == id) return i;
  }
  return std::nullopt;
}

std::size_t Scenario::require_index(const std::string& id) const {
  auto idx = index_of(id);
  if (!idx) throw std::out_of_range(fmt::format("unknown sector '{}'", id));
  return *idx;
}

double Scenario::thickness_at(std::size_t i) const {
  auto it = thickness.find(sectors[i].id);
  return it == thickness.end() ? thickness_default : it->second;
}

std::vector<std::size_t> Scenario::out_neighbors(std::size_t i) const {
  std::vector<std::size_t> out;
  for (const auto& [from, to] : adjacency) {
    if (from != sectors[i].id) continue;
    if (auto k = index_of(to); k && *k != i &&
                               std::find(out.begin(), out.end(), *k) == out.end()) {
      out.push_back(*k);
    }
  }
  return out;
}

std::vector<std::size_t> Scenario::sensitive_indices() const {
  std::vector<std::size_t> out;
  for (const auto& id : sensitive_targets) {
    if (auto k = index_of(id)) out.push_back(*k);
  }
  return out;
}

std::vector<TrajectoryHypothesis> Scenario::effective_hypotheses() const {
  if (hypotheses.empty()) return {{1.0, spread_rate}};
  return hypotheses;
}

namespace {

bool in_unit(double x) { return x >= 0.0 && x <= 1.0; }

}  // namespace

std::vector<std::string> validate(const Scenario& s) {
  std::vector<std::string> v;
  auto add = [&v](std::string field, std::string rule) {
    v.push_back(field + ": " + rule);
  };

  if (s.sectors.empty()) add("sectors", "at least one sector required");
  std::set<std::string> ids;
  for (const auto& sec : s.sectors) {
    const auto field = fmt::format("sectors[{}]", sec.id);
    if (!ids.insert(sec.id).second) add(field, "duplicate sector id");
    if (!(sec.span > 0.0)) add(field + ".span", "span must be > 0");
    if (sec.sensitive && sec.kind != SectorKind::Shore) {
      add(field + ".sensitive", "sensitive flag only allowed on shore sectors");
    }
  }

  for (const auto& [from, to] : s.adjacency) {
    const auto field = fmt::format("adjacency[{}->{}]", from, to);
    auto fi = s.index_of(from);
    auto ti = s.index_of(to);
    if (!fi || !ti) {
      add(field, "references unknown sector");
      continue;
    }
    if (*fi == *ti) add(field, "self loop");
    if (s.is_shore(*fi)) add(field, "shore sector has an outgoing edge (must be absorbing)");
  }

  if (auto src = s.index_of(s.source); !src) {
    add("source", "unknown sector");
  } else if (s.is_shore(*src)) {
    add("source", "source must be a sea sector");
  }

  if (s.horizon < 2) add("horizon_T", "must be >= 2");
  if (s.spill_duration < 0) add("spill_duration", "must be >= 0");
  if (s.spill_duration > s.horizon) add("spill_duration", "must be <= horizon_T");
  if (!(s.spill_rate >= 0.0)) add("spill_rate", "must be >= 0");
  if (!in_unit(s.spread_rate)) add("spread_rate", "out of [0,1]");
  if (!in_unit(s.uncertainty_factor)) add("uncertainty_factor", "out of [0,1]");
  if (!in_unit(s.natural_decay)) add("natural_decay", "out of [0,1]");

  if (!s.spread_profile.empty()) {
    if (s.spread_profile.size() != static_cast<std::size_t>(std::max(s.horizon, 0))) {
      add("spread_profile", "length must equal horizon_T");
    }
    for (double p : s.spread_profile) {
      if (!(p >= 0.0) || !in_unit(p * s.spread_rate)) {
        add("spread_profile", "spread_rate * multiplier out of [0,1]");
        break;
      }
    }
  }

  if (!(s.thickness_default > 0.0)) add("thickness", "default thickness must be > 0");
  for (const auto& [id, t] : s.thickness) {
    if (!s.index_of(id)) add(fmt::format("thickness[{}]", id), "unknown sector");
    if (!(t > 0.0)) add(fmt::format("thickness[{}]", id), "must be > 0");
  }
  if (!(s.reference_thickness > 0.0)) add("reference_thickness", "must be > 0");

  if (!s.hypotheses.empty()) {
    double total = 0.0;
    for (const auto& h : s.hypotheses) {
      if (!(h.weight > 0.0)) add("hypotheses.weight", "must be > 0");
      if (!in_unit(h.spread_rate)) add("hypotheses.spread_rate", "out of [0,1]");
      for (double p : s.spread_profile) {
        if (!in_unit(p * h.spread_rate)) {
          add("hypotheses.spread_rate", "spread_rate * multiplier out of [0,1]");
          break;
        }
      }
      total += h.weight;
    }
    if (std::abs(total - 1.0) > 1e-9) add("hypotheses", "weights must sum to 1");
  }

  std::set<std::string> boom_ids;
  for (const auto& b : s.inventory.booms) {
    const auto field = fmt::format("inventory.booms[{}]", b.id);
    if (!boom_ids.insert(b.id).second) add(field, "duplicate boom id");
    if (!(b.length > 0.0)) add(field + ".length", "must be > 0");
    for (const auto& [sec, t] : b.transit_time) {
      if (!s.index_of(sec)) add(field + ".transit_time", fmt::format("unknown sector '{}'", sec));
      if (!(t >= 0.0)) add(field + ".transit_time", "must be >= 0");
    }
  }
  if (s.inventory.aircraft.size() != 1) {
    add("inventory.aircraft", "exactly one aircraft required");
  }
  for (const auto& a : s.inventory.aircraft) {
    if (!(a.prep_time >= 0.0)) add("inventory.aircraft.prep_time", "must be >= 0");
    if (!in_unit(a.dispersant_efficiency)) {
      add("inventory.aircraft.dispersant_efficiency", "out of [0,1]");
    }
  }
  const auto& c = s.inventory.containment;
  if (!(c.max_fraction >= 0.0 && c.max_fraction < 1.0)) {
    add("inventory.containment.max_fraction", "out of [0,1) (booms leak)");
  }
  if (!(c.exponent > 0.0)) add("inventory.containment.exponent", "must be > 0");
  if (s.inventory.relocation_delay < 1) add("inventory.relocation_delay", "must be >= 1");

  for (const auto& id : s.sensitive_targets) {
    auto k = s.index_of(id);
    if (!k || !s.sectors[*k].sensitive) {
      add("sensitive_targets", fmt::format("'{}' is not a sensitive shore sector", id));
    }
  }
  return v;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

[[noreturn]] void parse_fail(const std::string& field, const std::string& msg) {
  throw ScenarioError(ScenarioError::Kind::Parse, field + ": " + msg);
}

void check_keys(const json& obj, const std::string& field,
                std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) parse_fail(field, "expected an object");
  for (const auto& [key, _] : obj.items()) {
    bool ok = std::any_of(allowed.begin(), allowed.end(),
                          [&](const char* a) { return key == a; });
    if (!ok) parse_fail(field.empty() ? key : field + "." + key, "unknown key");
  }
}

const json& need(const json& obj, const std::string& field, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    parse_fail(field.empty() ? key : field + "." + key, "missing required key");
  }
  return *it;
}

double get_number(const json& v, const std::string& field) {
  if (!v.is_number()) parse_fail(field, "expected a number");
  return v.get<double>();
}

int get_int(const json& v, const std::string& field) {
  if (!v.is_number_integer()) parse_fail(field, "expected an integer");
  return v.get<int>();
}

std::string get_string(const json& v, const std::string& field) {
  if (!v.is_string()) parse_fail(field, "expected a string");
  return v.get<std::string>();
}

double opt_number(const json& obj, const std::string& field, const char* key, double dflt) {
  auto it = obj.find(key);
  return it == obj.end() ? dflt : get_number(*it, field + "." + key);
}

Aircraft parse_aircraft(const json& a, const std::string& field) {
  check_keys(a, field, {"prep_time", "dispersant_efficiency"});
  return {get_number(need(a, field, "prep_time"), field + ".prep_time"),
          get_number(need(a, field, "dispersant_efficiency"),
                     field + ".dispersant_efficiency")};
}

}  // namespace

Scenario scenario_from_json(const json& doc) {
  check_keys(doc, "", {"sectors", "adjacency", "source", "spill", "physics", "inventory"});
  Scenario s;

  const auto& sectors = need(doc, "", "sectors");
  if (!sectors.is_array()) parse_fail("sectors", "expected an array");
  for (std::size_t i = 0; i < sectors.size(); ++i) {
    const auto field = fmt::format("sectors[{}]", i);
    const auto& e = sectors[i];
    check_keys(e, field, {"id", "kind", "sensitive", "span"});
    Sector sec;
    sec.id = get_string(need(e, field, "id"), field + ".id");
    const auto kind = get_string(need(e, field, "kind"), field + ".kind");
    if (kind == "sea") {
      sec.kind = SectorKind::Sea;
    } else if (kind == "shore") {
      sec.kind = SectorKind::Shore;
    } else {
      parse_fail(field + ".kind", "expected \"sea\" or \"shore\"");
    }
    if (auto it = e.find("sensitive"); it != e.end()) {
      if (!it->is_boolean()) parse_fail(field + ".sensitive", "expected a boolean");
      sec.sensitive = it->get<bool>();
    }
    sec.span = get_number(need(e, field, "span"), field + ".span");
    if (sec.sensitive) s.sensitive_targets.push_back(sec.id);
    s.sectors.push_back(std::move(sec));
  }

  const auto& adj = need(doc, "", "adjacency");
  if (!adj.is_array()) parse_fail("adjacency", "expected an array");
  for (std::size_t i = 0; i < adj.size(); ++i) {
    const auto field = fmt::format("adjacency[{}]", i);
    if (!adj[i].is_array() || adj[i].size() != 2) parse_fail(field, "expected [from, to]");
    s.adjacency.emplace_back(get_string(adj[i][0], field), get_string(adj[i][1], field));
  }

  s.source = get_string(need(doc, "", "source"), "source");

  const auto& spill = need(doc, "", "spill");
  check_keys(spill, "spill", {"rate", "duration"});
  s.spill_rate = get_number(need(spill, "spill", "rate"), "spill.rate");
  s.spill_duration = get_int(need(spill, "spill", "duration"), "spill.duration");

  const auto& phys = need(doc, "", "physics");
  check_keys(phys, "physics",
             {"horizon", "spread_rate", "uncertainty_factor", "natural_decay",
              "spread_profile", "thickness", "reference_thickness", "hypotheses"});
  if (auto it = phys.find("horizon"); it != phys.end()) {
    s.horizon = get_int(*it, "physics.horizon");
  }
  s.spread_rate = get_number(need(phys, "physics", "spread_rate"), "physics.spread_rate");
  s.uncertainty_factor = get_number(need(phys, "physics", "uncertainty_factor"),
                                    "physics.uncertainty_factor");
  s.natural_decay = opt_number(phys, "physics", "natural_decay", 0.0);
  if (auto it = phys.find("spread_profile"); it != phys.end()) {
    if (!it->is_array()) parse_fail("physics.spread_profile", "expected an array");
    for (const auto& p : *it) s.spread_profile.push_back(get_number(p, "physics.spread_profile"));
  }
  if (auto it = phys.find("thickness"); it != phys.end()) {
    if (it->is_number()) {
      s.thickness_default = it->get<double>();
    } else {
      check_keys(*it, "physics.thickness", {"default", "sectors"});
      s.thickness_default = get_number(need(*it, "physics.thickness", "default"),
                                       "physics.thickness.default");
      if (auto sit = it->find("sectors"); sit != it->end()) {
        if (!sit->is_object()) parse_fail("physics.thickness.sectors", "expected an object");
        for (const auto& [id, t] : sit->items()) {
          s.thickness[id] = get_number(t, "physics.thickness.sectors." + id);
        }
      }
    }
  }
  s.reference_thickness = opt_number(phys, "physics", "reference_thickness", s.thickness_default);
  if (auto it = phys.find("hypotheses"); it != phys.end()) {
    if (!it->is_array()) parse_fail("physics.hypotheses", "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const auto field = fmt::format("physics.hypotheses[{}]", i);
      const auto& h = (*it)[i];
      check_keys(h, field, {"weight", "spread_rate"});
      s.hypotheses.push_back({get_number(need(h, field, "weight"), field + ".weight"),
                              get_number(need(h, field, "spread_rate"), field + ".spread_rate")});
    }
  }

  const auto& inv = need(doc, "", "inventory");
  check_keys(inv, "inventory", {"booms", "aircraft", "containment", "relocation_delay"});
  const auto& booms = need(inv, "inventory", "booms");
  if (!booms.is_array()) parse_fail("inventory.booms", "expected an array");
  for (std::size_t i = 0; i < booms.size(); ++i) {
    const auto field = fmt::format("inventory.booms[{}]", i);
    const auto& b = booms[i];
    check_keys(b, field, {"id", "length", "staging_site", "transit_time"});
    Boom boom;
    boom.id = get_string(need(b, field, "id"), field + ".id");
    boom.length = get_number(need(b, field, "length"), field + ".length");
    boom.staging_site = get_string(need(b, field, "staging_site"), field + ".staging_site");
    const auto& tt = need(b, field, "transit_time");
    if (!tt.is_object()) parse_fail(field + ".transit_time", "expected an object");
    for (const auto& [sec, hours] : tt.items()) {
      boom.transit_time[sec] = get_number(hours, field + ".transit_time." + sec);
    }
    s.inventory.booms.push_back(std::move(boom));
  }
  const auto& air = need(inv, "inventory", "aircraft");
  if (air.is_array()) {
    for (std::size_t i = 0; i < air.size(); ++i) {
      s.inventory.aircraft.push_back(
          parse_aircraft(air[i], fmt::format("inventory.aircraft[{}]", i)));
    }
  } else {
    s.inventory.aircraft.push_back(parse_aircraft(air, "inventory.aircraft"));
  }
  if (auto it = inv.find("containment"); it != inv.end()) {
    check_keys(*it, "inventory.containment", {"max_fraction", "exponent"});
    s.inventory.containment.max_fraction =
        opt_number(*it, "inventory.containment", "max_fraction", 0.9);
    s.inventory.containment.exponent = opt_number(*it, "inventory.containment", "exponent", 1.0);
  }
  if (auto it = inv.find("relocation_delay"); it != inv.end()) {
    s.inventory.relocation_delay = get_int(*it, "inventory.relocation_delay");
  }
  return s;
}

ordered_json scenario_to_json(const Scenario& s) {
  ordered_json doc;
  ordered_json sectors = ordered_json::array();
  for (const auto& sec : s.sectors) {
    ordered_json e;
    e["id"] = sec.id;
    e["kind"] = sec.kind == SectorKind::Sea ? "sea" : "shore";
    if (sec.sensitive) e["sensitive"] = true;
    e["span"] = sec.span;
    sectors.push_back(std::move(e));
  }
  doc["sectors"] = std::move(sectors);
  ordered_json adj = ordered_json::array();
  for (const auto& [from, to] : s.adjacency) adj.push_back({from, to});
  doc["adjacency"] = std::move(adj);
  doc["source"] = s.source;
  doc["spill"] = {{"rate", s.spill_rate}, {"duration", s.spill_duration}};

  ordered_json phys;
  phys["horizon"] = s.horizon;
  phys["spread_rate"] = s.spread_rate;
  phys["uncertainty_factor"] = s.uncertainty_factor;
  if (s.natural_decay != 0.0) phys["natural_decay"] = s.natural_decay;
  if (!s.spread_profile.empty()) phys["spread_profile"] = s.spread_profile;
  ordered_json thick;
  thick["default"] = s.thickness_default;
  if (!s.thickness.empty()) {
    ordered_json per;
    for (const auto& [id, t] : s.thickness) per[id] = t;
    thick["sectors"] = std::move(per);
  }
  phys["thickness"] = std::move(thick);
  phys["reference_thickness"] = s.reference_thickness;
  if (!s.hypotheses.empty()) {
    ordered_json hs = ordered_json::array();
    for (const auto& h : s.hypotheses) {
      hs.push_back({{"weight", h.weight}, {"spread_rate", h.spread_rate}});
    }
    phys["hypotheses"] = std::move(hs);
  }
  doc["physics"] = std::move(phys);

  ordered_json inv;
  ordered_json booms = ordered_json::array();
  for (const auto& b : s.inventory.booms) {
    ordered_json e;
    e["id"] = b.id;
    e["length"] = b.length;
    e["staging_site"] = b.staging_site;
    ordered_json tt = ordered_json::object();
    for (const auto& [sec, t] : b.transit_time) tt[sec] = t;
    e["transit_time"] = std::move(tt);
    booms.push_back(std::move(e));
  }
  inv["booms"] = std::move(booms);
  auto aircraft_json = [](const Aircraft& a) {
    return ordered_json{{"prep_time", a.prep_time},
                        {"dispersant_efficiency", a.dispersant_efficiency}};
  };
  if (s.inventory.aircraft.size() == 1) {
    inv["aircraft"] = aircraft_json(s.inventory.aircraft.front());
  } else {
    ordered_json arr = ordered_json::array();
    for (const auto& a : s.inventory.aircraft) arr.push_back(aircraft_json(a));
    inv["aircraft"] = std::move(arr);
  }
  inv["containment"] = {{"max_fraction", s.inventory.containment.max_fraction},
                        {"exponent", s.inventory.containment.exponent}};
  inv["relocation_delay"] = s.inventory.relocation_delay;
  doc["inventory"] = std::move(inv);
  return doc;
}

Scenario parse_scenario(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ScenarioError(ScenarioError::Kind::Parse, std::string("malformed JSON: ") + e.what());
  }
  Scenario s = scenario_from_json(doc);
  if (auto v = validate(s); !v.empty()) {
    std::string msg = "invalid scenario:";
    for (const auto& line : v) msg += "\n  " + line;
    throw ScenarioError(ScenarioError::Kind::Validation, msg);
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ScenarioError(ScenarioError::Kind::Parse,
                        fmt::format("cannot open scenario file '{}'", path.string()));
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string serialize_scenario(const Scenario& s) {
  return scenario_to_json(s).dump(2) + "\n";
}

}  // namespace spillplan
