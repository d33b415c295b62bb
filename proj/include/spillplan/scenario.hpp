#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace spillplan {

enum class SectorKind { Sea, Shore };

struct Sector {
  std::string id;
  SectorKind kind = SectorKind::Sea;
  bool sensitive = false;
  double span = 1.0;  // meters; boom sizing basis

  bool operator==(const Sector&) const = default;
};

struct Boom {
  std::string id;
  double length = 0.0;  // meters
  std::string staging_site;
  std::map<std::string, double> transit_time;  // sector id -> hours

  bool operator==(const Boom&) const = default;
};

struct Aircraft {
  double prep_time = 0.0;  // hours until the first sortie
  double dispersant_efficiency = 0.0;

  bool operator==(const Aircraft&) const = default;
};

// f(c) = max_fraction * (c / 3)^exponent for c in {1,2,3}.
struct ContainmentParams {
  double max_fraction = 0.9;
  double exponent = 1.0;

  bool operator==(const ContainmentParams&) const = default;
};

struct EquipmentInventory {
  std::vector<Boom> booms;
  std::vector<Aircraft> aircraft;
  ContainmentParams containment;
  int relocation_delay = 2;  // periods lost when a deployed boom is moved

  bool operator==(const EquipmentInventory&) const = default;
};

// One possible world for the surveillance branch: the true spreading rate
// and its prior weight.
struct TrajectoryHypothesis {
  double weight = 1.0;
  double spread_rate = 0.0;

  bool operator==(const TrajectoryHypothesis&) const = default;
};

struct Scenario {
  std::vector<Sector> sectors;
  std::vector<std::pair<std::string, std::string>> adjacency;
  std::string source;
  double spill_rate = 0.0;  // barrels per hour
  int spill_duration = 0;   // hours
  int horizon = 24;         // one-hour periods
  double spread_rate = 0.0;
  double uncertainty_factor = 0.0;
  double natural_decay = 0.0;          // extension; fraction of sea oil lost per period
  std::vector<double> spread_profile;  // optional per-period multiplier on spread_rate
  double thickness_default = 1.0;      // millimeters
  std::map<std::string, double> thickness;
  double reference_thickness = 1.0;
  std::vector<TrajectoryHypothesis> hypotheses;
  EquipmentInventory inventory;
  std::vector<std::string> sensitive_targets;  // derived from sector flags

  bool operator==(const Scenario&) const = default;

  std::size_t sector_count() const { return sectors.size(); }
  std::optional<std::size_t> index_of(const std::string& id) const;
  std::size_t require_index(const std::string& id) const;
  std::size_t source_index() const { return require_index(source); }
  bool is_shore(std::size_t i) const { return sectors[i].kind == SectorKind::Shore; }
  double thickness_at(std::size_t i) const;
  std::vector<std::size_t> out_neighbors(std::size_t i) const;
  std::vector<std::size_t> sensitive_indices() const;

  // Injection into the source sector at the start of period j.
  double injection(int period) const {
    return period < spill_duration ? spill_rate : 0.0;
  }

  // Hypotheses from the file, or the nominal spread_rate with weight 1.
  std::vector<TrajectoryHypothesis> effective_hypotheses() const;
};

class ScenarioError : public std::runtime_error {
 public:
  enum class Kind { Parse, Validation };
  ScenarioError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// Empty iff every invariant holds. Each entry reads "<field>: <rule>".
std::vector<std::string> validate(const Scenario& s);

Scenario scenario_from_json(const nlohmann::json& doc);
nlohmann::ordered_json scenario_to_json(const Scenario& s);

// Parses and validates; throws ScenarioError naming the offending field.
Scenario load_scenario(const std::filesystem::path& path);
Scenario parse_scenario(const std::string& text);
std::string serialize_scenario(const Scenario& s);

}  // namespace spillplan
