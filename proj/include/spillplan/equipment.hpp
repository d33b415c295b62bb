#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "spillplan/oil_state.hpp"
#include "spillplan/scenario.hpp"

namespace spillplan {

inline constexpr int kUntilHorizon = std::numeric_limits<int>::max();

// Boom layer of `coverage` times the sector span, active for periods in
// [arrival_period, end_period).
struct BoomAssignment {
  std::string sector;
  int coverage = 0;
  int arrival_period = 0;
  int end_period = kUntilHorizon;

  bool operator==(const BoomAssignment&) const = default;
};

enum class AircraftKind { Surveil, Disperse };

struct AircraftAction {
  AircraftKind kind = AircraftKind::Surveil;
  std::string sector;  // disperse only
  int execute_period = 0;

  bool operator==(const AircraftAction&) const = default;
};

struct Relocation {
  std::string boom;
  std::string from;
  std::string to;
  int depart_period = 0;
  int arrive_period = 0;

  bool operator==(const Relocation&) const = default;
};

struct Deployment {
  std::vector<BoomAssignment> booms;
  std::optional<AircraftAction> aircraft;
  std::vector<Relocation> relocations;

  bool operator==(const Deployment&) const = default;
};

const char* to_string(AircraftKind k);

// Fraction of oil held by boom at the given coverage. Zero at coverage 0,
// strictly increasing over {1,2,3}, scaled down on slicks thinner than the
// reference thickness. Throws std::invalid_argument outside {0,1,2,3}.
double boom_removal_fraction(int coverage, double thickness,
                             const ContainmentParams& params = {},
                             double reference_thickness = 1.0);

// Independent removal layers compose as 1 - prod(1 - f_i).
double compose_fractions(const std::vector<double>& layers);

// Per-sector fraction removed in `period`. On shore sectors the fraction
// applies to fresh arrivals only (see OilState::landed).
std::vector<double> removal_fractions(const Scenario& s, const Deployment& d, int period);

// e_j(s_j): barrels removed per sector in `period`.
std::vector<double> removal_vector(const Scenario& s, const Deployment& d,
                                   const OilState& state, int period);

// depart_period + ceil(transit hours). Throws std::out_of_range for an
// unknown boom or a sector missing from its transit table.
int arrival_period(const EquipmentInventory& inv, const std::string& boom_id,
                   const std::string& target, int depart_period);

// Period at which a deployed boom, moved at depart_period, is usable again
// at a new target.
inline int relocation_arrival(const EquipmentInventory& inv, int depart_period) {
  return depart_period + inv.relocation_delay;
}

}  // namespace spillplan
