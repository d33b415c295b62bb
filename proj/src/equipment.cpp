#include "spillplan/equipment.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/core.h>

namespace spillplan {

const char* to_string(AircraftKind k) {
  return k == AircraftKind::Surveil ? "surveil" : "disperse";
}

double boom_removal_fraction(int coverage, double thickness, const ContainmentParams& params,
                             double reference_thickness) {
  if (coverage < 0 || coverage > 3) {
    throw std::invalid_argument(fmt::format("coverage {} outside {{0,1,2,3}}", coverage));
  }
  if (coverage == 0) return 0.0;
  const double curve = params.max_fraction * std::pow(coverage / 3.0, params.exponent);
  const double thin = std::min(1.0, thickness / reference_thickness);
  return curve * thin;
}

double compose_fractions(const std::vector<double>& layers) {
  double pass = 1.0;
  for (double f : layers) pass *= 1.0 - f;
  return 1.0 - pass;
}

std::vector<double> removal_fractions(const Scenario& s, const Deployment& d, int period) {
  const std::size_t n = s.sector_count();
  std::vector<std::vector<double>> layers(n);

  for (const auto& b : d.booms) {
    if (b.coverage == 0 || period < b.arrival_period || period >= b.end_period) continue;
    const std::size_t k = s.require_index(b.sector);
    layers[k].push_back(boom_removal_fraction(b.coverage, s.thickness_at(k),
                                              s.inventory.containment, s.reference_thickness));
  }
  if (d.aircraft && d.aircraft->kind == AircraftKind::Disperse &&
      d.aircraft->execute_period == period && !s.inventory.aircraft.empty()) {
    const std::size_t k = s.require_index(d.aircraft->sector);
    layers[k].push_back(s.inventory.aircraft.front().dispersant_efficiency);
  }
  if (s.natural_decay > 0.0) {
    for (std::size_t k = 0; k < n; ++k) {
      if (!s.is_shore(k)) layers[k].push_back(s.natural_decay);
    }
  }

  std::vector<double> phi(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) phi[k] = compose_fractions(layers[k]);
  return phi;
}

std::vector<double> removal_vector(const Scenario& s, const Deployment& d,
                                   const OilState& state, int period) {
  const auto phi = removal_fractions(s, d, period);
  std::vector<double> r(phi.size(), 0.0);
  for (std::size_t k = 0; k < phi.size(); ++k) {
    if (phi[k] == 0.0) continue;
    const double base = s.is_shore(k) ? state.quantities[k] - state.landed[k]
                                      : state.quantities[k];
    r[k] = std::clamp(phi[k] * std::max(base, 0.0), 0.0, state.quantities[k]);
  }
  return r;
}

int arrival_period(const EquipmentInventory& inv, const std::string& boom_id,
                   const std::string& target, int depart_period) {
  auto it = std::find_if(inv.booms.begin(), inv.booms.end(),
                         [&](const Boom& b) { return b.id == boom_id; });
  if (it == inv.booms.end()) throw std::out_of_range(fmt::format("unknown boom '{}'", boom_id));
  auto tt = it->transit_time.find(target);
  if (tt == it->transit_time.end()) {
    throw std::out_of_range(fmt::format("boom '{}' has no transit time to '{}'", boom_id, target));
  }
  return depart_period + static_cast<int>(std::ceil(tt->second));
}

}  // namespace spillplan
