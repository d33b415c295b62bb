#include "spillplan/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/core.h>

namespace spillplan {

Matrix spreading_matrix(const Scenario& s, double rate) {
  const std::size_t n = s.sector_count();
  Matrix m = Matrix::identity(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (s.is_shore(i)) continue;
    const auto nbrs = s.out_neighbors(i);
    if (nbrs.empty()) continue;
    m(i, i) = 1.0 - rate;
    const double share = rate / static_cast<double>(nbrs.size());
    for (std::size_t k : nbrs) m(i, k) = share;
  }
  return m;
}

Matrix apply_uncertainty(const Matrix& mprime, const Matrix& p_matrix) {
  return multiply(p_matrix, mprime);
}

TransitionSet build_transitions(const Scenario& s, double spread_rate) {
  TransitionSet t;
  t.uncertainty = spreading_matrix(s, s.uncertainty_factor);
  t.observed.reserve(s.horizon);
  t.uncertain.reserve(s.horizon);
  const Matrix flat = spreading_matrix(s, spread_rate);
  for (int j = 0; j < s.horizon; ++j) {
    Matrix mprime = s.spread_profile.empty()
                        ? flat
                        : spreading_matrix(s, spread_rate * s.spread_profile[j]);
    t.uncertain.push_back(apply_uncertainty(mprime, t.uncertainty));
    t.observed.push_back(std::move(mprime));
  }
  return t;
}

TransitionSet build_transitions(const Scenario& s) { return build_transitions(s, s.spread_rate); }

OilState propagate(const OilState& state, const Matrix& m, std::span<const double> removal) {
  const std::size_t n = m.size();
  if (state.quantities.size() != n || removal.size() != n) {
    throw std::invalid_argument("state/removal/matrix dimension mismatch");
  }
  std::vector<double> remaining(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double q = state.quantities[i];
    if (removal[i] < 0.0 || removal[i] > q + 1e-12 * std::max(1.0, q)) {
      throw std::invalid_argument(
          fmt::format("removal {} outside [0, {}] in sector {}", removal[i], q, i));
    }
    remaining[i] = std::max(q - removal[i], 0.0);
  }
  OilState next;
  next.quantities = left_multiply(remaining, m);
  next.landed.assign(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    if (m(k, k) == 1.0) next.landed[k] = remaining[k];
  }
  next.fractile_p = state.fractile_p;
  next.period = state.period + 1;
  return next;
}

OilState step(const Scenario& s, const Matrix& m, const Deployment& d, const OilState& state,
              std::vector<double>* removal_out) {
  OilState injected = state;
  injected.quantities[s.source_index()] += s.injection(state.period);
  auto removal = removal_vector(s, d, injected, state.period);
  OilState next = propagate(injected, m, removal);
  if (removal_out) *removal_out = std::move(removal);
  return next;
}

OilState advance(const Scenario& s, std::span<const Matrix> matrices, const Deployment& d,
                 OilState start, int until_period) {
  if (until_period > static_cast<int>(matrices.size())) {
    throw std::out_of_range("advance past the horizon");
  }
  while (start.period < until_period) {
    start = step(s, matrices[start.period], d, start);
  }
  return start;
}

TrajectoryTrace run_trajectory(const Scenario& s, const TransitionSet& t, const Deployment& d,
                               std::optional<int> observe_at) {
  if (observe_at && (*observe_at < 0 || *observe_at >= s.horizon)) {
    throw std::out_of_range(fmt::format("observe_at {} outside [0, {})", *observe_at, s.horizon));
  }
  const auto matrices = t.regime(observe_at.has_value());
  TrajectoryTrace trace;
  trace.observed_at = observe_at;
  trace.states.reserve(s.horizon + 1);
  trace.states.push_back(OilState::zero(s.sector_count()));
  for (int j = 0; j < s.horizon; ++j) {
    std::vector<double> removal;
    trace.injections.push_back(s.injection(j));
    trace.states.push_back(step(s, matrices[j], d, trace.states.back(), &removal));
    trace.removals.push_back(std::move(removal));
  }
  return trace;
}

TrajectoryTrace run_trajectory(const Scenario& s, const Deployment& d,
                               std::optional<int> observe_at) {
  return run_trajectory(s, build_transitions(s), d, observe_at);
}

double sensitive_mass(const Scenario& s, const OilState& state) {
  double total = 0.0;
  for (std::size_t k : s.sensitive_indices()) total += state.quantities[k];
  return total;
}

double shore_mass(const Scenario& s, const OilState& state) {
  double total = 0.0;
  for (std::size_t k = 0; k < s.sector_count(); ++k) {
    if (s.is_shore(k)) total += state.quantities[k];
  }
  return total;
}

std::vector<std::size_t> support(const OilState& state, double threshold) {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < state.quantities.size(); ++k) {
    if (state.quantities[k] > threshold) out.push_back(k);
  }
  return out;
}

double LinearValue::evaluate(const OilState& state) const {
  double v = constant;
  for (std::size_t k = 0; k < on_quantities.size(); ++k) {
    v += on_quantities[k] * state.quantities[k] + on_landed[k] * state.landed[k];
  }
  return v;
}

LinearValue terminal_value_functional(const Scenario& s, std::span<const Matrix> matrices,
                                      const Deployment& d, int from_period) {
  const std::size_t n = s.sector_count();
  const int horizon = static_cast<int>(matrices.size());
  LinearValue v;
  v.on_quantities.assign(n, 0.0);
  v.on_landed.assign(n, 0.0);
  v.period = horizon;
  for (std::size_t k : s.sensitive_indices()) v.on_quantities[k] = 1.0;

  const std::size_t src = s.source_index();
  for (int j = horizon - 1; j >= from_period; --j) {
    const Matrix& m = matrices[j];
    const auto phi = removal_fractions(s, d, j);
    // Sensitivity to the post-removal vector u: u spreads by m, and on
    // absorbing rows u also becomes next period's landed oil.
    auto g = right_multiply(m, v.on_quantities);
    for (std::size_t i = 0; i < n; ++i) {
      if (m(i, i) == 1.0) g[i] += v.on_landed[i];
    }
    LinearValue prev;
    prev.on_quantities.assign(n, 0.0);
    prev.on_landed.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      prev.on_quantities[i] = g[i] * (1.0 - phi[i]);
      if (s.is_shore(i)) prev.on_landed[i] = g[i] * phi[i];
    }
    prev.constant = v.constant + prev.on_quantities[src] * s.injection(j);
    prev.period = j;
    v = std::move(prev);
  }
  return v;
}

}  // namespace spillplan
