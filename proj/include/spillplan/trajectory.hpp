#pragma once

#include <optional>
#include <span>
#include <vector>

#include "spillplan/equipment.hpp"
#include "spillplan/matrix.hpp"
#include "spillplan/oil_state.hpp"
#include "spillplan/scenario.hpp"

namespace spillplan {

// Per-period spreading matrices. `observed[j]` is M'_j (true spreading),
// `uncertain[j]` is P * M'_j, the wider median-fractile spreading used
// while the slick has not been observed.
struct TransitionSet {
  std::vector<Matrix> observed;
  std::vector<Matrix> uncertain;
  Matrix uncertainty;

  std::span<const Matrix> regime(bool observed_regime) const {
    return observed_regime ? std::span<const Matrix>(observed)
                           : std::span<const Matrix>(uncertain);
  }
};

// Local spreading rule: a sea sector keeps 1 - rate and sends rate/|N(i)|
// to each out-neighbour; shore rows are identity. A sea sector without
// neighbours keeps everything.
Matrix spreading_matrix(const Scenario& s, double rate);

TransitionSet build_transitions(const Scenario& s);
// Same construction with the base spreading rate replaced (one hypothesis).
TransitionSet build_transitions(const Scenario& s, double spread_rate);

// P * M'. Throws std::invalid_argument on dimension mismatch.
Matrix apply_uncertainty(const Matrix& mprime, const Matrix& p_matrix);

// s_{j+1} = M_j [s_j - e_j]. Throws std::invalid_argument when the removal
// is negative or exceeds the quantity in any sector.
OilState propagate(const OilState& state, const Matrix& m, std::span<const double> removal);

struct TrajectoryTrace {
  std::vector<OilState> states;  // start of period j, before injection; j = 0..T
  std::optional<int> observed_at;
  std::vector<std::vector<double>> removals;  // per period j < T
  std::vector<double> injections;             // per period j < T
};

// Runs periods 0..T-1. Without an observation the uncertain matrices are
// used throughout; with one, the whole trace is recomputed with the
// observed matrices (the knowledge collapse).
TrajectoryTrace run_trajectory(const Scenario& s, const TransitionSet& t,
                               const Deployment& d, std::optional<int> observe_at);
TrajectoryTrace run_trajectory(const Scenario& s, const Deployment& d,
                               std::optional<int> observe_at);

// One period: inject, remove, spread. Returns the next start-of-period
// state; the removal applied is written to `removal_out` when non-null.
OilState step(const Scenario& s, const Matrix& m, const Deployment& d, const OilState& state,
              std::vector<double>* removal_out = nullptr);

// Advances `start` (at start.period) to the start of `until_period`.
OilState advance(const Scenario& s, std::span<const Matrix> matrices, const Deployment& d,
                 OilState start, int until_period);

double sensitive_mass(const Scenario& s, const OilState& state);
double shore_mass(const Scenario& s, const OilState& state);

// Sectors holding more than `threshold` barrels.
std::vector<std::size_t> support(const OilState& state, double threshold = 1e-6);

// Affine functional V(x) = q . quantities + l . landed + c giving the
// terminal sensitive-shore mass reached from a start-of-period state.
struct LinearValue {
  std::vector<double> on_quantities;
  std::vector<double> on_landed;
  double constant = 0.0;
  int period = 0;

  double evaluate(const OilState& state) const;
};

// Adjoint sweep from T back to `from_period` under a fixed deployment.
// By linearity of the dynamics this is exact for every start state.
LinearValue terminal_value_functional(const Scenario& s, std::span<const Matrix> matrices,
                                      const Deployment& d, int from_period);

}  // namespace spillplan
