#pragma once

// The reciprocation recurrences under an arbitrary activation schedule.
//
// State is stored as last-action values: state[t][(i,j)] = x_{i,j}(t). Agents
// that do not act at t keep their outgoing values bit-for-bit; acting agents
// read only the state of step t-1.

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "recip/model.hpp"

namespace recip {

struct Converged {
  ActionVector limit;
  TimeStep at_step = 0;
};

struct PeriodTwo {
  ActionVector first;   // state[t-1]
  ActionVector second;  // state[t]
  TimeStep at_step = 0;
};

struct MaxStepsReached {};

using Classification = std::variant<Converged, PeriodTwo, MaxStepsReached>;

enum class ClassificationKind { Converged, PeriodTwo, MaxStepsReached };

std::string_view to_string(ClassificationKind k);

struct Trajectory {
  std::vector<ActionVector> states;
  TimeStep horizon_used = 0;
  Classification classification = MaxStepsReached{};

  ClassificationKind kind() const noexcept {
    return static_cast<ClassificationKind>(classification.index());
  }
  const ActionVector& final_state() const { return states.back(); }
};

struct SimulationOptions {
  TimeStep horizon = 10'000;
  double tolerance = 1e-10;
  /// Consecutive steps that must satisfy the convergence (or period-two)
  /// test. The effective window is max(window, schedule.activity_bound()).
  int window = 5;
};

/// One application of the update rules for the agents in `active`.
ActionVector step(const ActionVector& state, std::span<const AgentSpec> agents,
                  const InteractionGraph& g, std::span<const AgentId> active);

/// Iterates `step` from the standard initialization x_{i,j}(0) = k_i until the
/// run is classified or the horizon is exhausted. PeriodTwo also requires the
/// one-step difference to hold at >= 99.9% of its previous value, so a slowly
/// damped alternation is not mistaken for a cycle. Throws InvariantViolation if
/// any entry leaves [min k, max k] by more than 1e-12.
Trajectory simulate(std::span<const AgentSpec> agents, const InteractionGraph& g,
                    const ActivationSchedule& schedule, const SimulationOptions& options = {});
Trajectory simulate(const Scenario& scenario, const SimulationOptions& options = {});

struct RateEstimate {
  /// Per-step contraction factor; empty when the decay is not geometric.
  std::optional<double> rate;
  double r_squared = 0.0;
  std::size_t points = 0;
  std::string note;

  bool geometric() const noexcept { return rate.has_value(); }
};

/// Least-squares fit of log(sup-norm residual to the final state) against t
/// over the last half of a converged trajectory.
RateEstimate estimate_rate(const Trajectory& traj);

}  // namespace recip
