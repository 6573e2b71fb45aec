#pragma once

// Closed-form action limits for every solved case, plus the endpoint rule for
// choosing a reciprocation coefficient that maximizes the common limit.

#include <array>
#include <optional>
#include <span>
#include <string>
#include <variant>

#include "recip/model.hpp"
#include "recip/spectral.hpp"

namespace recip {

/// Two agents, neighborhood coefficient folded into the direct one: with a
/// single neighbor, r'_i g_i / d(i) = r'_i x_{j,i}, so r_eff = r + r'.
struct TwoAgentCase {
  std::array<AgentSpec, 2> agents;
  ActivationSchedule::Kind schedule = ActivationSchedule::Kind::Synchronous;

  static TwoAgentCase from_agents(std::span<const AgentSpec> agents,
                                  ActivationSchedule::Kind schedule);
  /// Throws InvalidArgument unless both r_prime are 0 and the specs are valid.
  void validate() const;
};

struct PerAgent {
  double first = 0.0;   // L_x: limit of x_{0,1}
  double second = 0.0;  // L_y: limit of x_{1,0}
};
struct Common {
  double value = 0.0;
};
struct PerEdge {
  ActionVector values;
};
struct NonConvergent {
  std::string reason;
};
struct Unknown {
  std::string reason;
};

enum class LimitKind { PerAgent, Common, PerEdge, NonConvergent, Unknown };
std::string_view to_string(LimitKind k);

enum class LimitSource { ClosedForm, LinearSolve, Simulation, None };
std::string_view to_string(LimitSource s);

struct LimitResult {
  std::variant<PerAgent, Common, PerEdge, NonConvergent, Unknown> value;
  /// Human-readable name of the rule that produced the result.
  std::string rule;
  LimitSource source = LimitSource::None;

  LimitKind kind() const noexcept { return static_cast<LimitKind>(value.index()); }
  bool determinate() const noexcept { return kind() != LimitKind::Unknown; }
};

LimitResult two_agent_limit(const TwoAgentCase& c);

/// Common limit sum_i (d(i)/(r_i+r'_i)) k_i / sum_i d(i)/(r_i+r'_i) of an
/// all-Floating synchronous network. Throws HypothesesNotMet naming the failed
/// hypothesis.
LimitResult network_floating_limit(std::span<const AgentSpec> agents, const InteractionGraph& g);

/// Per-edge limits of a synchronous network with at least one Fixed agent via
/// (I - A) x = k'.
LimitResult network_mixed_limit(std::span<const AgentSpec> agents, const InteractionGraph& g);

/// Chooses the best closed form for a scenario; Unknown where none is known.
LimitResult scenario_limit(const Scenario& s);

/// Expands a determinate result to one value per directed edge.
std::optional<ActionVector> edge_limits(const LimitResult& r, const InteractionGraph& g);

enum class Coefficient { R, RPrime };

struct OptimalCoefficient {
  enum class Choice { Lower, Upper, Arbitrary };
  Choice choice = Choice::Arbitrary;
  /// a or b; for Arbitrary, the lower bound (any value is optimal).
  double value = 0.0;
  /// sum_{j!=i} w_j k_j - k_i sum_{j!=i} w_j with w_j = d(j)/(r_j+r'_j).
  double sign_expr = 0.0;
};

std::string_view to_string(OptimalCoefficient::Choice c);

/// Which endpoint of [a, b] maximizes the all-Floating common limit when agent
/// i picks r_i (or r'_i). Requires a > 0 and valid coefficients across [a,b].
OptimalCoefficient optimal_coefficient(std::span<const AgentSpec> agents,
                                       const InteractionGraph& g, AgentId i, Coefficient which,
                                       double lower, double upper);

}  // namespace recip
