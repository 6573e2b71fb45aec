#include "recip/limits.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace recip {

std::string_view to_string(LimitKind k) {
  switch (k) {
    case LimitKind::PerAgent: return "PerAgent";
    case LimitKind::Common: return "Common";
    case LimitKind::PerEdge: return "PerEdge";
    case LimitKind::NonConvergent: return "NonConvergent";
    case LimitKind::Unknown: return "Unknown";
  }
  return "Unknown";
}

std::string_view to_string(LimitSource s) {
  switch (s) {
    case LimitSource::ClosedForm: return "closed_form";
    case LimitSource::LinearSolve: return "linear_solve";
    case LimitSource::Simulation: return "simulation";
    case LimitSource::None: return "none";
  }
  return "none";
}

std::string_view to_string(OptimalCoefficient::Choice c) {
  switch (c) {
    case OptimalCoefficient::Choice::Lower: return "lower";
    case OptimalCoefficient::Choice::Upper: return "upper";
    case OptimalCoefficient::Choice::Arbitrary: return "arbitrary";
  }
  return "arbitrary";
}

// ---------------------------------------------------------------------------
// Two agents

TwoAgentCase TwoAgentCase::from_agents(std::span<const AgentSpec> agents,
                                       ActivationSchedule::Kind schedule) {
  if (agents.size() != 2) {
    throw Error(ErrorKind::InvalidArgument,
                "a two-agent case needs exactly 2 agents, got " + std::to_string(agents.size()));
  }
  TwoAgentCase c;
  c.schedule = schedule;
  for (std::size_t i = 0; i < 2; ++i) {
    agents[i].validate();
    c.agents[i] = agents[i];
    c.agents[i].r = std::min(1.0, agents[i].r + agents[i].r_prime);
    c.agents[i].r_prime = 0.0;
  }
  return c;
}

void TwoAgentCase::validate() const {
  for (const auto& a : agents) {
    a.validate();
    if (a.r_prime != 0.0) {
      throw Error(ErrorKind::InvalidArgument, "two-agent case requires r_prime = 0");
    }
  }
}

namespace {

using Kind = ActivationSchedule::Kind;

LimitResult closed(std::variant<PerAgent, Common, PerEdge, NonConvergent, Unknown> v,
                   std::string rule) {
  LimitResult r{std::move(v), std::move(rule), LimitSource::ClosedForm};
  if (r.kind() == LimitKind::NonConvergent || r.kind() == LimitKind::Unknown) {
    r.source = LimitSource::None;
  }
  return r;
}

LimitResult floating_pair(double r1, double r2, double k1, double k2, Kind schedule) {
  const double sum = r1 + r2;
  if (sum == 0.0) {
    return closed(PerAgent{k1, k2}, "floating pair without reciprocation keeps kindness");
  }
  switch (schedule) {
    case Kind::Synchronous:
      if (sum < 2.0) {
        return closed(Common{(r2 * k1 + r1 * k2) / sum}, "floating pair, synchronous common limit");
      }
      if (k1 == k2) return closed(Common{k1}, "floating pair with equal kindness");
      return closed(NonConvergent{"period two: both agents copy each other and swap every step"},
                    "floating pair with r1 = r2 = 1");
    case Kind::Alternating: {
      const double denom = r1 + r2 - r1 * r2;
      return closed(Common{(r2 * k1 + (r1 - r1 * r2) * k2) / denom},
                    "floating pair, alternating common limit");
    }
    case Kind::Periodic:
      if (k1 == k2) return closed(Common{k1}, "floating pair with equal kindness");
      return closed(Unknown{"the pair converges to a common value that depends on the activation "
                            "pattern; run simulate"},
                    "floating pair, general schedule");
  }
  return closed(Unknown{"unsupported schedule"}, "floating pair");
}

}  // namespace

LimitResult two_agent_limit(const TwoAgentCase& c) {
  c.validate();
  const AgentSpec& p = c.agents[0];
  const AgentSpec& q = c.agents[1];
  const double r1 = p.r, r2 = q.r, k1 = p.kindness, k2 = q.kindness;
  const bool fixed1 = p.attitude == Attitude::Fixed;
  const bool fixed2 = q.attitude == Attitude::Fixed;

  if (fixed1 && fixed2) {
    if (r1 * r2 < 1.0) {
      const double denom = 1.0 - r1 * r2;
      return closed(PerAgent{((1.0 - r1) * k1 + r1 * (1.0 - r2) * k2) / denom,
                             ((1.0 - r2) * k2 + r2 * (1.0 - r1) * k1) / denom},
                    "fixed pair limit");
    }
    // r1 = r2 = 1: each agent copies the other, exactly as a floating pair does.
    if (k1 == k2) return closed(Common{k1}, "fixed pair with equal kindness");
    if (c.schedule == Kind::Synchronous) {
      return closed(NonConvergent{"period two: both agents copy each other and swap every step"},
                    "fixed pair with r1 = r2 = 1");
    }
    return floating_pair(r1, r2, k1, k2, c.schedule);
  }

  if (!fixed1 && !fixed2) return floating_pair(r1, r2, k1, k2, c.schedule);

  // One Fixed agent i, one Floating agent j.
  const std::size_t i = fixed1 ? 0 : 1;
  const std::size_t j = 1 - i;
  const double ri = c.agents[i].r, rj = c.agents[j].r;
  const double ki = c.agents[i].kindness, kj = c.agents[j].kindness;
  if (ri == 1.0) {
    // With r_i = 1 the Fixed update ignores k_i and coincides with the Floating one.
    return floating_pair(r1, r2, k1, k2, c.schedule);
  }
  if (rj == 0.0) {
    const double fixed_action = (1.0 - ri) * ki + ri * kj;
    return closed(i == 0 ? PerAgent{fixed_action, kj} : PerAgent{kj, fixed_action},
                  "floating agent without reciprocation keeps kindness");
  }
  return closed(Common{ki}, "fixed-floating pair converges to the fixed agent's kindness");
}

// ---------------------------------------------------------------------------
// Networks

namespace {

void require_network_hypotheses(std::span<const AgentSpec> agents, const InteractionGraph& g,
                                const StructureReport& rep) {
  (void)g;
  if (!rep.all_rprime_positive) {
    for (std::size_t i = 0; i < agents.size(); ++i) {
      if (!(agents[i].r_prime > 0.0)) {
        throw Error(ErrorKind::HypothesesNotMet,
                    "all r' must be positive; agent " + std::to_string(i) + " has r' = " +
                        std::to_string(agents[i].r_prime));
      }
    }
  }
  if (!rep.aperiodic) {
    throw Error(ErrorKind::HypothesesNotMet,
                "aperiodicity: the graph has no odd cycle and no Floating agent has r + r' < 1");
  }
}

}  // namespace

LimitResult network_floating_limit(std::span<const AgentSpec> agents, const InteractionGraph& g) {
  const StructureReport rep = check_structure(agents, g);
  for (std::size_t i = 0; i < agents.size(); ++i) {
    if (agents[i].anchored()) {
      throw Error(ErrorKind::HypothesesNotMet,
                  "all agents must be Floating; agent " + std::to_string(i) + " is Fixed");
    }
  }
  require_network_hypotheses(agents, g, rep);

  double num = 0.0;
  double den = 0.0;
  for (AgentId i = 0; i < g.agent_count(); ++i) {
    const double w = g.degree(i) / (agents[i].r + agents[i].r_prime);
    num += w * agents[i].kindness;
    den += w;
  }
  return LimitResult{Common{num / den}, "all-floating weighted kindness average",
                     LimitSource::ClosedForm};
}

LimitResult network_mixed_limit(std::span<const AgentSpec> agents, const InteractionGraph& g) {
  const StructureReport rep = check_structure(agents, g);
  if (!rep.any_fixed) {
    throw Error(ErrorKind::HypothesesNotMet,
                "at least one agent must be Fixed with r + r' < 1");
  }
  require_network_hypotheses(agents, g, rep);

  const auto m = build_matrix(agents, g);
  const auto k = build_kindness_vector(agents, g);
  ActionVector x = solve_fixed_point(m, k);

  std::optional<double> shared;
  bool all_same = true;
  for (const auto& a : agents) {
    if (!a.anchored()) continue;
    if (!shared) shared = a.kindness;
    else if (*shared != a.kindness) all_same = false;
  }
  if (all_same) {
    const double tol = 1e-9 * std::max(1.0, std::abs(*shared));
    for (std::size_t e = 0; e < x.size(); ++e) {
      if (std::abs(x[e] - *shared) > tol) {
        throw Error(ErrorKind::InvariantViolation,
                    "shared Fixed kindness " + std::to_string(*shared) + " but edge " +
                        std::to_string(e) + " solves to " + std::to_string(x[e]));
      }
    }
  }
  return LimitResult{PerEdge{std::move(x)}, "mixed network fixed point", LimitSource::LinearSolve};
}

LimitResult scenario_limit(const Scenario& s) {
  if (s.agent_count() == 2) {
    return two_agent_limit(TwoAgentCase::from_agents(s.agents, s.schedule.kind()));
  }
  if (s.schedule.kind() != Kind::Synchronous) {
    return LimitResult{Unknown{"no closed form for asynchronous networks; run simulate"},
                       "asynchronous network", LimitSource::None};
  }
  const StructureReport rep = check_structure(s.agents, s.graph);
  switch (rep.verdict) {
    case LimitTheorem::AllFloatingNetwork: return network_floating_limit(s.agents, s.graph);
    case LimitTheorem::MixedNetwork: return network_mixed_limit(s.agents, s.graph);
    default:
      return LimitResult{Unknown{"network hypotheses fail (" + rep.explanation +
                                 "); run simulate"},
                         "no applicable theorem", LimitSource::None};
  }
}

std::optional<ActionVector> edge_limits(const LimitResult& r, const InteractionGraph& g) {
  const std::size_t m = g.directed_edge_count();
  switch (r.kind()) {
    case LimitKind::Common: return ActionVector(m, std::get<Common>(r.value).value);
    case LimitKind::PerEdge: return std::get<PerEdge>(r.value).values;
    case LimitKind::PerAgent: {
      if (g.agent_count() != 2) return std::nullopt;
      const auto& pa = std::get<PerAgent>(r.value);
      ActionVector v(m, 0.0);
      v[g.index_of(0, 1)] = pa.first;
      v[g.index_of(1, 0)] = pa.second;
      return v;
    }
    default: return std::nullopt;
  }
}

// ---------------------------------------------------------------------------

OptimalCoefficient optimal_coefficient(std::span<const AgentSpec> agents,
                                       const InteractionGraph& g, AgentId i, Coefficient which,
                                       double lower, double upper) {
  validate_agents(agents, g);
  if (i < 0 || i >= g.agent_count()) {
    throw Error(ErrorKind::InvalidAgent, "agent " + std::to_string(i) + " out of range");
  }
  if (!(lower > 0.0) || !(lower <= upper)) {
    throw Error(ErrorKind::InvalidArgument, "bounds must satisfy 0 < a <= b");
  }
  // The hypotheses must hold at both endpoints (and hence in between).
  std::vector<AgentSpec> probe(agents.begin(), agents.end());
  for (double v : {lower, upper}) {
    (which == Coefficient::R ? probe[i].r : probe[i].r_prime) = v;
    try {
      probe[i].validate();
    } catch (const Error& e) {
      throw Error(ErrorKind::HypothesesNotMet, "coefficient " + std::to_string(v) +
                                                   " is not admissible: " + e.message());
    }
    network_floating_limit(probe, g);
  }

  double weighted = 0.0;
  double weights = 0.0;
  for (AgentId j = 0; j < g.agent_count(); ++j) {
    if (j == i) continue;
    const double w = g.degree(j) / (agents[j].r + agents[j].r_prime);
    weighted += w * agents[j].kindness;
    weights += w;
  }
  OptimalCoefficient out;
  out.sign_expr = weighted - agents[i].kindness * weights;
  if (std::abs(out.sign_expr) <= 1e-12) {
    out.choice = OptimalCoefficient::Choice::Arbitrary;
    out.value = lower;
  } else if (out.sign_expr > 0.0) {
    out.choice = OptimalCoefficient::Choice::Upper;
    out.value = upper;
  } else {
    out.choice = OptimalCoefficient::Choice::Lower;
    out.value = lower;
  }
  return out;
}

}  // namespace recip
