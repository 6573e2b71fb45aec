#include "recip/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace recip {

std::string_view to_string(ClassificationKind k) {
  switch (k) {
    case ClassificationKind::Converged: return "Converged";
    case ClassificationKind::PeriodTwo: return "PeriodTwo";
    case ClassificationKind::MaxStepsReached: return "MaxStepsReached";
  }
  return "Unknown";
}

ActionVector step(const ActionVector& state, std::span<const AgentSpec> agents,
                  const InteractionGraph& g, std::span<const AgentId> active) {
  if (state.size() != g.directed_edge_count()) {
    throw Error(ErrorKind::DimensionMismatch,
                "state has " + std::to_string(state.size()) + " entries, graph has " +
                    std::to_string(g.directed_edge_count()) + " directed edges");
  }
  if (static_cast<int>(agents.size()) != g.agent_count()) {
    throw Error(ErrorKind::DimensionMismatch, std::to_string(agents.size()) +
                                                  " agent specs for a graph of " +
                                                  std::to_string(g.agent_count()) + " agents");
  }
  const int n = g.agent_count();
  std::vector<char> acting(n, 0);
  for (AgentId a : active) {
    if (a < 0 || a >= n) {
      throw Error(ErrorKind::InvalidAgent, "active agent " + std::to_string(a) + " out of range");
    }
    acting[a] = 1;
  }

  // g_i: total last action received by i, read from the pre-step state.
  std::vector<double> received(n, 0.0);
  for (AgentId i = 0; i < n; ++i) {
    if (!acting[i]) continue;
    double sum = 0.0;
    for (std::size_t k : g.incoming(i)) sum += state[k];
    received[i] = sum;
  }

  ActionVector next = state;
  for (std::size_t k = 0; k < state.size(); ++k) {
    const AgentId i = g.edge_of(k).from;
    if (!acting[i]) continue;
    const AgentSpec& a = agents[i];
    const double anchor = a.attitude == Attitude::Fixed ? a.kindness : state[k];
    next[k] = a.self_weight() * anchor + a.r * state[g.reverse_of(k)] +
              a.r_prime * (received[i] / g.degree(i));
  }
  return next;
}

namespace {

constexpr double kBoxTolerance = 1e-12;
constexpr double kSustainedSwing = 0.999;

void check_bounding_box(const ActionVector& x, double lo, double hi, TimeStep t) {
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!(x[k] >= lo - kBoxTolerance && x[k] <= hi + kBoxTolerance)) {
      throw Error(ErrorKind::InvariantViolation,
                  "entry " + std::to_string(k) + " left the kindness range at step " +
                      std::to_string(t) + " (value " + std::to_string(x[k]) + ")");
    }
  }
}

}  // namespace

Trajectory simulate(std::span<const AgentSpec> agents, const InteractionGraph& g,
                    const ActivationSchedule& schedule, const SimulationOptions& options) {
  if (options.horizon < 1) throw Error(ErrorKind::InvalidArgument, "horizon must be >= 1");
  if (!(options.tolerance > 0.0)) throw Error(ErrorKind::InvalidArgument, "tolerance must be > 0");
  if (options.window < 2) throw Error(ErrorKind::InvalidArgument, "window must be >= 2");
  if (schedule.agent_count() != g.agent_count()) {
    throw Error(ErrorKind::DimensionMismatch, "schedule and graph disagree on the agent count");
  }

  Trajectory traj;
  traj.states.push_back(ActionVector::initial(agents, g));

  auto [kmin, kmax] = std::minmax_element(agents.begin(), agents.end(),
                                          [](const AgentSpec& a, const AgentSpec& b) {
                                            return a.kindness < b.kindness;
                                          });
  const double lo = kmin->kindness;
  const double hi = kmax->kindness;

  const int window = std::max(options.window, schedule.activity_bound());
  int still_run = 0;
  int period_run = 0;
  double prev_d1 = 0.0;
  for (TimeStep t = 1; t <= options.horizon; ++t) {
    const auto active = schedule.activations_at(t);
    ActionVector next = step(traj.states.back(), agents, g, active);
    check_bounding_box(next, lo, hi, t);
    traj.states.push_back(std::move(next));
    traj.horizon_used = t;

    const auto& cur = traj.states[t];
    const double d1 = sup_distance(cur, traj.states[t - 1]);
    still_run = d1 < options.tolerance ? still_run + 1 : 0;
    if (t >= 2) {
      // A damped alternation also has d2 << d1; a true two-cycle keeps d1 from shrinking.
      const double d2 = sup_distance(cur, traj.states[t - 2]);
      const bool sustained = d1 >= kSustainedSwing * prev_d1;
      period_run =
          (d2 < options.tolerance && d1 >= options.tolerance && sustained) ? period_run + 1 : 0;
    }
    prev_d1 = d1;

    if (still_run >= window) {
      traj.classification = Converged{cur, t};
      return traj;
    }
    if (period_run >= window) {
      traj.classification = PeriodTwo{traj.states[t - 1], cur, t};
      return traj;
    }
  }
  traj.classification = MaxStepsReached{};
  return traj;
}

Trajectory simulate(const Scenario& scenario, const SimulationOptions& options) {
  return simulate(scenario.agents, scenario.graph, scenario.schedule, options);
}

RateEstimate estimate_rate(const Trajectory& traj) {
  if (traj.kind() != ClassificationKind::Converged) {
    throw Error(ErrorKind::InsufficientData, "trajectory is not classified Converged");
  }
  const auto& final_state = traj.final_state();
  const std::size_t steps = traj.states.size() - 1;
  const double floor =
      8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, sup_norm(final_state));

  std::vector<double> residual(traj.states.size());
  std::size_t first_zero = steps;
  for (std::size_t t = 0; t <= steps; ++t) {
    residual[t] = sup_distance(traj.states[t], final_state);
    if (residual[t] <= floor && first_zero == steps) first_zero = t;
  }

  RateEstimate est;
  // The final state always has zero residual; reaching it earlier is finite convergence.
  if (first_zero < steps && first_zero < 10) {
    est.note = "finite convergence at step " + std::to_string(first_zero);
    return est;
  }
  if (steps < 10) {
    throw Error(ErrorKind::InsufficientData,
                "need at least 10 recorded steps, have " + std::to_string(steps));
  }

  // Last half of the trajectory, stopping before the residual reaches the floor.
  const std::size_t begin = steps / 2;
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  std::size_t m = 0;
  for (std::size_t t = begin; t < first_zero; ++t) {
    const double x = static_cast<double>(t);
    const double y = std::log(residual[t]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
    ++m;
  }
  if (m < 3) {
    throw Error(ErrorKind::InsufficientData,
                "only " + std::to_string(m) + " usable residuals in the fit window");
  }
  const double md = static_cast<double>(m);
  const double cov = sxy - sx * sy / md;
  const double var_x = sxx - sx * sx / md;
  const double var_y = syy - sy * sy / md;
  const double slope = cov / var_x;
  est.points = m;
  est.r_squared = var_y > 0.0 ? (cov * cov) / (var_x * var_y) : 1.0;

  const double rate = std::exp(slope);
  if (est.r_squared < 0.9) {
    est.note = "poor log-linear fit";
    return est;
  }
  if (!(rate > 0.0 && rate < 1.0)) {
    est.note = "fitted factor outside (0,1)";
    return est;
  }
  est.rate = rate;
  return est;
}

}  // namespace recip
