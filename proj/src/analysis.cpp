#include "recip/analysis.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <utility>

#include "recip/spectral.hpp"

namespace recip {

std::string_view to_string(SweepField f) {
  switch (f) {
    case SweepField::Kindness: return "kindness";
    case SweepField::R: return "r";
    case SweepField::RPrime: return "r_prime";
  }
  return "kindness";
}

SweepField sweep_field_from_string(std::string_view s) {
  if (s == "kindness" || s == "k") return SweepField::Kindness;
  if (s == "r") return SweepField::R;
  if (s == "r_prime" || s == "rprime") return SweepField::RPrime;
  throw Error(ErrorKind::InvalidArgument,
              "unknown sweep parameter '" + std::string(s) + "' (expected kindness, r or r_prime)");
}

std::string_view to_string(Monotonicity m) {
  switch (m) {
    case Monotonicity::Constant: return "constant";
    case Monotonicity::Increasing: return "increasing";
    case Monotonicity::Decreasing: return "decreasing";
    case Monotonicity::NonMonotone: return "non-monotone";
  }
  return "non-monotone";
}

std::string_view to_string(PropertyStatus s) {
  switch (s) {
    case PropertyStatus::Holds: return "holds";
    case PropertyStatus::Violated: return "violated";
    case PropertyStatus::Skipped: return "skipped";
  }
  return "skipped";
}

Monotonicity classify_monotonicity(std::span<const double> values, double tol) {
  bool up = true;
  bool down = true;
  for (std::size_t i = 1; i < values.size(); ++i) {
    const double d = values[i] - values[i - 1];
    if (!(d >= -tol)) up = false;
    if (!(d <= tol)) down = false;
  }
  if (up && down) return Monotonicity::Constant;
  if (up) return Monotonicity::Increasing;
  if (down) return Monotonicity::Decreasing;
  return Monotonicity::NonMonotone;
}

AffineFit fit_affine(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw Error(ErrorKind::DimensionMismatch, "fit_affine needs equally many x and y values");
  }
  AffineFit fit;
  const std::size_t n = x.size();
  if (n == 0) return fit;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  fit.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  fit.intercept = my - fit.slope * mx;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = std::abs(y[i] - (fit.slope * x[i] + fit.intercept));
    if (std::isnan(r)) {
      fit.max_residual = std::numeric_limits<double>::quiet_NaN();
      break;
    }
    fit.max_residual = std::max(fit.max_residual, r);
  }
  return fit;
}

ResolvedLimits resolve_limits(const Scenario& s, const SimulationOptions& sim) {
  const LimitResult lr = scenario_limit(s);
  if (auto v = edge_limits(lr, s.graph)) return {std::move(*v), lr.source, lr.rule};
  const Trajectory t = simulate(s, sim);
  if (t.kind() == ClassificationKind::Converged) {
    return {t.final_state(), LimitSource::Simulation, "simulation"};
  }
  return {ActionVector(s.graph.directed_edge_count(), std::numeric_limits<double>::quiet_NaN()),
          LimitSource::None, std::string("simulation ended ") + std::string(to_string(t.kind()))};
}

namespace {

std::vector<EdgeLimit> label(const InteractionGraph& g, const ActionVector& v) {
  std::vector<EdgeLimit> out;
  out.reserve(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    const auto e = g.edge_of(k);
    out.push_back({e.from, e.to, v[k]});
  }
  return out;
}

std::vector<EdgeVerdict> verdicts_for(const std::vector<SweepRow>& rows) {
  std::vector<EdgeVerdict> out;
  if (rows.empty()) return out;
  std::vector<double> params;
  for (const auto& row : rows) params.push_back(row.param);

  std::vector<std::map<std::pair<AgentId, AgentId>, double>> lookup(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (const auto& e : rows[i].limits) lookup[i][{e.from, e.to}] = e.value;
  }
  for (const auto& e : rows.front().limits) {
    std::vector<double> values;
    for (const auto& m : lookup) {
      auto it = m.find({e.from, e.to});
      if (it == m.end()) break;
      values.push_back(it->second);
    }
    if (values.size() != rows.size()) continue;
    EdgeVerdict v;
    v.from = e.from;
    v.to = e.to;
    v.monotonicity = classify_monotonicity(values);
    v.fit = fit_affine(params, values);
    v.affine = v.fit.max_residual <= kAffineTolerance;
    out.push_back(v);
  }
  return out;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

SweepResult run_sweep(const SweepSpec& spec) {
  const auto& base = spec.base;
  if (spec.agent < 0 || spec.agent >= base.agent_count()) {
    throw Error(ErrorKind::InvalidAgent, "sweep agent " + std::to_string(spec.agent) +
                                             " out of range");
  }
  SweepResult result;
  result.parameter = std::string(to_string(spec.field)) + "[" + std::to_string(spec.agent) + "]";

  for (double value : spec.grid) {
    std::vector<AgentSpec> agents = base.agents;
    AgentSpec& a = agents[spec.agent];
    switch (spec.field) {
      case SweepField::Kindness: a.kindness = value; break;
      case SweepField::R: a.r = value; break;
      case SweepField::RPrime: a.r_prime = value; break;
    }
    Scenario s = [&] {
      try {
        return Scenario::make(agents, base.graph, base.schedule);
      } catch (const Error& e) {
        throw Error(ErrorKind::InvalidGridPoint,
                    result.parameter + " = " + fmt(value) + ": " + e.message());
      }
    }();

    ResolvedLimits lim = resolve_limits(s, spec.simulation);
    if (spec.cross_check &&
        (lim.source == LimitSource::ClosedForm || lim.source == LimitSource::LinearSolve)) {
      const Trajectory t = simulate(s, spec.simulation);
      if (t.kind() != ClassificationKind::Converged) {
        throw Error(ErrorKind::InvariantViolation,
                    result.parameter + " = " + fmt(value) + ": " + lim.rule +
                        " gives a limit but the simulation ended " +
                        std::string(to_string(t.kind())));
      }
      const double gap = sup_distance(t.final_state(), lim.values);
      if (gap > kCrossCheckTolerance) {
        throw Error(ErrorKind::InvariantViolation,
                    result.parameter + " = " + fmt(value) + ": " + lim.rule +
                        " and simulation differ by " + fmt(gap));
      }
    }
    result.rows.push_back({value, label(s.graph, lim.values), lim.source});
  }
  result.verdicts = verdicts_for(result.rows);
  return result;
}

SweepResult degree_sweep(const Scenario& base, const AgentSpec& newcomer,
                         std::span<const int> degrees, const SimulationOptions& sim) {
  if (base.schedule.kind() != ActivationSchedule::Kind::Synchronous) {
    throw Error(ErrorKind::InvalidArgument, "degree sweeps need a synchronous base schedule");
  }
  const int n = base.agent_count();
  SweepResult result;
  result.parameter = "degree[" + std::to_string(n) + "]";
  for (int d : degrees) {
    if (d < 1 || d > n) {
      throw Error(ErrorKind::InvalidAttachment,
                  "cannot attach the new agent to " + std::to_string(d) + " of " +
                      std::to_string(n) + " existing agents");
    }
  }
  for (int d : degrees) {
    EdgeList edges = base.graph.edges();
    for (AgentId j = 0; j < d; ++j) edges.emplace_back(j, n);
    std::vector<AgentSpec> agents = base.agents;
    agents.push_back(newcomer);
    Scenario s = Scenario::make(std::move(agents), InteractionGraph::build(n + 1, edges),
                                ActivationSchedule::synchronous(n + 1));
    ResolvedLimits lim = resolve_limits(s, sim);
    result.rows.push_back({static_cast<double>(d), label(s.graph, lim.values), lim.source});
  }
  result.verdicts = verdicts_for(result.rows);
  return result;
}

// ---------------------------------------------------------------------------
// Trajectory properties

namespace {

struct Suite {
  std::vector<PropertyReport> reports;

  void skip(std::string name, std::string why) {
    reports.push_back({std::move(name), PropertyStatus::Skipped, std::move(why)});
  }
  void result(std::string name, const std::string& violation) {
    reports.push_back({std::move(name),
                       violation.empty() ? PropertyStatus::Holds : PropertyStatus::Violated,
                       violation});
  }
};

/// Agent i's action sequence in a two-agent run.
std::vector<double> series(const Trajectory& traj, const InteractionGraph& g, AgentId i) {
  const std::size_t k = g.index_of(i, 1 - i);
  std::vector<double> out;
  out.reserve(traj.states.size());
  for (const auto& s : traj.states) out.push_back(s[k]);
  return out;
}

std::string at(const char* what, std::size_t t, double a, double b) {
  return std::string(what) + " at t=" + std::to_string(t) + " (" + fmt(a) + " vs " + fmt(b) + ")";
}

// Alternating sequence whose amplitude shrinks. `lower` selects the direction:
// the lower-kindness agent starts at its minimum.
std::string oscillation_violation(const std::vector<double>& v, bool lower, bool strict,
                                  double slack, double amp_floor) {
  const std::size_t T = v.size() - 1;
  // ge(a, b): a >= b in the orientation of the lower agent, with strictness
  // required while the relevant half-period amplitude is resolvable.
  auto rel = [&](std::size_t ia, std::size_t ib, std::size_t amp_t) -> bool {
    const double a = lower ? v[ia] : -v[ia];
    const double b = lower ? v[ib] : -v[ib];
    if (a < b - slack) return false;
    const double amp = std::abs(v[amp_t + 1] - v[amp_t]);
    if (strict && amp > amp_floor && !(a > b)) return false;
    return true;
  };
  for (std::size_t t = 0; 2 * t + 2 <= T; ++t) {
    // x(2t) <= x(2t+2) <= x(2t+1)
    if (!rel(2 * t + 2, 2 * t, 2 * t)) return at("even subsequence not rising", 2 * t + 2, v[2 * t + 2], v[2 * t]);
    if (!rel(2 * t + 1, 2 * t + 2, 2 * t + 1)) return at("even term above odd term", 2 * t + 2, v[2 * t + 2], v[2 * t + 1]);
  }
  for (std::size_t t = 1; 2 * t + 1 <= T; ++t) {
    // x(2t-1) >= x(2t+1) >= x(2t)
    if (!rel(2 * t - 1, 2 * t + 1, 2 * t)) return at("odd subsequence not falling", 2 * t + 1, v[2 * t + 1], v[2 * t - 1]);
    if (!rel(2 * t + 1, 2 * t, 2 * t)) return at("odd term below even term", 2 * t + 1, v[2 * t + 1], v[2 * t]);
  }
  return {};
}

std::string monotone_violation(const std::vector<double>& v, std::size_t from, bool increasing,
                               double slack) {
  for (std::size_t t = from; t + 1 < v.size(); ++t) {
    const double d = v[t + 1] - v[t];
    if (increasing ? d < -slack : d > slack) {
      return at(increasing ? "decrease" : "increase", t + 1, v[t + 1], v[t]);
    }
  }
  return {};
}

std::vector<double> distinct_activation_values(const std::vector<double>& v,
                                               const ActivationSchedule& sched, AgentId i,
                                               std::size_t limit, double tol) {
  std::vector<double> out{v[0]};
  for (std::size_t t = 1; t <= limit && t < v.size(); ++t) {
    if (!sched.is_active(i, static_cast<TimeStep>(t))) continue;
    if (std::abs(v[t] - out.back()) > tol) out.push_back(v[t]);
  }
  return out;
}

std::string subsequence_violation(const std::vector<double>& values,
                                  const std::vector<double>& reference, double tol) {
  std::size_t pos = 0;
  for (std::size_t p = 0; p < values.size(); ++p) {
    while (pos < reference.size() && std::abs(reference[pos] - values[p]) > tol) ++pos;
    if (pos == reference.size()) {
      return "activation value #" + std::to_string(p) + " (" + fmt(values[p]) +
             ") not found in order in the synchronous run";
    }
    ++pos;
  }
  return {};
}

}  // namespace

std::vector<PropertyReport> check_lemma_suite(const Scenario& s, const Trajectory& traj) {
  Suite suite;
  const auto& agents = s.agents;
  const auto& g = s.graph;
  if (traj.states.empty() || traj.states[0] != ActionVector::initial(agents, g)) {
    throw Error(ErrorKind::InvalidArgument, "trajectory does not start from the kindness values");
  }
  double kmin = agents[0].kindness, kmax = agents[0].kindness, scale = 1.0;
  for (const auto& a : agents) {
    kmin = std::min(kmin, a.kindness);
    kmax = std::max(kmax, a.kindness);
    scale = std::max(scale, std::abs(a.kindness));
  }
  const double slack = 1e-12 * scale;
  const std::size_t T = traj.states.size() - 1;

  {
    std::string v;
    for (std::size_t t = 0; t <= T && v.empty(); ++t) {
      for (std::size_t k = 0; k < traj.states[t].size(); ++k) {
        const double x = traj.states[t][k];
        if (!(x >= kmin - slack && x <= kmax + slack)) {
          v = "edge " + std::to_string(k) + " at t=" + std::to_string(t) + " is " + fmt(x);
          break;
        }
      }
    }
    suite.result("bounding box", v);
  }
  {
    std::string v;
    for (std::size_t t = 1; t <= T && v.empty(); ++t) {
      for (AgentId i = 0; i < g.agent_count() && v.empty(); ++i) {
        if (s.schedule.is_active(i, static_cast<TimeStep>(t))) continue;
        for (std::size_t k : g.outgoing(i)) {
          if (std::bit_cast<std::uint64_t>(traj.states[t][k]) !=
              std::bit_cast<std::uint64_t>(traj.states[t - 1][k])) {
            v = "idle agent " + std::to_string(i) + " changed edge " + std::to_string(k) +
                " at t=" + std::to_string(t);
            break;
          }
        }
      }
    }
    suite.result("last-action semantics", v);
  }

  static const char* kPairProperties[] = {
      "oscillation",         "fixed-floating monotonicity", "floating-floating ordering",
      "fixed-floating ordering", "subsequence",             "limit ordering"};
  if (g.agent_count() != 2) {
    for (const char* name : kPairProperties) suite.skip(name, "needs exactly two agents");
    return suite.reports;
  }

  // Pair view: lo is the less kind agent (agent 0 on ties), r folds in r'.
  const AgentId lo = agents[1].kindness < agents[0].kindness ? 1 : 0;
  const AgentId hi = 1 - lo;
  const TwoAgentCase pc = TwoAgentCase::from_agents(agents, s.schedule.kind());
  const std::vector<double> X = series(traj, g, lo);
  const std::vector<double> Y = series(traj, g, hi);
  const AgentSpec& A = pc.agents[lo];
  const AgentSpec& B = pc.agents[hi];
  const bool sync = s.schedule.kind() == ActivationSchedule::Kind::Synchronous;
  const bool both_fixed = A.attitude == Attitude::Fixed && B.attitude == Attitude::Fixed;
  const bool both_floating =
      A.attitude == Attitude::Floating && B.attitude == Attitude::Floating;
  const double rsum = A.r + B.r;

  // oscillation
  if (!both_fixed) {
    suite.skip("oscillation", "needs two Fixed agents");
  } else if (!sync) {
    suite.skip("oscillation", "needs the synchronous schedule");
  } else {
    const bool strict = A.r > 0 && A.r < 1 && B.r > 0 && B.r < 1 && A.kindness < B.kindness;
    std::string v = oscillation_violation(X, true, strict, slack, 1e-9 * scale);
    if (v.empty()) v = oscillation_violation(Y, false, strict, slack, 1e-9 * scale);
    suite.result("oscillation", v);
  }

  // Fixed-Floating monotonicity and ordering
  if (both_fixed || both_floating) {
    suite.skip("fixed-floating monotonicity", "needs one Fixed and one Floating agent");
    suite.skip("fixed-floating ordering", "needs one Fixed and one Floating agent");
  } else {
    const bool lo_fixed = A.attitude == Attitude::Fixed;
    const AgentSpec& F = lo_fixed ? A : B;
    const AgentSpec& G = lo_fixed ? B : A;
    const auto& FX = lo_fixed ? X : Y;
    const auto& GX = lo_fixed ? Y : X;
    if (rsum > 1.0 + 1e-12) {
      suite.skip("fixed-floating monotonicity", "needs r1 + r2 <= 1");
      suite.skip("fixed-floating ordering", "needs r1 + r2 <= 1");
    } else {
      if (!(G.r > 0.0)) {
        suite.skip("fixed-floating monotonicity", "needs a reciprocating Floating agent");
      } else {
        // Both sequences head toward the Fixed agent's kindness.
        const bool increasing = F.kindness > G.kindness;
        const AgentId fid = lo_fixed ? lo : hi;
        std::size_t first = 1;
        while (first <= T && !s.schedule.is_active(fid, static_cast<TimeStep>(first))) ++first;
        std::string v = monotone_violation(GX, 0, increasing, slack);
        if (v.empty()) v = monotone_violation(FX, first, increasing, slack);
        suite.result("fixed-floating monotonicity", v);
      }
      std::string v;
      for (std::size_t t = 0; t <= T && v.empty(); ++t) {
        if (Y[t] < X[t] - slack) v = at("kinder agent below", t, Y[t], X[t]);
      }
      suite.result("fixed-floating ordering", v);
    }
  }

  // Floating-Floating ordering
  if (!both_floating) {
    suite.skip("floating-floating ordering", "needs two Floating agents");
  } else {
    std::string v;
    if (rsum <= 1.0 + 1e-12) {
      for (std::size_t t = 0; t <= T && v.empty(); ++t) {
        if (Y[t] < X[t] - slack) v = at("kinder agent below", t, Y[t], X[t]);
      }
    }
    if (v.empty() && rsum >= 1.0 - 1e-12) {
      for (std::size_t t = 1; t <= T && v.empty(); ++t) {
        const double dp = Y[t - 1] - X[t - 1];
        const double d = Y[t] - X[t];
        if (std::abs(dp) <= slack) continue;
        const bool both = s.schedule.is_active(0, static_cast<TimeStep>(t)) &&
                          s.schedule.is_active(1, static_cast<TimeStep>(t));
        const bool flips = (dp > 0) == both;  // expected sign of d is negative
        if (flips ? d > slack : d < -slack) {
          v = at(both ? "order kept when both acted" : "order changed with one actor", t, Y[t],
                 X[t]);
        }
      }
    }
    suite.result("floating-floating ordering", v);
  }

  // Subsequence of the synchronous run
  if (!both_fixed) {
    suite.skip("subsequence", "needs two Fixed agents");
  } else {
    const std::size_t horizon = std::min<std::size_t>(200, T);
    const auto sync_sched = ActivationSchedule::synchronous(2);
    std::vector<ActionVector> ref{traj.states[0]};
    const auto all = sync_sched.activations_at(1);
    for (std::size_t t = 1; t <= horizon; ++t) ref.push_back(step(ref.back(), agents, g, all));
    std::string v;
    for (AgentId i : {AgentId{0}, AgentId{1}}) {
      const std::size_t k = g.index_of(i, 1 - i);
      std::vector<double> reference;
      for (const auto& st : ref) reference.push_back(st[k]);
      const auto own = series(traj, g, i);
      const auto values = distinct_activation_values(own, s.schedule, i, horizon, slack);
      v = subsequence_violation(values, reference, slack);
      if (!v.empty()) {
        v = "agent " + std::to_string(i) + ": " + v;
        break;
      }
    }
    suite.result("subsequence", v);
  }

  // Limit ordering
  if (traj.kind() != ClassificationKind::Converged) {
    suite.skip("limit ordering", "trajectory did not converge");
  } else {
    const double lx = X.back(), ly = Y.back();
    suite.result("limit ordering", lx <= ly + 1e-8 * scale ? std::string{}
                                                           : at("L_x > L_y", T, lx, ly));
  }
  return suite.reports;
}

bool none_violated(std::span<const PropertyReport> reports) {
  return std::none_of(reports.begin(), reports.end(), [](const PropertyReport& r) {
    return r.status == PropertyStatus::Violated;
  });
}

double matrix_step_discrepancy(std::span<const AgentSpec> agents, const InteractionGraph& g,
                               std::span<const AgentId> active, const ActionVector& state) {
  const auto m = build_matrix(agents, g, active);
  const auto k = build_kindness_vector(agents, g, active);
  return sup_distance(apply(m, state, k), step(state, agents, g, active));
}

// ---------------------------------------------------------------------------
// Fixed-agent ordering

Scenario fixed_ordering_scenario() {
  const std::vector<std::pair<AgentId, AgentId>> edges{{0, 1}, {0, 2}, {1, 2}};
  std::vector<AgentSpec> agents{
      {1.0, 0.5, 0.3, Attitude::Fixed},
      {5.0, 0.2, 0.5, Attitude::Fixed},
      {2.0, 0.1, 0.2, Attitude::Fixed},
  };
  return Scenario::make(std::move(agents), InteractionGraph::build(3, edges),
                        ActivationSchedule::synchronous(3));
}

OrderingFinding fixed_ordering_finding(const Scenario& s, AgentId low, AgentId high,
                                       AgentId target) {
  OrderingFinding f{s, {}, {}, low, high, target};
  f.solved = solve_fixed_point(build_matrix(s.agents, s.graph),
                               build_kindness_vector(s.agents, s.graph));
  SimulationOptions opts;
  opts.horizon = 100'000;
  opts.tolerance = 1e-13;
  const Trajectory t = simulate(s, opts);
  f.simulated = t.final_state();
  f.max_disagreement = t.kind() == ClassificationKind::Converged
                           ? sup_distance(f.solved, f.simulated)
                           : std::numeric_limits<double>::infinity();
  f.low_limit = f.solved[s.graph.index_of(low, target)];
  f.high_limit = f.solved[s.graph.index_of(high, target)];
  return f;
}

OrderingFinding counterexample_fixed_ordering() {
  return fixed_ordering_finding(fixed_ordering_scenario(), 0, 2, 1);
}

// ---------------------------------------------------------------------------
// Grid regularity suite

bool RegularityReport::passed() const noexcept {
  return std::all_of(checks.begin(), checks.end(),
                     [](const RegularityCheck& c) { return c.passed(); });
}

namespace {

struct Pair {
  double r;
  double rp;
  std::size_t ri;
  std::size_t rpi;
};

struct Tally {
  RegularityCheck check;

  void record(double deviation, double limit, const std::function<std::string()>& describe) {
    ++check.curves;
    if (std::isnan(deviation)) deviation = std::numeric_limits<double>::infinity();
    check.worst = std::max(check.worst, deviation);
    if (deviation > limit) {
      if (check.failures == 0) check.first_failure = describe();
      ++check.failures;
      if (deviation > 0.01) ++check.coarse_failures;
    }
  }
};

/// Largest excursion against the dominant direction of a curve.
double monotone_violation_size(std::span<const double> v) {
  double up = 0.0, down = 0.0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    const double d = v[i] - v[i - 1];
    up = std::max(up, d);
    down = std::max(down, -d);
  }
  return std::min(up, down);
}

}  // namespace

RegularityReport regularity_suite(const RegularityOptions& opts) {
  constexpr int n = 3;
  const std::vector<std::pair<AgentId, AgentId>> clique{{0, 1}, {0, 2}, {1, 2}};
  const InteractionGraph g = InteractionGraph::build(n, clique);
  const std::size_t m = g.directed_edge_count();

  std::vector<Pair> pairs;
  for (std::size_t i = 0; i < opts.coefficients.size(); ++i) {
    for (std::size_t j = 0; j < opts.coefficients.size(); ++j) {
      const double r = opts.coefficients[i], rp = opts.coefficients[j];
      if (r + rp <= 1.0 + 1e-12) pairs.push_back({r, rp, i, j});
    }
  }
  // Curves in r (fixed r', ordered by r) and in r' (fixed r, ordered by r').
  std::vector<std::vector<std::size_t>> r_curves(opts.coefficients.size());
  std::vector<std::vector<std::size_t>> rp_curves(opts.coefficients.size());
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    r_curves[pairs[p].rpi].push_back(p);
    rp_curves[pairs[p].ri].push_back(p);
  }

  const std::size_t nk = opts.kindness.size();
  const std::size_t per_agent = nk * pairs.size();
  const std::size_t configs = per_agent * per_agent * per_agent;
  auto decode = [&](std::size_t c, int i) {
    for (int j = n - 1; j > i; --j) c /= per_agent;
    return c % per_agent;
  };
  auto encode = [&](std::array<std::size_t, n> c) {
    return (c[0] * per_agent + c[1]) * per_agent + c[2];
  };

  auto tally = [](std::string name) {
    Tally t;
    t.check.name = std::move(name);
    return t;
  };
  Tally irrelevance = tally("floating kindness irrelevance");
  Tally affine = tally("affine in fixed kindness");
  Tally mono_r = tally("monotone in r");
  Tally mono_rp = tally("monotone in r'");
  Tally sim = tally("simulation agrees with limits");

  RegularityReport report;
  std::vector<double> table(configs * m);
  std::vector<char> anchored_at(configs);
  std::vector<AgentSpec> agents(n);
  std::size_t counter = 0;

  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    auto make_agents = [&](std::size_t c) {
      for (int i = 0; i < n; ++i) {
        const std::size_t ci = decode(c, i);
        const Pair& p = pairs[ci % pairs.size()];
        agents[i] = {opts.kindness[ci / pairs.size()], p.r, p.rp,
                     (mask >> i) & 1u ? Attitude::Fixed : Attitude::Floating};
      }
    };
    auto describe = [&](std::size_t c) {
      make_agents(c);
      std::ostringstream os;
      for (int i = 0; i < n; ++i) {
        os << (i ? "; " : "") << "agent " << i << ": " << to_string(agents[i].attitude)
           << " k=" << agents[i].kindness << " r=" << agents[i].r << " r'=" << agents[i].r_prime;
      }
      return os.str();
    };

    for (std::size_t c = 0; c < configs; ++c) {
      make_agents(c);
      const bool anchored = std::any_of(agents.begin(), agents.end(),
                                        [](const AgentSpec& a) { return a.anchored(); });
      anchored_at[c] = anchored;
      const LimitResult lr = anchored ? network_mixed_limit(agents, g)
                                      : network_floating_limit(agents, g);
      const auto v = edge_limits(lr, g);
      std::copy(v->begin(), v->end(), table.begin() + c * m);

      if (opts.simulation_stride > 0 && counter++ % opts.simulation_stride == 0) {
        SimulationOptions so;
        so.horizon = 200'000;
        so.tolerance = 1e-12;
        const Trajectory t = simulate(agents, g, ActivationSchedule::synchronous(n), so);
        const double gap = t.kind() == ClassificationKind::Converged
                               ? sup_distance(t.final_state(), *v)
                               : std::numeric_limits<double>::infinity();
        sim.record(gap, opts.simulation_tolerance, [&] { return describe(c); });
      }
    }
    report.scenarios += configs;

    std::vector<double> curve;
    for (std::size_t c = 0; c < configs; ++c) {
      for (int i = 0; i < n; ++i) {
        const std::size_t ci = decode(c, i);
        const std::size_t ki = ci / pairs.size();
        const std::size_t pi = ci % pairs.size();
        const bool fixed = (mask >> i) & 1u;
        // Kindness of an unanchored agent is irrelevant once any agent is anchored
        // elsewhere; check this over the curve's base point.
        const bool others_anchored = [&] {
          for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            const Pair& pj = pairs[decode(c, j) % pairs.size()];
            if (((mask >> j) & 1u) && pj.r + pj.rp < 1.0 - 1e-12) return true;
          }
          return false;
        }();
        const bool self_anchored = fixed && pairs[pi].r + pairs[pi].rp < 1.0 - 1e-12;
        std::array<std::size_t, n> base{decode(c, 0), decode(c, 1), decode(c, 2)};

        auto gather = [&](std::size_t e, const std::vector<std::size_t>& points, bool kind_axis) {
          curve.clear();
          for (std::size_t q : points) {
            auto idx = base;
            idx[i] = kind_axis ? q * pairs.size() + pi : ki * pairs.size() + q;
            curve.push_back(table[encode(idx) * m + e]);
          }
        };
        auto where = [&](std::size_t e) {
          const auto de = g.edge_of(e);
          return [&, e, de] {
            return "edge (" + std::to_string(de.from) + "," + std::to_string(de.to) +
                   "), varying agent " + std::to_string(i) + " from " + describe(c) + ": " +
                   [&] {
                     std::ostringstream os;
                     os.precision(17);
                     for (double x : curve) os << x << ' ';
                     return os.str();
                   }();
          };
        };

        // Kindness curves start at the first kindness value.
        if (ki == 0) {
          std::vector<std::size_t> points(nk);
          for (std::size_t q = 0; q < nk; ++q) points[q] = q;
          for (std::size_t e = 0; e < m; ++e) {
            gather(e, points, true);
            if (!self_anchored && others_anchored) {
              const auto [lo, hi] = std::minmax_element(curve.begin(), curve.end());
              irrelevance.record(*hi - *lo, kMonotoneTolerance, where(e));
            } else if (fixed) {
              const AffineFit fit = fit_affine(opts.kindness, curve);
              affine.record(fit.max_residual, kAffineTolerance, where(e));
            }
          }
        }
        // Coefficient curves start at the first pair of their group.
        const auto& rc = r_curves[pairs[pi].rpi];
        if (rc.size() > 1 && rc.front() == pi) {
          for (std::size_t e = 0; e < m; ++e) {
            gather(e, rc, false);
            mono_r.record(monotone_violation_size(curve), kMonotoneTolerance, where(e));
          }
        }
        const auto& pc = rp_curves[pairs[pi].ri];
        if (pc.size() > 1 && pc.front() == pi) {
          for (std::size_t e = 0; e < m; ++e) {
            gather(e, pc, false);
            mono_rp.record(monotone_violation_size(curve), kMonotoneTolerance, where(e));
          }
        }
      }
    }
  }
  report.checks = {irrelevance.check, affine.check, mono_r.check, mono_rp.check, sim.check};
  return report;
}

}  // namespace recip
