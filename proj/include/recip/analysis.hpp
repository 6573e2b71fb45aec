#pragma once

// Parameter sweeps, regularity verdicts and trajectory property checks.

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "recip/dynamics.hpp"
#include "recip/limits.hpp"
#include "recip/model.hpp"

namespace recip {

inline constexpr double kMonotoneTolerance = 1e-8;
inline constexpr double kAffineTolerance = 1e-6;
inline constexpr double kCrossCheckTolerance = 1e-6;

enum class SweepField { Kindness, R, RPrime };
std::string_view to_string(SweepField f);
/// Accepts kindness|k, r, r_prime|rprime. Throws InvalidArgument.
SweepField sweep_field_from_string(std::string_view s);

struct SweepSpec {
  Scenario base;
  AgentId agent = 0;
  SweepField field = SweepField::Kindness;
  std::vector<double> grid;
  /// Simulate closed-form grid points too and require agreement within 1e-6.
  bool cross_check = true;
  SimulationOptions simulation{};
};

struct EdgeLimit {
  AgentId from = 0;
  AgentId to = 0;
  double value = 0.0;
};

struct SweepRow {
  double param = 0.0;
  std::vector<EdgeLimit> limits;
  LimitSource source = LimitSource::None;
};

/// Plateaus within tolerance count as monotone; a flat curve is Constant.
enum class Monotonicity { Constant, Increasing, Decreasing, NonMonotone };
std::string_view to_string(Monotonicity m);

struct AffineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double max_residual = 0.0;
};

struct EdgeVerdict {
  AgentId from = 0;
  AgentId to = 0;
  Monotonicity monotonicity = Monotonicity::NonMonotone;
  AffineFit fit;
  bool affine = false;  // max_residual <= kAffineTolerance
};

struct SweepResult {
  std::string parameter;
  std::vector<SweepRow> rows;
  /// One verdict per directed edge present in every row.
  std::vector<EdgeVerdict> verdicts;
};

Monotonicity classify_monotonicity(std::span<const double> values,
                                   double tol = kMonotoneTolerance);
/// Least-squares line through (x, y); NaN values give a NaN residual.
AffineFit fit_affine(std::span<const double> x, std::span<const double> y);

struct ResolvedLimits {
  ActionVector values;  // NaN entries when no limit was found
  LimitSource source = LimitSource::None;
  std::string rule;
};

/// Per-edge limits: closed form or linear solve when one applies, otherwise a
/// simulation run (source Simulation if it converged, None if not).
ResolvedLimits resolve_limits(const Scenario& s, const SimulationOptions& sim = {});

/// Throws InvalidGridPoint naming the first value that makes an invalid
/// scenario, InvariantViolation when a closed form and simulation disagree.
SweepResult run_sweep(const SweepSpec& spec);

/// Adds `newcomer` as agent n connected to agents 0..d-1, for each d. Uses
/// the base schedule kind, which must be synchronous. Throws
/// InvalidAttachment for d < 1 or d > n.
SweepResult degree_sweep(const Scenario& base, const AgentSpec& newcomer,
                         std::span<const int> degrees, const SimulationOptions& sim = {});

enum class PropertyStatus { Holds, Violated, Skipped };
std::string_view to_string(PropertyStatus s);

struct PropertyReport {
  std::string name;
  PropertyStatus status = PropertyStatus::Skipped;
  /// First violation, or why the property does not apply.
  std::string detail;
};

/// Runs every trajectory property; properties outside their hypotheses are
/// Skipped. The trajectory must be a run of `s` from the standard start.
std::vector<PropertyReport> check_lemma_suite(const Scenario& s, const Trajectory& traj);
bool none_violated(std::span<const PropertyReport> reports);

/// sup |A p + k' - step(p)| for one acting set.
double matrix_step_discrepancy(std::span<const AgentSpec> agents, const InteractionGraph& g,
                               std::span<const AgentId> active, const ActionVector& state);

struct OrderingFinding {
  Scenario scenario;
  ActionVector solved;
  ActionVector simulated;
  AgentId low = 0;     // lower-kindness Fixed agent
  AgentId high = 0;    // higher-kindness Fixed agent
  AgentId target = 0;  // common recipient
  double low_limit = 0.0;   // L_{low,target}
  double high_limit = 0.0;  // L_{high,target}
  double max_disagreement = 0.0;
  bool reversed() const noexcept { return low_limit > high_limit; }
};

/// Compares L_{low,target} with L_{high,target} by linear solve and by simulation.
OrderingFinding fixed_ordering_finding(const Scenario& s, AgentId low, AgentId high,
                                       AgentId target);
/// All-Fixed 3-clique, r=(0.5,0.2,0.1), r'=(0.3,0.5,0.2), k=(1,5,2), where the
/// kinder of agents 0 and 2 receives less from agent 1's neighbors.
Scenario fixed_ordering_scenario();
OrderingFinding counterexample_fixed_ordering();

struct RegularityOptions {
  std::vector<double> kindness{1, 2, 3, 4, 5};
  std::vector<double> coefficients{0.1, 0.3, 0.5, 0.7, 0.9};
  /// Every n-th grid scenario is also simulated and compared with its limit.
  std::size_t simulation_stride = 1999;
  double simulation_tolerance = 1e-7;
};

struct RegularityCheck {
  std::string name;
  std::size_t curves = 0;
  std::size_t failures = 0;
  double worst = 0.0;  // largest deviation seen, in the check's own measure
  /// Failures that also exceed 0.01, the coarse precision of earlier
  /// truncated-run checks.
  std::size_t coarse_failures = 0;
  std::string first_failure;
  bool passed() const noexcept { return failures == 0; }
};

struct RegularityReport {
  std::size_t scenarios = 0;
  std::vector<RegularityCheck> checks;
  bool passed() const noexcept;
};

/// Full grid over kindness, (r, r') pairs with r + r' <= 1 and every attitude
/// assignment on the 3-clique under the synchronous schedule.
RegularityReport regularity_suite(const RegularityOptions& opts = {});

}  // namespace recip
