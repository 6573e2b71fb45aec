#pragma once

// Text artifacts: CSV emitters and parsers, a minimal SVG line chart, and
// atomic file writes. Floats are written with 17 significant digits so that
// every value re-parses to the identical double.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "recip/analysis.hpp"
#include "recip/dynamics.hpp"
#include "recip/limits.hpp"
#include "recip/spectral.hpp"

namespace recip {

std::string format_double(double v);
/// Strict parse of a whole field; accepts nan/inf. Throws InvalidArgument.
double parse_double(std::string_view s);

/// Writes to a sibling temporary file, then renames over `path`. Creates the
/// parent directory if needed.
void write_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

struct TrajectoryRow {
  TimeStep t = 0;
  AgentId from = 0;
  AgentId to = 0;
  double value = 0.0;
};

struct LimitRow {
  AgentId from = 0;
  AgentId to = 0;
  double value = 0.0;
  std::string source;
};

struct SweepCsvRow {
  double param = 0.0;
  AgentId from = 0;
  AgentId to = 0;
  double value = 0.0;
};

/// Header `t,from,to,value`; one row per directed edge per recorded step.
std::string trajectory_csv(const Trajectory& traj, const InteractionGraph& g);
std::vector<TrajectoryRow> parse_trajectory_csv(std::string_view text);

/// Header `edge_from,edge_to,limit,source`. Indeterminate results write nan.
std::string limit_csv(const LimitResult& result, const InteractionGraph& g);
std::string limit_csv(const ActionVector& values, const InteractionGraph& g, LimitSource source);
std::vector<LimitRow> parse_limit_csv(std::string_view text);

/// Header `param_value,edge_from,edge_to,limit`.
std::string sweep_csv(const SweepResult& result);
std::vector<SweepCsvRow> parse_sweep_csv(std::string_view text);
/// Plain-text verdict table for a sweep.
std::string sweep_report(const SweepResult& result);

/// Entries of A with `i->j` edge labels in the header row and first column.
std::string matrix_csv(const DynamicsMatrix& m, const InteractionGraph& g);

/// One polyline per directed edge over time.
std::string svg_chart(const Trajectory& traj, const InteractionGraph& g);

std::string edge_label(AgentId from, AgentId to);

}  // namespace recip
