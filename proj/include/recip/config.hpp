#pragma once

// Scenario files. JSON, one object:
//
//   {
//     "agents":   [{"kindness": 0, "r": 0.5, "r_prime": 0.3, "attitude": "floating"}, ...],
//     "edges":    [[0, 1], [0, 2], [1, 2]],
//     "schedule": {"kind": "synchronous" | "alternating" | "periodic",
//                  "pattern": [[0], [1, 2]]},          // periodic only
//     "horizon":  10000,                                // optional
//     "tolerance": 1e-10,                               // optional
//     "window":   5,                                    // optional
//     "outputs":  {"trajectory": "trajectory.csv", "limit": "limit.csv",
//                  "sweep": "sweep.csv", "matrix": "matrix.csv",
//                  "chart": "chart.svg"}                // optional
//   }
//
// r_prime defaults to 0 and schedule to synchronous. Unknown keys are errors.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "recip/dynamics.hpp"
#include "recip/model.hpp"

namespace recip {

struct OutputSpec {
  std::string trajectory = "trajectory.csv";
  std::string limit = "limit.csv";
  std::string sweep = "sweep.csv";
  std::string sweep_report = "sweep_report.txt";
  std::string matrix = "matrix.csv";
  std::string chart = "chart.svg";
  /// Set when the file names the artifact explicitly; such artifacts are
  /// emitted without their command-line flag.
  bool matrix_requested = false;
  bool chart_requested = false;
};

struct ScenarioConfig {
  Scenario scenario;
  SimulationOptions simulation;
  OutputSpec outputs;
};

/// Throws ConfigError; messages carry `source:line:col` for syntax errors and
/// the field path (e.g. `agents[1].r`) for content errors.
ScenarioConfig parse_config(std::string_view text, std::string_view source = "<config>");
ScenarioConfig load_config(const std::filesystem::path& path);

}  // namespace recip
