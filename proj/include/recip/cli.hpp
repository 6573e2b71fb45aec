#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "recip/dynamics.hpp"

namespace recip::cli {

// Exit codes shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitPeriodTwo = 2;
inline constexpr int kExitMaxSteps = 3;
inline constexpr int kExitUnknownLimit = 4;
inline constexpr int kExitCheckFailed = 5;

int exit_code(ClassificationKind k);

struct CommonOptions {
  std::string config;
  std::string out_dir = ".";
  std::optional<long long> horizon;
  std::optional<double> tolerance;
  bool chart = false;
  bool matrix_dump = false;
  std::uint64_t seed = 1;
};

struct SweepOptions {
  int agent = 0;
  std::string param = "r";
  std::string values;       // comma-separated grid
  std::string degrees;      // comma-separated attachment degrees
  std::string new_agent;    // kindness,r,r_prime,attitude
  bool cross_check = true;
};

int cmd_simulate(const CommonOptions& opts, std::ostream& out, std::ostream& err);
int cmd_limit(const CommonOptions& opts, std::ostream& out, std::ostream& err);
int cmd_sweep(const CommonOptions& opts, const SweepOptions& sweep, std::ostream& out,
              std::ostream& err);
int cmd_check(const CommonOptions& opts, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches to a subcommand.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace recip::cli
