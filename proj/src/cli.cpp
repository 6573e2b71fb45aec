#include "recip/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <ostream>
#include <random>
#include <sstream>
#include <utility>
#include <vector>

#include "recip/analysis.hpp"
#include "recip/config.hpp"
#include "recip/io.hpp"
#include "recip/limits.hpp"
#include "recip/spectral.hpp"

namespace recip::cli {

namespace fs = std::filesystem;

int exit_code(ClassificationKind k) {
  switch (k) {
    case ClassificationKind::Converged: return kExitOk;
    case ClassificationKind::PeriodTwo: return kExitPeriodTwo;
    case ClassificationKind::MaxStepsReached: return kExitMaxSteps;
  }
  return kExitInputError;
}

namespace {

bool is_input_error(ErrorKind k) {
  switch (k) {
    case ErrorKind::NoConvergence:
    case ErrorKind::SingularSystem:
    case ErrorKind::HypothesesNotMet:
    case ErrorKind::InvariantViolation:
    case ErrorKind::InsufficientData:
      return false;
    default:
      return true;
  }
}

int report_error(const Error& e, std::ostream& err) {
  err << "error: " << e.what() << '\n';
  return is_input_error(e.kind()) ? kExitInputError : kExitCheckFailed;
}

ScenarioConfig load(const CommonOptions& opts) {
  ScenarioConfig cfg = load_config(opts.config);
  if (opts.horizon) {
    if (*opts.horizon < 1) throw Error(ErrorKind::InvalidArgument, "--horizon must be >= 1");
    cfg.simulation.horizon = *opts.horizon;
  }
  if (opts.tolerance) {
    if (!(*opts.tolerance > 0.0)) throw Error(ErrorKind::InvalidArgument, "--tol must be > 0");
    cfg.simulation.tolerance = *opts.tolerance;
  }
  return cfg;
}

/// Files to write once every computation has succeeded.
class Outputs {
 public:
  explicit Outputs(fs::path dir) : dir_(std::move(dir)) {}
  void add(const std::string& name, std::string content) {
    files_.emplace_back(dir_ / name, std::move(content));
  }
  void write(std::ostream& out) const {
    for (const auto& [path, content] : files_) {
      write_atomic(path, content);
      out << "wrote " << path.string() << '\n';
    }
  }

 private:
  fs::path dir_;
  std::vector<std::pair<fs::path, std::string>> files_;
};

std::string describe_values(const ActionVector& v, const InteractionGraph& g) {
  std::ostringstream os;
  const bool common = std::all_of(v.begin(), v.end(), [&](double x) { return x == v[0]; });
  if (common && v.size() > 0) return "common " + format_double(v[0]);
  for (std::size_t k = 0; k < v.size(); ++k) {
    const auto e = g.edge_of(k);
    os << (k ? ", " : "") << "x" << edge_label(e.from, e.to) << " = " << format_double(v[k]);
  }
  return os.str();
}

void describe_limit(const LimitResult& lr, const InteractionGraph& g, std::ostream& out) {
  out << "result: " << to_string(lr.kind());
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, PerAgent>) {
          out << " L_x = " << format_double(v.first) << ", L_y = " << format_double(v.second);
        } else if constexpr (std::is_same_v<T, Common>) {
          out << " L = " << format_double(v.value);
        } else if constexpr (std::is_same_v<T, PerEdge>) {
          out << ' ' << describe_values(v.values, g);
        } else {
          out << " (" << v.reason << ')';
        }
      },
      lr.value);
  out << '\n';
}

std::vector<double> parse_list(const std::string& s, const char* flag) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (item.empty()) continue;
    try {
      out.push_back(parse_double(item));
    } catch (const Error&) {
      throw Error(ErrorKind::InvalidArgument,
                  std::string(flag) + ": '" + item + "' is not a number");
    }
  }
  if (out.empty()) throw Error(ErrorKind::InvalidArgument, std::string(flag) + " is empty");
  return out;
}

AgentSpec parse_new_agent(const std::string& s) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) parts.push_back(item);
  if (parts.size() != 4) {
    throw Error(ErrorKind::InvalidArgument, "--new-agent expects kindness,r,r_prime,attitude");
  }
  AgentSpec a{parse_double(parts[0]), parse_double(parts[1]), parse_double(parts[2]),
              attitude_from_string(parts[3])};
  a.validate();
  return a;
}

}  // namespace

// ---------------------------------------------------------------------------

int cmd_simulate(const CommonOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    const ScenarioConfig cfg = load(opts);
    const Scenario& s = cfg.scenario;
    const Trajectory traj = simulate(s, cfg.simulation);

    Outputs files(opts.out_dir);
    files.add(cfg.outputs.trajectory, trajectory_csv(traj, s.graph));
    if (opts.chart || cfg.outputs.chart_requested) {
      files.add(cfg.outputs.chart, svg_chart(traj, s.graph));
    }
    if (opts.matrix_dump || cfg.outputs.matrix_requested) {
      files.add(cfg.outputs.matrix,
                matrix_csv(build_matrix(s.agents, s.graph, s.schedule.activations_at(1)), s.graph));
    }

    out << "classification: " << to_string(traj.kind()) << '\n';
    out << "steps: " << traj.horizon_used << '\n';
    if (const auto* c = std::get_if<Converged>(&traj.classification)) {
      out << "limit: " << describe_values(c->limit, s.graph) << '\n';
      try {
        const RateEstimate est = estimate_rate(traj);
        if (est.rate) {
          out << "rate: " << format_double(*est.rate) << " per step (R^2 "
              << format_double(est.r_squared) << ")\n";
        } else {
          out << "rate: not geometric (" << est.note << ")\n";
        }
      } catch (const Error& e) {
        out << "rate: unavailable (" << e.message() << ")\n";
      }
    } else if (const auto* p = std::get_if<PeriodTwo>(&traj.classification)) {
      out << "cycle: " << describe_values(p->first, s.graph) << " | "
          << describe_values(p->second, s.graph) << '\n';
    }
    files.write(out);
    return exit_code(traj.kind());
  } catch (const Error& e) {
    return report_error(e, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
}

int cmd_limit(const CommonOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    const ScenarioConfig cfg = load(opts);
    const Scenario& s = cfg.scenario;
    const StructureReport rep = check_structure(s.agents, s.graph);
    const LimitResult lr = scenario_limit(s);

    Outputs files(opts.out_dir);
    files.add(cfg.outputs.limit, limit_csv(lr, s.graph));
    if (opts.matrix_dump || cfg.outputs.matrix_requested) {
      files.add(cfg.outputs.matrix, matrix_csv(build_matrix(s.agents, s.graph), s.graph));
    }

    auto yn = [](bool b) { return b ? "yes" : "no"; };
    out << "structure: connected=" << yn(rep.connected) << " odd_cycle=" << yn(rep.odd_cycle)
        << " floating_slack=" << yn(rep.has_floating_slack) << " fixed=" << yn(rep.any_fixed)
        << " all_r_prime_positive=" << yn(rep.all_rprime_positive) << '\n';
    out << "schedule: " << to_string(s.schedule.kind()) << '\n';
    if (s.agent_count() == 2) {
      out << "theorem: two-agent closed forms (r' folded into r)\n";
    } else {
      out << "theorem: " << to_string(rep.verdict) << " (" << rep.explanation << ")\n";
    }
    out << "rule: " << lr.rule << '\n';
    describe_limit(lr, s.graph, out);
    out << "source: " << to_string(lr.source) << '\n';
    files.write(out);
    return lr.kind() == LimitKind::Unknown ? kExitUnknownLimit : kExitOk;
  } catch (const Error& e) {
    return report_error(e, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
}

int cmd_sweep(const CommonOptions& opts, const SweepOptions& sw, std::ostream& out,
              std::ostream& err) {
  try {
    const ScenarioConfig cfg = load(opts);
    SweepResult result;
    if (!sw.degrees.empty()) {
      if (sw.new_agent.empty()) {
        throw Error(ErrorKind::InvalidArgument, "--degree-sweep needs --new-agent");
      }
      const AgentSpec newcomer = parse_new_agent(sw.new_agent);
      std::vector<int> degrees;
      for (double d : parse_list(sw.degrees, "--degree-sweep")) {
        if (d != std::floor(d)) {
          throw Error(ErrorKind::InvalidAttachment, "degree " + format_double(d) + " is not an integer");
        }
        degrees.push_back(static_cast<int>(d));
      }
      result = degree_sweep(cfg.scenario, newcomer, degrees, cfg.simulation);
    } else {
      if (sw.values.empty()) throw Error(ErrorKind::InvalidArgument, "--values is required");
      SweepSpec spec{cfg.scenario, sw.agent, sweep_field_from_string(sw.param),
                     parse_list(sw.values, "--values"), sw.cross_check, cfg.simulation};
      result = run_sweep(spec);
    }

    Outputs files(opts.out_dir);
    files.add(cfg.outputs.sweep, sweep_csv(result));
    const std::string report = sweep_report(result);
    files.add(cfg.outputs.sweep_report, report);
    out << report;
    files.write(out);
    return kExitOk;
  } catch (const Error& e) {
    return report_error(e, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
}

namespace {

int check_impl(const CommonOptions& opts, std::ostream& out) {
  const ScenarioConfig cfg = load(opts);
  const Scenario& s = cfg.scenario;
  bool ok = true;
  auto line = [&](std::string_view status, std::string_view name, const std::string& detail) {
    out << "  " << status << std::string(10 - std::min<std::size_t>(9, status.size()), ' ')
        << name;
    if (!detail.empty()) out << ": " << detail;
    out << '\n';
  };

  Trajectory traj;
  try {
    traj = simulate(s, cfg.simulation);
  } catch (const Error& e) {
    out << "simulation: " << e.what() << '\n';
    line("violated", "simulation", e.message());
    return kExitCheckFailed;
  }
  out << "simulation: " << to_string(traj.kind()) << " after " << traj.horizon_used << " steps\n";
  out << "properties:\n";
  for (const auto& r : check_lemma_suite(s, traj)) {
    line(to_string(r.status), r.name, r.detail);
    if (r.status == PropertyStatus::Violated) ok = false;
  }

  // Matrix form against the update rule: along the run, then on random states.
  double scale = 1.0, kmin = s.agents[0].kindness, kmax = s.agents[0].kindness;
  for (const auto& a : s.agents) {
    scale = std::max(scale, std::abs(a.kindness));
    kmin = std::min(kmin, a.kindness);
    kmax = std::max(kmax, a.kindness);
  }
  const double tol = 1e-13 * scale;
  double worst = 0.0;
  for (std::size_t t = 1; t < traj.states.size(); ++t) {
    const auto active = s.schedule.activations_at(static_cast<TimeStep>(t));
    worst = std::max(worst, matrix_step_discrepancy(s.agents, s.graph, active, traj.states[t - 1]));
  }
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> value(kmin, kmax > kmin ? kmax : kmin + 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> state(s.graph.directed_edge_count());
    for (double& x : state) x = value(rng);
    const auto active = s.schedule.activations_at(static_cast<TimeStep>(trial + 1));
    worst = std::max(worst,
                     matrix_step_discrepancy(s.agents, s.graph, active, ActionVector(state)));
  }
  const bool eq_ok = worst <= tol;
  ok = ok && eq_ok;
  line(eq_ok ? "holds" : "violated", "matrix/step equivalence",
       "max deviation " + format_double(worst) + " (seed " + std::to_string(opts.seed) + ")");

  // Closed form against the simulated limit.
  try {
    const LimitResult lr = scenario_limit(s);
    const auto lv = edge_limits(lr, s.graph);
    if (!lv) {
      line("skipped", "closed form matches simulation", "no closed form (" + lr.rule + ")");
    } else if (traj.kind() != ClassificationKind::Converged) {
      line("violated", "closed form matches simulation",
           lr.rule + " predicts a limit but the run ended " + std::string(to_string(traj.kind())));
      ok = false;
    } else {
      const double gap = sup_distance(*lv, traj.final_state());
      const bool agree = gap <= kCrossCheckTolerance;
      ok = ok && agree;
      line(agree ? "holds" : "violated", "closed form matches simulation",
           lr.rule + ", max deviation " + format_double(gap));
    }
  } catch (const Error& e) {
    line("violated", "closed form matches simulation", e.message());
    ok = false;
  }

  // Kindness order among Fixed agents sharing a recipient need not carry over
  // to the limits; such reversals are reported, not failed.
  const StructureReport rep = check_structure(s.agents, s.graph);
  if (rep.verdict == LimitTheorem::MixedNetwork &&
      s.schedule.kind() == ActivationSchedule::Kind::Synchronous) {
    const auto x = solve_fixed_point(build_matrix(s.agents, s.graph),
                                     build_kindness_vector(s.agents, s.graph));
    std::size_t found = 0;
    for (AgentId j = 0; j < s.agent_count(); ++j) {
      for (AgentId a : s.graph.neighbors(j)) {
        for (AgentId b : s.graph.neighbors(j)) {
          if (!s.agents[a].anchored() || !s.agents[b].anchored()) continue;
          if (!(s.agents[a].kindness < s.agents[b].kindness)) continue;
          const double la = x[s.graph.index_of(a, j)], lb = x[s.graph.index_of(b, j)];
          if (la > lb) {
            ++found;
            out << "  finding   L_{" << a << ',' << j << "} = " << format_double(la) << " > L_{"
                << b << ',' << j << "} = " << format_double(lb) << " although k_" << a << " < k_"
                << b << " (expected: kindness order is not preserved among Fixed agents)\n";
          }
        }
      }
    }
    if (found == 0) out << "  finding   no reversal of the Fixed kindness order\n";
  }

  out << (ok ? "all applicable properties hold\n" : "some properties are violated\n");
  return ok ? kExitOk : kExitCheckFailed;
}

}  // namespace

int cmd_check(const CommonOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    return check_impl(opts, out);
  } catch (const Error& e) {
    return report_error(e, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
}

// ---------------------------------------------------------------------------

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Simulator and analysis toolkit for reciprocating agents"};
  app.require_subcommand(1);

  CommonOptions common;
  SweepOptions sweep;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config, "Scenario file (JSON)")->required();
    sub->add_option("--out", common.out_dir, "Output directory");
    sub->add_option("--horizon", common.horizon, "Maximum number of steps");
    sub->add_option("--tol", common.tolerance, "Convergence tolerance");
    sub->add_flag("--chart", common.chart, "Also write an SVG chart of the trajectory");
    sub->add_flag("--matrix-dump", common.matrix_dump, "Also write the dynamics matrix");
    sub->add_option("--seed", common.seed, "Seed for randomized checks");
  };
  auto* sim = app.add_subcommand("simulate", "Run the dynamics and classify convergence");
  auto* lim = app.add_subcommand("limit", "Evaluate the applicable closed-form limit");
  auto* swp = app.add_subcommand("sweep", "Sweep one coefficient or the degree of a new agent");
  auto* chk = app.add_subcommand("check", "Run the trajectory property suite");
  for (auto* sub : {sim, lim, swp, chk}) add_common(sub);
  swp->add_option("--agent", sweep.agent, "Agent whose parameter is swept");
  swp->add_option("--param", sweep.param, "kindness, r or r_prime");
  swp->add_option("--values", sweep.values, "Comma-separated grid values");
  swp->add_option("--degree-sweep", sweep.degrees, "Comma-separated attachment degrees");
  swp->add_option("--new-agent", sweep.new_agent, "kindness,r,r_prime,attitude of the new agent");
  swp->add_flag("!--no-cross-check", sweep.cross_check,
                "Skip simulating grid points that have a closed form");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (sim->parsed()) return cmd_simulate(common, out, err);
    if (lim->parsed()) return cmd_limit(common, out, err);
    if (swp->parsed()) return cmd_sweep(common, sweep, out, err);
    return cmd_check(common, out, err);
  } catch (const Error& e) {
    return report_error(e, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
}

}  // namespace recip::cli
