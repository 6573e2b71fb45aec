// Python bindings. Values cross the boundary as plain lists and dicts; the
// C++ types stay internal.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "recip/analysis.hpp"
#include "recip/config.hpp"
#include "recip/dynamics.hpp"
#include "recip/limits.hpp"
#include "recip/spectral.hpp"

namespace py = pybind11;
using namespace recip;

namespace {

ActivationSchedule make_schedule(int n, const std::string& kind,
                                 const std::optional<ActivationSchedule::Pattern>& pattern) {
  if (kind == "synchronous") return ActivationSchedule::synchronous(n);
  if (kind == "alternating") return ActivationSchedule::alternating(n);
  if (kind == "periodic") return ActivationSchedule::periodic(n, pattern.value_or(ActivationSchedule::Pattern{}));
  throw Error(ErrorKind::InvalidSchedule, "unknown schedule kind '" + kind + "'");
}

std::vector<std::pair<AgentId, AgentId>> directed(const InteractionGraph& g) {
  std::vector<std::pair<AgentId, AgentId>> out;
  for (const auto& e : g.directed_edges()) out.emplace_back(e.from, e.to);
  return out;
}

std::vector<std::vector<double>> rows_of(const DenseMatrix& m) {
  std::vector<std::vector<double>> out(m.rows(), std::vector<double>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
  return out;
}

py::dict trajectory_dict(const Trajectory& t) {
  py::dict d;
  d["kind"] = std::string(to_string(t.kind()));
  d["steps"] = t.horizon_used;
  std::vector<std::vector<double>> states;
  states.reserve(t.states.size());
  for (const auto& s : t.states) states.push_back(s.vector());
  d["states"] = states;
  if (const auto* c = std::get_if<Converged>(&t.classification)) {
    d["at_step"] = c->at_step;
    d["limit"] = c->limit.vector();
  } else if (const auto* p = std::get_if<PeriodTwo>(&t.classification)) {
    d["at_step"] = p->at_step;
    d["cycle"] = std::make_pair(p->first.vector(), p->second.vector());
  }
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Reciprocation dynamics on interaction networks";

  // Messages start with the error kind, e.g. "InvalidCoefficients: ...".
  py::register_exception<Error>(m, "ReciprocityError");

  py::class_<AgentSpec>(m, "Agent")
      .def(py::init([](double k, double r, double rp, const std::string& att) {
             AgentSpec a{k, r, rp, attitude_from_string(att)};
             a.validate();
             return a;
           }),
           py::arg("kindness"), py::arg("r"), py::arg("r_prime") = 0.0,
           py::arg("attitude") = "floating")
      .def_readonly("kindness", &AgentSpec::kindness)
      .def_readonly("r", &AgentSpec::r)
      .def_readonly("r_prime", &AgentSpec::r_prime)
      .def_property_readonly("attitude", [](const AgentSpec& a) { return std::string(to_string(a.attitude)); })
      .def("__repr__", [](const AgentSpec& a) {
        return "Agent(kindness=" + std::to_string(a.kindness) + ", r=" + std::to_string(a.r) +
               ", r_prime=" + std::to_string(a.r_prime) + ", attitude='" +
               std::string(to_string(a.attitude)) + "')";
      });

  py::class_<Scenario>(m, "Scenario")
      .def(py::init([](std::vector<AgentSpec> agents, const EdgeList& edges, const std::string& schedule,
                       std::optional<ActivationSchedule::Pattern> pattern) {
             const int n = static_cast<int>(agents.size());
             auto g = InteractionGraph::build(n, edges);
             return Scenario::make(std::move(agents), std::move(g), make_schedule(n, schedule, pattern));
           }),
           py::arg("agents"), py::arg("edges"), py::arg("schedule") = "synchronous",
           py::arg("pattern") = py::none())
      .def_static("from_json", [](const std::string& text) { return parse_config(text).scenario; })
      .def_static("load", [](const std::string& path) { return load_config(path).scenario; })
      .def_readonly("agents", &Scenario::agents)
      .def_property_readonly("directed_edges", [](const Scenario& s) { return directed(s.graph); })
      .def_property_readonly("schedule", [](const Scenario& s) { return std::string(to_string(s.schedule.kind())); })
      .def("index_of", [](const Scenario& s, AgentId i, AgentId j) { return s.graph.index_of(i, j); })
      .def("initial_state", [](const Scenario& s) { return ActionVector::initial(s.agents, s.graph).vector(); })
      .def("activations_at", [](const Scenario& s, TimeStep t) { return s.schedule.activations_at(t); });

  m.def("step",
        [](const Scenario& s, std::vector<double> state, std::optional<std::vector<AgentId>> active) {
          const auto acting = active.value_or(s.schedule.activations_at(1));
          return step(ActionVector(std::move(state)), s.agents, s.graph, acting).vector();
        },
        py::arg("scenario"), py::arg("state"), py::arg("active") = py::none(),
        "One update from `state`; `active` defaults to the agents acting at t = 1.");

  m.def("simulate",
        [](const Scenario& s, TimeStep horizon, double tol, int window) {
          return trajectory_dict(simulate(s, {horizon, tol, window}));
        },
        py::arg("scenario"), py::arg("horizon") = 10'000, py::arg("tol") = 1e-10,
        py::arg("window") = 5);

  m.def("rate", [](const Scenario& s) {
    const auto est = estimate_rate(simulate(s));
    py::dict d;
    d["rate"] = est.rate;
    d["r_squared"] = est.r_squared;
    d["note"] = est.note;
    return d;
  });

  m.def("limit", [](const Scenario& s) {
    const auto res = scenario_limit(s);
    py::dict d;
    d["kind"] = std::string(to_string(res.kind()));
    d["rule"] = res.rule;
    d["source"] = std::string(to_string(res.source));
    const auto values = edge_limits(res, s.graph);
    d["values"] = values ? py::cast(values->vector()) : py::none();
    return d;
  });

  m.def("dynamics_matrix",
        [](const Scenario& s, std::optional<std::vector<AgentId>> active) {
          const auto acting = active.value_or(s.schedule.activations_at(1));
          py::dict d;
          d["A"] = rows_of(build_matrix(s.agents, s.graph, acting).entries);
          d["k"] = build_kindness_vector(s.agents, s.graph, acting).entries;
          return d;
        },
        py::arg("scenario"), py::arg("active") = py::none());

  m.def("spectral_radius", [](const Scenario& s) {
    return spectral_radius(build_matrix(s.agents, s.graph));
  });

  m.def("structure", [](const Scenario& s) {
    const auto rep = check_structure(s.agents, s.graph);
    py::dict d;
    d["verdict"] = std::string(to_string(rep.verdict));
    d["aperiodic"] = rep.aperiodic;
    d["explanation"] = rep.explanation;
    return d;
  });

  m.def("check", [](const Scenario& s) {
    std::vector<std::tuple<std::string, std::string, std::string>> out;
    for (const auto& r : check_lemma_suite(s, simulate(s)))
      out.emplace_back(r.name, std::string(to_string(r.status)), r.detail);
    return out;
  });

  m.def("sweep",
        [](const Scenario& s, AgentId agent, const std::string& field, std::vector<double> grid) {
          const auto res = run_sweep({s, agent, sweep_field_from_string(field), std::move(grid)});
          std::vector<std::tuple<double, AgentId, AgentId, double>> rows;
          for (const auto& row : res.rows)
            for (const auto& e : row.limits) rows.emplace_back(row.param, e.from, e.to, e.value);
          std::vector<std::tuple<AgentId, AgentId, std::string>> verdicts;
          for (const auto& v : res.verdicts)
            verdicts.emplace_back(v.from, v.to, std::string(to_string(v.monotonicity)));
          py::dict d;
          d["rows"] = rows;
          d["verdicts"] = verdicts;
          return d;
        },
        py::arg("scenario"), py::arg("agent"), py::arg("field"), py::arg("grid"));

  m.def("counterexample", [] {
    const auto f = counterexample_fixed_ordering();
    py::dict d;
    d["scenario"] = f.scenario;
    d["low"] = f.low;
    d["high"] = f.high;
    d["target"] = f.target;
    d["low_limit"] = f.low_limit;
    d["high_limit"] = f.high_limit;
    d["disagreement"] = f.max_disagreement;
    return d;
  });
}
