#include "recip/config.hpp"

#include <cmath>
#include <initializer_list>
#include <json.hpp>

#include "recip/io.hpp"

namespace recip {

namespace {

using nlohmann::json;

class FieldError : public std::runtime_error {
 public:
  FieldError(std::string path, const std::string& msg)
      : std::runtime_error(msg), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

void only_keys(const json& obj, const std::string& path, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) throw FieldError(path, "expected an object");
  for (const auto& [key, _] : obj.items()) {
    bool known = false;
    for (const char* k : keys) known = known || key == k;
    if (!known) {
      throw FieldError(path.empty() ? key : path + "." + key, "unknown key");
    }
  }
}

std::string child(const std::string& path, const char* key) {
  return path.empty() ? std::string(key) : path + "." + key;
}

const json& required(const json& obj, const std::string& path, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw FieldError(child(path, key), "missing required field");
  return *it;
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) throw FieldError(path, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw FieldError(path, "must be finite");
  return d;
}

long long integer(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw FieldError(path, "expected an integer");
  return v.get<long long>();
}

std::string text(const json& v, const std::string& path) {
  if (!v.is_string()) throw FieldError(path, "expected a string");
  return v.get<std::string>();
}

std::string index_path(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

AgentSpec parse_agent(const json& v, const std::string& path) {
  only_keys(v, path, {"kindness", "r", "r_prime", "attitude"});
  AgentSpec a;
  a.kindness = number(required(v, path, "kindness"), child(path, "kindness"));
  a.r = number(required(v, path, "r"), child(path, "r"));
  if (auto it = v.find("r_prime"); it != v.end()) a.r_prime = number(*it, child(path, "r_prime"));
  const std::string att = text(required(v, path, "attitude"), child(path, "attitude"));
  try {
    a.attitude = attitude_from_string(att);
  } catch (const Error& e) {
    throw FieldError(child(path, "attitude"), e.message());
  }
  try {
    a.validate();
  } catch (const Error& e) {
    // An out-of-range r is reported on r; everything else on r_prime.
    const char* field = (a.r < 0.0 || a.r > 1.0) ? "r" : "r_prime";
    throw FieldError(child(path, field), e.message());
  }
  return a;
}

ActivationSchedule parse_schedule(const json& v, const std::string& path, int n) {
  only_keys(v, path, {"kind", "pattern"});
  const std::string kind = text(required(v, path, "kind"), child(path, "kind"));
  const bool has_pattern = v.contains("pattern");
  try {
    if (kind == "synchronous" || kind == "alternating") {
      if (has_pattern) throw FieldError(child(path, "pattern"), "only periodic schedules take a pattern");
      return kind == "synchronous" ? ActivationSchedule::synchronous(n)
                                   : ActivationSchedule::alternating(n);
    }
    if (kind == "periodic") {
      const json& p = required(v, path, "pattern");
      const std::string pp = child(path, "pattern");
      if (!p.is_array()) throw FieldError(pp, "expected a list of agent lists");
      ActivationSchedule::Pattern pattern;
      for (std::size_t i = 0; i < p.size(); ++i) {
        if (!p[i].is_array()) throw FieldError(index_path(pp, i), "expected a list of agents");
        std::vector<AgentId> step;
        for (std::size_t j = 0; j < p[i].size(); ++j) {
          step.push_back(static_cast<AgentId>(integer(p[i][j], index_path(index_path(pp, i), j))));
        }
        pattern.push_back(std::move(step));
      }
      return ActivationSchedule::periodic(n, std::move(pattern));
    }
  } catch (const Error& e) {
    throw FieldError(path, e.message());
  }
  throw FieldError(child(path, "kind"),
                   "unknown schedule kind '" + kind + "' (synchronous, alternating, periodic)");
}

std::string position(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return std::to_string(line) + ":" + std::to_string(col);
}

}  // namespace

ScenarioConfig parse_config(std::string_view src, std::string_view source) {
  json doc;
  try {
    doc = json::parse(src.begin(), src.end());
  } catch (const json::parse_error& e) {
    // byte is one past the offending character.
    const std::size_t at = e.byte > 0 ? e.byte - 1 : 0;
    std::string what = e.what();
    if (auto p = what.find("; "); p != std::string::npos) what = what.substr(p + 2);
    throw Error(ErrorKind::ConfigError,
                std::string(source) + ":" + position(src, at) + ": " + what);
  }

  try {
    only_keys(doc, "", {"agents", "edges", "schedule", "horizon", "tolerance", "window", "outputs"});

    const json& ja = required(doc, "", "agents");
    if (!ja.is_array()) throw FieldError("agents", "expected a list");
    std::vector<AgentSpec> agents;
    for (std::size_t i = 0; i < ja.size(); ++i) {
      agents.push_back(parse_agent(ja[i], index_path("agents", i)));
    }
    const int n = static_cast<int>(agents.size());

    const json& je = required(doc, "", "edges");
    if (!je.is_array()) throw FieldError("edges", "expected a list of [i, j] pairs");
    EdgeList edges;
    for (std::size_t i = 0; i < je.size(); ++i) {
      const std::string p = index_path("edges", i);
      if (!je[i].is_array() || je[i].size() != 2) throw FieldError(p, "expected [i, j]");
      edges.emplace_back(static_cast<AgentId>(integer(je[i][0], index_path(p, 0))),
                         static_cast<AgentId>(integer(je[i][1], index_path(p, 1))));
    }
    InteractionGraph graph = [&] {
      try {
        return InteractionGraph::build(n, edges);
      } catch (const Error& e) {
        throw FieldError(e.kind() == ErrorKind::TooFewAgents ? "agents" : "edges", e.message());
      }
    }();

    ActivationSchedule schedule = ActivationSchedule::synchronous(n);
    if (auto it = doc.find("schedule"); it != doc.end()) {
      schedule = parse_schedule(*it, "schedule", n);
    }

    ScenarioConfig cfg{Scenario::make(std::move(agents), std::move(graph), std::move(schedule)),
                       {}, {}};
    if (auto it = doc.find("horizon"); it != doc.end()) {
      cfg.simulation.horizon = integer(*it, "horizon");
      if (cfg.simulation.horizon < 1) throw FieldError("horizon", "must be >= 1");
    }
    if (auto it = doc.find("tolerance"); it != doc.end()) {
      cfg.simulation.tolerance = number(*it, "tolerance");
      if (!(cfg.simulation.tolerance > 0.0)) throw FieldError("tolerance", "must be > 0");
    }
    if (auto it = doc.find("window"); it != doc.end()) {
      cfg.simulation.window = static_cast<int>(integer(*it, "window"));
      if (cfg.simulation.window < 2) throw FieldError("window", "must be >= 2");
    }
    if (auto it = doc.find("outputs"); it != doc.end()) {
      only_keys(*it, "outputs", {"trajectory", "limit", "sweep", "sweep_report", "matrix", "chart"});
      auto name = [&](const char* key, std::string& dst) {
        if (auto f = it->find(key); f != it->end()) {
          dst = text(*f, child("outputs", key));
          if (dst.empty()) throw FieldError(child("outputs", key), "empty file name");
          return true;
        }
        return false;
      };
      name("trajectory", cfg.outputs.trajectory);
      name("limit", cfg.outputs.limit);
      name("sweep", cfg.outputs.sweep);
      name("sweep_report", cfg.outputs.sweep_report);
      cfg.outputs.matrix_requested = name("matrix", cfg.outputs.matrix);
      cfg.outputs.chart_requested = name("chart", cfg.outputs.chart);
    }
    return cfg;
  } catch (const FieldError& e) {
    throw Error(ErrorKind::ConfigError,
                std::string(source) + ": field " + e.path() + ": " + e.what());
  }
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  return parse_config(read_file(path), path.string());
}

}  // namespace recip
