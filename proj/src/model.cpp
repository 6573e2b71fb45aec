#include "recip/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <string>

namespace recip {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::TooFewAgents: return "TooFewAgents";
    case ErrorKind::InvalidAgent: return "InvalidAgent";
    case ErrorKind::SelfLoop: return "SelfLoop";
    case ErrorKind::DuplicateEdge: return "DuplicateEdge";
    case ErrorKind::DisconnectedGraph: return "DisconnectedGraph";
    case ErrorKind::InvalidCoefficients: return "InvalidCoefficients";
    case ErrorKind::InvalidSchedule: return "InvalidSchedule";
    case ErrorKind::AlternatingRequiresTwoAgents: return "AlternatingRequiresTwoAgents";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::InsufficientData: return "InsufficientData";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::HypothesesNotMet: return "HypothesesNotMet";
    case ErrorKind::InvariantViolation: return "InvariantViolation";
    case ErrorKind::InvalidGridPoint: return "InvalidGridPoint";
    case ErrorKind::InvalidAttachment: return "InvalidAttachment";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

std::string_view to_string(Attitude a) {
  return a == Attitude::Fixed ? "fixed" : "floating";
}

Attitude attitude_from_string(std::string_view s) {
  if (s == "fixed" || s == "Fixed") return Attitude::Fixed;
  if (s == "floating" || s == "Floating") return Attitude::Floating;
  throw Error(ErrorKind::InvalidArgument, "unknown attitude '" + std::string(s) + "'");
}

// ---------------------------------------------------------------------------
// AgentSpec

namespace {
// r + r' = 1 is a legal boundary; allow for the rounding of decimal inputs.
constexpr double kCoefficientSlack = 1e-12;
}  // namespace

double AgentSpec::self_weight() const noexcept {
  const double w = 1.0 - r - r_prime;
  return w <= 1e-12 ? 0.0 : w;
}

void AgentSpec::validate() const {
  if (!std::isfinite(kindness) || !std::isfinite(r) || !std::isfinite(r_prime)) {
    throw Error(ErrorKind::InvalidCoefficients, "agent parameters must be finite");
  }
  if (r < 0.0 || r_prime < 0.0) {
    throw Error(ErrorKind::InvalidCoefficients,
                "reciprocation coefficients must be non-negative (r=" + std::to_string(r) +
                    ", r_prime=" + std::to_string(r_prime) + ")");
  }
  if (r + r_prime > 1.0 + kCoefficientSlack) {
    throw Error(ErrorKind::InvalidCoefficients,
                "r + r_prime must not exceed 1 (r=" + std::to_string(r) +
                    ", r_prime=" + std::to_string(r_prime) + ")");
  }
}

// ---------------------------------------------------------------------------
// InteractionGraph

InteractionGraph InteractionGraph::build(int n,
                                         std::span<const std::pair<AgentId, AgentId>> edges) {
  if (n < 2) {
    throw Error(ErrorKind::TooFewAgents, "need at least 2 agents, got " + std::to_string(n));
  }
  InteractionGraph g;
  g.n_ = n;
  for (auto [a, b] : edges) {
    if (a < 0 || a >= n || b < 0 || b >= n) {
      throw Error(ErrorKind::InvalidAgent, "edge (" + std::to_string(a) + "," +
                                               std::to_string(b) + ") references an agent outside 0.." +
                                               std::to_string(n - 1));
    }
    if (a == b) {
      throw Error(ErrorKind::SelfLoop, "self-loop on agent " + std::to_string(a));
    }
    g.edges_.emplace_back(std::min(a, b), std::max(a, b));
  }
  std::sort(g.edges_.begin(), g.edges_.end());
  auto dup = std::adjacent_find(g.edges_.begin(), g.edges_.end());
  if (dup != g.edges_.end()) {
    throw Error(ErrorKind::DuplicateEdge, "edge {" + std::to_string(dup->first) + "," +
                                              std::to_string(dup->second) + "} listed twice");
  }

  g.neighbors_.assign(n, {});
  for (auto [a, b] : g.edges_) {
    g.neighbors_[a].push_back(b);
    g.neighbors_[b].push_back(a);
  }
  for (auto& nb : g.neighbors_) std::sort(nb.begin(), nb.end());

  // Connectivity by BFS from agent 0.
  std::vector<char> seen(n, 0);
  std::queue<AgentId> frontier;
  frontier.push(0);
  seen[0] = 1;
  int reached = 1;
  while (!frontier.empty()) {
    AgentId v = frontier.front();
    frontier.pop();
    for (AgentId w : g.neighbors_[v]) {
      if (!seen[w]) {
        seen[w] = 1;
        ++reached;
        frontier.push(w);
      }
    }
  }
  if (reached != n) {
    auto it = std::find(seen.begin(), seen.end(), 0);
    throw Error(ErrorKind::DisconnectedGraph,
                "agent " + std::to_string(it - seen.begin()) + " is not reachable from agent 0");
  }

  // Neighbor lists are sorted, so walking agents in order yields the
  // lexicographic (from, to) order directly.
  for (AgentId i = 0; i < n; ++i) {
    for (AgentId j : g.neighbors_[i]) g.directed_.push_back({i, j});
  }
  g.outgoing_.assign(n, {});
  g.incoming_.assign(n, {});
  for (std::size_t k = 0; k < g.directed_.size(); ++k) {
    g.outgoing_[g.directed_[k].from].push_back(k);
  }
  // incoming(i) ordered by source: iterate sources in order.
  for (std::size_t k = 0; k < g.directed_.size(); ++k) {
    g.incoming_[g.directed_[k].to].push_back(k);
  }
  g.reverse_.resize(g.directed_.size());
  for (std::size_t k = 0; k < g.directed_.size(); ++k) {
    g.reverse_[k] = g.index_of(g.directed_[k].to, g.directed_[k].from);
  }
  return g;
}

std::size_t InteractionGraph::index_of(AgentId from, AgentId to) const {
  auto it = std::lower_bound(directed_.begin(), directed_.end(), DirectedEdge{from, to},
                             [](const DirectedEdge& a, const DirectedEdge& b) {
                               return std::pair(a.from, a.to) < std::pair(b.from, b.to);
                             });
  if (it == directed_.end() || !(*it == DirectedEdge{from, to})) {
    throw Error(ErrorKind::InvalidArgument, "(" + std::to_string(from) + "," + std::to_string(to) +
                                                ") is not an edge");
  }
  return static_cast<std::size_t>(it - directed_.begin());
}

bool InteractionGraph::has_edge(AgentId from, AgentId to) const noexcept {
  if (from < 0 || from >= n_) return false;
  const auto& nb = neighbors_[from];
  return std::binary_search(nb.begin(), nb.end(), to);
}

InteractionGraph build_graph(int n, std::span<const std::pair<AgentId, AgentId>> edges) {
  return InteractionGraph::build(n, edges);
}

bool has_odd_cycle(const InteractionGraph& g) {
  const int n = g.agent_count();
  std::vector<int> color(n, -1);
  for (AgentId s = 0; s < n; ++s) {
    if (color[s] != -1) continue;
    color[s] = 0;
    std::queue<AgentId> q;
    q.push(s);
    while (!q.empty()) {
      AgentId v = q.front();
      q.pop();
      for (AgentId w : g.neighbors(v)) {
        if (color[w] == -1) {
          color[w] = 1 - color[v];
          q.push(w);
        } else if (color[w] == color[v]) {
          return true;
        }
      }
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// ActivationSchedule

std::string_view to_string(ActivationSchedule::Kind k) {
  switch (k) {
    case ActivationSchedule::Kind::Synchronous: return "synchronous";
    case ActivationSchedule::Kind::Alternating: return "alternating";
    case ActivationSchedule::Kind::Periodic: return "periodic";
  }
  return "unknown";
}

ActivationSchedule ActivationSchedule::synchronous(int n) {
  if (n < 2) throw Error(ErrorKind::TooFewAgents, "schedule needs at least 2 agents");
  return ActivationSchedule(Kind::Synchronous, n, {}, 1);
}

ActivationSchedule ActivationSchedule::alternating(int n) {
  if (n != 2) {
    throw Error(ErrorKind::AlternatingRequiresTwoAgents,
                "alternating schedule is defined for exactly 2 agents, got " + std::to_string(n));
  }
  return ActivationSchedule(Kind::Alternating, n, {{1}, {0}}, 2);
}

ActivationSchedule ActivationSchedule::periodic(int n, Pattern pattern) {
  if (n < 2) throw Error(ErrorKind::TooFewAgents, "schedule needs at least 2 agents");
  if (pattern.empty()) throw Error(ErrorKind::InvalidSchedule, "periodic pattern is empty");
  const int len = static_cast<int>(pattern.size());
  std::vector<std::vector<int>> positions(n);
  for (int p = 0; p < len; ++p) {
    auto& step = pattern[p];
    if (step.empty()) {
      throw Error(ErrorKind::InvalidSchedule,
                  "pattern step " + std::to_string(p) + " activates no agent");
    }
    std::sort(step.begin(), step.end());
    if (std::adjacent_find(step.begin(), step.end()) != step.end()) {
      throw Error(ErrorKind::InvalidSchedule,
                  "pattern step " + std::to_string(p) + " lists an agent twice");
    }
    for (AgentId a : step) {
      if (a < 0 || a >= n) {
        throw Error(ErrorKind::InvalidAgent, "pattern step " + std::to_string(p) +
                                                 " references agent " + std::to_string(a));
      }
      positions[a].push_back(p);
    }
  }
  int bound = 0;
  for (AgentId a = 0; a < n; ++a) {
    const auto& pos = positions[a];
    if (pos.empty()) {
      throw Error(ErrorKind::InvalidSchedule,
                  "agent " + std::to_string(a) + " never acts in the periodic pattern");
    }
    // Cyclic gaps; the wrap-around gap also dominates the initial gap from t = 0.
    for (std::size_t m = 1; m < pos.size(); ++m) bound = std::max(bound, pos[m] - pos[m - 1]);
    bound = std::max(bound, pos.front() + len - pos.back());
  }
  return ActivationSchedule(Kind::Periodic, n, std::move(pattern), bound);
}

std::vector<AgentId> ActivationSchedule::activations_at(TimeStep t) const {
  if (t < 0) throw Error(ErrorKind::InvalidArgument, "time index must be non-negative");
  if (t == 0 || kind_ == Kind::Synchronous) {
    std::vector<AgentId> all(n_);
    std::iota(all.begin(), all.end(), 0);
    return all;
  }
  if (kind_ == Kind::Alternating) return {t % 2 == 0 ? 0 : 1};
  return pattern_[static_cast<std::size_t>((t - 1) % static_cast<TimeStep>(pattern_.size()))];
}

bool ActivationSchedule::is_active(AgentId i, TimeStep t) const {
  if (t == 0 || kind_ == Kind::Synchronous) return true;
  if (kind_ == Kind::Alternating) return (t % 2 == 0) == (i == 0);
  const auto& step =
      pattern_[static_cast<std::size_t>((t - 1) % static_cast<TimeStep>(pattern_.size()))];
  return std::binary_search(step.begin(), step.end(), i);
}

std::vector<AgentId> activations_at(const ActivationSchedule& s, TimeStep t) {
  return s.activations_at(t);
}

// ---------------------------------------------------------------------------
// ActionVector

ActionVector ActionVector::initial(std::span<const AgentSpec> agents, const InteractionGraph& g) {
  validate_agents(agents, g);
  std::vector<double> v(g.directed_edge_count());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = agents[g.edge_of(k).from].kindness;
  return ActionVector(std::move(v));
}

double sup_distance(const ActionVector& a, const ActionVector& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorKind::DimensionMismatch, "action vectors of length " +
                                                  std::to_string(a.size()) + " and " +
                                                  std::to_string(b.size()));
  }
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, std::abs(a[k] - b[k]));
  return d;
}

double sup_norm(const ActionVector& a) {
  double d = 0.0;
  for (double v : a) d = std::max(d, std::abs(v));
  return d;
}

// ---------------------------------------------------------------------------
// Scenario

void validate_agents(std::span<const AgentSpec> agents, const InteractionGraph& g) {
  if (static_cast<int>(agents.size()) != g.agent_count()) {
    throw Error(ErrorKind::DimensionMismatch, std::to_string(agents.size()) +
                                                  " agent specs for a graph of " +
                                                  std::to_string(g.agent_count()) + " agents");
  }
  for (std::size_t i = 0; i < agents.size(); ++i) {
    try {
      agents[i].validate();
    } catch (const Error& e) {
      throw Error(e.kind(), "agent " + std::to_string(i) + ": " + e.message());
    }
  }
}

Scenario Scenario::make(std::vector<AgentSpec> agents, InteractionGraph graph,
                        ActivationSchedule schedule) {
  validate_agents(agents, graph);
  if (schedule.agent_count() != graph.agent_count()) {
    throw Error(ErrorKind::DimensionMismatch, "schedule covers " +
                                                  std::to_string(schedule.agent_count()) +
                                                  " agents, graph has " +
                                                  std::to_string(graph.agent_count()));
  }
  return Scenario{std::move(agents), std::move(graph), std::move(schedule)};
}

}  // namespace recip
