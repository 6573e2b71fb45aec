#pragma once

// Domain types shared by every module: agents, the interaction graph with
// its directed-edge indexing, activation schedules and action vectors.
//
// All types are immutable once constructed; the static factories perform the
// structural validation and throw recip::Error on bad input.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "recip/errors.hpp"

namespace recip {

using AgentId = int;
using TimeStep = std::int64_t;

enum class Attitude { Fixed, Floating };

std::string_view to_string(Attitude a);
Attitude attitude_from_string(std::string_view s);

struct AgentSpec {
  double kindness = 0.0;
  double r = 0.0;        // weight on the counterpart's last action
  double r_prime = 0.0;  // weight on the neighborhood average
  Attitude attitude = Attitude::Floating;

  /// Weight of the kindness (Fixed) or own last action (Floating).
  /// Exactly zero when r + r' is within 1e-12 of 1, so rounding in r + r'
  /// cannot leave a spurious sliver of weight.
  double self_weight() const noexcept;

  /// Fixed with positive kindness weight. A Fixed agent with r + r' = 1
  /// updates exactly like a Floating one.
  bool anchored() const noexcept { return attitude == Attitude::Fixed && self_weight() > 0.0; }

  /// Throws InvalidCoefficients unless 0 <= r, 0 <= r', r + r' <= 1 and all
  /// values are finite.
  void validate() const;
};

struct DirectedEdge {
  AgentId from = 0;
  AgentId to = 0;

  friend bool operator==(const DirectedEdge&, const DirectedEdge&) = default;
};

using EdgeList = std::vector<std::pair<AgentId, AgentId>>;

/// Undirected connected simple graph. Every undirected edge {i,j} yields the
/// two directed edges (i,j) and (j,i); directed edges are indexed
/// lexicographically by (from, to).
class InteractionGraph {
 public:
  static InteractionGraph build(int n, std::span<const std::pair<AgentId, AgentId>> edges);

  int agent_count() const noexcept { return n_; }
  std::size_t directed_edge_count() const noexcept { return directed_.size(); }
  /// Undirected edges as (min, max) pairs, sorted.
  const EdgeList& edges() const noexcept { return edges_; }

  DirectedEdge edge_of(std::size_t index) const { return directed_.at(index); }
  const std::vector<DirectedEdge>& directed_edges() const noexcept { return directed_; }
  /// Throws InvalidArgument if (from, to) is not an edge.
  std::size_t index_of(AgentId from, AgentId to) const;
  bool has_edge(AgentId from, AgentId to) const noexcept;
  /// Index of (j,i) for the directed edge (i,j) at `index`.
  std::size_t reverse_of(std::size_t index) const { return reverse_.at(index); }

  int degree(AgentId i) const { return static_cast<int>(neighbors_.at(i).size()); }
  std::span<const AgentId> neighbors(AgentId i) const { return neighbors_.at(i); }
  /// Indices of the directed edges (i, l), ordered by l.
  std::span<const std::size_t> outgoing(AgentId i) const { return outgoing_.at(i); }
  /// Indices of the directed edges (l, i), ordered by l.
  std::span<const std::size_t> incoming(AgentId i) const { return incoming_.at(i); }

 private:
  int n_ = 0;
  EdgeList edges_;
  std::vector<DirectedEdge> directed_;
  std::vector<std::size_t> reverse_;
  std::vector<std::vector<AgentId>> neighbors_;
  std::vector<std::vector<std::size_t>> outgoing_;
  std::vector<std::vector<std::size_t>> incoming_;
};

InteractionGraph build_graph(int n, std::span<const std::pair<AgentId, AgentId>> edges);

/// True iff the graph is not bipartite.
bool has_odd_cycle(const InteractionGraph& g);

/// Which agents act at each step. Step 0 always activates everybody.
class ActivationSchedule {
 public:
  enum class Kind { Synchronous, Alternating, Periodic };
  using Pattern = std::vector<std::vector<AgentId>>;

  static ActivationSchedule synchronous(int n);
  /// Two agents only: agent 0 at even t > 0, agent 1 at odd t.
  static ActivationSchedule alternating(int n);
  /// Step t > 0 activates pattern[(t - 1) mod pattern.size()].
  static ActivationSchedule periodic(int n, Pattern pattern);

  Kind kind() const noexcept { return kind_; }
  int agent_count() const noexcept { return n_; }
  const Pattern& pattern() const noexcept { return pattern_; }
  /// Largest gap between consecutive activations of any agent.
  int activity_bound() const noexcept { return activity_bound_; }

  /// Sorted list of agents acting at step t.
  std::vector<AgentId> activations_at(TimeStep t) const;
  bool is_active(AgentId i, TimeStep t) const;

 private:
  ActivationSchedule(Kind kind, int n, Pattern pattern, int bound)
      : kind_(kind), n_(n), pattern_(std::move(pattern)), activity_bound_(bound) {}

  Kind kind_;
  int n_;
  Pattern pattern_;
  int activity_bound_;
};

std::string_view to_string(ActivationSchedule::Kind k);

std::vector<AgentId> activations_at(const ActivationSchedule& s, TimeStep t);

/// Last-action value x_{i,j} for every directed edge, indexed like the graph.
class ActionVector {
 public:
  ActionVector() = default;
  explicit ActionVector(std::vector<double> values) : values_(std::move(values)) {}
  ActionVector(std::size_t size, double fill) : values_(size, fill) {}

  /// x_{i,j}(0) = k_i.
  static ActionVector initial(std::span<const AgentSpec> agents, const InteractionGraph& g);

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t k) const { return values_[k]; }
  double& operator[](std::size_t k) { return values_[k]; }
  std::span<const double> values() const noexcept { return values_; }
  const std::vector<double>& vector() const noexcept { return values_; }
  auto begin() const noexcept { return values_.begin(); }
  auto end() const noexcept { return values_.end(); }

  friend bool operator==(const ActionVector&, const ActionVector&) = default;

 private:
  std::vector<double> values_;
};

/// max_k |a[k] - b[k]|; throws DimensionMismatch on size mismatch.
double sup_distance(const ActionVector& a, const ActionVector& b);
double sup_norm(const ActionVector& a);

/// A complete, validated simulation input.
struct Scenario {
  std::vector<AgentSpec> agents;
  InteractionGraph graph;
  ActivationSchedule schedule;

  static Scenario make(std::vector<AgentSpec> agents, InteractionGraph graph,
                       ActivationSchedule schedule);
  int agent_count() const noexcept { return graph.agent_count(); }
};

/// Throws unless there is one valid AgentSpec per graph vertex.
void validate_agents(std::span<const AgentSpec> agents, const InteractionGraph& g);

}  // namespace recip
