#pragma once

// Shared by the unit tests and the acceptance runner: seeded scenario
// generators and a reference implementation of the update rules written
// against an edge map rather than the library's indexed vectors.

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <utility>
#include <vector>

#include "recip/model.hpp"

namespace recip::testing {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

/// One of 0.1, 0.2, ..., 0.9.
inline double grid_coefficient(Rng& rng) { return uniform_int(rng, 1, 9) / 10.0; }

/// Random spanning tree plus extra edges with probability p.
inline InteractionGraph random_graph(Rng& rng, int n, double p = 0.4) {
  EdgeList edges;
  for (int v = 1; v < n; ++v) edges.emplace_back(uniform_int(rng, 0, v - 1), v);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const bool present = std::any_of(edges.begin(), edges.end(), [&](auto e) {
        return (e.first == i && e.second == j) || (e.first == j && e.second == i);
      });
      if (!present && uniform(rng, 0, 1) < p) edges.emplace_back(i, j);
    }
  }
  return InteractionGraph::build(n, edges);
}

inline InteractionGraph clique(int n) {
  EdgeList edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  return InteractionGraph::build(n, edges);
}

/// r + r' <= 1 with both drawn continuously; r' >= min_rprime.
inline AgentSpec random_agent(Rng& rng, Attitude att, double min_rprime = 0.0) {
  AgentSpec a;
  a.kindness = uniform(rng, -1.0, 5.0);
  a.attitude = att;
  a.r_prime = uniform(rng, min_rprime, 0.9);
  a.r = uniform(rng, 0.0, 1.0 - a.r_prime);
  return a;
}

inline Attitude random_attitude(Rng& rng) {
  return uniform_int(rng, 0, 1) ? Attitude::Fixed : Attitude::Floating;
}

/// Random agent subset for one step; never empty.
inline std::vector<AgentId> random_active(Rng& rng, int n) {
  std::vector<AgentId> out;
  for (AgentId i = 0; i < n; ++i)
    if (uniform_int(rng, 0, 1)) out.push_back(i);
  if (out.empty()) out.push_back(uniform_int(rng, 0, n - 1));
  return out;
}

/// Random periodic schedule in which every agent acts at least once.
inline ActivationSchedule random_periodic(Rng& rng, int n, int max_len = 5) {
  const int len = uniform_int(rng, 1, max_len);
  ActivationSchedule::Pattern pattern(len);
  for (auto& stepset : pattern) stepset = random_active(rng, n);
  for (AgentId i = 0; i < n; ++i) {
    bool seen = false;
    for (const auto& st : pattern) seen = seen || std::find(st.begin(), st.end(), i) != st.end();
    if (!seen) pattern[uniform_int(rng, 0, len - 1)].push_back(i);
  }
  for (auto& st : pattern) std::sort(st.begin(), st.end());
  return ActivationSchedule::periodic(n, pattern);
}

/// Reference update: x keyed by (from, to), neighbors from the edge list.
using EdgeMap = std::map<std::pair<AgentId, AgentId>, double>;

inline EdgeMap reference_initial(const std::vector<AgentSpec>& agents, const EdgeList& edges) {
  EdgeMap x;
  for (auto [i, j] : edges) {
    x[{i, j}] = agents[i].kindness;
    x[{j, i}] = agents[j].kindness;
  }
  return x;
}

inline EdgeMap reference_step(const EdgeMap& x, const std::vector<AgentSpec>& agents,
                              const std::vector<AgentId>& active) {
  EdgeMap next = x;
  for (AgentId i : active) {
    double received = 0.0;
    int degree = 0;
    for (const auto& [e, v] : x) {
      if (e.second == i) {
        received += v;
        ++degree;
      }
    }
    const AgentSpec& a = agents[i];
    const double own_weight = std::max(0.0, 1.0 - a.r - a.r_prime);
    for (auto& [e, v] : next) {
      if (e.first != i) continue;
      const double anchor = a.attitude == Attitude::Fixed ? a.kindness : x.at(e);
      v = own_weight * anchor + a.r * x.at({e.second, e.first}) + a.r_prime * received / degree;
    }
  }
  return next;
}

inline std::vector<double> to_vector(const EdgeMap& x) {
  std::vector<double> out;
  for (const auto& [e, v] : x) out.push_back(v);  // map order is lexicographic
  return out;
}

}  // namespace recip::testing
