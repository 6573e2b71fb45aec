#include <doctest.h>

#include "recip/model.hpp"
#include "support.hpp"

using namespace recip;

namespace {

template <class F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("agent coefficients") {
  CHECK_NOTHROW((AgentSpec{1.0, 0.5, 0.5, Attitude::Fixed}.validate()));
  CHECK_NOTHROW((AgentSpec{1.0, 0.7, 0.3 + 1e-13, Attitude::Fixed}.validate()));
  CHECK(kind_of([] { AgentSpec{1.0, -0.1, 0.2, Attitude::Fixed}.validate(); }) ==
        ErrorKind::InvalidCoefficients);
  CHECK(kind_of([] { AgentSpec{1.0, 0.6, 0.5, Attitude::Floating}.validate(); }) ==
        ErrorKind::InvalidCoefficients);
  CHECK(kind_of([] { AgentSpec{NAN, 0.1, 0.1, Attitude::Floating}.validate(); }) ==
        ErrorKind::InvalidCoefficients);

  CHECK(AgentSpec{0, 0.3, 0.2, Attitude::Fixed}.self_weight() == doctest::Approx(0.5));
  CHECK(AgentSpec{0, 0.7, 0.3, Attitude::Fixed}.self_weight() == 0.0);
  CHECK(AgentSpec{0, 0.3, 0.2, Attitude::Fixed}.anchored());
  CHECK_FALSE(AgentSpec{0, 0.7, 0.3, Attitude::Fixed}.anchored());
  CHECK_FALSE(AgentSpec{0, 0.3, 0.2, Attitude::Floating}.anchored());
}

TEST_CASE("attitude names") {
  CHECK(attitude_from_string("fixed") == Attitude::Fixed);
  CHECK(attitude_from_string("Floating") == Attitude::Floating);
  CHECK(kind_of([] { attitude_from_string("stubborn"); }) == ErrorKind::InvalidArgument);
  CHECK(to_string(Attitude::Fixed) == "fixed");
}

TEST_CASE("graph construction errors") {
  using E = EdgeList;
  CHECK(kind_of([] { InteractionGraph::build(1, E{}); }) == ErrorKind::TooFewAgents);
  CHECK(kind_of([] { InteractionGraph::build(2, E{{0, 2}}); }) == ErrorKind::InvalidAgent);
  CHECK(kind_of([] { InteractionGraph::build(2, E{{1, 1}, {0, 1}}); }) == ErrorKind::SelfLoop);
  CHECK(kind_of([] { InteractionGraph::build(2, E{{0, 1}, {1, 0}}); }) ==
        ErrorKind::DuplicateEdge);
  CHECK(kind_of([] { InteractionGraph::build(4, E{{0, 1}, {2, 3}}); }) ==
        ErrorKind::DisconnectedGraph);
}

TEST_CASE("directed edges are indexed lexicographically") {
  const auto g = InteractionGraph::build(3, EdgeList{{1, 2}, {0, 1}});
  REQUIRE(g.directed_edge_count() == 4);
  CHECK(g.edge_of(0) == DirectedEdge{0, 1});
  CHECK(g.edge_of(1) == DirectedEdge{1, 0});
  CHECK(g.edge_of(2) == DirectedEdge{1, 2});
  CHECK(g.edge_of(3) == DirectedEdge{2, 1});
  CHECK(g.index_of(2, 1) == 3);
  CHECK(g.reverse_of(g.index_of(1, 2)) == g.index_of(2, 1));
  CHECK(g.degree(1) == 2);
  CHECK(g.degree(0) == 1);
  CHECK(g.has_edge(0, 1));
  CHECK_FALSE(g.has_edge(0, 2));
  CHECK(kind_of([&] { (void)g.index_of(0, 2); }) == ErrorKind::InvalidArgument);

  for (AgentId i = 0; i < 3; ++i) {
    for (std::size_t k : g.outgoing(i)) CHECK(g.edge_of(k).from == i);
    for (std::size_t k : g.incoming(i)) CHECK(g.edge_of(k).to == i);
    CHECK(g.outgoing(i).size() == static_cast<std::size_t>(g.degree(i)));
  }
}

TEST_CASE("odd cycles") {
  CHECK(has_odd_cycle(testing::clique(3)));
  CHECK_FALSE(has_odd_cycle(InteractionGraph::build(4, EdgeList{{0, 1}, {1, 2}, {2, 3}, {3, 0}})));
  CHECK_FALSE(has_odd_cycle(InteractionGraph::build(3, EdgeList{{0, 1}, {1, 2}})));
  CHECK(has_odd_cycle(
      InteractionGraph::build(5, EdgeList{{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}})));
}

TEST_CASE("schedules") {
  SUBCASE("synchronous") {
    const auto s = ActivationSchedule::synchronous(3);
    CHECK(s.activations_at(0) == std::vector<AgentId>{0, 1, 2});
    CHECK(s.activations_at(7) == std::vector<AgentId>{0, 1, 2});
    CHECK(s.activity_bound() == 1);
  }
  SUBCASE("alternating") {
    const auto s = ActivationSchedule::alternating(2);
    CHECK(s.activations_at(0) == std::vector<AgentId>{0, 1});
    CHECK(s.activations_at(1) == std::vector<AgentId>{1});
    CHECK(s.activations_at(2) == std::vector<AgentId>{0});
    CHECK(s.activations_at(3) == std::vector<AgentId>{1});
    CHECK(s.activity_bound() == 2);
    CHECK(kind_of([] { ActivationSchedule::alternating(3); }) ==
          ErrorKind::AlternatingRequiresTwoAgents);
  }
  SUBCASE("periodic") {
    const auto s = ActivationSchedule::periodic(3, {{2, 0}, {1}, {0}});
    CHECK(s.activations_at(0) == std::vector<AgentId>{0, 1, 2});
    CHECK(s.activations_at(1) == std::vector<AgentId>{0, 2});
    CHECK(s.activations_at(2) == std::vector<AgentId>{1});
    CHECK(s.activations_at(4) == std::vector<AgentId>{0, 2});
    CHECK(s.is_active(2, 4));
    CHECK_FALSE(s.is_active(2, 5));
    // agent 1 acts every 3 steps, agent 2 too, agent 0 at gaps 2 and 1
    CHECK(s.activity_bound() == 3);
  }
  SUBCASE("periodic validation") {
    CHECK(kind_of([] { ActivationSchedule::periodic(2, {}); }) == ErrorKind::InvalidSchedule);
    CHECK(kind_of([] { ActivationSchedule::periodic(2, {{0}, {}}); }) ==
          ErrorKind::InvalidSchedule);
    CHECK(kind_of([] { ActivationSchedule::periodic(2, {{0}, {0}}); }) ==
          ErrorKind::InvalidSchedule);
    CHECK(kind_of([] { ActivationSchedule::periodic(2, {{0, 0, 1}}); }) ==
          ErrorKind::InvalidSchedule);
    CHECK(kind_of([] { ActivationSchedule::periodic(2, {{0, 2}}); }) == ErrorKind::InvalidAgent);
  }
}

TEST_CASE("initial action vector and distances") {
  const auto g = testing::clique(3);
  const std::vector<AgentSpec> agents{{0.0, 0.1, 0.1, Attitude::Fixed},
                                      {0.5, 0.1, 0.1, Attitude::Fixed},
                                      {1.0, 0.1, 0.1, Attitude::Fixed}};
  const auto x = ActionVector::initial(agents, g);
  for (std::size_t k = 0; k < x.size(); ++k) CHECK(x[k] == agents[g.edge_of(k).from].kindness);
  CHECK(sup_norm(x) == 1.0);
  CHECK(sup_distance(x, ActionVector(6, 0.0)) == 1.0);
  CHECK(kind_of([&] { sup_distance(x, ActionVector(5, 0.0)); }) == ErrorKind::DimensionMismatch);
}

TEST_CASE("scenario validation") {
  const auto g = testing::clique(3);
  std::vector<AgentSpec> two{{0, 0.1, 0.1, Attitude::Fixed}, {0, 0.1, 0.1, Attitude::Fixed}};
  CHECK(kind_of([&] { Scenario::make(two, g, ActivationSchedule::synchronous(3)); }) ==
        ErrorKind::DimensionMismatch);
  std::vector<AgentSpec> bad{{0, 0.1, 0.1, Attitude::Fixed},
                             {0, 0.6, 0.6, Attitude::Fixed},
                             {0, 0.1, 0.1, Attitude::Fixed}};
  try {
    Scenario::make(bad, g, ActivationSchedule::synchronous(3));
    FAIL("expected InvalidCoefficients");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidCoefficients);
    CHECK(e.message().find("agent 1") != std::string::npos);
  }
}

TEST_CASE("odd cycle detection agrees with exhaustive two-coloring") {
  testing::Rng rng(11);
  for (int trial = 0; trial < 150; ++trial) {
    const int n = testing::uniform_int(rng, 2, 6);
    const auto g = testing::random_graph(rng, n, 0.35);
    bool two_colorable = false;
    for (unsigned mask = 0; mask < (1u << n) && !two_colorable; ++mask) {
      bool ok = true;
      for (auto [i, j] : g.edges()) ok = ok && (((mask >> i) & 1u) != ((mask >> j) & 1u));
      two_colorable = ok;
    }
    CHECK(has_odd_cycle(g) == !two_colorable);
  }
}

TEST_CASE("edge indexing is a bijection") {
  testing::Rng rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    const auto g = testing::random_graph(rng, testing::uniform_int(rng, 2, 8));
    REQUIRE(g.directed_edge_count() == 2 * g.edges().size());
    for (std::size_t k = 0; k < g.directed_edge_count(); ++k) {
      const auto e = g.edge_of(k);
      CHECK(g.index_of(e.from, e.to) == k);
      if (k > 0) {
        const auto p = g.edge_of(k - 1);
        CHECK(std::pair(p.from, p.to) < std::pair(e.from, e.to));
      }
    }
  }
}

TEST_CASE("activity bound is never exceeded") {
  testing::Rng rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = testing::uniform_int(rng, 2, 5);
    const auto s = testing::random_periodic(rng, n, 6);
    const TimeStep span = 3 * static_cast<TimeStep>(s.pattern().size()) + 1;
    for (AgentId i = 0; i < n; ++i) {
      TimeStep last = 0;
      int max_gap = 0;
      for (TimeStep t = 1; t <= span; ++t) {
        if (s.is_active(i, t)) {
          max_gap = std::max<int>(max_gap, static_cast<int>(t - last));
          last = t;
        }
      }
      CHECK(max_gap <= s.activity_bound());
    }
  }
}

TEST_CASE("spec lookup examples") {
  CHECK(activations_at(ActivationSchedule::periodic(2, {{0}, {1}, {0, 1}}), 3) ==
        std::vector<AgentId>{0, 1});
  CHECK(activations_at(ActivationSchedule::synchronous(4), 7) ==
        std::vector<AgentId>{0, 1, 2, 3});
  const auto pair = build_graph(2, EdgeList{{0, 1}});
  CHECK(pair.directed_edge_count() == 2);
  CHECK(pair.degree(0) == 1);
  const auto tri = testing::clique(3);
  for (AgentId i = 0; i < 3; ++i) CHECK(tri.degree(i) == 2);
  CHECK(kind_of([] { build_graph(3, EdgeList{{0, 1}}); }) == ErrorKind::DisconnectedGraph);
}
