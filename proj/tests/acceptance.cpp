// Acceptance runner: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails. Tolerances are the contractual ones; do not loosen them.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "recip/analysis.hpp"
#include "recip/dynamics.hpp"
#include "recip/limits.hpp"
#include "recip/spectral.hpp"
#include "support.hpp"

using namespace recip;
using recip::testing::Rng;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "  failed: " << what << '\n';
    }
  }
};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const InteractionGraph& edge() {
  static const auto g = InteractionGraph::build(2, EdgeList{{0, 1}});
  return g;
}

std::vector<AgentId> everyone(int n) {
  std::vector<AgentId> all(n);
  for (int i = 0; i < n; ++i) all[i] = i;
  return all;
}

// 1 ---------------------------------------------------------------------------
void worked_example(Outcome& o) {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<AgentSpec> agents{{0.0, 0.5, 0.3, Attitude::Floating},
                                      {0.5, 0.5, 0.3, Attitude::Floating},
                                      {1.0, 0.8, 0.1, Attitude::Floating}};
  const auto g = testing::clique(3);
  const auto x1 = step(ActionVector::initial(agents, g), agents, g, everyone(3));
  const struct {
    AgentId from, to;
    double expect;
  } firsts[] = {{0, 1, 0.475}, {0, 2, 0.975}, {1, 0, 0.25}};
  for (const auto& f : firsts) {
    const double got = x1[g.index_of(f.from, f.to)];
    o.detail << "  x_{" << f.from + 1 << ',' << f.to + 1 << "}(1) = " << num(got) << " (expected "
             << num(f.expect) << ")\n";
    o.require(std::abs(got - f.expect) <= 1e-15,
              "x_{" + std::to_string(f.from + 1) + "," + std::to_string(f.to + 1) +
                  "}(1) differs from " + num(f.expect) + " by " + num(std::abs(got - f.expect)));
  }
  const double target = 25.0 / 52.0;
  const double closed = std::get<Common>(network_floating_limit(agents, g).value).value;
  const auto traj = simulate(agents, g, ActivationSchedule::synchronous(3), {10'000, 1e-13, 5});
  o.require(traj.kind() == ClassificationKind::Converged, "simulation did not converge");
  double sim_gap = 0.0;
  for (double v : traj.final_state()) sim_gap = std::max(sim_gap, std::abs(v - target));
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.detail << "  closed form " << num(closed) << ", simulation gap " << num(sim_gap) << ", "
           << secs << " s\n";
  o.require(std::abs(closed - target) <= 1e-9, "closed form differs from 25/52");
  o.require(sim_gap <= 1e-9, "simulation differs from 25/52");
  o.require(secs < 1.0, "runtime over 1 s");
}

// 2 ---------------------------------------------------------------------------
void two_agent_golden(Outcome& o) {
  for (Attitude att : {Attitude::Fixed, Attitude::Floating}) {
    const std::vector<AgentSpec> agents{{0.0, 0.5, 0.0, att}, {0.5, 0.5, 0.0, att}};
    const double ex = att == Attitude::Fixed ? 1.0 / 6.0 : 0.25;
    const double ey = att == Attitude::Fixed ? 1.0 / 3.0 : 0.25;
    const auto res =
        two_agent_limit(TwoAgentCase::from_agents(agents, ActivationSchedule::Kind::Synchronous));
    const auto lim = edge_limits(res, edge());
    o.require(lim.has_value(), "no closed form");
    if (!lim) return;
    // exact: the nearest doubles to 1/6, 1/3 and 0.25
    o.require((*lim)[0] == ex && (*lim)[1] == ey,
              std::string(to_string(att)) + " closed form " + num((*lim)[0]) + ", " +
                  num((*lim)[1]));
    const auto traj = simulate(agents, edge(), ActivationSchedule::synchronous(2), {1000, 1e-12, 5});
    o.require(traj.kind() == ClassificationKind::Converged,
              std::string(to_string(att)) + " simulation not converged in 1000 steps");
    const double gap = std::max(std::abs(traj.final_state()[0] - ex),
                                std::abs(traj.final_state()[1] - ey));
    o.require(gap <= 1e-9, std::string(to_string(att)) + " simulation gap " + num(gap));
    o.detail << "  " << to_string(att) << ": (" << num((*lim)[0]) << ", " << num((*lim)[1])
             << "), simulation gap " << num(gap) << " after " << traj.horizon_used << " steps\n";
  }
}

// 3 ---------------------------------------------------------------------------
void fixed_floating_dominance(Outcome& o) {
  Rng rng(301);
  double worst = 0.0;
  int above_one = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const AgentId fixed = testing::uniform_int(rng, 0, 1);
    std::vector<AgentSpec> agents(2);
    agents[fixed] = {testing::uniform(rng, -1, 5), testing::uniform(rng, 0.01, 0.99), 0.0,
                     Attitude::Fixed};
    agents[1 - fixed] = {testing::uniform(rng, -1, 5), testing::uniform(rng, 0.01, 1.0), 0.0,
                         Attitude::Floating};
    if (agents[0].r + agents[1].r > 1.0) ++above_one;
    const auto traj =
        simulate(agents, edge(), ActivationSchedule::synchronous(2), {1'000'000, 1e-13, 5});
    if (traj.kind() != ClassificationKind::Converged) {
      o.require(false, "trial " + std::to_string(trial) + " did not converge");
      continue;
    }
    for (double v : traj.final_state()) worst = std::max(worst, std::abs(v - agents[fixed].kindness));
  }
  o.detail << "  50 scenarios (" << above_one << " with r1 + r2 > 1), worst gap " << num(worst)
           << '\n';
  o.require(worst <= 1e-7, "gap above 1e-7");
}

// 4 ---------------------------------------------------------------------------
void matrix_equivalence(Outcome& o) {
  Rng rng(401);
  double worst = 0.0;
  int checks = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = testing::uniform_int(rng, 2, 6);
    const auto g = testing::random_graph(rng, n);
    std::vector<AgentSpec> agents;
    for (int i = 0; i < n; ++i) agents.push_back(testing::random_agent(rng, testing::random_attitude(rng)));
    ActionVector x = ActionVector::initial(agents, g);
    for (int t = 0; t < 5; ++t) {
      const auto active = testing::random_active(rng, n);
      worst = std::max(worst, matrix_step_discrepancy(agents, g, active, x));
      ++checks;
      x = step(x, agents, g, active);
    }
  }
  o.detail << "  200 scenarios, " << checks << " steps, worst " << num(worst) << '\n';
  o.require(worst <= 1e-13, "discrepancy above 1e-13");
}

// 5 ---------------------------------------------------------------------------
void mixed_limits(Outcome& o) {
  Rng rng(501);
  double worst = 0.0, min_r2 = 1.0;
  int done = 0, attempts = 0;
  while (done < 150 && attempts < 10'000) {
    ++attempts;
    const int n = testing::uniform_int(rng, 3, 6);
    const auto g = testing::random_graph(rng, n);
    std::vector<AgentSpec> agents;
    for (int i = 0; i < n; ++i) {
      auto a = testing::random_agent(rng, testing::random_attitude(rng), 0.05);
      agents.push_back(a);
    }
    const auto rep = check_structure(agents, g);
    if (rep.verdict != LimitTheorem::MixedNetwork) continue;
    ++done;
    const auto solved = std::get<PerEdge>(network_mixed_limit(agents, g).value).values;
    const auto traj = simulate(agents, g, ActivationSchedule::synchronous(n), {1'000'000, 1e-13, 5});
    if (traj.kind() != ClassificationKind::Converged) {
      o.require(false, "scenario " + std::to_string(done) + " did not converge");
      continue;
    }
    worst = std::max(worst, sup_distance(solved, traj.final_state()));
    const auto est = estimate_rate(traj);
    if (!est.geometric()) {
      o.require(false, "scenario " + std::to_string(done) + ": rate not geometric (" + est.note + ")");
      continue;
    }
    min_r2 = std::min(min_r2, est.r_squared);
  }
  o.detail << "  " << done << " scenarios, worst solve/simulation gap " << num(worst)
           << ", lowest R^2 " << num(min_r2) << '\n';
  o.require(done >= 100, "fewer than 100 scenarios");
  o.require(worst <= 1e-7, "gap above 1e-7");
  o.require(min_r2 >= 0.9, "R^2 below 0.9");
}

// 6 ---------------------------------------------------------------------------
void regularity(Outcome& o) {
  const auto start = std::chrono::steady_clock::now();
  const auto rep = regularity_suite();
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.detail << "  " << rep.scenarios << " grid scenarios in " << secs << " s\n";
  for (const auto& c : rep.checks) {
    o.detail << "  " << (c.passed() ? "ok  " : "FAIL") << ' ' << c.name << ": " << c.failures
             << '/' << c.curves << " failing, worst " << num(c.worst);
    if (!c.passed()) o.detail << ", " << c.coarse_failures << " beyond 0.01";
    o.detail << '\n';
    if (!c.passed()) o.detail << "    first: " << c.first_failure << '\n';
    o.require(c.passed(), c.name);
  }
  o.require(secs < 300.0, "runtime over 5 min");
}

// 7 ---------------------------------------------------------------------------
void counterexample(Outcome& o) {
  const auto f = counterexample_fixed_ordering();
  o.detail << "  L_{1,2} = " << num(f.low_limit) << ", L_{3,2} = " << num(f.high_limit)
           << ", solve/simulation gap " << num(f.max_disagreement) << '\n';
  o.require(f.scenario.agents[f.low].kindness < f.scenario.agents[f.high].kindness,
            "kindness order");
  o.require(f.reversed(), "L_{1,2} <= L_{3,2}");
  o.require(f.max_disagreement <= 1e-7, "solve and simulation disagree");
}

// 8 ---------------------------------------------------------------------------
void non_convergence(Outcome& o) {
  for (Attitude att : {Attitude::Fixed, Attitude::Floating}) {
    const std::vector<AgentSpec> agents{{0.0, 1.0, 0.0, att}, {1.0, 1.0, 0.0, att}};
    const auto traj = simulate(agents, edge(), ActivationSchedule::synchronous(2), {50, 1e-10, 5});
    o.require(traj.kind() == ClassificationKind::PeriodTwo,
              std::string(to_string(att)) + " r = (1, 1) not PeriodTwo within 50 steps");
    if (const auto* p = std::get_if<PeriodTwo>(&traj.classification)) {
      o.detail << "  " << to_string(att) << " r = (1, 1): PeriodTwo at step " << p->at_step << '\n';
    }
  }
  const std::vector<AgentSpec> inert{{0.0, 0.0, 0.0, Attitude::Floating},
                                     {1.0, 0.0, 0.0, Attitude::Floating}};
  const auto traj = simulate(inert, edge(), ActivationSchedule::synchronous(2));
  const auto* c = std::get_if<Converged>(&traj.classification);
  o.require(c != nullptr, "r1 + r2 = 0 not Converged");
  if (c) o.require(c->limit[0] == 0.0 && c->limit[1] == 1.0, "limits are not (k1, k2)");
  const auto res = two_agent_limit(TwoAgentCase::from_agents(inert, ActivationSchedule::Kind::Synchronous));
  o.require(res.kind() == LimitKind::PerAgent, "closed form is not per-agent");
  o.detail << "  r1 + r2 = 0: " << to_string(traj.kind()) << ", closed form "
           << to_string(res.kind()) << '\n';
}

// 9 ---------------------------------------------------------------------------
struct Region {
  std::string name;
  std::string property;
  std::function<Scenario(Rng&)> make;
};

Scenario pair(Rng& rng, Attitude a1, double r1, Attitude a2, double r2, ActivationSchedule s) {
  double k1 = testing::uniform(rng, -1, 5), k2 = testing::uniform(rng, -1, 5);
  if (k1 == k2) k2 += 1.0;
  return Scenario::make({{k1, r1, 0.0, a1}, {k2, r2, 0.0, a2}}, edge(), std::move(s));
}

void lemma_suites(Outcome& o) {
  const auto sync = [] { return ActivationSchedule::synchronous(2); };
  const auto open = [](Rng& rng) { return testing::uniform(rng, 0.01, 0.99); };
  const std::vector<Region> regions{
      {"fixed-fixed synchronous", "oscillation",
       [&](Rng& rng) { return pair(rng, Attitude::Fixed, open(rng), Attitude::Fixed, open(rng), sync()); }},
      {"fixed-fixed, L_x <= L_y", "limit ordering",
       [&](Rng& rng) { return pair(rng, Attitude::Fixed, open(rng), Attitude::Fixed, open(rng), sync()); }},
      {"fixed-floating, r1 + r2 <= 1", "fixed-floating monotonicity",
       [&](Rng& rng) {
         const double rf = testing::uniform(rng, 0.0, 0.99);
         const double rg = testing::uniform(rng, 0.01, 1.0 - rf);
         return testing::uniform_int(rng, 0, 1)
                    ? pair(rng, Attitude::Fixed, rf, Attitude::Floating, rg, sync())
                    : pair(rng, Attitude::Floating, rg, Attitude::Fixed, rf, sync());
       }},
      {"fixed-floating ordering, r1 + r2 <= 1", "fixed-floating ordering",
       [&](Rng& rng) {
         const double rf = testing::uniform(rng, 0.0, 1.0);
         const double rg = testing::uniform(rng, 0.0, 1.0 - rf);
         return pair(rng, Attitude::Fixed, rf, Attitude::Floating, rg, sync());
       }},
      {"floating-floating, r1 + r2 <= 1", "floating-floating ordering",
       [&](Rng& rng) {
         const double r1 = testing::uniform(rng, 0.0, 1.0);
         return pair(rng, Attitude::Floating, r1, Attitude::Floating,
                     testing::uniform(rng, 0.0, 1.0 - r1), sync());
       }},
      {"floating-floating, r1 + r2 >= 1, periodic", "floating-floating ordering",
       [&](Rng& rng) {
         const double r1 = testing::uniform(rng, 0.0, 1.0);
         return pair(rng, Attitude::Floating, r1, Attitude::Floating,
                     testing::uniform(rng, 1.0 - r1, 1.0), testing::random_periodic(rng, 2));
       }},
      {"fixed-fixed, periodic schedules", "subsequence",
       [&](Rng& rng) {
         return pair(rng, Attitude::Fixed, open(rng), Attitude::Fixed, open(rng),
                     testing::random_periodic(rng, 2));
       }},
      {"fixed-fixed, alternating", "subsequence",
       [&](Rng& rng) {
         return pair(rng, Attitude::Fixed, open(rng), Attitude::Fixed, open(rng),
                     ActivationSchedule::alternating(2));
       }},
  };
  Rng rng(901);
  for (const auto& region : regions) {
    int held = 0, skipped = 0;
    std::string first;
    for (int trial = 0; trial < 200; ++trial) {
      const Scenario s = region.make(rng);
      const auto traj = simulate(s, {100'000, 1e-12, 5});
      for (const auto& r : check_lemma_suite(s, traj)) {
        if (r.status == PropertyStatus::Violated && first.empty()) {
          first = r.name + ": " + r.detail;
        }
        if (r.name != region.property) continue;
        if (r.status == PropertyStatus::Holds) ++held;
        if (r.status == PropertyStatus::Skipped) ++skipped;
      }
    }
    o.detail << "  " << region.name << ": " << region.property << " holds " << held
             << "/200, skipped " << skipped << '\n';
    o.require(held == 200, region.name + ": " + region.property + " held in " +
                               std::to_string(held) + "/200");
    o.require(first.empty(), region.name + ": " + first);
  }
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, void (*)(Outcome&)>> criteria{
      {"worked example: first step exact, 25/52 by formula and simulation", worked_example},
      {"two-agent golden limits", two_agent_golden},
      {"fixed agent dominates a floating partner", fixed_floating_dominance},
      {"matrix step equals dynamics step", matrix_equivalence},
      {"mixed-network solve equals simulation, geometric rate", mixed_limits},
      {"regularity suite over the full grid", regularity},
      {"fixed ordering counterexample", counterexample},
      {"non-convergence classification", non_convergence},
      {"lemma suites on random scenarios", lemma_suites},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "  exception: " << e.what() << '\n';
    }
    std::cout << "criterion " << i + 1 << ' ' << (o.pass ? "PASS" : "FAIL") << ": "
              << criteria[i].first << '\n'
              << o.detail.str() << std::flush;
    if (!o.pass) ++failed;
  }
  std::cout << (criteria.size() - failed) << '/' << criteria.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
