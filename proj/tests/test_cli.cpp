#include <doctest.h>

#include <filesystem>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "recip/cli.hpp"
#include "recip/io.hpp"

namespace fs = std::filesystem;
using namespace recip;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "recip");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Run r;
  r.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

class Workspace {
 public:
  explicit Workspace(const char* tag)
      : dir_(fs::temp_directory_path() /
             ("recip_cli_" + std::string(tag) + "_" + std::to_string(::getpid()))) {
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  ~Workspace() { fs::remove_all(dir_); }

  std::string config(const std::string& name, const std::string& text) const {
    write_atomic(dir_ / name, text);
    return (dir_ / name).string();
  }
  std::string out() const { return (dir_ / "out").string(); }
  bool has(const std::string& name) const { return fs::exists(dir_ / "out" / name); }
  std::string read(const std::string& name) const { return read_file(dir_ / "out" / name); }

 private:
  fs::path dir_;
};

std::string scenario(const char* name) { return (fs::path(RECIP_SCENARIO_DIR) / name).string(); }

constexpr const char* kFixedPair = R"({
  "agents": [{"kindness": 0, "r": 0.5, "attitude": "fixed"},
             {"kindness": 0.5, "r": 0.5, "attitude": "fixed"}],
  "edges": [[0, 1]]
})";

constexpr const char* kFixedFloating = R"({
  "agents": [{"kindness": 1, "r": 0.3, "attitude": "floating"},
             {"kindness": 2, "r": 0.5, "attitude": "fixed"}],
  "edges": [[0, 1]]
})";

constexpr const char* kAsyncMixed = R"({
  "agents": [{"kindness": 1, "r": 0.3, "r_prime": 0.2, "attitude": "fixed"},
             {"kindness": 5, "r": 0.4, "r_prime": 0.3, "attitude": "fixed"},
             {"kindness": 2, "r": 0.5, "r_prime": 0.1, "attitude": "floating"}],
  "edges": [[0, 1], [0, 2], [1, 2]],
  "schedule": {"kind": "periodic", "pattern": [[0], [1, 2]]}
})";

constexpr const char* kOverweight = R"({
  "agents": [{"kindness": 0, "r": 0.5, "attitude": "fixed"},
             {"kindness": 1, "r": 0.8, "r_prime": 0.3, "attitude": "fixed"}],
  "edges": [[0, 1]]
})";

}  // namespace

TEST_CASE("exit codes follow the classification") {
  CHECK(cli::exit_code(ClassificationKind::Converged) == 0);
  CHECK(cli::exit_code(ClassificationKind::PeriodTwo) == 2);
  CHECK(cli::exit_code(ClassificationKind::MaxStepsReached) == 3);
}

TEST_CASE("simulate") {
  Workspace ws("simulate");
  SUBCASE("colleagues converge to the weighted average") {
    const auto r = run({"simulate", "--config", scenario("colleagues.json"), "--out", ws.out(),
                        "--chart", "--matrix-dump"});
    CHECK(r.code == 0);
    CHECK(r.out.find("Converged") != std::string::npos);
    CHECK(r.out.find("0.4807692307") != std::string::npos);
    CHECK(r.out.find("rate:") != std::string::npos);
    CHECK(ws.has("trajectory.csv"));
    CHECK(ws.has("chart.svg"));
    CHECK(ws.has("matrix.csv"));
    const auto rows = parse_trajectory_csv(ws.read("trajectory.csv"));
    CHECK_FALSE(rows.empty());
  }
  SUBCASE("tit for tat is period two") {
    const auto r = run({"simulate", "--config", scenario("tit_for_tat.json"), "--out", ws.out()});
    CHECK(r.code == 2);
    CHECK(r.out.find("PeriodTwo") != std::string::npos);
  }
  SUBCASE("a short horizon runs out") {
    const auto r = run({"simulate", "--config", ws.config("pair.json", kFixedPair), "--out",
                        ws.out(), "--horizon", "3"});
    CHECK(r.code == 3);
  }
  SUBCASE("bad coefficients fail before any file is written") {
    const auto r = run({"simulate", "--config", ws.config("bad.json", kOverweight), "--out",
                        ws.out(), "--chart"});
    CHECK(r.code == 1);
    CHECK(r.err.find("agents[1].r_prime") != std::string::npos);
    CHECK_FALSE(fs::exists(ws.out()));
  }
  SUBCASE("syntax errors carry a position") {
    const auto r = run({"simulate", "--config", ws.config("broken.json", "{\n  \"agents\": [,\n}"),
                        "--out", ws.out()});
    CHECK(r.code == 1);
    CHECK(r.err.find("broken.json:2:") != std::string::npos);
  }
}

TEST_CASE("limit") {
  Workspace ws("limit");
  SUBCASE("fixed pair") {
    const auto r = run({"limit", "--config", ws.config("pair.json", kFixedPair), "--out", ws.out()});
    CHECK(r.code == 0);
    CHECK(r.out.find("two-agent") != std::string::npos);
    CHECK(r.out.find("0.16666666666666") != std::string::npos);
    CHECK(r.out.find("0.33333333333333") != std::string::npos);
    const auto rows = parse_limit_csv(ws.read("limit.csv"));
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].value == doctest::Approx(1.0 / 6.0));
    CHECK(rows[0].source == "closed_form");
  }
  SUBCASE("all-floating clique") {
    const auto r = run({"limit", "--config", scenario("colleagues.json"), "--out", ws.out()});
    CHECK(r.code == 0);
    CHECK(r.out.find("all-floating") != std::string::npos);
    CHECK(r.out.find("0.48076923076923") != std::string::npos);
  }
  SUBCASE("asynchronous mixed network is open") {
    const auto r = run({"limit", "--config", ws.config("async.json", kAsyncMixed), "--out", ws.out()});
    CHECK(r.code == 4);
    CHECK(r.out.find("simulate") != std::string::npos);
    const auto rows = parse_limit_csv(ws.read("limit.csv"));
    CHECK(rows.front().source == "none");
  }
  SUBCASE("slackless pair is non-convergent") {
    const auto r = run({"limit", "--config", scenario("tit_for_tat.json"), "--out", ws.out()});
    CHECK(r.out.find("NonConvergent") != std::string::npos);
  }
}

TEST_CASE("sweep") {
  Workspace ws("sweep");
  SUBCASE("nine-point coefficient grid") {
    const auto r = run({"sweep", "--config", ws.config("ff.json", kFixedFloating), "--out",
                        ws.out(), "--agent", "0", "--param", "r",
                        "--values", "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9"});
    CHECK(r.code == 0);
    const auto rows = parse_sweep_csv(ws.read("sweep.csv"));
    CHECK(rows.size() == 18);
    CHECK(ws.has("sweep_report.txt"));
    CHECK(r.out.find("constant") != std::string::npos);
  }
  SUBCASE("degree sweep") {
    const auto r = run({"sweep", "--config", scenario("fixed_ordering.json"), "--out", ws.out(),
                        "--degree-sweep", "1,2,3", "--new-agent", "2,0.3,0.3,floating"});
    CHECK(r.code == 0);
    CHECK(parse_sweep_csv(ws.read("sweep.csv")).size() == 8 + 10 + 12);
  }
  SUBCASE("invalid grid point") {
    const auto r = run({"sweep", "--config", ws.config("ff.json", kFixedFloating), "--out",
                        ws.out(), "--agent", "0", "--param", "r", "--values", "0.5,1.5"});
    CHECK(r.code == 1);
    CHECK(r.err.find("1.5") != std::string::npos);
    CHECK_FALSE(fs::exists(ws.out()));
  }
  SUBCASE("bad attachment") {
    const auto r = run({"sweep", "--config", scenario("fixed_ordering.json"), "--out", ws.out(),
                        "--degree-sweep", "0", "--new-agent", "2,0.3,0.3,floating"});
    CHECK(r.code == 1);
    CHECK(r.err.find("InvalidAttachment") != std::string::npos);
  }
}

TEST_CASE("check") {
  Workspace ws("check");
  SUBCASE("fixed-floating pair") {
    const auto r = run({"check", "--config", ws.config("ff.json", kFixedFloating), "--out", ws.out()});
    CHECK(r.code == 0);
    CHECK(r.out.find("holds     fixed-floating monotonicity") != std::string::npos);
    CHECK(r.out.find("holds     fixed-floating ordering") != std::string::npos);
    CHECK(r.out.find("all applicable properties hold") != std::string::npos);
  }
  SUBCASE("counterexample is reported as a finding") {
    const auto r = run({"check", "--config", scenario("fixed_ordering.json"), "--out", ws.out()});
    CHECK(r.code == 0);
    CHECK(r.out.find("finding   L_{0,1}") != std::string::npos);
  }
  SUBCASE("seeded checks are reproducible") {
    const auto a = run({"check", "--config", scenario("colleagues.json"), "--seed", "7"});
    const auto b = run({"check", "--config", scenario("colleagues.json"), "--seed", "7"});
    CHECK(a.out == b.out);
  }
}

TEST_CASE("argument handling") {
  CHECK(run({"--help"}).code == 0);
  CHECK(run({}).code == 1);
  CHECK(run({"simulate"}).code == 1);
  CHECK(run({"simulate", "--config", "x.json", "--bogus"}).code == 1);
  const auto missing = run({"limit", "--config", "/nonexistent/recip.json"});
  CHECK(missing.code == 1);
  CHECK(missing.err.find("ConfigError") != std::string::npos);
  CHECK(run({"simulate", "--config", scenario("colleagues.json"), "--tol", "-1"}).code == 1);
}
