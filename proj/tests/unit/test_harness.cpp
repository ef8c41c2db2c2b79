#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "xcsp/generators.hpp"
#include "xcsp/harness.hpp"
#include "xcsp/io.hpp"

using namespace xcsp;
namespace fs = std::filesystem;

namespace {

const std::string kStub = XCSP_STUB_PATH;
const std::string kCli = XCSP_CLI_PATH;

RunResult cop(std::string solver, SolveStatus st, std::optional<Value> bound, bool verified = true,
              std::string instance = "i") {
  RunResult r;
  r.solver = std::move(solver);
  r.instance = std::move(instance);
  r.status = st;
  r.bound = bound;
  r.verified = verified && bound.has_value();
  r.sense = Sense::Minimize;
  return r;
}

RunResult csp(std::string solver, std::string instance, SolveStatus st, bool verified) {
  RunResult r;
  r.solver = std::move(solver);
  r.instance = std::move(instance);
  r.status = st;
  r.verified = verified;
  return r;
}

double points(const ScoreTable& t, const std::string& solver) {
  for (const auto& r : t.rows) {
    if (r.solver == solver) return r.points;
  }
  ADD_FAILURE() << "no row for " << solver;
  return -1;
}

const ScoreRow& row(const ScoreTable& t, const std::string& solver) {
  for (const auto& r : t.rows) {
    if (r.solver == solver) return r;
  }
  throw std::runtime_error("no row for " + solver);
}

fs::path scratch_dir() {
  const fs::path d = fs::temp_directory_path() / ("xcsp-harness-" + std::to_string(::getpid()));
  fs::create_directories(d);
  return d;
}

fs::path write_file(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
  return p;
}

Instance queens4() {
  ProblemParams p;
  p.problem = Problem::BlockedQueens;
  p.n = 4;
  return generate(p);
}

}  // namespace

// --- tracks and protocol -----------------------------------------------------

TEST(Tracks, Limits) {
  EXPECT_EQ(track_config(Track::CSP).cpu_limit, 2400);
  EXPECT_EQ(track_config(Track::CSP).wall_limit, 7200);
  EXPECT_EQ(track_config(Track::MiniCOP).cpu_limit, 2400);
  EXPECT_EQ(track_config(Track::FastCOP).cpu_limit, 240);
  EXPECT_EQ(track_config(Track::FastCOP).wall_limit, 720);
  EXPECT_EQ(track_config(Track::ParallelCOP).cpu_limit, 9600);
  EXPECT_EQ(track_config(Track::ParallelCOP).wall_limit, 7200);
  EXPECT_TRUE(track_config("fastcop")->optimization);
  EXPECT_FALSE(track_config("MiniCSP")->optimization);
  EXPECT_FALSE(track_config("Sprint"));
}

TEST(Protocol, LastWellFormedLinesWin) {
  const auto r = parse_solver_output(
      "c hello\n"
      "o 10\n"
      "o eight\n"
      "o 8\n"
      "v <instantiation><list> x y </list><values> 1 2 </values></instantiation>\n"
      "v <instantiation><list> x y </list><values> 1 </values></instantiation>\n"
      "s MAYBE\n"
      "s SATISFIABLE\r\n");
  EXPECT_EQ(r.status, SolveStatus::Sat);
  EXPECT_EQ(r.bound, 8);
  EXPECT_EQ(r.trajectory.size(), 2u);
  ASSERT_TRUE(r.solution);
  EXPECT_EQ(r.solution->values, (std::vector<Value>{1, 2}));
}

TEST(Protocol, NoStatusLineIsUnknown) {
  const auto r = parse_solver_output("c nothing\n");
  EXPECT_EQ(r.status, SolveStatus::Unknown);
  EXPECT_FALSE(r.bound);
}

TEST(Validate, GoodSolution) {
  auto r = parse_solver_output(
      "s SATISFIABLE\nv <instantiation><list> q[0] q[1] q[2] q[3] </list><values> 1 3 0 2 </values></instantiation>\n");
  validate_result(r, queens4());
  EXPECT_TRUE(r.verified);
  EXPECT_FALSE(r.disqualified);
}

TEST(Validate, Disqualifications) {
  const Instance inst = queens4();
  auto bad = parse_solver_output(
      "s SATISFIABLE\nv <instantiation><list> q[0] q[1] q[2] q[3] </list><values> 0 1 2 3 </values></instantiation>\n");
  validate_result(bad, inst);
  EXPECT_TRUE(bad.disqualified);
  EXPECT_FALSE(bad.verified);
  EXPECT_NE(bad.reason.find("violates"), std::string::npos);

  auto missing = parse_solver_output("s SATISFIABLE\n");
  validate_result(missing, inst);
  EXPECT_TRUE(missing.disqualified);

  auto partial = parse_solver_output(
      "s SATISFIABLE\nv <instantiation><list> q[0] q[1] </list><values> 1 3 </values></instantiation>\n");
  validate_result(partial, inst);
  EXPECT_TRUE(partial.disqualified);

  auto unknown = parse_solver_output("s UNKNOWN\n");
  validate_result(unknown, inst);
  EXPECT_FALSE(unknown.disqualified);
}

TEST(Validate, ObjectiveReplacesReportedBound) {
  ProblemParams p;
  p.problem = Problem::CoinsGrid;
  p.n = 2;
  p.c = 2;
  const Instance inst = generate(p);
  const std::string v =
      "v <instantiation><list> x[0][0] x[0][1] x[1][0] x[1][1] </list><values> 1 1 1 1 </values></instantiation>\n";
  auto ok = parse_solver_output("o 2\ns OPTIMUM FOUND\n" + v);
  validate_result(ok, inst);
  EXPECT_TRUE(ok.verified);
  EXPECT_EQ(ok.bound, 2);
  EXPECT_EQ(ok.sense, Sense::Minimize);
  auto lying = parse_solver_output("o 1\ns OPTIMUM FOUND\n" + v);
  validate_result(lying, inst);
  EXPECT_TRUE(lying.disqualified);
  auto silent = parse_solver_output("s SATISFIABLE\n" + v);
  validate_result(silent, inst);
  EXPECT_EQ(silent.bound, 2);
}

// --- scoring -------------------------------------------------------------------

TEST(ScoreCsp, SevenOfTen) {
  std::vector<RunResult> rs;
  for (int i = 0; i < 10; ++i) {
    const std::string inst = "i" + std::to_string(i);
    if (i < 5) {
      rs.push_back(csp("A", inst, SolveStatus::Sat, true));
    } else if (i < 7) {
      rs.push_back(csp("A", inst, SolveStatus::Unsat, false));
    } else {
      rs.push_back(csp("A", inst, SolveStatus::Unknown, false));
    }
    rs.push_back(csp("B", inst, SolveStatus::Unknown, false));
  }
  const auto t = score_csp(rs);
  EXPECT_EQ(points(t, "A"), 7);
  EXPECT_EQ(row(t, "A").solved, 7);
  EXPECT_EQ(points(t, "B"), 0);
}

TEST(ScoreCsp, DisqualifiedAndContradictedRunsScoreZero) {
  RunResult dq = csp("A", "i", SolveStatus::Sat, false);
  dq.disqualified = true;
  // B claims UNSAT on an instance C solved
  const auto t = score_csp({dq, csp("B", "i", SolveStatus::Unsat, false), csp("C", "i", SolveStatus::Sat, true)});
  EXPECT_EQ(points(t, "A"), 0);
  EXPECT_EQ(points(t, "B"), 0);
  EXPECT_EQ(points(t, "C"), 1);
}

TEST(ScoreCop, BulletRules) {
  auto a = score_cop_instance({cop("A", SolveStatus::Optimum, 21), cop("B", SolveStatus::Sat, 21),
                               cop("C", SolveStatus::Sat, 23)},
                              Sense::Minimize);
  EXPECT_EQ(a["A"], 1);
  EXPECT_EQ(a["B"], 0.5);
  EXPECT_EQ(a["C"], 0);
  auto b = score_cop_instance({cop("A", SolveStatus::Sat, 9), cop("B", SolveStatus::Sat, 9)}, Sense::Minimize);
  EXPECT_EQ(b["A"], 1);
  EXPECT_EQ(b["B"], 1);
  auto c = score_cop_instance({cop("A", SolveStatus::Unsat, std::nullopt), cop("B", SolveStatus::Unknown, std::nullopt)},
                              Sense::Minimize);
  EXPECT_EQ(c["A"], 1);
  EXPECT_EQ(c["B"], 0);
}

TEST(ScoreCop, SenseAndFalseOptimum) {
  // maximize: 30 beats 25; an OPTIMUM claim at 25 is worth nothing
  auto m = score_cop_instance({cop("A", SolveStatus::Sat, 30), cop("B", SolveStatus::Optimum, 25)}, Sense::Maximize);
  EXPECT_EQ(m["A"], 1);
  EXPECT_EQ(m["B"], 0);
  // unverified bound never scores, even when it is the best number
  auto u = score_cop_instance({cop("A", SolveStatus::Sat, 5, false), cop("B", SolveStatus::Sat, 7)}, Sense::Minimize);
  EXPECT_EQ(u["A"], 0);
  EXPECT_EQ(u["B"], 1);
  RunResult dq = cop("A", SolveStatus::Optimum, 1);
  dq.disqualified = true;
  auto d = score_cop_instance({dq, cop("B", SolveStatus::Sat, 4)}, Sense::Minimize);
  EXPECT_EQ(d["A"], 0);
  EXPECT_EQ(d["B"], 1);
}

TEST(ScoreCop, AwardsStayInRangeAndBestScores) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<RunResult> runs;
    const int n = 1 + static_cast<int>(rng() % 4);
    for (int s = 0; s < n; ++s) {
      const int kind = static_cast<int>(rng() % 4);
      const Value b = 5 + static_cast<Value>(rng() % 3);
      if (kind == 0) runs.push_back(cop("S" + std::to_string(s), SolveStatus::Unknown, std::nullopt));
      if (kind == 1) runs.push_back(cop("S" + std::to_string(s), SolveStatus::Sat, b));
      if (kind == 2) runs.push_back(cop("S" + std::to_string(s), SolveStatus::Optimum, b));
      if (kind == 3) runs.push_back(cop("S" + std::to_string(s), SolveStatus::Sat, b, false));
    }
    const Sense sense = rng() % 2 ? Sense::Minimize : Sense::Maximize;
    const auto award = score_cop_instance(runs, sense);
    std::optional<Value> best;
    for (const auto& r : runs) {
      if (!r.verified) continue;
      if (!best || (sense == Sense::Minimize ? *r.bound < *best : *r.bound > *best)) best = r.bound;
    }
    double top = 0;
    for (const auto& r : runs) {
      const double a = award.at(r.solver);
      ASSERT_TRUE(a == 0 || a == 0.5 || a == 1);
      if (!r.verified) ASSERT_EQ(a, 0);
      if (best && r.verified && r.bound == best) top = std::max(top, a);
    }
    if (best) ASSERT_GE(top, 0.5);
  }
}

TEST(ScoreCop, TableSumsPerInstance) {
  std::vector<RunResult> rs{cop("A", SolveStatus::Optimum, 21, true, "i1"), cop("B", SolveStatus::Sat, 21, true, "i1"),
                            cop("A", SolveStatus::Sat, 9, true, "i2"), cop("B", SolveStatus::Sat, 9, true, "i2")};
  const auto t = score_cop(rs);
  EXPECT_EQ(points(t, "A"), 2);
  EXPECT_EQ(row(t, "A").best, 2);
  EXPECT_EQ(points(t, "B"), 1.5);
  EXPECT_EQ(row(t, "B").solved, 2);
  EXPECT_EQ(row(t, "B").best, 1);
}

TEST(Rank, TiesShareTheSmallerRank) {
  ScoreTable t;
  t.rows = {{"C", 10}, {"A", 30}, {"B", 30}};
  rank(t, {});
  EXPECT_EQ(row(t, "A").rank, 1);
  EXPECT_EQ(row(t, "B").rank, 1);
  EXPECT_EQ(row(t, "C").rank, 3);
  EXPECT_EQ(t.rows[0].solver, "A");
  EXPECT_EQ(t.rows[2].solver, "C");
}

TEST(Rank, OffCompetitionAndTeams) {
  ScoreTable t;
  t.rows = {{"ACE", 50}, {"glue", 20}, {"sCOP", 25}, {"other", 10}};
  rank(t, {"ACE"}, {{"glue", "fun"}, {"sCOP", "fun"}});
  EXPECT_EQ(row(t, "ACE").rank, 0);
  EXPECT_TRUE(row(t, "ACE").off_competition);
  EXPECT_EQ(row(t, "sCOP").rank, 1);
  EXPECT_TRUE(row(t, "glue").off_competition);
  EXPECT_EQ(row(t, "glue").rank, 0);
  EXPECT_EQ(row(t, "other").rank, 2);
  // unranked rows stay in the table, after the ranked ones
  EXPECT_EQ(t.rows.size(), 4u);
  EXPECT_EQ(t.rows[0].solver, "sCOP");
  EXPECT_EQ(t.rows[2].rank, 0);
  EXPECT_EQ(t.rows[3].rank, 0);
}

TEST(Rank, Deterministic) {
  std::vector<RunResult> rs{cop("B", SolveStatus::Sat, 3), cop("A", SolveStatus::Sat, 3), cop("C", SolveStatus::Sat, 4)};
  auto t1 = score_cop(rs);
  auto t2 = score_cop(rs);
  rank(t1, {});
  rank(t2, {});
  EXPECT_EQ(to_tsv(t1), to_tsv(t2));
  EXPECT_EQ(to_tsv(t1),
            "rank\tsolver\tpoints\tsolved\tbest\toff_competition\n"
            "1\tA\t1\t1\t1\tno\n1\tB\t1\t1\t1\tno\n3\tC\t0\t0\t0\tno\n");
  EXPECT_NE(to_html(t1).find("<td>A</td>"), std::string::npos);
}

// --- persistence -----------------------------------------------------------------

TEST(Jsonl, Roundtrip) {
  RunResult r = cop("solver \"x\"", SolveStatus::Optimum, -4);
  r.trajectory = {{0.5, 3}, {1.25, -4}};
  r.solution = Instantiation{{"x", "y[1]"}, {-4, 0}};
  r.cpu_seconds = 1.5;
  r.wall_seconds = 2.25;
  r.reason = "fine";
  r.killed = true;
  r.exit_code = 3;
  r.sense = Sense::Maximize;
  std::stringstream ss;
  write_results(ss, {r, cop("B", SolveStatus::Unknown, std::nullopt)});
  ss << "\n";
  const auto back = read_results(ss);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(to_json_line(back[0]), to_json_line(r));
  EXPECT_EQ(back[0].solution, r.solution);
  EXPECT_EQ(back[0].trajectory.size(), 2u);
  EXPECT_EQ(back[1].bound, std::nullopt);
}

TEST(Jsonl, MalformedLinesNameTheLine) {
  std::stringstream ss(to_json_line(cop("A", SolveStatus::Sat, 1)) + "\n{\"solver\": 3}\n");
  try {
    read_results(ss);
    FAIL() << "expected HarnessError";
  } catch (const HarnessError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
  EXPECT_THROW(from_json_line("[1,2]"), HarnessError);
  EXPECT_THROW(from_json_line(R"({"solver":"a","instance":"i","status":"DONE"})"), HarnessError);
}

// --- process control -------------------------------------------------------------

TEST(RunSolver, BoundsThenCpuLimit) {
  RunLimits lim;
  lim.cpu_limit = 1;
  lim.wall_limit = 30;
  lim.grace = 0.5;
  const auto r = run_solver(kStub + " --print 'o 10|o 8|o 7' # {instance}", "none.xml", lim, "stub", "none");
  EXPECT_TRUE(r.killed);
  EXPECT_EQ(r.status, SolveStatus::Unknown);
  EXPECT_EQ(r.bound, 7);
  EXPECT_EQ(r.trajectory.size(), 3u);
  EXPECT_GE(r.cpu_seconds, 1.0);
  EXPECT_LE(r.cpu_seconds, 1.0 + lim.grace + 0.5);
  EXPECT_NE(r.reason.find("cpu"), std::string::npos);
}

TEST(RunSolver, WallLimitAndStubbornChild) {
  RunLimits lim;
  lim.wall_limit = 0.5;
  lim.grace = 0.5;
  const auto r = run_solver("exec " + kStub + " --sleep --ignore-term", "none.xml", lim);
  EXPECT_TRUE(r.killed);
  EXPECT_NE(r.reason.find("wall"), std::string::npos);
  EXPECT_GE(r.wall_seconds, 1.0);  // SIGTERM ignored, SIGKILL after the grace
  EXPECT_LT(r.wall_seconds, 2.0);
  EXPECT_LT(r.cpu_seconds, 0.5);
}

TEST(RunSolver, SatisfiableWithSolution) {
  const auto dir = scratch_dir();
  const auto inst = write_file(dir / "queens 4.xml", write_instance(queens4()));
  RunLimits lim;
  lim.wall_limit = 30;
  auto r = run_solver(kCli + " solve {instance}", inst.string(), lim, "xcsp");
  EXPECT_FALSE(r.killed);
  EXPECT_EQ(r.status, SolveStatus::Sat);
  EXPECT_EQ(r.exit_code, 10);
  ASSERT_TRUE(r.solution);
  validate_result(r, queens4());
  EXPECT_TRUE(r.verified);
  EXPECT_EQ(r.instance, inst.string());
}

TEST(RunSolver, TimeoutPlaceholderAndSpawnFailure) {
  RunLimits lim;
  lim.cpu_limit = 6.5;
  const auto r = run_solver("echo 'o {timeout}'; echo 's UNKNOWN'", "x", lim);
  EXPECT_EQ(r.bound, 7);
  EXPECT_EQ(r.exit_code, 0);
  const auto missing = run_solver("/nonexistent/solver {instance}", "x", lim);
  EXPECT_EQ(missing.status, SolveStatus::Unknown);
  EXPECT_EQ(missing.exit_code, 127);
  EXPECT_NE(missing.reason.find("could not be started"), std::string::npos);
}

// --- manifests and tracks --------------------------------------------------------

TEST(Manifest, ParseAndErrors) {
  const auto m = parse_manifest(R"({"track": "FastCOP",
      "solvers": [{"id": "a", "command": "a {instance}", "team": "t", "offCompetition": true}],
      "instances": ["x.xml", "/abs/y.xml"], "workers": 2, "cpuLimit": 3})",
                                "/base");
  EXPECT_EQ(m.track, "FastCOP");
  EXPECT_EQ(m.instances, (std::vector<std::string>{"/base/x.xml", "/abs/y.xml"}));
  EXPECT_TRUE(m.solvers.at(0).off_competition);
  EXPECT_EQ(m.solvers.at(0).team, "t");
  EXPECT_EQ(m.workers, 2);
  EXPECT_EQ(m.cpu_limit, 3);
  EXPECT_FALSE(m.wall_limit);
  EXPECT_THROW(parse_manifest(R"({"track": "Sprint", "solvers": [], "instances": []})"), HarnessError);
  EXPECT_THROW(parse_manifest(R"({"track": "CSP", "instances": []})"), HarnessError);
  EXPECT_THROW(parse_manifest(R"({"track": "CSP", "solvers": [], "instances": [], "workers": 0})"), HarnessError);
  EXPECT_THROW(parse_manifest("not json"), HarnessError);
}

TEST(Manifest, RunTrackScoresValidatedResults) {
  const auto dir = scratch_dir();
  write_file(dir / "queens.xml", write_instance(queens4()));
  Manifest m;
  m.track = "CSP";
  m.instances = {(dir / "queens.xml").string()};
  m.solvers = {{"xcsp", kCli + " solve {instance}", "", false},
               {"liar", "echo 's SATISFIABLE'", "", false},
               {"idle", kStub + " --sleep", "", true}};
  m.cpu_limit = 5;
  m.wall_limit = 1;
  m.workers = 2;
  const auto run = run_track(m);
  ASSERT_EQ(run.results.size(), 3u);
  EXPECT_TRUE(run.results[0].verified);
  EXPECT_TRUE(run.results[1].disqualified);
  EXPECT_TRUE(run.results[2].killed);
  EXPECT_EQ(run.table.track, "CSP");
  EXPECT_EQ(points(run.table, "xcsp"), 1);
  EXPECT_EQ(row(run.table, "xcsp").rank, 1);
  EXPECT_EQ(points(run.table, "liar"), 0);
  EXPECT_EQ(row(run.table, "liar").rank, 2);
  EXPECT_TRUE(row(run.table, "idle").off_competition);
  EXPECT_EQ(row(run.table, "idle").rank, 0);
}
