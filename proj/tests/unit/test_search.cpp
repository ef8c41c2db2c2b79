#include <gtest/gtest.h>

#include <atomic>

#include "checks.hpp"
#include "xcsp/generators.hpp"
#include "xcsp/search.hpp"
#include "xcsp/verifier.hpp"

using namespace xcsp;
using Vals = std::vector<Value>;

namespace {

Instance gen(Problem pr, int n, std::string variant = {}) {
  ProblemParams p;
  p.problem = pr;
  p.n = n;
  p.variant = std::move(variant);
  return generate(p);
}

const std::vector<VarHeuristic> kVarHeuristics{VarHeuristic::Dom, VarHeuristic::DomWdeg, VarHeuristic::Lexical};
const std::vector<ValHeuristic> kValHeuristics{ValHeuristic::Min, ValHeuristic::Max, ValHeuristic::Random};

}  // namespace

TEST(SolveCsp, QueensEnumerate) {
  SearchConfig cfg;
  cfg.mode = SearchMode::Enumerate;
  const auto r = solve_csp(gen(Problem::BlockedQueens, 4), cfg);
  EXPECT_EQ(r.status, SolveStatus::Sat);
  EXPECT_EQ(r.solutions, 2u);
  EXPECT_EQ(r.rejected_leaves, 0u);
}

TEST(SolveCsp, NumberPartitioningFourIsUnsat) {
  const auto r = solve_csp(gen(Problem::NumberPartitioning, 4));
  EXPECT_EQ(r.status, SolveStatus::Unsat);
  EXPECT_FALSE(r.solution);
}

TEST(SolveCsp, SuperpermutationPalindrome) {
  const Instance inst = gen(Problem::Superpermutation, 3);
  const auto r = solve_csp(inst);
  ASSERT_EQ(r.status, SolveStatus::Sat);
  ASSERT_TRUE(r.solution);
  EXPECT_TRUE(check_instantiation(inst, *r.solution).empty());
  Vals word;
  for (std::size_t i = 0; i < r.solution->ids.size(); ++i) {
    if (r.solution->ids[i].rfind("x[", 0) == 0) word.push_back(r.solution->values[i]);
  }
  ASSERT_EQ(word.size(), 9u);
  EXPECT_EQ((Vals{word[0], word[1], word[2]}), (Vals{1, 2, 3}));
  EXPECT_EQ(word, Vals(word.rbegin(), word.rend()));
}

TEST(SolveCsp, EnumerateLimitAndCollect) {
  SearchConfig cfg;
  cfg.mode = SearchMode::Enumerate;
  cfg.enumerate_limit = 5;
  cfg.collect_solutions = true;
  const Instance inst = gen(Problem::Costas, 4);
  const auto r = solve_csp(inst, cfg);
  EXPECT_EQ(r.solutions, 5u);
  EXPECT_EQ(r.all_solutions.size(), 5u);
  EXPECT_EQ(r.status, SolveStatus::Sat);
  cfg.enumerate_limit = UINT64_MAX;
  EXPECT_EQ(solve_csp(inst, cfg).solutions, 12u);
}

TEST(SolveCsp, NodeLimitGivesUnknown) {
  SearchConfig cfg;
  cfg.node_limit = 1;
  const auto r = solve_csp(gen(Problem::Costas, 8), cfg);
  EXPECT_EQ(r.status, SolveStatus::Unknown);
}

TEST(SolveCsp, StopFlag) {
  std::atomic<bool> stop{true};
  SearchConfig cfg;
  cfg.stop = &stop;
  EXPECT_EQ(solve_csp(gen(Problem::Costas, 10), cfg).status, SolveStatus::Unknown);
}

TEST(SolveCsp, RestartsStayComplete) {
  SearchConfig cfg;
  cfg.restarts = true;
  cfg.restart_base = 1;
  cfg.restart_factor = 1.1;
  // pigeonhole through binary disequalities: no pruning before deep levels
  Instance inst;
  for (int i = 0; i < 6; ++i) inst.add_variable("x" + std::to_string(i), Domain::range(0, 4));
  for (VarId i = 0; i < 6; ++i) {
    for (VarId j = i + 1; j < 6; ++j) inst.post(Intension{ex::ne(ex::var(i), ex::var(j))});
  }
  const auto r = solve_csp(inst, cfg);
  EXPECT_EQ(r.status, SolveStatus::Unsat);
  EXPECT_GT(r.restarts, 0u);
}

TEST(SolveCop, ClockTripletsOptimum) {
  ProblemParams p;
  p.problem = Problem::ClockTriplets;
  p.r = 3;
  p.n = 12;
  const Instance inst = generate(p);
  const auto r = solve_cop(inst);
  ASSERT_EQ(r.status, SolveStatus::Optimum);
  EXPECT_EQ(r.objective, 21);
  ASSERT_TRUE(r.solution);
  EXPECT_TRUE(check_instantiation(inst, *r.solution).empty());
  EXPECT_EQ(objective_value(inst, *r.solution), 21);
  ASSERT_FALSE(r.trajectory.empty());
  EXPECT_EQ(r.trajectory.back().value, 21);
  for (std::size_t i = 1; i < r.trajectory.size(); ++i) {
    EXPECT_LT(r.trajectory[i].value, r.trajectory[i - 1].value);
    EXPECT_GE(r.trajectory[i].elapsed, r.trajectory[i - 1].elapsed);
  }
}

TEST(SolveCop, TriangularTwo) {
  const auto r = solve_cop(gen(Problem::Triangular, 2));
  EXPECT_EQ(r.status, SolveStatus::Optimum);
  EXPECT_EQ(r.objective, 2);
  // maximization trajectory improves upwards
  for (std::size_t i = 1; i < r.trajectory.size(); ++i) EXPECT_GT(r.trajectory[i].value, r.trajectory[i - 1].value);
}

TEST(SolveCop, WarOrPeaceThree) {
  for (const char* variant : {"", "or"}) {
    const auto r = solve_cop(gen(Problem::WarOrPeace, 3, variant));
    EXPECT_EQ(r.status, SolveStatus::Optimum) << variant;
    EXPECT_EQ(r.objective, 1) << variant;
  }
}

TEST(SolveCop, NoSolutionMeansEmptyTrajectory) {
  Instance inst;
  inst.add_variable("x", Domain::range(0, 1));
  inst.add_variable("y", Domain::range(0, 1));
  inst.post(Intension{ex::eq(ex::var(0), ex::var(1))});
  inst.post(Intension{ex::ne(ex::var(0), ex::var(1))});
  Objective o;
  o.terms = {ex::var(0)};
  inst.objective = o;
  const auto r = solve(inst);
  EXPECT_EQ(r.status, SolveStatus::Unsat);
  EXPECT_TRUE(r.trajectory.empty());
}

TEST(SolveCop, ExtremumObjectives) {
  // maximize min(x, y) with x + y <= 7
  Instance inst;
  inst.add_variable("x", Domain::range(0, 5));
  inst.add_variable("y", Domain::range(0, 5));
  inst.post(Sum{{ex::var(0), ex::var(1)}, {}, Condition::cmp(CmpOp::Le, 7)});
  Objective o;
  o.sense = Sense::Maximize;
  o.kind = ObjectiveKind::Minimum;
  o.terms = {ex::var(0), ex::var(1)};
  inst.objective = o;
  const auto r = solve(inst);
  EXPECT_EQ(r.status, SolveStatus::Optimum);
  EXPECT_EQ(r.objective, 3);
  // solutions name only instance variables
  ASSERT_TRUE(r.solution);
  EXPECT_EQ(r.solution->ids, (std::vector<std::string>{"x", "y"}));
}

TEST(SolveCop, HeuristicsAgreeOnOptimum) {
  const Instance inst = gen(Problem::Triangular, 3);
  std::optional<Value> first;
  for (auto vh : kVarHeuristics) {
    for (auto wh : kValHeuristics) {
      SearchConfig cfg;
      cfg.var = vh;
      cfg.val = wh;
      cfg.seed = 3;
      const auto r = solve_cop(inst, cfg);
      ASSERT_EQ(r.status, SolveStatus::Optimum);
      if (!first) first = r.objective;
      EXPECT_EQ(r.objective, first);
    }
  }
}

TEST(SelectDecision, SmallestDomain) {
  std::vector<Domain> d{Domain({1, 2, 3}), Domain({1}), Domain({1, 2})};
  DomainStore s{std::span<const Domain>(d)};
  SearchConfig cfg;
  cfg.var = VarHeuristic::Dom;
  const auto dec = select_decision(s, 3, cfg);
  ASSERT_TRUE(dec);
  EXPECT_EQ(dec->var, 2);
  EXPECT_EQ(dec->value, 1);
}

TEST(SelectDecision, TieBreaksByDeclaration) {
  std::vector<Domain> d{Domain::range(0, 2), Domain::range(0, 2), Domain::range(0, 2)};
  DomainStore s{std::span<const Domain>(d)};
  SearchConfig cfg;
  cfg.var = VarHeuristic::Dom;
  EXPECT_EQ(select_decision(s, 3, cfg)->var, 0);
}

TEST(SelectDecision, ValueOrders) {
  std::vector<Domain> d{Domain({4, 7, 9})};
  DomainStore s{std::span<const Domain>(d)};
  SearchConfig cfg;
  EXPECT_EQ(select_decision(s, 1, cfg)->value, 4);
  cfg.val = ValHeuristic::Max;
  EXPECT_EQ(select_decision(s, 1, cfg)->value, 9);
  cfg.val = ValHeuristic::Random;
  std::mt19937_64 rng(1);
  for (int i = 0; i < 20; ++i) {
    const Value v = select_decision(s, 1, cfg, {}, &rng)->value;
    EXPECT_TRUE(v == 4 || v == 7 || v == 9);
  }
}

TEST(SelectDecision, WeightedDegree) {
  // equal sizes; the heavier variable wins
  std::vector<Domain> d{Domain::range(0, 3), Domain::range(0, 3)};
  DomainStore s{std::span<const Domain>(d)};
  SearchConfig cfg;
  const std::vector<double> w{1.0, 4.0};
  EXPECT_EQ(select_decision(s, 2, cfg, w)->var, 1);
  std::vector<Domain> e{Domain::range(0, 1), Domain::range(0, 3)};
  DomainStore t{std::span<const Domain>(e)};
  EXPECT_EQ(select_decision(t, 2, cfg, w)->var, 1);  // 2/1 vs 4/4
}

TEST(SelectDecision, AllFixed) {
  std::vector<Domain> d{Domain({1}), Domain({2})};
  DomainStore s{std::span<const Domain>(d)};
  EXPECT_FALSE(select_decision(s, 2, SearchConfig{}));
}

TEST(SearchConfig, Validation) {
  SearchConfig cfg;
  cfg.node_limit = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.restarts = true;
  cfg.restart_factor = 1.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.time_limit = -1;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = {};
  EXPECT_NO_THROW(cfg.validate());
}

TEST(SearchProperty, AgreesWithBruteForce) {
  const auto st = xcsp::testing::check_search(11, 400);
  EXPECT_EQ(st.instances, 400);
  EXPECT_EQ(st.csp_mismatches, 0) << (st.examples.empty() ? "" : st.examples[0]);
  EXPECT_EQ(st.cop_mismatches, 0) << (st.examples.empty() ? "" : st.examples[0]);
  EXPECT_EQ(st.rejected_leaves, 0);
  EXPECT_GT(st.cop_checked, 100);
  // both outcomes are exercised
  EXPECT_GT(st.satisfiable, 40);
  EXPECT_LT(st.satisfiable, 360);
}

TEST(SearchProperty, LargerGrid) {
  const auto st = xcsp::testing::check_search(12, 60, 9, 5);
  EXPECT_EQ(st.csp_mismatches + st.cop_mismatches, 0) << (st.examples.empty() ? "" : st.examples[0]);
}
