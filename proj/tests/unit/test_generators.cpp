#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "checks.hpp"
#include "xcsp/generators.hpp"
#include "xcsp/search.hpp"
#include "xcsp/verifier.hpp"

using namespace xcsp;
using Vals = std::vector<Value>;

namespace {

ProblemParams params(Problem pr, int n, std::string variant = {}) {
  ProblemParams p;
  p.problem = pr;
  p.n = n;
  p.variant = std::move(variant);
  return p;
}

Instance gen(Problem pr, int n, std::string variant = {}) { return generate(params(pr, n, std::move(variant))); }

std::map<std::string, int> kinds(const Instance& inst) {
  std::map<std::string, int> out;
  for (const auto& c : inst.constraints) ++out[std::string(kind_name(c))];
  return out;
}

// Runs the automaton on a word; nothing when a transition is missing.
std::optional<std::string> run(const Automaton& a, const Vals& word) {
  std::string q = a.start;
  for (Value v : word) {
    const auto t = std::find_if(a.transitions.begin(), a.transitions.end(),
                                [&](const Transition& t) { return t.from == q && t.value == v; });
    if (t == a.transitions.end()) return std::nullopt;
    q = t->to;
  }
  return q;
}

bool accepts(const Automaton& a, const Vals& word) {
  const auto q = run(a, word);
  return q && std::find(a.finals.begin(), a.finals.end(), *q) != a.finals.end();
}

int parity(std::vector<int> perm) {
  int sign = 1;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    for (std::size_t j = i + 1; j < perm.size(); ++j) {
      if (perm[i] > perm[j]) sign = -sign;
    }
  }
  return sign;
}

Instance without_tag(Instance inst, const std::string& tag) {
  std::erase_if(inst.constraints, [&](const Constraint& c) { return c.tag == tag; });
  return inst;
}

}  // namespace

TEST(Names, KebabAndVariants) {
  EXPECT_EQ(problem_name(Problem::ClockTriplets), "clock-triplets");
  EXPECT_EQ(problem_from_name("clock_triplets"), Problem::ClockTriplets);
  EXPECT_EQ(problem_from_name("ClockTriplets"), Problem::ClockTriplets);
  EXPECT_EQ(problem_from_name("WAR-OR-PEACE"), Problem::WarOrPeace);
  EXPECT_FALSE(problem_from_name("hidato"));
  EXPECT_EQ(all_problems().size(), static_cast<std::size_t>(kNumProblems));
  for (Problem p : all_problems()) EXPECT_EQ(problem_from_name(problem_name(p)), p);
}

TEST(Generate, ValidAcrossSamples) {
  std::set<Problem> seen;
  for (const auto& p : sample_params()) {
    const Instance inst = generate(p);
    SCOPED_TRACE(inst.name);
    EXPECT_TRUE(validate_instance(inst).empty());
    EXPECT_TRUE(validate_instance(decompose_meta(inst)).empty());
    seen.insert(p.problem);
  }
  EXPECT_EQ(seen.size(), static_cast<std::size_t>(kNumProblems));
}

TEST(Generate, ValidOverParameterGrid) {
  for (Problem pr : all_problems()) {
    for (int n : {3, 4, 5, 6}) {
      ProblemParams p = params(pr, n);
      if (pr == Problem::ClockTriplets) p.r = 3;
      if (pr == Problem::CoinsGrid) p.c = 2;
      if (pr == Problem::Molnar) {
        p.k = std::min(n, 5) - 1;
        p.d = 3;
      }
      if (pr == Problem::Warehouse) p.warehouse_random = WarehouseRandom{};
      try {
        const Instance inst = generate(p);
        EXPECT_TRUE(validate_instance(inst).empty()) << inst.name;
      } catch (const ParamError&) {
        // odd n for the even-only families, small n for the others
        EXPECT_TRUE(pr == Problem::Hadamard || pr == Problem::NumberPartitioning || pr == Problem::SportsScheduling ||
                    pr == Problem::KnightTour || pr == Problem::DiamondFree || pr == Problem::Superpermutation)
            << problem_name(pr) << " " << n;
      }
    }
  }
}

TEST(Generate, Deterministic) {
  for (const auto& p : sample_params()) EXPECT_TRUE(generate(p) == generate(p));
}

TEST(Generate, CostasStructure) {
  const Instance inst = gen(Problem::Costas, 4);
  EXPECT_EQ(inst.num_vars(), 4u);
  ASSERT_EQ(inst.constraints.size(), 3u);
  const auto& marks = std::get<AllDifferent>(inst.constraints[0].kind);
  EXPECT_EQ(marks.list, (std::vector<Expr>{ex::var(0), ex::var(1), ex::var(2), ex::var(3)}));
  EXPECT_EQ(std::get<AllDifferent>(inst.constraints[1].kind).list.size(), 3u);
  EXPECT_EQ(std::get<AllDifferent>(inst.constraints[2].kind).list.size(), 2u);
  EXPECT_EQ(std::get<AllDifferent>(inst.constraints[2].kind).list[0], ex::sub(ex::var(0), ex::var(2)));
}

TEST(Generate, ClockTripletsStructure) {
  ProblemParams p;
  p.problem = Problem::ClockTriplets;
  p.r = 3;
  p.n = 12;
  const Instance inst = generate(p);
  ASSERT_EQ(inst.num_vars(), 13u);
  for (int i = 0; i < 12; ++i) EXPECT_EQ(inst.variables[i].dom, Domain::range(1, 12));
  EXPECT_EQ(inst.variables[12].id, "z");
  const auto k = kinds(inst);
  EXPECT_EQ(k.at("allDifferent"), 1);
  EXPECT_EQ(k.at("sum"), 12);
  // the last window wraps around
  const auto& last = std::get<Sum>(inst.constraints[12].kind);
  EXPECT_EQ(last.terms, (std::vector<Expr>{ex::var(11), ex::var(0), ex::var(1)}));
  EXPECT_EQ(inst.constraints[13].tag, "symmetry-breaking");
  EXPECT_EQ(inst.constraints[14].tag, "symmetry-breaking");
  ASSERT_TRUE(inst.objective);
  EXPECT_EQ(inst.objective->sense, Sense::Minimize);
  EXPECT_EQ(inst.objective->terms, std::vector<Expr>{ex::var(12)});
}

TEST(Generate, WarehouseFromJsonData) {
  std::ifstream in(std::filesystem::path(XCSP_TEST_DATA) / "warehouse-5x10.json");
  std::stringstream ss;
  ss << in.rdbuf();
  const Instance inst = generate(params_from_json(Problem::Warehouse, ss.str()));
  ASSERT_EQ(inst.num_vars(), 25u);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(inst.variables[i].dom, Domain::range(0, 4));
  for (int j = 10; j < 15; ++j) EXPECT_EQ(inst.variables[j].dom, Domain::range(0, 1));
  EXPECT_EQ(inst.variables[15].dom, Domain({11, 20, 24, 25, 30}));
  EXPECT_EQ(inst.variables[19].dom, Domain({4, 46, 59, 83, 96}));
  const auto k = kinds(inst);
  EXPECT_EQ(k.at("count"), 5);
  EXPECT_EQ(k.at("element"), 20);
  ASSERT_TRUE(inst.objective);
  Vals coeffs(10, 1);
  coeffs.insert(coeffs.end(), 5, 30);
  EXPECT_EQ(inst.objective->coeffs, coeffs);
  EXPECT_EQ(inst.objective->terms.size(), 15u);
  EXPECT_EQ(inst.objective->terms[0], ex::var(15));
  EXPECT_EQ(inst.objective->terms[10], ex::var(10));
}

TEST(Generate, WarehouseRandomIsSeeded) {
  ProblemParams p;
  p.problem = Problem::Warehouse;
  p.warehouse_random = WarehouseRandom{};
  p.warehouse_random->seed = 4;
  const Instance a = generate(p);
  EXPECT_TRUE(a == generate(p));
  p.warehouse_random->seed = 5;
  EXPECT_FALSE(a == generate(p));
}

TEST(Generate, ParameterErrors) {
  EXPECT_THROW(generate(params(Problem::Superpermutation, 9)), ParamError);
  EXPECT_THROW(generate(params(Problem::Superpermutation, 1)), ParamError);
  EXPECT_THROW(generate(params(Problem::Hadamard, 4)), ParamError);
  EXPECT_THROW(generate(params(Problem::NumberPartitioning, 7)), ParamError);
  EXPECT_THROW(generate(params(Problem::Costas, 5, "table")), ParamError);
  EXPECT_THROW(generate(params(Problem::Warehouse, 3)), ParamError);
  ProblemParams r = params(Problem::Rostering, 4);
  r.preset = {{0, 0, 7}};
  EXPECT_THROW(generate(r), ParamError);
  ProblemParams q = params(Problem::BlockedQueens, 4);
  q.blocks = {{4, 0}};
  EXPECT_THROW(generate(q), ParamError);
  try {
    generate(params(Problem::Superpermutation, 9));
  } catch (const ParamError& e) {
    EXPECT_NE(std::string(e.what()).find("2 <= n <= 5"), std::string::npos) << e.what();
  }
}

TEST(Generate, ParamsFromJson) {
  EXPECT_EQ(params_from_json(Problem::Costas, "7").n, 7);
  const auto clock = params_from_json(Problem::ClockTriplets, "[3, 12]");
  EXPECT_EQ(clock.r, 3);
  EXPECT_EQ(clock.n, 12);
  const auto coins = params_from_json(Problem::CoinsGrid, "{\"n\": 5, \"c\": 2}");
  EXPECT_EQ(coins.n, 5);
  EXPECT_EQ(coins.c, 2);
  const auto mol = params_from_json(Problem::Molnar, "[4, 5]");
  EXPECT_EQ(mol.k, 4);
  EXPECT_EQ(mol.d, 5);
  const auto bq = params_from_json(Problem::BlockedQueens, "[8, [[0, 1], [2, 3]]]");
  EXPECT_EQ(bq.blocks, (std::vector<std::pair<int, int>>{{0, 1}, {2, 3}}));
  EXPECT_EQ(params_from_json(Problem::Quasigroup, "{\"n\": 6, \"variant\": \"base-v5\"}").variant, "base-v5");
  EXPECT_THROW(params_from_json(Problem::Costas, "{\"m\": 3}"), ParamError);
  EXPECT_THROW(params_from_json(Problem::Costas, "[1,"), ParamError);
  EXPECT_THROW(params_from_json(Problem::Costas, "\"seven\""), ParamError);
}

TEST(Aztec, Cells) {
  const auto one = aztec_cells(1);
  EXPECT_EQ(one.valid.size(), 4u);
  EXPECT_EQ(one.inner.size(), 0u);
  EXPECT_EQ(one.border.size(), 4u);
  const auto two = aztec_cells(2);
  EXPECT_EQ(two.valid.size(), 12u);
  EXPECT_EQ(two.inner.size(), 4u);
  EXPECT_EQ(two.border.size(), 8u);
  EXPECT_FALSE(aztec_valid(2, 0, 0));
  EXPECT_TRUE(aztec_valid(2, 0, 1));
  EXPECT_TRUE(aztec_valid(2, 0, 2));
  EXPECT_FALSE(aztec_valid(2, 0, 3));
  for (int n = 1; n <= 6; ++n) EXPECT_EQ(aztec_cells(n).valid.size(), static_cast<std::size_t>(2 * n * (n + 1)));
}

TEST(Rostering, Automaton) {
  const Automaton a = rostering_automaton(10);
  std::set<std::string> states{a.start};
  for (const auto& t : a.transitions) {
    states.insert(t.from);
    states.insert(t.to);
  }
  EXPECT_EQ(states.size(), 29u);
  EXPECT_TRUE(accepts(a, {0, 5}));
  EXPECT_FALSE(accepts(a, {3, 0, 2}));
  EXPECT_TRUE(accepts(a, {3, 0, 5}));
  EXPECT_TRUE(accepts(a, {3, 4, 5, 0, 7, 6}));
  EXPECT_FALSE(accepts(a, {3, 5}));  // consecutive tasks must be adjacent
  // deterministic: at most one transition per (state, symbol)
  std::set<std::pair<std::string, Value>> keys;
  for (const auto& t : a.transitions) EXPECT_TRUE(keys.insert({t.from, t.value}).second);
}

TEST(Molnar, DeterminantTerms) {
  const auto two = molnar_determinant_terms(2);
  ASSERT_EQ(two.size(), 2u);
  EXPECT_EQ(two[0].sign, 1);
  EXPECT_EQ(two[0].cells, (std::vector<std::pair<int, int>>{{0, 0}, {1, 1}}));
  EXPECT_EQ(two[1].sign, -1);
  EXPECT_EQ(two[1].cells, (std::vector<std::pair<int, int>>{{0, 1}, {1, 0}}));
  EXPECT_EQ(molnar_determinant_terms(3).size(), 6u);
  for (int k = 2; k <= 5; ++k) {
    const auto terms = molnar_determinant_terms(k);
    std::set<std::vector<int>> perms;
    for (const auto& t : terms) {
      std::vector<int> cols;
      for (int r = 0; r < k; ++r) {
        EXPECT_EQ(t.cells[r].first, r);
        cols.push_back(t.cells[r].second);
      }
      EXPECT_EQ(t.sign, parity(cols));
      perms.insert(cols);
    }
    EXPECT_EQ(perms.size(), terms.size());
    EXPECT_EQ(static_cast<int>(terms.size()), k == 2 ? 2 : k == 3 ? 6 : k == 4 ? 24 : 120);
  }
  const auto three = molnar_determinant_terms(3);
  const auto t = std::find_if(three.begin(), three.end(), [](const Monomial& m) {
    return m.cells == std::vector<std::pair<int, int>>{{0, 0}, {1, 2}, {2, 1}};
  });
  ASSERT_NE(t, three.end());
  EXPECT_EQ(t->sign, -1);
}

TEST(Sports, MatchNumbers) {
  EXPECT_EQ(sports_match_number(0, 1, 8), 0);
  EXPECT_EQ(sports_match_number(0, 7, 8), 6);
  EXPECT_EQ(sports_match_number(6, 7, 8), 27);
  std::set<int> seen;
  for (int a = 0; a < 8; ++a) {
    for (int b = a + 1; b < 8; ++b) seen.insert(sports_match_number(a, b, 8));
  }
  EXPECT_EQ(seen.size(), 28u);
  EXPECT_EQ(*seen.begin(), 0);
  EXPECT_EQ(*seen.rbegin(), 27);
}

TEST(Superpermutation, Table) {
  const auto t2 = superpermutation_table(2);
  EXPECT_EQ(t2, (std::vector<Tuple>{{0, 1, 2}, {1, 2, 1}, {-1, 0, 0}, {-1, 1, 1}}));
  const auto t3 = superpermutation_table(3);
  std::set<Value> index;
  int wildcard = 0;
  for (const auto& row : t3) {
    if (row[0] >= 0) {
      EXPECT_TRUE(index.insert(row[0]).second);
    } else {
      ++wildcard;
      EXPECT_EQ(std::count(row.begin() + 1, row.end(), kStar), 1);
    }
  }
  EXPECT_EQ(index.size(), 6u);
  EXPECT_EQ(wildcard, 3 * 3);
  EXPECT_THROW(superpermutation_table(6), ParamError);
}

TEST(KnownCounts, Aztec) {
  for (int n : {1, 2}) {
    EXPECT_EQ(enumerate_brute(gen(Problem::Aztec, n), 1000).size(), std::size_t{1} << (n * (n + 1) / 2));
  }
}

TEST(KnownCounts, CostasAgainstPermutationFilter) {
  for (int n : {4, 5}) {
    const int expected = xcsp::testing::costas_oracle(n);
    EXPECT_EQ(enumerate_brute(gen(Problem::Costas, n), 1000).size(), static_cast<std::size_t>(expected));
  }
}

TEST(KnownCounts, BlockedQueensFour) {
  EXPECT_EQ(enumerate_brute(gen(Problem::BlockedQueens, 4), 100).size(), 2u);
}

TEST(KnownStatus, Ortholatin2Unsat) { EXPECT_TRUE(enumerate_brute(gen(Problem::Ortholatin, 2), 1).empty()); }

TEST(KnownStatus, NumberPartitioningWitness) {
  const Instance inst = gen(Problem::NumberPartitioning, 8);
  const Instantiation w{{"x[0]", "x[1]", "x[2]", "x[3]", "y[0]", "y[1]", "y[2]", "y[3]"}, {1, 4, 6, 7, 2, 3, 5, 8}};
  EXPECT_TRUE(check_instantiation(inst, w).empty());
  // sums 18/18 and square sums 102/102
  EXPECT_EQ(1 + 4 + 6 + 7, 2 + 3 + 5 + 8);
  EXPECT_EQ(1 + 16 + 36 + 49, 4 + 9 + 25 + 64);
}

TEST(KnownStatus, HadamardThreeSat) { EXPECT_FALSE(enumerate_brute(gen(Problem::Hadamard, 3), 1).empty()); }

TEST(SymmetryBreaking, RemovalKeepsStatusAndOptimum) {
  for (const auto& p : sample_params()) {
    const Instance full = generate(p);
    SCOPED_TRACE(full.name);
    const Instance open = without_tag(full, "symmetry-breaking");
    const auto a = solve(full);
    const auto b = solve(open);
    ASSERT_NE(a.status, SolveStatus::Unknown);
    EXPECT_EQ(a.status, b.status);
    EXPECT_EQ(a.objective, b.objective);
  }
}

TEST(SymmetryBreaking, BruteForceOnSmallGrid) {
  // solution counts may shrink, never to zero from a positive count
  for (auto [pr, n] : std::vector<std::pair<Problem, int>>{{Problem::Costas, 5},
                                                           {Problem::NumberPartitioning, 8},
                                                           {Problem::Superpermutation, 2},
                                                           {Problem::KnightTour, 4}}) {
    const Instance full = gen(pr, n);
    const Instance open = without_tag(full, "symmetry-breaking");
    SCOPED_TRACE(full.name);
    SearchConfig cfg;
    cfg.mode = SearchMode::Enumerate;
    const auto a = solve_csp(full, cfg).solutions;
    const auto b = solve_csp(open, cfg).solutions;
    EXPECT_LE(a, b);
    EXPECT_EQ(a == 0, b == 0);
  }
}
