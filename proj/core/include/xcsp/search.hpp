#ifndef XCSP_SEARCH_HPP
#define XCSP_SEARCH_HPP

#include <atomic>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "xcsp/engine.hpp"

namespace xcsp {

enum class VarHeuristic { Dom, DomWdeg, Lexical };
enum class ValHeuristic { Min, Max, Random };
enum class SearchMode { FirstSolution, Enumerate, Optimize };

struct SearchConfig {
  VarHeuristic var = VarHeuristic::DomWdeg;
  ValHeuristic val = ValHeuristic::Min;
  std::uint64_t seed = 0;  // used by ValHeuristic::Random

  bool restarts = false;  // geometric cutoffs on failures
  double restart_base = 100;
  double restart_factor = 1.5;

  std::optional<std::uint64_t> node_limit;
  std::optional<double> time_limit;  // seconds of wall-clock time

  SearchMode mode = SearchMode::FirstSolution;
  std::uint64_t enumerate_limit = UINT64_MAX;
  bool collect_solutions = false;  // keep every enumerated solution

  /// Polled at every node; setting it ends the search with the current result.
  const std::atomic<bool>* stop = nullptr;
  /// Called on every accepted solution (objective value when optimizing).
  std::function<void(std::span<const Value>, std::optional<Value>)> on_solution;

  /// Throws std::invalid_argument on out-of-range settings.
  void validate() const;
};

enum class SolveStatus { Sat, Unsat, Optimum, Unknown };
const char* status_name(SolveStatus s);  // "SATISFIABLE", ...

struct BoundPoint {
  double elapsed = 0;
  Value value = 0;
};

struct SolveResult {
  SolveStatus status = SolveStatus::Unknown;
  std::optional<Instantiation> solution;
  std::optional<Value> objective;
  std::vector<BoundPoint> trajectory;
  std::uint64_t solutions = 0;
  std::uint64_t nodes = 0;
  std::uint64_t failures = 0;
  std::uint64_t restarts = 0;
  /// Leaves accepted by propagation but refused by the verifier (should be 0).
  std::uint64_t rejected_leaves = 0;
  std::vector<Assignment> all_solutions;  // enumerate mode with collect_solutions
};

struct Decision {
  VarId var = -1;
  Value value = 0;
};

/// Next branching decision over the unfixed variables of `engine`, instance
/// variables first. Returns nothing when every variable is fixed.
std::optional<Decision> select_decision(const Engine& engine, const SearchConfig& cfg,
                                        std::mt19937_64* rng = nullptr);

/// Same rule on a bare store: variables [0, num_vars) with optional
/// per-variable failure weights.
std::optional<Decision> select_decision(const DomainStore& store, std::size_t num_vars, const SearchConfig& cfg,
                                        std::span<const double> weights = {}, std::mt19937_64* rng = nullptr);

SolveResult solve_csp(const Instance& inst, const SearchConfig& cfg = {});
SolveResult solve_cop(const Instance& inst, const SearchConfig& cfg = {});
/// Dispatches on the presence of an objective (mode Optimize is implied).
SolveResult solve(const Instance& inst, SearchConfig cfg = {});

}  // namespace xcsp

#endif  // XCSP_SEARCH_HPP
