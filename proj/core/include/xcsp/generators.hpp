#ifndef XCSP_GENERATORS_HPP
#define XCSP_GENERATORS_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "xcsp/model.hpp"

namespace xcsp {

/// Parameters outside the range a model asserts.
class ParamError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Problem {
  Aztec,
  BlockedQueens,
  ClockTriplets,
  CoinsGrid,
  Costas,
  DiamondFree,
  Hadamard,
  KnightTour,
  Molnar,
  NumberPartitioning,
  Ortholatin,
  Quasigroup,
  Rostering,
  SportsScheduling,
  Superpermutation,
  Triangular,
  WarOrPeace,
  Warehouse,
};

inline constexpr int kNumProblems = 18;

/// Kebab-case family name ("clock-triplets").
std::string_view problem_name(Problem p);
/// Accepts the kebab-case name, with '_' or without separators, any case.
std::optional<Problem> problem_from_name(std::string_view name);
std::vector<Problem> all_problems();

struct WarehouseData {
  Value fixed_cost = 0;
  std::vector<Value> capacities;          // one per warehouse
  std::vector<std::vector<Value>> costs;  // costs[store][warehouse]
};

/// Seeded stand-in for the random data generator of the warehouse model.
struct WarehouseRandom {
  int stores = 10;
  int warehouses = 5;
  Value cost_min = 1;
  Value cost_max = 100;
  Value capacity_min = 1;
  Value capacity_max = 4;
  Value fixed_cost = 30;
  std::uint64_t seed = 0;
};

struct ProblemParams {
  Problem problem = Problem::Costas;
  std::string variant;  // "", "table", "dummy", "or", "base-v3", ...
  int n = 0;
  int k = 0;  // molnar matrix order
  int d = 0;  // molnar value bound
  int r = 0;  // clock-triplets window
  int c = 0;  // coins-grid coins per line
  std::vector<std::pair<int, int>> blocks;
  std::vector<std::array<int, 3>> preset;     // (employee, time, task)
  std::vector<std::array<int, 3>> forbidden;  // (employee, time, task)
  std::optional<WarehouseData> warehouse;
  std::optional<WarehouseRandom> warehouse_random;
};

/// Reads family parameters from JSON: a bare integer (n), a positional
/// array ([r, n] for clock-triplets, [n, c] for coins-grid, [k, d] for
/// molnar, [n, blocks] for blocked-queens, [n] otherwise) or an object with
/// named fields. Object keys: n k d r c variant blocks preset forbidden
/// fixedCost warehouseCapacities storeSupplyCosts, and for random warehouse
/// data stores warehouses costMin costMax capacityMin capacityMax seed.
/// Throws ParamError on malformed input.
ProblemParams params_from_json(Problem p, std::string_view json);

/// Deterministic model instance; throws ParamError on invalid parameters.
Instance generate(const ProblemParams& p);

/// Small parameter sets (every family and variant) that solve in well
/// under a second; used by tests and benchmarks.
std::vector<ProblemParams> sample_params();

// ---------------------------------------------------------------------------
// Auxiliary procedures of individual models
// ---------------------------------------------------------------------------

struct AztecCells {
  std::vector<std::pair<int, int>> valid;
  std::vector<std::pair<int, int>> inner;
  std::vector<std::pair<int, int>> border;
};

bool aztec_valid(int n, int i, int j);
AztecCells aztec_cells(int n);

/// Break-aware task automaton over symbols 0 (break) .. n-1 (tasks).
/// States are named q0, q1_i, q2_i, q3_i.
Automaton rostering_automaton(int n);

struct Monomial {
  int sign = 1;
  std::vector<std::pair<int, int>> cells;  // (row, col), one per row in row order
};

/// Cofactor expansion of a k x k determinant along the first row.
std::vector<Monomial> molnar_determinant_terms(int k);

/// Index of the match between teams t1 < t2 among nTeams teams.
int sports_match_number(int t1, int t2, int n_teams);

/// Rows (i, perm_i) for the permutations of 1..n in lexicographic order,
/// then (-1, v at positions i and j, * elsewhere) for v in 0..n-1, i < j.
std::vector<Tuple> superpermutation_table(int n);

}  // namespace xcsp

#endif  // XCSP_GENERATORS_HPP
