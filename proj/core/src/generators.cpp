#include "xcsp/generators.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include <json.hpp>

namespace xcsp {

namespace {

using namespace ex;

constexpr std::array<std::pair<Problem, std::string_view>, kNumProblems> kNames = {{
    {Problem::Aztec, "aztec"},
    {Problem::BlockedQueens, "blocked-queens"},
    {Problem::ClockTriplets, "clock-triplets"},
    {Problem::CoinsGrid, "coins-grid"},
    {Problem::Costas, "costas"},
    {Problem::DiamondFree, "diamond-free"},
    {Problem::Hadamard, "hadamard"},
    {Problem::KnightTour, "knight-tour"},
    {Problem::Molnar, "molnar"},
    {Problem::NumberPartitioning, "number-partitioning"},
    {Problem::Ortholatin, "ortholatin"},
    {Problem::Quasigroup, "quasigroup"},
    {Problem::Rostering, "rostering"},
    {Problem::SportsScheduling, "sports-scheduling"},
    {Problem::Superpermutation, "superpermutation"},
    {Problem::Triangular, "triangular"},
    {Problem::WarOrPeace, "war-or-peace"},
    {Problem::Warehouse, "warehouse"},
}};

[[noreturn]] void bad(const ProblemParams& p, const std::string& what) {
  throw ParamError(std::string(problem_name(p.problem)) + ": " + what);
}

void require(const ProblemParams& p, bool ok, const std::string& what) {
  if (!ok) bad(p, what);
}

void require_variant(const ProblemParams& p, std::initializer_list<std::string_view> allowed) {
  for (auto v : allowed) {
    if (p.variant == v) return;
  }
  std::string list;
  for (auto v : allowed) list += std::string(list.empty() ? "" : ", ") + "'" + std::string(v) + "'";
  bad(p, "unknown variant '" + p.variant + "' (expected one of " + list + ")");
}

std::string idx(std::string_view name, int i) { return std::string(name) + "[" + std::to_string(i) + "]"; }
std::string idx(std::string_view name, int i, int j) { return idx(name, i) + "[" + std::to_string(j) + "]"; }

// Variable arrays; absent cells hold -1.
struct Builder {
  Instance inst;

  std::vector<VarId> array(std::string_view name, int size, const Domain& dom) {
    std::vector<VarId> out;
    for (int i = 0; i < size; ++i) out.push_back(inst.add_variable(idx(name, i), dom));
    return out;
  }

  template <class DomFn>
  std::vector<std::vector<VarId>> grid(std::string_view name, int rows, int cols, DomFn dom) {
    std::vector<std::vector<VarId>> out(rows, std::vector<VarId>(cols, -1));
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) {
        std::optional<Domain> d = dom(i, j);
        if (d) out[i][j] = inst.add_variable(idx(name, i, j), *d);
      }
    }
    return out;
  }

  void post(ConstraintKind k, std::string tag = {}) { inst.post(std::move(k), std::move(tag)); }
};

std::vector<Expr> vars(std::span<const VarId> ids) {
  std::vector<Expr> out;
  for (VarId v : ids) out.push_back(var(v));
  return out;
}

std::vector<VarId> concat(std::vector<VarId> a, const std::vector<VarId>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

std::vector<VarId> column(const std::vector<std::vector<VarId>>& g, int j) {
  std::vector<VarId> out;
  for (const auto& row : g) out.push_back(row[j]);
  return out;
}

std::vector<VarId> flatten(const std::vector<std::vector<VarId>>& g) {
  std::vector<VarId> out;
  for (const auto& row : g) {
    for (VarId v : row) {
      if (v >= 0) out.push_back(v);
    }
  }
  return out;
}

Sum sum_of(std::vector<VarId> ids, Condition cond, std::vector<Value> coeffs = {}) {
  return Sum{vars(ids), std::move(coeffs), std::move(cond)};
}

// Folds n-ary connectives down to a single operand when needed.
Expr nary(Op op, std::vector<Expr> args) {
  if (args.size() == 1) return std::move(args.front());
  return Expr::make(op, std::move(args));
}

AllDifferent alldiff(std::span<const VarId> ids) { return AllDifferent{vars(ids), {}}; }

Intension fix(VarId v, Value k) { return Intension{eq(var(v), cst(k))}; }

// Rows then columns of a Latin square.
void latin(Builder& b, const std::vector<std::vector<VarId>>& g) {
  for (const auto& row : g) b.post(alldiff(row));
  for (std::size_t j = 0; j < g.size(); ++j) b.post(alldiff(column(g, static_cast<int>(j))));
}

Domain dom01() { return Domain({0, 1}); }

Objective sum_objective(Sense sense, std::vector<VarId> ids, std::vector<Value> coeffs = {}) {
  Objective o;
  o.sense = sense;
  o.kind = ObjectiveKind::Sum;
  o.terms = vars(ids);
  o.coeffs = std::move(coeffs);
  return o;
}

// ---------------------------------------------------------------------------

Instance gen_aztec(const ProblemParams& p) {
  require_variant(p, {""});
  const int n = p.n;
  require(p, n >= 1, "requires n >= 1");
  Builder b;
  auto x = b.grid("x", 2 * n, 2 * n, [&](int i, int j) -> std::optional<Domain> {
    if (aztec_valid(n, i, j)) return Domain::range(0, 3);
    return std::nullopt;
  });
  auto at = [&](int i, int j) {
    if (!aztec_valid(n, i, j)) bad(p, "table scope leaves the diamond");
    return x[i][j];
  };
  auto v = [&](int i, int j) { return aztec_valid(n, i, j); };
  const Value S = kStar;
  AztecCells cells = aztec_cells(n);
  auto table = [&](std::vector<VarId> scope, std::vector<Tuple> tuples) {
    b.post(Extension{std::move(scope), std::move(tuples), true});
  };
  for (auto [i, j] : cells.border) {
    if (!v(i, j - 1) && !v(i - 1, j)) table({at(i, j), at(i, j + 1), at(i + 1, j)}, {{1, 0, S}, {3, S, 2}});
  }
  for (auto [i, j] : cells.border) {
    if (!v(i, j + 1) && !v(i - 1, j)) table({at(i, j), at(i, j - 1), at(i + 1, j)}, {{0, 1, S}, {3, S, 2}});
  }
  for (auto [i, j] : cells.border) {
    if (!v(i, j - 1) && !v(i + 1, j)) table({at(i, j), at(i, j + 1), at(i - 1, j)}, {{1, 0, S}, {2, S, 3}});
  }
  for (auto [i, j] : cells.border) {
    if (!v(i, j + 1) && !v(i + 1, j)) table({at(i, j), at(i, j - 1), at(i - 1, j)}, {{0, 1, S}, {2, S, 3}});
  }
  for (auto [i, j] : cells.inner) {
    table({at(i, j), at(i, j - 1), at(i, j + 1), at(i - 1, j), at(i + 1, j)},
          {{0, 1, S, S, S}, {1, S, 0, S, S}, {2, S, S, 3, S}, {3, S, S, S, 2}});
  }
  return std::move(b.inst);
}

Instance gen_blocked_queens(const ProblemParams& p) {
  require_variant(p, {""});
  const int n = p.n;
  require(p, n >= 1, "requires n >= 1");
  for (auto [i, j] : p.blocks) {
    require(p, i >= 0 && i < n && j >= 0 && j < n, "block (" + std::to_string(i) + "," + std::to_string(j) + ") outside the board");
  }
  Builder b;
  auto q = b.array("q", n, Domain::range(0, n - 1));
  for (auto [i, j] : p.blocks) b.post(Intension{ne(var(q[i]), cst(j))});
  b.post(alldiff(q));
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      b.post(Intension{ne(abs(sub(var(q[i]), var(q[j]))), cst(j - i))});
    }
  }
  return std::move(b.inst);
}

Instance gen_clock_triplets(const ProblemParams& p) {
  require_variant(p, {""});
  const int r = p.r, n = p.n;
  require(p, n >= 3, "requires n >= 3");
  require(p, r >= 1 && r <= n, "requires 1 <= r <= n");
  Builder b;
  auto x = b.array("x", n, Domain::range(1, n));
  Value top = 0;
  for (int v = 0; v < r; ++v) top += n - v;
  VarId z = b.inst.add_variable("z", Domain::range(0, top));
  b.post(alldiff(x));
  for (int i = 0; i < n; ++i) {
    std::vector<VarId> window;
    for (int k = 0; k < r; ++k) window.push_back(x[(i + k) % n]);
    b.post(sum_of(window, Condition::cmp(CmpOp::Le, VarRef{z})));
  }
  b.post(fix(x[0], 1), "symmetry-breaking");
  b.post(Intension{lt(var(x[1]), var(x[n - 1]))}, "symmetry-breaking");
  Objective o;
  o.sense = Sense::Minimize;
  o.terms = {var(z)};
  b.inst.objective = o;
  return std::move(b.inst);
}

Instance gen_coins_grid(const ProblemParams& p) {
  require_variant(p, {""});
  const int n = p.n, c = p.c;
  require(p, n >= 1, "requires n >= 1");
  require(p, c >= 0 && c <= n, "requires 0 <= c <= n");
  Builder b;
  auto x = b.grid("x", n, n, [](int, int) -> std::optional<Domain> { return dom01(); });
  for (int i = 0; i < n; ++i) b.post(sum_of(x[i], Condition::cmp(CmpOp::Eq, c)));
  for (int j = 0; j < n; ++j) b.post(sum_of(column(x, j), Condition::cmp(CmpOp::Eq, c)));
  std::vector<Value> w;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) w.push_back(static_cast<Value>(i - j) * (i - j));
  }
  b.inst.objective = sum_objective(Sense::Minimize, flatten(x), w);
  return std::move(b.inst);
}

Instance gen_costas(const ProblemParams& p) {
  require_variant(p, {""});
  const int n = p.n;
  require(p, n >= 1, "requires n >= 1");
  Builder b;
  auto x = b.array("x", n, Domain::range(0, n - 1));
  b.post(alldiff(x));
  for (int d = 1; d < n - 1; ++d) {
    AllDifferent a;
    for (int i = 0; i < n - d; ++i) a.list.push_back(sub(var(x[i]), var(x[i + d])));
    b.post(std::move(a));
  }
  return std::move(b.inst);
}

Instance gen_diamond_free(const ProblemParams& p) {
  require_variant(p, {""});
  const int n = p.n;
  require(p, n >= 4, "requires n >= 4");
  Builder b;
  auto x = b.grid("x", n, n, [](int i, int j) -> std::optional<Domain> {
    return i != j ? dom01() : Domain({0});
  });
  std::vector<Value> degrees, totals;
  for (int i = 1; i < n; ++i) {
    if (i % 3 == 0) degrees.push_back(i);
  }
  for (int i = n; i <= n * (n - 1); ++i) {
    if (i % 12 == 0) totals.push_back(i);
  }
  auto y = b.array("y", n, Domain(degrees));
  VarId s = b.inst.add_variable("s", Domain(totals));
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (int k = j + 1; k < n; ++k) {
        for (int l = k + 1; l < n; ++l) {
          b.post(sum_of({x[i][j], x[i][k], x[i][l], x[j][k], x[j][l], x[k][l]}, Condition::cmp(CmpOp::Le, 4)));
        }
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) b.post(Intension{eq(var(x[i][j]), var(x[j][i]))});
  }
  for (int i = 0; i < n; ++i) b.post(sum_of(x[i], Condition::cmp(CmpOp::Eq, VarRef{y[i]})));
  b.post(sum_of(y, Condition::cmp(CmpOp::Eq, VarRef{s})));
  b.post(Ordered{y, {}, CmpOp::Ge}, "symmetry-breaking");
  b.post(Lex{x, CmpOp::Le, false}, "symmetry-breaking");
  return std::move(b.inst);
}

Instance gen_hadamard(const ProblemParams& p) {
  require_variant(p, {""});
  const int n = p.n;
  require(p, n >= 1 && n % 2 == 1, "requires an odd n >= 1");
  const int m = (n - 1) / 2;
  Builder b;
  auto x = b.array("x", n, Domain({-1, 1}));
  auto y = b.array("y", n, Domain({-1, 1}));
  b.post(sum_of(x, Condition::cmp(CmpOp::Eq, 1)));
  b.post(sum_of(y, Condition::cmp(CmpOp::Eq, 1)));
  for (int k = 1; k <= m; ++k) {
    Sum s;
    for (int i = 0; i < n; ++i) s.terms.push_back(mul(var(x[i]), var(x[(i + k) % n])));
    for (int i = 0; i < n; ++i) s.terms.push_back(mul(var(y[i]), var(y[(i + k) % n])));
    s.condition = Condition::cmp(CmpOp::Eq, -2);
    b.post(std::move(s));
  }
  return std::move(b.inst);
}

Instance gen_knight_tour(const ProblemParams& p) {
  require_variant(p, {""});
  const int n = p.n;
  require(p, n >= 4, "requires n >= 4 (every cell needs a knight move)");
  Builder b;
  std::vector<VarId> x;
  for (int i = 0; i < n * n; ++i) {
    const int r = i / n, c = i % n;
    const int moves[8][2] = {{-2, -1}, {-2, 1}, {-1, -2}, {-1, 2}, {1, -2}, {1, 2}, {2, -1}, {2, 1}};
    std::vector<Value> dom;
    for (auto [dr, dc] : moves) {
      const int k = r + dr, l = c + dc;
      if (k >= 0 && k < n && l >= 0 && l < n) dom.push_back(static_cast<Value>(k) * n + l);
    }
    x.push_back(b.inst.add_variable(idx("x", i), Domain(dom)));
  }
  b.post(Circuit{x});
  b.post(fix(x[0], n + 2), "symmetry-breaking");
  return std::move(b.inst);
}

// Determinant of the matrix `m` equal to 1; sums of two-variable products
// stay a sum constraint, higher orders become an intension.
void post_determinant(Builder& b, const std::vector<std::vector<VarId>>& m, int k) {
  auto terms = molnar_determinant_terms(k);
  if (k == 2) {
    Sum s;
    for (const auto& t : terms) {
      s.terms.push_back(mul(var(m[t.cells[0].first][t.cells[0].second]), var(m[t.cells[1].first][t.cells[1].second])));
      s.coeffs.push_back(t.sign);
    }
    s.condition = Condition::cmp(CmpOp::Eq, 1);
    b.post(std::move(s));
    return;
  }
  std::vector<Expr> parts;
  for (const auto& t : terms) {
    std::vector<Expr> f;
    for (auto [i, j] : t.cells) f.push_back(var(m[i][j]));
    Expr prod = mul(std::move(f));
    parts.push_back(t.sign > 0 ? std::move(prod) : neg(std::move(prod)));
  }
  b.post(Intension{eq(add(std::move(parts)), cst(1))});
}

Instance gen_molnar(const ProblemParams& p) {
  require_variant(p, {""});
  const int k = p.k, d = p.d;
  require(p, k >= 2 && k <= 5, "requires 2 <= k <= 5");
  require(p, d >= 2, "requires d >= 2");
  Builder b;
  auto x = b.grid("x", k, k, [&](int, int) -> std::optional<Domain> { return Domain::range(2, d); });
  auto y = b.grid("y", k, k, [&](int, int) -> std::optional<Domain> {
    return Domain::range(4, static_cast<Value>(d) * d);
  });
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) b.post(Intension{eq(var(y[i][j]), mul(var(x[i][j]), var(x[i][j])))});
  }
  post_determinant(b, x, k);
  post_determinant(b, y, k);
  b.post(Lex{x, CmpOp::Le, true}, "symmetry-breaking");
  return std::move(b.inst);
}

Instance gen_number_partitioning(const ProblemParams& p) {
  require_variant(p, {""});
  const int n = p.n;
  require(p, n >= 2 && n % 2 == 0, "requires an even n >= 2");
  Builder b;
  auto x = b.array("x", n / 2, Domain::range(1, n));
  auto y = b.array("y", n / 2, Domain::range(1, n));
  b.post(alldiff(concat(x, y)));
  const Value n64 = n;
  const Value s1 = n64 * (n64 + 1) / 4;
  const Value s2 = n64 * (n64 + 1) * (2 * n64 + 1) / 12;
  b.post(sum_of(x, Condition::cmp(CmpOp::Eq, s1)), "power1");
  b.post(sum_of(y, Condition::cmp(CmpOp::Eq, s1)), "power1");
  for (const auto* a : {&x, &y}) {
    Sum s;
    for (VarId v : *a) s.terms.push_back(mul(var(v), var(v)));
    s.condition = Condition::cmp(CmpOp::Eq, s2);
    b.post(std::move(s), "power2");
  }
  b.post(fix(x[0], 1), "symmetry-breaking");
  b.post(Ordered{x, {}, CmpOp::Lt}, "symmetry-breaking");
  b.post(Ordered{y, {}, CmpOp::Lt}, "symmetry-breaking");
  return std::move(b.inst);
}

Instance gen_ortholatin(const ProblemParams& p) {
  require_variant(p, {""});
  const int n = p.n;
  require(p, n >= 1, "requires n >= 1");
  Builder b;
  auto square = [&](int, int) -> std::optional<Domain> { return Domain::range(0, n - 1); };
  auto x = b.grid("x", n, n, square);
  auto y = b.grid("y", n, n, square);
  auto z = b.array("z", n * n, Domain::range(0, static_cast<Value>(n) * n - 1));
  latin(b, x);
  latin(b, y);
  for (const auto* g : {&x, &y}) {
    std::vector<VarId> down, up;
    for (int i = 0; i < n; ++i) {
      down.push_back((*g)[i][i]);
      up.push_back((*g)[n - 1 - i][i]);
    }
    b.post(alldiff(down), "diagonals");
    b.post(alldiff(up), "diagonals");
  }
  b.post(alldiff(z));
  std::vector<Tuple> table;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) table.push_back({i, j, static_cast<Value>(i) * n + j});
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) b.post(Extension{{x[i][j], y[i][j], z[i * n + j]}, table, true});
  }
  for (int j = 0; j < n; ++j) {
    b.post(fix(x[0][j], j), "symmetry-breaking");
    b.post(fix(y[0][j], j), "symmetry-breaking");
  }
  return std::move(b.inst);
}

Instance gen_quasigroup(const ProblemParams& p) {
  require_variant(p, {"", "base-v3", "base-v5", "base-v6"});
  const int n = p.n;
  require(p, n >= 1, "requires n >= 1");
  Builder b;
  auto x = b.grid("x", n, n, [&](int, int) -> std::optional<Domain> { return Domain::range(0, n - 1); });
  latin(b, x);
  for (int i = 0; i < n; ++i) b.post(fix(x[i][i], i), "idempotence");
  if (p.variant.empty()) return std::move(b.inst);

  // x[a, b] becomes element(flat, t) with t = a * n + b.
  const std::vector<VarId> flat = flatten(x);
  const Domain cells = Domain::range(0, static_cast<Value>(n) * n - 1);
  const Domain vals = Domain::range(0, n - 1);
  auto link = [&](VarId t, Expr a, Expr c) {
    // n * a + c - t = 0
    Sum s;
    std::vector<Value> coeffs;
    for (Expr* e : {&a, &c}) {
      if (e->is_const()) continue;
      s.terms.push_back(*e);
    }
    if (!a.is_const()) coeffs.push_back(n);
    if (!c.is_const()) coeffs.push_back(1);
    s.terms.push_back(var(t));
    coeffs.push_back(-1);
    Value rhs = 0;
    if (a.is_const()) rhs -= a.value * n;
    if (c.is_const()) rhs -= c.value;
    s.coeffs = std::move(coeffs);
    s.condition = Condition::cmp(CmpOp::Eq, rhs);
    b.post(std::move(s));
  };
  auto element = [&](VarId t, Expr value) {
    Element e;
    e.list = vars(flat);
    e.index = t;
    e.value = std::move(value);
    b.post(std::move(e));
  };
  if (p.variant == "base-v3") {
    // x[x[i][j], x[j][i]] = i
    auto t = b.grid("t", n, n, [&](int, int) -> std::optional<Domain> { return cells; });
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        link(t[i][j], var(x[i][j]), var(x[j][i]));
        element(t[i][j], cst(i));
      }
    }
  } else if (p.variant == "base-v5") {
    // x[x[x[j][i], j], j] = i through a = x[x[j][i], j]
    auto t = b.grid("t", n, n, [&](int, int) -> std::optional<Domain> { return cells; });
    auto a = b.grid("a", n, n, [&](int, int) -> std::optional<Domain> { return vals; });
    auto u = b.grid("u", n, n, [&](int, int) -> std::optional<Domain> { return cells; });
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        link(t[i][j], var(x[j][i]), cst(j));
        element(t[i][j], var(a[i][j]));
        link(u[i][j], var(a[i][j]), cst(j));
        element(u[i][j], cst(i));
      }
    }
  } else {
    // x[x[i][j], j] = x[i, x[i][j]], both sides equal to a
    auto t = b.grid("t", n, n, [&](int, int) -> std::optional<Domain> { return cells; });
    auto u = b.grid("u", n, n, [&](int, int) -> std::optional<Domain> { return cells; });
    auto a = b.grid("a", n, n, [&](int, int) -> std::optional<Domain> { return vals; });
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        link(t[i][j], var(x[i][j]), cst(j));
        link(u[i][j], cst(i), var(x[i][j]));
        element(t[i][j], var(a[i][j]));
        element(u[i][j], var(a[i][j]));
      }
    }
  }
  return std::move(b.inst);
}

Instance gen_rostering(const ProblemParams& p) {
  require_variant(p, {""});
  const int n = p.n == 0 ? 10 : p.n;
  require(p, n >= 2, "requires n >= 2");
  auto in_range = [&](const std::array<int, 3>& t) {
    return t[0] >= 0 && t[0] < n && t[1] >= 0 && t[1] < n && t[2] >= 0 && t[2] < n;
  };
  for (const auto& t : p.preset) require(p, in_range(t), "preset entry outside 0.." + std::to_string(n - 1));
  for (const auto& t : p.forbidden) require(p, in_range(t), "forbidden entry outside 0.." + std::to_string(n - 1));
  Builder b;
  auto x = b.grid("x", n, n, [&](int, int) -> std::optional<Domain> { return Domain::range(0, n - 1); });
  for (const auto& [i, j, k] : p.preset) b.post(fix(x[i][j], k));
  for (const auto& [i, j, k] : p.forbidden) b.post(Intension{ne(var(x[i][j]), cst(k))});
  Automaton a = rostering_automaton(n);
  for (int i = 0; i < n; ++i) b.post(Regular{x[i], a});
  for (int j = 0; j < n; ++j) b.post(alldiff(column(x, j)));
  return std::move(b.inst);
}

Instance gen_sports_scheduling(const ProblemParams& p) {
  require_variant(p, {"", "dummy"});
  const int nt = p.n;
  require(p, nt >= 2 && nt % 2 == 0, "requires an even number of teams >= 2");
  const int weeks = nt - 1, periods = nt / 2, matches = (nt - 1) * nt / 2;
  Builder b;
  auto m = b.grid("m", weeks, periods, [&](int, int) -> std::optional<Domain> { return Domain::range(0, matches - 1); });
  auto teams = [&](int, int) -> std::optional<Domain> { return Domain::range(0, nt - 1); };
  auto x = b.grid("x", weeks, periods, teams);
  auto y = b.grid("y", weeks, periods, teams);
  b.post(alldiff(flatten(m)));
  std::vector<Tuple> table;
  for (int t1 = 0; t1 < nt; ++t1) {
    for (int t2 = t1 + 1; t2 < nt; ++t2) table.push_back({t1, t2, sports_match_number(t1, t2, nt)});
  }
  for (int w = 0; w < weeks; ++w) {
    for (int q = 0; q < periods; ++q) b.post(Extension{{x[w][q], y[w][q], m[w][q]}, table, true});
  }
  for (int w = 0; w < weeks; ++w) b.post(alldiff(concat(x[w], y[w])));
  std::vector<Value> team_values(nt);
  std::iota(team_values.begin(), team_values.end(), 0);
  for (int q = 0; q < periods; ++q) {
    Cardinality c;
    c.list = concat(column(x, q), column(y, q));
    c.values = team_values;
    c.occurs.assign(nt, Interval{1, 2});
    b.post(std::move(c));
  }
  for (int w = 0; w < weeks; ++w) {
    b.post(Count{m[w], {sports_match_number(0, w + 1, nt)}, Condition::cmp(CmpOp::Eq, 1)}, "symmetry-breaking");
  }
  for (int q = 0; q < periods; ++q) {
    b.post(fix(m[0][q], sports_match_number(2 * q, 2 * q + 1, nt)), "symmetry-breaking");
  }
  if (p.variant == "dummy") {
    auto xd = b.array("xd", periods, Domain::range(0, nt - 1));
    auto yd = b.array("yd", periods, Domain::range(0, nt - 1));
    b.post(alldiff(concat(xd, yd)), "dummy-week");
    for (int q = 0; q < periods; ++q) {
      Cardinality c;
      c.list = concat(column(x, q), column(y, q));
      c.list.push_back(xd[q]);
      c.list.push_back(yd[q]);
      c.values = team_values;
      c.occurs.assign(nt, Value{2});
      b.post(std::move(c), "dummy-week");
    }
    for (int q = 0; q < periods; ++q) b.post(Intension{lt(var(xd[q]), var(yd[q]))}, "symmetry-breaking");
  }
  return std::move(b.inst);
}

std::vector<std::vector<Value>> permutations_of(int n) {
  std::vector<Value> perm(n);
  std::iota(perm.begin(), perm.end(), 1);
  std::vector<std::vector<Value>> out;
  do {
    out.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

Instance gen_superpermutation(const ProblemParams& p) {
  require_variant(p, {"", "table"});
  const int n = p.n;
  require(p, n >= 2 && n <= 5, "requires 2 <= n <= 5");
  int m = 0, f = 1;
  for (int i = 1; i <= n; ++i) {
    f *= i;
    m += f;
  }
  const auto perms = permutations_of(n);
  const int np = static_cast<int>(perms.size());
  Builder b;
  auto x = b.array("x", m, Domain::range(1, n));
  if (p.variant.empty()) {
    auto pos = b.array("p", np, Domain::range(0, m - 1));
    b.post(alldiff(pos), "redundant-constraints");
    for (int k = 0; k < n; ++k) {
      for (int j = 0; j < np; ++j) {
        // x[p[j] + k] = perms[j][k]
        Element e;
        e.list = vars(x);
        e.start_index = -k;
        e.index = pos[j];
        e.value = cst(perms[j][k]);
        b.post(std::move(e));
      }
    }
  } else {
    const int patterns = m - n + 1;
    const int gap = patterns - np;
    auto y = b.array("y", patterns, Domain::range(-1, np - 1));
    const auto table = superpermutation_table(n);
    for (int i = 0; i < patterns; ++i) {
      std::vector<VarId> scope{y[i]};
      for (int k = 0; k < n; ++k) scope.push_back(x[i + k]);
      b.post(Extension{scope, table, true});
    }
    Cardinality c;
    c.list = y;
    c.values.push_back(-1);
    c.occurs.push_back(Interval{0, gap});
    for (int i = 0; i < np; ++i) {
      c.values.push_back(i);
      // with no slack every permutation occurs exactly once
      c.occurs.push_back(Interval{1, std::max(gap, 1)});
    }
    b.post(std::move(c));
  }
  for (int i = 0; i < n; ++i) b.post(fix(x[i], i + 1), "symmetry-breaking");
  for (int i = 0; i < m / 2; ++i) b.post(Intension{eq(var(x[i]), var(x[m - 1 - i]))}, "palindrome");
  return std::move(b.inst);
}

Instance gen_triangular(const ProblemParams& p) {
  require_variant(p, {""});
  const int n = p.n;
  require(p, n >= 1, "requires n >= 1");
  Builder b;
  auto x = b.grid("x", n, n, [](int i, int j) -> std::optional<Domain> {
    if (i >= j) return dom01();
    return std::nullopt;
  });
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      for (int k = 1; k < n - i; ++k) {
        for (int m = 0; m < k; ++m) {
          b.post(sum_of({x[i + m][j], x[i + k][j + m], x[i + k - m][j + k - m]}, Condition::cmp(CmpOp::Le, 2)));
        }
      }
    }
  }
  b.inst.objective = sum_objective(Sense::Maximize, flatten(x));
  return std::move(b.inst);
}

Instance gen_war_or_peace(const ProblemParams& p) {
  require_variant(p, {"", "or"});
  const int n = p.n;
  require(p, n >= 3, "requires n >= 3");
  constexpr Value kWar = 0, kPeace = 1;
  Builder b;
  auto x = b.grid("x", n, n, [](int i, int j) -> std::optional<Domain> {
    if (i < j) return dom01();
    return std::nullopt;
  });
  auto pair = [&](int i, int j) { return var(x[std::min(i, j)][std::max(i, j)]); };
  if (p.variant.empty()) {
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        std::vector<Expr> both_war;
        for (int k = 0; k < n; ++k) {
          if (k == i || k == j) continue;
          both_war.push_back(and_(eq(pair(i, k), cst(kWar)), eq(pair(j, k), cst(kWar))));
        }
        b.post(Intension{or_(eq(var(x[i][j]), cst(kPeace)), eq(nary(Op::Add, std::move(both_war)), cst(0)))});
      }
    }
  } else {
    for (int i = 1; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        std::vector<Expr> all;
        for (int k = 0; k < i; ++k) all.push_back(or_(eq(var(x[k][i]), cst(kPeace)), eq(var(x[k][j]), cst(kPeace))));
        b.post(Intension{or_(eq(var(x[i][j]), cst(kPeace)),
                             and_(eq(var(x[i][j]), cst(kWar)), nary(Op::And, std::move(all))))});
      }
    }
  }
  b.inst.objective = sum_objective(Sense::Minimize, flatten(x));
  return std::move(b.inst);
}

WarehouseData random_warehouse(const ProblemParams& p, const WarehouseRandom& r) {
  require(p, r.stores >= 1 && r.warehouses >= 1, "requires at least one store and one warehouse");
  require(p, r.cost_min <= r.cost_max, "requires costMin <= costMax");
  require(p, r.capacity_min >= 0 && r.capacity_min <= r.capacity_max, "requires 0 <= capacityMin <= capacityMax");
  // explicit modulo mapping keeps the data identical across standard libraries
  std::mt19937_64 rng(r.seed);
  auto draw = [&](Value lo, Value hi) {
    return lo + static_cast<Value>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
  };
  WarehouseData d;
  d.fixed_cost = r.fixed_cost;
  for (int j = 0; j < r.warehouses; ++j) d.capacities.push_back(draw(r.capacity_min, r.capacity_max));
  for (int i = 0; i < r.stores; ++i) {
    std::vector<Value> row;
    for (int j = 0; j < r.warehouses; ++j) row.push_back(draw(r.cost_min, r.cost_max));
    d.costs.push_back(std::move(row));
  }
  return d;
}

Instance gen_warehouse(const ProblemParams& p) {
  require_variant(p, {""});
  WarehouseData d;
  if (p.warehouse) {
    d = *p.warehouse;
  } else if (p.warehouse_random) {
    d = random_warehouse(p, *p.warehouse_random);
  } else {
    bad(p, "requires warehouse data or random data parameters");
  }
  const int nw = static_cast<int>(d.capacities.size());
  const int ns = static_cast<int>(d.costs.size());
  require(p, nw >= 1 && ns >= 1, "requires at least one store and one warehouse");
  for (const auto& row : d.costs) {
    require(p, static_cast<int>(row.size()) == nw, "every store needs one supply cost per warehouse");
  }
  Builder b;
  auto w = b.array("w", ns, Domain::range(0, nw - 1));
  auto o = b.array("o", nw, dom01());
  std::vector<VarId> c;
  for (int i = 0; i < ns; ++i) c.push_back(b.inst.add_variable(idx("c", i), Domain(d.costs[i])));
  for (int j = 0; j < nw; ++j) b.post(Count{w, {j}, Condition::cmp(CmpOp::Le, d.capacities[j])});
  for (int i = 0; i < ns; ++i) {
    Element e;
    e.list = vars(o);
    e.index = w[i];
    e.value = cst(1);
    b.post(std::move(e));
  }
  for (int i = 0; i < ns; ++i) {
    Element e;
    for (Value v : d.costs[i]) e.list.push_back(cst(v));
    e.index = w[i];
    e.value = var(c[i]);
    b.post(std::move(e));
  }
  std::vector<Value> coeffs(ns, 1);
  coeffs.insert(coeffs.end(), nw, d.fixed_cost);
  b.inst.objective = sum_objective(Sense::Minimize, concat(c, o), coeffs);
  return std::move(b.inst);
}

std::string instance_name(const ProblemParams& p) {
  std::string s(problem_name(p.problem));
  if (!p.variant.empty()) s += "-" + p.variant;
  switch (p.problem) {
    case Problem::ClockTriplets: return s + "-" + std::to_string(p.r) + "-" + std::to_string(p.n);
    case Problem::CoinsGrid: return s + "-" + std::to_string(p.n) + "-" + std::to_string(p.c);
    case Problem::Molnar: return s + "-" + std::to_string(p.k) + "-" + std::to_string(p.d);
    case Problem::Warehouse:
      if (p.warehouse) return s + "-" + std::to_string(p.warehouse->costs.size()) + "x" + std::to_string(p.warehouse->capacities.size());
      if (p.warehouse_random) return s + "-random-" + std::to_string(p.warehouse_random->seed);
      return s;
    case Problem::BlockedQueens: return s + "-" + std::to_string(p.n) + "-" + std::to_string(p.blocks.size());
    case Problem::Rostering: return s + "-" + std::to_string(p.n == 0 ? 10 : p.n);
    default: return s + "-" + std::to_string(p.n);
  }
}

// --- JSON ------------------------------------------------------------------

using nlohmann::json;

int as_int(const json& j, const char* what) {
  if (!j.is_number_integer()) throw ParamError(std::string("parameter '") + what + "' must be an integer");
  auto v = j.get<std::int64_t>();
  if (v < INT32_MIN || v > INT32_MAX) throw ParamError(std::string("parameter '") + what + "' out of range");
  return static_cast<int>(v);
}

Value as_value(const json& j, const char* what) {
  if (!j.is_number_integer()) throw ParamError(std::string("parameter '") + what + "' must be an integer");
  return j.get<Value>();
}

std::vector<Value> as_values(const json& j, const char* what) {
  if (!j.is_array()) throw ParamError(std::string("parameter '") + what + "' must be an array");
  std::vector<Value> out;
  for (const auto& e : j) out.push_back(as_value(e, what));
  return out;
}

std::vector<std::array<int, 3>> as_triples(const json& j, const char* what) {
  if (!j.is_array()) throw ParamError(std::string("parameter '") + what + "' must be an array");
  std::vector<std::array<int, 3>> out;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 3) throw ParamError(std::string("entries of '") + what + "' must be triples");
    out.push_back({as_int(e[0], what), as_int(e[1], what), as_int(e[2], what)});
  }
  return out;
}

std::vector<std::pair<int, int>> as_pairs(const json& j, const char* what) {
  if (!j.is_array()) throw ParamError(std::string("parameter '") + what + "' must be an array");
  std::vector<std::pair<int, int>> out;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2) throw ParamError(std::string("entries of '") + what + "' must be pairs");
    out.emplace_back(as_int(e[0], what), as_int(e[1], what));
  }
  return out;
}

void read_object(ProblemParams& p, const json& j) {
  static const std::set<std::string> known = {
      "n", "k", "d", "r", "c", "variant", "blocks", "preset", "forbidden", "fixedCost", "warehouseCapacities",
      "storeSupplyCosts", "stores", "warehouses", "costMin", "costMax", "capacityMin", "capacityMax", "seed"};
  for (const auto& [key, _] : j.items()) {
    if (!known.count(key)) throw ParamError("unknown parameter '" + key + "'");
  }
  if (j.contains("n")) p.n = as_int(j["n"], "n");
  if (j.contains("k")) p.k = as_int(j["k"], "k");
  if (j.contains("d")) p.d = as_int(j["d"], "d");
  if (j.contains("r")) p.r = as_int(j["r"], "r");
  if (j.contains("c")) p.c = as_int(j["c"], "c");
  if (j.contains("variant")) {
    if (!j["variant"].is_string()) throw ParamError("parameter 'variant' must be a string");
    p.variant = j["variant"].get<std::string>();
  }
  if (j.contains("blocks")) p.blocks = as_pairs(j["blocks"], "blocks");
  if (j.contains("preset")) p.preset = as_triples(j["preset"], "preset");
  if (j.contains("forbidden")) p.forbidden = as_triples(j["forbidden"], "forbidden");
  if (j.contains("warehouseCapacities") || j.contains("storeSupplyCosts")) {
    WarehouseData d;
    if (!j.contains("warehouseCapacities") || !j.contains("storeSupplyCosts")) {
      throw ParamError("warehouse data needs warehouseCapacities and storeSupplyCosts");
    }
    d.fixed_cost = j.contains("fixedCost") ? as_value(j["fixedCost"], "fixedCost") : 0;
    d.capacities = as_values(j["warehouseCapacities"], "warehouseCapacities");
    const auto& costs = j["storeSupplyCosts"];
    if (!costs.is_array()) throw ParamError("parameter 'storeSupplyCosts' must be an array");
    for (const auto& row : costs) d.costs.push_back(as_values(row, "storeSupplyCosts"));
    p.warehouse = std::move(d);
  } else if (j.contains("stores") || j.contains("warehouses") || j.contains("seed")) {
    WarehouseRandom r;
    if (j.contains("stores")) r.stores = as_int(j["stores"], "stores");
    if (j.contains("warehouses")) r.warehouses = as_int(j["warehouses"], "warehouses");
    if (j.contains("costMin")) r.cost_min = as_value(j["costMin"], "costMin");
    if (j.contains("costMax")) r.cost_max = as_value(j["costMax"], "costMax");
    if (j.contains("capacityMin")) r.capacity_min = as_value(j["capacityMin"], "capacityMin");
    if (j.contains("capacityMax")) r.capacity_max = as_value(j["capacityMax"], "capacityMax");
    if (j.contains("fixedCost")) r.fixed_cost = as_value(j["fixedCost"], "fixedCost");
    if (j.contains("seed")) {
      if (!j["seed"].is_number_unsigned()) throw ParamError("parameter 'seed' must be a non-negative integer");
      r.seed = j["seed"].get<std::uint64_t>();
    }
    p.warehouse_random = r;
  }
}

void read_array(ProblemParams& p, const json& j) {
  auto need = [&](std::size_t size) {
    if (j.size() != size) {
      throw ParamError(std::string(problem_name(p.problem)) + ": expected " + std::to_string(size) +
                       " positional parameters");
    }
  };
  switch (p.problem) {
    case Problem::ClockTriplets:
      need(2);
      p.r = as_int(j[0], "r");
      p.n = as_int(j[1], "n");
      break;
    case Problem::CoinsGrid:
      need(2);
      p.n = as_int(j[0], "n");
      p.c = as_int(j[1], "c");
      break;
    case Problem::Molnar:
      need(2);
      p.k = as_int(j[0], "k");
      p.d = as_int(j[1], "d");
      break;
    case Problem::BlockedQueens:
      need(2);
      p.n = as_int(j[0], "n");
      p.blocks = as_pairs(j[1], "blocks");
      break;
    default:
      need(1);
      p.n = as_int(j[0], "n");
  }
}

}  // namespace

std::string_view problem_name(Problem p) {
  for (const auto& [q, name] : kNames) {
    if (q == p) return name;
  }
  return "unknown";
}

std::optional<Problem> problem_from_name(std::string_view name) {
  auto squash = [](std::string_view s) {
    std::string out;
    for (char ch : s) {
      if (ch == '-' || ch == '_') continue;
      out += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    }
    return out;
  };
  const std::string key = squash(name);
  for (const auto& [q, n] : kNames) {
    if (squash(n) == key) return q;
  }
  return std::nullopt;
}

std::vector<Problem> all_problems() {
  std::vector<Problem> out;
  for (const auto& [q, _] : kNames) out.push_back(q);
  return out;
}

ProblemParams params_from_json(Problem problem, std::string_view text) {
  ProblemParams p;
  p.problem = problem;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParamError(std::string("malformed parameter JSON: ") + e.what());
  }
  if (j.is_number_integer()) {
    p.n = as_int(j, "n");
  } else if (j.is_array()) {
    read_array(p, j);
  } else if (j.is_object()) {
    read_object(p, j);
  } else {
    throw ParamError("parameters must be an integer, an array or an object");
  }
  return p;
}

Instance generate(const ProblemParams& p) {
  Instance inst;
  switch (p.problem) {
    case Problem::Aztec: inst = gen_aztec(p); break;
    case Problem::BlockedQueens: inst = gen_blocked_queens(p); break;
    case Problem::ClockTriplets: inst = gen_clock_triplets(p); break;
    case Problem::CoinsGrid: inst = gen_coins_grid(p); break;
    case Problem::Costas: inst = gen_costas(p); break;
    case Problem::DiamondFree: inst = gen_diamond_free(p); break;
    case Problem::Hadamard: inst = gen_hadamard(p); break;
    case Problem::KnightTour: inst = gen_knight_tour(p); break;
    case Problem::Molnar: inst = gen_molnar(p); break;
    case Problem::NumberPartitioning: inst = gen_number_partitioning(p); break;
    case Problem::Ortholatin: inst = gen_ortholatin(p); break;
    case Problem::Quasigroup: inst = gen_quasigroup(p); break;
    case Problem::Rostering: inst = gen_rostering(p); break;
    case Problem::SportsScheduling: inst = gen_sports_scheduling(p); break;
    case Problem::Superpermutation: inst = gen_superpermutation(p); break;
    case Problem::Triangular: inst = gen_triangular(p); break;
    case Problem::WarOrPeace: inst = gen_war_or_peace(p); break;
    case Problem::Warehouse: inst = gen_warehouse(p); break;
  }
  inst.name = instance_name(p);
  return inst;
}

std::vector<ProblemParams> sample_params() {
  std::vector<ProblemParams> out;
  auto add = [&](Problem pr, std::string variant, auto fill) {
    ProblemParams p;
    p.problem = pr;
    p.variant = std::move(variant);
    fill(p);
    out.push_back(std::move(p));
  };
  add(Problem::Aztec, "", [](auto& p) { p.n = 2; });
  add(Problem::BlockedQueens, "", [](auto& p) {
    p.n = 6;
    p.blocks = {{0, 2}, {3, 4}, {5, 1}};
  });
  add(Problem::ClockTriplets, "", [](auto& p) {
    p.r = 3;
    p.n = 8;
  });
  add(Problem::CoinsGrid, "", [](auto& p) {
    p.n = 4;
    p.c = 2;
  });
  add(Problem::Costas, "", [](auto& p) { p.n = 5; });
  add(Problem::DiamondFree, "", [](auto& p) { p.n = 8; });
  add(Problem::Hadamard, "", [](auto& p) { p.n = 5; });
  add(Problem::KnightTour, "", [](auto& p) { p.n = 6; });
  add(Problem::Molnar, "", [](auto& p) {
    p.k = 2;
    p.d = 4;
  });
  add(Problem::NumberPartitioning, "", [](auto& p) { p.n = 8; });
  add(Problem::Ortholatin, "", [](auto& p) { p.n = 3; });
  add(Problem::Quasigroup, "base-v3", [](auto& p) { p.n = 4; });
  add(Problem::Quasigroup, "base-v5", [](auto& p) { p.n = 5; });
  add(Problem::Quasigroup, "base-v6", [](auto& p) { p.n = 4; });
  add(Problem::Rostering, "", [](auto& p) {
    p.n = 5;
    p.preset = {{0, 0, 1}, {1, 0, 2}};
  });
  add(Problem::SportsScheduling, "", [](auto& p) { p.n = 6; });
  add(Problem::SportsScheduling, "dummy", [](auto& p) { p.n = 6; });
  add(Problem::Superpermutation, "", [](auto& p) { p.n = 3; });
  add(Problem::Superpermutation, "table", [](auto& p) { p.n = 3; });
  add(Problem::Triangular, "", [](auto& p) { p.n = 4; });
  add(Problem::WarOrPeace, "", [](auto& p) { p.n = 4; });
  add(Problem::WarOrPeace, "or", [](auto& p) { p.n = 4; });
  add(Problem::Warehouse, "", [](auto& p) {
    WarehouseRandom r;
    r.stores = 4;
    r.warehouses = 3;
    r.cost_max = 20;
    r.capacity_min = 2;
    r.capacity_max = 3;
    r.seed = 7;
    p.warehouse_random = r;
  });
  return out;
}

// ---------------------------------------------------------------------------

bool aztec_valid(int n, int i, int j) {
  if (i < 0 || i >= n * 2 || j < 0 || j >= n * 2) return false;
  if (i < n - 1 && (j < n - 1 - i || j > n + i)) return false;
  if (i > n && (j < i - n || j > 3 * n - i - 1)) return false;
  return true;
}

AztecCells aztec_cells(int n) {
  AztecCells out;
  for (int i = 0; i < 2 * n; ++i) {
    for (int j = 0; j < 2 * n; ++j) {
      if (!aztec_valid(n, i, j)) continue;
      out.valid.emplace_back(i, j);
      const bool inner = aztec_valid(n, i, j - 1) && aztec_valid(n, i, j + 1) && aztec_valid(n, i - 1, j) &&
                         aztec_valid(n, i + 1, j);
      (inner ? out.inner : out.border).emplace_back(i, j);
    }
  }
  return out;
}

Automaton rostering_automaton(int n) {
  auto q = [](int phase, int i) { return "q" + std::to_string(phase) + "_" + std::to_string(i); };
  Automaton a;
  a.start = "q0";
  auto& t = a.transitions;
  t.push_back({"q0", 0, q(2, 0)});
  for (int i = 1; i < n; ++i) t.push_back({q(2, 0), i, q(3, i)});
  for (int i = 1; i < n; ++i) t.push_back({"q0", i, q(1, i)});
  for (int i = 1; i < n; ++i) {
    for (int j : {i - 1, i + 1}) {
      if (j >= 1 && j < n) t.push_back({q(1, i), j, q(1, j)});
    }
  }
  for (int i = 1; i < n; ++i) t.push_back({q(1, i), 0, q(2, i)});
  for (int i = 1; i < n; ++i) {
    for (int j = 1; j < n; ++j) {
      if (std::abs(i - j) != 1) t.push_back({q(2, i), j, q(3, j)});
    }
  }
  for (int i = 1; i < n; ++i) {
    for (int j : {i - 1, i + 1}) {
      if (j >= 1 && j < n) t.push_back({q(3, i), j, q(3, j)});
    }
  }
  for (int i = 1; i < n; ++i) a.finals.push_back(q(2, i));
  for (int i = 1; i < n; ++i) a.finals.push_back(q(3, i));
  return a;
}

std::vector<Monomial> molnar_determinant_terms(int k) {
  if (k < 2) throw ParamError("molnar: determinant order must be at least 2");
  // expansion over the columns still available, row by row
  std::vector<int> cols(k);
  std::iota(cols.begin(), cols.end(), 0);
  auto rec = [&](auto&& self, int row, const std::vector<int>& left) -> std::vector<Monomial> {
    if (left.size() == 2) {
      return {Monomial{1, {{row, left[0]}, {row + 1, left[1]}}},
              Monomial{-1, {{row, left[1]}, {row + 1, left[0]}}}};
    }
    std::vector<Monomial> out;
    for (std::size_t i = 0; i < left.size(); ++i) {
      std::vector<int> rest;
      for (std::size_t c = 0; c < left.size(); ++c) {
        if (c != i) rest.push_back(left[c]);
      }
      for (auto sub : self(self, row + 1, rest)) {
        Monomial m;
        m.sign = (i % 2 == 0 ? 1 : -1) * sub.sign;
        m.cells.emplace_back(row, left[i]);
        m.cells.insert(m.cells.end(), sub.cells.begin(), sub.cells.end());
        out.push_back(std::move(m));
      }
    }
    return out;
  };
  return rec(rec, 0, cols);
}

int sports_match_number(int t1, int t2, int n_teams) {
  const int matches = (n_teams - 1) * n_teams / 2;
  return matches - ((n_teams - t1) * (n_teams - t1 - 1)) / 2 + (t2 - t1 - 1);
}

std::vector<Tuple> superpermutation_table(int n) {
  if (n < 2 || n > 5) throw ParamError("superpermutation: requires 2 <= n <= 5");
  std::vector<Tuple> rows;
  const auto perms = permutations_of(n);
  for (std::size_t i = 0; i < perms.size(); ++i) {
    Tuple t{static_cast<Value>(i)};
    t.insert(t.end(), perms[i].begin(), perms[i].end());
    rows.push_back(std::move(t));
  }
  for (int v = 0; v < n; ++v) {
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        Tuple t{-1};
        for (int k = 0; k < n; ++k) t.push_back(k == i || k == j ? v : kStar);
        rows.push_back(std::move(t));
      }
    }
  }
  return rows;
}

}  // namespace xcsp
