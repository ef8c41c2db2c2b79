#ifndef XCSP_EXPR_HPP
#define XCSP_EXPR_HPP

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace xcsp {

using Value = std::int64_t;
using VarId = std::int32_t;

/// Raised when an expression cannot be evaluated (division by zero,
/// overflow, unbound variable, unsubstituted parameter).
class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Op : std::uint8_t {
  Const,
  Var,
  Param,  // %i placeholder inside slide/group templates
  Neg,
  Abs,
  Add,
  Sub,
  Mul,
  Div,
  Mod,
  Min,
  Max,
  Dist,
  Eq,
  Ne,
  Lt,
  Le,
  Gt,
  Ge,
  And,
  Or,
  Not,
  Xor,
  Iff,
  Imp,
  If,
  In,
};

/// Functional name used by the XCSP3 intension syntax ("add", "eq", ...).
const char* op_name(Op op);

/// Inverse of op_name; returns false for unknown names.
bool op_from_name(std::string_view name, Op& out);

/// True for operators whose result is always 0 or 1.
bool is_boolean(Op op);

/// Expression tree over integer variables.
///
/// `value` holds the constant for Const, the variable id for Var and the
/// placeholder index for Param. `set` is the right-hand side of In.
struct Expr {
  Op op = Op::Const;
  Value value = 0;
  std::vector<Expr> args;
  std::vector<Value> set;

  static Expr constant(Value v);
  static Expr var(VarId id);
  static Expr param(int index);
  static Expr make(Op op, std::vector<Expr> args);
  static Expr in_set(Expr e, std::vector<Value> values);

  bool is_const() const { return op == Op::Const; }
  bool is_var() const { return op == Op::Var; }
  VarId var_id() const { return static_cast<VarId>(value); }

  bool operator==(const Expr&) const = default;
};

/// Allowed argument counts for an operator: {min, max}; max < 0 means n-ary.
std::pair<int, int> arity_bounds(Op op);

/// Evaluates `e` with variable i bound to env[i]. Booleans are 0/1,
/// division truncates toward zero, modulo takes the dividend's sign and
/// every arithmetic step is overflow checked.
Value evaluate(const Expr& e, std::span<const Value> env);

/// Appends every variable id occurring in `e` (with repetitions).
void collect_vars(const Expr& e, std::vector<VarId>& out);

/// Replaces Param(i) nodes with Var(args[i]).
Expr substitute_params(const Expr& e, std::span<const VarId> args);

/// Largest Param index + 1 occurring in `e` (0 when none).
int param_count(const Expr& e);

// Builders used by the generators and tests.
namespace ex {

inline Expr cst(Value v) { return Expr::constant(v); }
inline Expr var(VarId id) { return Expr::var(id); }
inline Expr neg(Expr a) { return Expr::make(Op::Neg, {std::move(a)}); }
inline Expr abs(Expr a) { return Expr::make(Op::Abs, {std::move(a)}); }
inline Expr not_(Expr a) { return Expr::make(Op::Not, {std::move(a)}); }
inline Expr add(std::vector<Expr> a) { return Expr::make(Op::Add, std::move(a)); }
inline Expr mul(std::vector<Expr> a) { return Expr::make(Op::Mul, std::move(a)); }
inline Expr and_(std::vector<Expr> a) { return Expr::make(Op::And, std::move(a)); }
inline Expr or_(std::vector<Expr> a) { return Expr::make(Op::Or, std::move(a)); }
inline Expr bin(Op op, Expr a, Expr b) { return Expr::make(op, {std::move(a), std::move(b)}); }
inline Expr add(Expr a, Expr b) { return bin(Op::Add, std::move(a), std::move(b)); }
inline Expr sub(Expr a, Expr b) { return bin(Op::Sub, std::move(a), std::move(b)); }
inline Expr mul(Expr a, Expr b) { return bin(Op::Mul, std::move(a), std::move(b)); }
inline Expr dist(Expr a, Expr b) { return bin(Op::Dist, std::move(a), std::move(b)); }
inline Expr eq(Expr a, Expr b) { return bin(Op::Eq, std::move(a), std::move(b)); }
inline Expr ne(Expr a, Expr b) { return bin(Op::Ne, std::move(a), std::move(b)); }
inline Expr lt(Expr a, Expr b) { return bin(Op::Lt, std::move(a), std::move(b)); }
inline Expr le(Expr a, Expr b) { return bin(Op::Le, std::move(a), std::move(b)); }
inline Expr gt(Expr a, Expr b) { return bin(Op::Gt, std::move(a), std::move(b)); }
inline Expr ge(Expr a, Expr b) { return bin(Op::Ge, std::move(a), std::move(b)); }
inline Expr or_(Expr a, Expr b) { return bin(Op::Or, std::move(a), std::move(b)); }
inline Expr and_(Expr a, Expr b) { return bin(Op::And, std::move(a), std::move(b)); }

}  // namespace ex

}  // namespace xcsp

#endif  // XCSP_EXPR_HPP
