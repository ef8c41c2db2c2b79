#include "xcsp/expr.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <string_view>

namespace xcsp {

namespace {

struct OpInfo {
  Op op;
  const char* name;
  int min_args;
  int max_args;  // -1: unbounded
  bool boolean;
};

constexpr std::array<OpInfo, 27> kOps = {{
    {Op::Const, "const", 0, 0, false},
    {Op::Var, "var", 0, 0, false},
    {Op::Param, "param", 0, 0, false},
    {Op::Neg, "neg", 1, 1, false},
    {Op::Abs, "abs", 1, 1, false},
    {Op::Add, "add", 2, -1, false},
    {Op::Sub, "sub", 2, 2, false},
    {Op::Mul, "mul", 2, -1, false},
    {Op::Div, "div", 2, 2, false},
    {Op::Mod, "mod", 2, 2, false},
    {Op::Min, "min", 2, -1, false},
    {Op::Max, "max", 2, -1, false},
    {Op::Dist, "dist", 2, 2, false},
    {Op::Eq, "eq", 2, -1, true},
    {Op::Ne, "ne", 2, 2, true},
    {Op::Lt, "lt", 2, 2, true},
    {Op::Le, "le", 2, 2, true},
    {Op::Gt, "gt", 2, 2, true},
    {Op::Ge, "ge", 2, 2, true},
    {Op::And, "and", 2, -1, true},
    {Op::Or, "or", 2, -1, true},
    {Op::Not, "not", 1, 1, true},
    {Op::Xor, "xor", 2, -1, true},
    {Op::Iff, "iff", 2, -1, true},
    {Op::Imp, "imp", 2, 2, true},
    {Op::If, "if", 3, 3, false},
    {Op::In, "in", 1, 1, true},
}};

const OpInfo& info(Op op) { return kOps[static_cast<std::size_t>(op)]; }

Value checked_add(Value a, Value b) {
  Value r;
  if (__builtin_add_overflow(a, b, &r)) throw EvalError("integer overflow in add");
  return r;
}

Value checked_sub(Value a, Value b) {
  Value r;
  if (__builtin_sub_overflow(a, b, &r)) throw EvalError("integer overflow in sub");
  return r;
}

Value checked_mul(Value a, Value b) {
  Value r;
  if (__builtin_mul_overflow(a, b, &r)) throw EvalError("integer overflow in mul");
  return r;
}

Value checked_neg(Value a) {
  if (a == std::numeric_limits<Value>::min()) throw EvalError("integer overflow in neg");
  return -a;
}

Value truth(bool b) { return b ? 1 : 0; }

}  // namespace

const char* op_name(Op op) { return info(op).name; }

bool op_from_name(std::string_view name, Op& out) {
  for (const auto& i : kOps) {
    if (i.op == Op::Const || i.op == Op::Var || i.op == Op::Param) continue;
    if (name == i.name) {
      out = i.op;
      return true;
    }
  }
  return false;
}

bool is_boolean(Op op) { return info(op).boolean; }

std::pair<int, int> arity_bounds(Op op) { return {info(op).min_args, info(op).max_args}; }

Expr Expr::constant(Value v) {
  Expr e;
  e.op = Op::Const;
  e.value = v;
  return e;
}

Expr Expr::var(VarId id) {
  Expr e;
  e.op = Op::Var;
  e.value = id;
  return e;
}

Expr Expr::param(int index) {
  Expr e;
  e.op = Op::Param;
  e.value = index;
  return e;
}

Expr Expr::make(Op op, std::vector<Expr> args) {
  Expr e;
  e.op = op;
  e.args = std::move(args);
  return e;
}

Expr Expr::in_set(Expr e, std::vector<Value> values) {
  Expr r;
  r.op = Op::In;
  r.args.push_back(std::move(e));
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  r.set = std::move(values);
  return r;
}

Value evaluate(const Expr& e, std::span<const Value> env) {
  const auto& a = e.args;
  auto arg = [&](std::size_t i) { return evaluate(a[i], env); };
  switch (e.op) {
    case Op::Const:
      return e.value;
    case Op::Var:
      if (e.value < 0 || static_cast<std::size_t>(e.value) >= env.size()) {
        throw EvalError("unbound variable #" + std::to_string(e.value));
      }
      return env[static_cast<std::size_t>(e.value)];
    case Op::Param:
      throw EvalError("unsubstituted parameter %" + std::to_string(e.value));
    case Op::Neg:
      return checked_neg(arg(0));
    case Op::Abs: {
      Value v = arg(0);
      return v < 0 ? checked_neg(v) : v;
    }
    case Op::Add: {
      Value r = 0;
      for (std::size_t i = 0; i < a.size(); ++i) r = checked_add(r, arg(i));
      return r;
    }
    case Op::Sub:
      return checked_sub(arg(0), arg(1));
    case Op::Mul: {
      Value r = 1;
      for (std::size_t i = 0; i < a.size(); ++i) r = checked_mul(r, arg(i));
      return r;
    }
    case Op::Div:
    case Op::Mod: {
      Value x = arg(0);
      Value y = arg(1);
      if (y == 0) throw EvalError(e.op == Op::Div ? "division by zero" : "modulo by zero");
      if (x == std::numeric_limits<Value>::min() && y == -1) {
        if (e.op == Op::Mod) return 0;
        throw EvalError("integer overflow in div");
      }
      return e.op == Op::Div ? x / y : x % y;
    }
    case Op::Min: {
      Value r = arg(0);
      for (std::size_t i = 1; i < a.size(); ++i) r = std::min(r, arg(i));
      return r;
    }
    case Op::Max: {
      Value r = arg(0);
      for (std::size_t i = 1; i < a.size(); ++i) r = std::max(r, arg(i));
      return r;
    }
    case Op::Dist: {
      Value d = checked_sub(arg(0), arg(1));
      return d < 0 ? checked_neg(d) : d;
    }
    case Op::Eq: {
      Value first = arg(0);
      for (std::size_t i = 1; i < a.size(); ++i) {
        if (arg(i) != first) return 0;
      }
      return 1;
    }
    case Op::Ne:
      return truth(arg(0) != arg(1));
    case Op::Lt:
      return truth(arg(0) < arg(1));
    case Op::Le:
      return truth(arg(0) <= arg(1));
    case Op::Gt:
      return truth(arg(0) > arg(1));
    case Op::Ge:
      return truth(arg(0) >= arg(1));
    case Op::And:
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (arg(i) == 0) return 0;
      }
      return 1;
    case Op::Or:
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (arg(i) != 0) return 1;
      }
      return 0;
    case Op::Not:
      return truth(arg(0) == 0);
    case Op::Xor: {
      bool r = false;
      for (std::size_t i = 0; i < a.size(); ++i) r ^= (arg(i) != 0);
      return truth(r);
    }
    case Op::Iff: {
      bool first = arg(0) != 0;
      for (std::size_t i = 1; i < a.size(); ++i) {
        if ((arg(i) != 0) != first) return 0;
      }
      return 1;
    }
    case Op::Imp:
      return truth(arg(0) == 0 || arg(1) != 0);
    case Op::If:
      return arg(0) != 0 ? arg(1) : arg(2);
    case Op::In:
      return truth(std::binary_search(e.set.begin(), e.set.end(), arg(0)));
  }
  throw EvalError("unknown operator");
}

void collect_vars(const Expr& e, std::vector<VarId>& out) {
  if (e.op == Op::Var) {
    out.push_back(e.var_id());
    return;
  }
  for (const auto& c : e.args) collect_vars(c, out);
}

Expr substitute_params(const Expr& e, std::span<const VarId> args) {
  if (e.op == Op::Param) {
    if (e.value < 0 || static_cast<std::size_t>(e.value) >= args.size()) {
      throw EvalError("parameter %" + std::to_string(e.value) + " has no argument");
    }
    return Expr::var(args[static_cast<std::size_t>(e.value)]);
  }
  Expr r = e;
  for (auto& c : r.args) c = substitute_params(c, args);
  return r;
}

int param_count(const Expr& e) {
  int n = e.op == Op::Param ? static_cast<int>(e.value) + 1 : 0;
  for (const auto& c : e.args) n = std::max(n, param_count(c));
  return n;
}

}  // namespace xcsp
