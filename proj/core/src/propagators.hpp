#ifndef XCSP_SRC_PROPAGATORS_HPP
#define XCSP_SRC_PROPAGATORS_HPP

#include <limits>
#include <memory>
#include <vector>

#include "xcsp/engine.hpp"

namespace xcsp::detail {

using i128 = __int128;

inline i128 clamp_lo(i128 v) {
  constexpr i128 lo = std::numeric_limits<Value>::min();
  return v < lo ? lo : v;
}
inline i128 clamp_hi(i128 v) {
  constexpr i128 hi = std::numeric_limits<Value>::max();
  return v > hi ? hi : v;
}
inline Value to_value(i128 v) { return static_cast<Value>(clamp_hi(clamp_lo(v))); }

// floor(a / b) and ceil(a / b) for b != 0
i128 floor_div(i128 a, i128 b);
i128 ceil_div(i128 a, i128 b);

/// Expression compiled against local slots; evaluation mirrors
/// xcsp::evaluate (same short-circuits) but reports errors as `false`.
class Program {
 public:
  Program(const Expr& e, const std::vector<VarId>& slots);
  bool eval(const Value* env, Value& out) const { return eval_node(0, env, out); }

 private:
  struct Node {
    Op op;
    Value value;
    int first;
    int count;
    const std::vector<Value>* set;
  };
  int build(const Expr& e, const std::vector<VarId>& slots);
  bool eval_node(int n, const Value* env, Value& out) const;

  std::vector<Node> nodes_;
  std::vector<int> kids_;
  std::vector<std::vector<Value>> sets_;
};

/// Interval of lhs values the condition can accept given the current
/// domain of its right-hand side (the whole line for ne/notin).
struct Range {
  i128 lo;
  i128 hi;
};
Range allowed(const Condition& c, const DomainStore& s);
/// Narrows a variable right-hand side so that some lhs in [lo, hi] fits.
bool prune_rhs(const Condition& c, DomainStore& s, i128 lo, i128 hi);
/// Exact test; a variable rhs must be fixed.
bool holds(const Condition& c, i128 lhs, const DomainStore& s);
bool rhs_fixed(const Condition& c, const DomainStore& s);
std::vector<VarId> rhs_vars(const Condition& c);

using PropPtr = std::unique_ptr<Propagator>;

PropPtr make_table(std::vector<VarId> scope, const std::vector<Tuple>& tuples, bool positive,
                   const DomainStore& s);
PropPtr make_intension(const Expr& e);
PropPtr make_alldifferent(std::vector<VarId> list, std::vector<Value> except);
PropPtr make_allequal(std::vector<VarId> list);
PropPtr make_linear(std::vector<VarId> vars, std::vector<Value> coeffs, Condition cond);
PropPtr make_count(std::vector<VarId> list, std::vector<Value> values, Condition cond);
PropPtr make_cardinality(std::vector<VarId> list, std::vector<Value> values,
                         std::vector<Cardinality::Occurs> occurs, bool closed);
PropPtr make_nvalues(std::vector<VarId> list, Condition cond);
/// Entries and value are variables or constants.
PropPtr make_element(std::vector<Expr> list, std::size_t cols, Value start, VarId index,
                     std::optional<VarId> col_index, Expr value);
PropPtr make_extremum(bool is_max, std::vector<VarId> list, Condition cond);
PropPtr make_ordered(std::vector<VarId> list, std::vector<Value> lengths, CmpOp op);
/// x <=_lex y (strict when `strict`).
PropPtr make_lex(std::vector<VarId> x, std::vector<VarId> y, bool strict);
PropPtr make_regular(std::vector<VarId> scope, const Automaton& a);
PropPtr make_circuit(std::vector<VarId> list);
/// Lengths and heights are variables or constants.
PropPtr make_cumulative(std::vector<VarId> origins, std::vector<Expr> lengths,
                        std::vector<Expr> heights, Condition cond);
PropPtr make_nooverlap(std::vector<std::vector<VarId>> origins,
                       std::vector<std::vector<Expr>> lengths, bool zero_ignored);
PropPtr make_instantiate(std::vector<VarId> list, std::vector<Value> values);

/// Bounds of a variable-or-constant term.
inline Value term_min(const Expr& e, const DomainStore& s) {
  return e.is_var() ? s.min(e.var_id()) : e.value;
}
inline Value term_max(const Expr& e, const DomainStore& s) {
  return e.is_var() ? s.max(e.var_id()) : e.value;
}
inline bool term_fixed(const Expr& e, const DomainStore& s) {
  return !e.is_var() || s.fixed(e.var_id());
}

}  // namespace xcsp::detail

#endif  // XCSP_SRC_PROPAGATORS_HPP
