#ifndef XCSP_MODEL_HPP
#define XCSP_MODEL_HPP

#include <compare>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "xcsp/expr.hpp"

namespace xcsp {

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Wildcard marker inside short (starred) extension tuples.
inline constexpr Value kStar = std::numeric_limits<Value>::min();

using Tuple = std::vector<Value>;

/// Finite ordered set of integers; never empty.
class Domain {
 public:
  /// Sorts and deduplicates; throws ModelError when `values` is empty.
  explicit Domain(std::vector<Value> values);
  static Domain range(Value lo, Value hi);

  std::span<const Value> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  Value min() const { return values_.front(); }
  Value max() const { return values_.back(); }
  bool contains(Value v) const;
  bool is_interval() const { return max() - min() + 1 == static_cast<Value>(size()); }

  bool operator==(const Domain&) const = default;

 private:
  std::vector<Value> values_;
};

struct Variable {
  std::string id;
  Domain dom;
  bool operator==(const Variable&) const = default;
};

struct VarRef {
  VarId id = -1;
  auto operator<=>(const VarRef&) const = default;
};

struct Interval {
  Value lo = 0;
  Value hi = 0;
  bool operator==(const Interval&) const = default;
};

enum class CmpOp { Lt, Le, Ge, Gt, Eq, Ne, In, NotIn };

const char* cmp_name(CmpOp op);
bool cmp_from_name(std::string_view name, CmpOp& out);

/// Right-hand side of a global constraint: `(op, rhs)`.
struct Condition {
  using Rhs = std::variant<Value, VarRef, Interval, std::vector<Value>>;
  CmpOp op = CmpOp::Eq;
  Rhs rhs = Value{0};

  static Condition cmp(CmpOp op, Value k) { return {op, k}; }
  static Condition cmp(CmpOp op, VarRef x) { return {op, x}; }
  static Condition in(Value lo, Value hi) { return {CmpOp::In, Interval{lo, hi}}; }

  bool operator==(const Condition&) const = default;
};

struct Transition {
  std::string from;
  Value value = 0;
  std::string to;
  bool operator==(const Transition&) const = default;
};

/// Deterministic finite automaton over integer symbols.
struct Automaton {
  std::string start;
  std::vector<std::string> finals;
  std::vector<Transition> transitions;
  bool operator==(const Automaton&) const = default;
};

// ---------------------------------------------------------------------------
// The 21 constraint forms of XCSP3-core
// ---------------------------------------------------------------------------

struct Extension {
  std::vector<VarId> scope;
  std::vector<Tuple> tuples;
  bool positive = true;
  /// True iff some tuple holds the wildcard.
  bool is_short() const;
  bool operator==(const Extension&) const = default;
};

struct Intension {
  Expr expr;
  bool operator==(const Intension&) const = default;
};

struct Regular {
  std::vector<VarId> scope;
  Automaton automaton;
  bool operator==(const Regular&) const = default;
};

/// Layered diagram; the root is the only state without incoming arcs and
/// the terminal the only one without outgoing arcs.
struct Mdd {
  std::vector<VarId> scope;
  std::vector<Transition> transitions;
  bool operator==(const Mdd&) const = default;
};

struct AllDifferent {
  std::vector<Expr> list;  // variables or expressions over variables
  std::vector<Value> except;
  bool operator==(const AllDifferent&) const = default;
};

struct AllEqual {
  std::vector<VarId> list;
  bool operator==(const AllEqual&) const = default;
};

/// list[i] + lengths[i] op list[i+1]; op in {Lt, Le, Ge, Gt}.
struct Ordered {
  std::vector<VarId> list;
  std::vector<Value> lengths;  // empty or list.size() - 1 entries
  CmpOp op = CmpOp::Le;
  bool operator==(const Ordered&) const = default;
};

/// Chain of lexicographic comparisons between consecutive lists. In matrix
/// form the lists are rows and the chain also holds between columns.
struct Lex {
  std::vector<std::vector<VarId>> lists;
  CmpOp op = CmpOp::Le;
  bool matrix = false;
  bool operator==(const Lex&) const = default;
};

/// Weighted sum; each term is a variable or the product of two variables.
struct Sum {
  std::vector<Expr> terms;
  std::vector<Value> coeffs;  // empty means all ones
  Condition condition;
  bool operator==(const Sum&) const = default;
};

struct Count {
  std::vector<VarId> list;
  std::vector<Value> values;
  Condition condition;
  bool operator==(const Count&) const = default;
};

struct NValues {
  std::vector<VarId> list;
  Condition condition;
  bool operator==(const NValues&) const = default;
};

struct Cardinality {
  using Occurs = std::variant<Value, VarRef, Interval>;
  std::vector<VarId> list;
  std::vector<Value> values;
  std::vector<Occurs> occurs;
  bool closed = false;
  bool operator==(const Cardinality&) const = default;
};

/// maximum(list) or minimum(list) compared through a condition.
struct Extremum {
  bool is_max = true;
  std::vector<VarId> list;
  Condition condition;
  bool operator==(const Extremum&) const = default;
};

/// list[index - start_index] = value, or matrix[row][col] = value when
/// `cols` > 0 (the list then stores the matrix row-major).
struct Element {
  std::vector<Expr> list;  // variables or constants
  std::size_t cols = 0;
  Value start_index = 0;
  VarId index = -1;
  std::optional<VarId> col_index;
  Expr value;  // variable or constant
  bool operator==(const Element&) const = default;
};

/// list1[i] = j <=> list2[j] = i; a single list channels onto itself.
struct Channel {
  std::vector<VarId> list1;
  std::vector<VarId> list2;
  bool operator==(const Channel&) const = default;
};

/// Boxes (one origin per dimension) that must not overlap pairwise.
struct NoOverlap {
  std::vector<std::vector<VarId>> origins;
  std::vector<std::vector<Expr>> lengths;  // constants or variables
  bool zero_ignored = true;
  bool operator==(const NoOverlap&) const = default;
};

struct Cumulative {
  std::vector<VarId> origins;
  std::vector<Expr> lengths;  // constants or variables
  std::vector<Expr> heights;  // constants or variables
  Condition condition;        // applied to the load at every time point
  bool operator==(const Cumulative&) const = default;
};

/// Successor representation; self-loops mark nodes outside the circuit.
struct Circuit {
  std::vector<VarId> list;
  bool operator==(const Circuit&) const = default;
};

struct Instantiate {
  std::vector<VarId> list;
  std::vector<Value> values;
  bool operator==(const Instantiate&) const = default;
};

/// A template over %0..%(arity-1) slid along `list` by `offset`.
struct Slide {
  std::vector<VarId> list;
  int offset = 1;
  bool circular = false;
  int arity = 2;
  std::optional<Expr> condition;  // intension template; else extension
  std::vector<Tuple> tuples;
  bool positive = true;
  bool operator==(const Slide&) const = default;
};

using ConstraintKind =
    std::variant<Extension, Intension, Regular, Mdd, AllDifferent, AllEqual, Ordered, Lex, Sum,
                 Count, NValues, Cardinality, Extremum, Element, Channel, NoOverlap, Cumulative,
                 Circuit, Instantiate, Slide>;

struct Constraint {
  ConstraintKind kind;
  /// Group label such as "symmetry-breaking"; empty when untagged.
  std::string tag;
  bool operator==(const Constraint&) const = default;
};

/// XCSP3 element name of the constraint ("allDifferent", "maximum", ...).
std::string_view kind_name(const Constraint& c);

/// Sorted, duplicate-free list of variables the constraint mentions.
std::vector<VarId> scope_of(const Constraint& c);

enum class Sense { Minimize, Maximize };

enum class ObjectiveKind { Expression, Sum, Maximum, Minimum, NValues };

struct Objective {
  Sense sense = Sense::Minimize;
  ObjectiveKind kind = ObjectiveKind::Expression;
  std::vector<Expr> terms;  // one term for Expression
  std::vector<Value> coeffs;
  bool operator==(const Objective&) const = default;
};

struct Instance {
  std::string name;
  std::vector<Variable> variables;
  std::vector<Constraint> constraints;
  std::optional<Objective> objective;

  VarId add_variable(std::string id, Domain dom);
  void post(ConstraintKind kind, std::string tag = {});
  /// Linear lookup by identifier.
  std::optional<VarId> find(std::string_view id) const;
  std::size_t num_vars() const { return variables.size(); }

  bool operator==(const Instance&) const = default;
};

/// Total assignment in declaration order of the instance variables.
using Assignment = std::vector<Value>;

/// Named assignment, as exchanged in `<instantiation>` documents.
struct Instantiation {
  std::vector<std::string> ids;
  std::vector<Value> values;
  bool operator==(const Instantiation&) const = default;
};

/// Maps names onto instance order; throws ModelError on unknown or missing
/// variables.
Assignment resolve(const Instance& inst, const Instantiation& named);
Instantiation name_assignment(const Instance& inst, std::span<const Value> values);

struct ValidationError {
  int constraint = -1;  // -1 for variable-level problems
  std::string reason;
};

/// Structural checks; returns every problem found.
std::vector<ValidationError> validate_instance(const Instance& inst);

/// True if `id` is an acceptable variable identifier (letters, digits,
/// underscore, array brackets; starts with a letter).
bool is_valid_identifier(std::string_view id);

/// Refusal thresholds used while unfolding meta constraints.
inline constexpr std::size_t kMaxMddPaths = 1'000'000;

/// Rewrites slide, channel and mdd into equivalent plain constraints.
/// Throws ModelError when an mdd has more than kMaxMddPaths paths.
Instance decompose_meta(const Instance& inst);
/// Same rewrite for a single constraint; other kinds come back unchanged.
std::vector<Constraint> decompose_constraint(const Constraint& c);

}  // namespace xcsp

#endif  // XCSP_MODEL_HPP
