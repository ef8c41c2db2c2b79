#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "xcsp/model.hpp"

namespace xcsp {

Domain::Domain(std::vector<Value> values) : values_(std::move(values)) {
  if (values_.empty()) throw ModelError("empty domain");
  std::sort(values_.begin(), values_.end());
  values_.erase(std::unique(values_.begin(), values_.end()), values_.end());
}

Domain Domain::range(Value lo, Value hi) {
  if (lo > hi) throw ModelError("empty domain range");
  std::vector<Value> v;
  v.reserve(static_cast<std::size_t>(hi - lo + 1));
  for (Value x = lo; x <= hi; ++x) v.push_back(x);
  return Domain(std::move(v));
}

bool Domain::contains(Value v) const {
  return std::binary_search(values_.begin(), values_.end(), v);
}

namespace {

constexpr std::pair<CmpOp, const char*> kCmpNames[] = {
    {CmpOp::Lt, "lt"}, {CmpOp::Le, "le"}, {CmpOp::Ge, "ge"}, {CmpOp::Gt, "gt"},
    {CmpOp::Eq, "eq"}, {CmpOp::Ne, "ne"}, {CmpOp::In, "in"}, {CmpOp::NotIn, "notin"},
};

}  // namespace

const char* cmp_name(CmpOp op) {
  for (const auto& [o, n] : kCmpNames) {
    if (o == op) return n;
  }
  return "?";
}

bool cmp_from_name(std::string_view name, CmpOp& out) {
  for (const auto& [o, n] : kCmpNames) {
    if (name == n) {
      out = o;
      return true;
    }
  }
  return false;
}

bool Extension::is_short() const {
  for (const auto& t : tuples) {
    if (std::find(t.begin(), t.end(), kStar) != t.end()) return true;
  }
  return false;
}

std::string_view kind_name(const Constraint& c) {
  static constexpr std::string_view names[] = {
      "extension", "intension", "regular",     "mdd",       "allDifferent",
      "allEqual",  "ordered",   "lex",         "sum",       "count",
      "nValues",   "cardinality", "extremum",  "element",   "channel",
      "noOverlap", "cumulative", "circuit",    "instantiation", "slide"};
  if (const auto* m = std::get_if<Extremum>(&c.kind)) return m->is_max ? "maximum" : "minimum";
  return names[c.kind.index()];
}

namespace {

void add_expr_vars(const Expr& e, std::vector<VarId>& out) { collect_vars(e, out); }

void add_condition_vars(const Condition& c, std::vector<VarId>& out) {
  if (const auto* r = std::get_if<VarRef>(&c.rhs)) out.push_back(r->id);
}

}  // namespace

std::vector<VarId> scope_of(const Constraint& c) {
  std::vector<VarId> out;
  auto append = [&](const std::vector<VarId>& v) { out.insert(out.end(), v.begin(), v.end()); };
  std::visit(
      [&](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, Extension> || std::is_same_v<T, Regular> ||
                      std::is_same_v<T, Mdd>) {
          append(k.scope);
        } else if constexpr (std::is_same_v<T, Intension>) {
          add_expr_vars(k.expr, out);
        } else if constexpr (std::is_same_v<T, AllDifferent>) {
          for (const auto& e : k.list) add_expr_vars(e, out);
        } else if constexpr (std::is_same_v<T, AllEqual> || std::is_same_v<T, Ordered> ||
                             std::is_same_v<T, Circuit> || std::is_same_v<T, Instantiate> ||
                             std::is_same_v<T, Slide>) {
          append(k.list);
        } else if constexpr (std::is_same_v<T, Lex>) {
          for (const auto& l : k.lists) append(l);
        } else if constexpr (std::is_same_v<T, Sum>) {
          for (const auto& e : k.terms) add_expr_vars(e, out);
          add_condition_vars(k.condition, out);
        } else if constexpr (std::is_same_v<T, Count> || std::is_same_v<T, NValues> ||
                             std::is_same_v<T, Extremum>) {
          append(k.list);
          add_condition_vars(k.condition, out);
        } else if constexpr (std::is_same_v<T, Cardinality>) {
          append(k.list);
          for (const auto& o : k.occurs) {
            if (const auto* r = std::get_if<VarRef>(&o)) out.push_back(r->id);
          }
        } else if constexpr (std::is_same_v<T, Element>) {
          for (const auto& e : k.list) add_expr_vars(e, out);
          out.push_back(k.index);
          if (k.col_index) out.push_back(*k.col_index);
          add_expr_vars(k.value, out);
        } else if constexpr (std::is_same_v<T, Channel>) {
          append(k.list1);
          append(k.list2);
        } else if constexpr (std::is_same_v<T, NoOverlap>) {
          for (const auto& o : k.origins) append(o);
          for (const auto& l : k.lengths) {
            for (const auto& e : l) add_expr_vars(e, out);
          }
        } else if constexpr (std::is_same_v<T, Cumulative>) {
          append(k.origins);
          for (const auto& e : k.lengths) add_expr_vars(e, out);
          for (const auto& e : k.heights) add_expr_vars(e, out);
          add_condition_vars(k.condition, out);
        }
      },
      c.kind);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

VarId Instance::add_variable(std::string id, Domain dom) {
  variables.push_back(Variable{std::move(id), std::move(dom)});
  return static_cast<VarId>(variables.size() - 1);
}

void Instance::post(ConstraintKind kind, std::string tag) {
  constraints.push_back(Constraint{std::move(kind), std::move(tag)});
}

std::optional<VarId> Instance::find(std::string_view id) const {
  for (std::size_t i = 0; i < variables.size(); ++i) {
    if (variables[i].id == id) return static_cast<VarId>(i);
  }
  return std::nullopt;
}

Assignment resolve(const Instance& inst, const Instantiation& named) {
  if (named.ids.size() != named.values.size()) {
    throw ModelError("instantiation list and values differ in length");
  }
  std::unordered_map<std::string_view, VarId> index;
  for (std::size_t i = 0; i < inst.variables.size(); ++i) {
    index.emplace(inst.variables[i].id, static_cast<VarId>(i));
  }
  Assignment out(inst.variables.size());
  std::vector<char> seen(inst.variables.size(), 0);
  for (std::size_t i = 0; i < named.ids.size(); ++i) {
    auto it = index.find(named.ids[i]);
    if (it == index.end()) throw ModelError("unknown variable '" + named.ids[i] + "'");
    out[static_cast<std::size_t>(it->second)] = named.values[i];
    seen[static_cast<std::size_t>(it->second)] = 1;
  }
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (!seen[i]) throw ModelError("variable '" + inst.variables[i].id + "' is not assigned");
  }
  return out;
}

Instantiation name_assignment(const Instance& inst, std::span<const Value> values) {
  Instantiation out;
  for (std::size_t i = 0; i < inst.variables.size() && i < values.size(); ++i) {
    out.ids.push_back(inst.variables[i].id);
    out.values.push_back(values[i]);
  }
  return out;
}

bool is_valid_identifier(std::string_view id) {
  if (id.empty() || !std::isalpha(static_cast<unsigned char>(id[0]))) return false;
  int depth = 0;
  for (char ch : id) {
    auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c) || c == '_') continue;
    if (c == '[') {
      if (depth != 0) return false;
      ++depth;
    } else if (c == ']') {
      if (depth != 1) return false;
      --depth;
    } else {
      return false;
    }
  }
  return depth == 0;
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

namespace {

class Validator {
 public:
  explicit Validator(const Instance& inst) : inst_(inst) {}

  std::vector<ValidationError> run() {
    std::unordered_set<std::string_view> ids;
    for (const auto& v : inst_.variables) {
      if (!ids.insert(v.id).second) fail(-1, "duplicate variable id '" + v.id + "'");
      if (!is_valid_identifier(v.id)) fail(-1, "invalid variable id '" + v.id + "'");
    }
    for (std::size_t i = 0; i < inst_.constraints.size(); ++i) {
      current_ = static_cast<int>(i);
      std::visit([&](const auto& k) { check(k); }, inst_.constraints[i].kind);
    }
    current_ = -1;
    if (inst_.objective) check_objective(*inst_.objective);
    return std::move(errors_);
  }

 private:
  void fail(int index, std::string reason) { errors_.push_back({index, std::move(reason)}); }
  void fail(std::string reason) { fail(current_, std::move(reason)); }

  bool var_ok(VarId id) {
    if (id < 0 || static_cast<std::size_t>(id) >= inst_.variables.size()) {
      fail("unknown variable #" + std::to_string(id));
      return false;
    }
    return true;
  }

  void vars_ok(const std::vector<VarId>& list, bool nonempty = true) {
    if (nonempty && list.empty()) fail("empty variable list");
    for (VarId v : list) var_ok(v);
  }

  void expr_ok(const Expr& e, bool allow_params = false, int arity = 0) {
    switch (e.op) {
      case Op::Const:
        return;
      case Op::Var:
        var_ok(e.var_id());
        return;
      case Op::Param:
        if (!allow_params) {
          fail("parameter %" + std::to_string(e.value) + " outside a template");
        } else if (e.value < 0 || e.value >= arity) {
          fail("parameter %" + std::to_string(e.value) + " exceeds template arity");
        }
        return;
      default:
        break;
    }
    auto [lo, hi] = arity_bounds(e.op);
    const int n = static_cast<int>(e.args.size());
    if (n < lo || (hi >= 0 && n > hi)) {
      fail(std::string("operator ") + op_name(e.op) + " applied to " + std::to_string(n) +
           " arguments");
    }
    if ((e.op == Op::Div || e.op == Op::Mod) && n == 2 && e.args[1].is_const() &&
        e.args[1].value == 0) {
      fail(std::string(op_name(e.op)) + " by constant zero");
    }
    for (const auto& c : e.args) expr_ok(c, allow_params, arity);
  }

  void var_or_const(const Expr& e, const char* what) {
    if (e.is_var()) {
      var_ok(e.var_id());
    } else if (!e.is_const()) {
      fail(std::string(what) + " must be a variable or a constant");
    }
  }

  void condition_ok(const Condition& c) {
    const bool set_op = c.op == CmpOp::In || c.op == CmpOp::NotIn;
    if (const auto* iv = std::get_if<Interval>(&c.rhs)) {
      if (!set_op) fail("interval condition requires in/notin");
      if (iv->lo > iv->hi) fail("interval lower bound exceeds upper bound");
    } else if (const auto* s = std::get_if<std::vector<Value>>(&c.rhs)) {
      if (!set_op) fail("set condition requires in/notin");
      if (s->empty()) fail("empty set in condition");
    } else {
      if (set_op) fail("in/notin condition requires an interval or a set");
      if (const auto* r = std::get_if<VarRef>(&c.rhs)) var_ok(r->id);
    }
  }

  void check(const Extension& c) {
    vars_ok(c.scope);
    for (const auto& t : c.tuples) {
      if (t.size() != c.scope.size()) {
        fail("tuple arity " + std::to_string(t.size()) + " does not match scope arity " +
             std::to_string(c.scope.size()));
        return;
      }
    }
  }

  void check(const Intension& c) {
    expr_ok(c.expr);
    if (!is_boolean(c.expr.op)) fail("intension root is not a predicate");
  }

  void automaton_ok(const Automaton& a) {
    std::set<std::pair<std::string, Value>> seen;
    std::map<std::string, std::vector<std::string>> succ;
    for (const auto& t : a.transitions) {
      if (!seen.emplace(t.from, t.value).second) {
        fail("automaton is not deterministic at state '" + t.from + "'");
      }
      succ[t.from].push_back(t.to);
    }
    std::set<std::string> reach{a.start};
    std::vector<std::string> stack{a.start};
    while (!stack.empty()) {
      std::string s = stack.back();
      stack.pop_back();
      for (const auto& n : succ[s]) {
        if (reach.insert(n).second) stack.push_back(n);
      }
    }
    if (a.finals.empty()) fail("automaton without final state");
    for (const auto& f : a.finals) {
      if (!reach.count(f)) fail("final state '" + f + "' unreachable from start");
    }
  }

  void check(const Regular& c) {
    vars_ok(c.scope);
    automaton_ok(c.automaton);
  }

  void check(const Mdd& c) {
    vars_ok(c.scope);
    std::set<std::string> from, to;
    std::set<std::pair<std::string, Value>> seen;
    for (const auto& t : c.transitions) {
      from.insert(t.from);
      to.insert(t.to);
      if (!seen.emplace(t.from, t.value).second) fail("mdd is not deterministic at '" + t.from + "'");
    }
    int roots = 0, terminals = 0;
    for (const auto& s : from) roots += to.count(s) ? 0 : 1;
    for (const auto& s : to) terminals += from.count(s) ? 0 : 1;
    if (roots != 1) fail("mdd must have exactly one root");
    if (terminals != 1) fail("mdd must have exactly one terminal");
  }

  void check(const AllDifferent& c) {
    if (c.list.empty()) fail("empty list");
    for (const auto& e : c.list) expr_ok(e);
  }

  void check(const AllEqual& c) { vars_ok(c.list); }

  static bool is_order_op(CmpOp op) {
    return op == CmpOp::Lt || op == CmpOp::Le || op == CmpOp::Ge || op == CmpOp::Gt;
  }

  void check(const Ordered& c) {
    vars_ok(c.list);
    if (!c.lengths.empty() && c.lengths.size() + 1 != c.list.size()) fail("lengths size mismatch");
    if (!is_order_op(c.op)) fail("ordered requires lt, le, ge or gt");
  }

  void check(const Lex& c) {
    if (c.lists.size() < 2) fail("lex requires at least two lists");
    for (const auto& l : c.lists) {
      vars_ok(l);
      if (!c.lists.empty() && l.size() != c.lists.front().size()) fail("lex lists differ in length");
    }
    if (!is_order_op(c.op)) fail("lex requires lt, le, ge or gt");
  }

  void sum_terms_ok(const std::vector<Expr>& terms, const std::vector<Value>& coeffs) {
    if (terms.empty()) fail("empty sum");
    if (!coeffs.empty() && coeffs.size() != terms.size()) fail("coeffs size mismatch");
    for (const auto& t : terms) {
      if (t.is_var()) {
        var_ok(t.var_id());
      } else if (t.op == Op::Mul && t.args.size() == 2 && t.args[0].is_var() &&
                 t.args[1].is_var()) {
        var_ok(t.args[0].var_id());
        var_ok(t.args[1].var_id());
      } else {
        fail("sum term must be a variable or a product of two variables");
      }
    }
  }

  void check(const Sum& c) {
    sum_terms_ok(c.terms, c.coeffs);
    condition_ok(c.condition);
  }

  void check(const Count& c) {
    vars_ok(c.list);
    if (c.values.empty()) fail("count without values");
    condition_ok(c.condition);
  }

  void check(const NValues& c) {
    vars_ok(c.list);
    condition_ok(c.condition);
  }

  void check(const Cardinality& c) {
    vars_ok(c.list);
    if (c.values.size() != c.occurs.size()) fail("values and occurs differ in length");
    std::set<Value> distinct(c.values.begin(), c.values.end());
    if (distinct.size() != c.values.size()) fail("cardinality values are not distinct");
    for (const auto& o : c.occurs) {
      if (const auto* r = std::get_if<VarRef>(&o)) var_ok(r->id);
      if (const auto* iv = std::get_if<Interval>(&o); iv && iv->lo > iv->hi) {
        fail("empty occurrence interval");
      }
    }
  }

  void check(const Extremum& c) {
    vars_ok(c.list);
    condition_ok(c.condition);
  }

  void check(const Element& c) {
    if (c.list.empty()) fail("element over empty list");
    for (const auto& e : c.list) var_or_const(e, "element list entry");
    var_ok(c.index);
    if (c.cols > 0) {
      if (c.list.size() % c.cols != 0) fail("matrix rows differ in length");
      if (!c.col_index) fail("matrix element requires two indexes");
    } else if (c.col_index) {
      fail("column index without matrix");
    }
    if (c.col_index) var_ok(*c.col_index);
    var_or_const(c.value, "element value");
  }

  void check(const Channel& c) {
    vars_ok(c.list1);
    vars_ok(c.list2, false);
    if (!c.list2.empty() && c.list2.size() < c.list1.size()) fail("second channel list too short");
  }

  void check(const NoOverlap& c) {
    if (c.origins.size() != c.lengths.size()) fail("origins and lengths differ in size");
    std::size_t dims = c.origins.empty() ? 0 : c.origins.front().size();
    if (dims == 0) fail("noOverlap without boxes");
    for (std::size_t i = 0; i < c.origins.size(); ++i) {
      vars_ok(c.origins[i]);
      if (c.origins[i].size() != dims) fail("boxes differ in dimension");
      if (i < c.lengths.size()) {
        if (c.lengths[i].size() != c.origins[i].size()) fail("length dimension mismatch");
        for (const auto& e : c.lengths[i]) var_or_const(e, "noOverlap length");
      }
    }
  }

  void check(const Cumulative& c) {
    vars_ok(c.origins);
    if (c.lengths.size() != c.origins.size() || c.heights.size() != c.origins.size()) {
      fail("cumulative task arrays differ in size");
    }
    for (const auto& e : c.lengths) var_or_const(e, "cumulative length");
    for (const auto& e : c.heights) var_or_const(e, "cumulative height");
    condition_ok(c.condition);
  }

  void check(const Circuit& c) { vars_ok(c.list); }

  void check(const Instantiate& c) {
    vars_ok(c.list);
    if (c.list.size() != c.values.size()) fail("instantiation list and values differ in size");
  }

  void check(const Slide& c) {
    vars_ok(c.list);
    if (c.arity < 1) fail("slide arity must be positive");
    if (c.offset < 1) fail("slide offset must be positive");
    if (static_cast<int>(c.list.size()) < c.arity) fail("slide list shorter than template");
    if (c.condition) {
      expr_ok(*c.condition, true, c.arity);
      if (!is_boolean(c.condition->op)) fail("slide template is not a predicate");
    } else {
      for (const auto& t : c.tuples) {
        if (static_cast<int>(t.size()) != c.arity) fail("slide tuple arity mismatch");
      }
    }
  }

  void check_objective(const Objective& o) {
    current_ = -1;
    if (o.kind == ObjectiveKind::Sum) {
      sum_terms_ok(o.terms, o.coeffs);
      return;
    }
    if (o.terms.empty()) fail("objective without terms");
    if (o.kind == ObjectiveKind::Expression && o.terms.size() != 1) fail("objective expects one expression");
    for (const auto& t : o.terms) expr_ok(t);
  }

  const Instance& inst_;
  int current_ = -1;
  std::vector<ValidationError> errors_;
};

}  // namespace

std::vector<ValidationError> validate_instance(const Instance& inst) { return Validator(inst).run(); }

}  // namespace xcsp
