// Ground-truth checks, written from the constraint definitions alone.
#include "xcsp/verifier.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace xcsp {

namespace {

using Wide = __int128;

std::string num(Wide v) {
  if (v == 0) return "0";
  bool neg = v < 0;
  std::string s;
  while (v != 0) {
    int d = static_cast<int>(v % 10);
    s.push_back(static_cast<char>('0' + (d < 0 ? -d : d)));
    v /= 10;
  }
  if (neg) s.push_back('-');
  return {s.rbegin(), s.rend()};
}

bool compare(CmpOp op, Wide a, Wide b) {
  switch (op) {
    case CmpOp::Lt: return a < b;
    case CmpOp::Le: return a <= b;
    case CmpOp::Ge: return a >= b;
    case CmpOp::Gt: return a > b;
    case CmpOp::Eq:
    case CmpOp::In: return a == b;
    case CmpOp::Ne:
    case CmpOp::NotIn: return a != b;
  }
  return false;
}

bool satisfies(const Condition& c, Wide lhs, std::span<const Value> x) {
  return std::visit(
      [&](const auto& r) -> bool {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, Value>) {
          return compare(c.op, lhs, r);
        } else if constexpr (std::is_same_v<R, VarRef>) {
          return compare(c.op, lhs, x[r.id]);
        } else if constexpr (std::is_same_v<R, Interval>) {
          bool in = lhs >= r.lo && lhs <= r.hi;
          return c.op == CmpOp::NotIn ? !in : in;
        } else {
          bool in = std::find(r.begin(), r.end(), lhs) != r.end();
          return c.op == CmpOp::NotIn ? !in : in;
        }
      },
      c.rhs);
}

std::string describe(const Condition& c, std::span<const Value> x) {
  std::string op = cmp_name(c.op);
  return std::visit(
      [&](const auto& r) -> std::string {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, Value>) {
          return op + " " + num(r);
        } else if constexpr (std::is_same_v<R, VarRef>) {
          return op + " " + num(x[r.id]);
        } else if constexpr (std::is_same_v<R, Interval>) {
          return op + " " + num(r.lo) + ".." + num(r.hi);
        } else {
          return op + " set";
        }
      },
      c.rhs);
}

Wide eval(const Expr& e, std::span<const Value> x) { return evaluate(e, x); }

bool tuple_matches(const Tuple& t, const std::vector<VarId>& scope, std::span<const Value> x) {
  for (std::size_t i = 0; i < scope.size(); ++i) {
    if (t[i] != kStar && t[i] != x[scope[i]]) return false;
  }
  return true;
}

using Reason = std::optional<std::string>;
Reason ok() { return std::nullopt; }
Reason bad(std::string s) { return s; }

Reason check_table(const std::vector<VarId>& scope, const std::vector<Tuple>& tuples, bool positive,
                   std::span<const Value> x) {
  bool any = std::any_of(tuples.begin(), tuples.end(), [&](const Tuple& t) { return tuple_matches(t, scope, x); });
  if (positive && !any) return bad("tuple not in the supports");
  if (!positive && any) return bad("tuple is a conflict");
  return ok();
}

Reason check_expr(const Expr& e, std::span<const Value> x) {
  try {
    if (evaluate(e, x) == 0) return bad("predicate evaluates to false");
  } catch (const EvalError& err) {
    return bad(std::string("predicate cannot be evaluated: ") + err.what());
  }
  return ok();
}

// Nondeterministic run over labelled transitions.
std::set<std::string> step(const std::set<std::string>& from, Value v, const std::vector<Transition>& ts) {
  std::set<std::string> to;
  for (const auto& t : ts) {
    if (t.value == v && from.count(t.from)) to.insert(t.to);
  }
  return to;
}

Reason check_regular(const Regular& r, std::span<const Value> x) {
  std::set<std::string> states{r.automaton.start};
  for (VarId v : r.scope) {
    states = step(states, x[v], r.automaton.transitions);
    if (states.empty()) return bad("no transition on value " + num(x[v]));
  }
  for (const auto& f : r.automaton.finals) {
    if (states.count(f)) return ok();
  }
  return bad("word ends outside the final states");
}

Reason check_mdd(const Mdd& m, std::span<const Value> x) {
  std::set<std::string> sources, targets;
  for (const auto& t : m.transitions) {
    sources.insert(t.from);
    targets.insert(t.to);
  }
  std::set<std::string> states;
  for (const auto& s : sources) {
    if (!targets.count(s)) states.insert(s);
  }
  for (VarId v : m.scope) {
    states = step(states, x[v], m.transitions);
    if (states.empty()) return bad("no arc on value " + num(x[v]));
  }
  for (const auto& s : states) {
    if (!sources.count(s)) return ok();
  }
  return bad("path does not end at the terminal");
}

Reason check_alldifferent(const AllDifferent& a, std::span<const Value> x) {
  std::vector<Value> vals;
  for (const auto& e : a.list) {
    Value v;
    try {
      v = evaluate(e, x);
    } catch (const EvalError& err) {
      return bad(std::string("term cannot be evaluated: ") + err.what());
    }
    if (std::find(a.except.begin(), a.except.end(), v) != a.except.end()) continue;
    if (std::find(vals.begin(), vals.end(), v) != vals.end()) return bad("value " + num(v) + " repeated");
    vals.push_back(v);
  }
  return ok();
}

int lex_compare(const std::vector<VarId>& a, const std::vector<VarId>& b, std::span<const Value> x) {
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    if (x[a[i]] != x[b[i]]) return x[a[i]] < x[b[i]] ? -1 : 1;
  }
  return 0;
}

Reason check_lex(const Lex& l, std::span<const Value> x) {
  auto chain = [&](const std::vector<std::vector<VarId>>& lists) -> Reason {
    for (std::size_t i = 0; i + 1 < lists.size(); ++i) {
      if (!compare(l.op, lex_compare(lists[i], lists[i + 1], x), 0)) {
        return bad("lists " + std::to_string(i) + " and " + std::to_string(i + 1) + " are not ordered");
      }
    }
    return ok();
  };
  if (auto r = chain(l.lists)) return r;
  if (l.matrix && !l.lists.empty()) {
    std::vector<std::vector<VarId>> cols(l.lists[0].size());
    for (const auto& row : l.lists) {
      for (std::size_t j = 0; j < row.size() && j < cols.size(); ++j) cols[j].push_back(row[j]);
    }
    if (auto r = chain(cols)) return bad("columns: " + *r);
  }
  return ok();
}

Reason check_sum(const Sum& s, std::span<const Value> x) {
  Wide total = 0;
  for (std::size_t i = 0; i < s.terms.size(); ++i) {
    Wide t;
    try {
      t = eval(s.terms[i], x);
    } catch (const EvalError& err) {
      return bad(std::string("term cannot be evaluated: ") + err.what());
    }
    total += (s.coeffs.empty() ? 1 : Wide{s.coeffs[i]}) * t;
  }
  if (!satisfies(s.condition, total, x)) return bad("sum " + num(total) + " violates " + describe(s.condition, x));
  return ok();
}

Reason check_count(const Count& c, std::span<const Value> x) {
  Wide n = 0;
  for (VarId v : c.list) n += std::find(c.values.begin(), c.values.end(), x[v]) != c.values.end();
  if (!satisfies(c.condition, n, x)) return bad("count " + num(n) + " violates " + describe(c.condition, x));
  return ok();
}

Reason check_nvalues(const NValues& c, std::span<const Value> x) {
  std::set<Value> seen;
  for (VarId v : c.list) seen.insert(x[v]);
  Wide n = static_cast<Wide>(seen.size());
  if (!satisfies(c.condition, n, x)) return bad("nValues " + num(n) + " violates " + describe(c.condition, x));
  return ok();
}

Reason check_cardinality(const Cardinality& c, std::span<const Value> x) {
  for (std::size_t j = 0; j < c.values.size(); ++j) {
    Wide n = 0;
    for (VarId v : c.list) n += x[v] == c.values[j];
    bool good = std::visit(
        [&](const auto& o) -> bool {
          using O = std::decay_t<decltype(o)>;
          if constexpr (std::is_same_v<O, Value>) return n == o;
          else if constexpr (std::is_same_v<O, VarRef>) return n == x[o.id];
          else return n >= o.lo && n <= o.hi;
        },
        c.occurs[j]);
    if (!good) return bad("value " + num(c.values[j]) + " occurs " + num(n) + " times");
  }
  if (c.closed) {
    for (VarId v : c.list) {
      if (std::find(c.values.begin(), c.values.end(), x[v]) == c.values.end()) {
        return bad("value " + num(x[v]) + " not allowed by the closed cardinality");
      }
    }
  }
  return ok();
}

Reason check_extremum(const Extremum& m, std::span<const Value> x) {
  if (m.list.empty()) return bad("empty list");
  Value r = x[m.list[0]];
  for (VarId v : m.list) r = m.is_max ? std::max(r, x[v]) : std::min(r, x[v]);
  if (!satisfies(m.condition, r, x)) {
    return bad(std::string(m.is_max ? "maximum " : "minimum ") + num(r) + " violates " + describe(m.condition, x));
  }
  return ok();
}

Reason check_element(const Element& e, std::span<const Value> x) {
  Wide pos;
  if (e.cols == 0) {
    pos = Wide{x[e.index]} - e.start_index;
    if (pos < 0 || pos >= static_cast<Wide>(e.list.size())) return bad("index out of range");
  } else {
    const Wide rows = static_cast<Wide>(e.list.size() / e.cols);
    Wide r = x[e.index], c = x[*e.col_index];
    if (r < 0 || r >= rows || c < 0 || c >= static_cast<Wide>(e.cols)) return bad("index out of range");
    pos = r * static_cast<Wide>(e.cols) + c;
  }
  Value got = evaluate(e.list[static_cast<std::size_t>(pos)], x);
  Value want = evaluate(e.value, x);
  if (got != want) return bad("selected entry " + num(got) + " differs from " + num(want));
  return ok();
}

Reason check_channel(const Channel& c, std::span<const Value> x) {
  const auto& a = c.list1;
  const auto& b = c.list2.empty() ? c.list1 : c.list2;
  for (std::size_t i = 0; i < a.size(); ++i) {
    Value j = x[a[i]];
    if (j < 0 || j >= static_cast<Value>(b.size())) return bad("channel index out of range");
    if (x[b[static_cast<std::size_t>(j)]] != static_cast<Value>(i)) return bad("channel broken at " + std::to_string(i));
  }
  if (!c.list2.empty() && a.size() == b.size()) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      Value i = x[b[j]];
      if (i < 0 || i >= static_cast<Value>(a.size())) return bad("channel index out of range");
      if (x[a[static_cast<std::size_t>(i)]] != static_cast<Value>(j)) return bad("channel broken at " + std::to_string(j));
    }
  }
  return ok();
}

Reason check_nooverlap(const NoOverlap& n, std::span<const Value> x) {
  const std::size_t k = n.origins.size();
  std::vector<std::vector<Wide>> len(k);
  for (std::size_t i = 0; i < k; ++i) {
    for (const auto& e : n.lengths[i]) len[i].push_back(eval(e, x));
  }
  auto zero = [&](std::size_t i) {
    return std::any_of(len[i].begin(), len[i].end(), [](Wide l) { return l == 0; });
  };
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      if (n.zero_ignored && (zero(i) || zero(j))) continue;
      bool apart = false;
      for (std::size_t d = 0; d < n.origins[i].size() && !apart; ++d) {
        Wide oi = x[n.origins[i][d]], oj = x[n.origins[j][d]];
        apart = oi + len[i][d] <= oj || oj + len[j][d] <= oi;
      }
      if (!apart) return bad("boxes " + std::to_string(i) + " and " + std::to_string(j) + " overlap");
    }
  }
  return ok();
}

Reason check_cumulative(const Cumulative& c, std::span<const Value> x) {
  const std::size_t n = c.origins.size();
  std::vector<Wide> start(n), end(n), h(n);
  std::vector<Wide> points;
  for (std::size_t i = 0; i < n; ++i) {
    start[i] = x[c.origins[i]];
    end[i] = start[i] + eval(c.lengths[i], x);
    h[i] = eval(c.heights[i], x);
    if (end[i] > start[i]) points.push_back(start[i]);
  }
  // the load only changes at task starts and ends; checking starts covers
  // every covered time point
  for (Wide t : points) {
    Wide load = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (start[i] <= t && t < end[i]) load += h[i];
    }
    if (!satisfies(c.condition, load, x)) {
      return bad("load " + num(load) + " at time " + num(t) + " violates " + describe(c.condition, x));
    }
  }
  // ends of tasks that are still covered by another task
  for (std::size_t e = 0; e < n; ++e) {
    Wide t = end[e];
    Wide load = 0;
    bool covered = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (start[i] <= t && t < end[i]) {
        load += h[i];
        covered = true;
      }
    }
    if (covered && !satisfies(c.condition, load, x)) {
      return bad("load " + num(load) + " at time " + num(t) + " violates " + describe(c.condition, x));
    }
  }
  return ok();
}

Reason check_circuit(const Circuit& c, std::span<const Value> x) {
  const auto n = static_cast<Value>(c.list.size());
  std::vector<Value> succ;
  for (VarId v : c.list) {
    if (x[v] < 0 || x[v] >= n) return bad("successor out of range");
    succ.push_back(x[v]);
  }
  std::vector<char> hit(static_cast<std::size_t>(n), 0);
  for (Value s : succ) {
    if (hit[s]) return bad("node " + num(s) + " has two predecessors");
    hit[s] = 1;
  }
  Value first = -1, looped = 0;
  for (Value i = 0; i < n; ++i) {
    if (succ[i] != i) {
      if (first < 0) first = i;
      ++looped;
    }
  }
  if (first < 0) return bad("no cycle of length at least 2");
  Value len = 0, k = first;
  do {
    k = succ[k];
    ++len;
  } while (k != first && len <= n);
  if (len != looped) return bad("successors form more than one cycle");
  return ok();
}

Reason check_slide(const Slide& s, std::span<const Value> x) {
  const std::size_t n = s.list.size();
  const auto arity = static_cast<std::size_t>(s.arity);
  const auto stride = static_cast<std::size_t>(s.offset);
  for (std::size_t i = 0; s.circular ? i < n : i + arity <= n; i += stride) {
    std::vector<VarId> window;
    for (std::size_t k = 0; k < arity; ++k) window.push_back(s.list[(i + k) % n]);
    Reason r;
    if (s.condition) {
      r = check_expr(substitute_params(*s.condition, window), x);
    } else {
      r = check_table(window, s.tuples, s.positive, x);
    }
    if (r) return bad("window " + std::to_string(i) + ": " + *r);
  }
  return ok();
}

}  // namespace

std::optional<std::string> check_constraint(const Constraint& c, std::span<const Value> x) {
  try {
    return std::visit(
        [&](const auto& k) -> Reason {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, Extension>) {
            return check_table(k.scope, k.tuples, k.positive, x);
          } else if constexpr (std::is_same_v<K, Intension>) {
            return check_expr(k.expr, x);
          } else if constexpr (std::is_same_v<K, Regular>) {
            return check_regular(k, x);
          } else if constexpr (std::is_same_v<K, Mdd>) {
            return check_mdd(k, x);
          } else if constexpr (std::is_same_v<K, AllDifferent>) {
            return check_alldifferent(k, x);
          } else if constexpr (std::is_same_v<K, AllEqual>) {
            for (VarId v : k.list) {
              if (x[v] != x[k.list[0]]) return bad("values differ");
            }
            return ok();
          } else if constexpr (std::is_same_v<K, Ordered>) {
            for (std::size_t i = 0; i + 1 < k.list.size(); ++i) {
              Wide l = k.lengths.empty() ? 0 : k.lengths[i];
              if (!compare(k.op, Wide{x[k.list[i]]} + l, x[k.list[i + 1]])) {
                return bad("not ordered at position " + std::to_string(i));
              }
            }
            return ok();
          } else if constexpr (std::is_same_v<K, Lex>) {
            return check_lex(k, x);
          } else if constexpr (std::is_same_v<K, Sum>) {
            return check_sum(k, x);
          } else if constexpr (std::is_same_v<K, Count>) {
            return check_count(k, x);
          } else if constexpr (std::is_same_v<K, NValues>) {
            return check_nvalues(k, x);
          } else if constexpr (std::is_same_v<K, Cardinality>) {
            return check_cardinality(k, x);
          } else if constexpr (std::is_same_v<K, Extremum>) {
            return check_extremum(k, x);
          } else if constexpr (std::is_same_v<K, Element>) {
            return check_element(k, x);
          } else if constexpr (std::is_same_v<K, Channel>) {
            return check_channel(k, x);
          } else if constexpr (std::is_same_v<K, NoOverlap>) {
            return check_nooverlap(k, x);
          } else if constexpr (std::is_same_v<K, Cumulative>) {
            return check_cumulative(k, x);
          } else if constexpr (std::is_same_v<K, Circuit>) {
            return check_circuit(k, x);
          } else if constexpr (std::is_same_v<K, Instantiate>) {
            for (std::size_t i = 0; i < k.list.size(); ++i) {
              if (x[k.list[i]] != k.values[i]) return bad("variable differs from its imposed value");
            }
            return ok();
          } else {
            return check_slide(k, x);
          }
        },
        c.kind);
  } catch (const EvalError& err) {
    return std::string("cannot be evaluated: ") + err.what();
  }
}

std::vector<Violation> check_assignment(const Instance& inst, std::span<const Value> x) {
  if (x.size() != inst.variables.size()) throw ModelError("assignment size differs from the variable count");
  std::vector<Violation> out;
  for (std::size_t v = 0; v < x.size(); ++v) {
    if (!inst.variables[v].dom.contains(x[v])) {
      out.push_back({-1, "value " + num(x[v]) + " outside the domain of " + inst.variables[v].id});
    }
  }
  for (std::size_t i = 0; i < inst.constraints.size(); ++i) {
    if (auto r = check_constraint(inst.constraints[i], x)) {
      out.push_back({static_cast<int>(i), std::string(kind_name(inst.constraints[i])) + ": " + *r});
    }
  }
  return out;
}

std::vector<Violation> check_instantiation(const Instance& inst, const Instantiation& a) {
  return check_assignment(inst, resolve(inst, a));
}

Value objective_value(const Instance& inst, std::span<const Value> x) {
  if (!inst.objective) throw VerifierError("instance has no objective");
  const Objective& o = *inst.objective;
  try {
    std::vector<Value> vals;
    for (const auto& t : o.terms) vals.push_back(evaluate(t, x));
    Wide r = 0;
    switch (o.kind) {
      case ObjectiveKind::Expression: r = vals.at(0); break;
      case ObjectiveKind::Sum:
        for (std::size_t i = 0; i < vals.size(); ++i) {
          r += (o.coeffs.empty() ? 1 : Wide{o.coeffs[i]}) * vals[i];
          if (r > (Wide{1} << 120) || r < -(Wide{1} << 120)) {
            throw VerifierError("objective overflow");
          }
        }
        break;
      case ObjectiveKind::Maximum: r = *std::max_element(vals.begin(), vals.end()); break;
      case ObjectiveKind::Minimum: r = *std::min_element(vals.begin(), vals.end()); break;
      case ObjectiveKind::NValues: r = static_cast<Wide>(std::set<Value>(vals.begin(), vals.end()).size()); break;
    }
    if (r > std::numeric_limits<Value>::max() || r < std::numeric_limits<Value>::min()) {
      throw VerifierError("objective overflow");
    }
    return static_cast<Value>(r);
  } catch (const EvalError& err) {
    throw VerifierError(std::string("objective cannot be evaluated: ") + err.what());
  }
}

Value objective_value(const Instance& inst, const Instantiation& a) { return objective_value(inst, resolve(inst, a)); }

std::vector<Assignment> enumerate_assignments(const Instance& inst, std::size_t limit) {
  const std::size_t n = inst.variables.size();
  double space = 1;
  for (const auto& v : inst.variables) space *= static_cast<double>(v.dom.size());
  if (space > kMaxBruteSpace) throw VerifierError("search space exceeds 1e8 assignments");
  // constraint i is checked as soon as its last variable is set
  std::vector<std::vector<std::size_t>> due(n + 1);
  for (std::size_t i = 0; i < inst.constraints.size(); ++i) {
    auto sc = scope_of(inst.constraints[i]);
    due[sc.empty() ? 0 : static_cast<std::size_t>(sc.back()) + 1].push_back(i);
  }
  std::vector<Assignment> out;
  Assignment x(n, 0);
  auto passes = [&](std::size_t depth) {
    for (std::size_t i : due[depth]) {
      if (check_constraint(inst.constraints[i], x)) return false;
    }
    return true;
  };
  if (limit == 0 || !passes(0)) return out;
  if (n == 0) {
    out.push_back(x);
    return out;
  }
  auto dfs = [&](auto&& self, std::size_t d) -> void {
    for (Value v : inst.variables[d].dom.values()) {
      if (out.size() >= limit) return;
      x[d] = v;
      if (!passes(d + 1)) continue;
      if (d + 1 == n) {
        out.push_back(x);
      } else {
        self(self, d + 1);
      }
    }
  };
  dfs(dfs, 0);
  return out;
}

std::vector<Instantiation> enumerate_brute(const Instance& inst, std::size_t limit) {
  std::vector<Instantiation> out;
  for (const auto& a : enumerate_assignments(inst, limit)) out.push_back(name_assignment(inst, a));
  return out;
}

}  // namespace xcsp
