// Compiled expressions, condition helpers, table and intension propagators.
#include <algorithm>
#include <limits>
#include <map>
#include <set>

#include "propagators.hpp"

namespace xcsp::detail {

namespace {
constexpr i128 kInf = i128{1} << 100;
}

i128 floor_div(i128 a, i128 b) {
  i128 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

i128 ceil_div(i128 a, i128 b) {
  i128 q = a / b;
  if ((a % b != 0) && ((a < 0) == (b < 0))) ++q;
  return q;
}

// ---------------------------------------------------------------------------
// Program

Program::Program(const Expr& e, const std::vector<VarId>& slots) { build(e, slots); }

int Program::build(const Expr& e, const std::vector<VarId>& slots) {
  const int id = static_cast<int>(nodes_.size());
  nodes_.push_back({e.op, e.value, 0, 0, nullptr});
  if (e.op == Op::Var) {
    auto it = std::find(slots.begin(), slots.end(), e.var_id());
    if (it == slots.end()) throw UsageError("variable missing from program slots");
    nodes_[id].value = it - slots.begin();
  }
  if (e.op == Op::In) {
    sets_.push_back(e.set);
    nodes_[id].value = static_cast<Value>(sets_.size() - 1);
  }
  std::vector<int> ch;
  for (const auto& a : e.args) ch.push_back(build(a, slots));
  nodes_[id].first = static_cast<int>(kids_.size());
  nodes_[id].count = static_cast<int>(ch.size());
  kids_.insert(kids_.end(), ch.begin(), ch.end());
  return id;
}

bool Program::eval_node(int n, const Value* env, Value& out) const {
  const Node& node = nodes_[n];
  const int* k = kids_.data() + node.first;
  Value a = 0, b = 0;
  switch (node.op) {
    case Op::Const:
      out = node.value;
      return true;
    case Op::Var:
      out = env[node.value];
      return true;
    case Op::Param:
      return false;
    case Op::Neg:
      if (!eval_node(k[0], env, a) || a == std::numeric_limits<Value>::min()) return false;
      out = -a;
      return true;
    case Op::Abs:
      if (!eval_node(k[0], env, a) || a == std::numeric_limits<Value>::min()) return false;
      out = a < 0 ? -a : a;
      return true;
    case Op::Add:
      out = 0;
      for (int i = 0; i < node.count; ++i) {
        if (!eval_node(k[i], env, a) || __builtin_add_overflow(out, a, &out)) return false;
      }
      return true;
    case Op::Mul:
      out = 1;
      for (int i = 0; i < node.count; ++i) {
        if (!eval_node(k[i], env, a) || __builtin_mul_overflow(out, a, &out)) return false;
      }
      return true;
    case Op::Sub:
      return eval_node(k[0], env, a) && eval_node(k[1], env, b) && !__builtin_sub_overflow(a, b, &out);
    case Op::Div:
    case Op::Mod:
      if (!eval_node(k[0], env, a) || !eval_node(k[1], env, b) || b == 0) return false;
      if (a == std::numeric_limits<Value>::min() && b == -1) {
        if (node.op == Op::Div) return false;
        out = 0;
        return true;
      }
      out = node.op == Op::Div ? a / b : a % b;
      return true;
    case Op::Min:
    case Op::Max:
      if (!eval_node(k[0], env, out)) return false;
      for (int i = 1; i < node.count; ++i) {
        if (!eval_node(k[i], env, a)) return false;
        out = node.op == Op::Min ? std::min(out, a) : std::max(out, a);
      }
      return true;
    case Op::Dist:
      if (!eval_node(k[0], env, a) || !eval_node(k[1], env, b) || __builtin_sub_overflow(a, b, &out)) {
        return false;
      }
      if (out == std::numeric_limits<Value>::min()) return false;
      out = out < 0 ? -out : out;
      return true;
    case Op::Eq:
      if (!eval_node(k[0], env, a)) return false;
      for (int i = 1; i < node.count; ++i) {
        if (!eval_node(k[i], env, b)) return false;
        if (a != b) {
          out = 0;
          return true;
        }
      }
      out = 1;
      return true;
    case Op::Ne:
    case Op::Lt:
    case Op::Le:
    case Op::Gt:
    case Op::Ge:
      if (!eval_node(k[0], env, a) || !eval_node(k[1], env, b)) return false;
      switch (node.op) {
        case Op::Ne: out = a != b; break;
        case Op::Lt: out = a < b; break;
        case Op::Le: out = a <= b; break;
        case Op::Gt: out = a > b; break;
        default: out = a >= b; break;
      }
      return true;
    case Op::And:
      for (int i = 0; i < node.count; ++i) {
        if (!eval_node(k[i], env, a)) return false;
        if (a == 0) {
          out = 0;
          return true;
        }
      }
      out = 1;
      return true;
    case Op::Or:
      for (int i = 0; i < node.count; ++i) {
        if (!eval_node(k[i], env, a)) return false;
        if (a != 0) {
          out = 1;
          return true;
        }
      }
      out = 0;
      return true;
    case Op::Not:
      if (!eval_node(k[0], env, a)) return false;
      out = a == 0;
      return true;
    case Op::Xor: {
      bool r = false;
      for (int i = 0; i < node.count; ++i) {
        if (!eval_node(k[i], env, a)) return false;
        r ^= a != 0;
      }
      out = r;
      return true;
    }
    case Op::Iff: {
      if (!eval_node(k[0], env, a)) return false;
      bool first = a != 0;
      for (int i = 1; i < node.count; ++i) {
        if (!eval_node(k[i], env, b)) return false;
        if ((b != 0) != first) {
          out = 0;
          return true;
        }
      }
      out = 1;
      return true;
    }
    case Op::Imp:
      if (!eval_node(k[0], env, a)) return false;
      if (a == 0) {
        out = 1;
        return true;
      }
      if (!eval_node(k[1], env, b)) return false;
      out = b != 0;
      return true;
    case Op::If:
      if (!eval_node(k[0], env, a)) return false;
      return eval_node(a != 0 ? k[1] : k[2], env, out);
    case Op::In: {
      if (!eval_node(k[0], env, a)) return false;
      const auto& set = sets_[static_cast<std::size_t>(node.value)];
      out = std::binary_search(set.begin(), set.end(), a);
      return true;
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// Conditions

Range allowed(const Condition& c, const DomainStore& s) {
  Range full{-kInf, kInf};
  if (const auto* k = std::get_if<Value>(&c.rhs)) {
    switch (c.op) {
      case CmpOp::Lt: return {-kInf, i128{*k} - 1};
      case CmpOp::Le: return {-kInf, *k};
      case CmpOp::Ge: return {*k, kInf};
      case CmpOp::Gt: return {i128{*k} + 1, kInf};
      case CmpOp::Eq:
      case CmpOp::In: return {*k, *k};
      default: return full;
    }
  }
  if (const auto* r = std::get_if<VarRef>(&c.rhs)) {
    const i128 lo = s.min(r->id), hi = s.max(r->id);
    switch (c.op) {
      case CmpOp::Lt: return {-kInf, hi - 1};
      case CmpOp::Le: return {-kInf, hi};
      case CmpOp::Ge: return {lo, kInf};
      case CmpOp::Gt: return {lo + 1, kInf};
      case CmpOp::Eq: return {lo, hi};
      default: return full;
    }
  }
  if (const auto* iv = std::get_if<Interval>(&c.rhs)) {
    if (c.op == CmpOp::In) return {iv->lo, iv->hi};
    return full;
  }
  const auto& set = std::get<std::vector<Value>>(c.rhs);
  if (c.op == CmpOp::In) {
    if (set.empty()) return {1, 0};
    return {*std::min_element(set.begin(), set.end()), *std::max_element(set.begin(), set.end())};
  }
  return full;
}

bool prune_rhs(const Condition& c, DomainStore& s, i128 lo, i128 hi) {
  const auto* r = std::get_if<VarRef>(&c.rhs);
  if (!r) return true;
  const VarId y = r->id;
  switch (c.op) {
    case CmpOp::Lt: return s.set_min(y, to_value(lo + 1));
    case CmpOp::Le: return s.set_min(y, to_value(lo));
    case CmpOp::Ge: return s.set_max(y, to_value(hi));
    case CmpOp::Gt: return s.set_max(y, to_value(hi - 1));
    case CmpOp::Eq: return s.set_min(y, to_value(lo)) && s.set_max(y, to_value(hi));
    case CmpOp::Ne:
      if (lo == hi) return s.remove(y, to_value(lo));
      return true;
    default: return true;
  }
}

bool holds(const Condition& c, i128 lhs, const DomainStore& s) {
  auto cmp = [&](i128 k) {
    switch (c.op) {
      case CmpOp::Lt: return lhs < k;
      case CmpOp::Le: return lhs <= k;
      case CmpOp::Ge: return lhs >= k;
      case CmpOp::Gt: return lhs > k;
      case CmpOp::Eq:
      case CmpOp::In: return lhs == k;
      case CmpOp::Ne:
      case CmpOp::NotIn: return lhs != k;
    }
    return false;
  };
  if (const auto* k = std::get_if<Value>(&c.rhs)) return cmp(*k);
  if (const auto* r = std::get_if<VarRef>(&c.rhs)) return cmp(s.min(r->id));
  if (const auto* iv = std::get_if<Interval>(&c.rhs)) {
    bool in = lhs >= iv->lo && lhs <= iv->hi;
    return c.op == CmpOp::NotIn ? !in : in;
  }
  const auto& set = std::get<std::vector<Value>>(c.rhs);
  bool in = std::find(set.begin(), set.end(), lhs) != set.end();
  return c.op == CmpOp::NotIn ? !in : in;
}

bool rhs_fixed(const Condition& c, const DomainStore& s) {
  const auto* r = std::get_if<VarRef>(&c.rhs);
  return !r || s.fixed(r->id);
}

std::vector<VarId> rhs_vars(const Condition& c) {
  if (const auto* r = std::get_if<VarRef>(&c.rhs)) return {r->id};
  return {};
}

namespace {

std::vector<VarId> distinct(std::vector<VarId> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

i128 product_of_sizes(const DomainStore& s, const std::vector<VarId>& vars, i128 cap) {
  i128 p = 1;
  for (VarId v : vars) {
    p *= s.size(v);
    if (p > cap) return cap + 1;
  }
  return p;
}

// Removes every value of each variable not flagged in `ok`.
bool keep_flagged(DomainStore& s, const std::vector<VarId>& vars,
                  const std::vector<std::vector<Value>>& vals,
                  const std::vector<std::vector<char>>& ok) {
  for (std::size_t i = 0; i < vars.size(); ++i) {
    for (std::size_t j = 0; j < vals[i].size(); ++j) {
      if (!ok[i][j] && !s.remove(vars[i], vals[i][j])) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Positive table: simple tabular reduction with a trailed table size.

class PositiveTable : public Propagator {
 public:
  PositiveTable(std::vector<VarId> scope, const std::vector<Tuple>& tuples, const DomainStore& s)
      : Propagator(scope), arity_(scope.size()) {
    for (const auto& t : tuples) {
      bool ok = true;
      for (std::size_t i = 0; i < arity_ && ok; ++i) {
        ok = t[i] == kStar || std::binary_search(s.initial(scope[i]).begin(), s.initial(scope[i]).end(), t[i]) ||
             s.is_interval_var(scope[i]);
      }
      if (!ok) continue;
      data_.insert(data_.end(), t.begin(), t.end());
      order_.push_back(static_cast<std::uint32_t>(order_.size()));
    }
    limit_.value = static_cast<std::int64_t>(order_.size());
  }

  PropStatus propagate(DomainStore& s) override {
    std::size_t limit = static_cast<std::size_t>(limit_.value);
    std::vector<std::vector<Value>> vals(arity_);
    std::vector<std::vector<char>> ok(arity_);
    std::vector<char> all(arity_, 0);
    std::size_t unsupported = 0;
    for (std::size_t i = 0; i < arity_; ++i) {
      vals[i] = s.values(vars_[i]);
      ok[i].assign(vals[i].size(), 0);
      unsupported += vals[i].size();
    }
    auto index_in = [&](std::size_t i, Value x) -> std::ptrdiff_t {
      auto it = std::lower_bound(vals[i].begin(), vals[i].end(), x);
      if (it == vals[i].end() || *it != x) return -1;
      return it - vals[i].begin();
    };
    for (std::size_t k = 0; k < limit;) {
      const Value* t = data_.data() + static_cast<std::size_t>(order_[k]) * arity_;
      bool valid = true;
      for (std::size_t i = 0; i < arity_ && valid; ++i) {
        valid = t[i] == kStar || s.contains(vars_[i], t[i]);
      }
      if (!valid) {
        std::swap(order_[k], order_[limit - 1]);
        --limit;
        continue;
      }
      if (unsupported > 0) {
        for (std::size_t i = 0; i < arity_; ++i) {
          if (all[i]) continue;
          if (t[i] == kStar) {
            all[i] = 1;
            for (auto& f : ok[i]) {
              if (!f) {
                f = 1;
                --unsupported;
              }
            }
            continue;
          }
          auto j = index_in(i, t[i]);
          if (!ok[i][j]) {
            ok[i][j] = 1;
            --unsupported;
          }
        }
      }
      ++k;
    }
    s.set(limit_, static_cast<std::int64_t>(limit));
    if (limit == 0) return PropStatus::Failed;
    if (!keep_flagged(s, vars_, vals, ok)) return PropStatus::Failed;
    bool fixed = std::all_of(vars_.begin(), vars_.end(), [&](VarId v) { return s.fixed(v); });
    return fixed ? PropStatus::Entailed : PropStatus::Ok;
  }

 private:
  std::size_t arity_;
  std::vector<Value> data_;
  std::vector<std::uint32_t> order_;
  RevInt limit_;
};

// ---------------------------------------------------------------------------
// Negative table: conflict counting on small products, forward checking
// otherwise.

class NegativeTable : public Propagator {
 public:
  NegativeTable(std::vector<VarId> scope, const std::vector<Tuple>& tuples, const DomainStore& s)
      : Propagator(scope), arity_(scope.size()), tuples_(tuples) {
    std::sort(tuples_.begin(), tuples_.end());
    tuples_.erase(std::unique(tuples_.begin(), tuples_.end()), tuples_.end());
    bool star = std::any_of(tuples.begin(), tuples.end(), [](const Tuple& t) {
      return std::find(t.begin(), t.end(), kStar) != t.end();
    });
    counting_ = !star && product_of_sizes(s, vars_, 1'000'000) <= 1'000'000;
    starred_ = star;
  }

  PropStatus propagate(DomainStore& s) override {
    if (counting_) return count(s);
    if (starred_ && product_of_sizes(s, distinct(vars_), kExpandLimit) <= kExpandLimit) return expand(s);
    return forward(s);
  }

 private:
  bool matches(const Tuple& t, const DomainStore& s) const {
    for (std::size_t i = 0; i < arity_; ++i) {
      if (t[i] != kStar && !s.contains(vars_[i], t[i])) return false;
    }
    return true;
  }

  PropStatus count(DomainStore& s) {
    std::vector<std::vector<Value>> vals(arity_);
    for (std::size_t i = 0; i < arity_; ++i) vals[i] = s.values(vars_[i]);
    std::vector<std::vector<i128>> conflicts(arity_);
    for (std::size_t i = 0; i < arity_; ++i) conflicts[i].assign(vals[i].size(), 0);
    // Variables may repeat in the scope; a tuple giving one variable two
    // values is never realized and is skipped.
    for (const auto& t : tuples_) {
      if (!matches(t, s) || !coherent(t)) continue;
      for (std::size_t i = 0; i < arity_; ++i) {
        auto it = std::lower_bound(vals[i].begin(), vals[i].end(), t[i]);
        ++conflicts[i][it - vals[i].begin()];
      }
    }
    // sizes as they were when the conflicts were counted
    auto dv = distinct(vars_);
    std::vector<std::uint64_t> sizes;
    for (VarId v : dv) sizes.push_back(s.size(v));
    for (std::size_t i = 0; i < arity_; ++i) {
      i128 others = 1;
      for (std::size_t k = 0; k < dv.size(); ++k) {
        if (dv[k] != vars_[i]) others *= sizes[k];
      }
      for (std::size_t j = 0; j < vals[i].size(); ++j) {
        if (conflicts[i][j] >= others && !s.remove(vars_[i], vals[i][j])) return PropStatus::Failed;
      }
    }
    bool fixed = std::all_of(vars_.begin(), vars_.end(), [&](VarId v) { return s.fixed(v); });
    return fixed ? PropStatus::Entailed : PropStatus::Ok;
  }

  static constexpr std::uint64_t kExpandLimit = 100'000;

  // Starred conflicts expanded into ground tuples over the distinct
  // variables, then counted as above.
  PropStatus expand(DomainStore& s) {
    const auto dv = distinct(vars_);
    std::vector<std::vector<Value>> vals(dv.size());
    for (std::size_t k = 0; k < dv.size(); ++k) vals[k] = s.values(dv[k]);
    std::vector<std::size_t> slot(arity_);
    for (std::size_t i = 0; i < arity_; ++i) slot[i] = static_cast<std::size_t>(std::find(dv.begin(), dv.end(), vars_[i]) - dv.begin());

    std::set<std::vector<Value>> ground;
    std::vector<Value> g(dv.size());
    for (const auto& t : tuples_) {
      if (!matches(t, s) || !coherent(t)) continue;
      // fixed coordinates from the tuple, the rest enumerated
      std::vector<char> set(dv.size(), 0);
      for (std::size_t i = 0; i < arity_; ++i) {
        if (t[i] != kStar) {
          g[slot[i]] = t[i];
          set[slot[i]] = 1;
        }
      }
      std::vector<std::size_t> free;
      for (std::size_t k = 0; k < dv.size(); ++k) {
        if (!set[k]) free.push_back(k);
      }
      std::vector<std::size_t> at(free.size(), 0);
      while (true) {
        for (std::size_t f = 0; f < free.size(); ++f) g[free[f]] = vals[free[f]][at[f]];
        ground.insert(g);
        std::size_t f = 0;
        while (f < free.size() && ++at[f] == vals[free[f]].size()) at[f++] = 0;
        if (f == free.size()) break;
      }
    }
    std::vector<std::map<Value, std::uint64_t>> conflicts(dv.size());
    for (const auto& gt : ground) {
      for (std::size_t k = 0; k < dv.size(); ++k) ++conflicts[k][gt[k]];
    }
    std::vector<std::uint64_t> sizes;
    for (const auto& v : vals) sizes.push_back(v.size());
    for (std::size_t k = 0; k < dv.size(); ++k) {
      std::uint64_t others = 1;
      for (std::size_t o = 0; o < dv.size(); ++o) {
        if (o != k) others *= sizes[o];
      }
      for (const auto& [value, n] : conflicts[k]) {
        if (n >= others && !s.remove(dv[k], value)) return PropStatus::Failed;
      }
    }
    bool fixed = std::all_of(vars_.begin(), vars_.end(), [&](VarId v) { return s.fixed(v); });
    return fixed ? PropStatus::Entailed : PropStatus::Ok;
  }

  bool coherent(const Tuple& t) const {
    for (std::size_t i = 0; i < arity_; ++i) {
      for (std::size_t j = i + 1; j < arity_; ++j) {
        if (vars_[i] == vars_[j] && t[i] != t[j] && t[i] != kStar && t[j] != kStar) return false;
      }
    }
    return true;
  }

  PropStatus forward(DomainStore& s) {
    int free = -1;
    for (std::size_t i = 0; i < arity_; ++i) {
      if (s.fixed(vars_[i])) continue;
      if (free >= 0 && vars_[static_cast<std::size_t>(free)] != vars_[i]) return PropStatus::Ok;
      free = static_cast<int>(i);
    }
    if (free < 0) {
      for (const auto& t : tuples_) {
        if (matches(t, s)) return PropStatus::Failed;
      }
      return PropStatus::Entailed;
    }
    const VarId x = vars_[static_cast<std::size_t>(free)];
    for (const auto& t : tuples_) {
      bool hit = true;
      Value forced = kStar;
      for (std::size_t i = 0; i < arity_ && hit; ++i) {
        if (vars_[i] == x) {
          if (t[i] == kStar) continue;
          if (forced != kStar && forced != t[i]) hit = false;
          forced = t[i];
        } else {
          hit = t[i] == kStar || t[i] == s.value(vars_[i]);
        }
      }
      if (!hit) continue;
      if (forced == kStar) return PropStatus::Failed;
      if (!s.remove(x, forced)) return PropStatus::Failed;
    }
    return PropStatus::Ok;
  }

  std::size_t arity_;
  std::vector<Tuple> tuples_;
  bool starred_ = false;
  bool counting_ = false;
};

// ---------------------------------------------------------------------------
// Intension: support enumeration on small products, HC4-style interval
// narrowing otherwise.

struct Iv {
  i128 lo;
  i128 hi;
};

class IntensionProp : public Propagator {
 public:
  explicit IntensionProp(const Expr& e)
      : Propagator(collect(e)), expr_(e), prog_(e, vars_) {
    flatten(expr_);
    // eq(v, f) with v outside f: enumerate f's variables only.
    if (e.op == Op::Eq && e.args.size() == 2) {
      for (int side = 0; side < 2; ++side) {
        const Expr& v = e.args[static_cast<std::size_t>(side)];
        const Expr& f = e.args[static_cast<std::size_t>(1 - side)];
        std::vector<VarId> fv;
        collect_vars(f, fv);
        if (v.is_var() && std::find(fv.begin(), fv.end(), v.var_id()) == fv.end()) {
          out_ = v.var_id();
          in_vars_ = distinct(fv);
          fprog_.emplace(f, in_vars_);
          break;
        }
      }
    }
  }

  PropStatus propagate(DomainStore& s) override {
    bool all_fixed = true;
    for (VarId v : vars_) all_fixed = all_fixed && s.fixed(v);
    if (all_fixed) return check(s);
    PropStatus st;
    if (fprog_ && product_of_sizes(s, in_vars_, kLimit) <= kLimit) {
      st = functional(s);
    } else if (!fprog_ && product_of_sizes(s, vars_, kLimit) <= kLimit) {
      st = enumerate(s);
    } else {
      st = narrow(s);
    }
    if (st != PropStatus::Ok) return st;
    for (VarId v : vars_) {
      if (!s.fixed(v)) return PropStatus::Ok;
    }
    return check(s);
  }

 private:
  static constexpr i128 kLimit = 100'000;

  static std::vector<VarId> collect(const Expr& e) {
    std::vector<VarId> v;
    collect_vars(e, v);
    return distinct(std::move(v));
  }

  PropStatus check(DomainStore& s) {
    std::vector<Value> env(vars_.size());
    for (std::size_t i = 0; i < vars_.size(); ++i) env[i] = s.value(vars_[i]);
    Value r;
    if (!prog_.eval(env.data(), r) || r == 0) return PropStatus::Failed;
    return PropStatus::Entailed;
  }

  PropStatus enumerate(DomainStore& s) {
    const std::size_t n = vars_.size();
    std::vector<std::vector<Value>> vals(n);
    std::vector<std::vector<char>> ok(n);
    std::size_t unsupported = 0;
    for (std::size_t i = 0; i < n; ++i) {
      vals[i] = s.values(vars_[i]);
      ok[i].assign(vals[i].size(), 0);
      unsupported += vals[i].size();
    }
    std::vector<std::size_t> idx(n, 0);
    std::vector<Value> env(n);
    for (std::size_t i = 0; i < n; ++i) env[i] = vals[i][0];
    for (;;) {
      Value r;
      if (prog_.eval(env.data(), r) && r != 0) {
        for (std::size_t i = 0; i < n; ++i) {
          if (!ok[i][idx[i]]) {
            ok[i][idx[i]] = 1;
            --unsupported;
          }
        }
        if (unsupported == 0) break;
      }
      std::size_t i = 0;
      while (i < n) {
        if (++idx[i] < vals[i].size()) {
          env[i] = vals[i][idx[i]];
          break;
        }
        idx[i] = 0;
        env[i] = vals[i][0];
        ++i;
      }
      if (i == n) break;
    }
    return keep_flagged(s, vars_, vals, ok) ? PropStatus::Ok : PropStatus::Failed;
  }

  PropStatus functional(DomainStore& s) {
    const std::size_t n = in_vars_.size();
    std::vector<std::vector<Value>> vals(n);
    std::vector<std::vector<char>> ok(n);
    for (std::size_t i = 0; i < n; ++i) {
      vals[i] = s.values(in_vars_[i]);
      ok[i].assign(vals[i].size(), 0);
    }
    std::vector<Value> images;
    std::vector<std::size_t> idx(n, 0);
    std::vector<Value> env(n);
    for (std::size_t i = 0; i < n; ++i) env[i] = vals[i][0];
    for (;;) {
      Value r;
      if (fprog_->eval(env.data(), r) && s.contains(out_, r)) {
        images.push_back(r);
        for (std::size_t i = 0; i < n; ++i) ok[i][idx[i]] = 1;
      }
      std::size_t i = 0;
      while (i < n) {
        if (++idx[i] < vals[i].size()) {
          env[i] = vals[i][idx[i]];
          break;
        }
        idx[i] = 0;
        env[i] = vals[i][0];
        ++i;
      }
      if (i == n) break;
    }
    if (images.empty()) return PropStatus::Failed;
    std::sort(images.begin(), images.end());
    images.erase(std::unique(images.begin(), images.end()), images.end());
    if (!keep_flagged(s, in_vars_, vals, ok)) return PropStatus::Failed;
    if (s.is_interval_var(out_) && s.size(out_) > DomainStore::kMaxSparse) {
      if (!s.set_min(out_, images.front()) || !s.set_max(out_, images.back())) return PropStatus::Failed;
    } else if (!s.retain(out_, [&](Value x) { return std::binary_search(images.begin(), images.end(), x); })) {
      return PropStatus::Failed;
    }
    return PropStatus::Ok;
  }

  // ----- interval narrowing --------------------------------------------------

  void flatten(const Expr& e) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back(&e);
    kids_.emplace_back();
    for (const auto& a : e.args) {
      int k = static_cast<int>(nodes_.size());
      kids_[static_cast<std::size_t>(id)].push_back(k);
      flatten(a);
    }
  }

  static bool can_zero(Iv v) { return v.lo <= 0 && v.hi >= 0; }
  static bool is_zero(Iv v) { return v.lo == 0 && v.hi == 0; }
  static bool is_true(Iv v) { return !can_zero(v); }
  static Iv boolean(bool can_true, bool can_false) {
    return {can_false ? 0 : 1, can_true ? 1 : 0};
  }

  Iv forward(int n, const DomainStore& s) {
    const Expr& e = *nodes_[static_cast<std::size_t>(n)];
    const auto& k = kids_[static_cast<std::size_t>(n)];
    std::vector<Iv> a;
    for (int c : k) a.push_back(forward(c, s));
    Iv r{-kInf, kInf};
    auto corners = [](Iv x, Iv y) {
      i128 c[4] = {x.lo * y.lo, x.lo * y.hi, x.hi * y.lo, x.hi * y.hi};
      return Iv{clamp_lo(*std::min_element(c, c + 4)), clamp_hi(*std::max_element(c, c + 4))};
    };
    switch (e.op) {
      case Op::Const: r = {e.value, e.value}; break;
      case Op::Var: r = {s.min(e.var_id()), s.max(e.var_id())}; break;
      case Op::Param: break;
      case Op::Neg: r = {-a[0].hi, -a[0].lo}; break;
      case Op::Abs:
        if (a[0].lo >= 0) {
          r = a[0];
        } else if (a[0].hi <= 0) {
          r = {-a[0].hi, -a[0].lo};
        } else {
          r = {0, std::max(-a[0].lo, a[0].hi)};
        }
        break;
      case Op::Add:
        r = {0, 0};
        for (auto x : a) r = {clamp_lo(r.lo + x.lo), clamp_hi(r.hi + x.hi)};
        break;
      case Op::Sub: r = {a[0].lo - a[1].hi, a[0].hi - a[1].lo}; break;
      case Op::Mul:
        r = a[0];
        for (std::size_t i = 1; i < a.size(); ++i) r = corners(r, a[i]);
        break;
      case Op::Div: {
        if (can_zero(a[1])) {
          i128 m = std::max(-a[0].lo, a[0].hi);
          r = {-m, m};
        } else {
          i128 c[4] = {a[0].lo / a[1].lo, a[0].lo / a[1].hi, a[0].hi / a[1].lo, a[0].hi / a[1].hi};
          r = {*std::min_element(c, c + 4), *std::max_element(c, c + 4)};
        }
        break;
      }
      case Op::Mod: {
        i128 m = std::max(-a[1].lo, a[1].hi) - 1;
        if (m < 0) m = 0;
        if (a[0].lo >= 0) {
          r = {0, std::min(a[0].hi, m)};
        } else if (a[0].hi <= 0) {
          r = {-std::min(-a[0].lo, m), 0};
        } else {
          r = {-m, m};
        }
        break;
      }
      case Op::Min:
      case Op::Max:
        r = a[0];
        for (std::size_t i = 1; i < a.size(); ++i) {
          if (e.op == Op::Min) {
            r = {std::min(r.lo, a[i].lo), std::min(r.hi, a[i].hi)};
          } else {
            r = {std::max(r.lo, a[i].lo), std::max(r.hi, a[i].hi)};
          }
        }
        break;
      case Op::Dist: {
        Iv d{a[0].lo - a[1].hi, a[0].hi - a[1].lo};
        if (d.lo >= 0) {
          r = d;
        } else if (d.hi <= 0) {
          r = {-d.hi, -d.lo};
        } else {
          r = {0, std::max(-d.lo, d.hi)};
        }
        break;
      }
      case Op::Eq: {
        i128 lo = a[0].lo, hi = a[0].hi;
        bool single = a[0].lo == a[0].hi;
        for (std::size_t i = 1; i < a.size(); ++i) {
          lo = std::max(lo, a[i].lo);
          hi = std::min(hi, a[i].hi);
          single = single && a[i].lo == a[i].hi && a[i].lo == a[0].lo;
        }
        r = boolean(lo <= hi, !single);
        break;
      }
      case Op::Ne: {
        bool disjoint = a[0].hi < a[1].lo || a[1].hi < a[0].lo;
        bool same = a[0].lo == a[0].hi && a[1].lo == a[1].hi && a[0].lo == a[1].lo;
        r = boolean(!same, !disjoint);
        break;
      }
      case Op::Lt: r = boolean(a[0].lo < a[1].hi, a[0].hi >= a[1].lo); break;
      case Op::Le: r = boolean(a[0].lo <= a[1].hi, a[0].hi > a[1].lo); break;
      case Op::Gt: r = boolean(a[0].hi > a[1].lo, a[0].lo <= a[1].hi); break;
      case Op::Ge: r = boolean(a[0].hi >= a[1].lo, a[0].lo < a[1].hi); break;
      case Op::And: {
        bool t = true, f = false;
        for (auto x : a) {
          t = t && !is_zero(x);
          f = f || can_zero(x);
        }
        r = boolean(t, f);
        break;
      }
      case Op::Or: {
        bool t = false, f = true;
        for (auto x : a) {
          t = t || !is_zero(x);
          f = f && can_zero(x);
        }
        r = boolean(t, f);
        break;
      }
      case Op::Not: r = boolean(can_zero(a[0]), !is_zero(a[0])); break;
      case Op::Imp:
        r = boolean(can_zero(a[0]) || !is_zero(a[1]), !is_zero(a[0]) && can_zero(a[1]));
        break;
      case Op::If:
        if (is_true(a[0])) {
          r = a[1];
        } else if (is_zero(a[0])) {
          r = a[2];
        } else {
          r = {std::min(a[1].lo, a[2].lo), std::max(a[1].hi, a[2].hi)};
        }
        break;
      case Op::In: {
        const auto& set = e.set;
        bool any = std::any_of(set.begin(), set.end(), [&](Value v) { return v >= a[0].lo && v <= a[0].hi; });
        bool single = a[0].lo == a[0].hi;
        bool member = single && std::binary_search(set.begin(), set.end(), static_cast<Value>(a[0].lo));
        r = boolean(any, !member);
        break;
      }
      case Op::Xor:
      case Op::Iff:
        r = {0, 1};
        break;
    }
    r = {clamp_lo(r.lo), clamp_hi(r.hi)};
    iv_[static_cast<std::size_t>(n)] = r;
    return r;
  }

  // Narrow node n into [lo, hi]; false on wipe-out.
  bool back(int n, i128 lo, i128 hi, DomainStore& s) {
    Iv& cur = iv_[static_cast<std::size_t>(n)];
    cur.lo = std::max(cur.lo, lo);
    cur.hi = std::min(cur.hi, hi);
    if (cur.lo > cur.hi) return false;
    const Expr& e = *nodes_[static_cast<std::size_t>(n)];
    const auto& k = kids_[static_cast<std::size_t>(n)];
    auto kid = [&](std::size_t i) -> Iv& { return iv_[static_cast<std::size_t>(k[i])]; };
    const Iv t = cur;
    switch (e.op) {
      case Op::Var:
        return s.set_min(e.var_id(), to_value(t.lo)) && s.set_max(e.var_id(), to_value(t.hi));
      case Op::Neg:
        return back(k[0], -t.hi, -t.lo, s);
      case Op::Add: {
        i128 slo = 0, shi = 0;
        for (std::size_t i = 0; i < k.size(); ++i) {
          slo += kid(i).lo;
          shi += kid(i).hi;
        }
        for (std::size_t i = 0; i < k.size(); ++i) {
          Iv c = kid(i);
          if (!back(k[i], t.lo - (shi - c.hi), t.hi - (slo - c.lo), s)) return false;
        }
        return true;
      }
      case Op::Sub: {
        Iv a = kid(0), b = kid(1);
        return back(k[0], t.lo + b.lo, t.hi + b.hi, s) && back(k[1], a.lo - t.hi, a.hi - t.lo, s);
      }
      case Op::Mul:
        if (k.size() == 2) {
          for (std::size_t i = 0; i < 2; ++i) {
            Iv c = kid(1 - i);
            if (c.lo != c.hi || c.lo == 0) continue;
            i128 lo2 = c.lo > 0 ? ceil_div(t.lo, c.lo) : ceil_div(t.hi, c.lo);
            i128 hi2 = c.lo > 0 ? floor_div(t.hi, c.lo) : floor_div(t.lo, c.lo);
            if (t.lo <= -kInf / 2 || t.hi >= kInf / 2) continue;
            if (!back(k[i], lo2, hi2, s)) return false;
          }
        }
        return true;
      case Op::Abs: {
        Iv c = kid(0);
        if (c.lo >= 0) return back(k[0], t.lo, t.hi, s);
        if (c.hi <= 0) return back(k[0], -t.hi, -t.lo, s);
        return back(k[0], -t.hi, t.hi, s);
      }
      case Op::Dist: {
        Iv a = kid(0), b = kid(1);
        return back(k[0], b.lo - t.hi, b.hi + t.hi, s) && back(k[1], a.lo - t.hi, a.hi + t.hi, s);
      }
      case Op::Min:
      case Op::Max: {
        bool is_min = e.op == Op::Min;
        int reach = -1, count = 0;
        for (std::size_t i = 0; i < k.size(); ++i) {
          if (is_min ? !back(k[i], t.lo, kInf, s) : !back(k[i], -kInf, t.hi, s)) return false;
          if (is_min ? kid(i).lo <= t.hi : kid(i).hi >= t.lo) {
            reach = static_cast<int>(i);
            ++count;
          }
        }
        if (count == 0) return false;
        if (count == 1) {
          auto i = static_cast<std::size_t>(reach);
          return is_min ? back(k[i], -kInf, t.hi, s) : back(k[i], t.lo, kInf, s);
        }
        return true;
      }
      case Op::If: {
        Iv c = kid(0);
        if (is_true(c)) return back(k[1], t.lo, t.hi, s);
        if (is_zero(c)) return back(k[2], t.lo, t.hi, s);
        return true;
      }
      default:
        break;
    }
    if (!is_boolean(e.op) || t.lo != t.hi) return true;
    return logic(n, t.lo == 1, s);
  }

  bool make_true(int n, DomainStore& s) {
    const Expr& e = *nodes_[static_cast<std::size_t>(n)];
    Iv c = iv_[static_cast<std::size_t>(n)];
    if (is_boolean(e.op)) return back(n, 1, 1, s);
    if (c.lo == 0) return back(n, 1, kInf, s);
    if (c.hi == 0) return back(n, -kInf, -1, s);
    return true;
  }
  bool make_false(int n, DomainStore& s) { return back(n, 0, 0, s); }
  bool make(int n, bool truth, DomainStore& s) { return truth ? make_true(n, s) : make_false(n, s); }

  // x != v for a variable x and a fixed side.
  bool exclude(int x, int v, DomainStore& s) {
    const Expr& ex = *nodes_[static_cast<std::size_t>(x)];
    Iv c = iv_[static_cast<std::size_t>(v)];
    if (ex.is_var() && c.lo == c.hi) return s.remove(ex.var_id(), to_value(c.lo));
    return true;
  }

  bool logic(int n, bool truth, DomainStore& s) {
    const Expr& e = *nodes_[static_cast<std::size_t>(n)];
    const auto& k = kids_[static_cast<std::size_t>(n)];
    auto kid = [&](std::size_t i) { return iv_[static_cast<std::size_t>(k[i])]; };
    Op op = e.op;
    if (op == Op::Ne) {
      op = Op::Eq;
      truth = !truth;
    }
    switch (op) {
      case Op::Eq:
        if (truth) {
          i128 lo = -kInf, hi = kInf;
          for (std::size_t i = 0; i < k.size(); ++i) {
            lo = std::max(lo, kid(i).lo);
            hi = std::min(hi, kid(i).hi);
          }
          for (int c : k) {
            if (!back(c, lo, hi, s)) return false;
          }
          return true;
        }
        if (k.size() == 2) return exclude(k[0], k[1], s) && exclude(k[1], k[0], s);
        return true;
      case Op::Lt:
      case Op::Le:
      case Op::Gt:
      case Op::Ge: {
        // Normalize to a <= b - gap.
        int a = k[0], b = k[1];
        bool strict = op == Op::Lt || op == Op::Gt;
        if (op == Op::Gt || op == Op::Ge) std::swap(a, b);
        if (!truth) {
          std::swap(a, b);
          strict = !strict;
        }
        i128 gap = strict ? 1 : 0;
        Iv ia = iv_[static_cast<std::size_t>(a)], ib = iv_[static_cast<std::size_t>(b)];
        return back(a, -kInf, ib.hi - gap, s) && back(b, ia.lo + gap, kInf, s);
      }
      case Op::And:
        if (truth) {
          for (int c : k) {
            if (!make_true(c, s)) return false;
          }
          return true;
        } else {
          int open = -1, count = 0;
          for (std::size_t i = 0; i < k.size(); ++i) {
            if (!is_true(kid(i))) {
              open = k[i];
              ++count;
            }
          }
          if (count == 0) return false;
          return count == 1 ? make_false(open, s) : true;
        }
      case Op::Or:
        if (!truth) {
          for (int c : k) {
            if (!make_false(c, s)) return false;
          }
          return true;
        } else {
          int open = -1, count = 0;
          for (std::size_t i = 0; i < k.size(); ++i) {
            if (!is_zero(kid(i))) {
              open = k[i];
              ++count;
            }
          }
          if (count == 0) return false;
          return count == 1 ? make_true(open, s) : true;
        }
      case Op::Not:
        return make(k[0], !truth, s);
      case Op::Imp:
        if (!truth) return make_true(k[0], s) && make_false(k[1], s);
        if (is_true(kid(0))) return make_true(k[1], s);
        if (is_zero(kid(1))) return make_false(k[0], s);
        return true;
      case Op::Iff:
      case Op::Xor:
        if (k.size() == 2) {
          bool same = (op == Op::Iff) == truth;
          for (std::size_t i = 0; i < 2; ++i) {
            Iv c = kid(i);
            if (is_true(c)) return make(k[1 - i], same, s);
            if (is_zero(c)) return make(k[1 - i], !same, s);
          }
        }
        return true;
      case Op::In: {
        const Expr& x = *nodes_[static_cast<std::size_t>(k[0])];
        if (!x.is_var()) return true;
        const VarId v = x.var_id();
        if (truth) {
          if (e.set.empty()) return false;
          if (!s.set_min(v, e.set.front()) || !s.set_max(v, e.set.back())) return false;
          if (s.size(v) <= DomainStore::kMaxSparse) {
            return s.retain(v, [&](Value y) { return std::binary_search(e.set.begin(), e.set.end(), y); });
          }
          return true;
        }
        for (Value y : e.set) {
          if (!s.remove(v, y)) return false;
        }
        return true;
      }
      default:
        return true;
    }
  }

  PropStatus narrow(DomainStore& s) {
    iv_.assign(nodes_.size(), Iv{0, 0});
    Iv root = forward(0, s);
    if (is_zero(root)) return PropStatus::Failed;
    if (is_true(root)) return PropStatus::Entailed;
    return make_true(0, s) ? PropStatus::Ok : PropStatus::Failed;
  }

  Expr expr_;
  Program prog_;
  VarId out_ = -1;
  std::vector<VarId> in_vars_;
  std::optional<Program> fprog_;
  std::vector<const Expr*> nodes_;
  std::vector<std::vector<int>> kids_;
  std::vector<Iv> iv_;
};

}  // namespace

PropPtr make_table(std::vector<VarId> scope, const std::vector<Tuple>& tuples, bool positive,
                   const DomainStore& s) {
  if (positive) return std::make_unique<PositiveTable>(std::move(scope), tuples, s);
  return std::make_unique<NegativeTable>(std::move(scope), tuples, s);
}

PropPtr make_intension(const Expr& e) { return std::make_unique<IntensionProp>(e); }

}  // namespace xcsp::detail
