#include "xcsp/engine.hpp"

#include <algorithm>
#include <set>

#include "propagators.hpp"

namespace xcsp {

using detail::i128;

namespace {

constexpr i128 kEnumLimit = 100'000;

// Coarse interval of an expression over the current domains.
detail::Range bounds(const Expr& e, const DomainStore& s) {
  using detail::clamp_hi;
  using detail::clamp_lo;
  auto r = [&](const Expr& x) { return bounds(x, s); };
  auto mk = [](i128 lo, i128 hi) { return detail::Range{clamp_lo(lo), clamp_hi(hi)}; };
  switch (e.op) {
    case Op::Const: return {e.value, e.value};
    case Op::Var: return {s.min(e.var_id()), s.max(e.var_id())};
    case Op::Neg: {
      auto a = r(e.args[0]);
      return mk(-a.hi, -a.lo);
    }
    case Op::Abs:
    case Op::Dist: {
      detail::Range a = r(e.args[0]);
      if (e.op == Op::Dist) {
        auto b = r(e.args[1]);
        a = {a.lo - b.hi, a.hi - b.lo};
      }
      i128 hi = std::max(a.hi < 0 ? -a.hi : a.hi, a.lo < 0 ? -a.lo : a.lo);
      i128 lo = a.lo > 0 ? a.lo : (a.hi < 0 ? -a.hi : 0);
      return mk(lo, hi);
    }
    case Op::Add: {
      i128 lo = 0, hi = 0;
      for (const auto& x : e.args) {
        auto a = r(x);
        lo = clamp_lo(lo + a.lo);
        hi = clamp_hi(hi + a.hi);
      }
      return {lo, hi};
    }
    case Op::Sub: {
      auto a = r(e.args[0]), b = r(e.args[1]);
      return mk(a.lo - b.hi, a.hi - b.lo);
    }
    case Op::Mul: {
      detail::Range acc{1, 1};
      for (const auto& x : e.args) {
        auto a = r(x);
        i128 c[4] = {acc.lo * a.lo, acc.lo * a.hi, acc.hi * a.lo, acc.hi * a.hi};
        acc = mk(*std::min_element(c, c + 4), *std::max_element(c, c + 4));
      }
      return acc;
    }
    case Op::Div: {
      auto a = r(e.args[0]);
      i128 m = std::max(a.hi < 0 ? -a.hi : a.hi, a.lo < 0 ? -a.lo : a.lo);
      return mk(-m, m);
    }
    case Op::Mod: {
      auto a = r(e.args[0]), b = r(e.args[1]);
      i128 m = std::max(b.hi < 0 ? -b.hi : b.hi, b.lo < 0 ? -b.lo : b.lo);
      if (m > 0) --m;
      i128 lo = a.lo >= 0 ? 0 : -m, hi = a.hi <= 0 ? 0 : m;
      return mk(lo, hi);
    }
    case Op::Min:
    case Op::Max: {
      detail::Range acc = r(e.args[0]);
      for (std::size_t i = 1; i < e.args.size(); ++i) {
        auto a = r(e.args[i]);
        if (e.op == Op::Min) {
          acc = {std::min(acc.lo, a.lo), std::min(acc.hi, a.hi)};
        } else {
          acc = {std::max(acc.lo, a.lo), std::max(acc.hi, a.hi)};
        }
      }
      return acc;
    }
    case Op::If: {
      auto a = r(e.args[1]), b = r(e.args[2]);
      return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
    }
    default:
      if (is_boolean(e.op)) return {0, 1};
      return {std::numeric_limits<Value>::min(), std::numeric_limits<Value>::max()};
  }
}

std::vector<VarId> distinct_vars(const Expr& e) {
  std::vector<VarId> v;
  collect_vars(e, v);
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

i128 product_of_sizes(const DomainStore& s, const std::vector<VarId>& vars) {
  i128 p = 1;
  for (VarId v : vars) {
    p *= s.size(v);
    if (p > kEnumLimit) return kEnumLimit + 1;
  }
  return p;
}

// Image of e over the cartesian product of its variables' domains.
std::vector<Value> image(const Expr& e, const std::vector<VarId>& vars, const DomainStore& s) {
  detail::Program prog(e, vars);
  std::vector<std::vector<Value>> dom;
  for (VarId v : vars) dom.push_back(s.values(v));
  std::vector<std::size_t> idx(vars.size(), 0);
  std::vector<Value> env(vars.size());
  std::vector<Value> out;
  while (true) {
    for (std::size_t i = 0; i < vars.size(); ++i) env[i] = dom[i][idx[i]];
    Value r;
    if (prog.eval(env.data(), r)) out.push_back(r);
    std::size_t k = 0;
    while (k < vars.size() && ++idx[k] == dom[k].size()) idx[k++] = 0;
    if (k == vars.size()) break;
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Expr condition_expr(Expr lhs, const Condition& c) {
  if (const auto* k = std::get_if<Value>(&c.rhs)) {
    Op op = Op::Eq;
    switch (c.op) {
      case CmpOp::Lt: op = Op::Lt; break;
      case CmpOp::Le: op = Op::Le; break;
      case CmpOp::Ge: op = Op::Ge; break;
      case CmpOp::Gt: op = Op::Gt; break;
      case CmpOp::Ne:
      case CmpOp::NotIn: op = Op::Ne; break;
      default: op = Op::Eq;
    }
    return ex::bin(op, std::move(lhs), ex::cst(*k));
  }
  if (const auto* r = std::get_if<VarRef>(&c.rhs)) {
    Op op = Op::Eq;
    switch (c.op) {
      case CmpOp::Lt: op = Op::Lt; break;
      case CmpOp::Le: op = Op::Le; break;
      case CmpOp::Ge: op = Op::Ge; break;
      case CmpOp::Gt: op = Op::Gt; break;
      case CmpOp::Ne:
      case CmpOp::NotIn: op = Op::Ne; break;
      default: op = Op::Eq;
    }
    return ex::bin(op, std::move(lhs), ex::var(r->id));
  }
  Expr in;
  if (const auto* iv = std::get_if<Interval>(&c.rhs)) {
    in = ex::and_(ex::ge(lhs, ex::cst(iv->lo)), ex::le(lhs, ex::cst(iv->hi)));
  } else {
    in = Expr::in_set(std::move(lhs), std::get<std::vector<Value>>(c.rhs));
  }
  return c.op == CmpOp::NotIn ? ex::not_(std::move(in)) : in;
}

}  // namespace

// ---------------------------------------------------------------------------
// Compiler

void Compiler::add(std::unique_ptr<Propagator> p) {
  p->source = source_;
  out_.push_back(std::move(p));
}

VarId Compiler::term(const Expr& e) {
  if (e.is_var()) return e.var_id();
  if (e.is_const()) return store_.add_variable(Domain({e.value}));
  auto vars = distinct_vars(e);
  VarId aux;
  if (product_of_sizes(store_, vars) <= kEnumLimit) {
    auto img = image(e, vars, store_);
    if (img.empty()) {
      // no combination evaluates; the equality below fails at once
      aux = store_.add_variable(Domain({0}));
    } else {
      aux = store_.add_variable(Domain(std::move(img)));
    }
  } else {
    auto b = bounds(e, store_);
    aux = store_.add_interval(detail::to_value(b.lo), detail::to_value(b.hi));
  }
  add(detail::make_intension(ex::eq(ex::var(aux), e)));
  return aux;
}

void Compiler::compile(const Constraint& c, int source) {
  source_ = source;
  using namespace detail;
  std::visit(
      [&](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Slide> || std::is_same_v<K, Channel> || std::is_same_v<K, Mdd>) {
          for (const auto& piece : decompose_constraint(c)) compile(piece, source);
        } else if constexpr (std::is_same_v<K, Extension>) {
          add(make_table(k.scope, k.tuples, k.positive, store_));
        } else if constexpr (std::is_same_v<K, Intension>) {
          add(make_intension(k.expr));
        } else if constexpr (std::is_same_v<K, AllDifferent>) {
          std::vector<VarId> vars;
          for (const auto& e : k.list) vars.push_back(term(e));
          source_ = source;
          add(make_alldifferent(std::move(vars), k.except));
        } else if constexpr (std::is_same_v<K, AllEqual>) {
          add(make_allequal(k.list));
        } else if constexpr (std::is_same_v<K, Ordered>) {
          add(make_ordered(k.list, k.lengths, k.op));
        } else if constexpr (std::is_same_v<K, Lex>) {
          const bool strict = k.op == CmpOp::Lt || k.op == CmpOp::Gt;
          const bool swap = k.op == CmpOp::Gt || k.op == CmpOp::Ge;
          auto chain = [&](const std::vector<std::vector<VarId>>& lists) {
            for (std::size_t i = 0; i + 1 < lists.size(); ++i) {
              if (swap) {
                add(make_lex(lists[i + 1], lists[i], strict));
              } else {
                add(make_lex(lists[i], lists[i + 1], strict));
              }
            }
          };
          chain(k.lists);
          if (k.matrix && !k.lists.empty()) {
            std::vector<std::vector<VarId>> cols(k.lists[0].size());
            for (const auto& row : k.lists) {
              for (std::size_t j = 0; j < row.size(); ++j) cols[j].push_back(row[j]);
            }
            chain(cols);
          }
        } else if constexpr (std::is_same_v<K, Sum>) {
          compile_sum(k);
        } else if constexpr (std::is_same_v<K, Count>) {
          add(make_count(k.list, k.values, k.condition));
        } else if constexpr (std::is_same_v<K, NValues>) {
          add(make_nvalues(k.list, k.condition));
        } else if constexpr (std::is_same_v<K, Cardinality>) {
          add(make_cardinality(k.list, k.values, k.occurs, k.closed));
        } else if constexpr (std::is_same_v<K, Extremum>) {
          add(make_extremum(k.is_max, k.list, k.condition));
        } else if constexpr (std::is_same_v<K, Element>) {
          add(make_element(k.list, k.cols, k.start_index, k.index, k.col_index, k.value));
        } else if constexpr (std::is_same_v<K, NoOverlap>) {
          add(make_nooverlap(k.origins, k.lengths, k.zero_ignored));
        } else if constexpr (std::is_same_v<K, Cumulative>) {
          add(make_cumulative(k.origins, k.lengths, k.heights, k.condition));
        } else if constexpr (std::is_same_v<K, Circuit>) {
          add(make_alldifferent(k.list, {}));
          add(make_circuit(k.list));
        } else if constexpr (std::is_same_v<K, Instantiate>) {
          add(make_instantiate(k.list, k.values));
        } else if constexpr (std::is_same_v<K, Regular>) {
          add(make_regular(k.scope, k.automaton));
        }
      },
      c.kind);
}

void Compiler::compile_sum(const Sum& k) {
  const int source = source_;
  std::vector<VarId> all;
  for (const auto& t : k.terms) collect_vars(t, all);
  for (VarId v : detail::rhs_vars(k.condition)) all.push_back(v);
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  // Small sums go through the intension propagator, which is exact.
  if (all.size() <= 3 && product_of_sizes(store_, all) <= kEnumLimit) {
    std::vector<Expr> parts;
    for (std::size_t i = 0; i < k.terms.size(); ++i) {
      Value c = k.coeffs.empty() ? 1 : k.coeffs[i];
      parts.push_back(c == 1 ? k.terms[i] : ex::mul(ex::cst(c), k.terms[i]));
    }
    Expr lhs = parts.empty() ? ex::cst(0) : parts.size() == 1 ? parts[0] : ex::add(std::move(parts));
    add(detail::make_intension(condition_expr(std::move(lhs), k.condition)));
    return;
  }
  std::vector<VarId> vars;
  for (const auto& t : k.terms) vars.push_back(term(t));
  source_ = source;
  add(detail::make_linear(std::move(vars), k.coeffs, k.condition));
}

VarId Compiler::objective(const Objective& o) {
  source_ = -1;
  switch (o.kind) {
    case ObjectiveKind::Expression: return term(o.terms.at(0));
    case ObjectiveKind::Sum: {
      i128 lo = 0, hi = 0;
      for (std::size_t i = 0; i < o.terms.size(); ++i) {
        auto b = bounds(o.terms[i], store_);
        i128 c = o.coeffs.empty() ? 1 : o.coeffs[i];
        i128 a1 = c * b.lo, a2 = c * b.hi;
        lo = detail::clamp_lo(lo + std::min(a1, a2));
        hi = detail::clamp_hi(hi + std::max(a1, a2));
      }
      VarId z = store_.add_interval(detail::to_value(lo), detail::to_value(hi));
      std::vector<VarId> vars;
      for (const auto& t : o.terms) vars.push_back(term(t));
      add(detail::make_linear(std::move(vars), o.coeffs, Condition::cmp(CmpOp::Eq, VarRef{z})));
      return z;
    }
    case ObjectiveKind::Maximum:
    case ObjectiveKind::Minimum: {
      const bool is_max = o.kind == ObjectiveKind::Maximum;
      std::vector<VarId> vars;
      for (const auto& t : o.terms) vars.push_back(term(t));
      i128 lo = store_.min(vars[0]), hi = store_.max(vars[0]);
      for (VarId v : vars) {
        lo = is_max ? std::max<i128>(lo, store_.min(v)) : std::min<i128>(lo, store_.min(v));
        hi = is_max ? std::max<i128>(hi, store_.max(v)) : std::min<i128>(hi, store_.max(v));
      }
      VarId z = store_.add_interval(detail::to_value(lo), detail::to_value(hi));
      add(detail::make_extremum(is_max, std::move(vars), Condition::cmp(CmpOp::Eq, VarRef{z})));
      return z;
    }
    case ObjectiveKind::NValues: {
      std::vector<VarId> vars;
      for (const auto& t : o.terms) vars.push_back(term(t));
      VarId z = store_.add_interval(1, static_cast<Value>(std::max<std::size_t>(vars.size(), 1)));
      add(detail::make_nvalues(std::move(vars), Condition::cmp(CmpOp::Eq, VarRef{z})));
      return z;
    }
  }
  throw ModelError("unknown objective kind");
}

// ---------------------------------------------------------------------------
// Engine

Engine::Engine(const Instance& inst, EngineOptions opts) : store_(inst) {
  instance_vars_ = inst.variables.size();
  Compiler comp(store_, props_);
  for (std::size_t i = 0; i < inst.constraints.size(); ++i) comp.compile(inst.constraints[i], static_cast<int>(i));
  if (inst.objective) objective_var_ = comp.objective(*inst.objective);
  watch_.assign(store_.num_vars(), {});
  for (std::size_t p = 0; p < props_.size(); ++p) {
    auto vars = props_[p]->vars();
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    for (VarId v : vars) watch_[v].push_back(static_cast<int>(p));
  }
  queued_.assign(props_.size(), 0);
  if (opts.shuffle_seed) rng_.emplace(*opts.shuffle_seed);
}

void Engine::schedule(int p) {
  if (queued_[p] || !props_[p]->active.value) return;
  queued_[p] = 1;
  queue_.push_back(p);
}

void Engine::schedule_changed() {
  for (VarId v : store_.changed()) {
    for (int p : watch_[v]) schedule(p);
  }
  store_.clear_changed();
}

void Engine::clear_queue() {
  for (std::size_t i = head_; i < queue_.size(); ++i) queued_[queue_[i]] = 0;
  queue_.clear();
  head_ = 0;
}

PropagationOutcome Engine::fixpoint() {
  const std::uint64_t before = store_.removals();
  auto outcome = [&](bool failed) {
    return PropagationOutcome{failed ? PropagationOutcome::Status::Failed : PropagationOutcome::Status::Fixpoint,
                              store_.removals() - before};
  };
  if (store_.failed()) {
    clear_queue();
    store_.clear_changed();
    return outcome(true);
  }
  if (initial_) {
    initial_ = false;
    for (std::size_t p = 0; p < props_.size(); ++p) schedule(static_cast<int>(p));
    store_.clear_changed();
  } else {
    schedule_changed();
  }
  while (head_ < queue_.size()) {
    if (rng_) {
      std::uniform_int_distribution<std::size_t> pick(head_, queue_.size() - 1);
      std::swap(queue_[head_], queue_[pick(*rng_)]);
    }
    const int p = queue_[head_++];
    queued_[p] = 0;
    Propagator& prop = *props_[p];
    if (!prop.active.value) continue;
    PropStatus st = prop.propagate(store_);
    if (st == PropStatus::Failed || store_.failed()) {
      last_failure_ = p;
      prop.weight += 1.0;
      store_.set_failed();
      clear_queue();
      store_.clear_changed();
      return outcome(true);
    }
    if (st == PropStatus::Entailed) store_.set(prop.active, 0);
    schedule_changed();
    if (head_ == queue_.size()) {
      queue_.clear();
      head_ = 0;
    }
  }
  queue_.clear();
  head_ = 0;
  return outcome(false);
}

void Engine::pop_level() {
  store_.pop_level();
  clear_queue();
}

// ---------------------------------------------------------------------------
// Standalone propagation

PropagationOutcome fixpoint(DomainStore& store, const std::vector<Constraint>& constraints,
                            std::optional<std::uint64_t> shuffle_seed) {
  const std::uint64_t before = store.removals();
  auto done = [&](bool failed) {
    return PropagationOutcome{failed ? PropagationOutcome::Status::Failed : PropagationOutcome::Status::Fixpoint,
                              store.removals() - before};
  };
  if (store.failed()) return done(true);
  // Scratch copy at level 0 so that auxiliaries can be added.
  const std::size_t n = store.num_vars();
  Instance scratch_inst;
  DomainStore scratch;
  for (std::size_t v = 0; v < n; ++v) {
    const auto id = static_cast<VarId>(v);
    if (store.size(id) == 0) return done(true);
    if (store.is_interval_var(id)) {
      scratch.add_interval(store.min(id), store.max(id));
    } else {
      scratch.add_variable(store.domain(id));
    }
  }
  std::vector<std::unique_ptr<Propagator>> props;
  Compiler comp(scratch, props);
  for (std::size_t i = 0; i < constraints.size(); ++i) comp.compile(constraints[i], static_cast<int>(i));
  std::vector<std::vector<int>> watch(scratch.num_vars());
  for (std::size_t p = 0; p < props.size(); ++p) {
    for (VarId v : props[p]->vars()) watch[v].push_back(static_cast<int>(p));
  }
  std::vector<int> queue;
  std::vector<char> queued(props.size(), 1);
  for (std::size_t p = 0; p < props.size(); ++p) queue.push_back(static_cast<int>(p));
  std::optional<std::mt19937_64> rng;
  if (shuffle_seed) rng.emplace(*shuffle_seed);
  scratch.clear_changed();
  bool failed = false;
  std::size_t head = 0;
  while (head < queue.size()) {
    if (rng) {
      std::uniform_int_distribution<std::size_t> pick(head, queue.size() - 1);
      std::swap(queue[head], queue[pick(*rng)]);
    }
    int p = queue[head++];
    queued[p] = 0;
    if (!props[p]->active.value) continue;
    PropStatus st = props[p]->propagate(scratch);
    if (st == PropStatus::Failed || scratch.failed()) {
      failed = true;
      break;
    }
    if (st == PropStatus::Entailed) props[p]->active.value = 0;
    for (VarId v : scratch.changed()) {
      for (int q : watch[v]) {
        if (!queued[q] && props[q]->active.value) {
          queued[q] = 1;
          queue.push_back(q);
        }
      }
    }
    scratch.clear_changed();
  }
  if (failed) {
    store.set_failed();
    return done(true);
  }
  for (std::size_t v = 0; v < n; ++v) {
    const auto id = static_cast<VarId>(v);
    bool ok = store.set_min(id, scratch.min(id)) && store.set_max(id, scratch.max(id));
    if (ok && !store.is_interval_var(id) && store.size(id) != scratch.size(id)) {
      ok = store.retain(id, [&](Value x) { return scratch.contains(id, x); });
    }
    if (!ok) return done(true);
  }
  return done(false);
}

PropagationOutcome propagate(const Constraint& c, DomainStore& store) { return fixpoint(store, {c}); }

namespace {

template <class... Kinds>
PropagationOutcome checked(const Constraint& c, DomainStore& s, const char* name) {
  if (!(std::holds_alternative<Kinds>(c.kind) || ...)) {
    throw UsageError(std::string(name) + " called on a " + std::string(kind_name(c)) + " constraint");
  }
  return propagate(c, s);
}

}  // namespace

PropagationOutcome propagate_extension(const Constraint& c, DomainStore& s) {
  return checked<Extension>(c, s, "propagate_extension");
}
PropagationOutcome propagate_intension(const Constraint& c, DomainStore& s) {
  return checked<Intension>(c, s, "propagate_intension");
}
PropagationOutcome propagate_alldifferent(const Constraint& c, DomainStore& s) {
  return checked<AllDifferent>(c, s, "propagate_alldifferent");
}
PropagationOutcome propagate_sum(const Constraint& c, DomainStore& s) { return checked<Sum>(c, s, "propagate_sum"); }
PropagationOutcome propagate_count(const Constraint& c, DomainStore& s) {
  return checked<Count>(c, s, "propagate_count");
}
PropagationOutcome propagate_cardinality(const Constraint& c, DomainStore& s) {
  return checked<Cardinality>(c, s, "propagate_cardinality");
}
PropagationOutcome propagate_nvalues(const Constraint& c, DomainStore& s) {
  return checked<NValues>(c, s, "propagate_nvalues");
}
PropagationOutcome propagate_element(const Constraint& c, DomainStore& s) {
  return checked<Element>(c, s, "propagate_element");
}
PropagationOutcome propagate_minmax(const Constraint& c, DomainStore& s) {
  return checked<Extremum>(c, s, "propagate_minmax");
}
PropagationOutcome propagate_ordered_lex(const Constraint& c, DomainStore& s) {
  return checked<Ordered, Lex>(c, s, "propagate_ordered_lex");
}
PropagationOutcome propagate_regular(const Constraint& c, DomainStore& s) {
  return checked<Regular>(c, s, "propagate_regular");
}
PropagationOutcome propagate_circuit(const Constraint& c, DomainStore& s) {
  return checked<Circuit>(c, s, "propagate_circuit");
}
PropagationOutcome propagate_cumulative(const Constraint& c, DomainStore& s) {
  return checked<Cumulative>(c, s, "propagate_cumulative");
}
PropagationOutcome propagate_nooverlap(const Constraint& c, DomainStore& s) {
  return checked<NoOverlap>(c, s, "propagate_nooverlap");
}

}  // namespace xcsp
