// Sum, counting, element, extremum and ordering propagators.
#include <algorithm>
#include <map>

#include "propagators.hpp"

namespace xcsp::detail {

namespace {

bool all_fixed(const DomainStore& s, const std::vector<VarId>& vars) {
  return std::all_of(vars.begin(), vars.end(), [&](VarId v) { return s.fixed(v); });
}

std::vector<VarId> with_rhs(std::vector<VarId> vars, const Condition& c) {
  for (VarId v : rhs_vars(c)) vars.push_back(v);
  return vars;
}

// ---------------------------------------------------------------------------
// Linear sum: bounds reasoning on 128-bit activities, value filtering of the
// last free variable for ne / set conditions.

class Linear : public Propagator {
 public:
  Linear(std::vector<VarId> vars, std::vector<Value> coeffs, Condition cond)
      : Propagator({}), cond_(std::move(cond)) {
    if (const auto* r = std::get_if<VarRef>(&cond_.rhs);
        r && cond_.op != CmpOp::In && cond_.op != CmpOp::NotIn) {
      vars.push_back(r->id);
      coeffs.push_back(-1);
      cond_.rhs = Value{0};
    }
    std::map<VarId, i128> merged;
    for (std::size_t i = 0; i < vars.size(); ++i) merged[vars[i]] += coeffs[i];
    for (auto [v, c] : merged) {
      if (c == 0) continue;
      if (c > std::numeric_limits<Value>::max() || c < std::numeric_limits<Value>::min()) {
        throw ModelError("sum coefficient overflow");
      }
      vars_.push_back(v);
      coeffs_.push_back(static_cast<Value>(c));
    }
    holes_ = cond_.op == CmpOp::Ne || cond_.op == CmpOp::NotIn ||
             std::holds_alternative<std::vector<Value>>(cond_.rhs);
  }

  PropStatus propagate(DomainStore& s) override {
    const std::size_t n = vars_.size();
    Range want = allowed(cond_, s);
    for (int round = 0; round < 64; ++round) {
      i128 lo = 0, hi = 0;
      std::vector<i128> tlo(n), thi(n);
      for (std::size_t i = 0; i < n; ++i) {
        i128 a = i128{coeffs_[i]} * s.min(vars_[i]);
        i128 b = i128{coeffs_[i]} * s.max(vars_[i]);
        tlo[i] = std::min(a, b);
        thi[i] = std::max(a, b);
        lo += tlo[i];
        hi += thi[i];
      }
      if (hi < want.lo || lo > want.hi) return PropStatus::Failed;
      if (lo >= want.lo && hi <= want.hi && !holes_) return PropStatus::Entailed;
      bool changed = false;
      for (std::size_t i = 0; i < n; ++i) {
        const i128 c = coeffs_[i];
        // c * x in [want.lo - (hi - thi), want.hi - (lo - tlo)]
        i128 tl = want.lo - (hi - thi[i]);
        i128 th = want.hi - (lo - tlo[i]);
        i128 xl, xh;
        if (c > 0) {
          xl = ceil_div(tl, c);
          xh = floor_div(th, c);
        } else {
          xl = ceil_div(th, c);
          xh = floor_div(tl, c);
        }
        const VarId v = vars_[i];
        if (xl > s.min(v)) {
          if (!s.set_min(v, to_value(xl))) return PropStatus::Failed;
          changed = true;
        }
        if (xh < s.max(v)) {
          if (!s.set_max(v, to_value(xh))) return PropStatus::Failed;
          changed = true;
        }
      }
      if (!changed) break;
    }
    int free = -1;
    i128 fixed_part = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (s.fixed(vars_[i])) {
        fixed_part += i128{coeffs_[i]} * s.value(vars_[i]);
      } else if (free >= 0) {
        return PropStatus::Ok;
      } else {
        free = static_cast<int>(i);
      }
    }
    if (free < 0) return holds(cond_, fixed_part, s) ? PropStatus::Entailed : PropStatus::Failed;
    if (holes_ && rhs_fixed(cond_, s)) {
      const auto i = static_cast<std::size_t>(free);
      if (s.size(vars_[i]) > DomainStore::kMaxSparse) return PropStatus::Ok;
      bool ok = s.retain(vars_[i], [&](Value x) { return holds(cond_, fixed_part + i128{coeffs_[i]} * x, s); });
      if (!ok) return PropStatus::Failed;
    }
    return PropStatus::Ok;
  }

 private:
  Condition cond_;
  std::vector<Value> coeffs_;
  bool holes_ = false;
};

// ---------------------------------------------------------------------------

class CountProp : public Propagator {
 public:
  CountProp(std::vector<VarId> list, std::vector<Value> values, Condition cond)
      : Propagator(with_rhs(list, cond)), list_(std::move(list)), values_(std::move(values)),
        cond_(std::move(cond)) {
    std::sort(values_.begin(), values_.end());
    values_.erase(std::unique(values_.begin(), values_.end()), values_.end());
  }

  PropStatus propagate(DomainStore& s) override {
    auto in = [&](Value x) { return std::binary_search(values_.begin(), values_.end(), x); };
    i128 must = 0, possible = 0;
    std::vector<VarId> open;
    for (VarId v : list_) {
      bool some = false, every = true;
      for (Value x : s.values(v)) {
        if (in(x)) {
          some = true;
        } else {
          every = false;
        }
      }
      if (every) ++must;
      if (some) ++possible;
      if (some && !every) open.push_back(v);
    }
    if (!prune_rhs(cond_, s, must, possible)) return PropStatus::Failed;
    Range want = allowed(cond_, s);
    if (must > want.hi || possible < want.lo) return PropStatus::Failed;
    if (must == want.hi) {
      for (VarId v : open) {
        if (!s.retain(v, [&](Value x) { return !in(x); })) return PropStatus::Failed;
      }
    } else if (possible == want.lo) {
      for (VarId v : open) {
        if (!s.retain(v, in)) return PropStatus::Failed;
      }
    }
    if (open.empty() || must == want.hi || possible == want.lo) {
      // the count is now determined
      i128 count = 0;
      for (VarId v : list_) {
        if (in(s.min(v)) && s.fixed(v)) ++count;
        else if (!s.fixed(v)) {
          auto vals = s.values(v);
          if (std::all_of(vals.begin(), vals.end(), in)) ++count;
        }
      }
      if (!prune_rhs(cond_, s, count, count)) return PropStatus::Failed;
      if (rhs_fixed(cond_, s)) return holds(cond_, count, s) ? PropStatus::Entailed : PropStatus::Failed;
    }
    return PropStatus::Ok;
  }

 private:
  std::vector<VarId> list_;
  std::vector<Value> values_;
  Condition cond_;
};

// ---------------------------------------------------------------------------

class CardinalityProp : public Propagator {
 public:
  CardinalityProp(std::vector<VarId> list, std::vector<Value> values,
                  std::vector<Cardinality::Occurs> occurs, bool closed)
      : Propagator(list), list_(std::move(list)), values_(std::move(values)),
        occurs_(std::move(occurs)), closed_(closed) {
    for (const auto& o : occurs_) {
      if (const auto* r = std::get_if<VarRef>(&o)) vars_.push_back(r->id);
    }
  }

  PropStatus propagate(DomainStore& s) override {
    if (closed_) {
      std::vector<Value> sorted = values_;
      std::sort(sorted.begin(), sorted.end());
      for (VarId v : list_) {
        if (!s.retain(v, [&](Value x) { return std::binary_search(sorted.begin(), sorted.end(), x); })) {
          return PropStatus::Failed;
        }
      }
    }
    i128 sum_lo = 0, sum_hi = 0;
    for (std::size_t j = 0; j < values_.size(); ++j) {
      const Value val = values_[j];
      i128 must = 0, possible = 0;
      for (VarId v : list_) {
        if (s.contains(v, val)) {
          ++possible;
          if (s.fixed(v)) ++must;
        }
      }
      i128 lo, hi;
      if (const auto* k = std::get_if<Value>(&occurs_[j])) {
        lo = hi = *k;
      } else if (const auto* iv = std::get_if<Interval>(&occurs_[j])) {
        lo = iv->lo;
        hi = iv->hi;
      } else {
        VarId y = std::get<VarRef>(occurs_[j]).id;
        if (!s.set_min(y, to_value(must)) || !s.set_max(y, to_value(possible))) return PropStatus::Failed;
        lo = s.min(y);
        hi = s.max(y);
      }
      if (must > hi || possible < lo) return PropStatus::Failed;
      if (must == hi && possible > must) {
        for (VarId v : list_) {
          if (!s.fixed(v) && !s.remove(v, val)) return PropStatus::Failed;
        }
      } else if (possible == lo && possible > must) {
        for (VarId v : list_) {
          if (s.contains(v, val) && !s.assign(v, val)) return PropStatus::Failed;
        }
      }
      sum_lo += std::max<i128>(lo, 0);
      sum_hi += hi;
    }
    const i128 n = static_cast<i128>(list_.size());
    if (sum_lo > n) return PropStatus::Failed;
    if (closed_ && sum_hi < n) return PropStatus::Failed;
    if (!all_fixed(s, vars_)) return PropStatus::Ok;
    for (std::size_t j = 0; j < values_.size(); ++j) {
      i128 count = 0;
      for (VarId v : list_) count += s.value(v) == values_[j];
      bool ok;
      if (const auto* k = std::get_if<Value>(&occurs_[j])) {
        ok = count == *k;
      } else if (const auto* iv = std::get_if<Interval>(&occurs_[j])) {
        ok = count >= iv->lo && count <= iv->hi;
      } else {
        ok = count == s.value(std::get<VarRef>(occurs_[j]).id);
      }
      if (!ok) return PropStatus::Failed;
    }
    return PropStatus::Entailed;
  }

 private:
  std::vector<VarId> list_;
  std::vector<Value> values_;
  std::vector<Cardinality::Occurs> occurs_;
  bool closed_;
};

// ---------------------------------------------------------------------------
// nValues: greedy interval-stabbing lower bound, union upper bound, value
// probing against both.

class NValuesProp : public Propagator {
 public:
  NValuesProp(std::vector<VarId> list, Condition cond)
      : Propagator(with_rhs(list, cond)), list_(std::move(list)), cond_(std::move(cond)) {}

  PropStatus propagate(DomainStore& s) override {
    const std::size_t n = list_.size();
    std::vector<std::pair<Value, Value>> iv(n);
    std::vector<std::vector<Value>> dom(n);
    for (std::size_t i = 0; i < n; ++i) {
      iv[i] = {s.min(list_[i]), s.max(list_[i])};
      dom[i] = s.values(list_[i]);
    }
    i128 lb = lower(iv), ub = upper(dom);
    if (!prune_rhs(cond_, s, lb, ub)) return PropStatus::Failed;
    Range want = allowed(cond_, s);
    if (lb > want.hi || ub < want.lo) return PropStatus::Failed;
    if (all_fixed(s, list_)) {
      if (!prune_rhs(cond_, s, lb, lb)) return PropStatus::Failed;
      if (!rhs_fixed(cond_, s)) return PropStatus::Ok;
      return holds(cond_, lb, s) ? PropStatus::Entailed : PropStatus::Failed;
    }
    // Fixing one variable raises the lower bound by at most one.
    if (lb == want.hi) {
      for (std::size_t i = 0; i < n; ++i) {
        if (dom[i].size() < 2) continue;
        auto saved = iv[i];
        for (Value x : dom[i]) {
          iv[i] = {x, x};
          if (lower(iv) > want.hi && !s.remove(list_[i], x)) return PropStatus::Failed;
        }
        iv[i] = {s.min(list_[i]), s.max(list_[i])};
        (void)saved;
        dom[i] = s.values(list_[i]);
      }
    }
    if (want.lo > 1) {
      for (std::size_t i = 0; i < n; ++i) {
        if (dom[i].size() < 2) continue;
        auto saved = dom[i];
        for (Value x : saved) {
          dom[i] = {x};
          if (upper(dom) < want.lo && !s.remove(list_[i], x)) return PropStatus::Failed;
        }
        dom[i] = s.values(list_[i]);
      }
    }
    return PropStatus::Ok;
  }

 private:
  static i128 lower(std::vector<std::pair<Value, Value>> iv) {
    std::sort(iv.begin(), iv.end(), [](auto a, auto b) { return a.second < b.second; });
    i128 count = 0;
    bool any = false;
    Value last = 0;
    for (auto [lo, hi] : iv) {
      if (!any || lo > last) {
        any = true;
        last = hi;
        ++count;
      }
    }
    return count;
  }

  static i128 upper(const std::vector<std::vector<Value>>& dom) {
    std::vector<Value> all, fixed;
    i128 open = 0;
    for (const auto& d : dom) {
      all.insert(all.end(), d.begin(), d.end());
      if (d.size() == 1) {
        fixed.push_back(d[0]);
      } else {
        ++open;
      }
    }
    std::sort(all.begin(), all.end());
    std::sort(fixed.begin(), fixed.end());
    i128 u = std::unique(all.begin(), all.end()) - all.begin();
    i128 f = std::unique(fixed.begin(), fixed.end()) - fixed.begin();
    return std::min(u, f + open);
  }

  std::vector<VarId> list_;
  Condition cond_;
};

// ---------------------------------------------------------------------------

class ElementProp : public Propagator {
 public:
  ElementProp(std::vector<Expr> list, std::size_t cols, Value start, VarId index,
              std::optional<VarId> col, Expr value)
      : Propagator({}), list_(std::move(list)), cols_(cols), start_(start), index_(index),
        col_(col), value_(std::move(value)) {
    for (const auto& e : list_) {
      if (e.is_var()) vars_.push_back(e.var_id());
    }
    vars_.push_back(index_);
    if (col_) vars_.push_back(*col_);
    if (value_.is_var()) vars_.push_back(value_.var_id());
    std::sort(vars_.begin(), vars_.end());
    vars_.erase(std::unique(vars_.begin(), vars_.end()), vars_.end());
  }

  PropStatus propagate(DomainStore& s) override {
    return cols_ == 0 ? list_form(s) : matrix_form(s);
  }

 private:
  bool has(const Expr& e, Value x, const DomainStore& s) const {
    return e.is_var() ? s.contains(e.var_id(), x) : e.value == x;
  }
  std::vector<Value> vals(const Expr& e, const DomainStore& s) const {
    return e.is_var() ? s.values(e.var_id()) : std::vector<Value>{e.value};
  }
  bool meets(const Expr& a, const Expr& b, const DomainStore& s) const {
    if (!a.is_var()) return has(b, a.value, s);
    if (!b.is_var()) return has(a, b.value, s);
    VarId x = a.var_id(), y = b.var_id();
    if (s.size(x) > s.size(y)) std::swap(x, y);
    if (s.max(x) < s.min(y) || s.max(y) < s.min(x)) return false;
    for (Value v : s.values(x)) {
      if (s.contains(y, v)) return true;
    }
    return false;
  }
  // entry := value when the position is known
  PropStatus equate(const Expr& entry, DomainStore& s) {
    if (entry.is_var()) {
      if (value_.is_var()) {
        VarId x = entry.var_id(), y = value_.var_id();
        if (!s.retain(x, [&](Value v) { return s.contains(y, v); })) return PropStatus::Failed;
        if (!s.retain(y, [&](Value v) { return s.contains(x, v); })) return PropStatus::Failed;
      } else if (!s.assign(entry.var_id(), value_.value)) {
        return PropStatus::Failed;
      }
    } else if (!has(value_, entry.value, s) ||
               (value_.is_var() && !s.assign(value_.var_id(), entry.value))) {
      return PropStatus::Failed;
    }
    return term_fixed(entry, s) && term_fixed(value_, s) ? PropStatus::Entailed : PropStatus::Ok;
  }

  PropStatus list_form(DomainStore& s) {
    const auto n = static_cast<Value>(list_.size());
    if (!s.set_min(index_, start_) || !s.set_max(index_, start_ + n - 1)) return PropStatus::Failed;
    std::vector<Value> image;
    for (Value k : s.values(index_)) {
      const Expr& e = list_[static_cast<std::size_t>(k - start_)];
      if (!meets(e, value_, s)) {
        if (!s.remove(index_, k)) return PropStatus::Failed;
        continue;
      }
      if (value_.is_var()) {
        for (Value v : vals(e, s)) image.push_back(v);
      }
    }
    if (s.fixed(index_)) return equate(list_[static_cast<std::size_t>(s.value(index_) - start_)], s);
    if (value_.is_var()) {
      std::sort(image.begin(), image.end());
      VarId y = value_.var_id();
      if (!s.retain(y, [&](Value v) { return std::binary_search(image.begin(), image.end(), v); })) {
        return PropStatus::Failed;
      }
    }
    return PropStatus::Ok;
  }

  PropStatus matrix_form(DomainStore& s) {
    const auto rows = static_cast<Value>(list_.size() / cols_);
    const auto cols = static_cast<Value>(cols_);
    const VarId r = index_, c = *col_;
    if (!s.set_min(r, 0) || !s.set_max(r, rows - 1) || !s.set_min(c, 0) || !s.set_max(c, cols - 1)) {
      return PropStatus::Failed;
    }
    std::vector<Value> rv = s.values(r), cv = s.values(c);
    std::vector<char> row_ok(rv.size(), 0), col_ok(cv.size(), 0);
    std::vector<Value> image;
    for (std::size_t i = 0; i < rv.size(); ++i) {
      for (std::size_t j = 0; j < cv.size(); ++j) {
        const Expr& e = list_[static_cast<std::size_t>(rv[i] * cols + cv[j])];
        if (!meets(e, value_, s)) continue;
        row_ok[i] = col_ok[j] = 1;
        if (value_.is_var()) {
          for (Value v : vals(e, s)) image.push_back(v);
        }
      }
    }
    for (std::size_t i = 0; i < rv.size(); ++i) {
      if (!row_ok[i] && !s.remove(r, rv[i])) return PropStatus::Failed;
    }
    for (std::size_t j = 0; j < cv.size(); ++j) {
      if (!col_ok[j] && !s.remove(c, cv[j])) return PropStatus::Failed;
    }
    if (s.fixed(r) && s.fixed(c)) {
      return equate(list_[static_cast<std::size_t>(s.value(r) * cols + s.value(c))], s);
    }
    if (value_.is_var()) {
      std::sort(image.begin(), image.end());
      VarId y = value_.var_id();
      if (!s.retain(y, [&](Value v) { return std::binary_search(image.begin(), image.end(), v); })) {
        return PropStatus::Failed;
      }
    }
    return PropStatus::Ok;
  }

  std::vector<Expr> list_;
  std::size_t cols_;
  Value start_;
  VarId index_;
  std::optional<VarId> col_;
  Expr value_;
};

// ---------------------------------------------------------------------------

class ExtremumProp : public Propagator {
 public:
  ExtremumProp(bool is_max, std::vector<VarId> list, Condition cond)
      : Propagator(with_rhs(list, cond)), is_max_(is_max), list_(std::move(list)),
        cond_(std::move(cond)) {}

  PropStatus propagate(DomainStore& s) override {
    // Work on max; min is handled by mirroring bounds.
    i128 lo = is_max_ ? -(i128{1} << 100) : (i128{1} << 100);
    i128 hi = lo;
    for (VarId v : list_) {
      if (is_max_) {
        lo = std::max<i128>(lo, s.min(v));
        hi = std::max<i128>(hi, s.max(v));
      } else {
        lo = std::min<i128>(lo, s.min(v));
        hi = std::min<i128>(hi, s.max(v));
      }
    }
    if (!prune_rhs(cond_, s, lo, hi)) return PropStatus::Failed;
    Range want = allowed(cond_, s);
    if (hi < want.lo || lo > want.hi) return PropStatus::Failed;
    if (is_max_) {
      int reach = -1, count = 0;
      for (std::size_t i = 0; i < list_.size(); ++i) {
        if (!s.set_max(list_[i], to_value(want.hi))) return PropStatus::Failed;
        if (s.max(list_[i]) >= want.lo) {
          reach = static_cast<int>(i);
          ++count;
        }
      }
      if (count == 0) return PropStatus::Failed;
      if (count == 1 && !s.set_min(list_[static_cast<std::size_t>(reach)], to_value(want.lo))) {
        return PropStatus::Failed;
      }
    } else {
      int reach = -1, count = 0;
      for (std::size_t i = 0; i < list_.size(); ++i) {
        if (!s.set_min(list_[i], to_value(want.lo))) return PropStatus::Failed;
        if (s.min(list_[i]) <= want.hi) {
          reach = static_cast<int>(i);
          ++count;
        }
      }
      if (count == 0) return PropStatus::Failed;
      if (count == 1 && !s.set_max(list_[static_cast<std::size_t>(reach)], to_value(want.hi))) {
        return PropStatus::Failed;
      }
    }
    if (!all_fixed(s, list_)) return PropStatus::Ok;
    Value m = s.value(list_[0]);
    for (VarId v : list_) m = is_max_ ? std::max(m, s.value(v)) : std::min(m, s.value(v));
    if (!prune_rhs(cond_, s, m, m)) return PropStatus::Failed;
    if (!rhs_fixed(cond_, s)) return PropStatus::Ok;
    return holds(cond_, m, s) ? PropStatus::Entailed : PropStatus::Failed;
  }

 private:
  bool is_max_;
  std::vector<VarId> list_;
  Condition cond_;
};

// ---------------------------------------------------------------------------

class OrderedProp : public Propagator {
 public:
  OrderedProp(std::vector<VarId> list, std::vector<Value> lengths, CmpOp op)
      : Propagator(list), list_(std::move(list)), lengths_(std::move(lengths)), op_(op) {
    if (lengths_.empty()) lengths_.assign(list_.empty() ? 0 : list_.size() - 1, 0);
  }

  PropStatus propagate(DomainStore& s) override {
    const bool up = op_ == CmpOp::Lt || op_ == CmpOp::Le;
    const i128 gap = (op_ == CmpOp::Lt || op_ == CmpOp::Gt) ? 1 : 0;
    const std::size_t n = list_.size();
    // Ascending: x[i] + len[i] + gap <= x[i+1]. Descending mirrors it.
    for (std::size_t i = 0; i + 1 < n; ++i) {
      VarId a = list_[i], b = list_[i + 1];
      i128 d = lengths_[i];
      bool ok = up ? s.set_min(b, to_value(s.min(a) + d + gap))
                   : s.set_max(b, to_value(s.max(a) + d - gap));
      if (!ok) return PropStatus::Failed;
    }
    for (std::size_t i = n; i-- > 1;) {
      VarId a = list_[i - 1], b = list_[i];
      i128 d = lengths_[i - 1];
      bool ok = up ? s.set_max(a, to_value(s.max(b) - d - gap))
                   : s.set_min(a, to_value(s.min(b) - d + gap));
      if (!ok) return PropStatus::Failed;
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
      VarId a = list_[i], b = list_[i + 1];
      i128 d = lengths_[i];
      bool sure = up ? i128{s.max(a)} + d + gap <= s.min(b) : i128{s.min(a)} + d - gap >= s.max(b);
      if (!sure) return PropStatus::Ok;
    }
    return PropStatus::Entailed;
  }

 private:
  std::vector<VarId> list_;
  std::vector<Value> lengths_;
  CmpOp op_;
};

// ---------------------------------------------------------------------------

class LexProp : public Propagator {
 public:
  LexProp(std::vector<VarId> x, std::vector<VarId> y, bool strict)
      : Propagator({}), x_(std::move(x)), y_(std::move(y)), strict_(strict) {
    vars_ = x_;
    vars_.insert(vars_.end(), y_.begin(), y_.end());
  }

  PropStatus propagate(DomainStore& s) override {
    const std::size_t n = x_.size();
    for (int guard = 0; guard < 1000; ++guard) {
      std::size_t a = 0;
      while (a < n && s.fixed(x_[a]) && s.fixed(y_[a]) && s.value(x_[a]) == s.value(y_[a])) ++a;
      if (a == n) return strict_ ? PropStatus::Failed : PropStatus::Entailed;
      const VarId xa = x_[a], ya = y_[a];
      if (!s.set_max(xa, s.max(ya)) || !s.set_min(ya, s.min(xa))) return PropStatus::Failed;
      if (s.max(xa) < s.min(ya)) return PropStatus::Entailed;
      // Can the suffix after a be ordered if x[a] = y[a]?
      bool suffix_ok = !strict_;
      for (std::size_t j = a + 1; j < n; ++j) {
        if (s.min(x_[j]) < s.max(y_[j])) {
          suffix_ok = true;
          break;
        }
        if (s.min(x_[j]) > s.max(y_[j])) {
          suffix_ok = false;
          break;
        }
      }
      if (suffix_ok) return PropStatus::Ok;
      if (!s.set_max(xa, s.max(ya) - 1) || !s.set_min(ya, s.min(xa) + 1)) return PropStatus::Failed;
      if (s.max(xa) < s.min(ya)) return PropStatus::Entailed;
    }
    return PropStatus::Ok;
  }

 private:
  std::vector<VarId> x_, y_;
  bool strict_;
};

// ---------------------------------------------------------------------------

class AllEqualProp : public Propagator {
 public:
  explicit AllEqualProp(std::vector<VarId> list) : Propagator(std::move(list)) {}

  PropStatus propagate(DomainStore& s) override {
    if (vars_.empty()) return PropStatus::Entailed;
    VarId smallest = vars_[0];
    for (VarId v : vars_) {
      if (s.size(v) < s.size(smallest)) smallest = v;
    }
    std::vector<Value> common;
    for (Value x : s.values(smallest)) {
      bool all = std::all_of(vars_.begin(), vars_.end(), [&](VarId v) { return s.contains(v, x); });
      if (all) common.push_back(x);
    }
    if (common.empty()) return PropStatus::Failed;
    for (VarId v : vars_) {
      if (s.size(v) == common.size()) continue;
      if (!s.retain(v, [&](Value x) { return std::binary_search(common.begin(), common.end(), x); })) {
        return PropStatus::Failed;
      }
    }
    return common.size() == 1 ? PropStatus::Entailed : PropStatus::Ok;
  }
};

class InstantiateProp : public Propagator {
 public:
  InstantiateProp(std::vector<VarId> list, std::vector<Value> values)
      : Propagator(std::move(list)), values_(std::move(values)) {}

  PropStatus propagate(DomainStore& s) override {
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      if (!s.assign(vars_[i], values_[i])) return PropStatus::Failed;
    }
    return PropStatus::Entailed;
  }

 private:
  std::vector<Value> values_;
};

}  // namespace

PropPtr make_linear(std::vector<VarId> vars, std::vector<Value> coeffs, Condition cond) {
  if (coeffs.empty()) coeffs.assign(vars.size(), 1);
  return std::make_unique<Linear>(std::move(vars), std::move(coeffs), std::move(cond));
}
PropPtr make_count(std::vector<VarId> list, std::vector<Value> values, Condition cond) {
  return std::make_unique<CountProp>(std::move(list), std::move(values), std::move(cond));
}
PropPtr make_cardinality(std::vector<VarId> list, std::vector<Value> values,
                         std::vector<Cardinality::Occurs> occurs, bool closed) {
  return std::make_unique<CardinalityProp>(std::move(list), std::move(values), std::move(occurs), closed);
}
PropPtr make_nvalues(std::vector<VarId> list, Condition cond) {
  return std::make_unique<NValuesProp>(std::move(list), std::move(cond));
}
PropPtr make_element(std::vector<Expr> list, std::size_t cols, Value start, VarId index,
                     std::optional<VarId> col_index, Expr value) {
  return std::make_unique<ElementProp>(std::move(list), cols, start, index, col_index, std::move(value));
}
PropPtr make_extremum(bool is_max, std::vector<VarId> list, Condition cond) {
  return std::make_unique<ExtremumProp>(is_max, std::move(list), std::move(cond));
}
PropPtr make_ordered(std::vector<VarId> list, std::vector<Value> lengths, CmpOp op) {
  return std::make_unique<OrderedProp>(std::move(list), std::move(lengths), op);
}
PropPtr make_lex(std::vector<VarId> x, std::vector<VarId> y, bool strict) {
  return std::make_unique<LexProp>(std::move(x), std::move(y), strict);
}
PropPtr make_allequal(std::vector<VarId> list) { return std::make_unique<AllEqualProp>(std::move(list)); }
PropPtr make_instantiate(std::vector<VarId> list, std::vector<Value> values) {
  return std::make_unique<InstantiateProp>(std::move(list), std::move(values));
}

}  // namespace xcsp::detail
