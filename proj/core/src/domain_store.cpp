#include "xcsp/domain_store.hpp"

#include <algorithm>

namespace xcsp {

namespace {
constexpr std::size_t npos = static_cast<std::size_t>(-1);
}

DomainStore::DomainStore(std::span<const Domain> doms) {
  for (const auto& d : doms) add_variable(d);
}

DomainStore::DomainStore(const Instance& inst) {
  for (const auto& v : inst.variables) add_variable(v.dom);
}

VarId DomainStore::add_variable(const Domain& d) {
  if (level() != 0) throw UsageError("variables must be added at level 0");
  Var var;
  var.offset = values_.size();
  var.n = d.size();
  var.contiguous = d.is_interval();
  var.size = d.size();
  var.lo = 0;
  var.hi = d.size() - 1;
  auto vals = d.values();
  values_.insert(values_.end(), vals.begin(), vals.end());
  for (std::size_t i = 0; i < d.size(); ++i) {
    dense_.push_back(static_cast<std::uint32_t>(i));
    pos_.push_back(static_cast<std::uint32_t>(i));
  }
  vars_.push_back(var);
  in_changed_.push_back(0);
  return static_cast<VarId>(vars_.size() - 1);
}

VarId DomainStore::add_interval(Value lo, Value hi) {
  if (lo > hi) throw ModelError("empty interval variable");
  if (static_cast<unsigned __int128>(static_cast<__int128>(hi) - lo) < kMaxSparse) {
    return add_variable(Domain::range(lo, hi));
  }
  if (level() != 0) throw UsageError("variables must be added at level 0");
  Var var;
  var.interval = true;
  var.imin = lo;
  var.imax = hi;
  vars_.push_back(var);
  in_changed_.push_back(0);
  return static_cast<VarId>(vars_.size() - 1);
}

std::uint64_t DomainStore::size(VarId v) const {
  const Var& d = vars_[v];
  if (!d.interval) return d.size;
  if (d.imin > d.imax) return 0;
  auto span = static_cast<unsigned __int128>(static_cast<__int128>(d.imax) - d.imin) + 1;
  return span > UINT64_MAX ? UINT64_MAX : static_cast<std::uint64_t>(span);
}

Value DomainStore::min(VarId v) const {
  const Var& d = vars_[v];
  return d.interval ? d.imin : at(d, d.lo);
}

Value DomainStore::max(VarId v) const {
  const Var& d = vars_[v];
  return d.interval ? d.imax : at(d, d.hi);
}

std::size_t DomainStore::index_of(const Var& d, Value x) const {
  if (d.n == 0) return npos;
  const Value first = values_[d.offset];
  if (d.contiguous) {
    if (x < first || x > values_[d.offset + d.n - 1]) return npos;
    return static_cast<std::size_t>(x - first);
  }
  auto b = values_.begin() + static_cast<std::ptrdiff_t>(d.offset);
  auto e = b + static_cast<std::ptrdiff_t>(d.n);
  auto it = std::lower_bound(b, e, x);
  if (it == e || *it != x) return npos;
  return static_cast<std::size_t>(it - b);
}

bool DomainStore::contains(VarId v, Value x) const {
  const Var& d = vars_[v];
  if (d.interval) return x >= d.imin && x <= d.imax;
  if (d.size == 0 || x < at(d, d.lo) || x > at(d, d.hi)) return false;
  std::size_t idx = index_of(d, x);
  return idx != npos && present(d, idx);
}

std::vector<Value> DomainStore::values(VarId v) const {
  const Var& d = vars_[v];
  std::vector<Value> out;
  if (d.interval) {
    if (size(v) > kMaxSparse) throw UsageError("cannot list the values of a huge interval");
    for (Value x = d.imin; x <= d.imax; ++x) out.push_back(x);
    return out;
  }
  if (d.size == 0) return out;
  out.reserve(d.size);
  if (d.size * 8 >= d.hi - d.lo + 1) {
    for (std::size_t i = d.lo; i <= d.hi; ++i) {
      if (present(d, i)) out.push_back(at(d, i));
    }
  } else {
    for (std::size_t k = 0; k < d.size; ++k) out.push_back(at(d, dense_[d.offset + k]));
    std::sort(out.begin(), out.end());
  }
  return out;
}

std::span<const Value> DomainStore::initial(VarId v) const {
  const Var& d = vars_[v];
  return {values_.data() + d.offset, d.n};
}

void DomainStore::save(VarId v) {
  if (level_marks_.empty()) return;
  Var& d = vars_[v];
  if (d.stamp == epochs_.back()) return;
  trail_.push_back({v, d.size, d.lo, d.hi, d.imin, d.imax});
  d.stamp = epochs_.back();
}

void DomainStore::touched(VarId v) {
  if (!in_changed_[v]) {
    in_changed_[v] = 1;
    changed_.push_back(v);
  }
}

void DomainStore::clear_changed() {
  for (VarId v : changed_) in_changed_[v] = 0;
  changed_.clear();
}

bool DomainStore::wipe(VarId v) {
  save(v);
  Var& d = vars_[v];
  removals_ += size(v);
  if (d.interval) {
    d.imin = 1;
    d.imax = 0;
  } else {
    d.size = 0;
  }
  failed_ = true;
  touched(v);
  return false;
}

void DomainStore::drop(Var& d, std::size_t idx) {
  std::uint32_t p = pos_[d.offset + idx];
  std::uint32_t last = dense_[d.offset + d.size - 1];
  dense_[d.offset + p] = last;
  pos_[d.offset + last] = p;
  dense_[d.offset + d.size - 1] = static_cast<std::uint32_t>(idx);
  pos_[d.offset + idx] = static_cast<std::uint32_t>(d.size - 1);
  --d.size;
}

bool DomainStore::remove(VarId v, Value x) {
  Var& d = vars_[v];
  if (d.interval) {
    if (x == d.imin && x == d.imax) return wipe(v);
    if (x == d.imin) return set_min(v, x + 1);
    if (x == d.imax) return set_max(v, x - 1);
    return true;
  }
  if (!contains(v, x)) return true;
  if (d.size == 1) return wipe(v);
  std::size_t idx = index_of(d, x);
  save(v);
  drop(d, idx);
  ++removals_;
  if (idx == d.lo) {
    while (!present(d, d.lo)) ++d.lo;
  }
  if (idx == d.hi) {
    while (!present(d, d.hi)) --d.hi;
  }
  touched(v);
  return true;
}

bool DomainStore::assign(VarId v, Value x) {
  if (!contains(v, x)) return wipe(v);
  if (size(v) == 1) return true;
  Var& d = vars_[v];
  save(v);
  removals_ += size(v) - 1;
  if (d.interval) {
    d.imin = d.imax = x;
  } else {
    std::size_t idx = index_of(d, x);
    std::uint32_t p = pos_[d.offset + idx];
    std::uint32_t first = dense_[d.offset];
    dense_[d.offset + p] = first;
    pos_[d.offset + first] = p;
    dense_[d.offset] = static_cast<std::uint32_t>(idx);
    pos_[d.offset + idx] = 0;
    d.size = 1;
    d.lo = d.hi = idx;
  }
  touched(v);
  return true;
}

bool DomainStore::set_min(VarId v, Value lo) {
  if (lo <= min(v)) return true;
  if (lo > max(v)) return wipe(v);
  Var& d = vars_[v];
  save(v);
  if (d.interval) {
    removals_ += static_cast<std::uint64_t>(lo - d.imin);
    d.imin = lo;
  } else {
    while (at(d, d.lo) < lo) {
      if (present(d, d.lo)) {
        drop(d, d.lo);
        ++removals_;
      }
      ++d.lo;
    }
    while (!present(d, d.lo)) ++d.lo;
  }
  touched(v);
  return true;
}

bool DomainStore::set_max(VarId v, Value hi) {
  if (hi >= max(v)) return true;
  if (hi < min(v)) return wipe(v);
  Var& d = vars_[v];
  save(v);
  if (d.interval) {
    removals_ += static_cast<std::uint64_t>(d.imax - hi);
    d.imax = hi;
  } else {
    while (at(d, d.hi) > hi) {
      if (present(d, d.hi)) {
        drop(d, d.hi);
        ++removals_;
      }
      --d.hi;
    }
    while (!present(d, d.hi)) --d.hi;
  }
  touched(v);
  return true;
}

void DomainStore::set(RevInt& r, std::int64_t value) {
  if (r.value == value) return;
  if (!level_marks_.empty() && r.stamp != epochs_.back()) {
    rev_trail_.emplace_back(&r, r.value);
    r.stamp = epochs_.back();
  }
  r.value = value;
}

void DomainStore::push_level() {
  level_marks_.push_back(trail_.size());
  rev_marks_.push_back(rev_trail_.size());
  epochs_.push_back(++epoch_counter_);
}

void DomainStore::pop_level() {
  if (level_marks_.empty()) throw UsageError("pop_level at level 0");
  std::size_t mark = level_marks_.back();
  while (trail_.size() > mark) {
    const Saved& s = trail_.back();
    Var& d = vars_[s.v];
    d.size = s.size;
    d.lo = s.lo;
    d.hi = s.hi;
    d.imin = s.imin;
    d.imax = s.imax;
    d.stamp = 0;
    trail_.pop_back();
  }
  while (rev_trail_.size() > rev_marks_.back()) {
    auto [r, old] = rev_trail_.back();
    r->value = old;
    r->stamp = 0;
    rev_trail_.pop_back();
  }
  rev_marks_.pop_back();
  level_marks_.pop_back();
  epochs_.pop_back();
  failed_ = false;
  clear_changed();
}

}  // namespace xcsp
