#ifndef XCSP_DOMAIN_STORE_HPP
#define XCSP_DOMAIN_STORE_HPP

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "xcsp/model.hpp"

namespace xcsp {

class UsageError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Integer restored by DomainStore::pop_level when written through
/// DomainStore::set.
struct RevInt {
  std::int64_t value = 0;
  std::uint64_t stamp = 0;
};

/// Current domains of all variables, kept as sparse sets over the original
/// domain values so that removals and restorations are O(1). Variables with
/// very large ranges (auxiliaries only) are kept as bare intervals; removing
/// an interior value of such a variable is a no-op.
class DomainStore {
 public:
  static constexpr std::size_t kMaxSparse = std::size_t{1} << 22;

  DomainStore() = default;
  explicit DomainStore(std::span<const Domain> doms);
  explicit DomainStore(const Instance& inst);

  VarId add_variable(const Domain& d);
  VarId add_interval(Value lo, Value hi);

  std::size_t num_vars() const { return vars_.size(); }

  std::uint64_t size(VarId v) const;
  Value min(VarId v) const;
  Value max(VarId v) const;
  bool fixed(VarId v) const { return size(v) == 1; }
  Value value(VarId v) const { return min(v); }
  bool contains(VarId v, Value x) const;
  bool is_interval_var(VarId v) const { return vars_[v].interval; }

  /// Current values in increasing order.
  std::vector<Value> values(VarId v) const;
  Domain domain(VarId v) const { return Domain(values(v)); }
  /// Original domain values (sparse variables only).
  std::span<const Value> initial(VarId v) const;

  // Each modifier returns false iff the domain became empty.
  bool remove(VarId v, Value x);
  bool assign(VarId v, Value x);
  bool set_min(VarId v, Value lo);
  bool set_max(VarId v, Value hi);
  /// Keeps only values for which keep(value) holds.
  template <class Pred>
  bool retain(VarId v, Pred keep) {
    for (Value x : values(v)) {
      if (!keep(x) && !remove(v, x)) return false;
    }
    return true;
  }

  /// Trailed write; `r` must outlive the store levels it is written at.
  void set(RevInt& r, std::int64_t value);

  bool failed() const { return failed_; }
  void set_failed() { failed_ = true; }

  void push_level();
  /// Throws UsageError at level 0.
  void pop_level();
  int level() const { return static_cast<int>(level_marks_.size()); }

  /// Monotone count of removed values (not restored by pop_level).
  std::uint64_t removals() const { return removals_; }

  /// Variables modified since the last clear_changed().
  std::span<const VarId> changed() const { return changed_; }
  void clear_changed();

 private:
  struct Var {
    bool interval = false;
    std::size_t offset = 0;  // into values_/dense_/pos_
    std::size_t n = 0;       // original size
    bool contiguous = false;
    std::size_t size = 0;
    std::size_t lo = 0;  // index of current min
    std::size_t hi = 0;  // index of current max
    Value imin = 0;      // interval variables
    Value imax = 0;
    std::uint64_t stamp = 0;
  };
  struct Saved {
    VarId v;
    std::size_t size, lo, hi;
    Value imin, imax;
  };

  bool present(const Var& d, std::size_t idx) const { return pos_[d.offset + idx] < d.size; }
  Value at(const Var& d, std::size_t idx) const { return values_[d.offset + idx]; }
  // Index of x in the original domain, or npos.
  std::size_t index_of(const Var& d, Value x) const;
  void save(VarId v);
  void touched(VarId v);
  bool wipe(VarId v);
  void drop(Var& d, std::size_t idx);

  std::vector<Var> vars_;
  std::vector<Value> values_;
  std::vector<std::uint32_t> dense_;
  std::vector<std::uint32_t> pos_;
  std::vector<Saved> trail_;
  std::vector<std::size_t> level_marks_;
  std::vector<std::pair<RevInt*, std::int64_t>> rev_trail_;
  std::vector<std::size_t> rev_marks_;
  std::vector<std::uint64_t> epochs_;
  std::uint64_t epoch_counter_ = 0;
  std::uint64_t removals_ = 0;
  bool failed_ = false;
  std::vector<VarId> changed_;
  std::vector<char> in_changed_;
};

}  // namespace xcsp

#endif  // XCSP_DOMAIN_STORE_HPP
