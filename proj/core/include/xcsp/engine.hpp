#ifndef XCSP_ENGINE_HPP
#define XCSP_ENGINE_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <vector>

#include "xcsp/domain_store.hpp"
#include "xcsp/model.hpp"

namespace xcsp {

struct PropagationOutcome {
  enum class Status { Fixpoint, Failed };
  Status status = Status::Fixpoint;
  std::uint64_t removals = 0;

  bool failed() const { return status == Status::Failed; }
};

enum class PropStatus { Ok, Failed, Entailed };

/// Filtering algorithm attached to one constraint (or to one piece of a
/// constraint once compiled). `propagate` may be called repeatedly; it must
/// remove only unsupported values and must detect any violation once all
/// of its variables are fixed.
class Propagator {
 public:
  explicit Propagator(std::vector<VarId> vars) : vars_(std::move(vars)) {}
  virtual ~Propagator() = default;
  Propagator(const Propagator&) = delete;
  Propagator& operator=(const Propagator&) = delete;

  virtual PropStatus propagate(DomainStore& s) = 0;

  const std::vector<VarId>& vars() const { return vars_; }

  int source = -1;  // index of the originating constraint
  double weight = 1.0;
  RevInt active{1, 0};

 protected:
  std::vector<VarId> vars_;
};

/// Turns constraints into propagators, adding hidden auxiliary variables to
/// the store for expression terms (allDifferent over differences, products
/// inside sums, objective expressions).
class Compiler {
 public:
  Compiler(DomainStore& store, std::vector<std::unique_ptr<Propagator>>& out)
      : store_(store), out_(out) {}

  /// Slide, channel and mdd must have been decomposed beforehand.
  void compile(const Constraint& c, int source);
  /// Variable equal to `e`; a fresh auxiliary unless `e` is a variable.
  VarId term(const Expr& e);
  /// Fresh variable holding the objective value.
  VarId objective(const Objective& o);

 private:
  void add(std::unique_ptr<Propagator> p);
  void compile_sum(const Sum& k);

  DomainStore& store_;
  std::vector<std::unique_ptr<Propagator>>& out_;
  int source_ = -1;
};

struct EngineOptions {
  /// Pops queue entries in random order instead of FIFO (confluence tests).
  std::optional<std::uint64_t> shuffle_seed;
};

class Engine {
 public:
  explicit Engine(const Instance& inst, EngineOptions opts = {});

  DomainStore& store() { return store_; }
  const DomainStore& store() const { return store_; }
  std::size_t num_instance_vars() const { return instance_vars_; }
  std::optional<VarId> objective_var() const { return objective_var_; }

  const std::vector<std::unique_ptr<Propagator>>& propagators() const { return props_; }
  const std::vector<std::vector<int>>& watchers() const { return watch_; }
  /// Propagator that caused the last failure, or -1.
  int last_failure() const { return last_failure_; }

  /// Runs every active propagator to a common fixpoint. The first call
  /// schedules all propagators; later calls only those touched since.
  PropagationOutcome fixpoint();
  void push_level() { store_.push_level(); }
  void pop_level();

 private:
  void schedule(int p);
  void schedule_changed();
  void clear_queue();

  DomainStore store_;
  std::vector<std::unique_ptr<Propagator>> props_;
  std::vector<std::vector<int>> watch_;
  std::size_t instance_vars_ = 0;
  std::optional<VarId> objective_var_;
  std::vector<int> queue_;
  std::size_t head_ = 0;
  std::vector<char> queued_;
  bool initial_ = true;
  int last_failure_ = -1;
  std::optional<std::mt19937_64> rng_;
};

/// Runs the propagator(s) compiled from `c` to fixpoint on `store`. The
/// store must hold the instance variables the constraint refers to;
/// auxiliaries live in a scratch copy and never leak into `store`.
PropagationOutcome propagate(const Constraint& c, DomainStore& store);

/// Independent fixpoint over a list of constraints (no objective).
PropagationOutcome fixpoint(DomainStore& store, const std::vector<Constraint>& constraints,
                            std::optional<std::uint64_t> shuffle_seed = std::nullopt);

// Per-family entry points; each throws UsageError when `c` is of another kind.
PropagationOutcome propagate_extension(const Constraint& c, DomainStore& s);
PropagationOutcome propagate_intension(const Constraint& c, DomainStore& s);
PropagationOutcome propagate_alldifferent(const Constraint& c, DomainStore& s);
PropagationOutcome propagate_sum(const Constraint& c, DomainStore& s);
PropagationOutcome propagate_count(const Constraint& c, DomainStore& s);
PropagationOutcome propagate_cardinality(const Constraint& c, DomainStore& s);
PropagationOutcome propagate_nvalues(const Constraint& c, DomainStore& s);
PropagationOutcome propagate_element(const Constraint& c, DomainStore& s);
PropagationOutcome propagate_minmax(const Constraint& c, DomainStore& s);
PropagationOutcome propagate_ordered_lex(const Constraint& c, DomainStore& s);
PropagationOutcome propagate_regular(const Constraint& c, DomainStore& s);
PropagationOutcome propagate_circuit(const Constraint& c, DomainStore& s);
PropagationOutcome propagate_cumulative(const Constraint& c, DomainStore& s);
PropagationOutcome propagate_nooverlap(const Constraint& c, DomainStore& s);

}  // namespace xcsp

#endif  // XCSP_ENGINE_HPP
