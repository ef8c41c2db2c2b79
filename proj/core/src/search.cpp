#include "xcsp/search.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "xcsp/verifier.hpp"

namespace xcsp {

void SearchConfig::validate() const {
  if (node_limit && *node_limit < 1) throw std::invalid_argument("node limit must be at least 1");
  if (time_limit && !(*time_limit > 0)) throw std::invalid_argument("time limit must be positive");
  if (restarts && !(restart_factor > 1)) throw std::invalid_argument("restart factor must exceed 1");
  if (restarts && !(restart_base >= 1)) throw std::invalid_argument("restart base must be at least 1");
  if (enumerate_limit < 1) throw std::invalid_argument("enumerate limit must be at least 1");
}

const char* status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::Sat: return "SATISFIABLE";
    case SolveStatus::Unsat: return "UNSATISFIABLE";
    case SolveStatus::Optimum: return "OPTIMUM FOUND";
    case SolveStatus::Unknown: return "UNKNOWN";
  }
  return "UNKNOWN";
}

namespace {

Value pick_value(const DomainStore& s, VarId v, const SearchConfig& cfg, std::mt19937_64* rng) {
  switch (cfg.val) {
    case ValHeuristic::Min: return s.min(v);
    case ValHeuristic::Max: return s.max(v);
    case ValHeuristic::Random: {
      if (!rng || s.is_interval_var(v)) return s.min(v);
      auto vals = s.values(v);
      std::uniform_int_distribution<std::size_t> d(0, vals.size() - 1);
      return vals[d(*rng)];
    }
  }
  return s.min(v);
}

std::optional<VarId> best_var(const DomainStore& s, std::size_t from, std::size_t to, const SearchConfig& cfg,
                              std::span<const double> weights) {
  std::optional<VarId> best;
  double best_score = 0;
  for (std::size_t i = from; i < to; ++i) {
    const auto v = static_cast<VarId>(i);
    if (s.size(v) <= 1) continue;
    if (cfg.var == VarHeuristic::Lexical) return v;
    double score = static_cast<double>(s.size(v));
    if (cfg.var == VarHeuristic::DomWdeg && i < weights.size()) score /= std::max(weights[i], 1e-9);
    if (!best || score < best_score) {
      best = v;
      best_score = score;
    }
  }
  return best;
}

}  // namespace

std::optional<Decision> select_decision(const DomainStore& store, std::size_t num_vars, const SearchConfig& cfg,
                                        std::span<const double> weights, std::mt19937_64* rng) {
  auto v = best_var(store, 0, std::min(num_vars, store.num_vars()), cfg, weights);
  if (!v) return std::nullopt;
  return Decision{*v, pick_value(store, *v, cfg, rng)};
}

std::optional<Decision> select_decision(const Engine& engine, const SearchConfig& cfg, std::mt19937_64* rng) {
  const DomainStore& s = engine.store();
  std::vector<double> weights;
  if (cfg.var == VarHeuristic::DomWdeg) {
    weights.assign(s.num_vars(), 0.0);
    const auto& props = engine.propagators();
    for (std::size_t v = 0; v < s.num_vars(); ++v) {
      for (int p : engine.watchers()[v]) {
        if (props[p]->active.value) weights[v] += props[p]->weight;
      }
    }
  }
  auto v = best_var(s, 0, engine.num_instance_vars(), cfg, weights);
  if (!v) v = best_var(s, engine.num_instance_vars(), s.num_vars(), cfg, weights);
  if (!v) return std::nullopt;
  return Decision{*v, pick_value(s, *v, cfg, rng)};
}

namespace {

class Search {
 public:
  Search(const Instance& inst, const SearchConfig& cfg, bool optimize)
      : inst_(inst), cfg_(cfg), optimize_(optimize), engine_(inst), start_(std::chrono::steady_clock::now()) {
    cfg_.validate();
    if (cfg_.val == ValHeuristic::Random) rng_.emplace(cfg_.seed);
    if (optimize_) {
      if (!inst.objective) throw std::invalid_argument("instance has no objective");
      maximize_ = inst.objective->sense == Sense::Maximize;
      z_ = *engine_.objective_var();
    }
    // enumeration must not revisit subtrees
    use_restarts_ = cfg_.restarts && cfg_.mode != SearchMode::Enumerate;
  }

  SolveResult run() {
    bool exhausted = explore();
    SolveResult& r = result_;
    if (optimize_) {
      if (exhausted) {
        r.status = r.solution ? SolveStatus::Optimum : SolveStatus::Unsat;
      } else {
        r.status = r.solution ? SolveStatus::Sat : SolveStatus::Unknown;
      }
    } else if (cfg_.mode == SearchMode::Enumerate) {
      if (r.solutions > 0) {
        r.status = SolveStatus::Sat;
      } else {
        r.status = exhausted ? SolveStatus::Unsat : SolveStatus::Unknown;
      }
    } else if (r.solution) {
      r.status = SolveStatus::Sat;
    } else {
      r.status = exhausted ? SolveStatus::Unsat : SolveStatus::Unknown;
    }
    return std::move(result_);
  }

 private:
  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

  bool out_of_budget() const {
    if (cfg_.stop && cfg_.stop->load(std::memory_order_relaxed)) return true;
    if (cfg_.node_limit && result_.nodes >= *cfg_.node_limit) return true;
    if (cfg_.time_limit && (++ticks_ & 63) == 0 && elapsed() > *cfg_.time_limit) return true;
    return false;
  }

  // Objective bound from the best solution so far.
  bool apply_bound() {
    if (!optimize_ || !result_.objective) return true;
    DomainStore& s = engine_.store();
    if (maximize_) {
      if (*result_.objective == std::numeric_limits<Value>::max()) return false;
      return s.set_min(z_, *result_.objective + 1);
    }
    if (*result_.objective == std::numeric_limits<Value>::min()) return false;
    return s.set_max(z_, *result_.objective - 1);
  }

  // Leaf reached with all variables fixed. Returns true to stop the search.
  bool leaf() {
    const DomainStore& s = engine_.store();
    Assignment a(inst_.variables.size());
    for (std::size_t v = 0; v < a.size(); ++v) a[v] = s.value(static_cast<VarId>(v));
    if (!check_assignment(inst_, a).empty()) {
      ++result_.rejected_leaves;
      return false;
    }
    std::optional<Value> obj;
    if (optimize_) {
      try {
        obj = objective_value(inst_, a);
      } catch (const VerifierError&) {
        ++result_.rejected_leaves;
        return false;
      }
      if (obj != s.value(z_)) {
        ++result_.rejected_leaves;
        return false;
      }
      result_.objective = obj;
      result_.trajectory.push_back({elapsed(), *obj});
    }
    ++result_.solutions;
    if (cfg_.mode == SearchMode::Enumerate && cfg_.collect_solutions && !optimize_) result_.all_solutions.push_back(a);
    result_.solution = name_assignment(inst_, a);
    if (cfg_.on_solution) cfg_.on_solution(a, obj);
    if (optimize_) return false;
    if (cfg_.mode == SearchMode::Enumerate) return result_.solutions >= cfg_.enumerate_limit;
    return true;
  }

  // Depth-first search; true iff the tree was exhausted.
  bool explore() {
    std::vector<Decision> path;
    if (engine_.fixpoint().failed()) return true;
    std::uint64_t cutoff = use_restarts_ ? static_cast<std::uint64_t>(cfg_.restart_base) : UINT64_MAX;
    std::uint64_t fails_since_restart = 0;

    // Undo decisions until one refutation survives; false when none is left.
    auto backtrack = [&]() -> bool {
      while (!path.empty()) {
        Decision d = path.back();
        path.pop_back();
        engine_.pop_level();
        DomainStore& s = engine_.store();
        if (apply_bound() && s.remove(d.var, d.value) && !engine_.fixpoint().failed()) return true;
        ++result_.failures;
        ++fails_since_restart;
      }
      return false;
    };

    while (true) {
      if (out_of_budget()) return false;
      if (use_restarts_ && fails_since_restart >= cutoff) {
        while (!path.empty()) {
          path.pop_back();
          engine_.pop_level();
        }
        ++result_.restarts;
        fails_since_restart = 0;
        cutoff = static_cast<std::uint64_t>(std::ceil(static_cast<double>(cutoff) * cfg_.restart_factor));
        if (!apply_bound() || engine_.fixpoint().failed()) return true;
      }
      auto d = select_decision(engine_, cfg_, rng_ ? &*rng_ : nullptr);
      if (!d) {
        if (leaf()) return false;
        if (!backtrack()) return true;
        continue;
      }
      ++result_.nodes;
      engine_.push_level();
      path.push_back(*d);
      if (engine_.store().assign(d->var, d->value) && !engine_.fixpoint().failed()) continue;
      ++result_.failures;
      ++fails_since_restart;
      if (!backtrack()) return true;
    }
  }

  const Instance& inst_;
  SearchConfig cfg_;
  bool optimize_;
  bool maximize_ = false;
  bool use_restarts_ = false;
  VarId z_ = -1;
  Engine engine_;
  std::optional<std::mt19937_64> rng_;
  std::chrono::steady_clock::time_point start_;
  SolveResult result_;
  mutable std::uint64_t ticks_ = 0;
};

}  // namespace

SolveResult solve_csp(const Instance& inst, const SearchConfig& cfg) {
  SearchConfig c = cfg;
  if (c.mode == SearchMode::Optimize) c.mode = SearchMode::FirstSolution;
  return Search(inst, c, false).run();
}

SolveResult solve_cop(const Instance& inst, const SearchConfig& cfg) {
  SearchConfig c = cfg;
  c.mode = SearchMode::Optimize;
  return Search(inst, c, true).run();
}

SolveResult solve(const Instance& inst, SearchConfig cfg) {
  if (inst.objective) return solve_cop(inst, cfg);
  return solve_csp(inst, cfg);
}

}  // namespace xcsp
