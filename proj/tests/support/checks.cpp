#include "checks.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "random_instance.hpp"
#include "xcsp/engine.hpp"
#include "xcsp/io.hpp"
#include "xcsp/search.hpp"
#include "xcsp/verifier.hpp"

namespace xcsp::testing {

namespace {

std::vector<Domain> instance_domains(const Instance& inst) {
  std::vector<Domain> doms;
  for (const auto& v : inst.variables) doms.push_back(v.dom);
  return doms;
}

// Keeps each value with probability 3/4, never emptying a domain.
std::vector<Domain> shrink(const std::vector<Domain>& doms, std::mt19937_64& rng) {
  std::vector<Domain> out;
  for (const auto& d : doms) {
    std::vector<Value> keep;
    for (Value v : d.values()) {
      if (rng() % 4 != 0) keep.push_back(v);
    }
    if (keep.empty()) keep.push_back(d.values()[rng() % d.size()]);
    out.emplace_back(keep);
  }
  return out;
}

std::string describe(const Constraint& c, const std::vector<Domain>& doms, const std::string& what) {
  Instance inst;
  for (std::size_t i = 0; i < doms.size(); ++i) inst.add_variable("x" + std::to_string(i), doms[i]);
  inst.constraints.push_back(c);
  return what + "\n" + write_instance(inst);
}

std::vector<std::vector<Value>> store_values(const DomainStore& s, std::size_t n) {
  std::vector<std::vector<Value>> out;
  for (std::size_t v = 0; v < n; ++v) out.push_back(s.values(static_cast<VarId>(v)));
  return out;
}

}  // namespace

Projection brute_projection(const Constraint& c, const std::vector<Domain>& doms) {
  Projection p;
  p.values.resize(doms.size());
  const auto scope = scope_of(c);
  std::vector<std::set<Value>> seen(doms.size());
  std::vector<Value> x(doms.size());
  for (std::size_t i = 0; i < doms.size(); ++i) x[i] = doms[i].min();
  std::vector<std::size_t> at(scope.size(), 0);
  while (true) {
    for (std::size_t k = 0; k < scope.size(); ++k) x[scope[k]] = doms[scope[k]].values()[at[k]];
    if (!check_constraint(c, x)) {
      p.any = true;
      for (VarId v : scope) seen[v].insert(x[v]);
    }
    std::size_t k = 0;
    while (k < scope.size() && ++at[k] == doms[scope[k]].size()) at[k++] = 0;
    if (k == scope.size()) break;
  }
  for (std::size_t v = 0; v < doms.size(); ++v) {
    if (std::find(scope.begin(), scope.end(), static_cast<VarId>(v)) == scope.end()) {
      auto vals = doms[v].values();
      p.values[v].assign(vals.begin(), vals.end());
    } else {
      p.values[v].assign(seen[v].begin(), seen[v].end());
    }
  }
  return p;
}

namespace {

// Occurrences of variables in the constraint, with repetitions.
std::vector<VarId> occurrences(const Constraint& c) {
  std::vector<VarId> out;
  std::visit(
      [&](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Extension> || std::is_same_v<K, Regular> || std::is_same_v<K, Mdd>) {
          out = k.scope;
        } else if constexpr (std::is_same_v<K, Instantiate>) {
          out = k.list;
        } else if constexpr (std::is_same_v<K, Element>) {
          for (const auto& e : k.list) collect_vars(e, out);
          out.push_back(k.index);
          if (k.col_index) out.push_back(*k.col_index);
          collect_vars(k.value, out);
        } else if constexpr (std::is_same_v<K, AllDifferent>) {
          for (const auto& e : k.list) {
            if (!e.is_var()) out.push_back(-1);
            collect_vars(e, out);
          }
        }
      },
      c.kind);
  return out;
}

}  // namespace

// GAC is promised over distinct variables only; a repeated variable turns
// the constraint into a different relation on fewer variables.
bool claims_gac(const Constraint& c) {
  auto occ = occurrences(c);
  std::sort(occ.begin(), occ.end());
  if (std::adjacent_find(occ.begin(), occ.end()) != occ.end() ||
      (!occ.empty() && occ.front() < 0))
    return false;
  return std::visit(
      [&](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Extension> || std::is_same_v<K, Element> || std::is_same_v<K, Regular> ||
                      std::is_same_v<K, Mdd> || std::is_same_v<K, Instantiate>) {
          return true;
        } else if constexpr (std::is_same_v<K, Intension>) {
          return scope_of(c).size() <= 3;
        } else if constexpr (std::is_same_v<K, AllDifferent>) {
          return true;
        } else {
          return false;
        }
      },
      c.kind);
}

PropagatorStats check_propagators(std::uint64_t seed, int configs) {
  PropagatorStats st;
  std::mt19937_64 rng(seed);
  for (int i = 0; i < configs; ++i) {
    const int kind = i % RandomInstance::kKinds;
    RandomInstance gen(seed * 1'000'003 + static_cast<std::uint64_t>(i));
    Instance inst = gen.make(5, 6, kind);
    const Constraint c = inst.constraints[0];
    const auto doms = shrink(instance_domains(inst), rng);
    const Projection proj = brute_projection(c, doms);

    DomainStore store{std::span<const Domain>(doms)};
    const auto out = propagate(c, store);
    ++st.configs;
    ++st.per_kind[static_cast<std::size_t>(kind)];
    if (out.failed()) ++st.failures_seen;

    auto note = [&](const std::string& what) {
      if (st.examples.size() < 5) st.examples.push_back(describe(c, doms, what));
    };
    if (out.failed()) {
      if (proj.any) {
        ++st.soundness_violations;
        note("failed although a solution exists");
      }
    } else {
      bool sound = true;
      for (std::size_t v = 0; v < doms.size() && sound; ++v) {
        for (Value x : proj.values[v]) {
          if (!store.contains(static_cast<VarId>(v), x)) sound = false;
        }
      }
      if (!sound) {
        ++st.soundness_violations;
        note("removed a supported value");
      }
      if (claims_gac(c)) {
        ++st.gac_checked;
        bool exact = proj.any;
        for (std::size_t v = 0; v < doms.size() && exact; ++v) {
          if (store.values(static_cast<VarId>(v)) != proj.values[v]) exact = false;
        }
        if (!exact) {
          ++st.gac_violations;
          note(proj.any ? "kept an unsupported value" : "missed a failure");
        }
      }
    }
    if (out.failed() && claims_gac(c)) ++st.gac_checked;
  }
  return st;
}

ConfluenceStats check_confluence(std::uint64_t seed, int cases, int shuffles) {
  ConfluenceStats st;
  std::mt19937_64 rng(seed);
  for (int i = 0; i < cases; ++i) {
    RandomInstance gen(seed * 7919 + static_cast<std::uint64_t>(i));
    Instance inst = gen.make(5, 5);
    for (int extra = 0; extra < 3; ++extra) gen.post(static_cast<int>(rng() % RandomInstance::kKinds));
    inst = gen.instance();
    const auto doms = shrink(instance_domains(inst), rng);
    const std::size_t n = doms.size();

    DomainStore ref{std::span<const Domain>(doms)};
    const bool ref_failed = fixpoint(ref, inst.constraints).failed();
    const auto ref_values = store_values(ref, n);
    ++st.cases;
    if (!ref_failed) {
      const auto again = fixpoint(ref, inst.constraints);
      if (again.failed() || again.removals != 0 || store_values(ref, n) != ref_values) ++st.idempotence_violations;
    }
    for (int s = 0; s < shuffles; ++s) {
      DomainStore other{std::span<const Domain>(doms)};
      const bool failed = fixpoint(other, inst.constraints, rng()).failed();
      ++st.shuffles;
      if (failed != ref_failed || (!failed && store_values(other, n) != ref_values)) ++st.mismatches;
    }
  }
  return st;
}

int check_trail(std::uint64_t seed, int sequences, int length) {
  std::mt19937_64 rng(seed);
  int mismatches = 0;
  for (int s = 0; s < sequences; ++s) {
    std::vector<Domain> doms;
    const int n = 2 + static_cast<int>(rng() % 4);
    for (int v = 0; v < n; ++v) {
      std::vector<Value> vals;
      for (Value x = -3; x <= 8; ++x) {
        if (rng() % 3 != 0) vals.push_back(x);
      }
      if (vals.empty()) vals.push_back(0);
      doms.emplace_back(vals);
    }
    DomainStore store{std::span<const Domain>(doms)};
    // replayed reference: one copy of every domain per level
    std::vector<std::vector<std::set<Value>>> ref(1);
    for (const auto& d : doms) ref[0].emplace_back(d.values().begin(), d.values().end());

    auto compare = [&] {
      const auto& top = ref.back();
      for (int v = 0; v < n; ++v) {
        auto got = store.values(v);
        if (std::vector<Value>(top[v].begin(), top[v].end()) != got) return false;
        if (!got.empty() && (store.min(v) != *top[v].begin() || store.max(v) != *top[v].rbegin())) return false;
      }
      return store.level() + 1 == static_cast<int>(ref.size());
    };

    bool bad = false;
    for (int step = 0; step < length && !bad; ++step) {
      const int op = static_cast<int>(rng() % 10);
      const int level = store.level();
      if (op < 2) {
        store.push_level();
        ref.push_back(ref.back());
      } else if (op < 4 && level > 0) {
        store.pop_level();
        ref.pop_back();
        if (store.failed()) bad = true;
      } else {
        const VarId v = static_cast<VarId>(rng() % static_cast<unsigned>(n));
        const Value x = -4 + static_cast<Value>(rng() % 14);
        std::set<Value> next = ref.back()[v];
        bool ok = true;
        switch (op) {
          case 4:
          case 5:
          case 6:
            next.erase(x);
            break;
          case 7:
            next.erase(next.begin(), next.lower_bound(x));
            break;
          case 8:
            next.erase(next.upper_bound(x), next.end());
            break;
          default:
            next = next.count(x) ? std::set<Value>{x} : std::set<Value>{};
        }
        // emptying at the root would leave nothing to restore
        if (next.empty() && level == 0) continue;
        switch (op) {
          case 4:
          case 5:
          case 6: ok = store.remove(v, x); break;
          case 7: ok = store.set_min(v, x); break;
          case 8: ok = store.set_max(v, x); break;
          default: ok = store.assign(v, x);
        }
        if (ok != !next.empty() || store.failed() == ok) {
          bad = true;
          break;
        }
        if (!ok) {
          // a failed level is abandoned
          store.pop_level();
          ref.pop_back();
          if (store.failed()) bad = true;
        } else {
          ref.back()[v] = next;
        }
      }
      if (!bad && !compare()) bad = true;
    }
    while (!bad && store.level() > 0) {
      store.pop_level();
      ref.pop_back();
      if (!compare()) bad = true;
    }
    if (bad) ++mismatches;
  }
  return mismatches;
}

SearchStats check_search(std::uint64_t seed, int instances, int max_vars, int max_dom) {
  SearchStats st;
  for (int i = 0; i < instances; ++i) {
    const std::uint64_t s = seed * 104'729 + static_cast<std::uint64_t>(i);
    RandomInstance gen(s);
    const bool cop = i % 3 == 0;
    const Instance inst = gen.make(max_vars, max_dom, i % RandomInstance::kKinds, cop);
    ++st.instances;
    auto note = [&](const std::string& what) {
      if (st.examples.size() < 5) st.examples.push_back(what + "\n" + write_instance(inst));
    };

    const auto brute = enumerate_assignments(inst, SIZE_MAX);
    const std::set<Assignment> expected(brute.begin(), brute.end());
    if (!brute.empty()) ++st.satisfiable;

    SearchConfig en;
    en.mode = SearchMode::Enumerate;
    en.collect_solutions = true;
    const auto all = solve_csp(inst, en);
    st.rejected_leaves += static_cast<int>(all.rejected_leaves);
    const std::set<Assignment> got(all.all_solutions.begin(), all.all_solutions.end());
    if (got != expected || all.solutions != brute.size() || all.all_solutions.size() != brute.size()) {
      ++st.csp_mismatches;
      note("enumeration differs from brute force");
      continue;
    }

    // first-solution status under every heuristic combination
    bool status_ok = true;
    for (auto var : {VarHeuristic::Dom, VarHeuristic::DomWdeg, VarHeuristic::Lexical}) {
      for (auto val : {ValHeuristic::Min, ValHeuristic::Max, ValHeuristic::Random}) {
        SearchConfig cfg;
        cfg.var = var;
        cfg.val = val;
        cfg.seed = s;
        const auto r = solve_csp(inst, cfg);
        st.rejected_leaves += static_cast<int>(r.rejected_leaves);
        const auto want = brute.empty() ? SolveStatus::Unsat : SolveStatus::Sat;
        if (r.status != want) status_ok = false;
        if (r.status == SolveStatus::Sat && (!r.solution || !check_instantiation(inst, *r.solution).empty()))
          status_ok = false;
      }
    }
    if (!status_ok) {
      ++st.csp_mismatches;
      note("first-solution status differs from brute force");
      continue;
    }

    if (!cop) continue;
    ++st.cop_checked;
    const bool minimize = inst.objective->sense == Sense::Minimize;
    std::optional<Value> best;
    for (const auto& a : brute) {
      const Value v = objective_value(inst, a);
      if (!best || (minimize ? v < *best : v > *best)) best = v;
    }
    for (auto var : {VarHeuristic::Dom, VarHeuristic::DomWdeg, VarHeuristic::Lexical}) {
      SearchConfig cfg;
      cfg.var = var;
      cfg.restarts = var == VarHeuristic::DomWdeg;
      const auto r = solve_cop(inst, cfg);
      st.rejected_leaves += static_cast<int>(r.rejected_leaves);
      bool ok = best ? (r.status == SolveStatus::Optimum && r.objective == best && r.solution &&
                        objective_value(inst, *r.solution) == *best)
                     : r.status == SolveStatus::Unsat;
      // the trajectory improves strictly and ends at the optimum
      for (std::size_t t = 1; t < r.trajectory.size() && ok; ++t) {
        ok = minimize ? r.trajectory[t].value < r.trajectory[t - 1].value
                      : r.trajectory[t].value > r.trajectory[t - 1].value;
      }
      if (ok && best) ok = !r.trajectory.empty() && r.trajectory.back().value == *best;
      if (!ok) {
        ++st.cop_mismatches;
        note("optimum differs from brute force");
        break;
      }
    }
  }
  return st;
}

int costas_oracle(int n) {
  std::vector<Value> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  int count = 0;
  do {
    std::set<std::pair<int, Value>> vectors;
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) {
      for (int j = i + 1; j < n && ok; ++j) ok = vectors.insert({j - i, perm[j] - perm[i]}).second;
    }
    count += ok;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return count;
}

}  // namespace xcsp::testing
