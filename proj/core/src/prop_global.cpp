// allDifferent (matching based), regular, circuit, cumulative, noOverlap.
#include <algorithm>
#include <map>
#include <string>
#include <unordered_map>

#include "propagators.hpp"

namespace xcsp::detail {

namespace {

bool all_fixed(const DomainStore& s, const std::vector<VarId>& vars) {
  return std::all_of(vars.begin(), vars.end(), [&](VarId v) { return s.fixed(v); });
}

void push_term(std::vector<VarId>& out, const Expr& e) {
  if (e.is_var()) out.push_back(e.var_id());
}

void dedup(std::vector<VarId>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

// ---------------------------------------------------------------------------
// allDifferent with optional exception values. Values in `except` get a
// private node per variable, so they never compete and are never pruned.

class AllDifferentProp : public Propagator {
 public:
  AllDifferentProp(std::vector<VarId> list, std::vector<Value> except)
      : Propagator({}), list_(std::move(list)), except_(std::move(except)) {
    std::sort(except_.begin(), except_.end());
    vars_ = list_;
    dedup(vars_);
  }

  PropStatus propagate(DomainStore& s) override {
    if (!eliminate(s)) return PropStatus::Failed;
    std::uint64_t total = 0;
    for (VarId v : list_) total += s.size(v);
    if (total > kMaxEdges) return PropStatus::Ok;
    return regin(s);
  }

 private:
  static constexpr std::uint64_t kMaxEdges = 2'000'000;

  bool is_except(Value x) const { return std::binary_search(except_.begin(), except_.end(), x); }

  // Fixed variables remove their value from the others.
  bool eliminate(DomainStore& s) {
    bool again = true;
    while (again) {
      again = false;
      for (std::size_t i = 0; i < list_.size(); ++i) {
        if (!s.fixed(list_[i])) continue;
        Value x = s.value(list_[i]);
        if (is_except(x)) continue;
        for (std::size_t j = 0; j < list_.size(); ++j) {
          if (j == i || list_[j] == list_[i]) {
            if (j != i && list_[j] == list_[i]) return false;  // same variable twice
            continue;
          }
          if (!s.contains(list_[j], x)) continue;
          if (!s.remove(list_[j], x)) return false;
          if (s.fixed(list_[j])) again = true;
        }
      }
    }
    return true;
  }

  PropStatus regin(DomainStore& s) {
    const int n = static_cast<int>(list_.size());
    // value nodes
    std::vector<Value> vals;
    std::vector<std::vector<Value>> dom(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      dom[i] = s.values(list_[i]);
      for (Value x : dom[i]) {
        if (!is_except(x)) vals.push_back(x);
      }
    }
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    const int m = static_cast<int>(vals.size());
    // adjacency: var i -> value node ids; except copy of var i is m + i
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      bool has_except = false;
      for (Value x : dom[i]) {
        if (is_except(x)) {
          has_except = true;
        } else {
          adj[i].push_back(static_cast<int>(std::lower_bound(vals.begin(), vals.end(), x) - vals.begin()));
        }
      }
      if (has_except) adj[i].push_back(m + i);
    }
    const int nv = m + n;
    std::vector<int> mate_var(static_cast<std::size_t>(n), -1), mate_val(static_cast<std::size_t>(nv), -1);
    // reuse the previous matching where still valid
    if (hint_.size() == static_cast<std::size_t>(n)) {
      for (int i = 0; i < n; ++i) {
        int h = hint_[i];
        if (h < 0) continue;
        int node = -1;
        if (h >= m && h - m == i) {
          if (!adj[i].empty() && adj[i].back() == m + i) node = h;
        } else if (h < static_cast<int>(hint_vals_.size())) {
          Value x = hint_vals_[h];
          auto it = std::lower_bound(vals.begin(), vals.end(), x);
          if (it != vals.end() && *it == x && s.contains(list_[i], x)) node = static_cast<int>(it - vals.begin());
        }
        if (node >= 0 && mate_val[node] < 0) {
          mate_var[i] = node;
          mate_val[node] = i;
        }
      }
    }
    std::vector<int> seen(static_cast<std::size_t>(nv), -1);
    std::vector<std::pair<int, std::size_t>> stack;
    std::vector<int> parent_var(static_cast<std::size_t>(nv));
    for (int i = 0; i < n; ++i) {
      if (mate_var[i] >= 0) continue;
      // iterative augmenting path search from variable i
      bool found = false;
      stack.assign(1, {i, 0});
      while (!stack.empty() && !found) {
        auto& [x, k] = stack.back();
        if (k == adj[x].size()) {
          stack.pop_back();
          continue;
        }
        int v = adj[x][k++];
        if (seen[v] == i) continue;
        seen[v] = i;
        parent_var[v] = x;
        if (mate_val[v] < 0) {
          // augment along parents
          int cur = v;
          while (true) {
            int px = parent_var[cur];
            int prev = mate_var[px];
            mate_var[px] = cur;
            mate_val[cur] = px;
            if (px == i) break;
            cur = prev;
          }
          found = true;
        } else {
          stack.push_back({mate_val[v], 0});
        }
      }
      if (!found) return PropStatus::Failed;
    }
    hint_ = mate_var;
    hint_vals_ = vals;

    // Residual graph: var -> value for unmatched edges, value -> var for
    // matched ones, free value -> T, T -> matched value.
    const int T = n + nv;
    const int N = T + 1;
    std::vector<std::vector<int>> g(static_cast<std::size_t>(N));
    for (int i = 0; i < n; ++i) {
      for (int v : adj[i]) {
        if (mate_var[i] == v) {
          g[n + v].push_back(i);
        } else {
          g[i].push_back(n + v);
        }
      }
    }
    for (int v = 0; v < nv; ++v) {
      if (mate_val[v] < 0) {
        g[n + v].push_back(T);
      } else {
        g[T].push_back(n + v);
      }
    }
    std::vector<int> comp = scc(g);
    for (int i = 0; i < n; ++i) {
      for (int v : adj[i]) {
        if (v >= m || mate_var[i] == v || comp[i] == comp[n + v]) continue;
        if (!s.remove(list_[i], vals[v])) return PropStatus::Failed;
      }
    }
    return all_fixed(s, list_) ? PropStatus::Entailed : PropStatus::Ok;
  }

  // Tarjan, iterative.
  static std::vector<int> scc(const std::vector<std::vector<int>>& g) {
    const int N = static_cast<int>(g.size());
    std::vector<int> index(N, -1), low(N, 0), comp(N, -1), st;
    std::vector<char> on(N, 0);
    std::vector<std::pair<int, std::size_t>> call;
    int counter = 0, ncomp = 0;
    for (int r = 0; r < N; ++r) {
      if (index[r] >= 0) continue;
      call.push_back({r, 0});
      index[r] = low[r] = counter++;
      st.push_back(r);
      on[r] = 1;
      while (!call.empty()) {
        auto& [u, k] = call.back();
        if (k < g[u].size()) {
          int w = g[u][k++];
          if (index[w] < 0) {
            index[w] = low[w] = counter++;
            st.push_back(w);
            on[w] = 1;
            call.push_back({w, 0});
          } else if (on[w]) {
            low[u] = std::min(low[u], index[w]);
          }
          continue;
        }
        if (low[u] == index[u]) {
          int w;
          do {
            w = st.back();
            st.pop_back();
            on[w] = 0;
            comp[w] = ncomp;
          } while (w != u);
          ++ncomp;
        }
        int done = u;
        call.pop_back();
        if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
      }
    }
    return comp;
  }

  std::vector<VarId> list_;
  std::vector<Value> except_;
  std::vector<int> hint_;
  std::vector<Value> hint_vals_;
};

// ---------------------------------------------------------------------------

class RegularProp : public Propagator {
 public:
  RegularProp(std::vector<VarId> scope, const Automaton& a) : Propagator(scope), scope_(std::move(scope)) {
    std::map<std::string, int> id;
    auto state = [&](const std::string& name) {
      auto [it, fresh] = id.emplace(name, static_cast<int>(id.size()));
      if (fresh) delta_.emplace_back();
      return it->second;
    };
    start_ = state(a.start);
    for (const auto& t : a.transitions) {
      int f = state(t.from), to = state(t.to);
      delta_[f].push_back({t.value, to});
    }
    final_.assign(delta_.size(), 0);
    for (const auto& f : a.finals) {
      final_.resize(std::max(final_.size(), delta_.size() + 1), 0);
      final_[state(f)] = 1;
    }
    final_.resize(delta_.size(), 0);
  }

  PropStatus propagate(DomainStore& s) override {
    const std::size_t n = scope_.size(), q = delta_.size();
    std::vector<std::vector<char>> reach(n + 1, std::vector<char>(q, 0));
    reach[0][start_] = 1;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t p = 0; p < q; ++p) {
        if (!reach[i][p]) continue;
        for (auto [v, to] : delta_[p]) {
          if (s.contains(scope_[i], v)) reach[i + 1][to] = 1;
        }
      }
    }
    std::vector<char> alive(q, 0);
    bool any = false;
    for (std::size_t p = 0; p < q; ++p) {
      alive[p] = reach[n][p] && final_[p];
      any = any || alive[p];
    }
    if (!any) return PropStatus::Failed;
    std::vector<std::vector<Value>> support(n);
    for (std::size_t i = n; i-- > 0;) {
      std::vector<char> prev(q, 0);
      for (std::size_t p = 0; p < q; ++p) {
        if (!reach[i][p]) continue;
        for (auto [v, to] : delta_[p]) {
          if (alive[to] && s.contains(scope_[i], v)) {
            prev[p] = 1;
            support[i].push_back(v);
          }
        }
      }
      alive.swap(prev);
    }
    // with repeated variables the layers relax the constraint; only a
    // call that changes nothing on a fixed scope proves it
    const std::uint64_t before = s.removals();
    for (std::size_t i = 0; i < n; ++i) {
      auto& sup = support[i];
      std::sort(sup.begin(), sup.end());
      sup.erase(std::unique(sup.begin(), sup.end()), sup.end());
      if (!s.retain(scope_[i], [&](Value x) { return std::binary_search(sup.begin(), sup.end(), x); })) {
        return PropStatus::Failed;
      }
    }
    return all_fixed(s, scope_) && s.removals() == before ? PropStatus::Entailed : PropStatus::Ok;
  }

 private:
  std::vector<VarId> scope_;
  std::vector<std::vector<std::pair<Value, int>>> delta_;
  std::vector<char> final_;
  int start_ = 0;
};

// ---------------------------------------------------------------------------
// Circuit over successor variables (index 0 based). The compiler adds the
// allDifferent part separately.

class CircuitProp : public Propagator {
 public:
  explicit CircuitProp(std::vector<VarId> list) : Propagator(list), list_(std::move(list)) {}

  PropStatus propagate(DomainStore& s) override {
    const auto n = static_cast<Value>(list_.size());
    if (n < 2) return PropStatus::Failed;
    for (VarId v : list_) {
      if (!s.set_min(v, 0) || !s.set_max(v, n - 1)) return PropStatus::Failed;
    }
    int can_move = 0;
    for (Value i = 0; i < n; ++i) {
      VarId v = list_[static_cast<std::size_t>(i)];
      if (!(s.fixed(v) && s.value(v) == i)) ++can_move;
    }
    if (can_move < 2) return PropStatus::Failed;

    std::vector<Value> succ(static_cast<std::size_t>(n), -1);
    std::vector<char> has_pred(static_cast<std::size_t>(n), 0);
    for (Value i = 0; i < n; ++i) {
      VarId v = list_[static_cast<std::size_t>(i)];
      if (s.fixed(v) && s.value(v) != i) {
        succ[i] = s.value(v);
        has_pred[static_cast<std::size_t>(succ[i])] = 1;
      }
    }
    auto self_ok = [&](Value k) { return s.contains(list_[static_cast<std::size_t>(k)], k); };
    std::vector<char> in_chain(static_cast<std::size_t>(n), 0);
    for (Value st = 0; st < n; ++st) {
      if (succ[st] < 0 || has_pred[st]) continue;
      std::vector<char> mark(static_cast<std::size_t>(n), 0);
      Value e = st;
      mark[e] = 1;
      while (succ[e] >= 0) {
        e = succ[e];
        // two fixed predecessors of one node
        if (mark[e]) return PropStatus::Failed;
        mark[e] = 1;
      }
      for (Value k = 0; k < n; ++k) in_chain[k] = in_chain[k] || mark[k];
      // closing st..e now leaves every other node as a self-loop
      bool others_can_loop = true;
      for (Value k = 0; k < n && others_can_loop; ++k) {
        if (!mark[k] && !self_ok(k)) others_can_loop = false;
      }
      if (!others_can_loop && !s.remove(list_[static_cast<std::size_t>(e)], st)) return PropStatus::Failed;
    }
    // nodes with a fixed successor not on any open chain lie on cycles
    for (Value i = 0; i < n; ++i) {
      if (succ[i] < 0 || in_chain[i]) continue;
      std::vector<char> on(static_cast<std::size_t>(n), 0);
      Value k = i;
      do {
        on[k] = 1;
        k = succ[k];
      } while (k != i && k >= 0 && !on[k]);
      if (k >= 0 && k != i) return PropStatus::Failed;
      if (k < 0) continue;
      for (Value j = 0; j < n; ++j) {
        if (!on[j] && !s.assign(list_[static_cast<std::size_t>(j)], j)) return PropStatus::Failed;
      }
      return PropStatus::Entailed;
    }
    return PropStatus::Ok;
  }

 private:
  std::vector<VarId> list_;
};

// ---------------------------------------------------------------------------
// Cumulative: compulsory-part profile. Capacity pruning applies to le/lt
// conditions; other conditions are checked on complete assignments.

class CumulativeProp : public Propagator {
 public:
  CumulativeProp(std::vector<VarId> origins, std::vector<Expr> lengths, std::vector<Expr> heights,
                 Condition cond)
      : Propagator({}), o_(std::move(origins)), l_(std::move(lengths)), h_(std::move(heights)),
        cond_(std::move(cond)) {
    vars_ = o_;
    for (const auto& e : l_) push_term(vars_, e);
    for (const auto& e : h_) push_term(vars_, e);
    for (VarId v : rhs_vars(cond_)) vars_.push_back(v);
    dedup(vars_);
  }

  PropStatus propagate(DomainStore& s) override {
    const std::size_t n = o_.size();
    // compulsory parts [max(o), min(o) + min(l)) at min height
    std::vector<Value> from(n, 0), to(n, 0), hgt(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      i128 end = i128{s.min(o_[i])} + term_min(l_[i], s);
      Value h = term_min(h_[i], s);
      if (end > s.max(o_[i]) && h > 0) {
        from[i] = s.max(o_[i]);
        to[i] = to_value(end);
        hgt[i] = h;
      }
    }
    const bool any_part = std::any_of(hgt.begin(), hgt.end(), [](Value h) { return h > 0; });
    const i128 peak = max_load(from, to, hgt, n, 0, 0, 0);
    // a negative height can relieve the load, so profiles prove nothing then
    bool nonneg = std::all_of(h_.begin(), h_.end(), [&](const Expr& e) { return term_min(e, s) >= 0; });
    if (nonneg && (cond_.op == CmpOp::Le || cond_.op == CmpOp::Lt)) {
      // uncovered time points carry no requirement
      if (const auto* r = std::get_if<VarRef>(&cond_.rhs); r && any_part) {
        i128 need = cond_.op == CmpOp::Lt ? peak + 1 : peak;
        if (!s.set_min(r->id, to_value(need))) return PropStatus::Failed;
      }
      const i128 cap = allowed(cond_, s).hi;
      if (any_part && peak > cap) return PropStatus::Failed;
      for (std::size_t i = 0; i < n; ++i) {
        const Value len = term_min(l_[i], s), h = term_min(h_[i], s);
        if (len <= 0 || h <= 0 || s.fixed(o_[i]) || s.size(o_[i]) > 100000) continue;
        auto fits = [&](Value st) {
          return h + max_load(from, to, hgt, i, st, to_value(i128{st} + len), 1) <= cap;
        };
        if (!s.retain(o_[i], fits)) return PropStatus::Failed;
      }
    }
    if (!all_fixed(s, vars_)) return PropStatus::Ok;
    return check(s) ? PropStatus::Entailed : PropStatus::Failed;
  }

 private:
  // Peak of the parts other than `skip` (over [lo, hi) when `window`).
  static i128 max_load(const std::vector<Value>& from, const std::vector<Value>& to,
                       const std::vector<Value>& hgt, std::size_t skip, Value lo, Value hi, int window) {
    std::vector<std::pair<Value, i128>> ev;
    for (std::size_t k = 0; k < from.size(); ++k) {
      if (k == skip || hgt[k] == 0) continue;
      Value a = from[k], b = to[k];
      if (window) {
        a = std::max(a, lo);
        b = std::min(b, hi);
        if (a >= b) continue;
      }
      ev.push_back({a, hgt[k]});
      ev.push_back({b, -i128{hgt[k]}});
    }
    std::sort(ev.begin(), ev.end());
    i128 load = 0, peak = 0;
    for (std::size_t k = 0; k < ev.size();) {
      Value t = ev[k].first;
      while (k < ev.size() && ev[k].first == t) load += ev[k++].second;
      peak = std::max(peak, load);
    }
    return peak;
  }

  bool check(const DomainStore& s) const {
    std::vector<std::pair<Value, i128>> events;
    for (std::size_t i = 0; i < o_.size(); ++i) {
      Value len = term_min(l_[i], s), h = term_min(h_[i], s);
      if (len <= 0) continue;
      events.push_back({s.value(o_[i]), h});
      events.push_back({to_value(i128{s.value(o_[i])} + len), -i128{h}});
    }
    std::sort(events.begin(), events.end());
    i128 load = 0;
    for (std::size_t k = 0; k < events.size();) {
      Value t = events[k].first;
      while (k < events.size() && events[k].first == t) load += events[k++].second;
      // the load is constant until the next event
      if (covered_at(s, t) && !holds(cond_, load, s)) return false;
    }
    return true;
  }

  bool covered_at(const DomainStore& s, Value t) const {
    for (std::size_t i = 0; i < o_.size(); ++i) {
      Value st = s.value(o_[i]), len = term_min(l_[i], s);
      if (len > 0 && st <= t && i128{t} < i128{st} + len) return true;
    }
    return false;
  }

  std::vector<VarId> o_;
  std::vector<Expr> l_, h_;
  Condition cond_;
};

// ---------------------------------------------------------------------------
// noOverlap in one or more dimensions, pairwise value pruning.

class NoOverlapProp : public Propagator {
 public:
  NoOverlapProp(std::vector<std::vector<VarId>> origins, std::vector<std::vector<Expr>> lengths,
                bool zero_ignored)
      : Propagator({}), o_(std::move(origins)), l_(std::move(lengths)), zero_ignored_(zero_ignored) {
    for (std::size_t i = 0; i < o_.size(); ++i) {
      vars_.insert(vars_.end(), o_[i].begin(), o_[i].end());
      for (const auto& e : l_[i]) push_term(vars_, e);
    }
    dedup(vars_);
  }

  PropStatus propagate(DomainStore& s) override {
    const std::size_t n = o_.size(), k = n ? o_[0].size() : 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (skippable(i, s)) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i || skippable(j, s)) continue;
        for (std::size_t d = 0; d < k; ++d) {
          // other dimensions must overlap whatever the placement
          bool forced = true;
          for (std::size_t e = 0; e < k && forced; ++e) {
            if (e != d) forced = surely_overlap(i, j, e, s);
          }
          if (!forced) continue;
          const VarId x = o_[i][d];
          const i128 li = term_min(l_[i][d], s), lj = term_min(l_[j][d], s);
          const i128 jmin = s.min(o_[j][d]), jmax = s.max(o_[j][d]);
          auto clash = [&](Value st) { return jmin > st - lj && jmax < st + li; };
          if (s.is_interval_var(x) || s.size(x) > 100000) {
            while (s.min(x) <= s.max(x) && clash(s.min(x))) {
              if (!s.set_min(x, s.min(x) + 1)) return PropStatus::Failed;
            }
            while (clash(s.max(x))) {
              if (!s.set_max(x, s.max(x) - 1)) return PropStatus::Failed;
            }
          } else if (!s.retain(x, [&](Value st) { return !clash(st); })) {
            return PropStatus::Failed;
          }
        }
      }
    }
    if (!all_fixed(s, vars_)) return PropStatus::Ok;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (skippable(i, s) || skippable(j, s)) continue;
        bool separated = false;
        for (std::size_t d = 0; d < k && !separated; ++d) {
          i128 oi = s.value(o_[i][d]), oj = s.value(o_[j][d]);
          separated = oi + term_min(l_[i][d], s) <= oj || oj + term_min(l_[j][d], s) <= oi;
        }
        if (!separated) return PropStatus::Failed;
      }
    }
    return PropStatus::Entailed;
  }

 private:
  // Box i may still get a zero length that exempts it.
  bool skippable(std::size_t i, const DomainStore& s) const {
    if (!zero_ignored_) return false;
    for (const auto& e : l_[i]) {
      if (e.is_var() ? s.contains(e.var_id(), 0) : e.value == 0) return true;
    }
    return false;
  }

  bool surely_overlap(std::size_t i, std::size_t j, std::size_t e, const DomainStore& s) const {
    i128 li = term_min(l_[i][e], s), lj = term_min(l_[j][e], s);
    return i128{s.max(o_[i][e])} < i128{s.min(o_[j][e])} + lj &&
           i128{s.max(o_[j][e])} < i128{s.min(o_[i][e])} + li;
  }

  std::vector<std::vector<VarId>> o_;
  std::vector<std::vector<Expr>> l_;
  bool zero_ignored_;
};

}  // namespace

PropPtr make_alldifferent(std::vector<VarId> list, std::vector<Value> except) {
  return std::make_unique<AllDifferentProp>(std::move(list), std::move(except));
}
PropPtr make_regular(std::vector<VarId> scope, const Automaton& a) {
  return std::make_unique<RegularProp>(std::move(scope), a);
}
PropPtr make_circuit(std::vector<VarId> list) { return std::make_unique<CircuitProp>(std::move(list)); }
PropPtr make_cumulative(std::vector<VarId> origins, std::vector<Expr> lengths, std::vector<Expr> heights,
                        Condition cond) {
  return std::make_unique<CumulativeProp>(std::move(origins), std::move(lengths), std::move(heights),
                                          std::move(cond));
}
PropPtr make_nooverlap(std::vector<std::vector<VarId>> origins, std::vector<std::vector<Expr>> lengths,
                       bool zero_ignored) {
  return std::make_unique<NoOverlapProp>(std::move(origins), std::move(lengths), zero_ignored);
}

}  // namespace xcsp::detail
