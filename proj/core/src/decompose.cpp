#include <map>
#include <set>

#include "xcsp/model.hpp"

namespace xcsp {

namespace {

void unfold_slide(const Slide& s, const std::string& tag, Instance& out) {
  const std::size_t n = s.list.size();
  const auto arity = static_cast<std::size_t>(s.arity);
  const auto step = static_cast<std::size_t>(s.offset);
  for (std::size_t i = 0; s.circular ? i < n : i + arity <= n; i += step) {
    std::vector<VarId> args;
    for (std::size_t k = 0; k < arity; ++k) args.push_back(s.list[(i + k) % n]);
    if (s.condition) {
      out.post(Intension{substitute_params(*s.condition, args)}, tag);
    } else {
      out.post(Extension{args, s.tuples, s.positive}, tag);
    }
  }
}

void unfold_channel(const Channel& c, const std::string& tag, Instance& out) {
  // Each direction is an element constraint: other[list[i]] = i.
  auto link = [&](const std::vector<VarId>& from, const std::vector<VarId>& onto) {
    std::vector<Expr> list;
    for (VarId v : onto) list.push_back(Expr::var(v));
    for (std::size_t i = 0; i < from.size(); ++i) {
      Element e;
      e.list = list;
      e.index = from[i];
      e.value = Expr::constant(static_cast<Value>(i));
      out.post(std::move(e), tag);
    }
  };
  if (c.list2.empty()) {
    link(c.list1, c.list1);
    return;
  }
  link(c.list1, c.list2);
  if (c.list1.size() == c.list2.size()) link(c.list2, c.list1);
}

Extension unfold_mdd(const Mdd& m) {
  std::map<std::string, std::vector<std::pair<Value, std::string>>> succ;
  std::set<std::string> targets;
  for (const auto& t : m.transitions) {
    succ[t.from].emplace_back(t.value, t.to);
    targets.insert(t.to);
  }
  std::string root;
  for (const auto& [s, _] : succ) {
    if (!targets.count(s)) root = s;
  }
  Extension ext{m.scope, {}, true};
  Tuple path;
  std::size_t paths = 0;
  // Depth-first path enumeration; paths of the wrong length never reach a
  // terminal at the last layer and are dropped.
  auto walk = [&](auto&& self, const std::string& state) -> void {
    if (path.size() == m.scope.size()) {
      if (succ.find(state) == succ.end()) {
        if (++paths > kMaxMddPaths) throw ModelError("mdd has more than 10^6 paths");
        ext.tuples.push_back(path);
      }
      return;
    }
    auto it = succ.find(state);
    if (it == succ.end()) return;
    for (const auto& [value, next] : it->second) {
      path.push_back(value);
      self(self, next);
      path.pop_back();
    }
  };
  walk(walk, root);
  return ext;
}

}  // namespace

std::vector<Constraint> decompose_constraint(const Constraint& c) {
  Instance out;
  if (const auto* s = std::get_if<Slide>(&c.kind)) {
    unfold_slide(*s, c.tag, out);
  } else if (const auto* ch = std::get_if<Channel>(&c.kind)) {
    unfold_channel(*ch, c.tag, out);
  } else if (const auto* m = std::get_if<Mdd>(&c.kind)) {
    out.post(unfold_mdd(*m), c.tag);
  } else {
    out.constraints.push_back(c);
  }
  return std::move(out.constraints);
}

Instance decompose_meta(const Instance& inst) {
  Instance out;
  out.name = inst.name;
  out.variables = inst.variables;
  out.objective = inst.objective;
  for (const auto& c : inst.constraints) {
    for (auto& d : decompose_constraint(c)) out.constraints.push_back(std::move(d));
  }
  return out;
}

}  // namespace xcsp
