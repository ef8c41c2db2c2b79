#include <sstream>

#include "xcsp/io.hpp"
#include "xcsp/xml.hpp"

namespace xcsp {

namespace {

std::string value_text(Value v) { return v == kStar ? "*" : std::to_string(v); }

}  // namespace

std::string format_domain(const Domain& d) {
  std::string out;
  auto vals = d.values();
  std::size_t i = 0;
  while (i < vals.size()) {
    std::size_t j = i;
    while (j + 1 < vals.size() && vals[j + 1] == vals[j] + 1) ++j;
    if (!out.empty()) out += ' ';
    if (j - i >= 2) {
      out += std::to_string(vals[i]) + ".." + std::to_string(vals[j]);
    } else {
      for (std::size_t k = i; k <= j; ++k) {
        if (k > i) out += ' ';
        out += std::to_string(vals[k]);
      }
    }
    i = j + 1;
  }
  return out;
}

std::string write_expr(const Expr& e, const Instance& inst) {
  switch (e.op) {
    case Op::Const:
      return std::to_string(e.value);
    case Op::Var:
      if (e.value >= 0 && static_cast<std::size_t>(e.value) < inst.variables.size()) {
        return inst.variables[static_cast<std::size_t>(e.value)].id;
      }
      return "?" + std::to_string(e.value);
    case Op::Param:
      return "%" + std::to_string(e.value);
    default:
      break;
  }
  std::string out = op_name(e.op);
  out += '(';
  for (std::size_t i = 0; i < e.args.size(); ++i) {
    if (i > 0) out += ',';
    out += write_expr(e.args[i], inst);
  }
  if (e.op == Op::In) {
    out += ",set(";
    for (std::size_t i = 0; i < e.set.size(); ++i) {
      if (i > 0) out += ',';
      out += std::to_string(e.set[i]);
    }
    out += ')';
  }
  out += ')';
  return out;
}

namespace {

class Writer {
 public:
  explicit Writer(const Instance& inst) : inst_(inst) {}

  std::string run() {
    out_ << "<instance";
    if (!inst_.name.empty()) out_ << " id=\"" << xml::escape(inst_.name) << '"';
    out_ << " format=\"XCSP3\" type=\"" << (inst_.objective ? "COP" : "CSP") << "\">\n";
    write_variables();
    write_constraints();
    if (inst_.objective) write_objective(*inst_.objective);
    out_ << "</instance>\n";
    return out_.str();
  }

 private:
  void line(int depth, const std::string& text) {
    out_ << std::string(static_cast<std::size_t>(depth) * 2, ' ') << text << '\n';
  }

  std::string name(VarId v) const { return inst_.variables[static_cast<std::size_t>(v)].id; }

  std::string vars(const std::vector<VarId>& list) const {
    std::string s;
    for (VarId v : list) {
      if (!s.empty()) s += ' ';
      s += name(v);
    }
    return s;
  }

  std::string exprs(const std::vector<Expr>& list) const {
    std::string s;
    for (const auto& e : list) {
      if (!s.empty()) s += ' ';
      s += xml::escape(write_expr(e, inst_));
    }
    return s;
  }

  static std::string values(const std::vector<Value>& list) {
    std::string s;
    for (Value v : list) {
      if (!s.empty()) s += ' ';
      s += value_text(v);
    }
    return s;
  }

  static std::string tuples(const std::vector<Tuple>& ts, std::size_t arity) {
    std::string s;
    if (arity == 1) {
      for (const auto& t : ts) {
        if (!s.empty()) s += ' ';
        s += value_text(t[0]);
      }
      return s;
    }
    for (const auto& t : ts) {
      s += '(';
      for (std::size_t i = 0; i < t.size(); ++i) {
        if (i > 0) s += ',';
        s += value_text(t[i]);
      }
      s += ')';
    }
    return s;
  }

  static std::string transitions(const std::vector<Transition>& ts) {
    std::string s;
    for (const auto& t : ts) s += "(" + t.from + "," + std::to_string(t.value) + "," + t.to + ")";
    return s;
  }

  std::string condition(const Condition& c) const {
    std::string rhs;
    if (const auto* k = std::get_if<Value>(&c.rhs)) {
      rhs = std::to_string(*k);
    } else if (const auto* r = std::get_if<VarRef>(&c.rhs)) {
      rhs = name(r->id);
    } else if (const auto* iv = std::get_if<Interval>(&c.rhs)) {
      rhs = std::to_string(iv->lo) + ".." + std::to_string(iv->hi);
    } else {
      const auto& set = std::get<std::vector<Value>>(c.rhs);
      rhs = "{";
      for (std::size_t i = 0; i < set.size(); ++i) {
        if (i > 0) rhs += ',';
        rhs += std::to_string(set[i]);
      }
      rhs += "}";
    }
    return std::string("(") + cmp_name(c.op) + "," + rhs + ")";
  }

  void leaf(int d, const std::string& tag, const std::string& body,
            const std::string& attrs = {}) {
    line(d, "<" + tag + attrs + "> " + body + " </" + tag + ">");
  }

  void write_variables() {
    line(1, "<variables>");
    for (const auto& v : inst_.variables) {
      leaf(2, "var", format_domain(v.dom), " id=\"" + xml::escape(v.id) + "\"");
    }
    line(1, "</variables>");
  }

  void write_constraints() {
    line(1, "<constraints>");
    std::size_t i = 0;
    const auto& cs = inst_.constraints;
    while (i < cs.size()) {
      if (cs[i].tag.empty()) {
        write(cs[i], 2);
        ++i;
        continue;
      }
      line(2, "<block class=\"" + xml::escape(cs[i].tag) + "\">");
      std::size_t j = i;
      while (j < cs.size() && cs[j].tag == cs[i].tag) write(cs[j++], 3);
      line(2, "</block>");
      i = j;
    }
    line(1, "</constraints>");
  }

  void open(int d, const std::string& tag, const std::string& attrs = {}) {
    line(d, "<" + tag + attrs + ">");
  }
  void close(int d, const std::string& tag) { line(d, "</" + tag + ">"); }

  void write(const Constraint& c, int d) {
    std::visit([&](const auto& k) { emit(k, d); }, c.kind);
  }

  void emit(const Extension& c, int d) {
    open(d, "extension");
    leaf(d + 1, "list", vars(c.scope));
    leaf(d + 1, c.positive ? "supports" : "conflicts", tuples(c.tuples, c.scope.size()));
    close(d, "extension");
  }

  void emit(const Intension& c, int d) {
    leaf(d, "intension", xml::escape(write_expr(c.expr, inst_)));
  }

  void emit(const Regular& c, int d) {
    open(d, "regular");
    leaf(d + 1, "list", vars(c.scope));
    leaf(d + 1, "transitions", transitions(c.automaton.transitions));
    leaf(d + 1, "start", c.automaton.start);
    std::string finals;
    for (const auto& f : c.automaton.finals) finals += (finals.empty() ? "" : " ") + f;
    leaf(d + 1, "final", finals);
    close(d, "regular");
  }

  void emit(const Mdd& c, int d) {
    open(d, "mdd");
    leaf(d + 1, "list", vars(c.scope));
    leaf(d + 1, "transitions", transitions(c.transitions));
    close(d, "mdd");
  }

  void emit(const AllDifferent& c, int d) {
    if (c.except.empty()) {
      leaf(d, "allDifferent", exprs(c.list));
      return;
    }
    open(d, "allDifferent");
    leaf(d + 1, "list", exprs(c.list));
    leaf(d + 1, "except", values(c.except));
    close(d, "allDifferent");
  }

  void emit(const AllEqual& c, int d) { leaf(d, "allEqual", vars(c.list)); }

  void emit(const Ordered& c, int d) {
    open(d, "ordered");
    leaf(d + 1, "list", vars(c.list));
    if (!c.lengths.empty()) leaf(d + 1, "lengths", values(c.lengths));
    leaf(d + 1, "operator", cmp_name(c.op));
    close(d, "ordered");
  }

  void emit(const Lex& c, int d) {
    open(d, "lex");
    if (c.matrix) {
      std::string m;
      for (const auto& row : c.lists) {
        m += '(';
        for (std::size_t i = 0; i < row.size(); ++i) m += (i ? "," : "") + name(row[i]);
        m += ')';
      }
      leaf(d + 1, "matrix", m);
    } else {
      for (const auto& l : c.lists) leaf(d + 1, "list", vars(l));
    }
    leaf(d + 1, "operator", cmp_name(c.op));
    close(d, "lex");
  }

  void emit(const Sum& c, int d) {
    open(d, "sum");
    leaf(d + 1, "list", exprs(c.terms));
    if (!c.coeffs.empty()) leaf(d + 1, "coeffs", values(c.coeffs));
    leaf(d + 1, "condition", condition(c.condition));
    close(d, "sum");
  }

  void emit(const Count& c, int d) {
    open(d, "count");
    leaf(d + 1, "list", vars(c.list));
    leaf(d + 1, "values", values(c.values));
    leaf(d + 1, "condition", condition(c.condition));
    close(d, "count");
  }

  void emit(const NValues& c, int d) {
    open(d, "nValues");
    leaf(d + 1, "list", vars(c.list));
    leaf(d + 1, "condition", condition(c.condition));
    close(d, "nValues");
  }

  void emit(const Cardinality& c, int d) {
    open(d, "cardinality");
    leaf(d + 1, "list", vars(c.list));
    leaf(d + 1, "values", values(c.values), c.closed ? " closed=\"true\"" : "");
    std::string occ;
    for (const auto& o : c.occurs) {
      if (!occ.empty()) occ += ' ';
      if (const auto* k = std::get_if<Value>(&o)) {
        occ += std::to_string(*k);
      } else if (const auto* r = std::get_if<VarRef>(&o)) {
        occ += name(r->id);
      } else {
        const auto& iv = std::get<Interval>(o);
        occ += std::to_string(iv.lo) + ".." + std::to_string(iv.hi);
      }
    }
    leaf(d + 1, "occurs", occ);
    close(d, "cardinality");
  }

  void emit(const Extremum& c, int d) {
    const char* tag = c.is_max ? "maximum" : "minimum";
    open(d, tag);
    leaf(d + 1, "list", vars(c.list));
    leaf(d + 1, "condition", condition(c.condition));
    close(d, tag);
  }

  void emit(const Element& c, int d) {
    open(d, "element");
    if (c.cols > 0) {
      std::string m;
      for (std::size_t r = 0; r < c.list.size() / c.cols; ++r) {
        m += '(';
        for (std::size_t k = 0; k < c.cols; ++k) {
          if (k > 0) m += ',';
          m += write_expr(c.list[r * c.cols + k], inst_);
        }
        m += ')';
      }
      leaf(d + 1, "matrix", m);
      leaf(d + 1, "index", name(c.index) + " " + name(*c.col_index));
    } else {
      std::string attrs;
      if (c.start_index != 0) attrs = " startIndex=\"" + std::to_string(c.start_index) + "\"";
      leaf(d + 1, "list", exprs(c.list), attrs);
      leaf(d + 1, "index", name(c.index));
    }
    leaf(d + 1, "value", write_expr(c.value, inst_));
    close(d, "element");
  }

  void emit(const Channel& c, int d) {
    if (c.list2.empty()) {
      leaf(d, "channel", vars(c.list1));
      return;
    }
    open(d, "channel");
    leaf(d + 1, "list", vars(c.list1));
    leaf(d + 1, "list", vars(c.list2));
    close(d, "channel");
  }

  void emit(const NoOverlap& c, int d) {
    open(d, "noOverlap", c.zero_ignored ? "" : " zeroIgnored=\"false\"");
    const bool multi = !c.origins.empty() && c.origins.front().size() > 1;
    std::string o, l;
    for (std::size_t i = 0; i < c.origins.size(); ++i) {
      if (multi) {
        o += '(';
        l += '(';
        for (std::size_t k = 0; k < c.origins[i].size(); ++k) {
          o += (k ? "," : "") + name(c.origins[i][k]);
          l += (k ? "," : "") + write_expr(c.lengths[i][k], inst_);
        }
        o += ')';
        l += ')';
      } else {
        o += (i ? " " : "") + name(c.origins[i][0]);
        l += (i ? " " : "") + write_expr(c.lengths[i][0], inst_);
      }
    }
    leaf(d + 1, "origins", o);
    leaf(d + 1, "lengths", l);
    close(d, "noOverlap");
  }

  void emit(const Cumulative& c, int d) {
    open(d, "cumulative");
    leaf(d + 1, "origins", vars(c.origins));
    leaf(d + 1, "lengths", exprs(c.lengths));
    leaf(d + 1, "heights", exprs(c.heights));
    leaf(d + 1, "condition", condition(c.condition));
    close(d, "cumulative");
  }

  void emit(const Circuit& c, int d) { leaf(d, "circuit", vars(c.list)); }

  void emit(const Instantiate& c, int d) {
    open(d, "instantiation");
    leaf(d + 1, "list", vars(c.list));
    leaf(d + 1, "values", values(c.values));
    close(d, "instantiation");
  }

  void emit(const Slide& c, int d) {
    open(d, "slide", c.circular ? " circular=\"true\"" : "");
    leaf(d + 1, "list", vars(c.list),
         c.offset != 1 ? " offset=\"" + std::to_string(c.offset) + "\"" : "");
    if (c.condition) {
      leaf(d + 1, "intension", xml::escape(write_expr(*c.condition, inst_)));
    } else {
      open(d + 1, "extension");
      std::string params;
      for (int i = 0; i < c.arity; ++i) params += (i ? " %" : "%") + std::to_string(i);
      leaf(d + 2, "list", params);
      leaf(d + 2, c.positive ? "supports" : "conflicts",
           tuples(c.tuples, static_cast<std::size_t>(c.arity)));
      close(d + 1, "extension");
    }
    close(d, "slide");
  }

  void write_objective(const Objective& o) {
    line(1, "<objectives>");
    const std::string tag = o.sense == Sense::Minimize ? "minimize" : "maximize";
    if (o.kind == ObjectiveKind::Expression) {
      leaf(2, tag, xml::escape(write_expr(o.terms.front(), inst_)));
    } else {
      const char* type = o.kind == ObjectiveKind::Sum       ? "sum"
                         : o.kind == ObjectiveKind::Maximum ? "maximum"
                         : o.kind == ObjectiveKind::Minimum ? "minimum"
                                                            : "nValues";
      open(2, tag, std::string(" type=\"") + type + "\"");
      leaf(3, "list", exprs(o.terms));
      if (!o.coeffs.empty()) leaf(3, "coeffs", values(o.coeffs));
      close(2, tag);
    }
    line(1, "</objectives>");
  }

  const Instance& inst_;
  std::ostringstream out_;
};

}  // namespace

std::string write_instance(const Instance& inst) { return Writer(inst).run(); }

std::string write_instantiation(const Instantiation& a) {
  std::string list, vals;
  for (std::size_t i = 0; i < a.ids.size(); ++i) {
    if (i > 0) {
      list += ' ';
      vals += ' ';
    }
    list += a.ids[i];
    vals += std::to_string(a.values[i]);
  }
  return "<instantiation> <list> " + list + " </list> <values> " + vals +
         " </values> </instantiation>";
}

}  // namespace xcsp
