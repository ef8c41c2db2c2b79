#include <algorithm>
#include <cctype>
#include <charconv>
#include <functional>
#include <map>
#include <unordered_map>

#include "xcsp/io.hpp"
#include "xcsp/xml.hpp"

namespace xcsp {

std::string to_string(const ParseDiagnostic& d) {
  return std::to_string(d.line) + ":" + std::to_string(d.column) + ": " +
         (d.severity == Severity::Error ? "error: " : "warning: ") + d.message;
}

namespace {

struct Failure {
  int line;
  int column;
  std::string message;
};

[[noreturn]] void fail_at(const xml::Node& n, const std::string& msg) {
  throw Failure{n.line, n.column, msg};
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    int depth = 0;
    while (j < s.size() && (depth > 0 || !std::isspace(static_cast<unsigned char>(s[j])))) {
      if (s[j] == '(') ++depth;
      if (s[j] == ')') --depth;
      ++j;
    }
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

bool parse_int(std::string_view s, Value& out) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size();
}

bool looks_like_int(std::string_view s) {
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
  return !s.empty() && std::all_of(s.begin(), s.end(),
                                   [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

class Reader {
 public:
  ParseResult run(std::string_view text) {
    ParseResult result;
    try {
      xml::Node root = xml::parse(text);
      read_root(root);
      for (const auto& e : validate_instance(inst_)) {
        std::string where = e.constraint >= 0 ? "constraint #" + std::to_string(e.constraint) + ": "
                                              : std::string();
        auto [line, column] = e.constraint >= 0 && static_cast<std::size_t>(e.constraint) < where_.size()
                                  ? where_[static_cast<std::size_t>(e.constraint)]
                                  : std::pair{root.line, root.column};
        result.diagnostics.push_back({line, column, where + e.reason, Severity::Error});
      }
      if (result.diagnostics.empty()) result.instance = std::move(inst_);
    } catch (const xml::SyntaxError& e) {
      result.diagnostics.push_back({e.line(), e.column(), e.what(), Severity::Error});
    } catch (const Failure& f) {
      result.diagnostics.push_back({f.line, f.column, f.message, Severity::Error});
    } catch (const ModelError& e) {
      result.diagnostics.push_back({1, 1, e.what(), Severity::Error});
    }
    result.diagnostics.insert(result.diagnostics.end(), warnings_.begin(), warnings_.end());
    return result;
  }

 private:
  // ----- document structure --------------------------------------------------

  void read_root(const xml::Node& root) {
    if (root.name != "instance") fail_at(root, "root element must be <instance>, found <" + root.name + ">");
    if (const auto* f = root.attribute("format"); f && *f != "XCSP3") {
      fail_at(root, "unsupported format '" + *f + "'");
    }
    const std::string* type = root.attribute("type");
    if (!type) fail_at(root, "missing instance type");
    if (*type != "CSP" && *type != "COP") fail_at(root, "non-core instance type '" + *type + "'");
    if (const auto* id = root.attribute("id")) inst_.name = *id;
    if (!trim(root.text).empty()) fail_at(root, "unexpected text inside <instance>");
    bool seen_vars = false;
    for (const auto& child : root.children) {
      if (child.name == "variables") {
        if (seen_vars) fail_at(child, "duplicate <variables> section");
        seen_vars = true;
        read_variables(child);
      } else if (child.name == "constraints") {
        if (!seen_vars) fail_at(child, "<constraints> before <variables>");
        for (const auto& c : child.children) read_constraint(c, "");
      } else if (child.name == "objectives") {
        read_objectives(child);
      } else {
        fail_at(child, "unsupported element <" + child.name + ">");
      }
    }
    if (!seen_vars) fail_at(root, "missing <variables> section");
    if (*type == "COP" && !inst_.objective) fail_at(root, "COP instance without objective");
    if (*type == "CSP" && inst_.objective) fail_at(root, "CSP instance with an objective");
  }

  // ----- variables -----------------------------------------------------------

  Domain read_domain(const xml::Node& n, std::string_view text) {
    std::vector<Value> values;
    for (auto tok : split_ws(text)) {
      auto dots = tok.find("..");
      Value lo, hi;
      if (dots != std::string_view::npos) {
        if (!parse_int(tok.substr(0, dots), lo) || !parse_int(tok.substr(dots + 2), hi)) {
          fail_at(n, "malformed domain range '" + std::string(tok) + "'");
        }
        if (lo > hi) fail_at(n, "empty domain range '" + std::string(tok) + "'");
        if (hi - lo > 10'000'000) fail_at(n, "domain range too large");
        for (Value v = lo; v <= hi; ++v) values.push_back(v);
      } else if (parse_int(tok, lo)) {
        values.push_back(lo);
      } else {
        fail_at(n, "malformed domain value '" + std::string(tok) + "'");
      }
    }
    if (values.empty()) fail_at(n, "empty domain");
    return Domain(std::move(values));
  }

  void declare(const xml::Node& n, const std::string& id, Domain dom) {
    if (ids_.count(id)) fail_at(n, "duplicate variable id '" + id + "'");
    if (!is_valid_identifier(id)) fail_at(n, "invalid variable id '" + id + "'");
    ids_.emplace(id, inst_.add_variable(id, std::move(dom)));
  }

  void check_integer_type(const xml::Node& n) {
    if (const auto* t = n.attribute("type"); t && *t != "integer") {
      fail_at(n, "non-core variable type '" + *t + "'");
    }
    if (n.attribute("as")) fail_at(n, "attribute 'as' is not supported");
  }

  void read_variables(const xml::Node& section) {
    for (const auto& n : section.children) {
      const std::string* id = n.attribute("id");
      if (n.name != "var" && n.name != "array") fail_at(n, "unsupported element <" + n.name + ">");
      if (!id) fail_at(n, "<" + n.name + "> without id");
      check_integer_type(n);
      if (n.name == "var") {
        declare(n, *id, read_domain(n, n.text));
        continue;
      }
      const std::string* size = n.attribute("size");
      if (!size) fail_at(n, "array without size");
      std::vector<int> dims;
      std::string_view s = *size;
      while (!s.empty()) {
        if (s.front() != '[') fail_at(n, "malformed array size");
        auto close = s.find(']');
        if (close == std::string_view::npos) fail_at(n, "malformed array size");
        Value d;
        if (!parse_int(s.substr(1, close - 1), d) || d <= 0 || d > 100000) {
          fail_at(n, "malformed array size");
        }
        dims.push_back(static_cast<int>(d));
        s.remove_prefix(close + 1);
      }
      if (dims.empty()) fail_at(n, "malformed array size");
      arrays_[*id] = dims;
      std::vector<std::string> cells = cells_of(*id, dims);
      if (n.children.empty()) {
        Domain dom = read_domain(n, n.text);
        for (const auto& c : cells) declare(n, c, dom);
        continue;
      }
      std::map<std::string, Domain> assigned;
      std::optional<Domain> others;
      for (const auto& d : n.children) {
        if (d.name != "domain") fail_at(d, "unsupported element <" + d.name + "> in array");
        const std::string* f = d.attribute("for");
        if (!f) fail_at(d, "<domain> without 'for'");
        Domain dom = read_domain(d, d.text);
        if (*f == "others") {
          others = dom;
          continue;
        }
        for (auto tok : split_ws(*f)) {
          for (const auto& c : expand_ref(d, tok, true)) assigned.insert_or_assign(c, dom);
        }
      }
      for (const auto& c : cells) {
        auto it = assigned.find(c);
        if (it != assigned.end()) {
          declare(n, c, it->second);
        } else if (others) {
          declare(n, c, *others);
        }
      }
    }
  }

  static std::vector<std::string> cells_of(const std::string& name, const std::vector<int>& dims) {
    std::vector<std::string> out{name};
    for (int d : dims) {
      std::vector<std::string> next;
      for (const auto& p : out) {
        for (int i = 0; i < d; ++i) next.push_back(p + "[" + std::to_string(i) + "]");
      }
      out = std::move(next);
    }
    return out;
  }

  // Expands compact array references (x[], x[1..2][], x[0][3]) into cell
  // names. Only cells that are declared are kept unless `raw` is set.
  std::vector<std::string> expand_ref(const xml::Node& n, std::string_view tok, bool raw = false) {
    auto bracket = tok.find('[');
    if (bracket == std::string_view::npos) return {std::string(tok)};
    std::string name(tok.substr(0, bracket));
    std::vector<std::pair<int, int>> ranges;
    bool compact = false;
    std::string_view rest = tok.substr(bracket);
    while (!rest.empty()) {
      if (rest.front() != '[') fail_at(n, "malformed reference '" + std::string(tok) + "'");
      auto close = rest.find(']');
      if (close == std::string_view::npos) fail_at(n, "malformed reference '" + std::string(tok) + "'");
      std::string_view inner = rest.substr(1, close - 1);
      Value lo, hi;
      if (inner.empty()) {
        ranges.emplace_back(-1, -1);
        compact = true;
      } else if (auto dots = inner.find(".."); dots != std::string_view::npos) {
        if (!parse_int(inner.substr(0, dots), lo) || !parse_int(inner.substr(dots + 2), hi)) {
          fail_at(n, "malformed reference '" + std::string(tok) + "'");
        }
        ranges.emplace_back(static_cast<int>(lo), static_cast<int>(hi));
        compact = true;
      } else {
        if (!parse_int(inner, lo)) fail_at(n, "malformed reference '" + std::string(tok) + "'");
        ranges.emplace_back(static_cast<int>(lo), static_cast<int>(lo));
      }
      rest.remove_prefix(close + 1);
    }
    if (!compact) return {std::string(tok)};
    auto arr = arrays_.find(name);
    if (arr == arrays_.end()) fail_at(n, "unknown array '" + name + "'");
    if (arr->second.size() != ranges.size()) fail_at(n, "wrong number of indexes in '" + std::string(tok) + "'");
    std::vector<std::string> out{name};
    for (std::size_t k = 0; k < ranges.size(); ++k) {
      auto [lo, hi] = ranges[k];
      if (lo < 0) {
        lo = 0;
        hi = arr->second[k] - 1;
      }
      std::vector<std::string> next;
      for (const auto& p : out) {
        for (int i = lo; i <= hi; ++i) next.push_back(p + "[" + std::to_string(i) + "]");
      }
      out = std::move(next);
    }
    if (!raw) std::erase_if(out, [&](const std::string& c) { return !ids_.count(c); });
    return out;
  }

  VarId lookup(const xml::Node& n, std::string_view id) {
    auto it = ids_.find(std::string(id));
    if (it == ids_.end()) fail_at(n, "unknown identifier '" + std::string(id) + "'");
    return it->second;
  }

  // ----- expressions -----------------------------------------------------------

  class ExprParser {
   public:
    ExprParser(Reader& r, const xml::Node& n, std::string_view s, bool params)
        : r_(r), n_(n), s_(s), params_(params) {}

    Expr parse() {
      Expr e = term();
      skip();
      if (pos_ != s_.size()) fail("trailing characters");
      return e;
    }

   private:
    [[noreturn]] void fail(const std::string& msg) {
      fail_at(n_, "in expression '" + std::string(s_) + "': " + msg);
    }
    void skip() {
      while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool accept(char c) {
      skip();
      if (pos_ < s_.size() && s_[pos_] == c) {
        ++pos_;
        return true;
      }
      return false;
    }
    std::string_view word() {
      skip();
      std::size_t start = pos_;
      while (pos_ < s_.size()) {
        char c = s_[pos_];
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '[' || c == ']' ||
            c == '-' || c == '+' || c == '%') {
          ++pos_;
        } else {
          break;
        }
      }
      if (pos_ == start) fail("expected an operand");
      return s_.substr(start, pos_ - start);
    }

    Expr term() {
      std::string_view w = word();
      if (looks_like_int(w)) {
        Value v;
        if (!parse_int(w, v)) fail("integer out of range '" + std::string(w) + "'");
        return Expr::constant(v);
      }
      if (w.front() == '%') {
        Value k;
        if (!params_ || !parse_int(w.substr(1), k) || k < 0) fail("unexpected parameter '" + std::string(w) + "'");
        return Expr::param(static_cast<int>(k));
      }
      if (!accept('(')) return Expr::var(r_.lookup(n_, w));
      Op op;
      if (!op_from_name(w, op)) fail("unknown operator '" + std::string(w) + "'");
      std::vector<Expr> args;
      std::vector<Value> set;
      bool has_set = false;
      if (!accept(')')) {
        do {
          skip();
          if (op == Op::In && s_.substr(pos_, 4) == "set(") {
            pos_ += 4;
            has_set = true;
            if (!accept(')')) {
              do {
                std::string_view v = word();
                Value x;
                if (!parse_int(v, x)) fail("set element must be an integer");
                set.push_back(x);
              } while (accept(','));
              if (!accept(')')) fail("expected ')' after set");
            }
          } else {
            args.push_back(term());
          }
        } while (accept(','));
        if (!accept(')')) fail("expected ')'");
      }
      if (op == Op::In) {
        if (!has_set || args.size() != 1) fail("in expects an expression and a set");
        return Expr::in_set(std::move(args.front()), std::move(set));
      }
      auto [lo, hi] = arity_bounds(op);
      const int k = static_cast<int>(args.size());
      if (k < lo || (hi >= 0 && k > hi)) fail(std::string("wrong arity for ") + op_name(op));
      return Expr::make(op, std::move(args));
    }

    Reader& r_;
    const xml::Node& n_;
    std::string_view s_;
    bool params_;
    std::size_t pos_ = 0;
  };

  Expr parse_expr(const xml::Node& n, std::string_view s, bool params = false) {
    return ExprParser(*this, n, trim(s), params).parse();
  }

  // Whitespace separated list whose items are variables (compact forms
  // allowed), integers or expressions.
  std::vector<Expr> terms(const xml::Node& n, std::string_view s) {
    std::vector<Expr> out;
    for (auto tok : split_ws(s)) {
      if (tok.find('(') != std::string_view::npos || looks_like_int(tok)) {
        out.push_back(parse_expr(n, tok));
      } else {
        for (const auto& c : expand_ref(n, tok)) out.push_back(Expr::var(lookup(n, c)));
      }
    }
    return out;
  }

  std::vector<VarId> var_list(const xml::Node& n, std::string_view s) {
    std::vector<VarId> out;
    for (auto tok : split_ws(s)) {
      if (looks_like_int(tok) || tok.find('(') != std::string_view::npos) {
        fail_at(n, "expected a variable, found '" + std::string(tok) + "'");
      }
      for (const auto& c : expand_ref(n, tok)) out.push_back(lookup(n, c));
    }
    return out;
  }

  std::vector<Value> int_list(const xml::Node& n, std::string_view s, bool ranges = false) {
    std::vector<Value> out;
    for (auto tok : split_ws(s)) {
      Value v, hi;
      auto dots = tok.find("..");
      if (ranges && dots != std::string_view::npos) {
        if (!parse_int(tok.substr(0, dots), v) || !parse_int(tok.substr(dots + 2), hi) || v > hi) {
          fail_at(n, "malformed range '" + std::string(tok) + "'");
        }
        for (Value x = v; x <= hi; ++x) out.push_back(x);
      } else if (parse_int(tok, v)) {
        out.push_back(v);
      } else {
        fail_at(n, "expected an integer, found '" + std::string(tok) + "'");
      }
    }
    return out;
  }

  // "(a,b)(c,d)" -> rows of raw strings
  std::vector<std::vector<std::string_view>> groups(const xml::Node& n, std::string_view s) {
    std::vector<std::vector<std::string_view>> out;
    s = trim(s);
    std::size_t i = 0;
    while (i < s.size()) {
      if (std::isspace(static_cast<unsigned char>(s[i]))) {
        ++i;
        continue;
      }
      if (s[i] != '(') fail_at(n, "expected '(' in tuple list");
      auto close = s.find(')', i);
      if (close == std::string_view::npos) fail_at(n, "unterminated tuple");
      std::vector<std::string_view> row;
      std::string_view inner = s.substr(i + 1, close - i - 1);
      std::size_t start = 0;
      for (;;) {
        auto comma = inner.find(',', start);
        row.push_back(trim(inner.substr(start, comma == std::string_view::npos ? comma : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
      }
      out.push_back(std::move(row));
      i = close + 1;
    }
    return out;
  }

  Value tuple_value(const xml::Node& n, std::string_view tok) {
    if (tok == "*") return kStar;
    Value v;
    if (!parse_int(tok, v)) fail_at(n, "malformed tuple value '" + std::string(tok) + "'");
    return v;
  }

  std::vector<Tuple> tuples(const xml::Node& n, std::string_view s, std::size_t arity) {
    std::vector<Tuple> out;
    if (trim(s).empty()) return out;
    if (trim(s).front() != '(') {
      if (arity != 1) fail_at(n, "tuples must be parenthesized for arity " + std::to_string(arity));
      for (auto tok : split_ws(s)) {
        auto dots = tok.find("..");
        if (dots != std::string_view::npos) {
          for (Value v : int_list(n, tok, true)) out.push_back({v});
        } else {
          out.push_back({tuple_value(n, tok)});
        }
      }
      return out;
    }
    for (const auto& g : groups(n, s)) {
      Tuple t;
      for (auto tok : g) t.push_back(tuple_value(n, tok));
      out.push_back(std::move(t));
    }
    return out;
  }

  Condition condition(const xml::Node& n, std::string_view s) {
    s = trim(s);
    if (s.size() < 2 || s.front() != '(' || s.back() != ')') fail_at(n, "malformed condition");
    s = s.substr(1, s.size() - 2);
    auto comma = s.find(',');
    if (comma == std::string_view::npos) fail_at(n, "malformed condition");
    Condition c;
    if (!cmp_from_name(trim(s.substr(0, comma)), c.op)) fail_at(n, "unknown condition operator");
    std::string_view rhs = trim(s.substr(comma + 1));
    Value lo, hi;
    if (auto dots = rhs.find(".."); dots != std::string_view::npos) {
      if (!parse_int(rhs.substr(0, dots), lo) || !parse_int(rhs.substr(dots + 2), hi)) {
        fail_at(n, "malformed condition interval");
      }
      c.rhs = Interval{lo, hi};
    } else if (!rhs.empty() && rhs.front() == '{') {
      if (rhs.back() != '}') fail_at(n, "malformed condition set");
      std::string inner(rhs.substr(1, rhs.size() - 2));
      std::replace(inner.begin(), inner.end(), ',', ' ');
      c.rhs = int_list(n, inner);
    } else if (parse_int(rhs, lo)) {
      c.rhs = lo;
    } else {
      c.rhs = VarRef{lookup(n, rhs)};
    }
    return c;
  }

  CmpOp operator_of(const xml::Node& n) {
    const xml::Node* o = n.child("operator");
    if (!o) fail_at(n, "missing <operator>");
    CmpOp op;
    if (!cmp_from_name(trim(o->text), op)) fail_at(*o, "unknown operator '" + std::string(trim(o->text)) + "'");
    return op;
  }

  const xml::Node& need(const xml::Node& n, std::string_view child) {
    const xml::Node* c = n.child(child);
    if (!c) fail_at(n, "<" + n.name + "> requires <" + std::string(child) + ">");
    return *c;
  }

  std::vector<Transition> transitions(const xml::Node& n) {
    std::vector<Transition> out;
    for (const auto& g : groups(n, n.text)) {
      if (g.size() != 3) fail_at(n, "transition must have three components");
      Value v;
      if (!parse_int(g[1], v)) fail_at(n, "malformed transition symbol '" + std::string(g[1]) + "'");
      out.push_back({std::string(g[0]), v, std::string(g[2])});
    }
    return out;
  }

  std::vector<std::vector<Expr>> matrix(const xml::Node& n) {
    std::vector<std::vector<Expr>> rows;
    for (const auto& g : groups(n, n.text)) {
      std::vector<Expr> row;
      for (auto tok : g) row.push_back(parse_expr(n, tok));
      if (!rows.empty() && row.size() != rows.front().size()) fail_at(n, "matrix rows differ in length");
      rows.push_back(std::move(row));
    }
    if (rows.empty()) fail_at(n, "empty matrix");
    return rows;
  }

  std::vector<VarId> vars_of(const xml::Node& n, const std::vector<Expr>& es) {
    std::vector<VarId> out;
    for (const auto& e : es) {
      if (!e.is_var()) fail_at(n, "expected variables only");
      out.push_back(e.var_id());
    }
    return out;
  }

  // Text of the simple form or of the <list> child.
  std::string_view list_text(const xml::Node& n) {
    if (const auto* l = n.child("list")) return l->text;
    return n.text;
  }

  // ----- constraints -----------------------------------------------------------

  void post(ConstraintKind k, const std::string& tag) {
    inst_.post(std::move(k), tag);
    where_.push_back(at_);
  }

  void read_constraint(const xml::Node& n, const std::string& tag) {
    const std::string& k = n.name;
    // reification and the like are outside the core
    for (const auto& [key, value] : n.attributes) {
      const bool known = key == "id" || key == "class" || key == "note" ||
                         (key == "zeroIgnored" && k == "noOverlap") || (key == "circular" && k == "slide");
      if (!known) fail_at(n, "attribute '" + key + "' is not supported");
    }
    at_ = {n.line, n.column};
    if (k == "block") {
      std::string inner = tag;
      if (const auto* cls = n.attribute("class")) inner = *cls;
      for (const auto& c : n.children) read_constraint(c, inner);
    } else if (k == "group") {
      read_group(n, tag);
    } else if (k == "extension") {
      const auto& l = need(n, "list");
      Extension e;
      e.scope = var_list(l, l.text);
      const xml::Node* sup = n.child("supports");
      const xml::Node* con = n.child("conflicts");
      if (!sup && !con) fail_at(n, "<extension> requires <supports> or <conflicts>");
      if (sup && con) fail_at(n, "<extension> with both supports and conflicts");
      e.positive = sup != nullptr;
      const xml::Node& t = sup ? *sup : *con;
      e.tuples = tuples(t, t.text, e.scope.size());
      post(std::move(e), tag);
    } else if (k == "intension") {
      const xml::Node* f = n.child("function");
      post(Intension{parse_expr(n, f ? f->text : n.text)}, tag);
    } else if (k == "regular") {
      Regular r;
      r.scope = var_list(n, need(n, "list").text);
      r.automaton.transitions = transitions(need(n, "transitions"));
      r.automaton.start = std::string(trim(need(n, "start").text));
      for (auto tok : split_ws(need(n, "final").text)) r.automaton.finals.emplace_back(tok);
      post(std::move(r), tag);
    } else if (k == "mdd") {
      Mdd m;
      m.scope = var_list(n, need(n, "list").text);
      m.transitions = transitions(need(n, "transitions"));
      post(std::move(m), tag);
    } else if (k == "allDifferent") {
      if (const auto* mx = n.child("matrix")) {
        auto rows = matrix(*mx);
        for (const auto& row : rows) post(AllDifferent{row, {}}, tag);
        for (std::size_t j = 0; j < rows.front().size(); ++j) {
          std::vector<Expr> col;
          for (const auto& row : rows) col.push_back(row[j]);
          post(AllDifferent{col, {}}, tag);
        }
        return;
      }
      AllDifferent a;
      a.list = terms(n, list_text(n));
      if (const auto* ex = n.child("except")) a.except = int_list(*ex, ex->text);
      post(std::move(a), tag);
    } else if (k == "allEqual") {
      post(AllEqual{var_list(n, list_text(n))}, tag);
    } else if (k == "ordered") {
      Ordered o;
      o.list = var_list(n, need(n, "list").text);
      if (const auto* l = n.child("lengths")) o.lengths = int_list(*l, l->text);
      o.op = operator_of(n);
      post(std::move(o), tag);
    } else if (k == "lex") {
      Lex l;
      if (const auto* mx = n.child("matrix")) {
        l.matrix = true;
        for (const auto& row : matrix(*mx)) l.lists.push_back(vars_of(*mx, row));
      } else {
        for (const auto& c : n.children) {
          if (c.name == "list") l.lists.push_back(var_list(c, c.text));
        }
      }
      l.op = operator_of(n);
      post(std::move(l), tag);
    } else if (k == "sum") {
      Sum s;
      s.terms = terms(n, need(n, "list").text);
      if (const auto* c = n.child("coeffs")) s.coeffs = int_list(*c, c->text);
      s.condition = condition(n, need(n, "condition").text);
      post(std::move(s), tag);
    } else if (k == "count") {
      Count c;
      c.list = var_list(n, need(n, "list").text);
      c.values = int_list(n, need(n, "values").text);
      c.condition = condition(n, need(n, "condition").text);
      post(std::move(c), tag);
    } else if (k == "nValues") {
      if (n.child("except")) fail_at(n, "nValues with except is not supported");
      NValues v;
      v.list = var_list(n, need(n, "list").text);
      v.condition = condition(n, need(n, "condition").text);
      post(std::move(v), tag);
    } else if (k == "cardinality") {
      Cardinality c;
      c.list = var_list(n, need(n, "list").text);
      const auto& vals = need(n, "values");
      c.values = int_list(vals, vals.text);
      if (const auto* cl = vals.attribute("closed")) c.closed = *cl == "true";
      const auto& occ = need(n, "occurs");
      for (auto tok : split_ws(occ.text)) {
        Value lo, hi;
        if (auto dots = tok.find(".."); dots != std::string_view::npos) {
          if (!parse_int(tok.substr(0, dots), lo) || !parse_int(tok.substr(dots + 2), hi)) {
            fail_at(occ, "malformed occurrence interval");
          }
          c.occurs.emplace_back(Interval{lo, hi});
        } else if (parse_int(tok, lo)) {
          c.occurs.emplace_back(lo);
        } else {
          c.occurs.emplace_back(VarRef{lookup(occ, tok)});
        }
      }
      post(std::move(c), tag);
    } else if (k == "maximum" || k == "minimum") {
      Extremum m;
      m.is_max = k == "maximum";
      m.list = var_list(n, need(n, "list").text);
      m.condition = condition(n, need(n, "condition").text);
      post(std::move(m), tag);
    } else if (k == "element") {
      read_element(n, tag);
    } else if (k == "channel") {
      Channel c;
      std::vector<const xml::Node*> lists;
      for (const auto& ch : n.children) {
        if (ch.name == "list") lists.push_back(&ch);
      }
      if (lists.empty()) {
        c.list1 = var_list(n, n.text);
      } else {
        if (lists.size() > 2) fail_at(n, "channel with more than two lists");
        c.list1 = var_list(*lists[0], lists[0]->text);
        if (lists.size() == 2) c.list2 = var_list(*lists[1], lists[1]->text);
      }
      post(std::move(c), tag);
    } else if (k == "noOverlap") {
      read_nooverlap(n, tag);
    } else if (k == "cumulative") {
      Cumulative c;
      c.origins = var_list(n, need(n, "origins").text);
      c.lengths = terms(n, need(n, "lengths").text);
      c.heights = terms(n, need(n, "heights").text);
      c.condition = condition(n, need(n, "condition").text);
      post(std::move(c), tag);
    } else if (k == "circuit") {
      if (n.child("size")) fail_at(n, "circuit with size is not supported");
      const xml::Node* l = n.child("list");
      if (l) {
        if (const auto* s = l->attribute("startIndex"); s && *s != "0") fail_at(*l, "circuit startIndex must be 0");
      }
      post(Circuit{var_list(n, list_text(n))}, tag);
    } else if (k == "instantiation") {
      Instantiate i;
      i.list = var_list(n, need(n, "list").text);
      i.values = int_list(n, need(n, "values").text);
      post(std::move(i), tag);
    } else if (k == "slide") {
      read_slide(n, tag);
    } else {
      fail_at(n, "unknown constraint element <" + k + ">");
    }
  }

  void read_element(const xml::Node& n, const std::string& tag) {
    Element e;
    const auto& idx = need(n, "index");
    if (const auto* mx = n.child("matrix")) {
      auto rows = matrix(*mx);
      e.cols = rows.front().size();
      for (auto& row : rows) {
        for (auto& x : row) e.list.push_back(std::move(x));
      }
      auto ids = var_list(idx, idx.text);
      if (ids.size() != 2) fail_at(idx, "matrix element requires two index variables");
      e.index = ids[0];
      e.col_index = ids[1];
    } else {
      const auto& l = need(n, "list");
      e.list = terms(l, l.text);
      if (const auto* si = l.attribute("startIndex")) {
        if (!parse_int(*si, e.start_index)) fail_at(l, "malformed startIndex");
      }
      auto ids = var_list(idx, idx.text);
      if (ids.size() != 1) fail_at(idx, "element requires one index variable");
      e.index = ids[0];
    }
    const auto& v = need(n, "value");
    e.value = parse_expr(v, v.text);
    post(std::move(e), tag);
  }

  void read_nooverlap(const xml::Node& n, const std::string& tag) {
    NoOverlap c;
    if (const auto* z = n.attribute("zeroIgnored")) c.zero_ignored = *z != "false";
    const auto& o = need(n, "origins");
    const auto& l = need(n, "lengths");
    if (trim(o.text).starts_with("(")) {
      for (const auto& g : groups(o, o.text)) {
        std::vector<VarId> box;
        for (auto tok : g) box.push_back(lookup(o, tok));
        c.origins.push_back(std::move(box));
      }
      for (const auto& g : groups(l, l.text)) {
        std::vector<Expr> box;
        for (auto tok : g) box.push_back(parse_expr(l, tok));
        c.lengths.push_back(std::move(box));
      }
    } else {
      for (VarId v : var_list(o, o.text)) c.origins.push_back({v});
      for (auto& e : terms(l, l.text)) c.lengths.push_back({std::move(e)});
    }
    post(std::move(c), tag);
  }

  void read_slide(const xml::Node& n, const std::string& tag) {
    Slide s;
    if (const auto* c = n.attribute("circular")) s.circular = *c == "true";
    const auto& l = need(n, "list");
    s.list = var_list(l, l.text);
    if (const auto* off = l.attribute("offset")) {
      Value v;
      if (!parse_int(*off, v) || v < 1) fail_at(l, "malformed offset");
      s.offset = static_cast<int>(v);
    }
    if (const auto* in = n.child("intension")) {
      const xml::Node* f = in->child("function");
      s.condition = parse_expr(*in, f ? f->text : in->text, true);
      s.arity = param_count(*s.condition);
    } else if (const auto* ext = n.child("extension")) {
      const auto& el = need(*ext, "list");
      auto params = split_ws(el.text);
      s.arity = static_cast<int>(params.size());
      for (std::size_t i = 0; i < params.size(); ++i) {
        if (params[i] != "%" + std::to_string(i)) fail_at(el, "slide extension list must be %0 %1 ...");
      }
      const xml::Node* sup = ext->child("supports");
      const xml::Node* con = ext->child("conflicts");
      if (!sup && !con) fail_at(*ext, "<extension> requires <supports> or <conflicts>");
      s.positive = sup != nullptr;
      const xml::Node& t = sup ? *sup : *con;
      s.tuples = tuples(t, t.text, params.size());
    } else {
      fail_at(n, "slide template must be intension or extension");
    }
    post(std::move(s), tag);
  }

  static void substitute(xml::Node& node, const std::vector<std::string>& args) {
    auto replace = [&](std::string& text) {
      std::string out;
      for (std::size_t i = 0; i < text.size();) {
        if (text[i] == '%' && i + 3 < text.size() + 1 && text.compare(i, 4, "%...") == 0) {
          for (std::size_t k = 0; k < args.size(); ++k) out += (k ? " " : "") + args[k];
          i += 4;
        } else if (text[i] == '%' && i + 1 < text.size() &&
                   std::isdigit(static_cast<unsigned char>(text[i + 1]))) {
          std::size_t j = i + 1;
          while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
          std::size_t k = std::stoul(text.substr(i + 1, j - i - 1));
          out += k < args.size() ? args[k] : text.substr(i, j - i);
          i = j;
        } else {
          out += text[i++];
        }
      }
      text = std::move(out);
    };
    replace(node.text);
    for (auto& c : node.children) substitute(c, args);
  }

  void read_group(const xml::Node& n, const std::string& tag) {
    if (n.children.empty()) fail_at(n, "empty group");
    const xml::Node& templ = n.children.front();
    bool any = false;
    for (std::size_t i = 1; i < n.children.size(); ++i) {
      const auto& a = n.children[i];
      if (a.name != "args") fail_at(a, "unexpected <" + a.name + "> in group");
      std::vector<std::string> args;
      for (auto tok : split_ws(a.text)) {
        if (looks_like_int(tok) || tok.find('(') != std::string_view::npos) {
          args.emplace_back(tok);
        } else {
          for (auto& c : expand_ref(a, tok)) args.push_back(std::move(c));
        }
      }
      xml::Node copy = templ;
      substitute(copy, args);
      read_constraint(copy, tag);
      any = true;
    }
    if (!any) fail_at(n, "group without <args>");
  }

  // ----- objectives --------------------------------------------------------------

  void read_objectives(const xml::Node& section) {
    for (const auto& n : section.children) {
      if (n.name != "minimize" && n.name != "maximize") fail_at(n, "unsupported element <" + n.name + ">");
      if (inst_.objective) fail_at(n, "multiple objectives are not supported");
      Objective o;
      o.sense = n.name == "minimize" ? Sense::Minimize : Sense::Maximize;
      const std::string* type = n.attribute("type");
      if (!type || *type == "expression") {
        o.kind = ObjectiveKind::Expression;
        o.terms.push_back(parse_expr(n, n.text));
      } else {
        if (*type == "sum") {
          o.kind = ObjectiveKind::Sum;
        } else if (*type == "maximum") {
          o.kind = ObjectiveKind::Maximum;
        } else if (*type == "minimum") {
          o.kind = ObjectiveKind::Minimum;
        } else if (*type == "nValues") {
          o.kind = ObjectiveKind::NValues;
        } else {
          fail_at(n, "unsupported objective type '" + *type + "'");
        }
        o.terms = terms(n, list_text(n));
        if (const auto* c = n.child("coeffs")) o.coeffs = int_list(*c, c->text);
      }
      inst_.objective = std::move(o);
    }
  }

  Instance inst_;
  // source location of each posted constraint
  std::vector<std::pair<int, int>> where_;
  std::pair<int, int> at_{1, 1};
  std::unordered_map<std::string, VarId> ids_;
  std::unordered_map<std::string, std::vector<int>> arrays_;
  std::vector<ParseDiagnostic> warnings_;
};

}  // namespace

ParseResult parse_instance(std::string_view xml_text) { return Reader().run(xml_text); }

Instantiation parse_instantiation(std::string_view xml_text) {
  xml::Node root;
  try {
    root = xml::parse(xml_text);
  } catch (const xml::SyntaxError& e) {
    throw ModelError(std::string("malformed instantiation: ") + e.what());
  }
  if (root.name != "instantiation") throw ModelError("expected <instantiation>");
  const xml::Node* l = root.child("list");
  const xml::Node* v = root.child("values");
  if (!l || !v) throw ModelError("instantiation requires <list> and <values>");
  Instantiation out;
  for (auto tok : split_ws(l->text)) out.ids.emplace_back(tok);
  for (auto tok : split_ws(v->text)) {
    if (tok == "*") throw ModelError("partial instantiation ('*') is not accepted");
    Value x;
    if (!parse_int(tok, x)) throw ModelError("malformed value '" + std::string(tok) + "'");
    out.values.push_back(x);
  }
  if (out.ids.size() != out.values.size()) {
    throw ModelError("instantiation has " + std::to_string(out.ids.size()) + " variables but " +
                     std::to_string(out.values.size()) + " values");
  }
  return out;
}

}  // namespace xcsp
