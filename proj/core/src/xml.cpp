#include "xcsp/xml.hpp"

#include <cctype>

namespace xcsp::xml {

const std::string* Node::attribute(std::string_view key) const {
  for (const auto& [k, v] : attributes) {
    if (k == key) return &v;
  }
  return nullptr;
}

const Node* Node::child(std::string_view child_name) const {
  for (const auto& c : children) {
    if (c.name == child_name) return &c;
  }
  return nullptr;
}

namespace {

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  Node document() {
    skip_misc();
    if (eof()) error("document has no root element");
    if (peek() != '<') error("text outside the root element");
    Node root = element();
    skip_misc();
    if (!eof()) error("content after the root element");
    return root;
  }

 private:
  [[noreturn]] void error(const std::string& msg) const { throw SyntaxError(line_, col_, msg); }

  bool eof() const { return pos_ >= s_.size(); }
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < s_.size() ? s_[pos_ + ahead] : '\0';
  }
  bool starts_with(std::string_view p) const { return s_.substr(pos_, p.size()) == p; }

  void advance(std::size_t n = 1) {
    for (std::size_t i = 0; i < n && pos_ < s_.size(); ++i) {
      if (s_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
  }

  void skip_ws() {
    while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) advance();
  }

  void skip_until(std::string_view terminator, const char* what) {
    while (!eof() && !starts_with(terminator)) advance();
    if (eof()) error(std::string("unterminated ") + what);
    advance(terminator.size());
  }

  // Whitespace, comments, the XML declaration and doctype around the root.
  void skip_misc() {
    for (;;) {
      skip_ws();
      if (starts_with("<?")) {
        skip_until("?>", "processing instruction");
      } else if (starts_with("<!--")) {
        skip_until("-->", "comment");
      } else if (starts_with("<!DOCTYPE")) {
        skip_until(">", "doctype");
      } else {
        return;
      }
    }
  }

  static bool name_char(char c) {
    auto u = static_cast<unsigned char>(c);
    return std::isalnum(u) || c == '_' || c == '-' || c == '.' || c == ':';
  }

  std::string name() {
    if (!std::isalpha(static_cast<unsigned char>(peek())) && peek() != '_') {
      error("expected a name");
    }
    std::size_t start = pos_;
    while (!eof() && name_char(peek())) advance();
    return std::string(s_.substr(start, pos_ - start));
  }

  void decode_entity(std::string& out) {
    // pos_ at '&'
    std::size_t semi = s_.find(';', pos_);
    if (semi == std::string_view::npos || semi - pos_ > 10) error("malformed entity");
    std::string_view ent = s_.substr(pos_ + 1, semi - pos_ - 1);
    if (ent == "lt") {
      out += '<';
    } else if (ent == "gt") {
      out += '>';
    } else if (ent == "amp") {
      out += '&';
    } else if (ent == "quot") {
      out += '"';
    } else if (ent == "apos") {
      out += '\'';
    } else if (!ent.empty() && ent[0] == '#') {
      long code = 0;
      try {
        code = ent.size() > 1 && ent[1] == 'x' ? std::stol(std::string(ent.substr(2)), nullptr, 16)
                                               : std::stol(std::string(ent.substr(1)));
      } catch (const std::exception&) {
        error("malformed character reference");
      }
      if (code <= 0 || code > 127) error("unsupported character reference");
      out += static_cast<char>(code);
    } else {
      error("unknown entity '&" + std::string(ent) + ";'");
    }
    advance(semi - pos_ + 1);
  }

  Node element() {
    Node node;
    node.line = line_;
    node.column = col_;
    advance();  // '<'
    node.name = name();
    for (;;) {
      skip_ws();
      if (starts_with("/>")) {
        advance(2);
        return node;
      }
      if (peek() == '>') {
        advance();
        break;
      }
      if (eof()) error("unterminated start tag <" + node.name + ">");
      std::string key = name();
      skip_ws();
      if (peek() != '=') error("expected '=' after attribute " + key);
      advance();
      skip_ws();
      char quote = peek();
      if (quote != '"' && quote != '\'') error("attribute value must be quoted");
      advance();
      std::string value;
      while (!eof() && peek() != quote) {
        if (peek() == '<') error("'<' inside attribute value");
        if (peek() == '&') {
          decode_entity(value);
        } else {
          value += peek();
          advance();
        }
      }
      if (eof()) error("unterminated attribute value");
      advance();
      for (const auto& [k, _] : node.attributes) {
        if (k == key) error("duplicate attribute " + key);
      }
      node.attributes.emplace_back(std::move(key), std::move(value));
    }
    // content
    for (;;) {
      if (eof()) error("missing end tag </" + node.name + ">");
      if (starts_with("</")) {
        advance(2);
        std::string closing = name();
        if (closing != node.name) {
          error("mismatched end tag </" + closing + "> for <" + node.name + ">");
        }
        skip_ws();
        if (peek() != '>') error("malformed end tag");
        advance();
        return node;
      }
      if (starts_with("<!--")) {
        skip_until("-->", "comment");
      } else if (starts_with("<![CDATA[")) {
        advance(9);
        std::size_t end = s_.find("]]>", pos_);
        if (end == std::string_view::npos) error("unterminated CDATA section");
        node.text.append(s_.substr(pos_, end - pos_));
        advance(end - pos_ + 3);
      } else if (starts_with("<?")) {
        skip_until("?>", "processing instruction");
      } else if (peek() == '<') {
        node.children.push_back(element());
      } else if (peek() == '&') {
        decode_entity(node.text);
      } else {
        node.text += peek();
        advance();
      }
    }
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace

Node parse(std::string_view text) { return Parser(text).document(); }

std::string escape(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (char c : raw) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace xcsp::xml
