#ifndef XCSP_XML_HPP
#define XCSP_XML_HPP

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace xcsp::xml {

/// Minimal DOM node. `text` is the concatenated character data directly
/// inside the element (entities decoded); `line`/`column` locate the `<`.
struct Node {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::string text;
  std::vector<Node> children;
  int line = 1;
  int column = 1;

  const std::string* attribute(std::string_view key) const;
  const Node* child(std::string_view child_name) const;
};

class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(int line, int column, const std::string& message)
      : std::runtime_error(message), line_(line), column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Parses a single-rooted document; prolog, comments and CDATA are
/// supported, DTDs and processing instructions inside the body are skipped.
Node parse(std::string_view text);

/// Escapes &, <, >, and double quotes.
std::string escape(std::string_view raw);

}  // namespace xcsp::xml

#endif  // XCSP_XML_HPP
