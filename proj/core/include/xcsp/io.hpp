#ifndef XCSP_IO_HPP
#define XCSP_IO_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xcsp/model.hpp"

namespace xcsp {

enum class Severity { Error, Warning };

struct ParseDiagnostic {
  int line = 1;
  int column = 1;
  std::string message;
  Severity severity = Severity::Error;
};

std::string to_string(const ParseDiagnostic& d);

/// Either a validated instance or the diagnostics that prevented it.
struct ParseResult {
  std::optional<Instance> instance;
  std::vector<ParseDiagnostic> diagnostics;

  bool ok() const { return instance.has_value(); }
};

/// Reads the XCSP3-core subset. Arrays are flattened into scalar variables
/// named `x[i][j]`, groups and blocks are expanded inline (block classes
/// become constraint tags). Non-core elements are rejected by name.
ParseResult parse_instance(std::string_view xml_text);

/// Canonical document: 2-space indentation, attributes in a fixed order,
/// contiguous domain runs of three or more values written as `a..b`.
std::string write_instance(const Instance& inst);

/// Text form of an expression in XCSP3 functional syntax.
std::string write_expr(const Expr& e, const Instance& inst);

/// Parses an `<instantiation>` element. Throws ModelError on a length
/// mismatch, a wildcard value or malformed text.
Instantiation parse_instantiation(std::string_view xml_text);

/// Single-line `<instantiation>` element (used on the solver `v` line).
std::string write_instantiation(const Instantiation& a);

/// Domain text as written by the canonical writer ("0..9 12 15").
std::string format_domain(const Domain& d);

}  // namespace xcsp

#endif  // XCSP_IO_HPP
