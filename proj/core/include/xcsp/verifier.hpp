#ifndef XCSP_VERIFIER_HPP
#define XCSP_VERIFIER_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "xcsp/model.hpp"

namespace xcsp {

/// Objective overflow or an enumeration that exceeds the size guard.
class VerifierError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Violation {
  int constraint = -1;  // -1: a value outside its variable's domain
  std::string reason;
};

/// Reason why `c` rejects the values (indexed by VarId), or nothing.
std::optional<std::string> check_constraint(const Constraint& c, std::span<const Value> values);

/// Every violation of the instance by a total assignment in declaration order.
std::vector<Violation> check_assignment(const Instance& inst, std::span<const Value> values);
/// Named form; throws ModelError when a variable is missing or unknown.
std::vector<Violation> check_instantiation(const Instance& inst, const Instantiation& a);

/// Exact objective value; throws VerifierError on overflow or when the
/// instance has no objective.
Value objective_value(const Instance& inst, std::span<const Value> values);
Value objective_value(const Instance& inst, const Instantiation& a);

inline constexpr double kMaxBruteSpace = 1e8;

/// Solutions in lexicographic order of the declaration-ordered value
/// vectors, at most `limit` of them. Throws VerifierError when the product
/// of domain sizes exceeds kMaxBruteSpace.
std::vector<Assignment> enumerate_assignments(const Instance& inst, std::size_t limit);
std::vector<Instantiation> enumerate_brute(const Instance& inst, std::size_t limit);

}  // namespace xcsp

#endif  // XCSP_VERIFIER_HPP
