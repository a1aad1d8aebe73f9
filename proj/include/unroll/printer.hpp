#pragma once

#include <string>

#include "unroll/ast.hpp"

namespace unroll {

// Canonical printer. Every binary operand that is itself an operator
// application is parenthesised, so the output never depends on precedence
// and parse(print(e)) reproduces e exactly.

std::string to_string(const Expr& e);
std::string to_string(const RangeExpr& r);
std::string to_string(const DomainDecl& d);
std::string to_string(const Declaration& d, const char* keyword);

/// Whole model in source syntax (given / letting / find / such that).
std::string to_string(const Model& m);

}  // namespace unroll
