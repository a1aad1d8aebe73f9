#pragma once

#include <string>
#include <string_view>

#include "unroll/ast.hpp"
#include "unroll/value.hpp"

namespace unroll {

/// Parses and validates a model. Throws Error with kind Syntax, Type or
/// Validation; the span points at the offending construct.
Model parse_model(std::string_view text, const std::string& file_name = {});

/// Parses a standalone expression (no validation). Mostly for tests and tools.
Expr parse_expression(std::string_view text);

/// Parses `letting NAME be VALUE` lines.
Bindings parse_params(std::string_view text, const std::string& file_name = {});

/// As above, and checks every binding against the model's `given`s
/// (UnknownParam, Type).
Bindings parse_params(std::string_view text, const Model& model, const std::string& file_name = {});

/// Substitutes parameters and constants everywhere and folds every domain to
/// a closed interval. Throws MissingParam, UnknownParam, Type or
/// DomainViolation.
Model bind_params(const Model& m, const Bindings& bindings);

/// Semantic checks shared by parse_model and bind_params (names, guards,
/// nesting, types).
void validate_model(const Model& m);

}  // namespace unroll
