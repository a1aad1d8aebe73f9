#pragma once

#include <optional>
#include <string>
#include <vector>

#include "unroll/ast.hpp"
#include "unroll/rewrite.hpp"

namespace unroll {

struct GenVar {
    std::string name;
    ScalarKind kind = ScalarKind::Int;
    IntRange domain;
};

/// CSP whose solutions (projected onto the branching variables) are the
/// induction assignments a comprehension has to be expanded for.
struct GeneratorModel {
    std::vector<GenVar> vars;              // induction variables first, then dummies
    std::vector<std::string> branching;    // the induction variables, generator order
    std::vector<Expr> constraints;         // static over vars
    std::optional<RewriteResult> rewrite;  // set when the return expression was lifted
};

enum class GeneratorMode {
    Simple,  // explicit guards only
    Full,    // explicit guards plus the lifted return expression
};

/// `host` is an Aggregate or AllDiff node whose list is a bound comprehension.
/// For aggregates in Full mode the return expression is lifted and the
/// constraint `rewritten != identity` added; otherwise only the generators and
/// guards are used.
GeneratorModel build_generator_model(const Expr& host, GeneratorMode mode, const Scope& scope);

/// Induction variables of a bound comprehension node.
InductionVars induction_vars_of(const Node& comprehension);

/// `find ... / branching on [...] / such that ...`
std::string to_string(const GeneratorModel& g);

}  // namespace unroll
