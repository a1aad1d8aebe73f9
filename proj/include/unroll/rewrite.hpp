#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "unroll/ast.hpp"

namespace unroll {

enum class Staticness { Static, Dynamic };

/// Induction variables of one comprehension, in generator order.
using InductionVars = std::vector<std::pair<std::string, IntRange>>;

/// Dynamic iff `e` references a name that is neither an induction variable
/// nor a compiler-generated dummy.
Staticness classify(const Expr& e, const std::set<std::string, std::less<>>& induction_vars);
Staticness classify(const Expr& e, const InductionVars& induction_vars);

struct DummyVar {
    std::string name;  // __Z1, __Z2, ...
    Type declared_type;
    IntRange domain;  // {0,1} for Bool dummies
};

struct RewriteResult {
    Expr rewritten;                                     // static
    std::vector<DummyVar> dummies;                      // in introduction order
    std::vector<std::pair<std::string, Expr>> replaced; // dummy -> original subtree
};

/// Replaces dynamic sub-expressions of a comprehension's return expression by
/// fresh dummy variables of `dummy_type`, so that the result references only
/// induction variables and dummies.
///
/// The cursor walks the tree left to right starting at the root:
///  - a subtree with no decision variables is skipped;
///  - a dynamic subtree with no dynamic descendant of `dummy_type` becomes a
///    dummy; if its own type is wrong, the cursor first climbs to the nearest
///    ancestor that has the dummy type;
///  - a dynamic subtree with such a descendant is entered if an induction
///    variable occurs in it outside the index of a decision-variable read,
///    and is replaced whole otherwise.
/// After a replacement or skip the cursor moves to the right sibling, or to
/// the parent's right sibling when there is none; a parent is never
/// re-examined.
///
/// `scope` supplies decision-variable types and domains (for Int dummy
/// domains).
RewriteResult lift_static_guard(const Expr& return_expr, const InductionVars& induction_vars,
                                const Type& dummy_type, const Scope& scope);

/// Puts the replaced subtrees back in place of their dummies.
Expr reconstruct(const RewriteResult& r);

std::string to_string(const RewriteResult& r);

}  // namespace unroll
