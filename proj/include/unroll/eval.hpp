#pragma once

#include <span>
#include <vector>

#include "unroll/ast.hpp"
#include "unroll/value.hpp"

namespace unroll {

/// Evaluates a ground expression. Logical connectives short-circuit left to
/// right; arithmetic is checked (Overflow), `/` and `%` use floor division
/// (DivByZero on a zero divisor).
Value eval_static(const Expr& e, const Env& env);

/// Partial evaluation. Names bound in `env` are replaced by their values,
/// ground subtrees are folded, and this closed rule set is applied bottom-up:
///
///   true /\ x -> x      false /\ x -> false    (both orders)
///   false \/ x -> x     true \/ x -> true      (both orders)
///   false -> x -> true  true -> x -> x         x -> true -> true
///   0 + x -> x          x - 0 -> x             (+ both orders)
///   0 * x -> 0          1 * x -> x             (both orders)
///   x ** 1 -> x
///
/// plus the n-ary forms on aggregates over matrix literals: identity items
/// are dropped, an absorbing item (false in and, true in or, 0 in product)
/// collapses the aggregate, no items gives the identity and one item gives
/// that item. Nothing else is rewritten; in particular `x \/ !x` stays.
///
/// Implications and conjunctions are folded lazily: `false -> x` is `true`
/// without looking at x, even if x would not evaluate.
Expr simplify(const Expr& e, const Env& env = {});

/// Three-valued evaluation with the same rules as `simplify`: returns the
/// value `simplify` would reduce `e` to, or nothing when the result is not a
/// literal. Unbound names are unknowns.
std::optional<Value> partial_eval(const Expr& e, const Env& env);

/// Builds the aggregate of `items`: identity items dropped, empty list gives
/// the identity, a single item is returned as-is, otherwise an n-ary
/// aggregate over a matrix literal in item order.
Expr assemble_aggregate(AggregateKind kind, std::span<const Expr> items);

/// Pure structural substitution of names (no folding).
Expr substitute(const Expr& e, const std::map<std::string, Expr, std::less<>>& replacements);

/// Integer helpers with the language's semantics; throw on overflow.
namespace arith {
std::int64_t add(std::int64_t a, std::int64_t b);
std::int64_t sub(std::int64_t a, std::int64_t b);
std::int64_t mul(std::int64_t a, std::int64_t b);
std::int64_t div(std::int64_t a, std::int64_t b);
std::int64_t mod(std::int64_t a, std::int64_t b);
std::int64_t pow(std::int64_t base, std::int64_t exponent);
std::int64_t neg(std::int64_t a);
}  // namespace arith

}  // namespace unroll
