#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "unroll/error.hpp"

namespace unroll {

/// Closed integer interval. lo > hi denotes the empty range.
struct IntRange {
    std::int64_t lo = 1;
    std::int64_t hi = 0;

    bool empty() const { return lo > hi; }
    std::uint64_t size() const {
        return empty() ? 0 : static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
    }
    bool contains(std::int64_t v) const { return lo <= v && v <= hi; }

    friend bool operator==(const IntRange&, const IntRange&) = default;
};

enum class ScalarKind { Bool, Int };

class Type {
public:
    enum class Kind { Bool, Int, Matrix };

    static Type boolean() { return Type(Kind::Bool); }
    static Type integer() { return Type(Kind::Int); }
    static Type scalar(ScalarKind k) { return k == ScalarKind::Bool ? boolean() : integer(); }
    static Type matrix(ScalarKind element, std::vector<IntRange> index_ranges);

    Kind kind() const { return kind_; }
    bool is_bool() const { return kind_ == Kind::Bool; }
    bool is_int() const { return kind_ == Kind::Int; }
    bool is_matrix() const { return kind_ == Kind::Matrix; }
    bool is_scalar() const { return !is_matrix(); }

    /// Element kind of a matrix, or the kind itself for scalars.
    ScalarKind element() const;
    const std::vector<IntRange>& index_ranges() const { return index_ranges_; }

    std::string to_string() const;

    /// Matrices compare by element kind and dimension count only: index
    /// ranges are not part of type identity.
    friend bool operator==(const Type& a, const Type& b);

private:
    explicit Type(Kind k) : kind_(k) {}

    Kind kind_;
    ScalarKind element_ = ScalarKind::Int;
    std::vector<IntRange> index_ranges_;
};

enum class NodeKind {
    IntLit,
    BoolLit,
    VarRef,
    MatrixIndex,
    Neg,
    Not,
    BinOp,
    MatrixLit,
    Comprehension,
    Aggregate,
    AllDiff,
    Quantifier,
};

enum class BinOp { Add, Sub, Mul, Div, Mod, Pow, Eq, Neq, Lt, Leq, Gt, Geq, And, Or, Implies };
enum class AggregateKind { And, Or, Sum, Product };
enum class QuantifierKind { ForAll, Exists };

const char* op_symbol(BinOp op);
const char* aggregate_name(AggregateKind kind);
bool is_arithmetic(BinOp op);
bool is_comparison(BinOp op);
bool is_logical(BinOp op);

struct Node;
using Expr = std::shared_ptr<const Node>;

/// `int(lo..hi)`. `hi` is null for the open range `int(lo..)`.
struct RangeExpr {
    Expr lo;
    Expr hi;
};

/// One induction variable of a comprehension or quantifier.
struct Generator {
    std::string name;
    RangeExpr range;
};

/// Expression tree node. Immutable once built; share freely.
///
/// Child layout by kind:
///   MatrixIndex   base, index...
///   Neg, Not      operand
///   BinOp         lhs, rhs
///   MatrixLit     item...
///   Comprehension return, guard...   (+ generators)
///   Aggregate     list               (MatrixLit or Comprehension)
///   AllDiff       list
///   Quantifier    body               (+ generators)
struct Node {
    NodeKind kind = NodeKind::IntLit;
    std::int64_t int_value = 0;  // IntLit value; BoolLit 0/1
    std::string name;            // VarRef
    BinOp op = BinOp::Add;
    AggregateKind aggregate = AggregateKind::And;
    QuantifierKind quantifier = QuantifierKind::ForAll;
    std::vector<Expr> kids;
    std::vector<Generator> generators;
    SourceSpan span;

    bool is_int_lit() const { return kind == NodeKind::IntLit; }
    bool is_bool_lit() const { return kind == NodeKind::BoolLit; }
    bool is_literal() const { return is_int_lit() || is_bool_lit(); }
    bool bool_value() const { return int_value != 0; }
};

// Constructors. Literals are interned for small values.
Expr int_lit(std::int64_t v, SourceSpan span = {});
Expr bool_lit(bool v, SourceSpan span = {});
Expr var_ref(std::string name, SourceSpan span = {});
Expr matrix_index(Expr base, std::vector<Expr> indices, SourceSpan span = {});
Expr negate(Expr operand, SourceSpan span = {});
Expr logical_not(Expr operand, SourceSpan span = {});
Expr binop(BinOp op, Expr lhs, Expr rhs, SourceSpan span = {});
Expr matrix_lit(std::vector<Expr> items, SourceSpan span = {});
Expr comprehension(Expr return_expr, std::vector<Generator> generators, std::vector<Expr> guards,
                   SourceSpan span = {});
Expr aggregate(AggregateKind kind, Expr list, SourceSpan span = {});
Expr all_diff(Expr list, SourceSpan span = {});
Expr quantifier(QuantifierKind kind, std::vector<Generator> generators, Expr body,
                SourceSpan span = {});

/// Copy of `e` with its children replaced.
Expr with_kids(const Expr& e, std::vector<Expr> kids);

/// Left-to-right children.
std::span<const Expr> children(const Expr& e);

/// Structural equality (ignores source spans).
bool structurally_equal(const Expr& a, const Expr& b);

std::size_t count_nodes(const Expr& e);

/// Calls `fn` on every VarRef name in `e` (including names in generator bounds).
template <class Fn>
void for_each_name(const Expr& e, Fn&& fn);

/// Free names of `e`: VarRefs not bound by an enclosing generator inside `e`.
std::vector<std::string> free_names(const Expr& e);

bool contains_kind(const Expr& e, NodeKind kind);

// Comprehension accessors.
const Expr& return_expr(const Node& comp);
std::span<const Expr> guards(const Node& comp);

/// Concrete range of a bound generator/domain; throws if bounds are not literals.
IntRange concrete_range(const RangeExpr& r);

/// Aggregate facts: identity literal and element type.
struct AggregateOp {
    AggregateKind kind;

    Expr identity() const;
    std::int64_t identity_value() const;  // as 0/1 for booleans
    ScalarKind element_kind() const;
    Type element_type() const { return Type::scalar(element_kind()); }
};

// ---------------------------------------------------------------------------
// Models

struct DomainDecl {
    ScalarKind element = ScalarKind::Int;
    std::optional<RangeExpr> values;  // Int only
    std::vector<RangeExpr> index;     // non-empty for matrices
    SourceSpan span;

    bool is_matrix() const { return !index.empty(); }
};

struct Declaration {
    std::string name;
    DomainDecl domain;
    SourceSpan span;
};

struct Constant {
    std::string name;
    Expr value;
    SourceSpan span;
};

struct Model {
    std::vector<Declaration> params;
    std::vector<Constant> constants;
    std::vector<Declaration> decision_vars;
    std::vector<Expr> constraints;
};

/// A decision variable after parameter binding.
struct ResolvedVar {
    std::string name;
    Type type = Type::integer();
    IntRange values;  // {0,1} for booleans
};

/// Decision variables visible to a comprehension, with concrete types and domains.
class Scope {
public:
    Scope() = default;
    explicit Scope(const Model& bound_model);

    void add(ResolvedVar v);
    const ResolvedVar* find(std::string_view name) const;
    const std::vector<ResolvedVar>& vars() const { return vars_; }

private:
    std::vector<ResolvedVar> vars_;
};

ResolvedVar resolve(const Declaration& decl);

using TypeEnv = std::map<std::string, Type, std::less<>>;

/// Static type of `e`. Throws Error(Type) on mismatch and Error(UnboundName)
/// for names missing from `env`.
Type type_of(const Expr& e, const TypeEnv& env);

/// Prefix reserved for compiler-generated names.
inline constexpr std::string_view kReservedPrefix = "__";
inline bool is_reserved_name(std::string_view name) { return name.starts_with(kReservedPrefix); }

// ---------------------------------------------------------------------------

template <class Fn>
void for_each_name(const Expr& e, Fn&& fn) {
    if (e->kind == NodeKind::VarRef) {
        fn(e->name);
        return;
    }
    for (const auto& g : e->generators) {
        if (g.range.lo) for_each_name(g.range.lo, fn);
        if (g.range.hi) for_each_name(g.range.hi, fn);
    }
    for (const auto& k : e->kids) for_each_name(k, fn);
}

}  // namespace unroll
