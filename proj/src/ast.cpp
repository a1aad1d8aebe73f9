#include "unroll/ast.hpp"

#include <algorithm>
#include <array>
#include <set>

#include "unroll/printer.hpp"

namespace unroll {

Type Type::matrix(ScalarKind element, std::vector<IntRange> index_ranges) {
    Type t(Kind::Matrix);
    t.element_ = element;
    t.index_ranges_ = std::move(index_ranges);
    return t;
}

ScalarKind Type::element() const {
    switch (kind_) {
    case Kind::Bool: return ScalarKind::Bool;
    case Kind::Int: return ScalarKind::Int;
    case Kind::Matrix: return element_;
    }
    return element_;
}

std::string Type::to_string() const {
    switch (kind_) {
    case Kind::Bool: return "bool";
    case Kind::Int: return "int";
    case Kind::Matrix: {
        std::string s = "matrix indexed by [";
        for (std::size_t i = 0; i < index_ranges_.size(); ++i) {
            if (i) s += ", ";
            s += "int(" + std::to_string(index_ranges_[i].lo) + ".." +
                 std::to_string(index_ranges_[i].hi) + ")";
        }
        return s + "] of " + (element_ == ScalarKind::Bool ? "bool" : "int");
    }
    }
    return "?";
}

bool operator==(const Type& a, const Type& b) {
    if (a.kind_ != b.kind_) return false;
    if (a.kind_ != Type::Kind::Matrix) return true;
    return a.element_ == b.element_ && a.index_ranges_.size() == b.index_ranges_.size();
}

const char* op_symbol(BinOp op) {
    switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
    case BinOp::Div: return "/";
    case BinOp::Mod: return "%";
    case BinOp::Pow: return "**";
    case BinOp::Eq: return "=";
    case BinOp::Neq: return "!=";
    case BinOp::Lt: return "<";
    case BinOp::Leq: return "<=";
    case BinOp::Gt: return ">";
    case BinOp::Geq: return ">=";
    case BinOp::And: return "/\\";
    case BinOp::Or: return "\\/";
    case BinOp::Implies: return "->";
    }
    return "?";
}

const char* aggregate_name(AggregateKind kind) {
    switch (kind) {
    case AggregateKind::And: return "and";
    case AggregateKind::Or: return "or";
    case AggregateKind::Sum: return "sum";
    case AggregateKind::Product: return "product";
    }
    return "?";
}

bool is_arithmetic(BinOp op) {
    return op == BinOp::Add || op == BinOp::Sub || op == BinOp::Mul || op == BinOp::Div ||
           op == BinOp::Mod || op == BinOp::Pow;
}

bool is_comparison(BinOp op) {
    return op == BinOp::Eq || op == BinOp::Neq || op == BinOp::Lt || op == BinOp::Leq ||
           op == BinOp::Gt || op == BinOp::Geq;
}

bool is_logical(BinOp op) { return op == BinOp::And || op == BinOp::Or || op == BinOp::Implies; }

// ---------------------------------------------------------------------------
// Construction

namespace {

Expr make(Node n) { return std::make_shared<const Node>(std::move(n)); }

constexpr std::int64_t kInternedMin = -64;
constexpr std::int64_t kInternedMax = 1024;

const std::vector<Expr>& interned_ints() {
    static const std::vector<Expr> table = [] {
        std::vector<Expr> t;
        for (std::int64_t v = kInternedMin; v <= kInternedMax; ++v) {
            Node n;
            n.kind = NodeKind::IntLit;
            n.int_value = v;
            t.push_back(make(std::move(n)));
        }
        return t;
    }();
    return table;
}

const std::array<Expr, 2>& interned_bools() {
    static const std::array<Expr, 2> table = [] {
        std::array<Expr, 2> t;
        for (int v = 0; v < 2; ++v) {
            Node n;
            n.kind = NodeKind::BoolLit;
            n.int_value = v;
            t[v] = make(std::move(n));
        }
        return t;
    }();
    return table;
}

}  // namespace

Expr int_lit(std::int64_t v, SourceSpan span) {
    if (!span.valid() && v >= kInternedMin && v <= kInternedMax)
        return interned_ints()[static_cast<std::size_t>(v - kInternedMin)];
    Node n;
    n.kind = NodeKind::IntLit;
    n.int_value = v;
    n.span = std::move(span);
    return make(std::move(n));
}

Expr bool_lit(bool v, SourceSpan span) {
    if (!span.valid()) return interned_bools()[v ? 1 : 0];
    Node n;
    n.kind = NodeKind::BoolLit;
    n.int_value = v ? 1 : 0;
    n.span = std::move(span);
    return make(std::move(n));
}

Expr var_ref(std::string name, SourceSpan span) {
    Node n;
    n.kind = NodeKind::VarRef;
    n.name = std::move(name);
    n.span = std::move(span);
    return make(std::move(n));
}

Expr matrix_index(Expr base, std::vector<Expr> indices, SourceSpan span) {
    Node n;
    n.kind = NodeKind::MatrixIndex;
    n.kids.reserve(indices.size() + 1);
    n.kids.push_back(std::move(base));
    for (auto& i : indices) n.kids.push_back(std::move(i));
    n.span = std::move(span);
    return make(std::move(n));
}

Expr negate(Expr operand, SourceSpan span) {
    Node n;
    n.kind = NodeKind::Neg;
    n.kids = {std::move(operand)};
    n.span = std::move(span);
    return make(std::move(n));
}

Expr logical_not(Expr operand, SourceSpan span) {
    Node n;
    n.kind = NodeKind::Not;
    n.kids = {std::move(operand)};
    n.span = std::move(span);
    return make(std::move(n));
}

Expr binop(BinOp op, Expr lhs, Expr rhs, SourceSpan span) {
    Node n;
    n.kind = NodeKind::BinOp;
    n.op = op;
    n.kids = {std::move(lhs), std::move(rhs)};
    n.span = std::move(span);
    return make(std::move(n));
}

Expr matrix_lit(std::vector<Expr> items, SourceSpan span) {
    Node n;
    n.kind = NodeKind::MatrixLit;
    n.kids = std::move(items);
    n.span = std::move(span);
    return make(std::move(n));
}

Expr comprehension(Expr return_expr, std::vector<Generator> generators, std::vector<Expr> guards,
                   SourceSpan span) {
    Node n;
    n.kind = NodeKind::Comprehension;
    n.kids.reserve(guards.size() + 1);
    n.kids.push_back(std::move(return_expr));
    for (auto& g : guards) n.kids.push_back(std::move(g));
    n.generators = std::move(generators);
    n.span = std::move(span);
    return make(std::move(n));
}

Expr aggregate(AggregateKind kind, Expr list, SourceSpan span) {
    Node n;
    n.kind = NodeKind::Aggregate;
    n.aggregate = kind;
    n.kids = {std::move(list)};
    n.span = std::move(span);
    return make(std::move(n));
}

Expr all_diff(Expr list, SourceSpan span) {
    Node n;
    n.kind = NodeKind::AllDiff;
    n.kids = {std::move(list)};
    n.span = std::move(span);
    return make(std::move(n));
}

Expr quantifier(QuantifierKind kind, std::vector<Generator> generators, Expr body,
                SourceSpan span) {
    Node n;
    n.kind = NodeKind::Quantifier;
    n.quantifier = kind;
    n.generators = std::move(generators);
    n.kids = {std::move(body)};
    n.span = std::move(span);
    return make(std::move(n));
}

Expr with_kids(const Expr& e, std::vector<Expr> kids) {
    Node n = *e;
    n.kids = std::move(kids);
    return make(std::move(n));
}

std::span<const Expr> children(const Expr& e) { return e->kids; }

// ---------------------------------------------------------------------------
// Queries

namespace {

bool ranges_equal(const RangeExpr& a, const RangeExpr& b) {
    auto eq = [](const Expr& x, const Expr& y) {
        if (!x || !y) return !x && !y;
        return structurally_equal(x, y);
    };
    return eq(a.lo, b.lo) && eq(a.hi, b.hi);
}

}  // namespace

bool structurally_equal(const Expr& a, const Expr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->kind != b->kind || a->kids.size() != b->kids.size() ||
        a->generators.size() != b->generators.size())
        return false;
    switch (a->kind) {
    case NodeKind::IntLit:
    case NodeKind::BoolLit:
        if (a->int_value != b->int_value) return false;
        break;
    case NodeKind::VarRef:
        if (a->name != b->name) return false;
        break;
    case NodeKind::BinOp:
        if (a->op != b->op) return false;
        break;
    case NodeKind::Aggregate:
        if (a->aggregate != b->aggregate) return false;
        break;
    case NodeKind::Quantifier:
        if (a->quantifier != b->quantifier) return false;
        break;
    default:
        break;
    }
    for (std::size_t i = 0; i < a->generators.size(); ++i) {
        if (a->generators[i].name != b->generators[i].name ||
            !ranges_equal(a->generators[i].range, b->generators[i].range))
            return false;
    }
    for (std::size_t i = 0; i < a->kids.size(); ++i)
        if (!structurally_equal(a->kids[i], b->kids[i])) return false;
    return true;
}

std::size_t count_nodes(const Expr& e) {
    std::size_t n = 1;
    for (const auto& k : e->kids) n += count_nodes(k);
    return n;
}

namespace {

void collect_free(const Expr& e, std::vector<std::string>& bound, std::vector<std::string>& out) {
    if (e->kind == NodeKind::VarRef) {
        if (std::find(bound.begin(), bound.end(), e->name) == bound.end() &&
            std::find(out.begin(), out.end(), e->name) == out.end())
            out.push_back(e->name);
        return;
    }
    std::size_t mark = bound.size();
    for (const auto& g : e->generators) {
        if (g.range.lo) collect_free(g.range.lo, bound, out);
        if (g.range.hi) collect_free(g.range.hi, bound, out);
        bound.push_back(g.name);
    }
    for (const auto& k : e->kids) collect_free(k, bound, out);
    bound.resize(mark);
}

}  // namespace

std::vector<std::string> free_names(const Expr& e) {
    std::vector<std::string> bound, out;
    collect_free(e, bound, out);
    return out;
}

bool contains_kind(const Expr& e, NodeKind kind) {
    if (e->kind == kind) return true;
    return std::any_of(e->kids.begin(), e->kids.end(),
                       [&](const Expr& k) { return contains_kind(k, kind); });
}

const Expr& return_expr(const Node& comp) { return comp.kids.front(); }

std::span<const Expr> guards(const Node& comp) {
    return std::span<const Expr>(comp.kids).subspan(1);
}

IntRange concrete_range(const RangeExpr& r) {
    if (!r.lo || !r.lo->is_int_lit() || !r.hi || !r.hi->is_int_lit()) {
        SourceSpan span = r.lo ? r.lo->span : SourceSpan{};
        throw Error(ErrorKind::Validation,
                    "domain is not a closed integer interval after binding: " + to_string(r), span);
    }
    return {r.lo->int_value, r.hi->int_value};
}

Expr AggregateOp::identity() const {
    switch (kind) {
    case AggregateKind::And: return bool_lit(true);
    case AggregateKind::Or: return bool_lit(false);
    case AggregateKind::Sum: return int_lit(0);
    case AggregateKind::Product: return int_lit(1);
    }
    return nullptr;
}

std::int64_t AggregateOp::identity_value() const {
    switch (kind) {
    case AggregateKind::And: return 1;
    case AggregateKind::Or: return 0;
    case AggregateKind::Sum: return 0;
    case AggregateKind::Product: return 1;
    }
    return 0;
}

ScalarKind AggregateOp::element_kind() const {
    return kind == AggregateKind::And || kind == AggregateKind::Or ? ScalarKind::Bool
                                                                    : ScalarKind::Int;
}

// ---------------------------------------------------------------------------
// Scope

ResolvedVar resolve(const Declaration& decl) {
    ResolvedVar v;
    v.name = decl.name;
    const auto& d = decl.domain;
    if (d.element == ScalarKind::Bool) {
        v.values = {0, 1};
    } else {
        if (!d.values)
            throw Error(ErrorKind::Validation, "integer domain of '" + decl.name + "' has no bounds",
                        decl.span);
        v.values = concrete_range(*d.values);
    }
    if (d.is_matrix()) {
        std::vector<IntRange> ranges;
        for (const auto& r : d.index) ranges.push_back(concrete_range(r));
        v.type = Type::matrix(d.element, std::move(ranges));
    } else {
        v.type = Type::scalar(d.element);
    }
    return v;
}

Scope::Scope(const Model& bound_model) {
    for (const auto& d : bound_model.decision_vars) add(resolve(d));
}

void Scope::add(ResolvedVar v) { vars_.push_back(std::move(v)); }

const ResolvedVar* Scope::find(std::string_view name) const {
    for (const auto& v : vars_)
        if (v.name == name) return &v;
    return nullptr;
}

// ---------------------------------------------------------------------------
// Typing

namespace {

[[noreturn]] void type_error(const Expr& e, const std::string& msg) {
    throw Error(ErrorKind::Type, msg + " in '" + to_string(e) + "'", e->span);
}

void expect(const Expr& e, const Type& got, const Type& want, const char* what) {
    if (!(got == want))
        type_error(e, std::string(what) + " must be " + want.to_string() + ", got " + got.to_string());
}

TypeEnv bind_generators(const Node& n, const TypeEnv& env) {
    TypeEnv inner = env;
    for (const auto& g : n.generators) {
        if (g.range.lo) expect(g.range.lo, type_of(g.range.lo, inner), Type::integer(), "domain bound");
        if (g.range.hi) expect(g.range.hi, type_of(g.range.hi, inner), Type::integer(), "domain bound");
        inner.insert_or_assign(g.name, Type::integer());
    }
    return inner;
}

// Element kind of a list argument, or nullopt for the empty literal.
std::optional<ScalarKind> list_element(const Expr& list, const TypeEnv& env) {
    if (list->kind == NodeKind::MatrixLit && list->kids.empty()) return std::nullopt;
    Type t = type_of(list, env);
    if (!t.is_matrix()) type_error(list, "expected a matrix argument");
    return t.element();
}

}  // namespace

Type type_of(const Expr& e, const TypeEnv& env) {
    const Node& n = *e;
    switch (n.kind) {
    case NodeKind::IntLit: return Type::integer();
    case NodeKind::BoolLit: return Type::boolean();
    case NodeKind::VarRef: {
        auto it = env.find(n.name);
        if (it == env.end()) throw Error(ErrorKind::UnboundName, "unbound name '" + n.name + "'", n.span);
        return it->second;
    }
    case NodeKind::MatrixIndex: {
        Type base = type_of(n.kids[0], env);
        if (!base.is_matrix()) type_error(e, "indexing a non-matrix");
        if (base.index_ranges().size() != n.kids.size() - 1)
            type_error(e, "matrix has " + std::to_string(base.index_ranges().size()) +
                              " dimension(s), indexed with " + std::to_string(n.kids.size() - 1));
        for (std::size_t i = 1; i < n.kids.size(); ++i)
            expect(n.kids[i], type_of(n.kids[i], env), Type::integer(), "index");
        return Type::scalar(base.element());
    }
    case NodeKind::Neg:
        expect(n.kids[0], type_of(n.kids[0], env), Type::integer(), "operand of unary -");
        return Type::integer();
    case NodeKind::Not:
        expect(n.kids[0], type_of(n.kids[0], env), Type::boolean(), "operand of !");
        return Type::boolean();
    case NodeKind::BinOp: {
        Type l = type_of(n.kids[0], env);
        Type r = type_of(n.kids[1], env);
        if (is_arithmetic(n.op)) {
            if (!l.is_int() || !r.is_int()) type_error(e, std::string("operands of ") + op_symbol(n.op) + " must be int");
            return Type::integer();
        }
        if (n.op == BinOp::Eq || n.op == BinOp::Neq) {
            if (!l.is_scalar() || !(l == r)) type_error(e, "operands of " + std::string(op_symbol(n.op)) + " must have the same scalar type");
            return Type::boolean();
        }
        if (is_comparison(n.op)) {
            if (!l.is_int() || !r.is_int()) type_error(e, std::string("operands of ") + op_symbol(n.op) + " must be int");
            return Type::boolean();
        }
        if (!l.is_bool() || !r.is_bool()) type_error(e, std::string("operands of ") + op_symbol(n.op) + " must be bool");
        return Type::boolean();
    }
    case NodeKind::MatrixLit: {
        if (n.kids.empty()) return Type::matrix(ScalarKind::Int, {IntRange{1, 0}});
        Type first = type_of(n.kids[0], env);
        if (!first.is_scalar()) type_error(e, "matrix literal items must be scalars");
        for (std::size_t i = 1; i < n.kids.size(); ++i)
            if (!(type_of(n.kids[i], env) == first)) type_error(e, "matrix literal items must share one type");
        return Type::matrix(first.element(), {IntRange{1, static_cast<std::int64_t>(n.kids.size())}});
    }
    case NodeKind::Comprehension: {
        TypeEnv inner = bind_generators(n, env);
        for (const auto& g : guards(n)) expect(g, type_of(g, inner), Type::boolean(), "comprehension guard");
        Type r = type_of(return_expr(n), inner);
        if (!r.is_scalar()) type_error(e, "comprehension must return a scalar");
        return Type::matrix(r.element(), {IntRange{1, 0}});
    }
    case NodeKind::Aggregate: {
        AggregateOp op{n.aggregate};
        auto elem = list_element(n.kids[0], env);
        if (elem && *elem != op.element_kind())
            type_error(e, std::string(aggregate_name(n.aggregate)) + " expects " +
                              (op.element_kind() == ScalarKind::Bool ? "bool" : "int") + " items");
        return op.element_type();
    }
    case NodeKind::AllDiff:
        list_element(n.kids[0], env);
        return Type::boolean();
    case NodeKind::Quantifier: {
        TypeEnv inner = bind_generators(n, env);
        expect(n.kids[0], type_of(n.kids[0], inner), Type::boolean(), "quantified expression");
        return Type::boolean();
    }
    }
    throw Error(ErrorKind::Internal, "unknown node kind", n.span);
}

}  // namespace unroll
