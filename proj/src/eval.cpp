#include "unroll/eval.hpp"

#include <limits>
#include <variant>

#include "unroll/printer.hpp"

namespace unroll {

namespace arith {

namespace {
[[noreturn]] void overflow(const char* what) {
    throw Error(ErrorKind::Overflow, std::string("integer overflow in ") + what);
}
}  // namespace

std::int64_t add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) overflow("+");
    return r;
}

std::int64_t sub(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_sub_overflow(a, b, &r)) overflow("-");
    return r;
}

std::int64_t mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) overflow("*");
    return r;
}

std::int64_t div(std::int64_t a, std::int64_t b) {
    if (b == 0) throw Error(ErrorKind::DivByZero, "division by zero");
    if (a == std::numeric_limits<std::int64_t>::min() && b == -1) overflow("/");
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

std::int64_t mod(std::int64_t a, std::int64_t b) {
    if (b == 0) throw Error(ErrorKind::DivByZero, "modulo by zero");
    if (b == -1) return 0;
    std::int64_t r = a % b;
    if (r != 0 && ((r < 0) != (b < 0))) r += b;
    return r;
}

std::int64_t pow(std::int64_t base, std::int64_t exponent) {
    if (exponent < 0) throw Error(ErrorKind::Arithmetic, "negative exponent");
    std::int64_t result = 1;
    while (exponent > 0) {
        if (exponent & 1) result = mul(result, base);
        exponent >>= 1;
        if (exponent > 0) base = mul(base, base);
    }
    return result;
}

std::int64_t neg(std::int64_t a) {
    if (a == std::numeric_limits<std::int64_t>::min()) overflow("unary -");
    return -a;
}

}  // namespace arith

namespace {

// ---------------------------------------------------------------------------
// Folding engine. One traversal implements eval_static, simplify and
// partial_eval; they differ only in what a non-ground result looks like.

/// simplify: residuals are rebuilt expressions.
struct ExprPolicy {
    using Residual = Expr;
    static constexpr bool kStrict = false;
};

/// partial_eval: residuals carry no information.
struct UnknownPolicy {
    using Residual = std::monostate;
    static constexpr bool kStrict = false;
};

/// eval_static: unbound names are errors, so residuals never arise.
struct StrictPolicy {
    using Residual = std::monostate;
    static constexpr bool kStrict = true;
};

template <class Policy>
class Folder {
public:
    using R = typename Policy::Residual;
    using Out = std::variant<Value, R>;

    explicit Folder(const Env& env) : env_(env) {}

    Out fold(const Expr& e);

private:
    static bool ground(const Out& o) { return o.index() == 0; }
    static const Value& value(const Out& o) { return std::get<0>(o); }
    static bool is_bool(const Out& o, bool b) {
        return ground(o) && value(o).is_bool() && value(o).as_bool() == b;
    }
    static bool is_int(const Out& o, std::int64_t v) {
        return ground(o) && value(o).is_int() && value(o).as_int() == v;
    }

    static Expr as_expr(const Out& o) {
        if (ground(o)) return to_expr(value(o));
        if constexpr (std::is_same_v<R, Expr>) return std::get<1>(o);
        return nullptr;
    }

    /// Residual for `original` with folded children `kids`.
    static Out rebuild(const Expr& original, std::span<const Out> kids) {
        if constexpr (std::is_same_v<R, Expr>) {
            bool same = kids.size() == original->kids.size();
            for (std::size_t i = 0; same && i < kids.size(); ++i)
                same = !ground(kids[i]) && std::get<1>(kids[i]) == original->kids[i];
            if (same) return original;
            std::vector<Expr> ks;
            ks.reserve(kids.size());
            for (const auto& k : kids) ks.push_back(as_expr(k));
            return with_kids(original, std::move(ks));
        } else {
            if constexpr (Policy::kStrict)
                throw Error(ErrorKind::Internal, "non-ground result in strict evaluation", original->span);
            return R{};
        }
    }

    /// Residual for an aggregate/allDiff `host` whose list becomes `items`.
    static Out rebuild_list(const Expr& host, std::span<const Out> items) {
        if constexpr (std::is_same_v<R, Expr>) {
            Out list = rebuild(host->kids[0], items);
            Out kids[] = {list};
            return rebuild(host, kids);
        } else {
            return rebuild(host, {});
        }
    }

    static Out opaque(const Expr& e) {
        if constexpr (std::is_same_v<R, Expr>) {
            return e;
        } else {
            if constexpr (Policy::kStrict)
                throw Error(ErrorKind::UnboundName, "expression is not ground: " + to_string(e), e->span);
            return R{};
        }
    }

    static Value compute(BinOp op, const Value& a, const Value& b, const Node& n);
    Out fold_binop(const Expr& e);
    Out fold_aggregate(const Expr& e);
    Out fold_index(const Expr& e);
    bool comprehension_values(const Node& comp, std::vector<Value>& out);
    Out fold_over_comprehension(const Expr& host);

    const Env& env_;
};

[[noreturn]] void rethrow_at(const Error& err, const Node& n) {
    if (err.span().valid()) throw err;
    throw Error(err.kind(), err.message() + " in '" + to_string(std::make_shared<const Node>(n)) + "'",
                n.span);
}

template <class Policy>
Value Folder<Policy>::compute(BinOp op, const Value& a, const Value& b, const Node& n) {
    try {
        switch (op) {
        case BinOp::Add: return arith::add(a.as_int(), b.as_int());
        case BinOp::Sub: return arith::sub(a.as_int(), b.as_int());
        case BinOp::Mul: return arith::mul(a.as_int(), b.as_int());
        case BinOp::Div: return arith::div(a.as_int(), b.as_int());
        case BinOp::Mod: return arith::mod(a.as_int(), b.as_int());
        case BinOp::Pow: return arith::pow(a.as_int(), b.as_int());
        case BinOp::Eq: return a == b;
        case BinOp::Neq: return !(a == b);
        case BinOp::Lt: return a.as_int() < b.as_int();
        case BinOp::Leq: return a.as_int() <= b.as_int();
        case BinOp::Gt: return a.as_int() > b.as_int();
        case BinOp::Geq: return a.as_int() >= b.as_int();
        case BinOp::And: return a.as_bool() && b.as_bool();
        case BinOp::Or: return a.as_bool() || b.as_bool();
        case BinOp::Implies: return !a.as_bool() || b.as_bool();
        }
    } catch (const Error& err) {
        rethrow_at(err, n);
    } catch (const std::bad_variant_access&) {
        throw Error(ErrorKind::Type, "operand of wrong type", n.span);
    }
    throw Error(ErrorKind::Internal, "unknown operator", n.span);
}

template <class Policy>
typename Folder<Policy>::Out Folder<Policy>::fold(const Expr& e) {
    const Node& n = *e;
    switch (n.kind) {
    case NodeKind::IntLit:
        return Value(n.int_value);
    case NodeKind::BoolLit:
        return Value(n.bool_value());
    case NodeKind::VarRef: {
        if (const Value* v = env_.find(n.name)) return *v;
        if constexpr (Policy::kStrict)
            throw Error(ErrorKind::UnboundName, "unbound name '" + n.name + "'", n.span);
        return opaque(e);
    }
    case NodeKind::Neg: {
        Out x = fold(n.kids[0]);
        if (ground(x)) {
            try {
                return Value(arith::neg(value(x).as_int()));
            } catch (const Error& err) {
                rethrow_at(err, n);
            }
        }
        Out kids[] = {std::move(x)};
        return rebuild(e, kids);
    }
    case NodeKind::Not: {
        Out x = fold(n.kids[0]);
        if (ground(x)) return Value(!value(x).as_bool());
        Out kids[] = {std::move(x)};
        return rebuild(e, kids);
    }
    case NodeKind::BinOp:
        return fold_binop(e);
    case NodeKind::MatrixIndex:
        return fold_index(e);
    case NodeKind::MatrixLit: {
        std::vector<Out> items;
        items.reserve(n.kids.size());
        bool all_ground = true;
        for (const auto& k : n.kids) {
            items.push_back(fold(k));
            all_ground = all_ground && ground(items.back());
        }
        if (all_ground) {
            auto m = std::make_shared<MatrixValue>();
            m->ranges = {IntRange{1, static_cast<std::int64_t>(items.size())}};
            for (auto& i : items) m->items.push_back(value(i));
            return Value(std::shared_ptr<const MatrixValue>(std::move(m)));
        }
        return rebuild(e, items);
    }
    case NodeKind::Aggregate:
        if (n.kids[0]->kind == NodeKind::Comprehension) return fold_over_comprehension(e);
        return fold_aggregate(e);
    case NodeKind::AllDiff: {
        if (n.kids[0]->kind == NodeKind::Comprehension) return fold_over_comprehension(e);
        const Node& list = *n.kids[0];
        std::vector<Out> items;
        bool all_ground = true;
        for (const auto& k : list.kids) {
            items.push_back(fold(k));
            all_ground = all_ground && ground(items.back());
        }
        if (all_ground) {
            for (std::size_t i = 0; i < items.size(); ++i)
                for (std::size_t j = i + 1; j < items.size(); ++j)
                    if (value(items[i]) == value(items[j])) return Value(false);
            return Value(true);
        }
        return rebuild_list(e, items);
    }
    case NodeKind::Comprehension: {
        std::vector<Value> values;
        if (!comprehension_values(n, values)) return opaque(e);
        auto m = std::make_shared<MatrixValue>();
        m->ranges = {IntRange{1, static_cast<std::int64_t>(values.size())}};
        m->items = std::move(values);
        return Value(std::shared_ptr<const MatrixValue>(std::move(m)));
    }
    case NodeKind::Quantifier: {
        // Equivalent to and/or over a guard-free comprehension.
        AggregateKind kind =
            n.quantifier == QuantifierKind::ForAll ? AggregateKind::And : AggregateKind::Or;
        Expr host = aggregate(kind, comprehension(n.kids[0], n.generators, {}, n.span), n.span);
        Out out = fold_over_comprehension(host);
        if (ground(out)) return out;
        return opaque(e);
    }
    }
    throw Error(ErrorKind::Internal, "unknown node kind", n.span);
}

template <class Policy>
typename Folder<Policy>::Out Folder<Policy>::fold_binop(const Expr& e) {
    const Node& n = *e;
    switch (n.op) {
    case BinOp::And: {
        Out l = fold(n.kids[0]);
        if (ground(l)) return value(l).as_bool() ? fold(n.kids[1]) : Out(Value(false));
        Out r = fold(n.kids[1]);
        if (ground(r)) return value(r).as_bool() ? l : Out(Value(false));
        Out kids[] = {std::move(l), std::move(r)};
        return rebuild(e, kids);
    }
    case BinOp::Or: {
        Out l = fold(n.kids[0]);
        if (ground(l)) return value(l).as_bool() ? Out(Value(true)) : fold(n.kids[1]);
        Out r = fold(n.kids[1]);
        if (ground(r)) return value(r).as_bool() ? Out(Value(true)) : l;
        Out kids[] = {std::move(l), std::move(r)};
        return rebuild(e, kids);
    }
    case BinOp::Implies: {
        Out l = fold(n.kids[0]);
        if (ground(l)) return value(l).as_bool() ? fold(n.kids[1]) : Out(Value(true));
        Out r = fold(n.kids[1]);
        if (is_bool(r, true)) return Value(true);
        Out kids[] = {std::move(l), std::move(r)};
        return rebuild(e, kids);
    }
    default:
        break;
    }

    Out l = fold(n.kids[0]);
    Out r = fold(n.kids[1]);
    if (ground(l) && ground(r)) return compute(n.op, value(l), value(r), n);
    switch (n.op) {
    case BinOp::Add:
        if (is_int(l, 0)) return r;
        if (is_int(r, 0)) return l;
        break;
    case BinOp::Sub:
        if (is_int(r, 0)) return l;
        break;
    case BinOp::Mul:
        if (is_int(l, 0) || is_int(r, 0)) return Value(std::int64_t{0});
        if (is_int(l, 1)) return r;
        if (is_int(r, 1)) return l;
        break;
    case BinOp::Pow:
        if (is_int(r, 1)) return l;
        break;
    default:
        break;
    }
    Out kids[] = {std::move(l), std::move(r)};
    return rebuild(e, kids);
}

template <class Policy>
typename Folder<Policy>::Out Folder<Policy>::fold_aggregate(const Expr& e) {
    const Node& n = *e;
    AggregateOp op{n.aggregate};
    const Node& list = *n.kids[0];

    std::optional<Value> absorbing;
    if (n.aggregate == AggregateKind::And) absorbing = Value(false);
    if (n.aggregate == AggregateKind::Or) absorbing = Value(true);
    if (n.aggregate == AggregateKind::Product) absorbing = Value(std::int64_t{0});
    Value identity = op.element_kind() == ScalarKind::Bool ? Value(op.identity_value() != 0)
                                                           : Value(op.identity_value());

    std::vector<Out> kept;
    bool all_ground = true;
    for (const auto& k : list.kids) {
        Out o = fold(k);
        if (ground(o)) {
            if (value(o) == identity) continue;
            if (absorbing && value(o) == *absorbing) return *absorbing;
        } else {
            all_ground = false;
        }
        kept.push_back(std::move(o));
    }
    if (kept.empty()) return identity;
    if (all_ground) {
        // Only sums and products of non-identity values get here.
        std::int64_t acc = op.identity_value();
        try {
            for (const auto& k : kept)
                acc = n.aggregate == AggregateKind::Sum ? arith::add(acc, value(k).as_int())
                                                        : arith::mul(acc, value(k).as_int());
        } catch (const Error& err) {
            rethrow_at(err, n);
        }
        return Value(acc);
    }
    if (kept.size() == 1) return kept.front();
    return rebuild_list(e, kept);
}

template <class Policy>
typename Folder<Policy>::Out Folder<Policy>::fold_index(const Expr& e) {
    const Node& n = *e;
    std::vector<Out> kids;
    kids.reserve(n.kids.size());
    bool all_ground = true;
    for (const auto& k : n.kids) {
        kids.push_back(fold(k));
        all_ground = all_ground && ground(kids.back());
    }
    if (!all_ground) return rebuild(e, kids);

    const MatrixValue& m = value(kids[0]).as_matrix();
    if (m.ranges.size() != kids.size() - 1)
        throw Error(ErrorKind::Type, "wrong number of indices", n.span);
    std::size_t offset = 0;
    for (std::size_t d = 0; d < m.ranges.size(); ++d) {
        std::int64_t i = value(kids[d + 1]).as_int();
        if (!m.ranges[d].contains(i))
            throw Error(ErrorKind::IndexOutOfBounds,
                        "index " + std::to_string(i) + " outside " + std::to_string(m.ranges[d].lo) +
                            ".." + std::to_string(m.ranges[d].hi) + " in '" + to_string(e) + "'",
                        n.span);
        offset = offset * m.ranges[d].size() + static_cast<std::size_t>(i - m.ranges[d].lo);
    }
    return m.items[offset];
}

template <class Policy>
bool Folder<Policy>::comprehension_values(const Node& comp, std::vector<Value>& out) {
    std::vector<IntRange> ranges;
    for (const auto& g : comp.generators) {
        Out lo = fold(g.range.lo);
        Out hi = g.range.hi ? fold(g.range.hi) : Out(R{});
        if (!ground(lo) || !ground(hi)) return false;
        ranges.push_back({value(lo).as_int(), value(hi).as_int()});
    }
    for (const auto& r : ranges)
        if (r.empty()) return true;

    Env inner = env_;
    std::vector<std::size_t> slots;
    for (std::size_t i = 0; i < ranges.size(); ++i)
        slots.push_back(inner.bind(comp.generators[i].name, ranges[i].lo));
    Folder<Policy> sub(inner);
    std::vector<std::int64_t> cur;
    for (const auto& r : ranges) cur.push_back(r.lo);
    while (true) {
        bool pass = true;
        for (const auto& g : guards(comp)) {
            Out o = sub.fold(g);
            if (!ground(o)) return false;
            if (!value(o).as_bool()) {
                pass = false;
                break;
            }
        }
        if (pass) {
            Out o = sub.fold(return_expr(comp));
            if (!ground(o)) return false;
            out.push_back(value(o));
        }
        std::size_t d = ranges.size();
        while (d > 0) {
            --d;
            if (cur[d] < ranges[d].hi) {
                ++cur[d];
                inner.set(slots[d], cur[d]);
                break;
            }
            cur[d] = ranges[d].lo;
            inner.set(slots[d], cur[d]);
            if (d == 0) return true;
        }
        if (ranges.empty()) return true;
    }
}

template <class Policy>
typename Folder<Policy>::Out Folder<Policy>::fold_over_comprehension(const Expr& host) {
    const Node& n = *host;
    std::vector<Value> values;
    if (!comprehension_values(*n.kids[0], values)) return opaque(host);
    if (n.kind == NodeKind::AllDiff) {
        for (std::size_t i = 0; i < values.size(); ++i)
            for (std::size_t j = i + 1; j < values.size(); ++j)
                if (values[i] == values[j]) return Value(false);
        return Value(true);
    }
    std::vector<Expr> items;
    for (const auto& v : values) items.push_back(to_expr(v));
    Folder<Policy> again(env_);
    return again.fold(aggregate(n.aggregate, matrix_lit(std::move(items)), n.span));
}

}  // namespace

Value eval_static(const Expr& e, const Env& env) {
    Folder<StrictPolicy> f(env);
    auto out = f.fold(e);
    return std::get<0>(out);
}

Expr simplify(const Expr& e, const Env& env) {
    Folder<ExprPolicy> f(env);
    auto out = f.fold(e);
    if (out.index() == 0) return to_expr(std::get<0>(out));
    return std::get<1>(out);
}

std::optional<Value> partial_eval(const Expr& e, const Env& env) {
    Folder<UnknownPolicy> f(env);
    auto out = f.fold(e);
    if (out.index() == 0) return std::get<0>(out);
    return std::nullopt;
}

Expr assemble_aggregate(AggregateKind kind, std::span<const Expr> items) {
    AggregateOp op{kind};
    Expr identity = op.identity();
    std::vector<Expr> kept;
    kept.reserve(items.size());
    for (const auto& item : items)
        if (!structurally_equal(item, identity)) kept.push_back(item);
    if (kept.empty()) return identity;
    if (kept.size() == 1) return kept.front();
    return aggregate(kind, matrix_lit(std::move(kept)));
}

Expr substitute(const Expr& e, const std::map<std::string, Expr, std::less<>>& replacements) {
    if (e->kind == NodeKind::VarRef) {
        auto it = replacements.find(e->name);
        return it == replacements.end() ? e : it->second;
    }
    if (e->kids.empty()) return e;
    std::vector<Expr> kids;
    kids.reserve(e->kids.size());
    bool changed = false;
    for (const auto& k : e->kids) {
        kids.push_back(substitute(k, replacements));
        changed = changed || kids.back() != k;
    }
    return changed ? with_kids(e, std::move(kids)) : e;
}

}  // namespace unroll
