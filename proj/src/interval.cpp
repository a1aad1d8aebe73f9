#include "unroll/interval.hpp"

#include <algorithm>

namespace unroll {

namespace {

using Wide = __int128;
constexpr std::int64_t kInf = Interval::kInfinity;

std::int64_t sat(Wide v) {
    if (v >= kInf) return kInf;
    if (v <= -kInf) return -kInf;
    return static_cast<std::int64_t>(v);
}

const Interval kEmpty{1, 0};

Wide floor_div_wide(Wide a, Wide b) {
    Wide q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

Wide ceil_div_wide(Wide a, Wide b) { return -floor_div_wide(-a, b); }

// |v|**k, saturated.
std::int64_t sat_pow(std::int64_t v, std::int64_t k) {
    Wide r = 1;
    for (std::int64_t i = 0; i < k; ++i) {
        r *= v;
        if (r >= kInf) return kInf;
        if (r <= -kInf) return -kInf;
    }
    return static_cast<std::int64_t>(r);
}

// Largest r >= 0 with r**k <= v (v >= 0).
std::int64_t floor_root(std::int64_t v, std::int64_t k) {
    if (v >= kInf) return kInf;
    std::int64_t lo = 0, hi = 1;
    while (sat_pow(hi, k) <= v) hi *= 2;
    while (hi - lo > 1) {
        std::int64_t mid = lo + (hi - lo) / 2;
        if (sat_pow(mid, k) <= v) lo = mid;
        else hi = mid;
    }
    return lo;
}

// Smallest r >= 0 with r**k >= v (v >= 0).
std::int64_t ceil_root(std::int64_t v, std::int64_t k) {
    if (v >= kInf) return kInf;
    std::int64_t r = floor_root(v, k);
    return sat_pow(r, k) == v ? r : r + 1;
}

Interval power_point(Interval b, std::int64_t k) {
    if (k == 0) return Interval::point(1);
    if (k % 2 == 1) return {sat_pow(b.lo, k), sat_pow(b.hi, k)};
    std::int64_t a = std::min(std::abs(b.lo), std::abs(b.hi));
    std::int64_t c = std::max(std::abs(b.lo), std::abs(b.hi));
    if (b.contains(0)) a = 0;
    return {sat_pow(a, k), sat_pow(c, k)};
}

// floor(a / b) for b entirely on one side of zero.
Interval div_one_sign(Interval a, Interval b) {
    Wide c[] = {floor_div_wide(a.lo, b.lo), floor_div_wide(a.lo, b.hi), floor_div_wide(a.hi, b.lo),
                floor_div_wide(a.hi, b.hi)};
    return {sat(*std::min_element(c, c + 4)), sat(*std::max_element(c, c + 4))};
}

}  // namespace

Interval intersect(Interval a, Interval b) { return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)}; }

Interval hull(Interval a, Interval b) {
    if (a.empty()) return b;
    if (b.empty()) return a;
    return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

Interval operator+(Interval a, Interval b) {
    if (a.empty() || b.empty()) return kEmpty;
    // an unbounded side stays unbounded
    std::int64_t lo = a.lo <= -kInf || b.lo <= -kInf ? -kInf : sat(Wide(a.lo) + b.lo);
    std::int64_t hi = a.hi >= kInf || b.hi >= kInf ? kInf : sat(Wide(a.hi) + b.hi);
    return {lo, hi};
}

Interval operator-(Interval a) {
    if (a.empty()) return kEmpty;
    return {-a.hi, -a.lo};
}

Interval operator-(Interval a, Interval b) { return a + (-b); }

Interval operator*(Interval a, Interval b) {
    if (a.empty() || b.empty()) return kEmpty;
    Wide c[] = {Wide(a.lo) * b.lo, Wide(a.lo) * b.hi, Wide(a.hi) * b.lo, Wide(a.hi) * b.hi};
    return {sat(*std::min_element(c, c + 4)), sat(*std::max_element(c, c + 4))};
}

Interval floor_div(Interval a, Interval b) {
    if (a.empty() || b.empty()) return kEmpty;
    if (!a.bounded()) return Interval::all();
    Interval out = kEmpty;
    Interval pos = intersect(b, {1, kInf});
    Interval neg = intersect(b, {-kInf, -1});
    if (!pos.empty()) out = hull(out, div_one_sign(a, pos));
    if (!neg.empty()) out = hull(out, div_one_sign(a, neg));
    return out;
}

Interval floor_mod(Interval a, Interval b) {
    if (a.empty() || b.empty()) return kEmpty;
    if (b.is_point() && b.lo > 0 && a.bounded() &&
        floor_div_wide(a.lo, b.lo) == floor_div_wide(a.hi, b.lo)) {
        Wide lo = a.lo - floor_div_wide(a.lo, b.lo) * b.lo;
        return {sat(lo), sat(lo + (Wide(a.hi) - a.lo))};
    }
    Interval out = kEmpty;
    if (b.hi > 0) out = hull(out, {0, b.hi >= kInf ? kInf : b.hi - 1});
    if (b.lo < 0) out = hull(out, {b.lo <= -kInf ? -kInf : b.lo + 1, 0});
    return out;
}

Interval power(Interval base, Interval exponent) {
    if (base.empty() || exponent.empty()) return kEmpty;
    exponent = intersect(exponent, {0, kInf});
    if (exponent.empty()) return kEmpty;
    if (!base.bounded() || exponent.hi > 62) {
        if (base.lo >= 0 && base.hi <= 1) return {0, 1};
        return Interval::all();
    }
    Interval out = kEmpty;
    for (std::int64_t k = exponent.lo; k <= exponent.hi; ++k) out = hull(out, power_point(base, k));
    return out;
}

Interval exact_quotient(Interval target, std::int64_t k) {
    if (target.empty()) return kEmpty;
    auto bound = [&](std::int64_t t, bool ceil) -> std::int64_t {
        if (t >= kInf) return k > 0 ? kInf : -kInf;
        if (t <= -kInf) return k > 0 ? -kInf : kInf;
        return sat(ceil ? ceil_div_wide(t, k) : floor_div_wide(t, k));
    };
    if (k > 0) return {bound(target.lo, true), bound(target.hi, false)};
    return {bound(target.hi, true), bound(target.lo, false)};
}

Interval root_preimage(Interval target, std::int64_t k, Interval x) {
    if (target.empty() || x.empty()) return kEmpty;
    if (k == 1) return intersect(target, x);
    if (k % 2 == 1) {
        // Monotone: x**k in [lo, hi] iff x in [ceil_root(lo), floor_root(hi)].
        std::int64_t lo = target.lo >= 0 ? ceil_root(target.lo, k) : -floor_root(-target.lo, k);
        std::int64_t hi = target.hi >= 0 ? floor_root(target.hi, k) : -ceil_root(-target.hi, k);
        return intersect({lo, hi}, x);
    }
    if (target.hi < 0) return kEmpty;
    std::int64_t inner = ceil_root(std::max<std::int64_t>(target.lo, 0), k);
    std::int64_t outer = floor_root(target.hi, k);
    if (inner > outer) return kEmpty;
    return hull(intersect({inner, outer}, x), intersect({-outer, -inner}, x));
}

Interval interval_of(const Expr& e, const NameRanges& range_of) {
    const Node& n = *e;
    auto known = [&](std::string_view name) {
        auto r = range_of(name);
        return r ? *r : Interval::all();
    };
    switch (n.kind) {
    case NodeKind::IntLit: return Interval::point(n.int_value);
    case NodeKind::BoolLit: return Interval::point(n.int_value);
    case NodeKind::VarRef: return known(n.name);
    case NodeKind::MatrixIndex: {
        const Node& base = *n.kids[0];
        if (base.kind == NodeKind::VarRef) return known(base.name);
        if (base.kind == NodeKind::MatrixLit) {
            Interval out = kEmpty;
            for (const auto& item : base.kids) out = hull(out, interval_of(item, range_of));
            return out.empty() ? Interval::all() : out;
        }
        return Interval::all();
    }
    case NodeKind::Neg: return -interval_of(n.kids[0], range_of);
    case NodeKind::BinOp: {
        if (!is_arithmetic(n.op)) return {0, 1};
        Interval a = interval_of(n.kids[0], range_of);
        Interval b = interval_of(n.kids[1], range_of);
        switch (n.op) {
        case BinOp::Add: return a + b;
        case BinOp::Sub: return a - b;
        case BinOp::Mul: return a * b;
        case BinOp::Div: return floor_div(a, b);
        case BinOp::Mod: return floor_mod(a, b);
        case BinOp::Pow: return power(a, b);
        default: break;
        }
        return Interval::all();
    }
    case NodeKind::Aggregate: {
        if (n.aggregate == AggregateKind::And || n.aggregate == AggregateKind::Or) return {0, 1};
        const Node& list = *n.kids[0];
        if (list.kind != NodeKind::MatrixLit) return Interval::all();
        bool sum = n.aggregate == AggregateKind::Sum;
        Interval acc = Interval::point(sum ? 0 : 1);
        for (const auto& item : list.kids) {
            Interval x = interval_of(item, range_of);
            acc = sum ? acc + x : acc * x;
        }
        return acc;
    }
    case NodeKind::Not:
    case NodeKind::AllDiff:
    case NodeKind::Quantifier:
        return {0, 1};
    case NodeKind::MatrixLit:
    case NodeKind::Comprehension:
        break;
    }
    return Interval::all();
}

}  // namespace unroll
