#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>

#include "unroll/ast.hpp"

namespace unroll {

/// Integer interval with saturating bounds. Bounds at or beyond +-kInfinity
/// mean "unbounded"; arithmetic never overflows.
struct Interval {
    static constexpr std::int64_t kInfinity = std::int64_t{1} << 62;

    std::int64_t lo = -kInfinity;
    std::int64_t hi = kInfinity;

    static Interval point(std::int64_t v) { return {v, v}; }
    static Interval all() { return {}; }
    static Interval of(const IntRange& r) { return {r.lo, r.hi}; }

    bool empty() const { return lo > hi; }
    bool is_point() const { return lo == hi; }
    bool bounded() const { return lo > -kInfinity && hi < kInfinity; }
    bool contains(std::int64_t v) const { return lo <= v && v <= hi; }

    friend bool operator==(const Interval&, const Interval&) = default;
};

Interval intersect(Interval a, Interval b);
Interval hull(Interval a, Interval b);
Interval operator+(Interval a, Interval b);
Interval operator-(Interval a, Interval b);
Interval operator-(Interval a);
Interval operator*(Interval a, Interval b);
Interval floor_div(Interval a, Interval b);
Interval floor_mod(Interval a, Interval b);
Interval power(Interval base, Interval exponent);

/// Values x with x * k in `target`, for a constant k != 0.
Interval exact_quotient(Interval target, std::int64_t k);
/// Values x with x ** k in `target`, for a constant k >= 1, within `x`.
Interval root_preimage(Interval target, std::int64_t k, Interval x);

/// Range of integer values `e` can take when each name ranges over what
/// `range_of` reports (nullopt: unknown, treated as unbounded). Bool
/// subexpressions are [0, 1].
using NameRanges = std::function<std::optional<Interval>(std::string_view)>;
Interval interval_of(const Expr& e, const NameRanges& range_of);

}  // namespace unroll
