// Random expressions, generator models and whole models for property tests.
#pragma once

#include <random>
#include <string>
#include <vector>

#include "unroll/ast.hpp"
#include "unroll/genmodel.hpp"
#include "unroll/printer.hpp"

namespace unroll::testing {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    int range(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }
    bool chance(double p) { return std::bernoulli_distribution(p)(eng_); }
    template <class T>
    const T& pick(const std::vector<T>& xs) {
        return xs[static_cast<std::size_t>(range(0, static_cast<int>(xs.size()) - 1))];
    }

private:
    std::mt19937_64 eng_;
};

/// Expressions over scalar variables. Divisors are positive constants and
/// exponents are small constants, so evaluation never fails.
class ExprGen {
public:
    ExprGen(Rng& rng, std::vector<std::string> ints, std::vector<std::string> bools)
        : rng_(rng), ints_(std::move(ints)), bools_(std::move(bools)) {}

    Expr boolean(int depth) {
        if (depth <= 0 || rng_.chance(0.2)) return bool_leaf();
        switch (rng_.range(0, 8)) {
        case 0:
        case 1: return binop(pick_cmp(), integer(depth - 1), integer(depth - 1));
        case 2: return binop(BinOp::And, boolean(depth - 1), boolean(depth - 1));
        case 3: return binop(BinOp::Or, boolean(depth - 1), boolean(depth - 1));
        case 4: return binop(BinOp::Implies, boolean(depth - 1), boolean(depth - 1));
        case 5: return logical_not(boolean(depth - 1));
        case 6: {
            std::vector<Expr> items;
            int k = rng_.range(0, 3);
            for (int i = 0; i < k; ++i) items.push_back(boolean(depth - 1));
            return aggregate(rng_.chance(0.5) ? AggregateKind::And : AggregateKind::Or, matrix_lit(items));
        }
        case 7: {
            std::vector<Expr> items;
            int k = rng_.range(0, 3);
            for (int i = 0; i < k; ++i) items.push_back(integer(depth - 1));
            return all_diff(matrix_lit(items));
        }
        default: return binop(rng_.chance(0.5) ? BinOp::Eq : BinOp::Neq, boolean(depth - 1), boolean(depth - 1));
        }
    }

    Expr integer(int depth) {
        if (depth <= 0 || rng_.chance(0.25)) return int_leaf();
        switch (rng_.range(0, 8)) {
        case 0: return binop(BinOp::Add, integer(depth - 1), integer(depth - 1));
        case 1: return binop(BinOp::Sub, integer(depth - 1), integer(depth - 1));
        case 2: return binop(BinOp::Mul, integer(depth - 1), integer(depth - 1));
        case 3: return binop(BinOp::Div, integer(depth - 1), int_lit(rng_.range(1, 4)));
        case 4: return binop(BinOp::Mod, integer(depth - 1), int_lit(rng_.range(1, 4)));
        case 5: return binop(BinOp::Pow, small(), int_lit(rng_.range(0, 3)));
        case 6: return negate(integer(depth - 1));
        case 7: {
            std::vector<Expr> items;
            int k = rng_.range(0, 3);
            for (int i = 0; i < k; ++i) items.push_back(integer(depth - 1));
            return aggregate(rng_.chance(0.5) ? AggregateKind::Sum : AggregateKind::Product, matrix_lit(items));
        }
        default: return int_leaf();
        }
    }

private:
    BinOp pick_cmp() {
        static const std::vector<BinOp> ops = {BinOp::Eq, BinOp::Neq, BinOp::Lt, BinOp::Leq, BinOp::Gt, BinOp::Geq};
        return rng_.pick(ops);
    }
    Expr small() { return ints_.empty() || rng_.chance(0.3) ? int_lit(rng_.range(-2, 3)) : var_ref(rng_.pick(ints_)); }
    Expr int_leaf() {
        if (!ints_.empty() && rng_.chance(0.6)) return var_ref(rng_.pick(ints_));
        int v = rng_.range(-3, 5);
        return int_lit(v);
    }
    Expr bool_leaf() {
        if (!bools_.empty() && rng_.chance(0.6)) return var_ref(rng_.pick(bools_));
        return bool_lit(rng_.chance(0.5));
    }

    Rng& rng_;
    std::vector<std::string> ints_;
    std::vector<std::string> bools_;
};

/// Random generator model: 1-3 branching Int variables, 0-2 other variables,
/// 0-3 constraints.
inline GeneratorModel random_generator_model(Rng& rng) {
    GeneratorModel g;
    std::vector<std::string> ints, bools;
    int nb = rng.range(1, 3);
    for (int i = 0; i < nb; ++i) {
        std::string name = "x" + std::to_string(i + 1);
        int lo = rng.range(-2, 2);
        int hi = lo + rng.range(rng.chance(0.05) ? -1 : 0, 4);
        g.vars.push_back({name, ScalarKind::Int, {lo, hi}});
        g.branching.push_back(name);
        ints.push_back(name);
    }
    int nd = rng.range(0, 2);
    for (int i = 0; i < nd; ++i) {
        std::string name = "__Z" + std::to_string(i + 1);
        if (rng.chance(0.5)) {
            g.vars.push_back({name, ScalarKind::Bool, {0, 1}});
            bools.push_back(name);
        } else {
            int lo = rng.range(-2, 1);
            g.vars.push_back({name, ScalarKind::Int, {lo, lo + rng.range(0, 3)}});
            ints.push_back(name);
        }
    }
    ExprGen gen(rng, ints, bools);
    int nc = rng.range(0, 3);
    for (int i = 0; i < nc; ++i) g.constraints.push_back(gen.boolean(rng.range(1, 4)));
    return g;
}

/// Text of a random model with one aggregate (or allDiff) over a
/// comprehension, or a quantifier. Small: at most 3 generators, domains of
/// at most 8 values, expression depth at most 5.
class ModelGen {
public:
    explicit ModelGen(Rng& rng) : rng_(rng) {}

    std::string model_text() {
        std::string out =
            "find m: matrix indexed by [int(1..8)] of int(-2..3)\n"
            "find b: matrix indexed by [int(1..8)] of bool\n"
            "find x: int(0..5)\n"
            "find p: bool\n"
            "such that\n";
        int k = rng_.range(1, 2);
        for (int i = 0; i < k; ++i) out += (i ? ",\n  " : "  ") + to_string(constraint());
        return out + "\n";
    }

    /// One constraint containing a comprehension or quantifier.
    Expr constraint() {
        gens_.clear();
        int kind = rng_.range(0, 9);
        // products stay small so they cannot overflow
        bool product = kind == 7;
        int ng = product ? 1 : rng_.range(1, 3);
        std::vector<Generator> gens;
        static const char* names[] = {"i", "j", "k"};
        for (int g = 0; g < ng; ++g) {
            int lo = rng_.range(1, 8);
            int hi = std::min(8, lo + rng_.range(-1, product ? 2 : 7));
            gens.push_back({names[g], {int_lit(lo), int_lit(hi)}});
            gens_.push_back(names[g]);
        }
        std::vector<Expr> guards;
        int nguards = rng_.range(0, 2);
        for (int g = 0; g < nguards; ++g) guards.push_back(static_bool(2));

        if (kind <= 1) {
            // Quantifiers have no guards.
            Expr body = mixed_bool(rng_.range(1, 5));
            gens_.clear();
            return quantifier(kind == 0 ? QuantifierKind::ForAll : QuantifierKind::Exists, gens, body);
        }
        if (kind <= 4) {
            Expr c = comprehension(mixed_bool(rng_.range(1, 5)), gens, guards);
            gens_.clear();
            return aggregate(kind == 4 ? AggregateKind::Or : AggregateKind::And, c);
        }
        if (kind <= 7) {
            Expr c = comprehension(mixed_int(rng_.range(1, product ? 2 : 4)), gens, guards);
            gens_.clear();
            Expr agg = aggregate(kind == 7 ? AggregateKind::Product : AggregateKind::Sum, c);
            return binop(rng_.chance(0.5) ? BinOp::Leq : BinOp::Neq, agg, var_ref("x"));
        }
        Expr c = comprehension(mixed_int(rng_.range(1, 3)), gens, guards);
        gens_.clear();
        return all_diff(c);
    }

private:
    Expr induction() { return var_ref(rng_.pick(gens_)); }

    Expr static_int(int depth) {
        if (depth <= 0 || rng_.chance(0.3))
            return rng_.chance(0.7) ? induction() : int_lit(rng_.range(0, 4));
        switch (rng_.range(0, 4)) {
        case 0: return binop(BinOp::Add, static_int(depth - 1), static_int(depth - 1));
        case 1: return binop(BinOp::Sub, static_int(depth - 1), static_int(depth - 1));
        case 2: return binop(BinOp::Mod, static_int(depth - 1), int_lit(rng_.range(1, 3)));
        case 3: return binop(BinOp::Mul, static_int(depth - 1), int_lit(rng_.range(0, 2)));
        default: return binop(BinOp::Pow, induction(), int_lit(rng_.range(1, 2)));
        }
    }

    Expr static_bool(int depth) {
        if (depth <= 0 || rng_.chance(0.4)) {
            static const std::vector<BinOp> ops = {BinOp::Eq, BinOp::Neq, BinOp::Lt, BinOp::Leq};
            return binop(rng_.pick(ops), static_int(1), static_int(1));
        }
        switch (rng_.range(0, 2)) {
        case 0: return binop(BinOp::And, static_bool(depth - 1), static_bool(depth - 1));
        case 1: return binop(BinOp::Or, static_bool(depth - 1), static_bool(depth - 1));
        default: return logical_not(static_bool(depth - 1));
        }
    }

    Expr dyn_int(int depth) {
        if (depth <= 0 || rng_.chance(0.4)) {
            if (rng_.chance(0.15)) return var_ref("x");
            return matrix_index(var_ref("m"), {induction()});
        }
        switch (rng_.range(0, 3)) {
        case 0: return binop(BinOp::Add, mixed_int(depth - 1), mixed_int(depth - 1));
        case 1: return binop(BinOp::Mul, mixed_int(depth - 1), static_int(1));
        case 2: return binop(BinOp::Sub, dyn_int(depth - 1), mixed_int(depth - 1));
        default: return binop(BinOp::Mod, dyn_int(depth - 1), int_lit(rng_.range(1, 3)));
        }
    }

    Expr mixed_int(int depth) { return rng_.chance(0.5) ? dyn_int(depth) : static_int(depth); }

    Expr dyn_bool(int depth) {
        if (depth <= 0 || rng_.chance(0.3)) {
            switch (rng_.range(0, 3)) {
            case 0: return matrix_index(var_ref("b"), {induction()});
            case 1: return var_ref("p");
            default: {
                static const std::vector<BinOp> ops = {BinOp::Eq, BinOp::Neq, BinOp::Lt, BinOp::Leq};
                return binop(rng_.pick(ops), dyn_int(1), mixed_int(1));
            }
            }
        }
        switch (rng_.range(0, 4)) {
        case 0: return binop(BinOp::And, mixed_bool(depth - 1), mixed_bool(depth - 1));
        case 1: return binop(BinOp::Or, mixed_bool(depth - 1), mixed_bool(depth - 1));
        case 2: return binop(BinOp::Implies, static_bool(depth - 1), mixed_bool(depth - 1));
        case 3: return logical_not(dyn_bool(depth - 1));
        default: {
            std::vector<Expr> items;
            int k = rng_.range(1, 3);
            for (int i = 0; i < k; ++i) items.push_back(mixed_bool(depth - 1));
            return aggregate(rng_.chance(0.5) ? AggregateKind::Or : AggregateKind::And, matrix_lit(items));
        }
        }
    }

    Expr mixed_bool(int depth) { return rng_.chance(0.6) ? dyn_bool(depth) : static_bool(depth); }

    Rng& rng_;
    std::vector<std::string> gens_;
};

}  // namespace unroll::testing
