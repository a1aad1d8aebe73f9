#include <doctest.h>

#include "support/random_gen.hpp"
#include "unroll/eval.hpp"
#include "unroll/fdsolver.hpp"
#include "unroll/genmodel.hpp"
#include "unroll/parser.hpp"
#include "unroll/printer.hpp"
#include "unroll/rewrite.hpp"

using namespace unroll;

namespace {

Scope matrix_scope(const std::string& name, std::int64_t n, IntRange values) {
    Scope s;
    s.add({name, Type::matrix(ScalarKind::Int, {{1, n}}), values});
    return s;
}

InductionVars ivars(std::initializer_list<std::string> names, IntRange r = {1, 4}) {
    InductionVars out;
    for (const auto& n : names) out.push_back({n, r});
    return out;
}

}  // namespace

TEST_SUITE("rewrite") {

TEST_CASE("classify") {
    CHECK(classify(parse_expression("b % 3 = 0"), ivars({"a", "b"})) == Staticness::Static);
    CHECK(classify(parse_expression("m[i] % 2 = 0"), ivars({"i"})) == Staticness::Dynamic);
    CHECK(classify(parse_expression("__Z1"), ivars({})) == Staticness::Static);
    CHECK(classify(parse_expression("m[1]"), ivars({"i"})) == Staticness::Dynamic);
}

TEST_CASE("two dummies replace the two dynamic comparisons") {
    Scope scope = matrix_scope("m", 4, {1, 4});
    auto r = lift_static_guard(parse_expression("!(i % 2 = 0 /\\ m[i] % 2 = 0) \\/ (m[i] = i)"), ivars({"i"}),
                               Type::boolean(), scope);
    CHECK(structurally_equal(r.rewritten, parse_expression("!(i % 2 = 0 /\\ __Z1) \\/ __Z2")));
    REQUIRE(r.dummies.size() == 2);
    CHECK(r.dummies[0].name == "__Z1");
    CHECK(r.dummies[1].name == "__Z2");
    CHECK(r.dummies[0].declared_type == Type::boolean());
    REQUIRE(r.replaced.size() == 2);
    CHECK(structurally_equal(r.replaced[0].second, parse_expression("m[i] % 2 = 0")));
    CHECK(structurally_equal(r.replaced[1].second, parse_expression("m[i] = i")));
}

TEST_CASE("a conjunction without induction occurrences becomes one dummy") {
    Scope scope = matrix_scope("m", 4, {1, 4});
    scope.add({"i", Type::integer(), {1, 4}});
    auto r = lift_static_guard(parse_expression("m[i] % 2 = 0 /\\ m[i] % 3 = 0"), ivars({"j"}), Type::boolean(),
                               scope);
    CHECK(to_string(r.rewritten) == "__Z1");
    CHECK(r.dummies.size() == 1);
}

TEST_CASE("static input is unchanged") {
    Expr e = parse_expression("i < 3");
    auto r = lift_static_guard(e, ivars({"i"}), Type::boolean(), {});
    CHECK(structurally_equal(r.rewritten, e));
    CHECK(r.dummies.empty());
}

TEST_CASE("triples return expression") {
    Scope scope = matrix_scope("class", 20, {1, 2});
    Expr e = parse_expression(
        "(a**2+b**2=c**2 /\\ a<=b /\\ b<=c) -> or([class[a]!=class[b], class[b]!=class[c], class[c]!=class[a]])");
    auto r = lift_static_guard(e, ivars({"a", "b", "c"}, {1, 20}), Type::boolean(), scope);
    CHECK(structurally_equal(r.rewritten, parse_expression("(a**2+b**2=c**2 /\\ a<=b /\\ b<=c) -> __Z1")));
    REQUIRE(r.dummies.size() == 1);
    CHECK(r.replaced[0].second->kind == NodeKind::Aggregate);
}

TEST_CASE("wrong-typed dynamic node walks up to a dummy-typed ancestor") {
    Scope scope = matrix_scope("m", 4, {1, 4});
    auto r = lift_static_guard(parse_expression("i > 1 /\\ m[i] + i = 3"), ivars({"i"}), Type::boolean(), scope);
    CHECK(structurally_equal(r.rewritten, parse_expression("i > 1 /\\ __Z1")));
    CHECK(structurally_equal(r.replaced[0].second, parse_expression("m[i] + i = 3")));
}

TEST_CASE("int dummies get interval domains") {
    Scope scope = matrix_scope("m", 4, {1, 4});
    auto r = lift_static_guard(parse_expression("(i % 2) * (m[i] + 1)"), ivars({"i"}), Type::integer(), scope);
    CHECK(structurally_equal(r.rewritten, parse_expression("(i % 2) * __Z1")));
    REQUIRE(r.dummies.size() == 1);
    CHECK(r.dummies[0].declared_type == Type::integer());
    CHECK(r.dummies[0].domain == IntRange{2, 5});
}

TEST_CASE("reconstruction, staticness and typing on random return expressions") {
    testing::Rng rng(31337);
    testing::ModelGen gen(rng);
    Scope scope;
    scope.add({"m", Type::matrix(ScalarKind::Int, {{1, 8}}), {-2, 3}});
    scope.add({"b", Type::matrix(ScalarKind::Bool, {{1, 8}}), {0, 1}});
    scope.add({"x", Type::integer(), {0, 5}});
    scope.add({"p", Type::boolean(), {0, 1}});
    int rewritten = 0;
    for (int round = 0; round < 1000; ++round) {
        Expr c = gen.constraint();
        Expr host = c->kind == NodeKind::BinOp ? c->kids[0] : c;
        if (host->kind == NodeKind::Quantifier || host->kind == NodeKind::AllDiff) continue;
        const Node& comp = *host->kids[0];
        InductionVars iv = induction_vars_of(comp);
        Type t = AggregateOp{host->aggregate}.element_type();
        auto r = lift_static_guard(return_expr(comp), iv, t, scope);
        INFO(to_string(return_expr(comp)));
        CHECK(structurally_equal(reconstruct(r), return_expr(comp)));
        CHECK(classify(r.rewritten, iv) == Staticness::Static);
        CHECK(r.dummies.size() == r.replaced.size());
        for (std::size_t i = 0; i < r.dummies.size(); ++i) {
            CHECK(r.dummies[i].name == "__Z" + std::to_string(i + 1));
            CHECK(r.dummies[i].declared_type == t);
        }
        rewritten += !r.dummies.empty();
    }
    CHECK(rewritten > 100);
}

// For each induction assignment whose item is not the identity for some
// decision-variable assignment, the generator model (with exhaustive witness
// search) must have a solution.
TEST_CASE("dummy lifting only weakens") {
    Scope scope;
    scope.add({"x", Type::integer(), {0, 2}});
    scope.add({"y", Type::integer(), {-1, 1}});
    scope.add({"p", Type::boolean(), {0, 1}});
    testing::Rng rng(4242);
    int nonempty = 0;
    for (int round = 0; round < 300; ++round) {
        testing::ExprGen eg(rng, {"i", "j", "x", "y"}, {"p"});
        AggregateKind kind = static_cast<AggregateKind>(rng.range(0, 3));
        AggregateOp op{kind};
        Expr ret = op.element_kind() == ScalarKind::Bool ? eg.boolean(rng.range(1, 4)) : eg.integer(rng.range(1, 3));
        std::vector<Generator> gens{{"i", {int_lit(1), int_lit(3)}}, {"j", {int_lit(0), int_lit(2)}}};
        Expr host = aggregate(kind, comprehension(ret, gens, {}));
        GeneratorModel g = build_generator_model(host, GeneratorMode::Full, scope);
        auto sols = solve_all(g, {});
        INFO(to_string(ret));
        INFO(to_string(g));

        std::size_t next = 0;
        for (int i = 1; i <= 3; ++i)
            for (int j = 0; j <= 2; ++j) {
                bool relevant = false;
                for (int x = 0; x <= 2 && !relevant; ++x)
                    for (int y = -1; y <= 1 && !relevant; ++y)
                        for (int p = 0; p <= 1 && !relevant; ++p) {
                            Env env{{"i", Value(i)}, {"j", Value(j)}, {"x", Value(x)},
                                    {"y", Value(y)}, {"p", Value(p != 0)}};
                            relevant = eval_static(ret, env).as_scalar() != op.identity_value();
                        }
                bool found = false;
                for (const auto& a : sols)
                    if (a["i"] == Value(i) && a["j"] == Value(j)) found = true;
                if (relevant) CHECK(found);
                next += found;
            }
        nonempty += next > 0;
    }
    CHECK(nonempty > 50);
}

}
