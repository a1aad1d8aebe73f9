#include <doctest.h>

#include "support/random_gen.hpp"
#include "unroll/eval.hpp"
#include "unroll/expand.hpp"
#include "unroll/parser.hpp"
#include "unroll/printer.hpp"

using namespace unroll;

namespace {

Scope m_scope() {
    Scope s;
    s.add({"m", Type::matrix(ScalarKind::Int, {{1, 4}}), {1, 4}});
    return s;
}

std::string expand_with(Pipeline p, const char* text, ExpansionStats* stats = nullptr) {
    Expr host = parse_expression(text);
    auto [e, s] = p == Pipeline::Naive ? expand_naive(host, m_scope())
                                       : expand_solver_aided(host, m_scope(),
                                                             p == Pipeline::SolverAidedFull ? GeneratorMode::Full
                                                                                            : GeneratorMode::Simple);
    if (stats) *stats = s;
    return to_string(e);
}

std::string flat(const std::string& model, Pipeline p, Bindings b = {}) {
    return to_string(flatten(bind_params(parse_model(model), b), p).first);
}

const char* kTriplesInReturn =
    "given n: int(1..)\n"
    "find class: matrix indexed by [int(1..n)] of int(1..2)\n"
    "such that\n"
    "  and([(a**2 + b**2 = c**2 /\\ a<=b /\\ b<=c) ->\n"
    "       or([class[a] != class[b], class[b] != class[c], class[c] != class[a]])\n"
    "      | a,b,c: int(1..n)])\n";

}  // namespace

TEST_SUITE("expand") {

TEST_CASE("lower_quantifiers") {
    CHECK(structurally_equal(lower_quantifiers(parse_expression("forAll a,b,c: int(1..n). a + b = c")),
                             parse_expression("and([a + b = c | a,b,c: int(1..n)])")));
    CHECK(structurally_equal(lower_quantifiers(parse_expression("exists i: int(1..2). q[i]")),
                             parse_expression("or([q[i] | i: int(1..2)])")));
    Expr plain = parse_expression("x + 1 = y");
    CHECK(structurally_equal(lower_quantifiers(plain), plain));
}

TEST_CASE("examples give the same output on every pipeline") {
    for (Pipeline p : kAllPipelines) {
        INFO(pipeline_name(p));
        CHECK(expand_with(p, "and([ m[i]=i | i: int(1..4), i%2=0 ])") == "and([m[2] = 2, m[4] = 4])");
        CHECK(expand_with(p, "and([ (i%2=0) -> (m[i]=i) | i: int(1..2) ])") == "m[2] = 2");
        CHECK(expand_with(p, "sum([ i | i: int(1..3), i>3 ])") == "0");
        CHECK(expand_with(p, "allDiff([ m[i] | i: int(1..4), i != 2 ])") == "allDiff([m[1], m[3], m[4]])");
        CHECK(expand_with(p, "allDiff([ 0 * m[i] | i: int(1..2)])") == "allDiff([0, 0])");
    }
}

TEST_CASE("second example cross-checked by evaluation") {
    Expr original = parse_expression("and([ (i%2=0) -> (m[i]=i) | i: int(1..2) ])");
    Expr expanded = expand_naive(original, m_scope()).first;
    for (int m1 = 1; m1 <= 4; ++m1)
        for (int m2 = 1; m2 <= 4; ++m2) {
            auto mv = std::make_shared<MatrixValue>();
            mv->ranges = {{1, 4}};
            mv->items = {Value(m1), Value(m2), Value(1), Value(1)};
            Env env{{"m", Value(std::shared_ptr<const MatrixValue>(mv))}};
            CHECK(eval_static(expanded, env) == eval_static(original, env));
        }
}

TEST_CASE("combination counts") {
    ExpansionStats s;
    expand_with(Pipeline::Naive, "and([ m[i]=i | i: int(1..4), i%2=0 ])", &s);
    CHECK(s.combinations_considered == 4);
    CHECK(s.items_emitted == 2);
    expand_with(Pipeline::SolverAidedSimple, "and([ m[i]=i | i: int(1..4), i%2=0 ])", &s);
    CHECK(s.combinations_considered == 2);

    expand_with(Pipeline::SolverAidedFull, "and([ m[i]=0 | i: int(1..3) ])", &s);
    CHECK(s.combinations_considered == 3);
    CHECK(s.items_emitted == 3);

    // lifted guard: only i = 2 survives
    expand_with(Pipeline::SolverAidedSimple, "and([ (i%2=0 /\\ i < 3) -> m[i]=i | i: int(1..4) ])", &s);
    CHECK(s.combinations_considered == 4);
    CHECK(s.items_discarded_as_identity == 3);
    expand_with(Pipeline::SolverAidedFull, "and([ (i%2=0 /\\ i < 3) -> m[i]=i | i: int(1..4) ])", &s);
    CHECK(s.combinations_considered == 1);
}

TEST_CASE("flatten") {
    CHECK(flat("find x: int(1..3)\nsuch that\n", Pipeline::Naive) == "find x: int(1..3)\nsuch that\n  true\n");
    std::string worked = "find m: matrix indexed by [int(1..4)] of int(1..4)\nsuch that\n"
                         "  and([ m[i] = i | i: int(1..4), i % 2 = 0 ])\n";
    for (Pipeline p : kAllPipelines)
        CHECK(flat(worked, p) ==
              "find m: matrix indexed by [int(1..4)] of int(1..4)\nsuch that\n  m[2] = 2,\n  m[4] = 4\n");

    auto [fm, stats] = flatten(bind_params(parse_model(kTriplesInReturn), {{"n", Value(5)}}), Pipeline::Naive);
    REQUIRE(fm.constraints.size() == 1);
    CHECK(to_string(fm.constraints[0]) ==
          "or([class[3] != class[4], class[4] != class[5], class[5] != class[3]])");
    CHECK(stats.combinations_considered == 125);
}

TEST_CASE("triples n=20 in full mode") {
    auto [fm, stats] =
        flatten(bind_params(parse_model(kTriplesInReturn), {{"n", Value(20)}}), Pipeline::SolverAidedFull);
    CHECK(fm.constraints.size() == 6);
    CHECK(stats.combinations_considered == 6);
}

TEST_CASE("top-level conjunctions are split") {
    CHECK(flat("find x: int(1..3)\nfind p: bool\nsuch that\n  (x = 2 /\\ p) /\\ and([x > 0, true])", Pipeline::Naive) ==
          "find x: int(1..3)\nfind p: bool\nsuch that\n  x = 2,\n  p,\n  x > 0\n");
}

TEST_CASE("pass-through constraints are simplified") {
    CHECK(flat("find x: int(1..3)\nsuch that\n  x + 0 = 2 /\\ true", Pipeline::SolverAidedFull) ==
          "find x: int(1..3)\nsuch that\n  x = 2\n");
}

TEST_CASE("evaluation errors surface from every pipeline") {
    const char* model = "find m: matrix indexed by [int(1..4)] of int(1..4)\nsuch that\n"
                        "  and([ m[i] = 4 / (i - 2) | i: int(1..4) ])";
    for (Pipeline p : kAllPipelines) {
        try {
            flat(model, p);
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::DivByZero);
        }
    }
}

TEST_CASE("random models: pipelines agree and full never considers more") {
    testing::Rng rng(8080);
    testing::ModelGen gen(rng);
    for (int round = 0; round < 200; ++round) {
        std::string text = gen.model_text();
        INFO(text);
        Model bound = bind_params(parse_model(text), {});
        auto [naive, ns] = flatten(bound, Pipeline::Naive);
        auto [simple, ss] = flatten(bound, Pipeline::SolverAidedSimple);
        auto [full, fs] = flatten(bound, Pipeline::SolverAidedFull);
        std::string expected = to_string(naive);
        CHECK(to_string(simple) == expected);
        CHECK(to_string(full) == expected);
        CHECK(fs.combinations_considered <= ns.combinations_considered);
        CHECK(ss.combinations_considered <= ns.combinations_considered);
        for (const auto& c : full.constraints) {
            CHECK_FALSE(contains_kind(c, NodeKind::Comprehension));
            CHECK_FALSE(contains_kind(c, NodeKind::Quantifier));
        }
    }
}

TEST_CASE("explicit guards only: simple and full consider the same combinations") {
    const char* model =
        "given n: int(1..)\nfind class: matrix indexed by [int(1..n)] of int(1..2)\nsuch that\n"
        "  and([or([class[a] != class[b], class[b] != class[c], class[c] != class[a]])\n"
        "      | a,b,c: int(1..n), a<=b, b<=c, a**2+b**2=c**2])";
    Model bound = bind_params(parse_model(model), {{"n", Value(30)}});
    CHECK(flatten(bound, Pipeline::SolverAidedSimple).second.combinations_considered ==
          flatten(bound, Pipeline::SolverAidedFull).second.combinations_considered);
    Model inret = bind_params(parse_model(kTriplesInReturn), {{"n", Value(30)}});
    CHECK(flatten(inret, Pipeline::SolverAidedFull).second.combinations_considered <
          flatten(inret, Pipeline::SolverAidedSimple).second.combinations_considered);
}

}
