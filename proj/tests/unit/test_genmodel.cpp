#include <doctest.h>

#include "unroll/genmodel.hpp"
#include "unroll/parser.hpp"
#include "unroll/printer.hpp"

using namespace unroll;

namespace {

Scope m_scope() {
    Scope s;
    s.add({"m", Type::matrix(ScalarKind::Int, {{1, 4}}), {1, 4}});
    return s;
}

}  // namespace

TEST_SUITE("genmodel") {

TEST_CASE("simple mode keeps the explicit guards only") {
    Expr host = parse_expression("and([ m[i] = i | i: int(1..4), i % 2 = 0 ])");
    GeneratorModel g = build_generator_model(host, GeneratorMode::Simple, m_scope());
    REQUIRE(g.vars.size() == 1);
    CHECK(g.vars[0].name == "i");
    CHECK(g.vars[0].domain == IntRange{1, 4});
    CHECK(g.branching == std::vector<std::string>{"i"});
    REQUIRE(g.constraints.size() == 1);
    CHECK(structurally_equal(g.constraints[0], parse_expression("i % 2 = 0")));
    CHECK_FALSE(g.rewrite.has_value());
    CHECK(to_string(g) == "find i: int(1..4)\nbranching on [i]\nsuch that\n  (i % 2) = 0\n");
}

TEST_CASE("full mode lifts the return expression") {
    Expr host = parse_expression("and([ !(i % 2 = 0 /\\ m[i] % 2 = 0) \\/ m[i] = i | i: int(1..4) ])");
    GeneratorModel g = build_generator_model(host, GeneratorMode::Full, m_scope());
    REQUIRE(g.vars.size() == 3);
    CHECK(g.vars[0].name == "i");
    CHECK(g.vars[1].name == "__Z1");
    CHECK(g.vars[1].kind == ScalarKind::Bool);
    CHECK(g.vars[2].name == "__Z2");
    CHECK(g.branching == std::vector<std::string>{"i"});
    REQUIRE(g.constraints.size() == 1);
    CHECK(structurally_equal(g.constraints[0], parse_expression("!(!(i % 2 = 0 /\\ __Z1) \\/ __Z2)")));
    CHECK(to_string(g).find("find __Z1, __Z2: bool\nbranching on [i]") != std::string::npos);
}

TEST_CASE("identity constraint per aggregate") {
    Scope s = m_scope();
    auto last = [&](const char* text) {
        return to_string(build_generator_model(parse_expression(text), GeneratorMode::Full, s).constraints.back());
    };
    CHECK(last("or([ m[i] = i | i: int(1..4) ])") == "__Z1");
    CHECK(last("sum([ m[i] | i: int(1..4) ])") == "__Z1 != 0");
    CHECK(last("product([ m[i] | i: int(1..4) ])") == "__Z1 != 1");
}

TEST_CASE("allDiff is never lifted") {
    Expr host = parse_expression("allDiff([ m[i] + i | i: int(1..4), i > 1 ])");
    for (GeneratorMode mode : {GeneratorMode::Simple, GeneratorMode::Full}) {
        GeneratorModel g = build_generator_model(host, mode, m_scope());
        CHECK(g.vars.size() == 1);
        REQUIRE(g.constraints.size() == 1);
        CHECK(structurally_equal(g.constraints[0], parse_expression("i > 1")));
        CHECK_FALSE(g.rewrite.has_value());
    }
}

TEST_CASE("fully dynamic return expression degenerates to one dummy") {
    Expr host = parse_expression("and([ m[i] = 0 | i: int(1..3) ])");
    GeneratorModel g = build_generator_model(host, GeneratorMode::Full, m_scope());
    REQUIRE(g.constraints.size() == 1);
    CHECK(to_string(g.constraints[0]) == "!__Z1");
}

TEST_CASE("induction vars in generator order") {
    Expr comp = parse_expression("[ a + b | b: int(1..2), a: int(3..5) ]");
    auto iv = induction_vars_of(*comp);
    REQUIRE(iv.size() == 2);
    CHECK(iv[0].first == "b");
    CHECK(iv[1].second == IntRange{3, 5});
}

}
