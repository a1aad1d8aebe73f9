#include <doctest.h>

#include <fstream>
#include <sstream>

#include "unroll/parser.hpp"
#include "unroll/printer.hpp"
#include "unroll/value.hpp"

using namespace unroll;

namespace {

std::string read_model(const std::string& name) {
    std::ifstream f(std::string(UNROLL_MODELS_DIR) + "/" + name);
    REQUIRE(f);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

template <class Fn>
Error error_of(Fn&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e;
    }
    FAIL("expected an error");
    return Error(ErrorKind::Internal, "unreachable");
}

const char* kHeader = "find m: matrix indexed by [int(1..4)] of int(1..4)\nfind x: int(1..3)\nsuch that\n";

}  // namespace

TEST_SUITE("parser") {

TEST_CASE("guard-in-return triples model") {
    Model m = parse_model(read_model("triples_inreturn.model"));
    REQUIRE(m.params.size() == 1);
    CHECK(m.params[0].name == "n");
    REQUIRE(m.decision_vars.size() == 1);
    REQUIRE(m.constraints.size() == 1);
    const Expr& c = m.constraints[0];
    REQUIRE(c->kind == NodeKind::Aggregate);
    CHECK(c->aggregate == AggregateKind::And);
    const Expr& comp = c->kids[0];
    REQUIRE(comp->kind == NodeKind::Comprehension);
    REQUIRE(comp->generators.size() == 3);
    CHECK(comp->generators[0].name == "a");
    CHECK(comp->generators[1].name == "b");
    CHECK(comp->generators[2].name == "c");
    CHECK(guards(*comp).empty());
}

TEST_CASE("forAll with shared domain") {
    Expr e = parse_expression("forAll a,b,c: int(1..n). a + b = c");
    REQUIRE(e->kind == NodeKind::Quantifier);
    CHECK(e->quantifier == QuantifierKind::ForAll);
    REQUIRE(e->generators.size() == 3);
    CHECK(e->generators[2].name == "c");
    CHECK(to_string(e->generators[0].range) == "int(1..n)");
    CHECK(to_string(e->kids[0]) == "(a + b) = c");
}

TEST_CASE("all bundled models parse, bind and print to a fixpoint") {
    for (const char* name : {"triples_forall.model", "triples_guarded.model", "triples_inreturn.model",
                             "worked_example.model"}) {
        INFO(name);
        Model m = parse_model(read_model(name));
        std::string printed = to_string(m);
        CHECK(to_string(parse_model(printed)) == printed);
        for (int n : {1, 2, 7}) {
            Bindings b;
            if (!m.params.empty()) b.emplace("n", Value(n));
            Model bound = bind_params(m, b);
            CHECK(bound.params.empty());
        }
    }
}

TEST_CASE("non-bool guard is a type error") {
    auto e = error_of([] { parse_model(std::string(kHeader) + "and([ x = 1 | i: int(1..3), i ])"); });
    CHECK(e.kind() == ErrorKind::Type);
    CHECK(e.span().valid());
}

TEST_CASE("validation errors") {
    CHECK(error_of([] { parse_model(std::string(kHeader) + "and([ m[i] = 1 | i: int(1..4), m[i] > 1 ])"); }).kind() ==
          ErrorKind::Validation);
    CHECK(error_of([] {
              parse_model(std::string(kHeader) + "and([ and([ m[j] = i | j: int(1..2)]) | i: int(1..4) ])");
          }).kind() == ErrorKind::Validation);
    CHECK(error_of([] { parse_model("find x: int(1..3)\nfind x: bool\nsuch that x"); }).kind() ==
          ErrorKind::Validation);
    CHECK(error_of([] { parse_model("find __a: int(1..3)\nsuch that __a = 1"); }).kind() == ErrorKind::Validation);
    CHECK(error_of([] { parse_model("find x: int(1..3)\nsuch that y = 1"); }).kind() == ErrorKind::Validation);
    CHECK(error_of([] { parse_model("find x: int(1..)\nsuch that x = 1"); }).kind() == ErrorKind::Validation);
    CHECK(error_of([] { parse_model("find x: int(1..3)\nsuch that x + 1"); }).kind() == ErrorKind::Type);
}

TEST_CASE("syntax errors carry a location") {
    auto e = error_of([] { parse_model("find x: int(1..3)\nsuch that\n  x = = 1"); });
    CHECK(e.kind() == ErrorKind::Syntax);
    CHECK(e.span().line == 3);
    CHECK(error_of([] { parse_expression("and([x | ])"); }).kind() == ErrorKind::Syntax);
    CHECK(error_of([] { parse_expression("99999999999999999999"); }).kind() == ErrorKind::Syntax);
}

TEST_CASE("comments and language line") {
    Model m = parse_model("language ESSENCE' 1.0\n$ comment\nfind x: int(1..3) $ trailing\nsuch that x = 2 $ end\n");
    CHECK(m.constraints.size() == 1);
}

TEST_CASE("parse_params") {
    Bindings b = parse_params("letting n be 200");
    REQUIRE(b.size() == 1);
    CHECK(b.at("n") == Value(200));
    CHECK(parse_params("").empty());
    CHECK(parse_params("$ nothing here\n").empty());

    Model m = parse_model(read_model("triples_inreturn.model"));
    CHECK(error_of([&] { parse_params("letting n be true", m); }).kind() == ErrorKind::Type);
    CHECK(error_of([&] { parse_params("letting k be 3", m); }).kind() == ErrorKind::UnknownParam);
    CHECK(error_of([] { parse_params("letting n 3"); }).kind() == ErrorKind::Syntax);
}

TEST_CASE("bind_params") {
    Model m = parse_model(read_model("triples_inreturn.model"));
    Model bound = bind_params(m, {{"n", Value(4)}});
    REQUIRE(bound.decision_vars.size() == 1);
    CHECK(to_string(bound.decision_vars[0].domain) == "matrix indexed by [int(1..4)] of int(1..2)");
    CHECK(error_of([&] { bind_params(m, {{"n", Value(0)}}); }).kind() == ErrorKind::DomainViolation);
    CHECK(error_of([&] { bind_params(m, {}); }).kind() == ErrorKind::MissingParam);
    CHECK(error_of([&] { bind_params(m, {{"n", Value(3)}, {"k", Value(1)}}); }).kind() == ErrorKind::UnknownParam);
    CHECK(error_of([&] { bind_params(m, {{"n", Value(true)}}); }).kind() == ErrorKind::Type);
}

TEST_CASE("constants are substituted") {
    Model m = parse_model("given n: int(1..)\nletting k be n + 1\nfind x: int(1..k)\nsuch that x = k");
    Model bound = bind_params(m, {{"n", Value(2)}});
    CHECK(bound.constants.empty());
    CHECK(to_string(bound.decision_vars[0].domain) == "int(1..3)");
    CHECK(to_string(bound.constraints[0]) == "x = 3");
}

}
