#include "unroll/parser.hpp"

#include <cctype>
#include <limits>
#include <set>

#include "unroll/eval.hpp"
#include "unroll/printer.hpp"

namespace unroll {

namespace {

// ---------------------------------------------------------------------------
// Lexer

enum class Tok {
    Ident,
    Int,
    Punct,
    End,
};

struct Token {
    Tok kind = Tok::End;
    std::string text;
    std::uint64_t number = 0;
    SourceSpan span;
};

// Longest first.
constexpr std::string_view kPuncts[] = {
    "/\\", "\\/", "->", "**", "..", "<=", ">=", "!=", "=", "<", ">", "+", "-", "*",
    "/",   "%",   "!",  "(",  ")",  "[",  "]",  ",",  ":", ".", "|",
};

class Lexer {
public:
    Lexer(std::string_view text, std::shared_ptr<const std::string> file) : text_(text), file_(std::move(file)) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (true) {
            skip_space();
            Token t;
            t.span = here();
            if (pos_ >= text_.size()) {
                out.push_back(std::move(t));
                return out;
            }
            char c = text_[pos_];
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                std::size_t start = pos_;
                while (pos_ < text_.size() &&
                       (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                    advance();
                t.kind = Tok::Ident;
                t.text = std::string(text_.substr(start, pos_ - start));
                // `language ESSENCE' 1.0` header: skipped, it may hold characters we do not lex.
                if (out.empty() && t.text == "language") {
                    while (pos_ < text_.size() && text_[pos_] != '\n') advance();
                    continue;
                }
            } else if (std::isdigit(static_cast<unsigned char>(c))) {
                std::size_t start = pos_;
                std::uint64_t v = 0;
                bool too_big = false;
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                    std::uint64_t d = static_cast<std::uint64_t>(text_[pos_] - '0');
                    if (v > (std::numeric_limits<std::uint64_t>::max() - d) / 10) too_big = true;
                    v = v * 10 + d;
                    advance();
                }
                t.kind = Tok::Int;
                t.text = std::string(text_.substr(start, pos_ - start));
                if (too_big || v > std::uint64_t{1} << 63)
                    throw Error(ErrorKind::Syntax, "integer literal too large: " + t.text, t.span);
                t.number = v;
            } else {
                bool matched = false;
                for (auto p : kPuncts) {
                    if (text_.substr(pos_).starts_with(p)) {
                        t.kind = Tok::Punct;
                        t.text = std::string(p);
                        for (std::size_t i = 0; i < p.size(); ++i) advance();
                        matched = true;
                        break;
                    }
                }
                if (!matched)
                    throw Error(ErrorKind::Syntax, std::string("unexpected character '") + c + "'", t.span);
            }
            t.span.end = pos_;
            out.push_back(std::move(t));
        }
    }

private:
    SourceSpan here() const {
        SourceSpan s;
        s.file = file_;
        s.line = line_;
        s.column = column_;
        s.begin = s.end = pos_;
        return s;
    }

    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    }

    void skip_space() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '$') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                return;
            }
        }
    }

    std::string_view text_;
    std::shared_ptr<const std::string> file_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int column_ = 1;
};

const std::set<std::string, std::less<>>& keywords() {
    static const std::set<std::string, std::less<>> k = {
        "given", "letting", "find", "such", "that", "be", "true", "false", "int", "bool", "matrix",
        "indexed", "by", "of", "forAll", "exists", "and", "or", "sum", "product", "allDiff", "language",
    };
    return k;
}

// ---------------------------------------------------------------------------
// Parser

class Parser {
public:
    Parser(std::string_view text, const std::string& file_name)
        : file_(std::make_shared<const std::string>(file_name)), toks_(Lexer(text, file_).run()) {}

    Model model();
    Expr expression_only() {
        Expr e = expr();
        expect_end();
        return e;
    }
    std::vector<std::pair<std::string, Expr>> lettings();

private:
    const Token& peek(std::size_t ahead = 0) const {
        return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
    }
    bool at(std::string_view text, std::size_t ahead = 0) const {
        const Token& t = peek(ahead);
        return t.kind != Tok::End && t.kind != Tok::Int && t.text == text;
    }
    bool at_end() const { return peek().kind == Tok::End; }
    bool accept(std::string_view text) {
        if (!at(text)) return false;
        ++pos_;
        return true;
    }
    [[noreturn]] void fail(const std::string& what) const {
        const Token& t = peek();
        std::string got = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
        throw Error(ErrorKind::Syntax, "expected " + what + ", found " + got, t.span);
    }
    const Token& expect(std::string_view text) {
        if (!at(text)) fail("'" + std::string(text) + "'");
        return toks_[pos_++];
    }
    void expect_end() {
        if (!at_end()) fail("end of input");
    }
    std::string name(const char* what = "a name") {
        const Token& t = peek();
        if (t.kind != Tok::Ident || keywords().count(t.text)) fail(what);
        ++pos_;
        return t.text;
    }
    SourceSpan span_from(const SourceSpan& start) const {
        SourceSpan s = start;
        s.end = pos_ > 0 ? toks_[pos_ - 1].span.end : start.end;
        return s;
    }

    std::vector<std::pair<std::string, SourceSpan>> name_list();
    DomainDecl domain();
    RangeExpr int_range(bool allow_open);
    std::vector<Generator> generator_group();
    bool generator_group_ahead() const;

    Expr expr() { return implication(); }
    Expr implication();
    Expr disjunction();
    Expr conjunction();
    Expr negation();
    Expr comparison();
    Expr additive();
    Expr multiplicative();
    Expr unary();
    Expr power();
    Expr postfix();
    Expr primary();
    Expr bracket(const SourceSpan& start);
    Expr list_argument();

    std::shared_ptr<const std::string> file_;
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

std::vector<std::pair<std::string, SourceSpan>> Parser::name_list() {
    std::vector<std::pair<std::string, SourceSpan>> names;
    do {
        SourceSpan s = peek().span;
        names.emplace_back(name(), s);
    } while (accept(","));
    return names;
}

RangeExpr Parser::int_range(bool allow_open) {
    expect("int");
    expect("(");
    RangeExpr r;
    r.lo = expr();
    expect("..");
    if (!at(")")) {
        r.hi = expr();
    } else if (!allow_open) {
        fail("an upper bound");
    }
    expect(")");
    return r;
}

DomainDecl Parser::domain() {
    DomainDecl d;
    d.span = peek().span;
    if (accept("matrix")) {
        expect("indexed");
        expect("by");
        expect("[");
        do {
            d.index.push_back(int_range(false));
        } while (accept(","));
        expect("]");
        expect("of");
    }
    if (accept("bool")) {
        d.element = ScalarKind::Bool;
    } else if (at("int")) {
        d.element = ScalarKind::Int;
        if (at("(", 1)) d.values = int_range(true);
        else ++pos_;
    } else {
        fail("a domain");
    }
    d.span = span_from(d.span);
    return d;
}

Model Parser::model() {
    Model m;
    while (!at_end()) {
        SourceSpan start = peek().span;
        if (accept("given") || accept("find")) {
            bool given = toks_[pos_ - 1].text == "given";
            auto names = name_list();
            expect(":");
            DomainDecl d = domain();
            for (auto& [n, s] : names) {
                Declaration decl{n, d, s};
                (given ? m.params : m.decision_vars).push_back(std::move(decl));
            }
        } else if (accept("letting")) {
            std::string n = name();
            if (!accept("be")) expect("=");
            Expr v = expr();
            m.constants.push_back({n, v, span_from(start)});
        } else if (accept("such")) {
            expect("that");
            // an empty constraint section is allowed
            if (at_end()) break;
            do {
                m.constraints.push_back(expr());
            } while (accept(","));
        } else {
            fail("'given', 'letting', 'find' or 'such that'");
        }
    }
    return m;
}

std::vector<std::pair<std::string, Expr>> Parser::lettings() {
    std::vector<std::pair<std::string, Expr>> out;
    while (!at_end()) {
        expect("letting");
        std::string n = name();
        if (!accept("be")) expect("=");
        out.emplace_back(n, expr());
    }
    return out;
}

Expr Parser::implication() {
    SourceSpan start = peek().span;
    Expr lhs = disjunction();
    if (accept("->")) {
        Expr rhs = implication();
        return binop(BinOp::Implies, lhs, rhs, span_from(start));
    }
    return lhs;
}

Expr Parser::disjunction() {
    SourceSpan start = peek().span;
    Expr lhs = conjunction();
    while (accept("\\/")) lhs = binop(BinOp::Or, lhs, conjunction(), span_from(start));
    return lhs;
}

Expr Parser::conjunction() {
    SourceSpan start = peek().span;
    Expr lhs = negation();
    while (accept("/\\")) lhs = binop(BinOp::And, lhs, negation(), span_from(start));
    return lhs;
}

Expr Parser::negation() {
    SourceSpan start = peek().span;
    if (accept("!")) {
        Expr operand = negation();
        return logical_not(operand, span_from(start));
    }
    return comparison();
}

Expr Parser::comparison() {
    static const std::pair<std::string_view, BinOp> ops[] = {
        {"=", BinOp::Eq},  {"!=", BinOp::Neq}, {"<", BinOp::Lt},
        {"<=", BinOp::Leq}, {">", BinOp::Gt},  {">=", BinOp::Geq},
    };
    SourceSpan start = peek().span;
    Expr lhs = additive();
    for (const auto& [text, op] : ops) {
        if (accept(text)) {
            Expr rhs = additive();
            for (const auto& [t2, op2] : ops)
                if (at(t2)) fail("parentheses around chained comparison");
            return binop(op, lhs, rhs, span_from(start));
        }
    }
    return lhs;
}

Expr Parser::additive() {
    SourceSpan start = peek().span;
    Expr lhs = multiplicative();
    while (true) {
        if (accept("+")) lhs = binop(BinOp::Add, lhs, multiplicative(), span_from(start));
        else if (accept("-")) lhs = binop(BinOp::Sub, lhs, multiplicative(), span_from(start));
        else return lhs;
    }
}

Expr Parser::multiplicative() {
    SourceSpan start = peek().span;
    Expr lhs = unary();
    while (true) {
        if (accept("*")) lhs = binop(BinOp::Mul, lhs, unary(), span_from(start));
        else if (accept("/")) lhs = binop(BinOp::Div, lhs, unary(), span_from(start));
        else if (accept("%")) lhs = binop(BinOp::Mod, lhs, unary(), span_from(start));
        else return lhs;
    }
}

Expr Parser::unary() {
    SourceSpan start = peek().span;
    if (accept("-")) {
        // `-5` is a literal unless it is the base of `**` (then -5**2 = -(5**2)).
        if (peek().kind == Tok::Int && !at("**", 1)) {
            std::uint64_t v = peek().number;
            ++pos_;
            std::int64_t neg = v == (std::uint64_t{1} << 63) ? std::numeric_limits<std::int64_t>::min()
                                                             : -static_cast<std::int64_t>(v);
            return int_lit(neg, span_from(start));
        }
        Expr operand = unary();
        return negate(operand, span_from(start));
    }
    return power();
}

Expr Parser::power() {
    SourceSpan start = peek().span;
    Expr base = postfix();
    if (accept("**")) {
        Expr exponent = unary();
        return binop(BinOp::Pow, base, exponent, span_from(start));
    }
    return base;
}

Expr Parser::postfix() {
    SourceSpan start = peek().span;
    Expr e = primary();
    while (accept("[")) {
        std::vector<Expr> indices;
        do {
            indices.push_back(expr());
        } while (accept(","));
        expect("]");
        e = matrix_index(e, std::move(indices), span_from(start));
    }
    return e;
}

bool Parser::generator_group_ahead() const {
    // NAME (',' NAME)* ':'
    std::size_t i = 0;
    while (true) {
        const Token& t = peek(i);
        if (t.kind != Tok::Ident || keywords().count(t.text)) return false;
        if (at(":", i + 1)) return true;
        if (!at(",", i + 1)) return false;
        i += 2;
    }
}

std::vector<Generator> Parser::generator_group() {
    auto names = name_list();
    expect(":");
    RangeExpr r = int_range(false);
    std::vector<Generator> gens;
    for (auto& [n, s] : names) gens.push_back({n, r});
    return gens;
}

Expr Parser::bracket(const SourceSpan& start) {
    if (accept("]")) return matrix_lit({}, span_from(start));
    Expr first = expr();
    if (accept("|")) {
        std::vector<Generator> gens;
        std::vector<Expr> guards;
        do {
            if (guards.empty() && generator_group_ahead()) {
                auto g = generator_group();
                gens.insert(gens.end(), g.begin(), g.end());
            } else {
                if (gens.empty()) fail("a generator");
                guards.push_back(expr());
            }
        } while (accept(","));
        expect("]");
        return comprehension(first, std::move(gens), std::move(guards), span_from(start));
    }
    std::vector<Expr> items{first};
    while (accept(",")) items.push_back(expr());
    expect("]");
    return matrix_lit(std::move(items), span_from(start));
}

Expr Parser::list_argument() {
    expect("(");
    SourceSpan start = peek().span;
    expect("[");
    Expr list = bracket(start);
    expect(")");
    return list;
}

Expr Parser::primary() {
    const Token& t = peek();
    SourceSpan start = t.span;
    if (t.kind == Tok::Int) {
        ++pos_;
        if (t.number > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()))
            throw Error(ErrorKind::Syntax, "integer literal too large: " + t.text, t.span);
        return int_lit(static_cast<std::int64_t>(t.number), span_from(start));
    }
    if (accept("(")) {
        Expr e = expr();
        expect(")");
        return e;
    }
    if (accept("[")) return bracket(start);
    if (accept("true")) return bool_lit(true, span_from(start));
    if (accept("false")) return bool_lit(false, span_from(start));

    static const std::pair<std::string_view, AggregateKind> aggs[] = {
        {"and", AggregateKind::And}, {"or", AggregateKind::Or},
        {"sum", AggregateKind::Sum}, {"product", AggregateKind::Product},
    };
    for (const auto& [text, kind] : aggs) {
        if (accept(text)) {
            Expr list = list_argument();
            return aggregate(kind, list, span_from(start));
        }
    }
    if (accept("allDiff")) {
        Expr list = list_argument();
        return all_diff(list, span_from(start));
    }
    if (at("forAll") || at("exists")) {
        QuantifierKind kind = at("forAll") ? QuantifierKind::ForAll : QuantifierKind::Exists;
        ++pos_;
        std::vector<Generator> gens;
        do {
            auto g = generator_group();
            gens.insert(gens.end(), g.begin(), g.end());
        } while (accept(","));
        expect(".");
        Expr body = expr();
        return quantifier(kind, std::move(gens), body, span_from(start));
    }
    if (t.kind == Tok::Ident && !keywords().count(t.text)) {
        ++pos_;
        return var_ref(t.text, span_from(start));
    }
    fail("an expression");
}

// ---------------------------------------------------------------------------
// Validation

[[noreturn]] void invalid(const std::string& msg, const SourceSpan& span) {
    throw Error(ErrorKind::Validation, msg, span);
}

struct Validator {
    std::set<std::string, std::less<>> declared;   // params, constants, decision vars
    std::set<std::string, std::less<>> decisions;  // decision vars only
    TypeEnv types;

    void declare(const std::string& name, const SourceSpan& span) {
        if (is_reserved_name(name))
            invalid("names starting with '" + std::string(kReservedPrefix) + "' are reserved: '" + name + "'",
                    span);
        if (!declared.insert(name).second) invalid("duplicate name '" + name + "'", span);
    }

    bool mentions_decision(const Expr& e) const {
        bool found = false;
        for_each_name(e, [&](const std::string& n) { found = found || decisions.count(n) > 0; });
        return found;
    }

    void check_generators(const Node& n, std::set<std::string, std::less<>>& bound) {
        for (const auto& g : n.generators) {
            if (is_reserved_name(g.name))
                invalid("names starting with '" + std::string(kReservedPrefix) + "' are reserved: '" + g.name +
                            "'",
                        n.span);
            if (declared.count(g.name))
                invalid("induction variable '" + g.name + "' shadows a declared name", n.span);
            if (!bound.insert(g.name).second)
                invalid("induction variable '" + g.name + "' is bound twice", n.span);
            for (const Expr& b : {g.range.lo, g.range.hi}) {
                if (!b) invalid("induction variable '" + g.name + "' needs a finite domain", n.span);
                bool bad = mentions_decision(b);
                for_each_name(b, [&](const std::string& x) {
                    bad = bad || (bound.count(x) > 0 && !declared.count(x));
                });
                if (bad)
                    invalid("domain of induction variable '" + g.name +
                                "' may only use parameters and constants",
                            b->span);
            }
        }
    }

    // `inside` is true below a comprehension or quantifier.
    void walk(const Expr& e, const Node* parent, bool inside) {
        const Node& n = *e;
        if (n.kind == NodeKind::Comprehension || n.kind == NodeKind::Quantifier) {
            if (inside) invalid("nested comprehensions and quantifiers are not supported", n.span);
            if (n.kind == NodeKind::Comprehension &&
                (!parent || (parent->kind != NodeKind::Aggregate && parent->kind != NodeKind::AllDiff)))
                invalid("a comprehension must be the argument of and, or, sum, product or allDiff", n.span);
            std::set<std::string, std::less<>> bound;
            check_generators(n, bound);
            if (n.kind == NodeKind::Comprehension) {
                for (const auto& g : guards(n))
                    if (mentions_decision(g))
                        invalid("comprehension guard '" + to_string(g) + "' refers to a decision variable",
                                g->span);
            }
            for (const auto& k : n.kids) walk(k, &n, true);
            return;
        }
        for (const auto& k : n.kids) walk(k, &n, inside);
    }
};

Type declared_type(const DomainDecl& d) {
    if (!d.is_matrix()) return Type::scalar(d.element);
    return Type::matrix(d.element, std::vector<IntRange>(d.index.size(), IntRange{1, 0}));
}

Type checked_type(const Expr& e, const TypeEnv& env) {
    try {
        return type_of(e, env);
    } catch (const Error& err) {
        if (err.kind() == ErrorKind::UnboundName) throw Error(ErrorKind::Validation, err.message(), err.span());
        throw;
    }
}

// Folds a domain bound over parameters and constants to a literal.
Expr fold_bound(const Expr& e, const Env& env) {
    Value v = eval_static(e, env);
    if (!v.is_int()) throw Error(ErrorKind::Type, "domain bound must be an integer", e->span);
    return int_lit(v.as_int(), e->span);
}

RangeExpr bind_range(const RangeExpr& r, const Env& env) {
    return {fold_bound(r.lo, env), r.hi ? fold_bound(r.hi, env) : nullptr};
}

DomainDecl bind_domain(const DomainDecl& d, const Env& env) {
    DomainDecl out = d;
    if (d.values) out.values = bind_range(*d.values, env);
    for (auto& r : out.index) r = bind_range(r, env);
    return out;
}

// Replaces bound names by literals and folds generator bounds.
Expr bind_expr(const Expr& e, const Env& env) {
    const Node& n = *e;
    if (n.kind == NodeKind::VarRef) {
        if (const Value* v = env.find(n.name)) {
            if (v->is_int()) return int_lit(v->as_int(), n.span);
            if (v->is_bool()) return bool_lit(v->as_bool(), n.span);
        }
        return e;
    }
    if (n.kids.empty()) return e;
    std::vector<Expr> kids;
    kids.reserve(n.kids.size());
    for (const auto& k : n.kids) kids.push_back(bind_expr(k, env));
    if (n.generators.empty()) return with_kids(e, std::move(kids));
    std::vector<Generator> gens;
    for (const auto& g : n.generators) gens.push_back({g.name, bind_range(g.range, env)});
    if (n.kind == NodeKind::Comprehension) {
        Expr ret = kids.front();
        kids.erase(kids.begin());
        return comprehension(ret, std::move(gens), std::move(kids), n.span);
    }
    return quantifier(n.quantifier, std::move(gens), kids.front(), n.span);
}

void check_binding(const Declaration& param, const Value& v) {
    const DomainDecl& d = param.domain;
    if (d.is_matrix())
        throw Error(ErrorKind::Type, "matrix parameter '" + param.name + "' is not supported", param.span);
    bool ok = d.element == ScalarKind::Bool ? v.is_bool() : v.is_int();
    if (!ok)
        throw Error(ErrorKind::Type,
                    "parameter '" + param.name + "' expects " +
                        (d.element == ScalarKind::Bool ? "a bool" : "an integer") + ", got " + v.to_string(),
                    param.span);
}

}  // namespace

void validate_model(const Model& m) {
    Validator v;
    for (const auto& p : m.params) {
        v.declare(p.name, p.span);
        v.types.emplace(p.name, declared_type(p.domain));
    }
    for (const auto& c : m.constants) {
        v.declare(c.name, c.span);
        if (v.mentions_decision(c.value) || contains_kind(c.value, NodeKind::Comprehension) ||
            contains_kind(c.value, NodeKind::Quantifier))
            invalid("letting '" + c.name + "' must be a static expression", c.span);
        Type t = checked_type(c.value, v.types);
        if (!t.is_scalar()) invalid("letting '" + c.name + "' must be a scalar", c.span);
        v.types.emplace(c.name, t);
    }
    auto check_bounds = [&](const RangeExpr& r) {
        for (const Expr& b : {r.lo, r.hi}) {
            if (!b) continue;
            if (v.mentions_decision(b)) invalid("domain bounds must be static", b->span);
            Type t = checked_type(b, v.types);
            if (!t.is_int()) throw Error(ErrorKind::Type, "domain bound must be an integer", b->span);
        }
    };
    for (const auto& p : m.params) {
        if (p.domain.values) check_bounds(*p.domain.values);
    }
    for (const auto& d : m.decision_vars) {
        v.declare(d.name, d.span);
        if (d.domain.values) check_bounds(*d.domain.values);
        for (const auto& r : d.domain.index) check_bounds(r);
        if (d.domain.element == ScalarKind::Int && (!d.domain.values || !d.domain.values->hi))
            invalid("decision variable '" + d.name + "' needs a finite domain", d.span);
        v.decisions.insert(d.name);
        v.types.emplace(d.name, declared_type(d.domain));
    }
    for (const auto& c : m.constraints) {
        v.walk(c, nullptr, false);
        Type t = checked_type(c, v.types);
        if (!t.is_bool())
            throw Error(ErrorKind::Type, "constraint '" + to_string(c) + "' must be bool, got " + t.to_string(),
                        c->span);
    }
}

Model parse_model(std::string_view text, const std::string& file_name) {
    Parser p(text, file_name);
    Model m = p.model();
    validate_model(m);
    return m;
}

Expr parse_expression(std::string_view text) {
    Parser p(text, {});
    return p.expression_only();
}

Bindings parse_params(std::string_view text, const std::string& file_name) {
    Parser p(text, file_name);
    Bindings out;
    Env env;
    for (const auto& [name, e] : p.lettings()) {
        Value v = eval_static(e, env);
        if (v.is_matrix()) throw Error(ErrorKind::Type, "parameter '" + name + "' must be a scalar", e->span);
        if (!out.emplace(name, v).second)
            throw Error(ErrorKind::Validation, "parameter '" + name + "' bound twice", e->span);
        env.bind(name, v);
    }
    return out;
}

Bindings parse_params(std::string_view text, const Model& model, const std::string& file_name) {
    Bindings b = parse_params(text, file_name);
    for (const auto& [name, value] : b) {
        const Declaration* decl = nullptr;
        for (const auto& p : model.params)
            if (p.name == name) decl = &p;
        if (!decl) throw Error(ErrorKind::UnknownParam, "'" + name + "' is not a parameter of the model");
        check_binding(*decl, value);
    }
    return b;
}

Model bind_params(const Model& m, const Bindings& bindings) {
    for (const auto& [name, value] : bindings) {
        bool known = false;
        for (const auto& p : m.params) known = known || p.name == name;
        if (!known) throw Error(ErrorKind::UnknownParam, "'" + name + "' is not a parameter of the model");
    }

    Env env;
    for (const auto& p : m.params) {
        auto it = bindings.find(p.name);
        if (it == bindings.end())
            throw Error(ErrorKind::MissingParam, "no value given for parameter '" + p.name + "'", p.span);
        check_binding(p, it->second);
        env.bind(p.name, it->second);
    }
    // Domains may refer to other parameters, so check them once all are bound.
    for (const auto& p : m.params) {
        if (!p.domain.values) continue;
        RangeExpr r = bind_range(*p.domain.values, env);
        std::int64_t v = bindings.find(p.name)->second.as_int();
        bool ok = v >= r.lo->int_value && (!r.hi || v <= r.hi->int_value);
        if (!ok)
            throw Error(ErrorKind::DomainViolation,
                        "parameter '" + p.name + "' = " + std::to_string(v) + " is outside " + to_string(r),
                        p.span);
    }
    for (const auto& c : m.constants) env.bind(c.name, eval_static(c.value, env));

    Model out;
    for (const auto& d : m.decision_vars) {
        Declaration bound{d.name, bind_domain(d.domain, env), d.span};
        resolve(bound);  // finite domain check
        out.decision_vars.push_back(std::move(bound));
    }
    for (const auto& c : m.constraints) out.constraints.push_back(bind_expr(c, env));
    validate_model(out);
    return out;
}

}  // namespace unroll
