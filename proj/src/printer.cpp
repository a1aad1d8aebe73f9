#include "unroll/printer.hpp"

namespace unroll {

namespace {

void print(const Expr& e, std::string& out);

bool needs_parens_as_operand(const Node& n) {
    switch (n.kind) {
    case NodeKind::BinOp:
    case NodeKind::Quantifier:
    case NodeKind::Neg:
    case NodeKind::Not:
        return true;
    case NodeKind::IntLit:
        return n.int_value < 0;
    default:
        return false;
    }
}

void print_operand(const Expr& e, std::string& out) {
    if (needs_parens_as_operand(*e)) {
        out += '(';
        print(e, out);
        out += ')';
    } else {
        print(e, out);
    }
}

void print_range(const RangeExpr& r, std::string& out) {
    out += "int(";
    print(r.lo, out);
    out += "..";
    if (r.hi) print(r.hi, out);
    out += ')';
}

void print_generators(const std::vector<Generator>& gens, std::string& out) {
    for (std::size_t i = 0; i < gens.size(); ++i) {
        if (i) out += ", ";
        out += gens[i].name;
        out += ": ";
        print_range(gens[i].range, out);
    }
}

void print_list(std::span<const Expr> items, std::string& out) {
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ", ";
        print(items[i], out);
    }
}

void print(const Expr& e, std::string& out) {
    const Node& n = *e;
    switch (n.kind) {
    case NodeKind::IntLit:
        out += std::to_string(n.int_value);
        return;
    case NodeKind::BoolLit:
        out += n.bool_value() ? "true" : "false";
        return;
    case NodeKind::VarRef:
        out += n.name;
        return;
    case NodeKind::MatrixIndex:
        print_operand(n.kids[0], out);
        out += '[';
        print_list(std::span<const Expr>(n.kids).subspan(1), out);
        out += ']';
        return;
    case NodeKind::Neg:
        out += "-(";
        print(n.kids[0], out);
        out += ')';
        return;
    case NodeKind::Not:
        out += '!';
        print_operand(n.kids[0], out);
        return;
    case NodeKind::BinOp:
        print_operand(n.kids[0], out);
        out += ' ';
        out += op_symbol(n.op);
        out += ' ';
        print_operand(n.kids[1], out);
        return;
    case NodeKind::MatrixLit:
        out += '[';
        print_list(n.kids, out);
        out += ']';
        return;
    case NodeKind::Comprehension:
        out += '[';
        print(n.kids[0], out);
        out += " | ";
        print_generators(n.generators, out);
        for (const auto& g : guards(n)) {
            out += ", ";
            print(g, out);
        }
        out += ']';
        return;
    case NodeKind::Aggregate:
        out += aggregate_name(n.aggregate);
        out += '(';
        print(n.kids[0], out);
        out += ')';
        return;
    case NodeKind::AllDiff:
        out += "allDiff(";
        print(n.kids[0], out);
        out += ')';
        return;
    case NodeKind::Quantifier:
        out += n.quantifier == QuantifierKind::ForAll ? "forAll " : "exists ";
        print_generators(n.generators, out);
        out += ". ";
        print(n.kids[0], out);
        return;
    }
}

}  // namespace

std::string to_string(const Expr& e) {
    std::string out;
    if (!e) return "<null>";
    print(e, out);
    return out;
}

std::string to_string(const RangeExpr& r) {
    std::string out;
    print_range(r, out);
    return out;
}

std::string to_string(const DomainDecl& d) {
    std::string out;
    if (d.is_matrix()) {
        out += "matrix indexed by [";
        for (std::size_t i = 0; i < d.index.size(); ++i) {
            if (i) out += ", ";
            print_range(d.index[i], out);
        }
        out += "] of ";
    }
    if (d.element == ScalarKind::Bool)
        out += "bool";
    else if (d.values)
        print_range(*d.values, out);
    else
        out += "int";
    return out;
}

std::string to_string(const Declaration& d, const char* keyword) {
    return std::string(keyword) + " " + d.name + ": " + to_string(d.domain);
}

std::string to_string(const Model& m) {
    std::string out;
    for (const auto& p : m.params) out += to_string(p, "given") + "\n";
    for (const auto& c : m.constants) out += "letting " + c.name + " be " + to_string(c.value) + "\n";
    for (const auto& d : m.decision_vars) out += to_string(d, "find") + "\n";
    if (!m.constraints.empty()) {
        out += "such that\n";
        for (std::size_t i = 0; i < m.constraints.size(); ++i) {
            out += "  " + to_string(m.constraints[i]);
            out += i + 1 < m.constraints.size() ? ",\n" : "\n";
        }
    }
    return out;
}

}  // namespace unroll
