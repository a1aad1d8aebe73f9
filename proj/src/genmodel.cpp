#include "unroll/genmodel.hpp"

#include "unroll/printer.hpp"

namespace unroll {

InductionVars induction_vars_of(const Node& comp) {
    InductionVars out;
    for (const auto& g : comp.generators) out.emplace_back(g.name, concrete_range(g.range));
    return out;
}

GeneratorModel build_generator_model(const Expr& host, GeneratorMode mode, const Scope& scope) {
    if ((host->kind != NodeKind::Aggregate && host->kind != NodeKind::AllDiff) ||
        host->kids[0]->kind != NodeKind::Comprehension)
        throw Error(ErrorKind::Internal, "generator models need a comprehension argument", host->span);
    const Node& comp = *host->kids[0];

    GeneratorModel g;
    InductionVars ind = induction_vars_of(comp);
    for (const auto& [name, range] : ind) {
        g.vars.push_back({name, ScalarKind::Int, range});
        g.branching.push_back(name);
    }
    for (const auto& guard : guards(comp)) g.constraints.push_back(guard);

    // allDiff has no identity, so there is nothing to lift.
    if (mode == GeneratorMode::Simple || host->kind != NodeKind::Aggregate) return g;

    AggregateOp op{host->aggregate};
    RewriteResult rw = lift_static_guard(return_expr(comp), ind, op.element_type(), scope);
    for (const auto& d : rw.dummies)
        g.vars.push_back({d.name, d.declared_type.is_bool() ? ScalarKind::Bool : ScalarKind::Int, d.domain});
    if (op.element_kind() == ScalarKind::Bool)
        g.constraints.push_back(op.identity_value() ? logical_not(rw.rewritten) : rw.rewritten);
    else
        g.constraints.push_back(binop(BinOp::Neq, rw.rewritten, op.identity()));
    g.rewrite = std::move(rw);
    return g;
}

std::string to_string(const GeneratorModel& g) {
    std::string out;
    auto domain_text = [](const GenVar& v) {
        if (v.kind == ScalarKind::Bool) return std::string("bool");
        return "int(" + std::to_string(v.domain.lo) + ".." + std::to_string(v.domain.hi) + ")";
    };
    for (std::size_t i = 0; i < g.vars.size();) {
        std::string dom = domain_text(g.vars[i]);
        out += "find " + g.vars[i].name;
        std::size_t j = i + 1;
        for (; j < g.vars.size() && domain_text(g.vars[j]) == dom; ++j) out += ", " + g.vars[j].name;
        out += ": " + dom + "\n";
        i = j;
    }
    out += "branching on [";
    for (std::size_t i = 0; i < g.branching.size(); ++i) out += (i ? ", " : "") + g.branching[i];
    out += "]\n";
    if (!g.constraints.empty()) {
        out += "such that\n";
        for (std::size_t i = 0; i < g.constraints.size(); ++i)
            out += "  " + to_string(g.constraints[i]) + (i + 1 < g.constraints.size() ? ",\n" : "\n");
    }
    return out;
}

}  // namespace unroll
