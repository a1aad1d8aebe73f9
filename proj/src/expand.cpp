#include "unroll/expand.hpp"

#include "unroll/eval.hpp"
#include "unroll/printer.hpp"

namespace unroll {

namespace {

using Clock = std::chrono::steady_clock;

ExpansionStats::Duration since(Clock::time_point t0) {
    return std::chrono::duration_cast<ExpansionStats::Duration>(Clock::now() - t0);
}

const Node& comprehension_of(const Expr& host) {
    if ((host->kind != NodeKind::Aggregate && host->kind != NodeKind::AllDiff) ||
        host->kids[0]->kind != NodeKind::Comprehension)
        throw Error(ErrorKind::Internal, "expected an aggregate over a comprehension", host->span);
    return *host->kids[0];
}

// Collects items in order and builds the replacement for the host.
class ItemSink {
public:
    explicit ItemSink(const Expr& host) : host_(host) {}

    void add(Expr item, ExpansionStats& stats) {
        if (host_->kind == NodeKind::Aggregate &&
            structurally_equal(item, AggregateOp{host_->aggregate}.identity())) {
            ++stats.items_discarded_as_identity;
            return;
        }
        ++stats.items_emitted;
        items_.push_back(std::move(item));
    }

    Expr finish() {
        if (host_->kind == NodeKind::AllDiff) return all_diff(matrix_lit(std::move(items_)), host_->span);
        return assemble_aggregate(host_->aggregate, items_);
    }

private:
    Expr host_;
    std::vector<Expr> items_;
};

Expr substitute_values(const Expr& e, const Node& comp, std::span<const Value> values) {
    std::map<std::string, Expr, std::less<>> m;
    for (std::size_t i = 0; i < values.size(); ++i) m.emplace(comp.generators[i].name, to_expr(values[i]));
    return substitute(e, m);
}

// Replaces every aggregate-over-comprehension in `e` via `expand`.
template <class Fn>
Expr expand_all(const Expr& e, Fn&& expand) {
    if ((e->kind == NodeKind::Aggregate || e->kind == NodeKind::AllDiff) &&
        e->kids[0]->kind == NodeKind::Comprehension)
        return expand(e);
    if (e->kids.empty()) return e;
    std::vector<Expr> kids;
    bool changed = false;
    for (const auto& k : e->kids) {
        kids.push_back(expand_all(k, expand));
        changed = changed || kids.back() != k;
    }
    return changed ? with_kids(e, std::move(kids)) : e;
}

void split_conjunction(const Expr& e, std::vector<Expr>& out) {
    if (e->kind == NodeKind::Aggregate && e->aggregate == AggregateKind::And &&
        e->kids[0]->kind == NodeKind::MatrixLit) {
        for (const auto& item : e->kids[0]->kids) split_conjunction(item, out);
        return;
    }
    if (e->kind == NodeKind::BinOp && e->op == BinOp::And) {
        split_conjunction(e->kids[0], out);
        split_conjunction(e->kids[1], out);
        return;
    }
    if (e->kind == NodeKind::BoolLit && e->bool_value()) return;
    out.push_back(e);
}

}  // namespace

const char* pipeline_name(Pipeline p) {
    switch (p) {
    case Pipeline::Naive: return "naive";
    case Pipeline::SolverAidedSimple: return "solver-aided-simple";
    case Pipeline::SolverAidedFull: return "solver-aided-full";
    }
    return "?";
}

Pipeline parse_pipeline(std::string_view name) {
    for (Pipeline p : kAllPipelines)
        if (name == pipeline_name(p)) return p;
    throw Error(ErrorKind::Validation, "unknown pipeline '" + std::string(name) +
                                           "' (expected naive, solver-aided-simple or solver-aided-full)");
}

ExpansionStats& ExpansionStats::operator+=(const ExpansionStats& o) {
    combinations_considered += o.combinations_considered;
    items_emitted += o.items_emitted;
    items_discarded_as_identity += o.items_discarded_as_identity;
    generator_solve_time += o.generator_solve_time;
    substitution_time += o.substitution_time;
    total_time += o.total_time;
    return *this;
}

Expr lower_quantifiers(const Expr& e) {
    if (e->kids.empty()) return e;
    std::vector<Expr> kids;
    bool changed = false;
    for (const auto& k : e->kids) {
        kids.push_back(lower_quantifiers(k));
        changed = changed || kids.back() != k;
    }
    if (e->kind == NodeKind::Quantifier) {
        AggregateKind kind = e->quantifier == QuantifierKind::ForAll ? AggregateKind::And : AggregateKind::Or;
        return aggregate(kind, comprehension(kids[0], e->generators, {}, e->span), e->span);
    }
    return changed ? with_kids(e, std::move(kids)) : e;
}

std::pair<Expr, ExpansionStats> expand_naive(const Expr& host, const Scope&, const ExpandOptions& options) {
    auto t0 = Clock::now();
    const Node& comp = comprehension_of(host);
    ExpansionStats stats;
    ItemSink sink(host);

    std::vector<IntRange> ranges;
    std::uint64_t combos = 1;
    for (const auto& g : comp.generators) {
        ranges.push_back(concrete_range(g.range));
        std::uint64_t s = ranges.back().size();
        combos = (s != 0 && combos > UINT64_MAX / s) ? UINT64_MAX : combos * s;
    }
    stats.combinations_considered = combos;

    bool empty = false;
    for (const auto& r : ranges) empty = empty || r.empty();
    if (!empty) {
        Env env;
        std::vector<std::size_t> slots;
        std::vector<std::int64_t> cur;
        for (std::size_t i = 0; i < ranges.size(); ++i) {
            slots.push_back(env.bind(comp.generators[i].name, ranges[i].lo));
            cur.push_back(ranges[i].lo);
        }
        std::uint64_t steps = 0;
        auto t_sub = ExpansionStats::Duration{};
        while (true) {
            if (options.deadline && (++steps & 1023) == 0) options.deadline->check();
            bool pass = true;
            for (const auto& g : guards(comp)) {
                if (!eval_static(g, env).as_bool()) {
                    pass = false;
                    break;
                }
            }
            if (pass) {
                auto ts = Clock::now();
                sink.add(simplify(return_expr(comp), env), stats);
                t_sub += since(ts);
            }
            std::size_t d = ranges.size();
            bool more = false;
            while (d > 0) {
                --d;
                if (cur[d] < ranges[d].hi) {
                    env.set(slots[d], ++cur[d]);
                    more = true;
                    break;
                }
                cur[d] = ranges[d].lo;
                env.set(slots[d], cur[d]);
            }
            if (!more) break;
        }
        stats.substitution_time = t_sub;
    }
    Expr out = sink.finish();
    stats.total_time = since(t0);
    return {out, stats};
}

std::pair<Expr, ExpansionStats> expand_solver_aided(const Expr& host, const Scope& scope, GeneratorMode mode,
                                                    const ExpandOptions& options) {
    auto t0 = Clock::now();
    const Node& comp = comprehension_of(host);
    ExpansionStats stats;
    ItemSink sink(host);

    GeneratorModel g = build_generator_model(host, mode, scope);
    SolveOptions so;
    so.existential = options.existential;
    so.eager_checks = options.eager_checks;
    so.propagate = options.propagate;
    so.deadline = options.deadline;

    Env env;
    std::vector<std::size_t> slots;
    for (const auto& gen : comp.generators) slots.push_back(env.declare(gen.name));

    auto t_sub = ExpansionStats::Duration{};
    for_each_solution(g, so, [&](std::span<const Value> values) {
        auto ts = Clock::now();
        ++stats.combinations_considered;
        if (options.break_simplifier_for_testing) {
            sink.add(substitute_values(return_expr(comp), comp, values), stats);
        } else {
            for (std::size_t i = 0; i < values.size(); ++i) env.set(slots[i], values[i]);
            sink.add(simplify(return_expr(comp), env), stats);
        }
        t_sub += since(ts);
    });
    Expr out = sink.finish();
    stats.substitution_time = t_sub;
    stats.total_time = since(t0);
    stats.generator_solve_time = stats.total_time - t_sub;
    return {out, stats};
}

std::pair<FlatModel, ExpansionStats> flatten(const Model& m, Pipeline pipeline, const ExpandOptions& options) {
    auto t0 = Clock::now();
    Scope scope(m);
    FlatModel fm;
    fm.decision_vars = m.decision_vars;
    ExpansionStats total;

    auto expand = [&](const Expr& host) {
        std::pair<Expr, ExpansionStats> r;
        switch (pipeline) {
        case Pipeline::Naive: r = expand_naive(host, scope, options); break;
        case Pipeline::SolverAidedSimple:
            r = expand_solver_aided(host, scope, GeneratorMode::Simple, options);
            break;
        case Pipeline::SolverAidedFull:
            r = expand_solver_aided(host, scope, GeneratorMode::Full, options);
            break;
        }
        total += r.second;
        return r.first;
    };
    // The broken-simplifier switch must not be undone by the final pass.
    bool final_simplify = !(options.break_simplifier_for_testing && pipeline != Pipeline::Naive);

    for (const auto& c : m.constraints) {
        Expr e = expand_all(lower_quantifiers(c), expand);
        if (final_simplify) e = simplify(e);
        split_conjunction(e, fm.constraints);
    }
    total.total_time = since(t0);
    return {std::move(fm), total};
}

void for_each_comprehension(const Model& m, const std::function<void(const Expr&)>& fn) {
    for (const auto& c : m.constraints)
        expand_all(lower_quantifiers(c), [&](const Expr& host) {
            fn(host);
            return host;
        });
}

std::string to_string(const FlatModel& fm) {
    std::string out;
    for (const auto& d : fm.decision_vars) out += to_string(d, "find") + "\n";
    out += "such that\n";
    if (fm.constraints.empty()) return out + "  true\n";
    for (std::size_t i = 0; i < fm.constraints.size(); ++i)
        out += "  " + to_string(fm.constraints[i]) + (i + 1 < fm.constraints.size() ? ",\n" : "\n");
    return out;
}

}  // namespace unroll
