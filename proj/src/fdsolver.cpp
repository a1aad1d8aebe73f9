#include "unroll/fdsolver.hpp"

#include <algorithm>

#include "unroll/eval.hpp"
#include "unroll/interval.hpp"
#include "unroll/printer.hpp"

namespace unroll {

const Value& Assignment::operator[](std::string_view name) const {
    for (const auto& [n, v] : bindings)
        if (n == name) return v;
    throw Error(ErrorKind::Internal, "no variable '" + std::string(name) + "' in assignment");
}

namespace {

// Witness search gives up enumerating a variable with more values than this
// and treats it as an unknown instead (still a sound over-approximation).
constexpr std::uint64_t kMaxWitnessDomain = 1 << 16;

BinOp negate_comparison(BinOp op) {
    switch (op) {
    case BinOp::Eq: return BinOp::Neq;
    case BinOp::Neq: return BinOp::Eq;
    case BinOp::Lt: return BinOp::Geq;
    case BinOp::Leq: return BinOp::Gt;
    case BinOp::Gt: return BinOp::Leq;
    case BinOp::Geq: return BinOp::Lt;
    default: return op;
    }
}

// A comparison that every solution must satisfy.
struct Atom {
    BinOp op;
    Expr lhs, rhs;
    int last_var = -1;  // highest branching index it mentions
};

class Search {
public:
    Search(const GeneratorModel& g, const SolveOptions& options, const SolutionVisitor& visit)
        : g_(g), options_(options), visit_(visit) {
        for (const auto& name : g.branching) {
            auto it = std::find_if(g.vars.begin(), g.vars.end(), [&](const GenVar& v) { return v.name == name; });
            if (it == g.vars.end()) throw Error(ErrorKind::Internal, "branching variable '" + name + "' not declared");
            branch_.push_back(&*it);
            bounds0_.push_back(Interval::of(it->domain));
            slots_.push_back(env_.declare(name));
        }
        for (const auto& v : g.vars) {
            if (index_of(v.name) < 0) {
                others_.push_back(&v);
                other_slots_.push_back(env_.declare(v.name));
            }
        }
        check_at_.resize(branch_.size() + 1);
        for (const auto& c : g.constraints) classify_constraint(c);
        if (options_.propagate)
            for (const auto& c : g.constraints) collect_atoms(c, true);
        values_.resize(branch_.size());
    }

    void run() {
        for (const auto& b : bounds0_)
            if (b.empty()) return;
        // Constraints over no branching variable are decided up front.
        if (!passes(check_at_[0])) return;
        std::vector<Interval> bounds = bounds0_;
        if (options_.propagate && !propagate(bounds, -1)) return;
        dfs(0, bounds);
    }

private:
    int index_of(std::string_view name) const {
        for (std::size_t i = 0; i < g_.branching.size(); ++i)
            if (g_.branching[i] == name) return static_cast<int>(i);
        return -1;
    }

    bool is_other(std::string_view name) const {
        for (const GenVar* v : others_)
            if (v->name == name) return true;
        return false;
    }

    void classify_constraint(const Expr& c) {
        int last = -1;
        bool existential = false;
        for_each_name(c, [&](const std::string& n) {
            last = std::max(last, index_of(n));
            existential = existential || is_other(n);
        });
        if (existential) existential_.push_back(c);
        // Without eager checks everything waits for the leaves.
        std::size_t at = options_.eager_checks ? static_cast<std::size_t>(last + 1) : branch_.size();
        if (!options_.eager_checks && last < 0) at = 0;
        check_at_[at].push_back(c);
    }

    void collect_atoms(const Expr& e, bool positive) {
        const Node& n = *e;
        switch (n.kind) {
        case NodeKind::Not:
            collect_atoms(n.kids[0], !positive);
            return;
        case NodeKind::BinOp:
            if (n.op == BinOp::And && positive) {
                collect_atoms(n.kids[0], true);
                collect_atoms(n.kids[1], true);
            } else if (n.op == BinOp::Or && !positive) {
                collect_atoms(n.kids[0], false);
                collect_atoms(n.kids[1], false);
            } else if (n.op == BinOp::Implies && !positive) {
                collect_atoms(n.kids[0], true);
                collect_atoms(n.kids[1], false);
            } else if (is_comparison(n.op)) {
                BinOp op = positive ? n.op : negate_comparison(n.op);
                if (op == BinOp::Neq) return;
                int last = -1;
                bool usable = true;
                for_each_name(e, [&](const std::string& name) {
                    int i = index_of(name);
                    usable = usable && i >= 0;
                    last = std::max(last, i);
                });
                if (usable && last >= 0) atoms_.push_back({op, n.kids[0], n.kids[1], last});
            }
            return;
        case NodeKind::Aggregate:
            if (n.kids[0]->kind != NodeKind::MatrixLit) return;
            if ((n.aggregate == AggregateKind::And && positive) || (n.aggregate == AggregateKind::Or && !positive))
                for (const auto& item : n.kids[0]->kids) collect_atoms(item, positive);
            return;
        default:
            return;
        }
    }

    // ---- propagation -----------------------------------------------------

    Interval forward(const Expr& e, const std::vector<Interval>& bounds) const {
        return interval_of(e, [&](std::string_view name) -> std::optional<Interval> {
            int i = index_of(name);
            if (i < 0) return std::nullopt;
            return bounds[static_cast<std::size_t>(i)];
        });
    }

    // Narrows the variables in `e` so that its value can lie in `target`.
    // Returns false when that is impossible.
    bool narrow(const Expr& e, Interval target, std::vector<Interval>& bounds, bool& changed) const {
        const Node& n = *e;
        Interval now = forward(e, bounds);
        Interval meet = intersect(now, target);
        if (meet.empty()) return false;
        if (meet == now) return true;
        switch (n.kind) {
        case NodeKind::VarRef: {
            int i = index_of(n.name);
            if (i < 0) return true;
            bounds[static_cast<std::size_t>(i)] = meet;
            changed = true;
            return true;
        }
        case NodeKind::Neg:
            return narrow(n.kids[0], -meet, bounds, changed);
        case NodeKind::BinOp: {
            const Expr& a = n.kids[0];
            const Expr& b = n.kids[1];
            switch (n.op) {
            case BinOp::Add:
                return narrow(a, meet - forward(b, bounds), bounds, changed) &&
                       narrow(b, meet - forward(a, bounds), bounds, changed);
            case BinOp::Sub:
                return narrow(a, meet + forward(b, bounds), bounds, changed) &&
                       narrow(b, forward(a, bounds) - meet, bounds, changed);
            case BinOp::Mul: {
                Interval ia = forward(a, bounds);
                Interval ib = forward(b, bounds);
                if (ib.is_point() && ib.lo != 0) return narrow(a, exact_quotient(meet, ib.lo), bounds, changed);
                if (ia.is_point() && ia.lo != 0) return narrow(b, exact_quotient(meet, ia.lo), bounds, changed);
                return true;
            }
            case BinOp::Pow: {
                Interval ib = forward(b, bounds);
                if (ib.is_point() && ib.lo >= 1 && ib.lo <= 62) {
                    Interval ia = forward(a, bounds);
                    return narrow(a, root_preimage(meet, ib.lo, ia), bounds, changed);
                }
                return true;
            }
            default:
                return true;
            }
        }
        default:
            return true;
        }
    }

    bool narrow_atom(const Atom& at, std::vector<Interval>& bounds, bool& changed) const {
        Interval l = forward(at.lhs, bounds);
        Interval r = forward(at.rhs, bounds);
        constexpr std::int64_t inf = Interval::kInfinity;
        auto below = [&](std::int64_t hi) { return Interval{-inf, hi}; };
        auto above = [&](std::int64_t lo) { return Interval{lo, inf}; };
        switch (at.op) {
        case BinOp::Eq:
            return narrow(at.lhs, r, bounds, changed) && narrow(at.rhs, forward(at.lhs, bounds), bounds, changed);
        case BinOp::Leq:
            return narrow(at.lhs, below(r.hi), bounds, changed) && narrow(at.rhs, above(l.lo), bounds, changed);
        case BinOp::Lt:
            return narrow(at.lhs, below(r.hi - 1), bounds, changed) &&
                   narrow(at.rhs, above(l.lo + 1), bounds, changed);
        case BinOp::Geq:
            return narrow(at.lhs, above(r.lo), bounds, changed) && narrow(at.rhs, below(l.hi), bounds, changed);
        case BinOp::Gt:
            return narrow(at.lhs, above(r.lo + 1), bounds, changed) &&
                   narrow(at.rhs, below(l.hi - 1), bounds, changed);
        default:
            return true;
        }
    }

    bool propagate(std::vector<Interval>& bounds, int depth) const {
        for (int round = 0; round < 16; ++round) {
            bool changed = false;
            for (const Atom& at : atoms_) {
                if (at.last_var <= depth) continue;
                if (!narrow_atom(at, bounds, changed)) return false;
            }
            for (const auto& b : bounds)
                if (b.empty()) return false;
            if (!changed) return true;
        }
        return true;
    }

    // ---- checking --------------------------------------------------------

    [[noreturn]] void rethrow_with_assignment(const Error& err, std::size_t assigned) const {
        std::string where;
        for (std::size_t i = 0; i < assigned; ++i)
            where += (i ? ", " : "") + g_.branching[i] + " = " + values_[i].to_string();
        throw Error(err.kind(), err.message() + (where.empty() ? "" : " (at " + where + ")"), err.span());
    }

    // False only if some constraint is known to be false.
    bool passes(const std::vector<Expr>& cs, std::size_t assigned = 0) const {
        for (const auto& c : cs) {
            std::optional<Value> v;
            try {
                v = partial_eval(c, env_);
            } catch (const Error& err) {
                rethrow_with_assignment(err, assigned);
            }
            if (v && v->is_bool() && !v->as_bool()) return false;
        }
        return true;
    }

    bool witness_exists() {
        if (existential_.empty() || options_.existential == ExistentialMode::Symbolic) return true;
        std::vector<std::size_t> enumerated;
        for (std::size_t i = 0; i < others_.size(); ++i)
            if (others_[i]->domain.size() <= kMaxWitnessDomain) enumerated.push_back(i);
        for (std::size_t i : enumerated)
            if (others_[i]->domain.empty()) return false;

        std::optional<Error> first_error;
        std::vector<std::int64_t> cur;
        for (std::size_t i : enumerated) cur.push_back(others_[i]->domain.lo);
        auto set = [&](std::size_t k) {
            const GenVar& v = *others_[enumerated[k]];
            env_.set(other_slots_[enumerated[k]],
                     v.kind == ScalarKind::Bool ? Value(cur[k] != 0) : Value(cur[k]));
        };
        for (std::size_t k = 0; k < enumerated.size(); ++k) set(k);

        bool found = false;
        while (!found) {
            try {
                found = true;
                for (const auto& c : existential_) {
                    auto v = partial_eval(c, env_);
                    if (v && v->is_bool() && !v->as_bool()) {
                        found = false;
                        break;
                    }
                }
            } catch (const Error& err) {
                // A dummy value can make an expression fail that never fails
                // for real; only report it if no candidate works.
                found = false;
                if (!first_error) first_error = err;
            }
            if (found) break;
            std::size_t k = enumerated.size();
            bool more = false;
            while (k > 0) {
                --k;
                if (cur[k] < others_[enumerated[k]]->domain.hi) {
                    ++cur[k];
                    set(k);
                    more = true;
                    break;
                }
                cur[k] = others_[enumerated[k]]->domain.lo;
                set(k);
            }
            if (!more) break;
        }
        for (std::size_t s : other_slots_) env_.unset(s);
        if (!found && first_error) rethrow_with_assignment(*first_error, branch_.size());
        return found;
    }

    void dfs(std::size_t depth, const std::vector<Interval>& bounds) {
        if (depth == branch_.size()) {
            if (!witness_exists()) return;
            visit_(values_);
            return;
        }
        const GenVar& var = *branch_[depth];
        const Interval dom = bounds[depth];
        std::vector<Interval> next;
        for (std::int64_t v = dom.lo; v <= dom.hi; ++v) {
            if (options_.deadline && (++steps_ & 1023) == 0) options_.deadline->check();
            values_[depth] = var.kind == ScalarKind::Bool ? Value(v != 0) : Value(v);
            env_.set(slots_[depth], values_[depth]);
            if (!passes(check_at_[depth + 1], depth + 1)) continue;
            if (options_.propagate && !atoms_.empty()) {
                next = bounds;
                next[depth] = Interval::point(v);
                if (!propagate(next, static_cast<int>(depth))) continue;
                dfs(depth + 1, next);
            } else {
                dfs(depth + 1, bounds);
            }
        }
        env_.unset(slots_[depth]);
    }

    const GeneratorModel& g_;
    SolveOptions options_;
    const SolutionVisitor& visit_;

    std::vector<const GenVar*> branch_;
    std::vector<Interval> bounds0_;
    std::vector<std::size_t> slots_;
    std::vector<const GenVar*> others_;
    std::vector<std::size_t> other_slots_;
    std::vector<std::vector<Expr>> check_at_;  // by number of assigned branching vars
    std::vector<Expr> existential_;
    std::vector<Atom> atoms_;

    Env env_;
    std::vector<Value> values_;
    std::uint64_t steps_ = 0;
};

}  // namespace

void for_each_solution(const GeneratorModel& g, const SolveOptions& options, const SolutionVisitor& visit) {
    Search s(g, options, visit);
    s.run();
}

std::vector<Assignment> solve_all(const GeneratorModel& g, const SolveOptions& options) {
    std::vector<Assignment> out;
    for_each_solution(g, options, [&](std::span<const Value> values) {
        Assignment a;
        for (std::size_t i = 0; i < values.size(); ++i) a.bindings.emplace_back(g.branching[i], values[i]);
        out.push_back(std::move(a));
    });
    return out;
}

std::uint64_t count_solutions(const GeneratorModel& g, const SolveOptions& options) {
    std::uint64_t n = 0;
    for_each_solution(g, options, [&](std::span<const Value>) { ++n; });
    return n;
}

}  // namespace unroll
