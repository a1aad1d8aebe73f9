#include "unroll/rewrite.hpp"

#include <algorithm>
#include <unordered_map>

#include "unroll/eval.hpp"
#include "unroll/interval.hpp"
#include "unroll/printer.hpp"

namespace unroll {

namespace {

bool is_induction(std::string_view name, const InductionVars& ind) {
    for (const auto& [n, r] : ind)
        if (n == name) return true;
    return false;
}

bool is_decision_name(std::string_view name, const InductionVars& ind) {
    return !is_induction(name, ind) && !is_reserved_name(name);
}

// Per-node facts about the original tree, computed once.
struct Facts {
    bool dynamic = false;
    bool eligible = false;           // dynamic and of the dummy type
    bool eligible_below = false;     // some strict descendant is eligible
    bool induction_in_place = false; // induction var outside a decision-matrix index
    bool has_dummy_type = false;
};

class Lifter {
public:
    Lifter(const Expr& root, const InductionVars& ind, const Type& dummy_type, const Scope& scope)
        : root_(root), ind_(ind), dummy_type_(dummy_type), scope_(scope) {
        for (const auto& v : scope.vars()) types_.emplace(v.name, v.type);
        for (const auto& [n, r] : ind) types_.insert_or_assign(n, Type::integer());
        analyse(root);
    }

    RewriteResult run();

private:
    const Facts& analyse(const Expr& e);
    bool induction_in_place(const Expr& e) const;

    const Expr& at(const std::vector<std::size_t>& path) const {
        const Expr* e = &root_;
        for (std::size_t i : path) e = &(*e)->kids[i];
        return *e;
    }
    // Post-order continuation: right sibling, else the parent's next.
    static bool next(std::vector<std::size_t>& path, const Lifter& self) {
        while (!path.empty()) {
            std::size_t idx = path.back();
            path.pop_back();
            const Expr& parent = self.at(path);
            if (idx + 1 < parent->kids.size()) {
                path.push_back(idx + 1);
                return true;
            }
        }
        return false;
    }
    std::vector<std::size_t> walk_up(std::vector<std::size_t> path) const {
        while (!path.empty() && !facts_.at(at(path).get()).has_dummy_type) path.pop_back();
        if (!facts_.at(at(path).get()).has_dummy_type)
            throw Error(ErrorKind::Internal, "return expression does not have the dummy type");
        return path;
    }
    void replace(const std::vector<std::size_t>& path) {
        // Earlier replacements inside this subtree are swallowed.
        std::erase_if(replaced_, [&](const std::vector<std::size_t>& p) {
            return p.size() >= path.size() && std::equal(path.begin(), path.end(), p.begin());
        });
        replaced_.push_back(path);
    }
    Expr build(const Expr& e, std::vector<std::size_t>& path, RewriteResult& out) const;

    Expr root_;
    const InductionVars& ind_;
    Type dummy_type_;
    const Scope& scope_;
    TypeEnv types_;
    std::unordered_map<const Node*, Facts> facts_;
    std::vector<std::vector<std::size_t>> replaced_;
};

bool Lifter::induction_in_place(const Expr& e) const {
    const Node& n = *e;
    if (n.kind == NodeKind::VarRef) return is_induction(n.name, ind_);
    if (n.kind == NodeKind::MatrixIndex && n.kids[0]->kind == NodeKind::VarRef &&
        is_decision_name(n.kids[0]->name, ind_))
        return false;
    for (const auto& k : n.kids)
        if (induction_in_place(k)) return true;
    return false;
}

const Facts& Lifter::analyse(const Expr& e) {
    Facts f;
    const Node& n = *e;
    if (n.kind == NodeKind::VarRef) f.dynamic = is_decision_name(n.name, ind_);
    for (const auto& k : n.kids) {
        const Facts& kf = analyse(k);
        f.dynamic = f.dynamic || kf.dynamic;
        f.eligible_below = f.eligible_below || kf.eligible || kf.eligible_below;
    }
    f.has_dummy_type = type_of(e, types_) == dummy_type_;
    f.eligible = f.dynamic && f.has_dummy_type;
    f.induction_in_place = induction_in_place(e);
    return facts_[e.get()] = f;
}

RewriteResult Lifter::run() {
    std::size_t bound = 2 * count_nodes(root_);
    std::size_t visits = 0;
    std::vector<std::size_t> path;
    bool more = true;
    while (more) {
        if (++visits > bound) throw Error(ErrorKind::Internal, "dummy lifting did not terminate");
        const Facts& f = facts_.at(at(path).get());
        if (!f.dynamic) {
            more = next(path, *this);
        } else if (f.eligible_below && f.induction_in_place) {
            path.push_back(0);
        } else {
            // Replace this node, or the nearest ancestor of the right type.
            if (!f.has_dummy_type) path = walk_up(path);
            replace(path);
            more = next(path, *this);
        }
    }

    std::sort(replaced_.begin(), replaced_.end());
    RewriteResult out;
    std::vector<std::size_t> cursor;
    out.rewritten = build(root_, cursor, out);
    return out;
}

Expr Lifter::build(const Expr& e, std::vector<std::size_t>& path, RewriteResult& out) const {
    if (std::find(replaced_.begin(), replaced_.end(), path) != replaced_.end()) {
        std::string name = std::string(kReservedPrefix) + "Z" + std::to_string(out.dummies.size() + 1);
        IntRange domain{0, 1};
        if (dummy_type_.is_int()) {
            Interval r = interval_of(e, [&](std::string_view n) -> std::optional<Interval> {
                for (const auto& [iv, range] : ind_)
                    if (iv == n) return Interval::of(range);
                if (const ResolvedVar* v = scope_.find(n)) return Interval::of(v->values);
                return std::nullopt;
            });
            domain = {r.lo, r.hi};
        }
        out.dummies.push_back({name, dummy_type_, domain});
        out.replaced.emplace_back(name, e);
        return var_ref(name, e->span);
    }
    if (e->kids.empty()) return e;
    std::vector<Expr> kids;
    bool changed = false;
    for (std::size_t i = 0; i < e->kids.size(); ++i) {
        path.push_back(i);
        kids.push_back(build(e->kids[i], path, out));
        path.pop_back();
        changed = changed || kids.back() != e->kids[i];
    }
    return changed ? with_kids(e, std::move(kids)) : e;
}

}  // namespace

Staticness classify(const Expr& e, const std::set<std::string, std::less<>>& induction_vars) {
    bool dynamic = false;
    for_each_name(e, [&](const std::string& n) {
        dynamic = dynamic || (!induction_vars.count(n) && !is_reserved_name(n));
    });
    return dynamic ? Staticness::Dynamic : Staticness::Static;
}

Staticness classify(const Expr& e, const InductionVars& induction_vars) {
    bool dynamic = false;
    for_each_name(e, [&](const std::string& n) { dynamic = dynamic || is_decision_name(n, induction_vars); });
    return dynamic ? Staticness::Dynamic : Staticness::Static;
}

RewriteResult lift_static_guard(const Expr& return_expr, const InductionVars& induction_vars,
                                const Type& dummy_type, const Scope& scope) {
    Lifter lifter(return_expr, induction_vars, dummy_type, scope);
    return lifter.run();
}

Expr reconstruct(const RewriteResult& r) {
    std::map<std::string, Expr, std::less<>> m(r.replaced.begin(), r.replaced.end());
    return substitute(r.rewritten, m);
}

std::string to_string(const RewriteResult& r) {
    std::string out = "rewritten: " + to_string(r.rewritten) + "\n";
    for (std::size_t i = 0; i < r.dummies.size(); ++i) {
        const DummyVar& d = r.dummies[i];
        out += d.name + ": ";
        out += d.declared_type.is_bool()
                   ? std::string("bool")
                   : "int(" + std::to_string(d.domain.lo) + ".." + std::to_string(d.domain.hi) + ")";
        out += " replaces " + to_string(r.replaced[i].second) + "\n";
    }
    return out;
}

}  // namespace unroll
