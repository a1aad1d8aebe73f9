#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "unroll/ast.hpp"
#include "unroll/deadline.hpp"
#include "unroll/fdsolver.hpp"
#include "unroll/genmodel.hpp"

namespace unroll {

enum class Pipeline { Naive, SolverAidedSimple, SolverAidedFull };

const char* pipeline_name(Pipeline p);
/// Accepts naive | solver-aided-simple | solver-aided-full.
Pipeline parse_pipeline(std::string_view name);
inline constexpr Pipeline kAllPipelines[] = {Pipeline::Naive, Pipeline::SolverAidedSimple,
                                             Pipeline::SolverAidedFull};

struct ExpansionStats {
    using Duration = std::chrono::nanoseconds;

    std::uint64_t combinations_considered = 0;
    std::uint64_t items_emitted = 0;
    std::uint64_t items_discarded_as_identity = 0;
    Duration generator_solve_time{};
    Duration substitution_time{};
    Duration total_time{};

    ExpansionStats& operator+=(const ExpansionStats& other);
};

/// Output of the compiler: declarations plus flat constraints.
struct FlatModel {
    std::vector<Declaration> decision_vars;
    std::vector<Expr> constraints;  // no comprehension or quantifier left; simplified
};

struct ExpandOptions {
    const Deadline* deadline = nullptr;
    /// Skips item simplification in the solver-aided pipelines. Exists only
    /// so `compare` can demonstrate that it detects divergence.
    bool break_simplifier_for_testing = false;
    /// Overrides for the generator-model search.
    bool propagate = true;
    bool eager_checks = true;
    ExistentialMode existential = ExistentialMode::Symbolic;
};

/// Rewrites forAll into and([...]) and exists into or([...]) over guard-free
/// comprehensions, bottom-up.
Expr lower_quantifiers(const Expr& e);

/// Expands one comprehension by enumerating the cross product of its
/// generator domains. `host` is the Aggregate or AllDiff node that owns the
/// comprehension; the result replaces it.
std::pair<Expr, ExpansionStats> expand_naive(const Expr& host, const Scope& scope,
                                             const ExpandOptions& options = {});

/// Expands one comprehension by solving its generator model and substituting
/// each solution into the original return expression. Output is identical
/// to expand_naive.
std::pair<Expr, ExpansionStats> expand_solver_aided(const Expr& host, const Scope& scope,
                                                    GeneratorMode mode,
                                                    const ExpandOptions& options = {});

/// Flattens every constraint of a bound model, in declaration order.
/// Top-level conjunctions are split into separate constraints and `true`
/// constraints dropped.
std::pair<FlatModel, ExpansionStats> flatten(const Model& bound_model, Pipeline pipeline,
                                             const ExpandOptions& options = {});

/// Calls `fn(host)` for every Aggregate/AllDiff-over-comprehension in the
/// (quantifier-lowered) constraints of `m`, in order.
void for_each_comprehension(const Model& m, const std::function<void(const Expr&)>& fn);

/// `find ...` lines followed by `such that` and one constraint per line.
std::string to_string(const FlatModel& fm);

}  // namespace unroll
