#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "unroll/deadline.hpp"
#include "unroll/genmodel.hpp"
#include "unroll/value.hpp"

namespace unroll {

/// One solution projected onto the branching variables, in branching order.
struct Assignment {
    std::vector<std::pair<std::string, Value>> bindings;

    const Value& operator[](std::string_view name) const;
    friend bool operator==(const Assignment&, const Assignment&) = default;
};

/// How non-branching variables are decided once every branching variable
/// has a value.
enum class ExistentialMode {
    /// Search the variables' domains for a satisfying witness.
    Enumerate,
    /// Treat them as unknowns and reject only when the constraints reduce to
    /// false under the simplifier's rules. Never rejects more than
    /// Enumerate; used for comprehension expansion so the generator model is
    /// never stronger than the simplifier.
    Symbolic,
};

struct SolveOptions {
    ExistentialMode existential = ExistentialMode::Enumerate;
    /// Check a constraint as soon as its branching variables are assigned,
    /// rather than only at the leaves.
    bool eager_checks = true;
    /// Interval bounds propagation on comparison conjuncts over branching
    /// variables.
    bool propagate = true;
    const Deadline* deadline = nullptr;
};

/// Called once per solution with the branching values in branching order.
using SolutionVisitor = std::function<void(std::span<const Value>)>;

/// Depth-first enumeration in lexicographic order of the branching list
/// (ascending domain values). Each branching assignment is reported once.
/// Evaluation errors are rethrown with the partial assignment attached.
void for_each_solution(const GeneratorModel& g, const SolveOptions& options,
                       const SolutionVisitor& visit);

std::vector<Assignment> solve_all(const GeneratorModel& g, const SolveOptions& options = {});
std::uint64_t count_solutions(const GeneratorModel& g, const SolveOptions& options = {});

}  // namespace unroll
