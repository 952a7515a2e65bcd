#pragma once

#include <cstddef>
#include <vector>

#include "satforge/cnf.hpp"
#include "satforge/solver.hpp"

namespace satforge {

struct UnsatCore {
    std::vector<std::size_t> clause_indices;  ///< ascending, into the input formula
};

/// Deletion-based minimization: every clause is tried once, in index order,
/// and dropped if the rest stays unsatisfiable. The result is
/// deletion-minimal. Throws std::invalid_argument if the formula is
/// satisfiable, IndeterminateError if a re-solve runs out of budget.
UnsatCore extract_unsat_core(const CnfFormula& formula, const SolverConfig& config = {});

/// label[v-1] is true iff x_v occurs (either polarity) in a core clause.
std::vector<bool> unsat_core_variable_labels(const CnfFormula& formula, const UnsatCore& core);

/// Appends the first min(limit, total) learned clauses, in derivation order,
/// from a complete solve of `formula`.
constexpr std::size_t kDefaultAugmentLimit = 1000;
CnfFormula augment_with_learned_clauses(const CnfFormula& formula, std::size_t limit = kDefaultAugmentLimit,
                                        const SolverConfig& config = {});

} // namespace satforge
