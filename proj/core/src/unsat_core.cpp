#include "satforge/unsat_core.hpp"

#include <numeric>
#include <stdexcept>

namespace satforge {

UnsatCore extract_unsat_core(const CnfFormula& formula, const SolverConfig& config) {
    if (is_satisfiable(formula, config)) throw std::invalid_argument("cannot extract a core from a satisfiable formula");

    std::vector<std::size_t> kept(formula.num_clauses());
    std::iota(kept.begin(), kept.end(), std::size_t{0});

    // `kept` is always unsatisfiable; position `pos` walks over it in index order.
    for (std::size_t pos = 0; pos < kept.size();) {
        std::vector<std::size_t> trial;
        trial.reserve(kept.size() - 1);
        for (std::size_t i = 0; i < kept.size(); ++i)
            if (i != pos) trial.push_back(kept[i]);
        if (!is_satisfiable(formula.subformula(trial), config))
            kept = std::move(trial);
        else
            ++pos;
    }
    return UnsatCore{std::move(kept)};
}

std::vector<bool> unsat_core_variable_labels(const CnfFormula& formula, const UnsatCore& core) {
    std::vector<bool> labels(static_cast<std::size_t>(formula.num_vars()), false);
    for (std::size_t idx : core.clause_indices) {
        if (idx >= formula.num_clauses()) throw std::out_of_range("core clause index out of range");
        for (const Literal l : formula.clause(idx)) labels[static_cast<std::size_t>(l.variable() - 1)] = true;
    }
    return labels;
}

CnfFormula augment_with_learned_clauses(const CnfFormula& formula, std::size_t limit, const SolverConfig& config) {
    if (limit == 0) return formula;
    SolverConfig logging = config;
    logging.log_learned = true;
    SolveOutcome outcome = solve(formula, logging);
    CnfFormula augmented = formula;
    const std::size_t take = std::min(limit, outcome.learned_clauses.size());
    for (std::size_t i = 0; i < take; ++i) augmented.add_clause(std::move(outcome.learned_clauses[i]));
    augmented.metadata()["learned_clauses"] = std::to_string(take);
    return augmented;
}

} // namespace satforge
