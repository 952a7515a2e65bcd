#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "satforge/cnf.hpp"

namespace satforge {

enum class SolveStatus { Sat, Unsat };

struct SolverConfig {
    double var_decay = 0.95;            ///< activity decay in (0,1)
    double clause_decay = 0.999;
    std::uint64_t restart_base = 100;   ///< conflicts per Luby unit
    std::size_t max_learned = 0;        ///< learned clauses kept before reduction; 0 keeps all
    std::uint64_t conflict_budget = 0;  ///< 0 = unlimited
    bool log_learned = true;

    /// Throws std::invalid_argument when out of range.
    void validate() const;
};

struct SolveStats {
    std::uint64_t conflicts = 0;
    std::uint64_t decisions = 0;
    std::uint64_t propagations = 0;
    std::uint64_t restarts = 0;
};

struct SolveOutcome {
    SolveStatus status = SolveStatus::Unsat;
    std::optional<Assignment> model;     ///< present iff Sat
    std::vector<Clause> learned_clauses; ///< derivation order
    SolveStats stats;

    bool sat() const { return status == SolveStatus::Sat; }
};

/// CDCL search: two watched literals, first-UIP learning, VSIDS-style
/// activities, Luby restarts and phase saving. Every model is checked with
/// evaluate() before it is returned. Throws IndeterminateError when the
/// conflict budget runs out.
SolveOutcome solve(const CnfFormula& formula, const SolverConfig& config = {});

/// Convenience wrapper returning only satisfiability.
bool is_satisfiable(const CnfFormula& formula, const SolverConfig& config = {});

/// Exhaustive search. Models are enumerated with x1 as the most significant
/// bit and false < true; the first model in that order is returned.
/// Throws std::invalid_argument above kBruteForceMaxVars variables.
constexpr int kBruteForceMaxVars = 26;
SolveOutcome brute_force(const CnfFormula& formula);

/// All models as bitmasks (bit v-1 holds x_v), in enumeration order.
std::vector<std::uint32_t> enumerate_models(const CnfFormula& formula);

} // namespace satforge
