#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "satforge/cnf.hpp"
#include "satforge/rng.hpp"

namespace satforge {

struct LsConfig {
    std::size_t max_flips = 32;   ///< flips per try
    std::size_t max_restarts = 0; ///< extra tries after the first
    std::uint64_t seed = 0;
};

/// One record per state visited. A try starts with a record whose
/// `flipped_var` is empty and whose `initial_assignment` is set.
struct LsStep {
    std::size_t step = 0;
    std::optional<int> flipped_var;
    std::size_t unsat_count = 0;
    std::uint64_t assignment_hash = 0;
    std::optional<Assignment> initial_assignment;
};

struct LsTrace {
    std::vector<LsStep> steps;
};

struct LsResult {
    bool solved = false;
    Assignment assignment;
    LsTrace trace;
};

/// Zobrist hash of an assignment; stable across runs.
std::uint64_t assignment_hash(const Assignment& assignment);

/// Greedy local search. Every step flips a variable whose flip yields the
/// fewest unsatisfied clauses, including sideways and uphill moves; ties are
/// broken uniformly at random. Stops on a model or when the flip budget of
/// every try is spent.
LsResult gsat_run(const CnfFormula& formula, const LsConfig& config);
LsResult gsat_run(const CnfFormula& formula, const LsConfig& config, Rng& rng);

struct TraceMetrics {
    std::vector<int> flips;                 ///< 1 if the record flipped a variable, else 0
    std::vector<std::size_t> unsat_counts;
    std::size_t distinct_assignments = 0;
};

TraceMetrics trace_metrics(const LsTrace& trace);

} // namespace satforge
