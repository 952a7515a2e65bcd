#include "satforge/local_search.hpp"

#include <algorithm>
#include <limits>
#include <unordered_set>

namespace satforge {
namespace {

std::uint64_t zobrist_key(int variable) { return splitmix64(0x5a7f0e9eULL + static_cast<std::uint64_t>(variable)); }

/// Occurrence lists plus per-clause true-literal counts.
class GsatState {
public:
    explicit GsatState(const CnfFormula& formula) {
        // Repeated literals collapse; tautologies can never be unsatisfied and are dropped.
        for (const Clause& original : formula.clauses()) {
            Clause clause = original;
            std::sort(clause.begin(), clause.end());
            clause.erase(std::unique(clause.begin(), clause.end()), clause.end());
            bool tautology = false;
            for (const Literal l : clause) tautology = tautology || std::binary_search(clause.begin(), clause.end(), ~l);
            if (!tautology) clauses_.push_back(std::move(clause));
        }
        occurrences_.resize(static_cast<std::size_t>(formula.num_vars()) + 1);
        for (std::size_t c = 0; c < clauses_.size(); ++c)
            for (const Literal l : clauses_[c]) occurrences_[static_cast<std::size_t>(l.variable())].push_back({c, l});
        true_count_.resize(clauses_.size());
    }

    void reset(const Assignment& a) {
        assignment_ = a;
        unsat_ = 0;
        for (std::size_t c = 0; c < clauses_.size(); ++c) {
            int count = 0;
            for (const Literal l : clauses_[c])
                if (a.satisfies(l)) ++count;
            true_count_[c] = count;
            if (count == 0) ++unsat_;
        }
        hash_ = assignment_hash(a);
    }

    /// Change in the unsat count if `v` were flipped.
    long delta(int v) const {
        long d = 0;
        for (const auto& occ : occurrences_[static_cast<std::size_t>(v)]) {
            const bool now_true = assignment_.satisfies(occ.lit);
            const int count = true_count_[occ.clause];
            if (now_true && count == 1) ++d;
            if (!now_true && count == 0) --d;
        }
        return d;
    }

    void flip(int v) {
        for (const auto& occ : occurrences_[static_cast<std::size_t>(v)]) {
            int& count = true_count_[occ.clause];
            if (assignment_.satisfies(occ.lit)) {
                if (--count == 0) ++unsat_;
            } else {
                if (count++ == 0) --unsat_;
            }
        }
        assignment_.flip(v);
        hash_ ^= zobrist_key(v);
    }

    std::size_t unsat() const { return unsat_; }
    std::uint64_t hash() const { return hash_; }
    const Assignment& assignment() const { return assignment_; }

private:
    struct Occurrence {
        std::size_t clause;
        Literal lit;
    };
    std::vector<Clause> clauses_;
    std::vector<std::vector<Occurrence>> occurrences_;
    std::vector<int> true_count_;
    Assignment assignment_;
    std::size_t unsat_ = 0;
    std::uint64_t hash_ = 0;
};

} // namespace

std::uint64_t assignment_hash(const Assignment& assignment) {
    std::uint64_t h = 0;
    for (int v = 1; v <= assignment.num_vars(); ++v)
        if (assignment.value(v)) h ^= zobrist_key(v);
    return h;
}

LsResult gsat_run(const CnfFormula& formula, const LsConfig& config) {
    Rng rng(config.seed);
    return gsat_run(formula, config, rng);
}

LsResult gsat_run(const CnfFormula& formula, const LsConfig& config, Rng& rng) {
    const int n = formula.num_vars();
    GsatState state(formula);
    LsResult result;
    std::size_t step = 0;
    std::vector<int> best;

    for (std::size_t attempt = 0; attempt <= config.max_restarts; ++attempt) {
        Assignment start(n);
        for (int v = 1; v <= n; ++v) start.set(v, rng.coin());
        state.reset(start);
        result.trace.steps.push_back({step++, std::nullopt, state.unsat(), state.hash(), start});

        for (std::size_t flips = 0; state.unsat() > 0 && flips < config.max_flips && n > 0; ++flips) {
            long best_delta = std::numeric_limits<long>::max();
            best.clear();
            for (int v = 1; v <= n; ++v) {
                const long d = state.delta(v);
                if (d < best_delta) {
                    best_delta = d;
                    best.assign(1, v);
                } else if (d == best_delta) {
                    best.push_back(v);
                }
            }
            const int chosen = best[rng.below(best.size())];
            state.flip(chosen);
            result.trace.steps.push_back({step++, chosen, state.unsat(), state.hash(), std::nullopt});
        }
        if (state.unsat() == 0) break;
    }
    result.solved = state.unsat() == 0;
    result.assignment = state.assignment();
    return result;
}

TraceMetrics trace_metrics(const LsTrace& trace) {
    TraceMetrics m;
    m.flips.reserve(trace.steps.size());
    m.unsat_counts.reserve(trace.steps.size());
    std::unordered_set<std::uint64_t> hashes;
    for (const auto& s : trace.steps) {
        m.flips.push_back(s.flipped_var ? 1 : 0);
        m.unsat_counts.push_back(s.unsat_count);
        hashes.insert(s.assignment_hash);
    }
    m.distinct_assignments = hashes.size();
    return m;
}

} // namespace satforge
