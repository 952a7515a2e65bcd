#include <gtest/gtest.h>

#include <set>

#include "satforge/local_search.hpp"
#include "test_support.hpp"

using namespace satforge;

namespace {

/// Walks a trace, rebuilding each assignment from the try's initial record,
/// and checks it against the recorded counts and hashes and the greedy rule.
void check_trace(const CnfFormula& f, const LsConfig& config, const LsResult& r) {
    ASSERT_FALSE(r.trace.steps.empty());
    Assignment a;
    std::size_t tries = 0;
    std::size_t flips_in_try = 0;
    for (std::size_t s = 0; s < r.trace.steps.size(); ++s) {
        const LsStep& step = r.trace.steps[s];
        ASSERT_EQ(step.step, s);
        if (!step.flipped_var) {
            ASSERT_TRUE(step.initial_assignment.has_value());
            a = *step.initial_assignment;
            ++tries;
            flips_in_try = 0;
        } else {
            ASSERT_FALSE(step.initial_assignment.has_value());
            // The chosen flip must be among the best available flips.
            std::size_t best = SIZE_MAX;
            for (int v = 1; v <= f.num_vars(); ++v) {
                a.flip(v);
                best = std::min(best, count_unsat(f, a));
                a.flip(v);
            }
            const std::size_t before = count_unsat(f, a);
            a.flip(*step.flipped_var);
            const std::size_t after = count_unsat(f, a);
            ASSERT_EQ(after, best);
            if (best < before) ASSERT_LT(after, before);
            ++flips_in_try;
            ASSERT_LE(flips_in_try, config.max_flips);
        }
        ASSERT_EQ(step.unsat_count, count_unsat(f, a));
        ASSERT_EQ(step.assignment_hash, assignment_hash(a));
    }
    ASSERT_LE(tries, config.max_restarts + 1);
    EXPECT_EQ(r.assignment, a);
    EXPECT_EQ(r.solved, evaluate(f, a).satisfied);
}

} // namespace

TEST(Gsat, TracesFollowGreedyRule) {
    Rng rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = static_cast<int>(rng.uniform_int(3, 20));
        const CnfFormula f = support::random_formula(rng, n, static_cast<int>(rng.uniform_int(1, 5 * n)), 4, true);
        LsConfig config;
        config.max_flips = static_cast<std::size_t>(rng.uniform_int(1, 40));
        config.max_restarts = static_cast<std::size_t>(rng.uniform_int(0, 3));
        config.seed = rng.next();
        check_trace(f, config, gsat_run(f, config));
    }
}

TEST(Gsat, SolvesEasyFormulaAndStops) {
    const CnfFormula f(3, {{Literal(1, true)}, {Literal(2, true)}, {Literal(3, false)}});
    LsConfig config;
    config.seed = 4;
    const LsResult r = gsat_run(f, config);
    EXPECT_TRUE(r.solved);
    EXPECT_EQ(r.trace.steps.back().unsat_count, 0u);
    EXPECT_LE(r.trace.steps.size(), 4u);
}

TEST(Gsat, UnsatFormulaUsesWholeBudget) {
    const CnfFormula f(1, {{Literal(1, true)}, {Literal(1, false)}});
    LsConfig config;
    config.max_flips = 5;
    config.max_restarts = 2;
    const LsResult r = gsat_run(f, config);
    EXPECT_FALSE(r.solved);
    EXPECT_EQ(r.trace.steps.size(), 3u * 6u);
}

TEST(Gsat, EmptyFormula) {
    const LsResult r = gsat_run(CnfFormula(), LsConfig{});
    EXPECT_TRUE(r.solved);
    EXPECT_EQ(r.trace.steps.size(), 1u);
}

TEST(Gsat, DeterministicPerSeed) {
    Rng rng(32);
    const CnfFormula f = support::random_formula(rng, 20, 90, 3);
    LsConfig config;
    config.seed = 77;
    config.max_restarts = 3;
    const LsResult a = gsat_run(f, config);
    const LsResult b = gsat_run(f, config);
    ASSERT_EQ(a.trace.steps.size(), b.trace.steps.size());
    for (std::size_t i = 0; i < a.trace.steps.size(); ++i) {
        EXPECT_EQ(a.trace.steps[i].flipped_var, b.trace.steps[i].flipped_var);
        EXPECT_EQ(a.trace.steps[i].assignment_hash, b.trace.steps[i].assignment_hash);
    }
}

TEST(Gsat, TiesBrokenUniformly) {
    // From x1 = x2 = false both flips repair (x1 | x2) equally.
    const CnfFormula f(2, {{Literal(1, true), Literal(2, true)}});
    int first = 0, total = 0;
    for (std::uint64_t seed = 0; seed < 4000; ++seed) {
        LsConfig config;
        config.seed = seed;
        const LsResult r = gsat_run(f, config);
        if (r.trace.steps.size() < 2) continue;
        const Assignment& init = *r.trace.steps[0].initial_assignment;
        if (init.value(1) || init.value(2)) continue;
        ++total;
        if (*r.trace.steps[1].flipped_var == 1) ++first;
    }
    ASSERT_GT(total, 600);
    EXPECT_NEAR(static_cast<double>(first) / total, 0.5, 0.07);
}

TEST(Gsat, TautologiesDoNotDistortDeltas) {
    const CnfFormula f(2, {{Literal(1, true), Literal(1, false)}, {Literal(2, true)}});
    LsConfig config;
    config.max_flips = 10;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        config.seed = seed;
        const LsResult r = gsat_run(f, config);
        check_trace(f, config, r);
        EXPECT_TRUE(r.solved);
    }
}

TEST(TraceMetrics, CountsFlipsAndDistinctAssignments) {
    const CnfFormula f(1, {{Literal(1, true)}, {Literal(1, false)}});
    LsConfig config;
    config.max_flips = 4;
    const LsResult r = gsat_run(f, config);
    const TraceMetrics m = trace_metrics(r.trace);
    EXPECT_EQ(m.flips, (std::vector<int>{0, 1, 1, 1, 1}));
    EXPECT_EQ(m.unsat_counts, (std::vector<std::size_t>{1, 1, 1, 1, 1}));
    EXPECT_EQ(m.distinct_assignments, 2u);
}

TEST(AssignmentHash, DistinguishesAssignments) {
    std::set<std::uint64_t> hashes;
    for (std::uint32_t bits = 0; bits < 1024; ++bits) {
        Assignment a(10);
        for (int v = 1; v <= 10; ++v) a.set(v, bits >> (v - 1) & 1u);
        hashes.insert(assignment_hash(a));
    }
    EXPECT_EQ(hashes.size(), 1024u);
}
