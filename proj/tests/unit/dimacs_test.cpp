#include <gtest/gtest.h>

#include "satforge/dimacs.hpp"
#include "satforge/error.hpp"
#include "test_support.hpp"

using namespace satforge;

TEST(Dimacs, ParsesMinimalContradiction) {
    const CnfFormula f = parse_dimacs("p cnf 1 2\n1 0\n-1 0\n");
    EXPECT_EQ(f.num_vars(), 1);
    ASSERT_EQ(f.num_clauses(), 2u);
    EXPECT_EQ(f.clause(0), Clause{Literal(1, true)});
    EXPECT_EQ(f.clause(1), Clause{Literal(1, false)});
}

TEST(Dimacs, ParsesSingleClause) {
    const CnfFormula f = parse_dimacs("p cnf 3 1\n1 -2 3 0\n");
    EXPECT_EQ(f.num_vars(), 3);
    ASSERT_EQ(f.num_clauses(), 1u);
    EXPECT_EQ(f.clause(0), (Clause{Literal(1, true), Literal(2, false), Literal(3, true)}));
}

TEST(Dimacs, WritesCanonicalText) {
    EXPECT_EQ(write_dimacs(CnfFormula()), "p cnf 0 0\n");
    const CnfFormula f(1, {{Literal(1, true)}, {Literal(1, false)}});
    EXPECT_EQ(write_dimacs(f), "p cnf 1 2\n1 0\n-1 0\n");
}

TEST(Dimacs, ToleratesCommentsAndWhitespace) {
    const CnfFormula f = parse_dimacs("c hello\n\n  p  cnf\t2 2 \nc mid\n1\n -2 0 2\n0\n");
    ASSERT_EQ(f.num_clauses(), 2u);
    EXPECT_EQ(f.clause(0), (Clause{Literal(1, true), Literal(2, false)}));
    EXPECT_EQ(f.clause(1), Clause{Literal(2, true)});
}

TEST(Dimacs, StopsAtPercentTrailer) {
    const CnfFormula f = parse_dimacs("p cnf 2 1\n1 2 0\n%\n0\n");
    EXPECT_EQ(f.num_clauses(), 1u);
}

TEST(Dimacs, DeduplicatesLiteralsAndKeepsTautologies) {
    const CnfFormula f = parse_dimacs("p cnf 2 2\n1 1 -2 1 0\n2 -2 0\n");
    EXPECT_EQ(f.clause(0), (Clause{Literal(1, true), Literal(2, false)}));
    EXPECT_EQ(f.clause(1), (Clause{Literal(2, true), Literal(2, false)}));
}

TEST(Dimacs, RejectsMalformedInput) {
    EXPECT_THROW(parse_dimacs("1 0\n"), DataError);                     // no header
    EXPECT_THROW(parse_dimacs("p cnf x 1\n1 0\n"), DataError);          // bad header
    EXPECT_THROW(parse_dimacs("p dnf 1 1\n1 0\n"), DataError);          // wrong format tag
    EXPECT_THROW(parse_dimacs("p cnf 1 1\np cnf 1 1\n1 0\n"), DataError);
    EXPECT_THROW(parse_dimacs("p cnf 2 1\n3 0\n"), DataError);          // literal > n
    EXPECT_THROW(parse_dimacs("p cnf 2 1\n1 2\n"), DataError);          // missing 0
    EXPECT_THROW(parse_dimacs("p cnf 2 2\n1 0\n"), DataError);          // too few clauses
    EXPECT_THROW(parse_dimacs("p cnf 2 1\n1 0\n2 0\n"), DataError);     // too many
    EXPECT_THROW(parse_dimacs("p cnf 2 1\n1 a 0\n"), DataError);
    EXPECT_THROW(parse_dimacs("p cnf -1 0\n"), DataError);
}

TEST(Dimacs, ProvenanceRoundTrip) {
    CnfFormula f(2, {{Literal(1, true), Literal(2, false)}});
    f.metadata()["family"] = "sr";
    f.metadata()["seed"] = "42";
    const std::string text = write_dimacs(f);
    EXPECT_EQ(text, "c provenance: family=sr\nc provenance: seed=42\np cnf 2 1\n1 -2 0\n");
    EXPECT_EQ(parse_dimacs(text), f);
    EXPECT_EQ(write_dimacs(f, false), "p cnf 2 1\n1 -2 0\n");
}

TEST(Dimacs, RoundTripRandomFormulas) {
    Rng rng(5);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = static_cast<int>(rng.uniform_int(0, 30));
        const int m = n == 0 ? 0 : static_cast<int>(rng.uniform_int(0, 60));
        const CnfFormula f = n == 0 ? CnfFormula() : support::random_formula(rng, n, m, 6);
        const std::string text = write_dimacs(f);
        const CnfFormula g = parse_dimacs(text);
        ASSERT_EQ(g, f);
        ASSERT_EQ(write_dimacs(g), text);
    }
}

TEST(Dimacs, RoundTripGeneratedFormulas) {
    for (Family family : kAllFamilies) {
        GeneratorConfig config{family, Difficulty::Easy, 99};
        for (std::uint64_t i = 0; i < 5; ++i) {
            const auto inst = sample_instance(config, i);
            const CnfFormula& f = support::primary_formula(inst);
            EXPECT_EQ(parse_dimacs(write_dimacs(f)), f) << to_string(family) << " " << i;
        }
    }
}

TEST(Dimacs, FileRoundTrip) {
    support::TempDir dir("dimacs");
    CnfFormula f(3, {{Literal(1, true), Literal(3, false)}, {Literal(2, true)}});
    const auto path = (dir.path() / "f.cnf").string();
    write_dimacs_file(f, path);
    EXPECT_EQ(read_dimacs_file(path), f);
    EXPECT_THROW(read_dimacs_file((dir.path() / "missing.cnf").string()), DataError);
}
