#include <gtest/gtest.h>

#include "satforge/error.hpp"
#include "satforge/graph_record.hpp"
#include "test_support.hpp"

using namespace satforge;

namespace {

const CnfFormula kExample(3, {{Literal(1, true), Literal(2, false)},
                              {Literal(1, false), Literal(2, true), Literal(3, true)},
                              {Literal(2, true), Literal(3, false)}});

} // namespace

TEST(GraphRecord, ExactText) {
    GraphRecord r;
    r.family = "sr";
    r.difficulty = "easy";
    r.index = 7;
    r.graph = build_graph(CnfFormula(1, {{Literal(1, false)}}), GraphKind::LCG_STAR);
    r.labels.sat = true;
    r.labels.model = std::vector<bool>{false};
    EXPECT_EQ(serialize_graph_record(r),
              "graph sr easy 7 lcg* 1 1 1\n"
              "nodes 3\n0 literal\n1 literal\n2 clause\n"
              "edges 2\n1 2 occ\n0 1 negation\n"
              "labels model 0\n"
              "end\n");
}

TEST(GraphRecord, RoundTripAllKinds) {
    Rng rng(51);
    for (auto kind : {GraphKind::LCG, GraphKind::VCG, GraphKind::LIG, GraphKind::VIG, GraphKind::LCG_STAR,
                      GraphKind::VCG_STAR}) {
        for (int trial = 0; trial < 20; ++trial) {
            const CnfFormula f = support::random_formula(rng, static_cast<int>(rng.uniform_int(1, 12)),
                                                         static_cast<int>(rng.uniform_int(0, 30)), 4);
            GraphRecord r;
            r.family = "3sat";
            r.difficulty = "medium";
            r.index = rng.below(1000);
            r.graph = build_graph(f, kind);
            if (trial % 3 == 1) {
                r.labels.sat = false;
                std::vector<bool> bits(static_cast<std::size_t>(f.num_vars()));
                for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = rng.coin();
                r.labels.core_vars = bits;
            } else if (trial % 3 == 2) {
                r.labels.sat = true;
                r.labels.model = std::vector<bool>(static_cast<std::size_t>(f.num_vars()), true);
            }
            ASSERT_EQ(parse_graph_record(serialize_graph_record(r)), r);
        }
    }
}

TEST(GraphRecord, SeveralRecordsAndEmptyFormula) {
    GraphRecord a;
    a.graph = build_graph(CnfFormula(), GraphKind::VIG);
    GraphRecord b;
    b.graph = build_graph(kExample, GraphKind::LCG_STAR);
    const auto parsed = parse_graph_records(serialize_graph_record(a) + serialize_graph_record(b));
    ASSERT_EQ(parsed.size(), 2u);
    EXPECT_EQ(parsed[0], a);
    EXPECT_EQ(parsed[1], b);
    EXPECT_EQ(parsed[1].graph.count_edges(EdgeType::Negation), 3u);
    EXPECT_TRUE(parse_graph_records("").empty());
    EXPECT_THROW(parse_graph_record(""), DataError);
}

TEST(GraphRecord, WriteRejectsBadLabels) {
    GraphRecord r;
    r.graph = build_graph(kExample, GraphKind::VIG);
    r.labels.model = std::vector<bool>{true};
    EXPECT_THROW(serialize_graph_record(r), std::invalid_argument);
    r.labels.model.reset();
    r.family = "two words";
    EXPECT_THROW(serialize_graph_record(r), std::invalid_argument);
}

TEST(GraphRecord, MalformedInputs) {
    GraphRecord r;
    r.graph = build_graph(kExample, GraphKind::VCG);
    const std::string good = serialize_graph_record(r);
    EXPECT_NO_THROW(parse_graph_record(good));
    auto replace = [&](const std::string& from, const std::string& to) {
        std::string s = good;
        const auto pos = s.find(from);
        EXPECT_NE(pos, std::string::npos) << from;
        s.replace(pos, from.size(), to);
        return s;
    };
    for (const std::string& bad : {
             replace("graph - -", "grph - -"),
             replace("nodes 6", "nodes 5"),
             replace("0 variable", "1 variable"),
             replace("0 variable", "0 literal"),
             replace("0 variable", "0 vertex"),
             replace(" vcg ", " vig "),
             replace(" vcg ", " dag "),
             replace("0 3 occ", "0 9 occ"),
             replace("0 3 occ", "0 3 sideways"),
             replace("end\n", ""),
             replace("end\n", "labels model 01\nend\n"),
             replace("end\n", "labels model 0x1\nend\n"),
             replace("end\n", "labels wrong 010\nend\n"),
             replace("edges 7", "edges 8"),
         })
        EXPECT_THROW(parse_graph_record(bad), DataError) << bad;
    EXPECT_THROW(parse_graph_record(good + good), DataError);
}

TEST(Bits, RoundTrip) {
    EXPECT_EQ(bits_to_string({true, false, true}), "101");
    EXPECT_EQ(bits_from_string("0110"), (std::vector<bool>{false, true, true, false}));
    EXPECT_TRUE(bits_from_string("").empty());
    EXPECT_THROW(bits_from_string("012"), DataError);
}
