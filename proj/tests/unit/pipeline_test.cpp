#include <gtest/gtest.h>

#include <cstdlib>
#include <set>
#include <tuple>

#include "satforge/dimacs.hpp"
#include "satforge/error.hpp"
#include "satforge/graph_record.hpp"
#include "satforge/pipeline.hpp"
#include "test_support.hpp"

using namespace satforge;
namespace fs = std::filesystem;
using support::slurp;
using support::TempDir;

namespace {

DatasetConfig small_config(Family family, std::size_t pairs, std::uint64_t seed = 5) {
    DatasetConfig c;
    c.generator.family = family;
    c.generator.master_seed = seed;
    c.train_pairs = pairs;
    c.valid_pairs = 1;
    c.test_pairs = 1;
    c.jobs = 1;
    return c;
}

std::vector<std::pair<std::string, std::string>> tree(const fs::path& root) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& entry : fs::recursive_directory_iterator(root))
        if (entry.is_regular_file()) out.emplace_back(fs::relative(entry.path(), root).string(), slurp(entry.path()));
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

TEST(Names, SplitAndStatus) {
    for (Split s : {Split::Train, Split::Valid, Split::Test}) EXPECT_EQ(parse_split(to_string(s)), s);
    EXPECT_EQ(parse_status("SAT"), SolveStatus::Sat);
    EXPECT_EQ(parse_status("UNSAT"), SolveStatus::Unsat);
    EXPECT_THROW(parse_status("maybe"), std::invalid_argument);
    EXPECT_THROW(parse_split("dev"), std::invalid_argument);
}

TEST(Manifest, LineFormatAndRoundTrip) {
    ManifestEntry e;
    e.family = Family::ThreeSat;
    e.difficulty = Difficulty::Medium;
    e.index = 12;
    e.seed = 99;
    e.params = {{"n", "30"}, {"m", "128"}};
    e.path = "valid/3sat_medium_12_unsat.cnf";
    e.status = SolveStatus::Unsat;
    e.split = Split::Valid;
    const std::string line = manifest_line(e);
    EXPECT_EQ(line, R"({"family":"3sat","difficulty":"medium","index":12,"seed":99,"params":{"m":"128","n":"30"},)"
                    R"("path":"valid/3sat_medium_12_unsat.cnf","status":"UNSAT","split":"valid"})");
    EXPECT_EQ(parse_manifest_line(line), e);
    for (const char* bad : {"", "{", "[]", R"({"family":"nope"})", R"({"family":"sr","difficulty":"easy"})"})
        EXPECT_THROW(parse_manifest_line(bad), DataError) << bad;

    TempDir dir("manifest");
    write_manifest(dir.path() / "m.jsonl", {e, e});
    EXPECT_EQ(read_manifest(dir.path() / "m.jsonl"), (Manifest{e, e}));
    std::ofstream(dir.path() / "bad.jsonl") << line << "\nnot json\n";
    EXPECT_THROW(read_manifest(dir.path() / "bad.jsonl"), DataError);
}

TEST(Labels, RoundTripAndErrors) {
    InstanceLabel sat;
    sat.model = Assignment::from_bits("0110");
    EXPECT_EQ(write_label(sat), "status SAT\nmodel 0110\n");
    EXPECT_EQ(parse_label(write_label(sat)), sat);
    InstanceLabel unsat;
    unsat.status = SolveStatus::Unsat;
    unsat.core_clauses = {0, 4, 7};
    unsat.core_vars = {true, false, true};
    EXPECT_EQ(write_label(unsat), "status UNSAT\ncore 0 4 7\ncore_vars 101\n");
    EXPECT_EQ(parse_label(write_label(unsat)), unsat);
    for (const char* bad : {"", "status SAT\n", "status UNSAT\ncore 1\n", "status X\n", "status SAT\nmodel 0a\n",
                            "status UNSAT\ncore 1 x\ncore_vars 1\n", "status SAT\nmodel 1\nextra 2\n"})
        EXPECT_THROW(parse_label(bad), DataError) << bad;
}

TEST(Jobs, ResolutionOrder) {
    EXPECT_EQ(resolve_jobs(3), 3u);
    ::setenv(kJobsEnv, "2", 1);
    EXPECT_EQ(resolve_jobs(0), 2u);
    EXPECT_EQ(resolve_jobs(5), 5u);
    ::setenv(kJobsEnv, "zero", 1);
    EXPECT_THROW(resolve_jobs(0), std::invalid_argument);
    ::unsetenv(kJobsEnv);
    EXPECT_GE(resolve_jobs(0), 1u);
}

TEST(Generate, SrSinglePair) {
    TempDir dir("gen_sr1");
    DatasetConfig c = small_config(Family::SR, 1);
    c.valid_pairs = c.test_pairs = 0;
    const GenerateReport r = generate_dataset(c, dir.path());
    ASSERT_EQ(r.manifest.size(), 2u);
    EXPECT_EQ(r.manifest[0].path, "train/sr_easy_0_sat.cnf");
    EXPECT_EQ(r.manifest[1].path, "train/sr_easy_0_unsat.cnf");
    EXPECT_EQ(tree(dir.path()).size(), 3u);
    const CnfFormula sat = read_dimacs_file((dir.path() / r.manifest[0].path).string());
    const CnfFormula unsat = read_dimacs_file((dir.path() / r.manifest[1].path).string());
    EXPECT_TRUE(solve(sat).sat());
    EXPECT_FALSE(solve(unsat).sat());
    EXPECT_EQ(read_manifest(dir.path() / kManifestName), r.manifest);
}

TEST(Generate, ByteDeterministicAcrossWorkerCounts) {
    for (Family family : {Family::SR, Family::ThreeSat, Family::KClique}) {
        TempDir a("det_a"), b("det_b");
        DatasetConfig c = small_config(family, 4, 17);
        generate_dataset(c, a.path());
        c.jobs = 3;
        generate_dataset(c, b.path());
        EXPECT_EQ(tree(a.path()), tree(b.path())) << to_string(family);
    }
}

TEST(Generate, BalancedSplitsWithUniqueKeys) {
    TempDir dir("gen_3sat");
    DatasetConfig c = small_config(Family::ThreeSat, 10);
    c.valid_pairs = 3;
    c.test_pairs = 2;
    const GenerateReport r = generate_dataset(c, dir.path());
    std::map<std::pair<Split, SolveStatus>, int> counts;
    std::set<std::tuple<Family, Difficulty, std::uint64_t, SolveStatus>> keys;
    std::set<std::uint64_t> indices;
    for (const auto& e : r.manifest) {
        ++counts[{e.split, e.status}];
        EXPECT_TRUE(keys.emplace(e.family, e.difficulty, e.index, e.status).second);
        EXPECT_TRUE(indices.insert(e.index).second);
        EXPECT_EQ(e.seed, instance_seed(5, Family::ThreeSat, e.index));
        const CnfFormula f = read_dimacs_file((dir.path() / e.path).string());
        EXPECT_EQ(solve(f).status, e.status);
        EXPECT_EQ(e.params.at("n"), std::to_string(f.num_vars()));
    }
    EXPECT_EQ((counts[{Split::Train, SolveStatus::Sat}]), 10);
    EXPECT_EQ((counts[{Split::Train, SolveStatus::Unsat}]), 10);
    EXPECT_EQ((counts[{Split::Valid, SolveStatus::Sat}]), 3);
    EXPECT_EQ((counts[{Split::Test, SolveStatus::Unsat}]), 2);
    EXPECT_EQ(r.draws, r.manifest.size() + r.rejected + r.indeterminate);
}

TEST(Generate, StarvationIsReported) {
    TempDir dir("starve");
    DatasetConfig c = small_config(Family::ThreeSat, 2);
    c.generator.difficulty = Difficulty::Hard;
    c.generator.solver.conflict_budget = 1;
    c.budget_factor = 1;
    try {
        generate_dataset(c, dir.path());
        FAIL() << "expected GenerationError";
    } catch (const GenerationError& e) {
        EXPECT_NE(std::string(e.what()).find("bucket starvation"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("SAT ratio"), std::string::npos);
    }
    EXPECT_FALSE(fs::exists(dir.path() / kManifestName));
}

TEST(Label, WritesVerifiedLabels) {
    TempDir dir("label");
    const GenerateReport gen = generate_dataset(small_config(Family::SR, 3), dir.path());
    const LabelReport r = label_dataset(dir.path(), {}, 2);
    EXPECT_EQ(r.labeled, gen.manifest.size());
    EXPECT_TRUE(r.quarantined.empty());
    const Dataset d{dir.path(), gen.manifest};
    for (const auto& e : gen.manifest) {
        const CnfFormula f = read_dimacs_file(instance_path(d, e).string());
        const InstanceLabel label = parse_label(slurp(label_path(d, e)));
        ASSERT_EQ(label.status, e.status);
        if (e.status == SolveStatus::Sat) {
            EXPECT_TRUE(evaluate(f, *label.model).satisfied);
        } else {
            EXPECT_FALSE(solve(f.subformula(label.core_clauses)).sat());
            EXPECT_EQ(label.core_vars.size(), static_cast<std::size_t>(f.num_vars()));
        }
    }
    EXPECT_FALSE(fs::exists(dir.path() / kQuarantineName));
}

TEST(Label, BudgetExhaustionQuarantines) {
    TempDir dir("quarantine");
    DatasetConfig c = small_config(Family::ThreeSat, 2);
    c.generator.difficulty = Difficulty::Medium;
    const GenerateReport gen = generate_dataset(c, dir.path());
    SolverConfig tight;
    tight.conflict_budget = 1;
    const LabelReport r = label_dataset(dir.path(), tight, 1);
    EXPECT_FALSE(r.quarantined.empty());
    EXPECT_EQ(r.labeled + r.quarantined.size(), gen.manifest.size());
    EXPECT_EQ(read_manifest(dir.path() / kQuarantineName), r.quarantined);
    const Dataset d{dir.path(), gen.manifest};
    for (const auto& e : r.quarantined) EXPECT_FALSE(fs::exists(label_path(d, e)));
    // A full run clears the quarantine.
    EXPECT_EQ(label_dataset(dir.path(), {}, 1).labeled, gen.manifest.size());
    EXPECT_FALSE(fs::exists(dir.path() / kQuarantineName));
}

TEST(Label, ManifestMismatchIsDataError) {
    TempDir dir("mismatch");
    GenerateReport gen = generate_dataset(small_config(Family::SR, 1), dir.path());
    for (auto& e : gen.manifest) e.status = e.status == SolveStatus::Sat ? SolveStatus::Unsat : SolveStatus::Sat;
    write_manifest(dir.path() / kManifestName, gen.manifest);
    EXPECT_THROW(label_dataset(dir.path(), {}, 1), DataError);
}

TEST(Label, MissingDirectoryOrManifest) {
    EXPECT_THROW(label_dataset("/nonexistent/satforge"), DataError);
    TempDir dir("empty");
    EXPECT_THROW(label_dataset(dir.path()), DataError);
}

TEST(Augment, LimitZeroCopiesAndLimitBounds) {
    TempDir dir("augment");
    const GenerateReport gen = generate_dataset(small_config(Family::ThreeSat, 2), dir.path());
    const Dataset d{dir.path(), gen.manifest};
    const AugmentReport zero = augment_dataset(dir.path(), 0, {}, 1);
    EXPECT_EQ(zero.written, gen.manifest.size());
    EXPECT_EQ(zero.clauses_added, 0u);
    for (const auto& e : gen.manifest) {
        const CnfFormula a = read_dimacs_file(augmented_path(d, e).string());
        const CnfFormula o = read_dimacs_file(instance_path(d, e).string());
        EXPECT_EQ(a.clauses(), o.clauses());
    }
    const AugmentReport some = augment_dataset(dir.path(), 3, {}, 2);
    EXPECT_LE(some.max_added, 3u);
    for (const auto& e : gen.manifest) {
        const CnfFormula a = read_dimacs_file(augmented_path(d, e).string());
        const CnfFormula o = read_dimacs_file(instance_path(d, e).string());
        EXPECT_EQ(a.num_clauses() - o.num_clauses(), std::stoul(a.metadata().at("learned_clauses")));
        EXPECT_EQ(std::vector<Clause>(a.clauses().begin(), a.clauses().begin() + static_cast<long>(o.num_clauses())),
                  o.clauses());
        EXPECT_EQ(solve(a).status, e.status);
    }
}

TEST(Stats, RowsPerGroup) {
    TempDir dir("stats");
    generate_dataset(small_config(Family::SR, 2), dir.path() / "sr");
    DatasetConfig c = small_config(Family::ThreeSat, 2);
    generate_dataset(c, dir.path() / "3sat");
    const auto rows = stats_report(dir.path(), 1);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0].family, Family::SR);
    EXPECT_EQ(rows[0].instances, 8u);
    EXPECT_EQ(rows[1].family, Family::ThreeSat);
    EXPECT_GT(rows[1].clauses, rows[1].variables);
    const std::string table = render_stats_table(rows);
    EXPECT_NE(table.find("Mod.(LCG)"), std::string::npos);
    EXPECT_EQ(std::count(table.begin(), table.end(), '\n'), 3);
    const std::string jsonl = render_stats_jsonl(rows);
    EXPECT_EQ(std::count(jsonl.begin(), jsonl.end(), '\n'), 2);
    EXPECT_EQ(jsonl.rfind(R"({"family":"sr","difficulty":"easy","instances":8,)", 0), 0u);

    EXPECT_EQ(summarize_formulas({}, Family::CA, Difficulty::Hard).instances, 0u);
    TempDir empty("stats_empty");
    write_manifest(empty.path() / kManifestName, {});
    EXPECT_TRUE(stats_report(empty.path()).empty());
    std::ofstream(empty.path() / kManifestName) << "{broken\n";
    EXPECT_THROW(stats_report(empty.path()), DataError);
}

TEST(Export, RecordsMatchInstancesAndLabels) {
    TempDir dir("export");
    const GenerateReport gen = generate_dataset(small_config(Family::SR, 2), dir.path());
    const ExportReport before = export_graphs(dir.path(), GraphKind::LCG_STAR, {}, false, 1);
    EXPECT_EQ(before.output, dir.path() / "graphs_lcg_star.txt");
    EXPECT_EQ(before.records, gen.manifest.size());
    EXPECT_EQ(before.unlabeled.size(), gen.manifest.size());

    label_dataset(dir.path(), {}, 1);
    const ExportReport r = export_graphs(dir.path(), GraphKind::VCG, dir.path() / "out" / "g.txt", false, 2);
    EXPECT_TRUE(r.unlabeled.empty());
    const auto records = parse_graph_records(slurp(r.output));
    ASSERT_EQ(records.size(), gen.manifest.size());
    const Dataset d{dir.path(), gen.manifest};
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& e = gen.manifest[i];
        const CnfFormula f = read_dimacs_file(instance_path(d, e).string());
        EXPECT_EQ(records[i].graph, build_graph(f, GraphKind::VCG));
        EXPECT_EQ(records[i].index, e.index);
        EXPECT_EQ(records[i].family, "sr");
        EXPECT_EQ(*records[i].labels.sat, e.status == SolveStatus::Sat);
        EXPECT_EQ(records[i].labels.model.has_value(), e.status == SolveStatus::Sat);
        EXPECT_EQ(records[i].labels.core_vars.has_value(), e.status == SolveStatus::Unsat);
    }

    EXPECT_THROW(export_graphs(dir.path(), GraphKind::VIG, {}, true, 1), DataError);
    augment_dataset(dir.path(), 5, {}, 1);
    EXPECT_EQ(export_graphs(dir.path(), GraphKind::VIG, {}, true, 1).output, dir.path() / "graphs_vig_aug.txt");
}
