#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "satforge/dimacs.hpp"
#include "satforge/error.hpp"
#include "satforge/generators.hpp"
#include "satforge/local_search.hpp"
#include "satforge/pipeline.hpp"
#include "satforge/solver.hpp"
#include "satforge/unsat_core.hpp"

using namespace satforge;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kIndeterminate = 3 };

/// CLI11 transform that turns a family/difficulty/kind name into itself after
/// checking it parses, so bad names are usage errors.
template <typename Parse>
CLI::Validator name_check(Parse parse, std::string description) {
    return CLI::Validator(
        [parse](std::string& value) -> std::string {
            try {
                parse(value);
                return {};
            } catch (const std::invalid_argument& e) {
                return e.what();
            }
        },
        std::move(description));
}

struct Common {
    std::size_t jobs = 0;
    std::uint64_t budget = 0;

    SolverConfig solver() const {
        SolverConfig c;
        c.conflict_budget = budget;
        return c;
    }
};

void add_jobs(CLI::App* app, Common& common) {
    app->add_option("--jobs,-j", common.jobs, std::string("worker threads (default: $") + kJobsEnv + " or all cores)");
}

void add_budget(CLI::App* app, Common& common) {
    app->add_option("--budget", common.budget, "conflict budget per solve, 0 = unlimited");
}

int run_solve(const std::string& file, const Common& common) {
    const CnfFormula formula = read_dimacs_file(file);
    SolverConfig config = common.solver();
    config.log_learned = false;
    SolveOutcome outcome;
    try {
        outcome = solve(formula, config);
    } catch (const IndeterminateError& e) {
        std::cout << "c " << e.what() << "\ns UNKNOWN\n";
        return kIndeterminate;
    }
    std::cout << "c conflicts " << outcome.stats.conflicts << "\nc decisions " << outcome.stats.decisions
              << "\nc propagations " << outcome.stats.propagations << "\nc restarts " << outcome.stats.restarts << '\n';
    if (!outcome.sat()) {
        std::cout << "s UNSATISFIABLE\n";
        return kOk;
    }
    std::cout << "s SATISFIABLE\nv";
    for (int v = 1; v <= formula.num_vars(); ++v) std::cout << ' ' << (outcome.model->value(v) ? v : -v);
    std::cout << " 0\n";
    return kOk;
}

int run_gsat(const std::string& file, const LsConfig& config, bool trace) {
    const CnfFormula formula = read_dimacs_file(file);
    const LsResult result = gsat_run(formula, config);
    if (trace) {
        std::cout << "c step flipped unsat hash\n";
        for (const auto& s : result.trace.steps)
            std::cout << "t " << s.step << ' ' << (s.flipped_var ? std::to_string(*s.flipped_var) : "-") << ' '
                      << s.unsat_count << ' ' << std::hex << s.assignment_hash << std::dec << '\n';
    }
    const TraceMetrics m = trace_metrics(result.trace);
    std::size_t flips = 0;
    for (int f : m.flips) flips += static_cast<std::size_t>(f);
    std::cout << "c flips " << flips << "\nc distinct_assignments " << m.distinct_assignments << "\nc final_unsat "
              << count_unsat(formula, result.assignment) << '\n';
    std::cout << (result.solved ? "s SATISFIABLE\n" : "s UNKNOWN\n");
    if (result.solved) {
        std::cout << 'v';
        for (int v = 1; v <= formula.num_vars(); ++v) std::cout << ' ' << (result.assignment.value(v) ? v : -v);
        std::cout << " 0\n";
    }
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"satforge: SAT benchmark generation, labeling and graph export"};
    app.require_subcommand(1);
    Common common;
    int code = kOk;

    // generate
    auto* gen = app.add_subcommand("generate", "generate a SAT/UNSAT-balanced dataset");
    std::string family_name, difficulty_name = "easy", out_dir;
    std::uint64_t seed = 0;
    std::size_t pairs = 2000;
    std::optional<std::size_t> valid_pairs, test_pairs;
    double sr_b = 0.3, sr_g = 0.4;
    gen->add_option("--family", family_name, "sr, 3sat, ca, ps, k-clique, k-domset, k-vercov")
        ->required()
        ->check(name_check(parse_family, "FAMILY"));
    gen->add_option("--difficulty", difficulty_name, "easy, medium or hard")
        ->capture_default_str()
        ->check(name_check(parse_difficulty, "DIFFICULTY"));
    gen->add_option("--seed", seed, "master seed")->capture_default_str();
    gen->add_option("--pairs", pairs, "training pairs; valid/test default to a tenth")->capture_default_str();
    gen->add_option("--valid-pairs", valid_pairs, "validation pairs");
    gen->add_option("--test-pairs", test_pairs, "test pairs");
    gen->add_option("--out", out_dir, "output directory")->required();
    gen->add_option("--sr-b", sr_b, "SR Bernoulli parameter")->capture_default_str();
    gen->add_option("--sr-g", sr_g, "SR geometric parameter")->capture_default_str();
    add_jobs(gen, common);
    add_budget(gen, common);
    gen->callback([&] {
        DatasetConfig config;
        config.generator.family = parse_family(family_name);
        config.generator.difficulty = parse_difficulty(difficulty_name);
        config.generator.master_seed = seed;
        config.generator.sr_b = sr_b;
        config.generator.sr_g = sr_g;
        config.generator.solver = common.solver();
        config.train_pairs = pairs;
        config.valid_pairs = valid_pairs.value_or(pairs / 10);
        config.test_pairs = test_pairs.value_or(pairs / 10);
        config.jobs = common.jobs;
        const GenerateReport r = generate_dataset(config, out_dir);
        std::cout << "wrote " << r.manifest.size() << " instances to " << out_dir << " (draws " << r.draws
                  << ", rejected " << r.rejected << ", indeterminate " << r.indeterminate << ")\n";
    });

    // label
    auto* label = app.add_subcommand("label", "solve and label every instance of a dataset");
    std::string dir;
    label->add_option("dir", dir, "dataset directory")->required();
    add_jobs(label, common);
    add_budget(label, common);
    label->callback([&] {
        const LabelReport r = label_dataset(dir, common.solver(), common.jobs);
        std::cout << "labeled " << r.labeled << ", quarantined " << r.quarantined.size() << '\n';
        for (const auto& e : r.quarantined) std::cerr << "quarantined " << e.path << '\n';
        if (!r.quarantined.empty()) code = kIndeterminate;
    });

    // augment
    auto* aug = app.add_subcommand("augment", "append learned clauses to every instance");
    std::size_t limit = kDefaultAugmentLimit;
    aug->add_option("dir", dir, "dataset directory")->required();
    aug->add_option("--limit", limit, "maximum appended clauses per instance")->capture_default_str();
    add_jobs(aug, common);
    add_budget(aug, common);
    aug->callback([&] {
        const AugmentReport r = augment_dataset(dir, limit, common.solver(), common.jobs);
        std::cout << "augmented " << r.written << " instances, " << r.clauses_added << " clauses added (max "
                  << r.max_added << " per instance)\n";
    });

    // stats
    auto* stats = app.add_subcommand("stats", "dataset statistics per family and difficulty");
    std::string format = "text";
    stats->add_option("dir", dir, "dataset directory (searched recursively)")->required();
    stats->add_option("--format", format, "text or jsonl")->check(CLI::IsMember({"text", "jsonl"}))->capture_default_str();
    add_jobs(stats, common);
    stats->callback([&] {
        const auto rows = stats_report(dir, common.jobs);
        std::cout << (format == "jsonl" ? render_stats_jsonl(rows) : render_stats_table(rows));
    });

    // export-graphs
    auto* exp = app.add_subcommand("export-graphs", "write graph records with joined labels");
    std::string kind_name, out_file;
    bool augmented = false;
    exp->add_option("dir", dir, "dataset directory")->required();
    exp->add_option("--kind", kind_name, "lcg, vcg, lig, vig, lcg*, vcg*")
        ->required()
        ->check(name_check(parse_graph_kind, "KIND"));
    exp->add_option("--out", out_file, "output file (default <dir>/graphs_<kind>.txt)");
    exp->add_flag("--augmented", augmented, "export the _aug.cnf siblings");
    add_jobs(exp, common);
    exp->callback([&] {
        const ExportReport r = export_graphs(dir, parse_graph_kind(kind_name), out_file, augmented, common.jobs);
        std::cout << "exported " << r.records << " records to " << r.output.string() << " (" << r.unlabeled.size()
                  << " without label vectors)\n";
        for (const auto& e : r.unlabeled) std::cerr << "unlabeled " << e.path << '\n';
    });

    // solve
    auto* sol = app.add_subcommand("solve", "solve one DIMACS file");
    std::string file;
    sol->add_option("file", file, "DIMACS CNF file")->required();
    add_budget(sol, common);
    sol->callback([&] { code = run_solve(file, common); });

    // gsat
    auto* gs = app.add_subcommand("gsat", "run greedy local search on one DIMACS file");
    LsConfig ls;
    bool trace = false;
    gs->add_option("file", file, "DIMACS CNF file")->required();
    gs->add_option("--max-flips", ls.max_flips, "flips per try")->capture_default_str();
    gs->add_option("--restarts", ls.max_restarts, "extra tries after the first")->capture_default_str();
    gs->add_option("--seed", ls.seed, "random seed")->capture_default_str();
    gs->add_flag("--trace", trace, "print one line per visited assignment");
    gs->callback([&] { code = run_gsat(file, ls, trace); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int cli = app.exit(e);
        return cli == 0 ? kOk : kUsage;
    } catch (const IndeterminateError& e) {
        std::cerr << "indeterminate: " << e.what() << '\n';
        return kIndeterminate;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kData;
    } catch (const GenerationError& e) {
        std::cerr << "generation failed: " << e.what() << '\n';
        return kData;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kData;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kData;
    }
    return code;
}
