#include "satforge/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "satforge/dimacs.hpp"
#include "satforge/error.hpp"
#include "satforge/graph_record.hpp"
#include "satforge/unsat_core.hpp"

namespace satforge {

using ojson = nlohmann::ordered_json;

std::string_view to_string(Split split) {
    switch (split) {
    case Split::Train: return "train";
    case Split::Valid: return "valid";
    case Split::Test: return "test";
    }
    return "?";
}

std::string_view to_string(SolveStatus status) { return status == SolveStatus::Sat ? "SAT" : "UNSAT"; }

Split parse_split(std::string_view text) {
    for (Split s : {Split::Train, Split::Valid, Split::Test})
        if (text == to_string(s)) return s;
    throw std::invalid_argument("unknown split '" + std::string(text) + "'");
}

SolveStatus parse_status(std::string_view text) {
    if (text == "SAT") return SolveStatus::Sat;
    if (text == "UNSAT") return SolveStatus::Unsat;
    throw std::invalid_argument("unknown status '" + std::string(text) + "'");
}

namespace {

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Writes through a temporary sibling so readers never see a partial file.
void write_file(const fs::path& path, std::string_view content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw DataError("write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

/// Runs fn(i) for i in [0, count) on `jobs` threads. If any call throws, the
/// exception of the lowest failing index is rethrown after all threads join.
template <typename Fn>
void parallel_for(std::size_t count, std::size_t jobs, Fn&& fn) {
    jobs = std::max<std::size_t>(1, std::min(jobs, count));
    if (jobs <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::size_t error_index = count;
    std::exception_ptr error;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (i < error_index) {
                    error_index = i;
                    error = std::current_exception();
                }
            }
        }
    };
    std::vector<std::thread> threads;
    threads.reserve(jobs);
    for (std::size_t t = 0; t < jobs; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
    if (error) std::rethrow_exception(error);
}

std::string lowercase_status(SolveStatus status) { return status == SolveStatus::Sat ? "sat" : "unsat"; }

} // namespace

// --- Manifest ----------------------------------------------------------------

std::string manifest_line(const ManifestEntry& e) {
    ojson j;
    j["family"] = std::string(to_string(e.family));
    j["difficulty"] = std::string(to_string(e.difficulty));
    j["index"] = e.index;
    j["seed"] = e.seed;
    ojson params = ojson::object();
    for (const auto& [k, v] : e.params) params[k] = v;
    j["params"] = std::move(params);
    j["path"] = e.path;
    j["status"] = std::string(to_string(e.status));
    j["split"] = std::string(to_string(e.split));
    return j.dump();
}

ManifestEntry parse_manifest_line(std::string_view line) {
    try {
        const ojson j = ojson::parse(line);
        ManifestEntry e;
        e.family = parse_family(j.at("family").get<std::string>());
        e.difficulty = parse_difficulty(j.at("difficulty").get<std::string>());
        e.index = j.at("index").get<std::uint64_t>();
        e.seed = j.at("seed").get<std::uint64_t>();
        for (const auto& [k, v] : j.at("params").items()) e.params[k] = v.get<std::string>();
        e.path = j.at("path").get<std::string>();
        e.status = parse_status(j.at("status").get<std::string>());
        e.split = parse_split(j.at("split").get<std::string>());
        return e;
    } catch (const nlohmann::json::exception& ex) {
        throw DataError(std::string("bad manifest line: ") + ex.what());
    } catch (const std::invalid_argument& ex) {
        throw DataError(std::string("bad manifest line: ") + ex.what());
    }
}

void write_manifest(const fs::path& file, const Manifest& manifest) {
    std::string text;
    for (const auto& e : manifest) {
        text += manifest_line(e);
        text += '\n';
    }
    write_file(file, text);
}

Manifest read_manifest(const fs::path& file) {
    const std::string text = read_file(file);
    Manifest manifest;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            manifest.push_back(parse_manifest_line(line));
        } catch (const DataError& e) {
            throw DataError(file.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return manifest;
}

std::vector<Dataset> load_datasets(const fs::path& root) {
    if (!fs::exists(root)) throw DataError("no such directory: " + root.string());
    std::vector<fs::path> manifests;
    if (fs::is_regular_file(root)) {
        manifests.push_back(root);
    } else {
        for (const auto& entry : fs::recursive_directory_iterator(root))
            if (entry.is_regular_file() && entry.path().filename() == kManifestName) manifests.push_back(entry.path());
    }
    if (manifests.empty()) throw DataError("no " + std::string(kManifestName) + " found under " + root.string());
    std::sort(manifests.begin(), manifests.end());
    std::vector<Dataset> datasets;
    for (const auto& m : manifests) datasets.push_back({m.parent_path(), read_manifest(m)});
    return datasets;
}

std::size_t resolve_jobs(std::size_t requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv(kJobsEnv); env != nullptr && *env != '\0') {
        std::size_t value = 0;
        const std::string_view text(env);
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec != std::errc() || ptr != text.data() + text.size() || value == 0)
            throw std::invalid_argument(std::string(kJobsEnv) + " must be a positive integer, got '" + env + "'");
        return value;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

// --- Generation --------------------------------------------------------------

std::string instance_stem(const ManifestEntry& e) {
    return std::string(to_string(e.family)) + "_" + std::string(to_string(e.difficulty)) + "_" +
           std::to_string(e.index) + "_" + lowercase_status(e.status);
}

namespace {

ManifestEntry make_entry(const CnfFormula& formula, const GeneratorConfig& config, std::uint64_t index,
                         SolveStatus status, Split split) {
    ManifestEntry e;
    e.family = config.family;
    e.difficulty = config.difficulty;
    e.index = index;
    e.seed = instance_seed(config.master_seed, config.family, index);
    for (const auto& [k, v] : formula.metadata())
        if (k != "family" && k != "difficulty" && k != "index" && k != "seed") e.params[k] = v;
    e.status = status;
    e.split = split;
    e.path = std::string(to_string(split)) + "/" + instance_stem(e) + ".cnf";
    return e;
}

struct Draw {
    std::optional<SampledInstance> instance;
    std::optional<SolveStatus> status;  ///< empty: indeterminate
};

} // namespace

GenerateReport generate_dataset(const DatasetConfig& config, const fs::path& out_dir) {
    const std::size_t jobs = resolve_jobs(config.jobs);
    const GeneratorConfig& gen = config.generator;
    const std::size_t wanted[3] = {config.train_pairs, config.valid_pairs, config.test_pairs};
    const std::size_t total_pairs = wanted[0] + wanted[1] + wanted[2];
    fs::create_directories(out_dir);

    GenerateReport report;
    auto accept = [&](const CnfFormula& formula, std::uint64_t index, SolveStatus status, Split split) {
        ManifestEntry e = make_entry(formula, gen, index, status, split);
        write_file(out_dir / e.path, write_dimacs(formula));
        report.manifest.push_back(std::move(e));
    };

    if (gen.family == Family::SR) {
        // Pairs are intrinsic: index i belongs to the split whose range holds i.
        std::vector<SrPair> pairs(total_pairs);
        parallel_for(total_pairs, jobs, [&](std::size_t i) { pairs[i] = std::get<SrPair>(sample_instance(gen, i)); });
        report.draws = total_pairs;
        for (std::size_t i = 0; i < total_pairs; ++i) {
            const Split split = i < wanted[0] ? Split::Train : i < wanted[0] + wanted[1] ? Split::Valid : Split::Test;
            accept(pairs[i].sat, i, SolveStatus::Sat, split);
            accept(pairs[i].unsat, i, SolveStatus::Unsat, split);
        }
        write_manifest(out_dir / kManifestName, report.manifest);
        return report;
    }

    std::size_t filled[3][2] = {{0, 0}, {0, 0}, {0, 0}};
    std::size_t remaining = 2 * total_pairs;
    const std::size_t budget = config.budget_factor * 2 * total_pairs + 1000;
    const std::size_t batch = std::max<std::size_t>(16, 4 * jobs);
    std::size_t sat_seen = 0;
    std::size_t decided = 0;
    std::uint64_t next_index = 0;

    while (remaining > 0) {
        if (report.draws >= budget) {
            std::ostringstream msg;
            msg << "bucket starvation for " << to_string(gen.family) << "/" << to_string(gen.difficulty) << " after "
                << report.draws << " draws: achieved SAT ratio " << std::fixed << std::setprecision(4)
                << (decided ? static_cast<double>(sat_seen) / static_cast<double>(decided) : 0.0) << " (" << sat_seen
                << " SAT / " << decided - sat_seen << " UNSAT); missing";
            for (Split s : {Split::Train, Split::Valid, Split::Test}) {
                const auto si = static_cast<std::size_t>(s);
                msg << " " << to_string(s) << " " << wanted[si] - filled[si][0] << " SAT/" << wanted[si] - filled[si][1]
                    << " UNSAT";
            }
            throw GenerationError(msg.str());
        }
        const std::size_t count = std::min(batch, budget - report.draws);
        std::vector<Draw> draws(count);
        parallel_for(count, jobs, [&](std::size_t i) {
            Draw& d = draws[i];
            d.instance = sample_instance(gen, next_index + i);
            try {
                d.status = is_satisfiable(std::get<CnfFormula>(*d.instance), gen.solver) ? SolveStatus::Sat
                                                                                           : SolveStatus::Unsat;
            } catch (const IndeterminateError&) {
                d.status.reset();
            }
        });
        for (std::size_t i = 0; i < count && remaining > 0; ++i) {
            ++report.draws;
            const std::uint64_t index = next_index + i;
            if (!draws[i].status) {
                ++report.indeterminate;
                continue;
            }
            const SolveStatus status = *draws[i].status;
            ++decided;
            if (status == SolveStatus::Sat) ++sat_seen;
            const std::size_t col = status == SolveStatus::Sat ? 0 : 1;
            bool placed = false;
            for (std::size_t s = 0; s < 3 && !placed; ++s) {
                if (filled[s][col] < wanted[s]) {
                    ++filled[s][col];
                    --remaining;
                    accept(std::get<CnfFormula>(*draws[i].instance), index, status, static_cast<Split>(s));
                    placed = true;
                }
            }
            if (!placed) ++report.rejected;
        }
        next_index += count;
    }
    write_manifest(out_dir / kManifestName, report.manifest);
    return report;
}

// --- Labels ------------------------------------------------------------------

std::string write_label(const InstanceLabel& label) {
    std::string out = "status " + std::string(to_string(label.status)) + "\n";
    if (label.status == SolveStatus::Sat) {
        if (!label.model) throw std::invalid_argument("SAT label without a model");
        out += "model " + label.model->to_bits() + "\n";
    } else {
        out += "core";
        for (std::size_t c : label.core_clauses) out += " " + std::to_string(c);
        out += "\ncore_vars " + bits_to_string(label.core_vars) + "\n";
    }
    return out;
}

InstanceLabel parse_label(std::string_view text) {
    InstanceLabel label;
    std::istringstream in{std::string(text)};
    std::string line;
    bool have_status = false;
    bool have_model = false;
    bool have_core = false;
    bool have_core_vars = false;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key)) continue;
        if (key == "status") {
            std::string value;
            ls >> value;
            try {
                label.status = parse_status(value);
            } catch (const std::invalid_argument& e) {
                throw DataError(std::string("label: ") + e.what());
            }
            have_status = true;
        } else if (key == "model") {
            std::string bits;
            ls >> bits;
            bits_from_string(bits);  // validates
            label.model = Assignment::from_bits(bits);
            have_model = true;
        } else if (key == "core") {
            std::string tok;
            while (ls >> tok) {
                std::size_t value = 0;
                const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
                if (ec != std::errc() || ptr != tok.data() + tok.size())
                    throw DataError("label: bad core clause index '" + tok + "'");
                label.core_clauses.push_back(value);
            }
            have_core = true;
        } else if (key == "core_vars") {
            std::string bits;
            ls >> bits;
            label.core_vars = bits_from_string(bits);
            have_core_vars = true;
        } else {
            throw DataError("label: unknown key '" + key + "'");
        }
    }
    if (!have_status) throw DataError("label: missing status");
    if (label.status == SolveStatus::Sat && !have_model) throw DataError("label: SAT without model");
    if (label.status == SolveStatus::Unsat && (!have_core || !have_core_vars))
        throw DataError("label: UNSAT without core");
    return label;
}

fs::path instance_path(const Dataset& dataset, const ManifestEntry& entry) { return dataset.dir / entry.path; }

fs::path label_path(const Dataset& dataset, const ManifestEntry& entry) {
    return instance_path(dataset, entry).replace_extension(".label");
}

fs::path augmented_path(const Dataset& dataset, const ManifestEntry& entry) {
    fs::path p = instance_path(dataset, entry);
    const std::string stem = p.stem().string();
    return p.replace_filename(stem + "_aug.cnf");
}

namespace {

/// Label for one formula, verified before it is returned.
InstanceLabel compute_label(const CnfFormula& formula, const SolverConfig& solver) {
    SolverConfig quiet = solver;
    quiet.log_learned = false;
    const SolveOutcome outcome = solve(formula, quiet);
    InstanceLabel label;
    label.status = outcome.status;
    if (outcome.sat()) {
        if (!evaluate(formula, *outcome.model).satisfied) throw std::logic_error("solver returned a non-model");
        label.model = outcome.model;
        return label;
    }
    const UnsatCore core = extract_unsat_core(formula, quiet);
    if (is_satisfiable(formula.subformula(core.clause_indices), quiet))
        throw std::logic_error("extracted core is satisfiable");
    label.core_clauses = core.clause_indices;
    label.core_vars = unsat_core_variable_labels(formula, core);
    if (label.core_vars.size() != static_cast<std::size_t>(formula.num_vars()))
        throw std::logic_error("core label length differs from variable count");
    return label;
}

struct Job {
    const Dataset* dataset;
    const ManifestEntry* entry;
};

std::vector<Job> all_jobs(const std::vector<Dataset>& datasets) {
    std::vector<Job> jobs;
    for (const auto& d : datasets)
        for (const auto& e : d.manifest) jobs.push_back({&d, &e});
    return jobs;
}

std::string status_mismatch(const ManifestEntry& e, SolveStatus found) {
    return e.path + ": manifest says " + std::string(to_string(e.status)) + " but the solver found " +
           std::string(to_string(found));
}

} // namespace

LabelReport label_dataset(const fs::path& root, const SolverConfig& solver, std::size_t jobs) {
    solver.validate();
    const auto datasets = load_datasets(root);
    const auto work = all_jobs(datasets);
    std::vector<std::optional<InstanceLabel>> labels(work.size());
    parallel_for(work.size(), resolve_jobs(jobs), [&](std::size_t i) {
        const CnfFormula formula = read_dimacs_file(instance_path(*work[i].dataset, *work[i].entry).string());
        try {
            labels[i] = compute_label(formula, solver);
        } catch (const IndeterminateError&) {
            labels[i].reset();
        }
    });

    LabelReport report;
    std::map<const Dataset*, Manifest> quarantine;
    for (std::size_t i = 0; i < work.size(); ++i) {
        const Dataset& d = *work[i].dataset;
        const ManifestEntry& e = *work[i].entry;
        const fs::path path = label_path(d, e);
        if (!labels[i]) {
            fs::remove(path);
            quarantine[&d].push_back(e);
            report.quarantined.push_back(e);
            continue;
        }
        if (labels[i]->status != e.status) throw DataError(status_mismatch(e, labels[i]->status));
        write_file(path, write_label(*labels[i]));
        ++report.labeled;
    }
    for (const auto& d : datasets) {
        const fs::path q = d.dir / kQuarantineName;
        if (auto it = quarantine.find(&d); it != quarantine.end())
            write_manifest(q, it->second);
        else
            fs::remove(q);
    }
    return report;
}

// --- Augmentation ------------------------------------------------------------

AugmentReport augment_dataset(const fs::path& root, std::size_t limit, const SolverConfig& solver, std::size_t jobs) {
    solver.validate();
    const auto datasets = load_datasets(root);
    const auto work = all_jobs(datasets);
    std::vector<std::size_t> added(work.size(), 0);
    parallel_for(work.size(), resolve_jobs(jobs), [&](std::size_t i) {
        const Dataset& d = *work[i].dataset;
        const ManifestEntry& e = *work[i].entry;
        const CnfFormula formula = read_dimacs_file(instance_path(d, e).string());
        const CnfFormula augmented = augment_with_learned_clauses(formula, limit, solver);
        SolverConfig quiet = solver;
        quiet.log_learned = false;
        const SolveStatus status = is_satisfiable(augmented, quiet) ? SolveStatus::Sat : SolveStatus::Unsat;
        if (status != e.status) throw DataError(status_mismatch(e, status) + " after augmentation");
        added[i] = augmented.num_clauses() - formula.num_clauses();
        write_file(augmented_path(d, e), write_dimacs(augmented));
    });
    AugmentReport report;
    report.written = work.size();
    for (std::size_t a : added) {
        report.clauses_added += a;
        report.max_added = std::max(report.max_added, a);
    }
    return report;
}

// --- Statistics --------------------------------------------------------------

StatsRow summarize_formulas(const std::vector<CnfFormula>& formulas, Family family, Difficulty difficulty,
                            std::size_t jobs) {
    std::vector<GraphStats> stats(formulas.size());
    parallel_for(formulas.size(), resolve_jobs(jobs), [&](std::size_t i) { stats[i] = compute_graph_stats(formulas[i]); });
    StatsRow row;
    row.family = family;
    row.difficulty = difficulty;
    row.instances = formulas.size();
    if (formulas.empty()) return row;
    for (std::size_t i = 0; i < formulas.size(); ++i) {
        row.variables += formulas[i].num_vars();
        row.clauses += static_cast<double>(formulas[i].num_clauses());
        row.clustering += stats[i].clustering_coefficient;
        row.modularity_vig += stats[i].modularity_vig;
        row.modularity_vcg += stats[i].modularity_vcg;
        row.modularity_lcg += stats[i].modularity_lcg;
    }
    const auto n = static_cast<double>(formulas.size());
    for (double* v : {&row.variables, &row.clauses, &row.clustering, &row.modularity_vig, &row.modularity_vcg,
                      &row.modularity_lcg})
        *v /= n;
    return row;
}

std::vector<StatsRow> stats_report(const fs::path& root, std::size_t jobs) {
    const auto datasets = load_datasets(root);
    std::map<std::pair<Family, Difficulty>, std::vector<CnfFormula>> groups;
    for (const auto& d : datasets)
        for (const auto& e : d.manifest)
            groups[{e.family, e.difficulty}].push_back(read_dimacs_file(instance_path(d, e).string()));
    std::vector<StatsRow> rows;
    for (const auto& [key, formulas] : groups) rows.push_back(summarize_formulas(formulas, key.first, key.second, jobs));
    return rows;
}

std::string render_stats_table(const std::vector<StatsRow>& rows) {
    std::ostringstream out;
    out << std::left << std::setw(10) << "family" << std::setw(8) << "level" << std::right << std::setw(7) << "count"
        << std::setw(12) << "#variables" << std::setw(12) << "#clauses" << std::setw(10) << "C.C.(VIG)" << std::setw(11)
        << "Mod.(VIG)" << std::setw(11) << "Mod.(VCG)" << std::setw(11) << "Mod.(LCG)" << '\n';
    out << std::fixed << std::setprecision(2);
    for (const auto& r : rows) {
        out << std::left << std::setw(10) << to_string(r.family) << std::setw(8) << to_string(r.difficulty)
            << std::right << std::setw(7) << r.instances << std::setw(12) << r.variables << std::setw(12) << r.clauses
            << std::setw(10) << r.clustering << std::setw(11) << r.modularity_vig << std::setw(11) << r.modularity_vcg
            << std::setw(11) << r.modularity_lcg << '\n';
    }
    return out.str();
}

std::string render_stats_jsonl(const std::vector<StatsRow>& rows) {
    std::string out;
    for (const auto& r : rows) {
        ojson j;
        j["family"] = std::string(to_string(r.family));
        j["difficulty"] = std::string(to_string(r.difficulty));
        j["instances"] = r.instances;
        j["variables"] = r.variables;
        j["clauses"] = r.clauses;
        j["clustering_vig"] = r.clustering;
        j["modularity_vig"] = r.modularity_vig;
        j["modularity_vcg"] = r.modularity_vcg;
        j["modularity_lcg"] = r.modularity_lcg;
        out += j.dump();
        out += '\n';
    }
    return out;
}

// --- Graph export ------------------------------------------------------------

ExportReport export_graphs(const fs::path& root, GraphKind kind, const fs::path& output, bool augmented,
                           std::size_t jobs) {
    const auto datasets = load_datasets(root);
    const auto work = all_jobs(datasets);
    std::vector<std::string> records(work.size());
    std::vector<char> labeled(work.size(), 0);
    parallel_for(work.size(), resolve_jobs(jobs), [&](std::size_t i) {
        const Dataset& d = *work[i].dataset;
        const ManifestEntry& e = *work[i].entry;
        const fs::path cnf = augmented ? augmented_path(d, e) : instance_path(d, e);
        const CnfFormula formula = read_dimacs_file(cnf.string());
        GraphRecord rec;
        rec.family = std::string(to_string(e.family));
        rec.difficulty = std::string(to_string(e.difficulty));
        rec.index = e.index;
        rec.graph = build_graph(formula, kind);
        rec.labels.sat = e.status == SolveStatus::Sat;
        const fs::path lp = label_path(d, e);
        if (fs::exists(lp)) {
            const InstanceLabel label = parse_label(read_file(lp));
            if (label.status != e.status) throw DataError(lp.string() + ": status disagrees with the manifest");
            if (label.model) {
                std::vector<bool> bits;
                for (int v = 1; v <= label.model->num_vars(); ++v) bits.push_back(label.model->value(v));
                rec.labels.model = std::move(bits);
            }
            if (label.status == SolveStatus::Unsat) rec.labels.core_vars = label.core_vars;
            labeled[i] = 1;
        }
        try {
            records[i] = serialize_graph_record(rec);
        } catch (const std::invalid_argument& ex) {
            throw DataError(lp.string() + ": " + ex.what());
        }
    });

    ExportReport report;
    report.output = output;
    if (report.output.empty()) {
        std::string name(to_string(kind));
        if (name.back() == '*') name = name.substr(0, name.size() - 1) + "_star";
        const fs::path dir = fs::is_regular_file(root) ? root.parent_path() : root;
        report.output = dir / ("graphs_" + name + (augmented ? "_aug" : "") + ".txt");
    }
    std::string text;
    for (std::size_t i = 0; i < work.size(); ++i) {
        text += records[i];
        if (!labeled[i]) report.unlabeled.push_back(*work[i].entry);
    }
    write_file(report.output, text);
    report.records = work.size();
    return report;
}

} // namespace satforge
