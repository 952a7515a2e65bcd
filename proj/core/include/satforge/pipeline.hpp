#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "satforge/cnf.hpp"
#include "satforge/generators.hpp"
#include "satforge/graph.hpp"
#include "satforge/solver.hpp"

namespace satforge {

namespace fs = std::filesystem;

enum class Split { Train, Valid, Test };

std::string_view to_string(Split split);
std::string_view to_string(SolveStatus status);  ///< "SAT" / "UNSAT"
Split parse_split(std::string_view text);
SolveStatus parse_status(std::string_view text);

// ---------------------------------------------------------------------------
// Manifest

inline constexpr const char* kManifestName = "manifest.jsonl";
inline constexpr const char* kQuarantineName = "quarantine.jsonl";

struct ManifestEntry {
    Family family = Family::SR;
    Difficulty difficulty = Difficulty::Easy;
    std::uint64_t index = 0;
    std::uint64_t seed = 0;
    Metadata params;   ///< drawn generator parameters
    std::string path;  ///< relative to the dataset directory, '/' separated
    SolveStatus status = SolveStatus::Sat;
    Split split = Split::Train;

    bool operator==(const ManifestEntry&) const = default;
};

using Manifest = std::vector<ManifestEntry>;

/// One JSON object per line with keys in the fixed order family, difficulty,
/// index, seed, params, path, status, split.
std::string manifest_line(const ManifestEntry& entry);
ManifestEntry parse_manifest_line(std::string_view line);  ///< throws DataError
void write_manifest(const fs::path& file, const Manifest& manifest);
Manifest read_manifest(const fs::path& file);  ///< throws DataError

/// A directory holding a manifest and the files it lists.
struct Dataset {
    fs::path dir;
    Manifest manifest;
};

/// Every dataset at or below `root`, in path order. Throws DataError if
/// `root` does not exist or holds no manifest.
std::vector<Dataset> load_datasets(const fs::path& root);

// ---------------------------------------------------------------------------
// Workers

inline constexpr const char* kJobsEnv = "SATFORGE_JOBS";

/// `requested` if non-zero, else $SATFORGE_JOBS, else the hardware thread
/// count (at least 1).
std::size_t resolve_jobs(std::size_t requested = 0);

// ---------------------------------------------------------------------------
// Generation

struct DatasetConfig {
    GeneratorConfig generator;
    std::size_t train_pairs = 2000;
    std::size_t valid_pairs = 200;
    std::size_t test_pairs = 200;
    std::size_t jobs = 0;
    /// Rejection sampling gives up after budget_factor * instances + 1000 draws.
    std::size_t budget_factor = 200;
};

struct GenerateReport {
    Manifest manifest;
    std::size_t draws = 0;          ///< instances drawn (pairs for SR)
    std::size_t rejected = 0;       ///< drawn but their bucket was already full
    std::size_t indeterminate = 0;  ///< dropped because the solver budget ran out
};

/// Writes <out>/<split>/<family>_<difficulty>_<index>_<sat|unsat>.cnf and
/// <out>/manifest.jsonl. Instances come from one index stream. SR indices map
/// to intrinsic pairs; other families are solved and accepted in index order
/// into the first split whose bucket for that status still has room.
/// Throws GenerationError when the draw budget runs out.
GenerateReport generate_dataset(const DatasetConfig& config, const fs::path& out_dir);

/// Stem shared by an instance's .cnf, .label and _aug.cnf files.
std::string instance_stem(const ManifestEntry& entry);

// ---------------------------------------------------------------------------
// Labels

struct InstanceLabel {
    SolveStatus status = SolveStatus::Sat;
    std::optional<Assignment> model;        ///< SAT only
    std::vector<std::size_t> core_clauses;  ///< UNSAT only, ascending
    std::vector<bool> core_vars;            ///< UNSAT only, one per variable

    bool operator==(const InstanceLabel&) const = default;
};

std::string write_label(const InstanceLabel& label);
InstanceLabel parse_label(std::string_view text);  ///< throws DataError

/// <dataset>/<split>/<stem>.label
fs::path label_path(const Dataset& dataset, const ManifestEntry& entry);
fs::path instance_path(const Dataset& dataset, const ManifestEntry& entry);
fs::path augmented_path(const Dataset& dataset, const ManifestEntry& entry);

struct LabelReport {
    std::size_t labeled = 0;
    Manifest quarantined;  ///< solver budget ran out; no label written
};

/// Solves every listed instance and writes a verified label next to it:
/// models are checked with evaluate(), cores are re-solved UNSAT. Instances
/// whose solve runs out of budget go to quarantine.jsonl instead. A solver
/// result that contradicts the manifest status is a DataError.
LabelReport label_dataset(const fs::path& root, const SolverConfig& solver = {}, std::size_t jobs = 0);

// ---------------------------------------------------------------------------
// Augmentation

struct AugmentReport {
    std::size_t written = 0;
    std::size_t clauses_added = 0;
    std::size_t max_added = 0;  ///< largest per-instance clause delta
};

/// Writes <stem>_aug.cnf with at most `limit` learned clauses appended and
/// re-solves it to confirm the status is unchanged.
AugmentReport augment_dataset(const fs::path& root, std::size_t limit, const SolverConfig& solver = {},
                              std::size_t jobs = 0);

// ---------------------------------------------------------------------------
// Statistics

struct StatsRow {
    Family family = Family::SR;
    Difficulty difficulty = Difficulty::Easy;
    std::size_t instances = 0;
    double variables = 0;
    double clauses = 0;
    double clustering = 0;
    double modularity_vig = 0;
    double modularity_vcg = 0;
    double modularity_lcg = 0;
};

/// Means per (family, difficulty) over every instance below `root`, rows in
/// family then difficulty order.
std::vector<StatsRow> stats_report(const fs::path& root, std::size_t jobs = 0);
StatsRow summarize_formulas(const std::vector<CnfFormula>& formulas, Family family, Difficulty difficulty,
                            std::size_t jobs = 0);
std::string render_stats_table(const std::vector<StatsRow>& rows);
std::string render_stats_jsonl(const std::vector<StatsRow>& rows);

// ---------------------------------------------------------------------------
// Graph export

struct ExportReport {
    std::size_t records = 0;
    Manifest unlabeled;  ///< exported without label vectors
    fs::path output;
};

/// One graph record per listed instance, labels joined from .label files.
/// `output` defaults to <root>/graphs_<kind>.txt; `augmented` exports the
/// _aug.cnf siblings instead of the originals.
ExportReport export_graphs(const fs::path& root, GraphKind kind, const fs::path& output = {},
                           bool augmented = false, std::size_t jobs = 0);

} // namespace satforge
