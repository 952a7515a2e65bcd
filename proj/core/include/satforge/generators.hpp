#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "satforge/cnf.hpp"
#include "satforge/rng.hpp"
#include "satforge/solver.hpp"

namespace satforge {

enum class Family { SR, ThreeSat, CA, PS, KClique, KDomset, KVercov };
enum class Difficulty { Easy, Medium, Hard };

inline constexpr Family kAllFamilies[] = {Family::SR,      Family::ThreeSat, Family::CA,     Family::PS,
                                          Family::KClique, Family::KDomset,  Family::KVercov};

/// Lowercase identifiers used in file names and on the command line:
/// sr, 3sat, ca, ps, k-clique, k-domset, k-vercov.
std::string_view to_string(Family family);
std::string_view to_string(Difficulty difficulty);
Family parse_family(std::string_view text);          ///< throws std::invalid_argument
Difficulty parse_difficulty(std::string_view text);  ///< throws std::invalid_argument

// ---------------------------------------------------------------------------
// Random families

struct SrPair {
    CnfFormula sat;
    CnfFormula unsat;
};

/// Width of one SR clause: 1, plus 1 with probability 1-b, plus a
/// trials-counted Geometric(g) draw. Clamped to n.
int sr_clause_width(int n, double b, double g, Rng& rng);

/// Adds random clauses until the formula turns unsatisfiable. `unsat` is that
/// formula; `sat` has the first literal of its last clause negated.
SrPair gen_sr_pair(int n, double b, double g, Rng& rng, const SolverConfig& solver = {});

/// round-half-up(4.258 n + 58.26 n^(-2/3)).
int clause_count_3sat(int n);
CnfFormula gen_3sat(int n, Rng& rng);

/// Community attachment. Variables 1..n are split into c contiguous blocks of
/// near-equal size. With probability min(Q + 1/c, 1) a clause draws k distinct
/// variables from one community, otherwise one variable from each of k
/// distinct communities. Repeated clauses (same literal set) are skipped, so
/// the result has at most m clauses.
CnfFormula gen_ca(int n, int m, int k, int c, double Q, Rng& rng);

/// Popularity-similarity. Variable i and clause j get angles in [0, 2pi);
/// variable i joins clause j with probability 1 / (1 + (i^beta j^beta' theta_ij / R)^T)
/// where R is solved for so that the expected number of occurrences is k*m.
/// T = +inf gives the step-function limit.
CnfFormula gen_ps(int n, int m, double k, double beta, double beta_prime, double T, Rng& rng);

/// R such that sum_{i,j} P(i,j) lies within k*m*(1 +- tolerance). Exposed for testing.
double ps_normalization(const std::vector<double>& var_angles, const std::vector<double>& clause_angles,
                        double beta, double beta_prime, double T, double target, double tolerance = 1e-3);
double ps_edge_probability(int i, int j, double theta, double beta, double beta_prime, double T, double R);

// ---------------------------------------------------------------------------
// Graph families

struct ErGraph {
    int num_vertices = 0;
    std::vector<std::pair<int, int>> edges;  ///< u < w, lexicographic order, 0-based

    bool has_edge(int u, int w) const;
    ErGraph complement() const;
};

ErGraph er_graph(int v, double p, Rng& rng);

/// C(v,k)^(-1/C(k,2)): expected number of k-cliques equals one.
double clique_edge_prob(int v, int k);
/// 1 - (1 - C(v,k)^(-1/(v-k)))^(1/k), for 1 <= k < v.
double domset_edge_prob(int v, int k);

/// Slot encodings. Variable s(i,u) = i*v + u + 1 for slot i in [0,k), vertex u in [0,v).
CnfFormula encode_k_clique(const ErGraph& graph, int k);
CnfFormula encode_k_domset(const ErGraph& graph, int k);
/// `graph` is the graph whose cover is sought (the generator passes the complement).
CnfFormula encode_k_vercov(const ErGraph& graph, int k);

// ---------------------------------------------------------------------------
// Dataset-level sampling

struct GeneratorConfig {
    Family family = Family::SR;
    Difficulty difficulty = Difficulty::Easy;
    std::uint64_t master_seed = 0;
    double sr_b = 0.3;
    double sr_g = 0.4;
    SolverConfig solver;
};

struct IntRange {
    int lo;
    int hi;
};

/// Variable range (n) for random families, vertex range (v) for graph families.
IntRange size_range(Family family, Difficulty difficulty);
/// k range for graph families; throws for random families.
IntRange graph_k_range(Family family, Difficulty difficulty);

std::uint64_t instance_seed(std::uint64_t master_seed, Family family, std::uint64_t index);

using SampledInstance = std::variant<CnfFormula, SrPair>;

/// Draws parameters from the difficulty ranges, derives the per-instance RNG
/// from (master_seed, family, index) and runs the family generator. Drawn
/// parameters are recorded in the formula metadata.
SampledInstance sample_instance(const GeneratorConfig& config, std::uint64_t index);

} // namespace satforge
