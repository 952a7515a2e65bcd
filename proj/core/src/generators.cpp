#include "satforge/generators.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <stdexcept>

#include "satforge/error.hpp"

namespace satforge {
namespace {

std::string format_double(double x) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, ptr);
}

Clause random_clause(const std::vector<int>& variables, Rng& rng) {
    Clause clause;
    clause.reserve(variables.size());
    for (int v : variables) clause.emplace_back(v, rng.coin());
    return clause;
}

/// C(n, k) as a double; exact for the sizes used here.
double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    long double r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return static_cast<double>(std::round(r));
}

int slot_var(int slot, int vertex, int num_vertices) { return slot * num_vertices + vertex + 1; }

void add_at_most_one(CnfFormula& f, const std::vector<int>& vars) {
    for (std::size_t a = 0; a < vars.size(); ++a)
        for (std::size_t b = a + 1; b < vars.size(); ++b) f.add_clause({Literal(vars[a], false), Literal(vars[b], false)});
}

void check_slots(const ErGraph& graph, int k) {
    if (k < 1) throw std::invalid_argument("k must be at least 1");
    if (k > graph.num_vertices)
        throw std::invalid_argument("k = " + std::to_string(k) + " exceeds vertex count " +
                                    std::to_string(graph.num_vertices));
}

} // namespace

std::string_view to_string(Family family) {
    switch (family) {
    case Family::SR: return "sr";
    case Family::ThreeSat: return "3sat";
    case Family::CA: return "ca";
    case Family::PS: return "ps";
    case Family::KClique: return "k-clique";
    case Family::KDomset: return "k-domset";
    case Family::KVercov: return "k-vercov";
    }
    return "?";
}

std::string_view to_string(Difficulty difficulty) {
    switch (difficulty) {
    case Difficulty::Easy: return "easy";
    case Difficulty::Medium: return "medium";
    case Difficulty::Hard: return "hard";
    }
    return "?";
}

Family parse_family(std::string_view text) {
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    for (Family f : kAllFamilies)
        if (lower == to_string(f)) return f;
    if (lower == "3-sat") return Family::ThreeSat;
    if (lower == "kclique") return Family::KClique;
    if (lower == "kdomset") return Family::KDomset;
    if (lower == "kvercov") return Family::KVercov;
    throw std::invalid_argument("unknown family '" + std::string(text) + "'");
}

Difficulty parse_difficulty(std::string_view text) {
    for (Difficulty d : {Difficulty::Easy, Difficulty::Medium, Difficulty::Hard})
        if (text == to_string(d)) return d;
    throw std::invalid_argument("unknown difficulty '" + std::string(text) + "'");
}

// --- SR ----------------------------------------------------------------------

int sr_clause_width(int n, double b, double g, Rng& rng) {
    long long k = 1 + (rng.bernoulli(b) ? 0 : 1) + rng.geometric_trials(g);
    return static_cast<int>(std::min<long long>(k, n));
}

SrPair gen_sr_pair(int n, double b, double g, Rng& rng, const SolverConfig& solver) {
    if (n < 2) throw std::invalid_argument("SR needs n >= 2");
    if (!(b >= 0 && b <= 1) || !(g > 0 && g <= 1)) throw std::invalid_argument("SR parameters out of range");
    DistinctSampler sampler(n);
    CnfFormula formula(n);
    for (;;) {
        const int k = sr_clause_width(n, b, g, rng);
        formula.add_clause(random_clause(sampler.sample(k, rng), rng));
        if (!is_satisfiable(formula, solver)) break;
    }
    std::vector<Clause> clauses = formula.clauses();
    clauses.back().front() = ~clauses.back().front();
    return SrPair{CnfFormula(n, std::move(clauses)), std::move(formula)};
}

// --- 3-SAT -------------------------------------------------------------------

int clause_count_3sat(int n) {
    if (n < 1) throw std::invalid_argument("n must be positive");
    const double m = 4.258 * n + 58.26 * std::pow(static_cast<double>(n), -2.0 / 3.0);
    return static_cast<int>(std::floor(m + 0.5));
}

CnfFormula gen_3sat(int n, Rng& rng) {
    if (n < 3) throw std::invalid_argument("3-SAT needs n >= 3");
    const int m = clause_count_3sat(n);
    DistinctSampler sampler(n);
    CnfFormula formula(n);
    for (int i = 0; i < m; ++i) formula.add_clause(random_clause(sampler.sample(3, rng), rng));
    return formula;
}

// --- Community attachment ----------------------------------------------------

CnfFormula gen_ca(int n, int m, int k, int c, double Q, Rng& rng) {
    if (n < 1 || m < 0 || k < 1 || c < 1) throw std::invalid_argument("CA parameters must be positive");
    if (c > n) throw std::invalid_argument("CA needs c <= n");
    if (k > n) throw std::invalid_argument("CA needs k <= n");
    if (!(Q >= 0 && Q <= 1)) throw std::invalid_argument("CA modularity Q must lie in [0,1]");

    std::vector<std::vector<int>> communities(static_cast<std::size_t>(c));
    for (int i = 0; i < c; ++i) {
        const int lo = static_cast<int>(static_cast<long long>(i) * n / c);
        const int hi = static_cast<int>(static_cast<long long>(i + 1) * n / c);
        for (int v = lo + 1; v <= hi; ++v) communities[static_cast<std::size_t>(i)].push_back(v);
    }
    const double p_intra = std::min(Q + 1.0 / c, 1.0);

    CnfFormula formula(n);
    std::set<std::vector<int>> seen;
    std::vector<int> community_ids(static_cast<std::size_t>(c));
    for (int i = 0; i < c; ++i) community_ids[static_cast<std::size_t>(i)] = i;

    for (int clause_no = 0; clause_no < m; ++clause_no) {
        std::vector<int> vars;
        if (rng.bernoulli(p_intra)) {
            const std::vector<int>* members = nullptr;
            for (int attempt = 0; attempt < 100; ++attempt) {
                const auto& candidate = communities[rng.below(static_cast<std::uint64_t>(c))];
                if (static_cast<int>(candidate.size()) >= k) {
                    members = &candidate;
                    break;
                }
            }
            if (!members) throw GenerationError("CA: no community with at least k variables after 100 draws");
            // Partial Fisher-Yates over a copy keeps the partition intact.
            std::vector<int> pool = *members;
            vars.resize(static_cast<std::size_t>(k));
            for (std::size_t i = 0; i < static_cast<std::size_t>(k); ++i) {
                std::size_t j = i + rng.below(pool.size() - i);
                std::swap(pool[i], pool[j]);
                vars[i] = pool[i];
            }
        } else {
            if (k > c) throw GenerationError("CA: inter-community clause needs k <= c");
            for (std::size_t i = 0; i < static_cast<std::size_t>(k); ++i) {
                std::size_t j = i + rng.below(community_ids.size() - i);
                std::swap(community_ids[i], community_ids[j]);
                const auto& members = communities[static_cast<std::size_t>(community_ids[i])];
                vars.push_back(members[rng.below(members.size())]);
            }
        }
        Clause clause = random_clause(vars, rng);
        std::vector<int> key;
        key.reserve(clause.size());
        for (const Literal l : clause) key.push_back(l.dimacs());
        std::sort(key.begin(), key.end());
        if (seen.insert(std::move(key)).second) formula.add_clause(std::move(clause));
    }
    return formula;
}

// --- Popularity-similarity ---------------------------------------------------

double ps_edge_probability(int i, int j, double theta, double beta, double beta_prime, double T, double R) {
    const double x = std::pow(static_cast<double>(i), beta) * std::pow(static_cast<double>(j), beta_prime) * theta / R;
    if (std::isinf(T)) return x < 1.0 ? 1.0 : (x > 1.0 ? 0.0 : 0.5);
    if (x <= 0.0) return 1.0;
    return 1.0 / (1.0 + std::pow(x, T));
}

namespace {

double angle_between(double a, double b) {
    return std::numbers::pi - std::abs(std::numbers::pi - std::abs(a - b));
}

struct PsWeights {
    std::vector<double> var_pow;     // i^beta
    std::vector<double> clause_pow;  // j^beta'
};

double ps_expected_edges(const std::vector<double>& var_angles, const std::vector<double>& clause_angles,
                         const PsWeights& w, double T, double R) {
    double total = 0;
    for (std::size_t j = 0; j < clause_angles.size(); ++j) {
        for (std::size_t i = 0; i < var_angles.size(); ++i) {
            const double x = w.var_pow[i] * w.clause_pow[j] * angle_between(var_angles[i], clause_angles[j]) / R;
            if (std::isinf(T))
                total += x < 1.0 ? 1.0 : (x > 1.0 ? 0.0 : 0.5);
            else
                total += x <= 0.0 ? 1.0 : 1.0 / (1.0 + std::pow(x, T));
        }
    }
    return total;
}

PsWeights ps_weights(std::size_t n, std::size_t m, double beta, double beta_prime) {
    PsWeights w;
    w.var_pow.resize(n);
    w.clause_pow.resize(m);
    for (std::size_t i = 0; i < n; ++i) w.var_pow[i] = std::pow(static_cast<double>(i + 1), beta);
    for (std::size_t j = 0; j < m; ++j) w.clause_pow[j] = std::pow(static_cast<double>(j + 1), beta_prime);
    return w;
}

} // namespace

double ps_normalization(const std::vector<double>& var_angles, const std::vector<double>& clause_angles,
                        double beta, double beta_prime, double T, double target, double tolerance) {
    const PsWeights w = ps_weights(var_angles.size(), clause_angles.size(), beta, beta_prime);
    auto sum = [&](double R) { return ps_expected_edges(var_angles, clause_angles, w, T, R); };
    auto bracket_error = [&] {
        return GenerationError("PS: cannot bracket R for target " + format_double(target) + " (n=" +
                               std::to_string(var_angles.size()) + ", m=" + std::to_string(clause_angles.size()) +
                               ", beta=" + format_double(beta) + ", beta'=" + format_double(beta_prime) +
                               ", T=" + format_double(T) + ")");
    };

    double lo = 1.0, hi = 1.0;
    double s_lo = sum(lo);
    for (int i = 0; s_lo > target; ++i) {
        if (i > 2000) throw bracket_error();
        lo *= 0.5;
        s_lo = sum(lo);
    }
    double s_hi = s_lo;
    for (int i = 0; s_hi < target; ++i) {
        if (i > 2000 || hi > 1e300) throw bracket_error();
        hi *= 2.0;
        s_hi = sum(hi);
    }
    if (std::abs(s_lo - target) <= tolerance * target) return lo;
    if (std::abs(s_hi - target) <= tolerance * target) return hi;
    for (int iter = 0; iter < 400; ++iter) {
        const double mid = std::sqrt(lo * hi);
        const double s = sum(mid);
        if (std::abs(s - target) <= tolerance * target) return mid;
        if (s < target)
            lo = mid;
        else
            hi = mid;
    }
    throw bracket_error();
}

CnfFormula gen_ps(int n, int m, double k, double beta, double beta_prime, double T, Rng& rng) {
    if (n < 1 || m < 1) throw std::invalid_argument("PS needs n, m >= 1");
    if (!(k > 0) || k >= n) throw std::invalid_argument("PS needs 0 < k < n");
    if (!(T > 0)) throw std::invalid_argument("PS temperature must be positive");

    std::vector<double> var_angles(static_cast<std::size_t>(n));
    std::vector<double> clause_angles(static_cast<std::size_t>(m));
    for (double& a : var_angles) a = rng.uniform_real(0.0, 2.0 * std::numbers::pi);
    for (double& a : clause_angles) a = rng.uniform_real(0.0, 2.0 * std::numbers::pi);

    const double R = ps_normalization(var_angles, clause_angles, beta, beta_prime, T, k * m);
    const PsWeights w = ps_weights(var_angles.size(), clause_angles.size(), beta, beta_prime);

    CnfFormula formula(n);
    formula.metadata()["R"] = format_double(R);
    std::vector<double> probs(static_cast<std::size_t>(n));
    for (int j = 0; j < m; ++j) {
        for (int i = 0; i < n; ++i) {
            const double x = w.var_pow[static_cast<std::size_t>(i)] * w.clause_pow[static_cast<std::size_t>(j)] *
                             angle_between(var_angles[static_cast<std::size_t>(i)],
                                           clause_angles[static_cast<std::size_t>(j)]) /
                             R;
            probs[static_cast<std::size_t>(i)] =
                std::isinf(T) ? (x < 1.0 ? 1.0 : (x > 1.0 ? 0.0 : 0.5)) : (x <= 0.0 ? 1.0 : 1.0 / (1.0 + std::pow(x, T)));
        }
        Clause clause;
        for (int attempt = 0; clause.empty(); ++attempt) {
            if (attempt == 10000) throw GenerationError("PS: clause " + std::to_string(j + 1) + " stays empty");
            for (int i = 0; i < n; ++i)
                if (rng.bernoulli(probs[static_cast<std::size_t>(i)])) clause.emplace_back(i + 1, rng.coin());
        }
        formula.add_clause(std::move(clause));
    }
    return formula;
}

// --- Graphs ------------------------------------------------------------------

bool ErGraph::has_edge(int u, int w) const {
    if (u > w) std::swap(u, w);
    return std::binary_search(edges.begin(), edges.end(), std::make_pair(u, w));
}

ErGraph ErGraph::complement() const {
    ErGraph g;
    g.num_vertices = num_vertices;
    for (int u = 0; u < num_vertices; ++u)
        for (int w = u + 1; w < num_vertices; ++w)
            if (!has_edge(u, w)) g.edges.emplace_back(u, w);
    return g;
}

ErGraph er_graph(int v, double p, Rng& rng) {
    if (v < 1) throw std::invalid_argument("graph needs at least one vertex");
    if (!(p >= 0 && p <= 1)) throw std::invalid_argument("edge probability must lie in [0,1]");
    ErGraph g;
    g.num_vertices = v;
    for (int u = 0; u < v; ++u)
        for (int w = u + 1; w < v; ++w)
            if (rng.bernoulli(p)) g.edges.emplace_back(u, w);
    return g;
}

double clique_edge_prob(int v, int k) {
    if (v < 1 || k < 1 || k > v) throw std::invalid_argument("clique_edge_prob needs 1 <= k <= v");
    // A k-clique needs C(k,2) edges, so p^C(k,2) * C(v,k) = 1.
    const double pairs = binomial(k, 2);
    if (pairs == 0) return 1.0;
    return std::pow(binomial(v, k), -1.0 / pairs);
}

double domset_edge_prob(int v, int k) {
    if (k < 1 || k >= v) throw std::invalid_argument("domset_edge_prob needs 1 <= k < v");
    const double inner = std::pow(binomial(v, k), -1.0 / (v - k));
    return 1.0 - std::pow(1.0 - inner, 1.0 / k);
}

CnfFormula encode_k_clique(const ErGraph& graph, int k) {
    check_slots(graph, k);
    const int v = graph.num_vertices;
    CnfFormula f(k * v);
    for (int i = 0; i < k; ++i) {
        Clause some;
        for (int u = 0; u < v; ++u) some.emplace_back(slot_var(i, u, v), true);
        f.add_clause(std::move(some));
    }
    for (int i = 0; i < k; ++i) {
        std::vector<int> vars;
        for (int u = 0; u < v; ++u) vars.push_back(slot_var(i, u, v));
        add_at_most_one(f, vars);
    }
    for (int u = 0; u < v; ++u) {
        std::vector<int> vars;
        for (int i = 0; i < k; ++i) vars.push_back(slot_var(i, u, v));
        add_at_most_one(f, vars);
    }
    for (int u = 0; u < v; ++u)
        for (int w = u + 1; w < v; ++w) {
            if (graph.has_edge(u, w)) continue;
            for (int i = 0; i < k; ++i)
                for (int j = i + 1; j < k; ++j) {
                    f.add_clause({Literal(slot_var(i, u, v), false), Literal(slot_var(j, w, v), false)});
                    f.add_clause({Literal(slot_var(i, w, v), false), Literal(slot_var(j, u, v), false)});
                }
        }
    return f;
}

CnfFormula encode_k_domset(const ErGraph& graph, int k) {
    check_slots(graph, k);
    const int v = graph.num_vertices;
    std::vector<std::vector<int>> closed(static_cast<std::size_t>(v));
    for (int u = 0; u < v; ++u) closed[static_cast<std::size_t>(u)].push_back(u);
    for (const auto& [a, b] : graph.edges) {
        closed[static_cast<std::size_t>(a)].push_back(b);
        closed[static_cast<std::size_t>(b)].push_back(a);
    }
    CnfFormula f(k * v);
    for (int w = 0; w < v; ++w) {
        auto& nb = closed[static_cast<std::size_t>(w)];
        std::sort(nb.begin(), nb.end());
        Clause cover;
        for (int i = 0; i < k; ++i)
            for (int u : nb) cover.emplace_back(slot_var(i, u, v), true);
        f.add_clause(std::move(cover));
    }
    for (int i = 0; i < k; ++i) {
        std::vector<int> vars;
        for (int u = 0; u < v; ++u) vars.push_back(slot_var(i, u, v));
        add_at_most_one(f, vars);
    }
    return f;
}

CnfFormula encode_k_vercov(const ErGraph& graph, int k) {
    check_slots(graph, k);
    const int v = graph.num_vertices;
    CnfFormula f(k * v);
    for (const auto& [a, b] : graph.edges) {
        Clause cover;
        for (int i = 0; i < k; ++i) {
            cover.emplace_back(slot_var(i, a, v), true);
            cover.emplace_back(slot_var(i, b, v), true);
        }
        f.add_clause(std::move(cover));
    }
    for (int i = 0; i < k; ++i) {
        std::vector<int> vars;
        for (int u = 0; u < v; ++u) vars.push_back(slot_var(i, u, v));
        add_at_most_one(f, vars);
    }
    for (int u = 0; u < v; ++u) {
        std::vector<int> vars;
        for (int i = 0; i < k; ++i) vars.push_back(slot_var(i, u, v));
        add_at_most_one(f, vars);
    }
    return f;
}

// --- Sampling ----------------------------------------------------------------

IntRange size_range(Family family, Difficulty difficulty) {
    const int d = static_cast<int>(difficulty);
    switch (family) {
    case Family::SR:
    case Family::CA: {
        constexpr IntRange r[] = {{10, 40}, {40, 200}, {200, 400}};
        return r[d];
    }
    case Family::ThreeSat:
    case Family::PS: {
        constexpr IntRange r[] = {{10, 40}, {40, 200}, {200, 300}};
        return r[d];
    }
    case Family::KClique:
    case Family::KDomset: {
        constexpr IntRange r[] = {{5, 15}, {15, 20}, {20, 25}};
        return r[d];
    }
    case Family::KVercov: {
        constexpr IntRange r[] = {{5, 15}, {10, 20}, {15, 25}};
        return r[d];
    }
    }
    throw std::invalid_argument("unknown family");
}

IntRange graph_k_range(Family family, Difficulty difficulty) {
    const int d = static_cast<int>(difficulty);
    switch (family) {
    case Family::KClique: {
        constexpr IntRange r[] = {{3, 4}, {3, 5}, {4, 6}};
        return r[d];
    }
    case Family::KDomset: {
        constexpr IntRange r[] = {{2, 3}, {3, 5}, {4, 6}};
        return r[d];
    }
    case Family::KVercov: {
        constexpr IntRange r[] = {{3, 5}, {6, 8}, {9, 10}};
        return r[d];
    }
    default: throw std::invalid_argument("k range only defined for graph families");
    }
}

std::uint64_t instance_seed(std::uint64_t master_seed, Family family, std::uint64_t index) {
    return derive_seed(master_seed, to_string(family), index);
}

SampledInstance sample_instance(const GeneratorConfig& config, std::uint64_t index) {
    const std::uint64_t seed = instance_seed(config.master_seed, config.family, index);
    Rng rng(seed);
    Metadata meta;
    meta["family"] = std::string(to_string(config.family));
    meta["difficulty"] = std::string(to_string(config.difficulty));
    meta["index"] = std::to_string(index);
    meta["seed"] = std::to_string(seed);

    const IntRange size = size_range(config.family, config.difficulty);
    auto finish = [&](CnfFormula f) {
        for (auto& [key, value] : meta) f.metadata()[key] = value;
        return f;
    };

    switch (config.family) {
    case Family::SR: {
        const int n = static_cast<int>(rng.uniform_int(size.lo, size.hi));
        meta["n"] = std::to_string(n);
        meta["b"] = format_double(config.sr_b);
        meta["g"] = format_double(config.sr_g);
        SrPair pair = gen_sr_pair(n, config.sr_b, config.sr_g, rng, config.solver);
        return SrPair{finish(std::move(pair.sat)), finish(std::move(pair.unsat))};
    }
    case Family::ThreeSat: {
        const int n = static_cast<int>(rng.uniform_int(size.lo, size.hi));
        meta["n"] = std::to_string(n);
        meta["m"] = std::to_string(clause_count_3sat(n));
        return finish(gen_3sat(n, rng));
    }
    case Family::CA: {
        int n = 0, m = 0, k = 0, c = 0;
        double Q = 0;
        for (int attempt = 0;; ++attempt) {
            if (attempt == 10000) throw GenerationError("CA: no valid parameter draw");
            n = static_cast<int>(rng.uniform_int(size.lo, size.hi));
            m = static_cast<int>(rng.uniform_int(13LL * n, 15LL * n));
            k = static_cast<int>(rng.uniform_int(4, 5));
            c = static_cast<int>(rng.uniform_int(3, 10));
            Q = rng.uniform_real(0.7, 0.9);
            if (c <= n && n / c >= k && c >= k) break;
        }
        meta["n"] = std::to_string(n);
        meta["m"] = std::to_string(m);
        meta["k"] = std::to_string(k);
        meta["c"] = std::to_string(c);
        meta["Q"] = format_double(Q);
        return finish(gen_ca(n, m, k, c, Q, rng));
    }
    case Family::PS: {
        const int n = static_cast<int>(rng.uniform_int(size.lo, size.hi));
        const int m = static_cast<int>(rng.uniform_int(6LL * n, 8LL * n));
        const int k = static_cast<int>(rng.uniform_int(4, 5));
        const double beta = rng.uniform_real(0.0, 1.0);
        const double beta_prime = 1.0;
        const double T = rng.uniform_real(0.75, 1.5);
        meta["n"] = std::to_string(n);
        meta["m"] = std::to_string(m);
        meta["k"] = std::to_string(k);
        meta["beta"] = format_double(beta);
        meta["beta_prime"] = format_double(beta_prime);
        meta["T"] = format_double(T);
        CnfFormula f = gen_ps(n, m, k, beta, beta_prime, T, rng);
        meta["R"] = f.metadata()["R"];
        return finish(std::move(f));
    }
    case Family::KClique:
    case Family::KDomset:
    case Family::KVercov: {
        const IntRange kr = graph_k_range(config.family, config.difficulty);
        const int v = static_cast<int>(rng.uniform_int(size.lo, size.hi));
        const int k = static_cast<int>(rng.uniform_int(kr.lo, kr.hi));
        const double p = config.family == Family::KDomset ? domset_edge_prob(v, k) : clique_edge_prob(v, k);
        ErGraph graph = er_graph(v, p, rng);
        meta["v"] = std::to_string(v);
        meta["k"] = std::to_string(k);
        meta["p"] = format_double(p);
        if (config.family == Family::KVercov) graph = graph.complement();
        meta["edges"] = std::to_string(graph.edges.size());
        if (config.family == Family::KClique) return finish(encode_k_clique(graph, k));
        if (config.family == Family::KDomset) return finish(encode_k_domset(graph, k));
        return finish(encode_k_vercov(graph, k));
    }
    }
    throw std::invalid_argument("unknown family");
}

} // namespace satforge
