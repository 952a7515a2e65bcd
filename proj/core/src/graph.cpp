#include "satforge/graph.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>
#include <string>
#include <utility>

namespace satforge {

std::string_view to_string(GraphKind kind) {
    switch (kind) {
    case GraphKind::LCG: return "lcg";
    case GraphKind::VCG: return "vcg";
    case GraphKind::LIG: return "lig";
    case GraphKind::VIG: return "vig";
    case GraphKind::LCG_STAR: return "lcg*";
    case GraphKind::VCG_STAR: return "vcg*";
    }
    return "?";
}

std::string_view to_string(NodeType type) {
    switch (type) {
    case NodeType::Literal: return "literal";
    case NodeType::Variable: return "variable";
    case NodeType::Clause: return "clause";
    }
    return "?";
}

std::string_view to_string(EdgeType type) {
    switch (type) {
    case EdgeType::Occurrence: return "occ";
    case EdgeType::PositiveOccurrence: return "pos";
    case EdgeType::NegativeOccurrence: return "neg";
    case EdgeType::Negation: return "negation";
    case EdgeType::CoOccurrence: return "cooc";
    }
    return "?";
}

GraphKind parse_graph_kind(std::string_view text) {
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower == "lcg_star" || lower == "lcgstar") return GraphKind::LCG_STAR;
    if (lower == "vcg_star" || lower == "vcgstar") return GraphKind::VCG_STAR;
    for (GraphKind k : {GraphKind::LCG, GraphKind::VCG, GraphKind::LIG, GraphKind::VIG, GraphKind::LCG_STAR,
                        GraphKind::VCG_STAR})
        if (lower == to_string(k)) return k;
    throw std::invalid_argument("unknown graph kind '" + std::string(text) + "'");
}

NodeType parse_node_type(std::string_view text) {
    for (NodeType t : {NodeType::Literal, NodeType::Variable, NodeType::Clause})
        if (text == to_string(t)) return t;
    throw std::invalid_argument("unknown node type '" + std::string(text) + "'");
}

EdgeType parse_edge_type(std::string_view text) {
    for (EdgeType t : {EdgeType::Occurrence, EdgeType::PositiveOccurrence, EdgeType::NegativeOccurrence,
                       EdgeType::Negation, EdgeType::CoOccurrence})
        if (text == to_string(t)) return t;
    throw std::invalid_argument("unknown edge type '" + std::string(text) + "'");
}

std::size_t EncodedGraph::count_edges(EdgeType type) const {
    return static_cast<std::size_t>(
        std::count_if(edges.begin(), edges.end(), [type](const GraphEdge& e) { return e.type == type; }));
}

namespace {

void add_nodes(EncodedGraph& g, NodeType type, int count) {
    for (int i = 0; i < count; ++i) g.nodes.push_back({static_cast<int>(g.nodes.size()), type, i});
}

void add_cooccurrence(EncodedGraph& g, const CnfFormula& formula, bool literals) {
    std::vector<std::pair<int, int>> pairs;
    std::vector<int> ids;
    for (const auto& clause : formula.clauses()) {
        ids.clear();
        for (const Literal l : clause) ids.push_back(literals ? l.index() : l.variable() - 1);
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        for (std::size_t a = 0; a < ids.size(); ++a)
            for (std::size_t b = a + 1; b < ids.size(); ++b) pairs.emplace_back(ids[a], ids[b]);
    }
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    g.edges.reserve(pairs.size());
    for (const auto& [u, w] : pairs) g.edges.push_back({u, w, EdgeType::CoOccurrence});
}

} // namespace

EncodedGraph build_graph(const CnfFormula& formula, GraphKind kind) {
    EncodedGraph g;
    g.kind = kind;
    g.num_vars = formula.num_vars();
    g.num_clauses = static_cast<int>(formula.num_clauses());
    const int n = formula.num_vars();

    switch (kind) {
    case GraphKind::LCG:
    case GraphKind::LCG_STAR: {
        add_nodes(g, NodeType::Literal, 2 * n);
        add_nodes(g, NodeType::Clause, g.num_clauses);
        g.edges.reserve(formula.num_literals() + (kind == GraphKind::LCG_STAR ? static_cast<std::size_t>(n) : 0));
        for (std::size_t j = 0; j < formula.num_clauses(); ++j)
            for (const Literal l : formula.clause(j))
                g.edges.push_back({l.index(), 2 * n + static_cast<int>(j), EdgeType::Occurrence});
        if (kind == GraphKind::LCG_STAR)
            for (int v = 0; v < n; ++v) g.edges.push_back({2 * v, 2 * v + 1, EdgeType::Negation});
        break;
    }
    case GraphKind::VCG:
    case GraphKind::VCG_STAR: {
        add_nodes(g, NodeType::Variable, n);
        add_nodes(g, NodeType::Clause, g.num_clauses);
        g.edges.reserve(formula.num_literals());
        for (std::size_t j = 0; j < formula.num_clauses(); ++j)
            for (const Literal l : formula.clause(j)) {
                EdgeType type = EdgeType::Occurrence;
                if (kind == GraphKind::VCG_STAR)
                    type = l.positive() ? EdgeType::PositiveOccurrence : EdgeType::NegativeOccurrence;
                g.edges.push_back({l.variable() - 1, n + static_cast<int>(j), type});
            }
        break;
    }
    case GraphKind::LIG:
        add_nodes(g, NodeType::Literal, 2 * n);
        add_cooccurrence(g, formula, true);
        break;
    case GraphKind::VIG:
        add_nodes(g, NodeType::Variable, n);
        add_cooccurrence(g, formula, false);
        break;
    }
    return g;
}

// --- Weighted view -----------------------------------------------------------

double WeightedGraph::degree(int node) const {
    double d = 2.0 * self_weight[static_cast<std::size_t>(node)];
    for (const Arc& a : adjacency[static_cast<std::size_t>(node)]) d += a.weight;
    return d;
}

double WeightedGraph::total_weight() const {
    double total = 0;
    for (std::size_t i = 0; i < adjacency.size(); ++i) {
        total += self_weight[i];
        for (const Arc& a : adjacency[i]) total += 0.5 * a.weight;
    }
    return total;
}

void WeightedGraph::add_edge(int u, int w, double weight) {
    if (u == w) {
        self_weight[static_cast<std::size_t>(u)] += weight;
        return;
    }
    auto bump = [weight](std::vector<Arc>& arcs, int to) {
        for (Arc& a : arcs)
            if (a.to == to) {
                a.weight += weight;
                return;
            }
        arcs.push_back({to, weight});
    };
    bump(adjacency[static_cast<std::size_t>(u)], w);
    bump(adjacency[static_cast<std::size_t>(w)], u);
}

WeightedGraph to_weighted(const EncodedGraph& graph) {
    WeightedGraph w(static_cast<int>(graph.nodes.size()));
    // Merge parallel edges with a sort instead of add_edge's linear scan.
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(graph.edges.size());
    for (const GraphEdge& e : graph.edges) pairs.emplace_back(std::min(e.src, e.dst), std::max(e.src, e.dst));
    std::sort(pairs.begin(), pairs.end());
    for (std::size_t i = 0; i < pairs.size();) {
        std::size_t j = i;
        while (j < pairs.size() && pairs[j] == pairs[i]) ++j;
        const auto [u, v] = pairs[i];
        const double weight = static_cast<double>(j - i);
        if (u == v) {
            w.self_weight[static_cast<std::size_t>(u)] += weight;
        } else {
            w.adjacency[static_cast<std::size_t>(u)].push_back({v, weight});
            w.adjacency[static_cast<std::size_t>(v)].push_back({u, weight});
        }
        i = j;
    }
    return w;
}

// --- Clustering --------------------------------------------------------------

double clustering_coefficient(const EncodedGraph& graph) {
    if (graph.kind != GraphKind::VIG) throw std::invalid_argument("clustering coefficient is defined on the VIG");
    const std::size_t n = graph.nodes.size();
    if (n == 0) return 0.0;
    std::vector<std::vector<int>> adj(n);
    for (const GraphEdge& e : graph.edges) {
        if (e.src == e.dst) continue;
        adj[static_cast<std::size_t>(e.src)].push_back(e.dst);
        adj[static_cast<std::size_t>(e.dst)].push_back(e.src);
    }
    for (auto& a : adj) {
        std::sort(a.begin(), a.end());
        a.erase(std::unique(a.begin(), a.end()), a.end());
    }
    std::vector<char> mark(n, 0);
    double sum = 0;
    for (std::size_t u = 0; u < n; ++u) {
        const auto& nu = adj[u];
        if (nu.size() < 2) continue;
        for (int w : nu) mark[static_cast<std::size_t>(w)] = 1;
        std::size_t links = 0;
        for (int w : nu)
            for (int x : adj[static_cast<std::size_t>(w)])
                if (mark[static_cast<std::size_t>(x)]) ++links;
        for (int w : nu) mark[static_cast<std::size_t>(w)] = 0;
        const double wedges = static_cast<double>(nu.size()) * static_cast<double>(nu.size() - 1);
        sum += static_cast<double>(links) / wedges;  // links counts each triangle edge twice
    }
    return sum / static_cast<double>(n);
}

// --- Modularity --------------------------------------------------------------

double modularity(const WeightedGraph& graph, const Partition& partition) {
    if (static_cast<int>(partition.size()) != graph.num_nodes())
        throw std::invalid_argument("partition size does not match node count");
    const double m = graph.total_weight();
    if (m <= 0) return 0.0;
    int communities = 0;
    for (int c : partition) {
        if (c < 0) throw std::invalid_argument("negative community id");
        communities = std::max(communities, c + 1);
    }
    std::vector<double> internal(static_cast<std::size_t>(communities), 0.0);
    std::vector<double> degree(static_cast<std::size_t>(communities), 0.0);
    for (int u = 0; u < graph.num_nodes(); ++u) {
        const auto cu = static_cast<std::size_t>(partition[static_cast<std::size_t>(u)]);
        internal[cu] += graph.self_weight[static_cast<std::size_t>(u)];
        degree[cu] += graph.degree(u);
        for (const auto& a : graph.adjacency[static_cast<std::size_t>(u)])
            if (partition[static_cast<std::size_t>(a.to)] == static_cast<int>(cu)) internal[cu] += 0.5 * a.weight;
    }
    double q = 0;
    for (std::size_t c = 0; c < internal.size(); ++c) {
        const double share = degree[c] / (2.0 * m);
        q += internal[c] / m - share * share;
    }
    return q;
}

double modularity(const EncodedGraph& graph, const Partition& partition) {
    return modularity(to_weighted(graph), partition);
}

namespace {

constexpr double kLevelThreshold = 1e-6;

/// Renumbers community ids to 0.. in order of first appearance.
int normalize(Partition& p) {
    std::vector<int> remap;
    int next = 0;
    for (int& c : p) {
        if (c >= static_cast<int>(remap.size())) remap.resize(static_cast<std::size_t>(c) + 1, -1);
        if (remap[static_cast<std::size_t>(c)] < 0) remap[static_cast<std::size_t>(c)] = next++;
        c = remap[static_cast<std::size_t>(c)];
    }
    return next;
}

/// Local moving phase. Returns true if any node changed community.
bool move_nodes(const WeightedGraph& g, Partition& community) {
    const int n = g.num_nodes();
    const double m2 = 2.0 * g.total_weight();
    std::vector<double> degree(static_cast<std::size_t>(n));
    std::vector<double> tot(static_cast<std::size_t>(n), 0.0);
    for (int u = 0; u < n; ++u) {
        degree[static_cast<std::size_t>(u)] = g.degree(u);
        tot[static_cast<std::size_t>(community[static_cast<std::size_t>(u)])] += degree[static_cast<std::size_t>(u)];
    }

    std::vector<double> link(static_cast<std::size_t>(n), 0.0);
    std::vector<int> touched;
    bool any_move = false;
    for (int sweep = 0; sweep < 1000; ++sweep) {
        bool moved = false;
        for (int u = 0; u < n; ++u) {
            const auto su = static_cast<std::size_t>(u);
            const int own = community[su];
            const double ku = degree[su];
            touched.clear();
            touched.push_back(own);
            link[static_cast<std::size_t>(own)] = 0.0;
            for (const auto& a : g.adjacency[su]) {
                const int c = community[static_cast<std::size_t>(a.to)];
                if (link[static_cast<std::size_t>(c)] == 0.0 && c != own) touched.push_back(c);
                link[static_cast<std::size_t>(c)] += a.weight;
            }
            tot[static_cast<std::size_t>(own)] -= ku;
            int best = own;
            double best_gain = link[static_cast<std::size_t>(own)] - tot[static_cast<std::size_t>(own)] * ku / m2;
            for (int c : touched) {
                const double gain = link[static_cast<std::size_t>(c)] - tot[static_cast<std::size_t>(c)] * ku / m2;
                if (gain > best_gain + 1e-12) {
                    best_gain = gain;
                    best = c;
                }
            }
            tot[static_cast<std::size_t>(best)] += ku;
            for (int c : touched) link[static_cast<std::size_t>(c)] = 0.0;
            if (best != own) {
                community[su] = best;
                moved = true;
                any_move = true;
            }
        }
        if (!moved) break;
    }
    return any_move;
}

WeightedGraph aggregate(const WeightedGraph& g, const Partition& community, int count) {
    WeightedGraph out(count);
    for (int u = 0; u < g.num_nodes(); ++u) {
        const int cu = community[static_cast<std::size_t>(u)];
        out.self_weight[static_cast<std::size_t>(cu)] += g.self_weight[static_cast<std::size_t>(u)];
        for (const auto& a : g.adjacency[static_cast<std::size_t>(u)]) {
            const int cw = community[static_cast<std::size_t>(a.to)];
            if (cu == cw) {
                out.self_weight[static_cast<std::size_t>(cu)] += 0.5 * a.weight;
            } else if (u < a.to) {
                out.add_edge(cu, cw, a.weight);
            }
        }
    }
    return out;
}

} // namespace

Partition detect_communities(const WeightedGraph& graph) {
    const int n = graph.num_nodes();
    Partition membership(static_cast<std::size_t>(n));
    for (int u = 0; u < n; ++u) membership[static_cast<std::size_t>(u)] = u;
    if (graph.total_weight() <= 0) return membership;

    WeightedGraph level = graph;
    double current_q = modularity(graph, membership);
    for (;;) {
        Partition local(static_cast<std::size_t>(level.num_nodes()));
        for (int u = 0; u < level.num_nodes(); ++u) local[static_cast<std::size_t>(u)] = u;
        if (!move_nodes(level, local)) break;
        const int count = normalize(local);
        for (int& c : membership) c = local[static_cast<std::size_t>(c)];
        const double q = modularity(graph, membership);
        if (q - current_q <= kLevelThreshold) break;
        current_q = q;
        level = aggregate(level, local, count);
    }
    normalize(membership);
    return membership;
}

Partition detect_communities(const EncodedGraph& graph) { return detect_communities(to_weighted(graph)); }

GraphStats compute_graph_stats(const CnfFormula& formula) {
    GraphStats s;
    const EncodedGraph vig = build_graph(formula, GraphKind::VIG);
    s.clustering_coefficient = clustering_coefficient(vig);
    const WeightedGraph wvig = to_weighted(vig);
    s.modularity_vig = modularity(wvig, detect_communities(wvig));
    const WeightedGraph wvcg = to_weighted(build_graph(formula, GraphKind::VCG));
    s.modularity_vcg = modularity(wvcg, detect_communities(wvcg));
    const WeightedGraph wlcg = to_weighted(build_graph(formula, GraphKind::LCG));
    s.modularity_lcg = modularity(wlcg, detect_communities(wlcg));
    return s;
}

} // namespace satforge
