#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "satforge/cnf.hpp"

namespace satforge {

enum class GraphKind { LCG, VCG, LIG, VIG, LCG_STAR, VCG_STAR };
enum class NodeType { Literal, Variable, Clause };
enum class EdgeType { Occurrence, PositiveOccurrence, NegativeOccurrence, Negation, CoOccurrence };

/// lcg, vcg, lig, vig, lcg*, vcg*
std::string_view to_string(GraphKind kind);
std::string_view to_string(NodeType type);
std::string_view to_string(EdgeType type);
GraphKind parse_graph_kind(std::string_view text);  ///< also accepts lcg_star / vcg_star
NodeType parse_node_type(std::string_view text);
EdgeType parse_edge_type(std::string_view text);

struct GraphNode {
    int id = 0;
    NodeType type = NodeType::Literal;
    int payload = 0;  ///< literal index (Literal::index), variable index (0-based) or clause index

    bool operator==(const GraphNode&) const = default;
};

struct GraphEdge {
    int src = 0;
    int dst = 0;
    EdgeType type = EdgeType::Occurrence;

    bool operator==(const GraphEdge&) const = default;
};

/// Node layout:
///   LCG, LCG*: literal nodes 0..2n-1 (x_v at 2(v-1), ~x_v at 2(v-1)+1), then clause nodes.
///   VCG, VCG*: variable nodes 0..n-1, then clause nodes.
///   LIG: literal nodes only.  VIG: variable nodes only.
/// Occurrence edges run from the literal/variable node to the clause node, in
/// clause order then literal order. Negation edges run x_v -> ~x_v.
/// Co-occurrence edges are deduplicated and stored with src < dst, sorted.
struct EncodedGraph {
    GraphKind kind = GraphKind::LCG;
    int num_vars = 0;
    int num_clauses = 0;
    std::vector<GraphNode> nodes;
    std::vector<GraphEdge> edges;

    std::size_t count_edges(EdgeType type) const;
    bool operator==(const EncodedGraph&) const = default;
};

EncodedGraph build_graph(const CnfFormula& formula, GraphKind kind);

/// Undirected adjacency with edge multiplicities as weights; node order kept.
/// Self-loops live in `self_weight` and count twice towards a node's degree.
struct WeightedGraph {
    struct Arc {
        int to;
        double weight;
    };
    std::vector<std::vector<Arc>> adjacency;  ///< no self-arcs
    std::vector<double> self_weight;

    explicit WeightedGraph(int num_nodes = 0)
        : adjacency(static_cast<std::size_t>(num_nodes)), self_weight(static_cast<std::size_t>(num_nodes), 0.0) {}

    int num_nodes() const { return static_cast<int>(adjacency.size()); }
    double degree(int node) const;
    /// Sum of edge weights, each undirected edge once.
    double total_weight() const;
    void add_edge(int u, int w, double weight = 1.0);
};

WeightedGraph to_weighted(const EncodedGraph& graph);

/// Mean local clustering coefficient over all VIG nodes; nodes of degree < 2
/// contribute 0. Throws std::invalid_argument for other kinds.
double clustering_coefficient(const EncodedGraph& graph);

/// Community id per node, numbered 0.. in order of first appearance.
using Partition = std::vector<int>;

/// Louvain-style greedy modularity maximization: local node moves in fixed
/// node order, then community aggregation, until a level improves modularity
/// by no more than 1e-6. Edge types are ignored.
Partition detect_communities(const EncodedGraph& graph);
Partition detect_communities(const WeightedGraph& graph);

/// Q = sum_c (e_c/m - (d_c/2m)^2). Zero for a graph without edges.
double modularity(const EncodedGraph& graph, const Partition& partition);
double modularity(const WeightedGraph& graph, const Partition& partition);

struct GraphStats {
    double clustering_coefficient = 0;
    double modularity_vig = 0;
    double modularity_vcg = 0;
    double modularity_lcg = 0;
};

GraphStats compute_graph_stats(const CnfFormula& formula);

} // namespace satforge
