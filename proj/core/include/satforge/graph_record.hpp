#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "satforge/graph.hpp"

namespace satforge {

struct GraphLabels {
    std::optional<bool> sat;
    std::optional<std::vector<bool>> model;      ///< one bit per variable, x1 first
    std::optional<std::vector<bool>> core_vars;  ///< one bit per variable, x1 first

    bool operator==(const GraphLabels&) const = default;
};

/// One instance in the exchange format read by the GNN harness:
///
///   graph <family> <difficulty> <index> <kind> <n_vars> <n_clauses> <label_sat>
///   nodes <count>
///   <id> <type>                  (one line per node, ids 0..count-1)
///   edges <count>
///   <src> <dst> <edge_type>      (one line per edge)
///   labels model <bits>          (optional)
///   labels core <bits>           (optional)
///   end
///
/// label_sat is 1, 0 or '-' when unknown. Bit strings are '0'/'1' characters,
/// one per variable. Node payloads are not written; they are the ordinal of
/// the node among nodes of the same type.
struct GraphRecord {
    std::string family = "-";
    std::string difficulty = "-";
    std::uint64_t index = 0;
    EncodedGraph graph;
    GraphLabels labels;

    bool operator==(const GraphRecord&) const = default;
};

/// Throws std::invalid_argument on a label arity mismatch or a header field
/// containing whitespace.
void write_graph_record(std::ostream& out, const GraphRecord& record);
std::string serialize_graph_record(const GraphRecord& record);

/// Parses every record in `text`. Throws DataError on malformed input,
/// including node tables that disagree with the graph kind.
std::vector<GraphRecord> parse_graph_records(std::string_view text);
GraphRecord parse_graph_record(std::string_view text);  ///< exactly one record

std::string bits_to_string(const std::vector<bool>& bits);
std::vector<bool> bits_from_string(std::string_view text);  ///< throws DataError

} // namespace satforge
