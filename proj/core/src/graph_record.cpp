#include "satforge/graph_record.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "satforge/error.hpp"

namespace satforge {

std::string bits_to_string(const std::vector<bool>& bits) {
    std::string s;
    s.reserve(bits.size());
    for (bool b : bits) s.push_back(b ? '1' : '0');
    return s;
}

std::vector<bool> bits_from_string(std::string_view text) {
    std::vector<bool> bits;
    bits.reserve(text.size());
    for (char c : text) {
        if (c != '0' && c != '1') throw DataError("bit string contains '" + std::string(1, c) + "'");
        bits.push_back(c == '1');
    }
    return bits;
}

namespace {

void check_token(const std::string& value, const char* what) {
    if (value.empty() || value.find_first_of(" \t\r\n") != std::string::npos)
        throw std::invalid_argument(std::string(what) + " must be a non-empty token without whitespace");
}

void check_arity(const std::optional<std::vector<bool>>& bits, int num_vars, const char* what) {
    if (bits && bits->size() != static_cast<std::size_t>(num_vars))
        throw std::invalid_argument(std::string(what) + " label has " + std::to_string(bits->size()) +
                                    " bits for " + std::to_string(num_vars) + " variables");
}

std::size_t expected_nodes(GraphKind kind, int n, int m) {
    switch (kind) {
    case GraphKind::LCG:
    case GraphKind::LCG_STAR: return static_cast<std::size_t>(2 * n + m);
    case GraphKind::VCG:
    case GraphKind::VCG_STAR: return static_cast<std::size_t>(n + m);
    case GraphKind::LIG: return static_cast<std::size_t>(2 * n);
    case GraphKind::VIG: return static_cast<std::size_t>(n);
    }
    return 0;
}

/// Node type at position `id` under the fixed layout of `kind`.
NodeType expected_node_type(GraphKind kind, int n, int id) {
    switch (kind) {
    case GraphKind::LCG:
    case GraphKind::LCG_STAR: return id < 2 * n ? NodeType::Literal : NodeType::Clause;
    case GraphKind::VCG:
    case GraphKind::VCG_STAR: return id < n ? NodeType::Variable : NodeType::Clause;
    case GraphKind::LIG: return NodeType::Literal;
    case GraphKind::VIG: return NodeType::Variable;
    }
    return NodeType::Clause;
}

/// Line-oriented tokenizer that tracks line numbers for error messages.
class Reader {
public:
    explicit Reader(std::string_view text) : text_(text) {}

    bool next_line() {
        while (pos_ < text_.size()) {
            const std::size_t end = std::min(text_.find('\n', pos_), text_.size());
            std::string_view line = text_.substr(pos_, end - pos_);
            pos_ = end + 1;
            ++line_no_;
            split(line);
            if (!tokens_.empty()) return true;
        }
        tokens_.clear();
        return false;
    }

    const std::vector<std::string_view>& tokens() const { return tokens_; }

    [[noreturn]] void fail(const std::string& message) const {
        throw DataError("graph record line " + std::to_string(line_no_) + ": " + message);
    }

    void expect_line(const char* what) {
        if (!next_line()) fail(std::string("unexpected end of input, expected ") + what);
    }

    template <typename T>
    T number(std::size_t i) const {
        if (i >= tokens_.size()) fail("missing field");
        T value{};
        const auto tok = tokens_[i];
        const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
        if (ec != std::errc() || ptr != tok.data() + tok.size()) fail("bad integer '" + std::string(tok) + "'");
        return value;
    }

private:
    void split(std::string_view line) {
        tokens_.clear();
        std::size_t i = 0;
        while (i < line.size()) {
            while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
            const std::size_t start = i;
            while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
            if (i > start) tokens_.push_back(line.substr(start, i - start));
        }
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_no_ = 0;
    std::vector<std::string_view> tokens_;
};

GraphRecord read_one(Reader& r) {
    auto tok = r.tokens();
    if (tok.size() != 8 || tok[0] != "graph") r.fail("expected 'graph' header with 7 fields");
    GraphRecord rec;
    rec.family = std::string(tok[1]);
    rec.difficulty = std::string(tok[2]);
    rec.index = r.number<std::uint64_t>(3);
    try {
        rec.graph.kind = parse_graph_kind(tok[4]);
    } catch (const std::invalid_argument& e) {
        r.fail(e.what());
    }
    rec.graph.num_vars = r.number<int>(5);
    rec.graph.num_clauses = r.number<int>(6);
    if (rec.graph.num_vars < 0 || rec.graph.num_clauses < 0) r.fail("negative size");
    if (tok[7] == "1")
        rec.labels.sat = true;
    else if (tok[7] == "0")
        rec.labels.sat = false;
    else if (tok[7] != "-")
        r.fail("label_sat must be 1, 0 or -");

    r.expect_line("'nodes'");
    if (r.tokens().size() != 2 || r.tokens()[0] != "nodes") r.fail("expected 'nodes <count>'");
    const auto node_count = r.number<std::size_t>(1);
    if (node_count != expected_nodes(rec.graph.kind, rec.graph.num_vars, rec.graph.num_clauses))
        r.fail("node count does not match kind and sizes");
    rec.graph.nodes.reserve(node_count);
    int ordinal[3] = {0, 0, 0};
    for (std::size_t i = 0; i < node_count; ++i) {
        r.expect_line("a node");
        if (r.tokens().size() != 2) r.fail("expected '<id> <type>'");
        const int id = r.number<int>(0);
        if (id != static_cast<int>(i)) r.fail("node ids must be consecutive from 0");
        NodeType type;
        try {
            type = parse_node_type(r.tokens()[1]);
        } catch (const std::invalid_argument& e) {
            r.fail(e.what());
        }
        if (type != expected_node_type(rec.graph.kind, rec.graph.num_vars, id))
            r.fail("node " + std::to_string(id) + " has the wrong type for a " + std::string(to_string(rec.graph.kind)));
        rec.graph.nodes.push_back({id, type, ordinal[static_cast<int>(type)]++});
    }

    r.expect_line("'edges'");
    if (r.tokens().size() != 2 || r.tokens()[0] != "edges") r.fail("expected 'edges <count>'");
    const auto edge_count = r.number<std::size_t>(1);
    rec.graph.edges.reserve(edge_count);
    for (std::size_t i = 0; i < edge_count; ++i) {
        r.expect_line("an edge");
        if (r.tokens().size() != 3) r.fail("expected '<src> <dst> <edge_type>'");
        GraphEdge e;
        e.src = r.number<int>(0);
        e.dst = r.number<int>(1);
        if (e.src < 0 || e.dst < 0 || static_cast<std::size_t>(e.src) >= node_count ||
            static_cast<std::size_t>(e.dst) >= node_count)
            r.fail("edge endpoint out of range");
        try {
            e.type = parse_edge_type(r.tokens()[2]);
        } catch (const std::invalid_argument& ex) {
            r.fail(ex.what());
        }
        rec.graph.edges.push_back(e);
    }

    for (;;) {
        r.expect_line("'end'");
        const auto& t = r.tokens();
        if (t[0] == "end" && t.size() == 1) break;
        if (t[0] != "labels" || t.size() < 2 || t.size() > 3) r.fail("expected 'labels <name> <bits>' or 'end'");
        std::vector<bool> bits;
        try {
            bits = bits_from_string(t.size() == 3 ? t[2] : std::string_view{});
        } catch (const DataError& e) {
            r.fail(e.what());
        }
        if (bits.size() != static_cast<std::size_t>(rec.graph.num_vars)) r.fail("label arity mismatch");
        if (t[1] == "model")
            rec.labels.model = std::move(bits);
        else if (t[1] == "core")
            rec.labels.core_vars = std::move(bits);
        else
            r.fail("unknown label '" + std::string(t[1]) + "'");
    }
    return rec;
}

} // namespace

void write_graph_record(std::ostream& out, const GraphRecord& record) {
    check_token(record.family, "family");
    check_token(record.difficulty, "difficulty");
    const EncodedGraph& g = record.graph;
    check_arity(record.labels.model, g.num_vars, "model");
    check_arity(record.labels.core_vars, g.num_vars, "core");

    out << "graph " << record.family << ' ' << record.difficulty << ' ' << record.index << ' ' << to_string(g.kind)
        << ' ' << g.num_vars << ' ' << g.num_clauses << ' '
        << (record.labels.sat ? (*record.labels.sat ? "1" : "0") : "-") << '\n';
    out << "nodes " << g.nodes.size() << '\n';
    for (const GraphNode& n : g.nodes) out << n.id << ' ' << to_string(n.type) << '\n';
    out << "edges " << g.edges.size() << '\n';
    for (const GraphEdge& e : g.edges) out << e.src << ' ' << e.dst << ' ' << to_string(e.type) << '\n';
    if (record.labels.model) out << "labels model " << bits_to_string(*record.labels.model) << '\n';
    if (record.labels.core_vars) out << "labels core " << bits_to_string(*record.labels.core_vars) << '\n';
    out << "end\n";
}

std::string serialize_graph_record(const GraphRecord& record) {
    std::ostringstream out;
    write_graph_record(out, record);
    return out.str();
}

std::vector<GraphRecord> parse_graph_records(std::string_view text) {
    Reader r(text);
    std::vector<GraphRecord> records;
    while (r.next_line()) records.push_back(read_one(r));
    return records;
}

GraphRecord parse_graph_record(std::string_view text) {
    auto records = parse_graph_records(text);
    if (records.size() != 1) throw DataError("expected exactly one graph record, found " + std::to_string(records.size()));
    return std::move(records.front());
}

} // namespace satforge
