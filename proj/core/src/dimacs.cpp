#include "satforge/dimacs.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "satforge/error.hpp"

namespace satforge {
namespace {

constexpr std::string_view kProvenancePrefix = "c provenance: ";

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v'; }

std::string_view trim(std::string_view s) {
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

template <typename F>
void for_each_token(std::string_view line, F&& f) {
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && is_space(line[i])) ++i;
        std::size_t j = i;
        while (j < line.size() && !is_space(line[j])) ++j;
        if (j > i) f(line.substr(i, j - i));
        i = j;
    }
}

long long to_integer(std::string_view token, std::size_t line_no) {
    long long value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size())
        throw DataError("line " + std::to_string(line_no) + ": expected integer, got '" + std::string(token) + "'");
    return value;
}

} // namespace

CnfFormula parse_dimacs(std::string_view text) {
    bool have_header = false;
    long long num_vars = 0;
    long long declared_clauses = 0;
    Metadata metadata;
    std::vector<Clause> clauses;
    Clause current;
    bool open_clause = false;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view raw = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;

        std::string_view line = trim(raw);
        if (line.empty()) {
            if (end == text.size()) break;
            continue;
        }
        if (line.front() == 'c') {
            if (raw.starts_with(kProvenancePrefix)) {
                std::string_view kv = trim(raw.substr(kProvenancePrefix.size()));
                auto eq = kv.find('=');
                if (eq != std::string_view::npos)
                    metadata[std::string(kv.substr(0, eq))] = std::string(kv.substr(eq + 1));
            }
            if (end == text.size()) break;
            continue;
        }
        if (line.front() == '%') break;  // SATLIB trailer
        if (line.front() == 'p') {
            if (have_header) throw DataError("line " + std::to_string(line_no) + ": duplicate header");
            std::vector<std::string_view> tokens;
            for_each_token(line, [&](std::string_view t) { tokens.push_back(t); });
            if (tokens.size() != 4 || tokens[0] != "p" || tokens[1] != "cnf")
                throw DataError("line " + std::to_string(line_no) + ": malformed header '" + std::string(line) + "'");
            num_vars = to_integer(tokens[2], line_no);
            declared_clauses = to_integer(tokens[3], line_no);
            if (num_vars < 0 || declared_clauses < 0 || num_vars > (1LL << 30))
                throw DataError("line " + std::to_string(line_no) + ": header counts out of range");
            have_header = true;
            clauses.reserve(static_cast<std::size_t>(std::min<long long>(declared_clauses, 1 << 24)));
            if (end == text.size()) break;
            continue;
        }
        if (!have_header) throw DataError("line " + std::to_string(line_no) + ": clause before 'p cnf' header");

        for_each_token(line, [&](std::string_view token) {
            long long value = to_integer(token, line_no);
            if (value == 0) {
                clauses.push_back(std::move(current));
                current.clear();
                open_clause = false;
                return;
            }
            long long var = value < 0 ? -value : value;
            if (var > num_vars)
                throw DataError("line " + std::to_string(line_no) + ": literal " + std::to_string(value) +
                                " exceeds declared variable count " + std::to_string(num_vars));
            Literal lit = Literal::from_dimacs(static_cast<int>(value));
            if (std::find(current.begin(), current.end(), lit) == current.end()) current.push_back(lit);
            open_clause = true;
        });
        if (end == text.size()) break;
    }

    if (!have_header) throw DataError("missing 'p cnf' header");
    if (open_clause) throw DataError("last clause is missing its terminating 0");
    if (static_cast<long long>(clauses.size()) != declared_clauses)
        throw DataError("header declares " + std::to_string(declared_clauses) + " clauses, found " +
                        std::to_string(clauses.size()));

    CnfFormula formula(static_cast<int>(num_vars), std::move(clauses));
    formula.metadata() = std::move(metadata);
    return formula;
}

CnfFormula read_dimacs_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try {
        return parse_dimacs(buffer.str());
    } catch (const DataError& e) {
        throw DataError(path + ": " + e.what());
    }
}

std::string write_dimacs(const CnfFormula& formula, bool provenance) {
    std::string out;
    out.reserve(32 + formula.num_literals() * 4 + formula.num_clauses() * 3);
    if (provenance) {
        for (const auto& [key, value] : formula.metadata()) {
            out += kProvenancePrefix;
            out += key;
            out += '=';
            out += value;
            out += '\n';
        }
    }
    out += "p cnf " + std::to_string(formula.num_vars()) + " " + std::to_string(formula.num_clauses()) + "\n";
    char buf[16];
    for (const auto& clause : formula.clauses()) {
        for (const Literal lit : clause) {
            auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, lit.dimacs());
            out.append(buf, ptr);
            out += ' ';
        }
        out += "0\n";
    }
    return out;
}

void write_dimacs_file(const CnfFormula& formula, const std::string& path, bool provenance) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + path);
    out << write_dimacs(formula, provenance);
    if (!out) throw DataError("write failed for " + path);
}

} // namespace satforge
