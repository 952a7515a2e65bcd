#pragma once

#include <cstdint>
#include <cstdlib>
#include <map>
#include <string>
#include <vector>

namespace satforge {

/// A variable or its negation. Variables are 1-based, as in DIMACS.
class Literal {
public:
    constexpr Literal() = default;
    constexpr Literal(int variable, bool positive) : code_(positive ? variable : -variable) {}

    /// From a signed DIMACS integer (non-zero).
    static constexpr Literal from_dimacs(int code) { return Literal(code < 0 ? -code : code, code > 0); }

    constexpr int variable() const { return code_ < 0 ? -code_ : code_; }
    constexpr bool positive() const { return code_ > 0; }
    constexpr int dimacs() const { return code_; }

    /// Dense index in [0, 2n): 2(v-1) for x_v, 2(v-1)+1 for ~x_v.
    constexpr int index() const { return 2 * (variable() - 1) + (positive() ? 0 : 1); }

    constexpr Literal operator~() const { return from_dimacs(-code_); }
    constexpr bool operator==(const Literal&) const = default;
    constexpr auto operator<=>(const Literal&) const = default;

private:
    int code_ = 0;
};

using Clause = std::vector<Literal>;

/// Total map variable -> bool over 1..num_vars.
class Assignment {
public:
    Assignment() = default;
    explicit Assignment(int num_vars, bool value = false) : values_(static_cast<std::size_t>(num_vars), value) {}

    int num_vars() const { return static_cast<int>(values_.size()); }
    bool value(int variable) const { return values_[static_cast<std::size_t>(variable - 1)] != 0; }
    void set(int variable, bool value) { values_[static_cast<std::size_t>(variable - 1)] = value ? 1 : 0; }
    void flip(int variable) { values_[static_cast<std::size_t>(variable - 1)] ^= 1; }
    bool satisfies(Literal lit) const { return value(lit.variable()) == lit.positive(); }

    /// "0110..." with x1 first.
    std::string to_bits() const;
    static Assignment from_bits(const std::string& bits);

    bool operator==(const Assignment&) const = default;

private:
    std::vector<std::uint8_t> values_;
};

/// Ordered key/value provenance (family, seed, drawn parameters, ...).
using Metadata = std::map<std::string, std::string>;

class CnfFormula {
public:
    CnfFormula() = default;
    explicit CnfFormula(int num_vars) : num_vars_(num_vars) {}
    CnfFormula(int num_vars, std::vector<Clause> clauses);

    int num_vars() const { return num_vars_; }
    std::size_t num_clauses() const { return clauses_.size(); }
    const std::vector<Clause>& clauses() const { return clauses_; }
    const Clause& clause(std::size_t i) const { return clauses_[i]; }

    /// Throws std::invalid_argument if a literal is out of range.
    void add_clause(Clause clause);

    /// Total number of literal occurrences.
    std::size_t num_literals() const;

    /// Formula restricted to the given clause indices (in the given order).
    CnfFormula subformula(const std::vector<std::size_t>& indices) const;

    Metadata& metadata() { return metadata_; }
    const Metadata& metadata() const { return metadata_; }

    bool operator==(const CnfFormula&) const = default;

private:
    int num_vars_ = 0;
    std::vector<Clause> clauses_;
    Metadata metadata_;
};

struct EvalResult {
    bool satisfied = true;
    std::vector<std::size_t> unsat_clause_indices;
};

bool clause_satisfied(const Clause& clause, const Assignment& assignment);

/// Throws std::invalid_argument if the assignment does not cover every variable.
EvalResult evaluate(const CnfFormula& formula, const Assignment& assignment);
std::size_t count_unsat(const CnfFormula& formula, const Assignment& assignment);

} // namespace satforge
