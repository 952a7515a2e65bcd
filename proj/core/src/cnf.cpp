#include "satforge/cnf.hpp"

#include <stdexcept>

namespace satforge {

std::string Assignment::to_bits() const {
    std::string bits(values_.size(), '0');
    for (std::size_t i = 0; i < values_.size(); ++i)
        if (values_[i]) bits[i] = '1';
    return bits;
}

Assignment Assignment::from_bits(const std::string& bits) {
    Assignment a(static_cast<int>(bits.size()));
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] != '0' && bits[i] != '1')
            throw std::invalid_argument("assignment bit string contains '" + std::string(1, bits[i]) + "'");
        a.values_[i] = bits[i] == '1' ? 1 : 0;
    }
    return a;
}

CnfFormula::CnfFormula(int num_vars, std::vector<Clause> clauses) : num_vars_(num_vars) {
    clauses_.reserve(clauses.size());
    for (auto& c : clauses) add_clause(std::move(c));
}

void CnfFormula::add_clause(Clause clause) {
    for (const Literal lit : clause)
        if (lit.variable() < 1 || lit.variable() > num_vars_)
            throw std::invalid_argument("literal " + std::to_string(lit.dimacs()) + " outside 1.." +
                                        std::to_string(num_vars_));
    clauses_.push_back(std::move(clause));
}

std::size_t CnfFormula::num_literals() const {
    std::size_t total = 0;
    for (const auto& c : clauses_) total += c.size();
    return total;
}

CnfFormula CnfFormula::subformula(const std::vector<std::size_t>& indices) const {
    CnfFormula sub(num_vars_);
    sub.clauses_.reserve(indices.size());
    for (std::size_t i : indices) sub.clauses_.push_back(clauses_.at(i));
    return sub;
}

bool clause_satisfied(const Clause& clause, const Assignment& assignment) {
    for (const Literal lit : clause)
        if (assignment.satisfies(lit)) return true;
    return false;
}

EvalResult evaluate(const CnfFormula& formula, const Assignment& assignment) {
    if (assignment.num_vars() < formula.num_vars())
        throw std::invalid_argument("assignment covers " + std::to_string(assignment.num_vars()) + " of " +
                                    std::to_string(formula.num_vars()) + " variables");
    EvalResult result;
    for (std::size_t i = 0; i < formula.num_clauses(); ++i)
        if (!clause_satisfied(formula.clause(i), assignment)) result.unsat_clause_indices.push_back(i);
    result.satisfied = result.unsat_clause_indices.empty();
    return result;
}

std::size_t count_unsat(const CnfFormula& formula, const Assignment& assignment) {
    return evaluate(formula, assignment).unsat_clause_indices.size();
}

} // namespace satforge
