#include "satforge/solver.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

#include "satforge/error.hpp"

namespace satforge {
namespace {

using Lit = int;  // dense literal index, see Literal::index()
using CRef = std::uint32_t;
constexpr CRef kNoReason = std::numeric_limits<CRef>::max();

constexpr Lit make_lit(int var0, bool negated) { return 2 * var0 + (negated ? 1 : 0); }
constexpr int var_of(Lit l) { return l >> 1; }
constexpr Lit negate(Lit l) { return l ^ 1; }
constexpr bool is_negated(Lit l) { return (l & 1) != 0; }

enum : std::int8_t { kFalse = 0, kTrue = 1, kUndef = 2 };

struct ClauseData {
    std::vector<Lit> lits;
    double activity = 0;
    bool learnt = false;
    bool deleted = false;
};

struct Watcher {
    CRef cref;
    Lit blocker;
};

/// Max-heap over variables keyed by activity.
class VarHeap {
public:
    explicit VarHeap(const std::vector<double>& activity) : activity_(activity) {}

    bool contains(int v) const { return v < static_cast<int>(pos_.size()) && pos_[v] >= 0; }
    bool empty() const { return heap_.empty(); }

    void grow(int n) { pos_.assign(static_cast<std::size_t>(n), -1); }

    void insert(int v) {
        if (contains(v)) return;
        pos_[v] = static_cast<int>(heap_.size());
        heap_.push_back(v);
        sift_up(pos_[v]);
    }

    void increased(int v) {
        if (contains(v)) sift_up(pos_[v]);
    }

    int pop() {
        int top = heap_.front();
        heap_.front() = heap_.back();
        pos_[heap_.front()] = 0;
        heap_.pop_back();
        pos_[top] = -1;
        if (!heap_.empty()) sift_down(0);
        return top;
    }

private:
    bool less(int a, int b) const {
        // Ties broken towards lower variable index for determinism.
        return activity_[a] > activity_[b] || (activity_[a] == activity_[b] && a < b);
    }
    void sift_up(int i) {
        int v = heap_[i];
        while (i > 0) {
            int parent = (i - 1) / 2;
            if (!less(v, heap_[parent])) break;
            heap_[i] = heap_[parent];
            pos_[heap_[i]] = i;
            i = parent;
        }
        heap_[i] = v;
        pos_[v] = i;
    }
    void sift_down(int i) {
        int v = heap_[i];
        const int n = static_cast<int>(heap_.size());
        for (;;) {
            int child = 2 * i + 1;
            if (child >= n) break;
            if (child + 1 < n && less(heap_[child + 1], heap_[child])) ++child;
            if (!less(heap_[child], v)) break;
            heap_[i] = heap_[child];
            pos_[heap_[i]] = i;
            i = child;
        }
        heap_[i] = v;
        pos_[v] = i;
    }

    const std::vector<double>& activity_;
    std::vector<int> heap_;
    std::vector<int> pos_;
};

double luby(double y, std::uint64_t x) {
    std::uint64_t size = 1;
    int seq = 0;
    while (size < x + 1) {
        ++seq;
        size = 2 * size + 1;
    }
    while (size - 1 != x) {
        size = (size - 1) >> 1;
        --seq;
        x = x % size;
    }
    double r = 1;
    for (int i = 0; i < seq; ++i) r *= y;
    return r;
}

class Cdcl {
public:
    Cdcl(const CnfFormula& formula, const SolverConfig& config)
        : config_(config), num_vars_(formula.num_vars()), heap_(activity_) {
        const auto n = static_cast<std::size_t>(num_vars_);
        assigns_.assign(n, kUndef);
        level_.assign(n, 0);
        reason_.assign(n, kNoReason);
        polarity_.assign(n, 1);  // first decision on a variable is "false"
        activity_.assign(n, 0.0);
        seen_.assign(n, 0);
        watches_.resize(2 * n);
        heap_.grow(num_vars_);
        reduce_limit_ = config_.max_learned;
        for (int v = 0; v < num_vars_; ++v) heap_.insert(v);

        for (const auto& clause : formula.clauses()) {
            if (!add_input_clause(clause)) {
                inconsistent_ = true;
                break;
            }
        }
    }

    SolveOutcome run() {
        SolveOutcome out;
        if (!inconsistent_ && propagate() != kNoReason) inconsistent_ = true;
        if (inconsistent_) {
            out.status = SolveStatus::Unsat;
        } else {
            out.status = search_loop();
        }
        if (out.status == SolveStatus::Sat) {
            Assignment model(num_vars_);
            for (int v = 0; v < num_vars_; ++v) model.set(v + 1, assigns_[v] == kTrue);
            out.model = std::move(model);
        }
        out.learned_clauses = std::move(learned_log_);
        out.stats = stats_;
        return out;
    }

private:
    std::int8_t value(Lit l) const {
        std::int8_t a = assigns_[var_of(l)];
        if (a == kUndef) return kUndef;
        return static_cast<std::int8_t>(a ^ (is_negated(l) ? 1 : 0));
    }

    int decision_level() const { return static_cast<int>(trail_lim_.size()); }

    bool add_input_clause(const Clause& clause) {
        std::vector<Lit> lits;
        lits.reserve(clause.size());
        for (const Literal l : clause) lits.push_back(l.index());
        std::sort(lits.begin(), lits.end());
        lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
        for (std::size_t i = 1; i < lits.size(); ++i)
            if (lits[i] == negate(lits[i - 1])) return true;  // tautology
        // Drop literals already false at level 0; skip if already satisfied.
        std::vector<Lit> kept;
        for (Lit l : lits) {
            if (value(l) == kTrue) return true;
            if (value(l) == kUndef) kept.push_back(l);
        }
        if (kept.empty()) return false;
        if (kept.size() == 1) {
            enqueue(kept[0], kNoReason);
            return propagate() == kNoReason;
        }
        attach(store(std::move(kept), false));
        return true;
    }

    CRef store(std::vector<Lit> lits, bool learnt) {
        CRef cref = static_cast<CRef>(clauses_.size());
        ClauseData c;
        c.lits = std::move(lits);
        c.learnt = learnt;
        clauses_.push_back(std::move(c));
        if (learnt) learnts_.push_back(cref);
        return cref;
    }

    void attach(CRef cref) {
        const auto& lits = clauses_[cref].lits;
        watches_[lits[0]].push_back({cref, lits[1]});
        watches_[lits[1]].push_back({cref, lits[0]});
    }

    void enqueue(Lit l, CRef reason) {
        const int v = var_of(l);
        assigns_[v] = is_negated(l) ? kFalse : kTrue;
        level_[v] = decision_level();
        reason_[v] = reason;
        trail_.push_back(l);
    }

    /// Returns the conflicting clause or kNoReason.
    CRef propagate() {
        CRef conflict = kNoReason;
        while (qhead_ < trail_.size()) {
            const Lit p = trail_[qhead_++];
            const Lit false_lit = negate(p);
            ++stats_.propagations;
            auto& ws = watches_[false_lit];
            std::size_t i = 0, j = 0;
            const std::size_t end = ws.size();
            while (i < end) {
                Watcher w = ws[i];
                if (clauses_[w.cref].deleted) {
                    ++i;
                    continue;
                }
                if (value(w.blocker) == kTrue) {
                    ws[j++] = ws[i++];
                    continue;
                }
                auto& lits = clauses_[w.cref].lits;
                if (lits[0] == false_lit) std::swap(lits[0], lits[1]);
                ++i;
                const Lit first = lits[0];
                if (first != w.blocker && value(first) == kTrue) {
                    ws[j++] = {w.cref, first};
                    continue;
                }
                bool moved = false;
                for (std::size_t k = 2; k < lits.size(); ++k) {
                    if (value(lits[k]) != kFalse) {
                        std::swap(lits[1], lits[k]);
                        watches_[lits[1]].push_back({w.cref, first});
                        moved = true;
                        break;
                    }
                }
                if (moved) continue;
                ws[j++] = {w.cref, first};
                if (value(first) == kFalse) {
                    conflict = w.cref;
                    qhead_ = trail_.size();
                    while (i < end) ws[j++] = ws[i++];
                } else {
                    enqueue(first, w.cref);
                }
            }
            ws.resize(j);
            if (conflict != kNoReason) break;
        }
        return conflict;
    }

    void bump_var(int v) {
        if ((activity_[v] += var_inc_) > 1e100) {
            for (double& a : activity_) a *= 1e-100;
            var_inc_ *= 1e-100;
        }
        heap_.increased(v);
    }

    void bump_clause(CRef cref) {
        if ((clauses_[cref].activity += cla_inc_) > 1e20) {
            for (CRef c : learnts_) clauses_[c].activity *= 1e-20;
            cla_inc_ *= 1e-20;
        }
    }

    /// First-UIP analysis. Fills `learnt` (asserting literal first) and
    /// returns the backjump level.
    int analyze(CRef conflict, std::vector<Lit>& learnt) {
        learnt.clear();
        learnt.push_back(-1);
        int path_count = 0;
        Lit p = -1;
        std::size_t index = trail_.size();
        CRef reason = conflict;
        do {
            ClauseData& c = clauses_[reason];
            if (c.learnt) bump_clause(reason);
            for (std::size_t k = (p == -1 ? 0 : 1); k < c.lits.size(); ++k) {
                const Lit q = c.lits[k];
                const int v = var_of(q);
                if (!seen_[v] && level_[v] > 0) {
                    seen_[v] = 1;
                    bump_var(v);
                    if (level_[v] >= decision_level())
                        ++path_count;
                    else
                        learnt.push_back(q);
                }
            }
            while (!seen_[var_of(trail_[--index])]) {
            }
            p = trail_[index];
            reason = reason_[var_of(p)];
            seen_[var_of(p)] = 0;
            --path_count;
            if (path_count > 0) {
                // Reason clauses keep their implied literal in position 0.
                auto& lits = clauses_[reason].lits;
                if (lits[0] != p) std::swap(lits[0], lits[1]);
            }
        } while (path_count > 0);
        learnt[0] = negate(p);

        // Local minimization: drop literals implied by other learnt literals.
        analyze_toclear_.assign(learnt.begin(), learnt.end());
        std::size_t keep = 1;
        for (std::size_t k = 1; k < learnt.size(); ++k) {
            const int v = var_of(learnt[k]);
            const CRef r = reason_[v];
            bool redundant = r != kNoReason;
            if (redundant) {
                for (const Lit q : clauses_[r].lits) {
                    const int u = var_of(q);
                    if (u == v) continue;
                    if (!seen_[u] && level_[u] > 0) {
                        redundant = false;
                        break;
                    }
                }
            }
            if (!redundant) learnt[keep++] = learnt[k];
        }
        learnt.resize(keep);

        int backjump = 0;
        if (learnt.size() > 1) {
            std::size_t max_i = 1;
            for (std::size_t k = 2; k < learnt.size(); ++k)
                if (level_[var_of(learnt[k])] > level_[var_of(learnt[max_i])]) max_i = k;
            std::swap(learnt[1], learnt[max_i]);
            backjump = level_[var_of(learnt[1])];
        }
        for (const Lit q : analyze_toclear_) seen_[var_of(q)] = 0;
        return backjump;
    }

    void backtrack(int target_level) {
        if (decision_level() <= target_level) return;
        for (std::size_t c = trail_.size(); c-- > trail_lim_[target_level];) {
            const int v = var_of(trail_[c]);
            polarity_[v] = is_negated(trail_[c]) ? 1 : 0;
            assigns_[v] = kUndef;
            reason_[v] = kNoReason;
            heap_.insert(v);
        }
        trail_.resize(trail_lim_[target_level]);
        trail_lim_.resize(static_cast<std::size_t>(target_level));
        qhead_ = trail_.size();
    }

    Lit pick_branch() {
        while (!heap_.empty()) {
            const int v = heap_.pop();
            if (assigns_[v] == kUndef) return make_lit(v, polarity_[v] != 0);
        }
        return -1;
    }

    bool locked(CRef cref) const {
        const auto& lits = clauses_[cref].lits;
        const int v = var_of(lits[0]);
        return reason_[v] == cref && value(lits[0]) == kTrue;
    }

    void reduce_db() {
        std::vector<CRef> live;
        for (CRef c : learnts_)
            if (!clauses_[c].deleted) live.push_back(c);
        std::sort(live.begin(), live.end(), [&](CRef a, CRef b) {
            const auto& ca = clauses_[a];
            const auto& cb = clauses_[b];
            if (ca.activity != cb.activity) return ca.activity < cb.activity;
            return a < b;
        });
        const std::size_t half = live.size() / 2;
        std::vector<CRef> kept;
        for (std::size_t i = 0; i < live.size(); ++i) {
            const CRef c = live[i];
            if (i < half && clauses_[c].lits.size() > 2 && !locked(c)) {
                clauses_[c].deleted = true;
                clauses_[c].lits.clear();
                clauses_[c].lits.shrink_to_fit();
            } else {
                kept.push_back(c);
            }
        }
        learnts_ = std::move(kept);
        for (auto& ws : watches_)
            std::erase_if(ws, [&](const Watcher& w) { return clauses_[w.cref].deleted; });
    }

    void log_learned(const std::vector<Lit>& learnt) {
        if (!config_.log_learned) return;
        Clause c;
        c.reserve(learnt.size());
        for (const Lit l : learnt) c.push_back(Literal(var_of(l) + 1, !is_negated(l)));
        learned_log_.push_back(std::move(c));
    }

    SolveStatus search_loop() {
        std::vector<Lit> learnt;
        std::uint64_t restart_index = 0;
        for (;;) {
            const auto limit =
                static_cast<std::uint64_t>(luby(2.0, restart_index) * static_cast<double>(config_.restart_base));
            std::uint64_t conflicts_this_run = 0;
            for (;;) {
                const CRef conflict = propagate();
                if (conflict != kNoReason) {
                    ++stats_.conflicts;
                    ++conflicts_this_run;
                    if (decision_level() == 0) return SolveStatus::Unsat;
                    const int backjump = analyze(conflict, learnt);
                    backtrack(backjump);
                    log_learned(learnt);
                    if (learnt.size() == 1) {
                        enqueue(learnt[0], kNoReason);
                    } else {
                        const CRef cref = store(learnt, true);
                        attach(cref);
                        bump_clause(cref);
                        enqueue(learnt[0], cref);
                    }
                    var_inc_ /= config_.var_decay;
                    cla_inc_ /= config_.clause_decay;
                    if (config_.conflict_budget != 0 && stats_.conflicts >= config_.conflict_budget)
                        throw IndeterminateError("conflict budget of " + std::to_string(config_.conflict_budget) +
                                                 " exhausted");
                } else {
                    if (conflicts_this_run >= limit) {
                        backtrack(0);
                        ++stats_.restarts;
                        break;
                    }
                    if (config_.max_learned != 0 && learnts_.size() > reduce_limit_) {
                        reduce_db();
                        reduce_limit_ = learnts_.size() + config_.max_learned;
                    }
                    const Lit next = pick_branch();
                    if (next == -1) return SolveStatus::Sat;
                    ++stats_.decisions;
                    trail_lim_.push_back(trail_.size());
                    enqueue(next, kNoReason);
                }
            }
            ++restart_index;
        }
    }

    SolverConfig config_;
    int num_vars_;
    bool inconsistent_ = false;

    std::vector<ClauseData> clauses_;
    std::vector<CRef> learnts_;
    std::vector<std::vector<Watcher>> watches_;
    std::vector<std::int8_t> assigns_;
    std::vector<int> level_;
    std::vector<CRef> reason_;
    std::vector<std::int8_t> polarity_;
    std::vector<double> activity_;
    std::vector<std::uint8_t> seen_;
    std::vector<Lit> trail_;
    std::vector<std::size_t> trail_lim_;
    std::vector<Lit> analyze_toclear_;
    std::size_t qhead_ = 0;
    std::size_t reduce_limit_ = 0;
    double var_inc_ = 1.0;
    double cla_inc_ = 1.0;
    VarHeap heap_;

    std::vector<Clause> learned_log_;
    SolveStats stats_;
};

} // namespace

void SolverConfig::validate() const {
    if (!(var_decay > 0.0 && var_decay < 1.0)) throw std::invalid_argument("var_decay must lie in (0,1)");
    if (!(clause_decay > 0.0 && clause_decay < 1.0)) throw std::invalid_argument("clause_decay must lie in (0,1)");
    if (restart_base == 0) throw std::invalid_argument("restart_base must be positive");
}

SolveOutcome solve(const CnfFormula& formula, const SolverConfig& config) {
    config.validate();
    for (const auto& clause : formula.clauses())
        if (clause.empty()) {
            SolveOutcome out;
            out.status = SolveStatus::Unsat;
            return out;
        }
    Cdcl solver(formula, config);
    SolveOutcome out = solver.run();
    if (out.sat() && !evaluate(formula, *out.model).satisfied)
        throw std::logic_error("solver produced a model that does not satisfy the formula");
    return out;
}

bool is_satisfiable(const CnfFormula& formula, const SolverConfig& config) {
    SolverConfig quiet = config;
    quiet.log_learned = false;
    return solve(formula, quiet).sat();
}

namespace {

struct MaskClause {
    std::uint32_t pos = 0;
    std::uint32_t neg = 0;
};

std::vector<MaskClause> to_masks(const CnfFormula& formula) {
    if (formula.num_vars() > kBruteForceMaxVars)
        throw std::invalid_argument("brute force limited to " + std::to_string(kBruteForceMaxVars) +
                                    " variables, formula has " + std::to_string(formula.num_vars()));
    std::vector<MaskClause> masks;
    masks.reserve(formula.num_clauses());
    for (const auto& clause : formula.clauses()) {
        MaskClause m;
        for (const Literal l : clause) (l.positive() ? m.pos : m.neg) |= 1u << (l.variable() - 1);
        masks.push_back(m);
    }
    return masks;
}

bool satisfies_masks(const std::vector<MaskClause>& masks, std::uint32_t a) {
    for (const auto& m : masks)
        if (!((a & m.pos) | (~a & m.neg))) return false;
    return true;
}

/// The k-th assignment in enumeration order: x1 is the most significant bit.
std::uint32_t nth_assignment(std::uint64_t k, int n) {
    std::uint32_t a = 0;
    for (int v = 1; v <= n; ++v)
        if ((k >> (n - v)) & 1u) a |= 1u << (v - 1);
    return a;
}

} // namespace

SolveOutcome brute_force(const CnfFormula& formula) {
    const auto masks = to_masks(formula);
    const int n = formula.num_vars();
    SolveOutcome out;
    out.status = SolveStatus::Unsat;
    const std::uint64_t total = 1ULL << n;
    for (std::uint64_t k = 0; k < total; ++k) {
        const std::uint32_t a = nth_assignment(k, n);
        if (satisfies_masks(masks, a)) {
            Assignment model(n);
            for (int v = 1; v <= n; ++v) model.set(v, (a >> (v - 1)) & 1u);
            out.status = SolveStatus::Sat;
            out.model = std::move(model);
            break;
        }
    }
    return out;
}

std::vector<std::uint32_t> enumerate_models(const CnfFormula& formula) {
    const auto masks = to_masks(formula);
    const int n = formula.num_vars();
    std::vector<std::uint32_t> models;
    const std::uint64_t total = 1ULL << n;
    for (std::uint64_t k = 0; k < total; ++k) {
        const std::uint32_t a = nth_assignment(k, n);
        if (satisfies_masks(masks, a)) models.push_back(a);
    }
    return models;
}

} // namespace satforge
