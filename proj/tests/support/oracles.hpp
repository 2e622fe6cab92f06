#pragma once

// Independent oracles used to freeze expected values. These deliberately use
// plain enumeration and avoid the library's search/decision code paths.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "pclab/classify.hpp"
#include "pclab/f2sys.hpp"
#include "pclab/formula.hpp"
#include "pclab/frege.hpp"
#include "pclab/graph.hpp"

namespace pclab::testing {

/// Influence-based width: for every variable, check whether flipping it
/// changes the value on some assignment, with direct evaluation.
inline int width_oracle(Formula f) {
    std::vector<VarId> vars = collect_vars(f);
    int w = 0;
    for (size_t p = 0; p < vars.size(); ++p) {
        bool depends = false;
        for (size_t mask = 0; mask < (size_t{1} << vars.size()) && !depends; ++mask) {
            if ((mask >> p) & 1) continue;
            VarValuation a, b;
            for (size_t q = 0; q < vars.size(); ++q) {
                a.set(vars[q], (mask >> q) & 1);
                b.set(vars[q], q == p ? true : ((mask >> q) & 1));
            }
            if (evaluate(f, a) != evaluate(f, b)) depends = true;
        }
        if (depends) ++w;
    }
    return w;
}

/// Boundary computed from scratch.
inline std::vector<int> boundary_oracle(const BipartiteGraph& g, const std::vector<int>& left) {
    std::map<int, int> count;
    for (int i : left)
        for (int j : g.neighbors(i)) ++count[j];
    std::vector<int> out;
    for (const auto& [j, c] : count)
        if (c == 1) out.push_back(j);
    return out;
}

/// All (r, J)-contained sets by full enumeration; empty set always qualifies.
inline std::vector<std::vector<int>> contained_sets_oracle(const BipartiteGraph& g,
                                                           const std::vector<int>& right_set,
                                                           long long r) {
    std::set<int> j(right_set.begin(), right_set.end());
    std::vector<int> alive = g.alive_left();
    std::vector<std::vector<int>> out;
    size_t n = alive.size();
    for (size_t mask = 0; mask < (size_t{1} << n); ++mask) {
        std::vector<int> pick;
        for (size_t p = 0; p < n; ++p)
            if ((mask >> p) & 1) pick.push_back(alive[p]);
        if (static_cast<long long>(pick.size()) > r) continue;
        bool ok = true;
        for (int b : boundary_oracle(g, pick))
            if (j.count(b) == 0) {
                ok = false;
                break;
            }
        if (ok) out.push_back(pick);
    }
    return out;
}

/// Maximal (r, J)-contained set, lexicographically first among maximum size.
inline std::vector<int> closure_oracle(const BipartiteGraph& g, const std::vector<int>& right_set,
                                       long long r) {
    std::vector<int> best;
    for (const std::vector<int>& s : contained_sets_oracle(g, right_set, r))
        if (s.size() > best.size() || (s.size() == best.size() && s < best)) best = s;
    return best;
}

/// Every total assignment over the system variables (plus extra formula
/// variables) satisfying the subsystem; the subsystem is checked equation by
/// equation, no elimination involved.
inline bool satisfies_subsystem(const LinSystem& sys, const std::vector<int>& indices,
                                const std::vector<bool>& assignment) {
    for (int idx : indices) {
        const Equation* e = sys.find_index(idx);
        bool acc = false;
        for (size_t v = e->support.find_first(); v != boost::dynamic_bitset<>::npos;
             v = e->support.find_next(v))
            if (assignment[v]) acc = !acc;
        if (acc != e->rhs) return false;
    }
    return true;
}

struct OracleClassification {
    bool forced;
    bool value;
    bool vacuous;
};

/// Direct classification over the full solution set of L^{Cl(vars(C))}, with
/// the closure taken by the brute-force oracle.
inline OracleClassification classify_oracle(FormulaStore& store, const LinSystem& sys, Formula c,
                                            long long r) {
    if (c.kind() == Kind::Const) return {true, c.value(), false};
    BipartiteGraph g = incidence_graph(sys);
    std::vector<int> cvars;
    std::vector<VarId> extra;
    for (VarId v : collect_vars(c)) {
        auto idx = sysvar_index(store.var_name(v));
        if (idx && *idx >= 0 && *idx < sys.nvars()) cvars.push_back(*idx);
        else extra.push_back(v);
    }
    std::vector<int> cl_left = closure_oracle(g, cvars, r);
    std::vector<int> cl_idx;
    for (int l : cl_left) cl_idx.push_back(sys.equations()[static_cast<size_t>(l)].index);

    bool seen[2] = {false, false};
    size_t n = static_cast<size_t>(sys.nvars());
    for (size_t mask = 0; mask < (size_t{1} << n); ++mask) {
        std::vector<bool> a(n);
        for (size_t p = 0; p < n; ++p) a[p] = (mask >> p) & 1;
        if (!satisfies_subsystem(sys, cl_idx, a)) continue;
        // extra variables range over everything as well
        for (size_t emask = 0; emask < (size_t{1} << extra.size()); ++emask) {
            VarValuation val;
            for (size_t p = 0; p < n; ++p) val.set(store.var(sysvar_name(static_cast<int>(p))).var(), a[p]);
            for (size_t p = 0; p < extra.size(); ++p) val.set(extra[p], (emask >> p) & 1);
            seen[evaluate(c, val) ? 1 : 0] = true;
        }
        if (seen[0] && seen[1]) break;
    }
    if (seen[0] && seen[1]) return {false, false, false};
    if (seen[0] || seen[1]) return {true, seen[1], false};
    return {true, true, true};
}

/// Width-bounded refutability by an independent fixpoint loop (full repeated
/// passes over a set, no worklist or indexing).
inline bool width_refutable_oracle(const Cnf& f, int w) {
    std::set<std::vector<std::pair<int, int>>> db; // (var, sign) literals
    auto key = [](const Clause& c) {
        std::vector<std::pair<int, int>> k;
        for (const Literal& l : c.lits) k.emplace_back(l.var, l.positive ? 1 : 0);
        return k;
    };
    for (const Clause& c : f.clauses) db.insert(key(c));
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<std::vector<std::pair<int, int>>> items(db.begin(), db.end());
        for (size_t i = 0; i < items.size(); ++i) {
            for (size_t j = 0; j < items.size(); ++j) {
                for (const auto& [v, s] : items[i]) {
                    bool clash = false;
                    for (const auto& [v2, s2] : items[j])
                        if (v2 == v && s2 == 1 - s) clash = true;
                    if (!clash) continue;
                    std::map<int, int> lits;
                    bool taut = false;
                    for (const auto& [v2, s2] : items[i]) {
                        if (v2 == v) continue;
                        auto it = lits.find(v2);
                        if (it != lits.end() && it->second != s2) taut = true;
                        lits[v2] = s2;
                    }
                    for (const auto& [v2, s2] : items[j]) {
                        if (v2 == v) continue;
                        auto it = lits.find(v2);
                        if (it != lits.end() && it->second != s2) taut = true;
                        lits[v2] = s2;
                    }
                    if (taut) continue;
                    if (static_cast<int>(lits.size()) > w) continue;
                    std::vector<std::pair<int, int>> k(lits.begin(), lits.end());
                    if (db.insert(k).second) grew = true;
                }
            }
        }
        if (db.count({})) return true;
    }
    return db.count({}) != 0;
}

/// Exhaustive soundness: every assignment satisfying all inputs satisfies
/// every line.
inline bool proof_sound_oracle(const FregeProof& proof) {
    std::vector<Formula> all = proof.line_formulas();
    for (Formula f : proof.inputs()) all.push_back(f);
    std::vector<VarId> vars;
    for (const Formula& s : subformulas(all))
        if (s.kind() == Kind::Var) vars.push_back(s.var());
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    if (vars.size() > 16) return true; // out of exhaustive reach
    for (size_t mask = 0; mask < (size_t{1} << vars.size()); ++mask) {
        VarValuation a;
        for (size_t p = 0; p < vars.size(); ++p) a.set(vars[p], (mask >> p) & 1);
        bool inputs_ok = true;
        for (Formula f : proof.inputs())
            if (!evaluate(f, a)) {
                inputs_ok = false;
                break;
            }
        if (!inputs_ok) continue;
        for (const ProofLine& l : proof.lines())
            if (!evaluate(l.formula, a)) return false;
    }
    return true;
}

} // namespace pclab::testing
