#include "pclab/regularize.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_set>

#include "pclab/rng.hpp"

namespace pclab {

namespace {

long long checked_pow(long long base, long long exp) {
    long long out = 1;
    for (long long i = 0; i < exp; ++i) {
        if (out > (1LL << 62) / std::max<long long>(base, 1))
            throw Error(ErrorCode::InputError, "threshold parameter overflow");
        out *= base;
    }
    return out;
}

} // namespace

ThresholdSchedule ThresholdSchedule::make(long long n, int k) {
    if (n < 2 || k < 1) throw Error(ErrorCode::InputError, "schedule requires n >= 2 and k >= 1");
    long long e = (1LL << k) + 1;
    long long m = 1;
    while (checked_pow(m, e) < n) ++m;
    std::vector<long long> d{1};
    for (int i = 1; i <= k; ++i) d.push_back(checked_pow(m, 1LL << (i - 1)));
    ThresholdSchedule out;
    out.n = n;
    out.k = k;
    out.m = m;
    out.d = ThresholdVector::make(std::move(d));
    out.epsilon = Rational(1, 1LL << (k + 1));
    return out;
}

namespace {

std::vector<std::pair<FormulaId, std::set<int>>> sorted_level_entries(const LevelMap& levels) {
    std::vector<std::pair<FormulaId, std::set<int>>> out(levels.begin(), levels.end());
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
}

std::unordered_set<FormulaId> subformula_ids(std::span<const Formula> lines) {
    std::unordered_set<FormulaId> out;
    for (const Formula& f : subformulas(lines)) out.insert(f.id());
    return out;
}

bool has_level_at_most(const std::set<int>& levels, int bound) {
    return !levels.empty() && *levels.begin() <= bound;
}

/// Does C (an Or node) become a constant when D is committed to alpha?
/// Committing evaluates the children that are D or ~D; C collapses when a
/// child turns 1 or all children turn 0.
bool eliminated_by(Formula c, Formula d, bool alpha) {
    if (c.kind() != Kind::Or) return false;
    bool all_zero = true;
    for (FormulaId cid : c.child_ids()) {
        Formula child = c.store()->from_id(cid);
        int val = -1; // unknown
        if (child == d) val = alpha ? 1 : 0;
        else if (child.kind() == Kind::Neg && child.child() == d) val = alpha ? 0 : 1;
        if (val == 1) return true;
        if (val != 0) all_zero = false;
    }
    return all_zero;
}

struct Engine {
    FormulaStore& store;
    const FregeProof& proof;
    const LinSystem& sys0;
    const ThresholdSchedule& sched;
    const RegularizeConfig& config;

    RegularizationResult res;
    BipartiteGraph g0;
    BipartiteGraph g_cur;
    LinSystem l_cur;
    std::vector<int> left_index;
    VarAssignment rho_var;
    std::map<int, bool> rho_sys;
    FormulaAssignment sigma_prev;
    LeveledLines original;
    LeveledLines working;
    std::vector<int> j_all; // accumulated vars of the chosen subformulas
    std::vector<std::pair<VarAssignment, FormulaAssignment>> snapshots;
    ExpanderParams weak_params;

    Engine(FormulaStore& s, const FregeProof& p, const LinSystem& l, const ThresholdSchedule& sc,
           const RegularizeConfig& cfg)
        : store(s), proof(p), sys0(l), sched(sc), config(cfg) {}

    void record(const std::string& name, bool pass, const std::string& detail = "") {
        res.assertions.push_back(AssertionRecord{name, pass, detail});
    }

    void deviation(const std::string& s) { res.deviations.push_back(s); }

    ClassifyContext make_ctx() const {
        return ClassifyContext(store, l_cur, g_cur, left_index, weak_params, config.mode,
                               config.closure_opts, config.w_max, /*trusted=*/true);
    }

    VarId var_id_of_sys(int idx) { return store.var(sysvar_name(idx)).var(); }

    long long prefix_product(int upto) const { // d_1 * ... * d_upto
        long long p = 1;
        for (int j = 1; j <= upto; ++j) p *= sched.d.d[static_cast<size_t>(j)];
        return p;
    }

    std::vector<Formula> compute_h(const ClassifyContext& ctx, int level, long long di) {
        std::vector<Formula> h;
        std::unordered_set<FormulaId> in_lines = subformula_ids(working.lines);
        for (const auto& [id, levels] : sorted_level_entries(working.levels)) {
            if (levels.count(level) == 0) continue;
            if (in_lines.count(id) == 0) continue;
            Formula f = store.from_id(id);
            if (f.kind() != Kind::Or) continue;
            long long live = 0;
            for (FormulaId cid : f.child_ids())
                if (classify(ctx, store.from_id(cid)).live()) ++live;
            if (live > di) h.push_back(f);
        }
        return h;
    }

    struct Pick {
        Formula d;
        bool alpha;
        long long count;
    };

    Pick pick_pair(const ClassifyContext& ctx, const std::vector<Formula>& h) {
        std::vector<Formula> candidates;
        std::unordered_set<FormulaId> seen;
        for (const Formula& c : h)
            for (FormulaId cid : c.child_ids()) {
                Formula child = store.from_id(cid);
                if (!seen.insert(cid).second) continue;
                if (classify(ctx, child).live()) candidates.push_back(child);
            }
        std::optional<Pick> best;
        std::string best_key;
        for (const Formula& d : candidates) {
            std::string key = print_formula(d);
            for (int a = 0; a < 2; ++a) {
                long long count = 0;
                for (const Formula& c : h)
                    if (eliminated_by(c, d, a == 1)) ++count;
                if (count == 0) continue;
                bool better = false;
                if (!best || count > best->count) better = true;
                else if (count == best->count) {
                    if (key < best_key) better = true;
                    else if (key == best_key && a < (best->alpha ? 1 : 0)) better = true;
                }
                if (better) {
                    best = Pick{d, a == 1, count};
                    best_key = key;
                }
            }
        }
        if (!best)
            throw Error(ErrorCode::NoSatisfyingAssignment,
                        "internal: no elimination candidate for a nonempty set");
        return *best;
    }

    std::map<int, bool> step_assignment(const ClassifyContext& ctx, Formula d, bool alpha) {
        std::vector<int> cl_idx = ctx.closure_indices(d);
        std::vector<int> ext = ctx.extension_vars(d);
        std::vector<const Equation*> eqs;
        for (int idx : cl_idx) eqs.push_back(l_cur.find_index(idx));

        // position of each extension variable
        std::map<int, size_t> pos;
        for (size_t p = 0; p < ext.size(); ++p) pos[ext[p]] = p;
        struct EqView {
            std::vector<size_t> positions;
            bool rhs;
        };
        std::vector<EqView> views;
        for (const Equation* e : eqs) {
            EqView v;
            v.rhs = e->rhs;
            for (size_t x = e->support.find_first(); x != boost::dynamic_bitset<>::npos;
                 x = e->support.find_next(x)) {
                auto it = pos.find(static_cast<int>(x));
                if (it == pos.end())
                    throw Error(ErrorCode::NoSatisfyingAssignment,
                                "internal: closure equation leaves the extension");
                v.positions.push_back(it->second);
            }
            views.push_back(std::move(v));
        }

        std::vector<VarId> dvar_ids;
        for (int v : ctx.sysvars_of(d)) dvar_ids.push_back(var_id_of_sys(v));

        std::vector<int> assignment(ext.size(), -1);
        // lexicographically least: variables in ascending index order, 0 first
        std::optional<std::map<int, bool>> found;
        auto dfs = [&](auto&& self, size_t at) -> bool {
            if (at == ext.size()) {
                for (const EqView& v : views) {
                    bool acc = false;
                    for (size_t p : v.positions)
                        if (assignment[p] == 1) acc = !acc;
                    if (acc != v.rhs) return false;
                }
                VarValuation val;
                for (size_t p = 0; p < ext.size(); ++p)
                    val.set(var_id_of_sys(ext[p]), assignment[p] == 1);
                if (evaluate(d, val) != alpha) return false;
                std::map<int, bool> out;
                for (size_t p = 0; p < ext.size(); ++p) out[ext[p]] = assignment[p] == 1;
                found = std::move(out);
                return true;
            }
            for (int b = 0; b < 2; ++b) {
                assignment[at] = b;
                bool dead = false;
                for (const EqView& v : views) {
                    bool acc = false;
                    bool complete = true;
                    for (size_t p : v.positions) {
                        if (assignment[p] < 0) {
                            complete = false;
                            break;
                        }
                        if (assignment[p] == 1) acc = !acc;
                    }
                    if (complete && acc != v.rhs) {
                        dead = true;
                        break;
                    }
                }
                if (!dead && self(self, at + 1)) return true;
            }
            assignment[at] = -1;
            return false;
        };
        if (!dfs(dfs, 0))
            throw Error(ErrorCode::NoSatisfyingAssignment,
                        "internal: live subformula has no satisfying assignment");
        return *found;
    }

    /// Applies tau; returns false when the extension budget stops the run.
    bool apply_step(StepRecord rec, const std::map<int, bool>& tau, const std::vector<int>& dvars,
                    const std::vector<int>& cl_idx, const std::vector<int>& ext_cur) {
        std::vector<int> j_trial = j_all;
        j_trial.insert(j_trial.end(), dvars.begin(), dvars.end());
        std::sort(j_trial.begin(), j_trial.end());
        j_trial.erase(std::unique(j_trial.begin(), j_trial.end()), j_trial.end());
        std::vector<int> ext0 = extension(g0, j_trial, config.params.r, config.closure_opts);

        Rational budget = config.params.c * Rational(config.params.r) / Rational(4);
        if (Rational(static_cast<long long>(ext0.size())) > budget) {
            if (!config.ignore_extension_budget) {
                rec.extension_size = ext0.size();
                res.offending = rec;
                res.outcome = RegularizationResult::Outcome::BudgetExceeded;
                deviation("extension budget cr/4 exhausted at phase " +
                          std::to_string(rec.phase) + " step " + std::to_string(rec.step));
                return false;
            }
            deviation("extension budget cr/4 exceeded and ignored at phase " +
                      std::to_string(rec.phase) + " step " + std::to_string(rec.step));
        }

        LinSystem l_new = restrict_system(l_cur, tau);
        {
            std::set<int> before, after, dropped;
            for (const Equation& e : l_cur.equations()) before.insert(e.index);
            for (const Equation& e : l_new.equations()) after.insert(e.index);
            std::set_difference(before.begin(), before.end(), after.begin(), after.end(),
                                std::inserter(dropped, dropped.begin()));
            std::set<int> cl(cl_idx.begin(), cl_idx.end());
            record("step-drops-exactly-the-closure", dropped == cl,
                   "phase " + std::to_string(rec.phase) + " step " + std::to_string(rec.step));
        }

        BipartiteGraph g_new = g_cur.remove_right(ext_cur);
        BipartiteGraph g_oneshot = g0.remove_right(ext0);
        record("claim4-staged-equals-one-shot", g_new == g_oneshot,
               "phase " + std::to_string(rec.phase) + " step " + std::to_string(rec.step));
        ExpanderCheck weak = is_weak_expander(g_new, weak_params);
        record("claim4-weak-expansion", weak.certified(),
               "phase " + std::to_string(rec.phase) + " step " + std::to_string(rec.step));

        VarAssignment tau_var;
        for (const auto& [v, b] : tau) {
            tau_var.set(var_id_of_sys(v), b);
            rho_sys[v] = b;
        }
        rho_var.merge(tau_var);
        l_cur = std::move(l_new);
        g_cur = std::move(g_new);
        j_all = std::move(j_trial);
        working = restrict_lines(store, working, tau_var);
        rec.extension_size = ext0.size();
        rec.tau.assign(tau.begin(), tau.end());
        res.steps.push_back(std::move(rec));
        return true;
    }

    void build_sigma(int phase) {
        LeveledLines base = restrict_lines(store, original, rho_var);
        ClassifyContext ctx = make_ctx();

        std::vector<std::pair<Formula, bool>> b_set;
        for (const auto& [dd, alpha] : sigma_prev.pairs()) {
            Formula e = restrict_formula(store, dd, rho_var);
            if (e.kind() == Kind::Const)
                record("sigma-consistent-under-rho", e.value() == alpha,
                       "phase " + std::to_string(phase) + ": " + print_formula(dd));
            b_set.emplace_back(e, alpha);
        }

        std::vector<std::pair<Formula, bool>> mu;
        size_t cap = 2 * psz_lines(original.lines) + 2;
        for (size_t t = 0;; ++t) {
            if (t > cap)
                throw Error(ErrorCode::NonTermination,
                            "sigma construction exceeded the iteration cap");
            std::optional<std::pair<Formula, bool>> pick;

            // prefer minimally forced subformulas of the tracked pairs
            for (const auto& [e, alpha] : b_set) {
                (void)alpha;
                if (e.kind() == Kind::Const) continue;
                std::vector<std::pair<std::string, Formula>> subs;
                for (const Formula& s : subformulas(e))
                    if (s.kind() != Kind::Const) subs.emplace_back(print_formula(s), s);
                std::sort(subs.begin(), subs.end(),
                          [](const auto& a, const auto& b) { return a.first < b.first; });
                for (const auto& [key, s] : subs) {
                    (void)key;
                    Classification cls = classify(ctx, s);
                    if (cls.forced && minimally_forced(ctx, s)) {
                        pick = {s, cls.value};
                        break;
                    }
                }
                if (pick) break;
            }

            // otherwise any minimally forced subformula at levels below the phase
            if (!pick) {
                FormulaAssignment mu_now = FormulaAssignment::validate(mu);
                LeveledLines cur = restrict_lines(store, base, mu_now);
                std::unordered_set<FormulaId> in_lines = subformula_ids(cur.lines);
                std::vector<std::pair<std::string, Formula>> cands;
                for (const auto& [id, levels] : sorted_level_entries(cur.levels)) {
                    if (in_lines.count(id) == 0) continue;
                    if (!has_level_at_most(levels, phase - 1)) continue;
                    Formula f = store.from_id(id);
                    if (f.kind() == Kind::Const) continue;
                    cands.emplace_back(print_formula(f), f);
                }
                std::sort(cands.begin(), cands.end(),
                          [](const auto& a, const auto& b) { return a.first < b.first; });
                for (const auto& [key, f] : cands) {
                    (void)key;
                    Classification cls = classify(ctx, f);
                    if (cls.forced && minimally_forced(ctx, f)) {
                        pick = {f, cls.value};
                        break;
                    }
                }
            }

            if (!pick) break;
            Formula d = pick->first;
            bool val = pick->second;
            record("sigma-pair-shape",
                   d.kind() != Kind::Neg && !(d.kind() == Kind::Or && !val),
                   "phase " + std::to_string(phase) + ": " + print_formula(d));
            mu.emplace_back(d, val);
            FormulaAssignment single = FormulaAssignment::validate({{d, val}});
            for (auto& [e, alpha] : b_set) {
                (void)alpha;
                e = restrict_formula(store, e, single);
            }
        }

        FormulaAssignment sigma_i = FormulaAssignment::validate(mu);

        // claim 5 checks over proof|rho_i|sigma_i
        LeveledLines after = restrict_lines(store, base, sigma_i);
        std::unordered_set<FormulaId> in_lines = subformula_ids(after.lines);
        bool no_forced = true;
        std::string forced_witness;
        for (const auto& [id, levels] : sorted_level_entries(after.levels)) {
            if (in_lines.count(id) == 0) continue;
            if (!has_level_at_most(levels, phase - 1)) continue;
            Formula f = store.from_id(id);
            if (f.kind() == Kind::Const) continue;
            if (classify(ctx, f).forced) {
                no_forced = false;
                forced_witness = print_formula(f);
                break;
            }
        }
        record("claim5a-no-forced-below-phase", no_forced,
               "phase " + std::to_string(phase) +
                   (forced_witness.empty() ? "" : ": " + forced_witness));

        bool fanin_ok = true;
        std::string fanin_witness;
        for (const auto& [id, levels] : sorted_level_entries(after.levels)) {
            Formula f = store.from_id(id);
            for (int j : levels) {
                if (j > phase) continue;
                if (f.in_degree() > sched.d.d[static_cast<size_t>(j)]) {
                    fanin_ok = false;
                    fanin_witness = print_formula(f) + " at level " + std::to_string(j);
                    break;
                }
            }
            if (!fanin_ok) break;
        }
        record("claim5b-fanin-up-to-phase", fanin_ok,
               "phase " + std::to_string(phase) +
                   (fanin_witness.empty() ? "" : ": " + fanin_witness));

        bool pairs_ok = true;
        std::string pair_witness;
        long long cap_fanin = prefix_product(phase - 1);
        for (const auto& [dd, alpha] : sigma_i.pairs()) {
            Classification cls = classify(ctx, dd);
            if (!cls.forced || cls.value != alpha || dd.in_degree() > cap_fanin) {
                pairs_ok = false;
                pair_witness = print_formula(dd);
                break;
            }
        }
        record("claim5c-sigma-pairs-forced-with-bounded-fanin", pairs_ok,
               "phase " + std::to_string(phase) +
                   (pair_witness.empty() ? "" : ": " + pair_witness));

        PhaseRecord pr;
        pr.phase = phase;
        pr.steps = 0;
        for (const StepRecord& s : res.steps)
            if (s.phase == phase) ++pr.steps;
        for (const auto& [dd, alpha] : sigma_i.pairs())
            pr.sigma_pairs.emplace_back(print_formula(dd), alpha);
        res.phases.push_back(std::move(pr));

        working = std::move(after);
        sigma_prev = std::move(sigma_i);
        snapshots.emplace_back(rho_var, sigma_prev);
    }

    void final_checks() {
        // conclusion 1: disjoint domains; sigma formulas survive rho unchanged
        bool disjoint = true;
        std::string witness;
        for (const auto& [dd, alpha] : sigma_prev.pairs()) {
            (void)alpha;
            if (dd.kind() == Kind::Var && rho_var.contains(dd.var())) {
                disjoint = false;
                witness = print_formula(dd);
                break;
            }
            if (restrict_formula(store, dd, rho_var) != dd) {
                disjoint = false;
                witness = print_formula(dd);
                break;
            }
        }
        record("conclusion1-disjoint-domains", disjoint, witness);

        // conclusion 2: restricted system weakly expanding
        ExpanderCheck weak = is_weak_expander(g_cur, weak_params);
        record("conclusion2-weak-expansion", weak.certified());

        // conclusion 3: sigma pairs forced with fan-in at most d_1...d_k
        ClassifyContext ctx = make_ctx();
        bool pairs_ok = true;
        std::string pair_witness;
        long long cap_fanin = prefix_product(sched.k);
        for (const auto& [dd, alpha] : sigma_prev.pairs()) {
            Classification cls = classify(ctx, dd);
            if (!cls.forced || cls.value != alpha || dd.in_degree() > cap_fanin) {
                pairs_ok = false;
                pair_witness = print_formula(dd);
                break;
            }
        }
        record("conclusion3-sigma-pairs", pairs_ok, pair_witness);

        // conclusion 4: d-regularity of the restricted lines
        RegularityCheck reg = is_d_regular(store, working.levels, sched.d);
        record("conclusion4-d-regular", reg.ok,
               reg.ok ? "" : print_formula(reg.violations.front().formula));

        // consistency of staged and direct restriction on sampled subformulas
        std::vector<Formula> subs = subformulas(original.lines);
        SplitMix64 rng(config.sample_seed);
        for (size_t i = subs.size(); i > 1; --i)
            std::swap(subs[i - 1], subs[rng.below(i)]);
        size_t count = std::min<size_t>(subs.size(), static_cast<size_t>(config.consistency_samples));
        bool consistent = true;
        std::string cons_witness;
        for (size_t s = 0; s < count && consistent; ++s) {
            Formula d = subs[s];
            for (size_t i = 0; i < snapshots.size(); ++i) {
                const auto& [rho_i, sigma_i] = snapshots[i];
                Formula lhs = d;
                if (i > 0) {
                    const auto& [rho_p, sigma_p] = snapshots[i - 1];
                    lhs = restrict_formula(store, lhs, rho_p);
                    lhs = restrict_formula(store, lhs, sigma_p);
                }
                lhs = restrict_formula(store, lhs, rho_i);
                lhs = restrict_formula(store, lhs, sigma_i);
                Formula rhs = restrict_formula(store, d, rho_i);
                rhs = restrict_formula(store, rhs, sigma_i);
                if (lhs != rhs) {
                    consistent = false;
                    cons_witness = print_formula(d) + " at phase " + std::to_string(i + 1);
                    break;
                }
            }
        }
        record("staged-restriction-consistency", consistent, cons_witness);
    }

    RegularizationResult run() {
        weak_params = ExpanderParams{config.params.r, config.params.degree_cap,
                                     config.params.c / Rational(2)};
        g0 = incidence_graph(sys0);
        for (const Equation& e : sys0.equations()) left_index.push_back(e.index);
        g_cur = g0;
        l_cur = sys0;

        // proof variables must be system variables
        original = make_leveled(proof.line_formulas());
        int max_depth = 0;
        for (const auto& [id, levels] : original.levels) {
            (void)levels;
            Formula f = store.from_id(id);
            max_depth = std::max(max_depth, f.depth());
            if (f.kind() == Kind::Var) {
                auto idx = sysvar_index(store.var_name(f.var()));
                if (!idx || *idx < 0 || *idx >= sys0.nvars())
                    throw Error(ErrorCode::InputError,
                                "proof variable " + store.var_name(f.var()) +
                                    " is not a system variable");
            }
        }
        if (max_depth > sched.k)
            throw Error(ErrorCode::InputError, "proof depth exceeds the schedule depth");

        if (config.mode == ClassifyMode::Strict) {
            ExpanderCheck strong = is_boundary_expander(g0, config.params);
            if (!strong.certified())
                throw Error(ErrorCode::InputError,
                            "strict mode requires a certified boundary expander input");
        } else {
            ExpanderCheck strong = is_boundary_expander(g0, config.params);
            if (!strong.certified())
                deviation("input graph is not a certified boundary expander for the parameters");
        }

        working = original;

        for (int phase = 1; phase <= sched.k; ++phase) {
            long long di = sched.d.d[static_cast<size_t>(phase)];
            std::vector<Formula> prev_h;
            VarAssignment prev_tau;
            int q = 0;
            while (true) {
                ClassifyContext ctx = make_ctx();
                std::vector<Formula> h = compute_h(ctx, phase, di);

                if (q > 0) {
                    std::unordered_set<FormulaId> images;
                    for (const Formula& c : prev_h)
                        images.insert(restrict_formula(store, c, prev_tau).id());
                    bool shrink = true;
                    for (const Formula& c : h)
                        if (images.count(c.id()) == 0) {
                            shrink = false;
                            break;
                        }
                    shrink = shrink && h.size() < prev_h.size();
                    record("claim2-h-shrinks", shrink,
                           "phase " + std::to_string(phase) + " step " + std::to_string(q));
                    if (!res.steps.empty()) res.steps.back().h_after = h.size();
                }
                if (h.empty()) break;

                ++q;
                size_t s = psz_lines(working.lines);
                long double bound =
                    2.0L * static_cast<long double>(s) / static_cast<long double>(di) *
                    std::log2(static_cast<long double>(std::max<size_t>(s, 2)));
                record("claim3-step-bound", static_cast<long double>(q) <= bound,
                       "phase " + std::to_string(phase) + " step " + std::to_string(q));

                Pick pick = pick_pair(ctx, h);
                record("frequency-bound",
                       pick.count * 2 * static_cast<long long>(s) >=
                           di * static_cast<long long>(h.size()),
                       "phase " + std::to_string(phase) + " step " + std::to_string(q));

                std::vector<int> dvars = ctx.sysvars_of(pick.d);
                record("claim1-step-domain-bound",
                       static_cast<long long>(dvars.size()) <= prefix_product(phase - 1),
                       "phase " + std::to_string(phase) + " step " + std::to_string(q));

                std::vector<int> cl_idx = ctx.closure_indices(pick.d);
                std::vector<int> ext_cur = ctx.extension_vars(pick.d);
                std::map<int, bool> tau = step_assignment(ctx, pick.d, pick.alpha);

                StepRecord rec;
                rec.phase = phase;
                rec.step = q;
                rec.chosen = print_formula(pick.d);
                rec.alpha = pick.alpha;
                rec.eliminated = pick.count;
                rec.h_before = h.size();
                rec.h_after = 0; // filled at the next H computation

                for (const std::string& dev : ctx.deviations()) deviation(dev);

                if (!apply_step(std::move(rec), tau, dvars, cl_idx, ext_cur)) return finish();

                prev_h = std::move(h);
                prev_tau = VarAssignment();
                for (const auto& [v, b] : tau) prev_tau.set(var_id_of_sys(v), b);
            }

            build_sigma(phase);
        }

        final_checks();
        return finish();
    }

    RegularizationResult finish() {
        res.rho = rho_var;
        res.rho_sys = rho_sys;
        res.sigma = sigma_prev;
        res.restricted = working;
        return std::move(res);
    }
};

} // namespace

bool RegularizationResult::all_assertions_pass() const {
    for (const AssertionRecord& a : assertions)
        if (!a.pass) return false;
    return true;
}

RegularizationResult regularize(FormulaStore& store, const FregeProof& proof, const LinSystem& sys,
                                const ThresholdSchedule& sched, const RegularizeConfig& config) {
    Engine engine(store, proof, sys, sched, config);
    return engine.run();
}

} // namespace pclab
