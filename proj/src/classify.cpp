#include "pclab/classify.hpp"

#include <algorithm>

namespace pclab {

ClassifyContext::ClassifyContext(FormulaStore& store, LinSystem sys, ExpanderParams params,
                                 ClassifyMode mode, ClosureOptions closure_opts, int w_max,
                                 bool trusted)
    : store_(&store),
      sys_(std::move(sys)),
      graph_(incidence_graph(sys_)),
      params_(params),
      mode_(mode),
      closure_opts_(closure_opts),
      w_max_(w_max) {
    for (const Equation& e : sys_.equations()) eq_index_of_left_.push_back(e.index);
    init_certificate(trusted);
}

ClassifyContext::ClassifyContext(FormulaStore& store, LinSystem sys, BipartiteGraph graph,
                                 std::vector<int> eq_index_of_left, ExpanderParams params,
                                 ClassifyMode mode, ClosureOptions closure_opts, int w_max,
                                 bool trusted)
    : store_(&store),
      sys_(std::move(sys)),
      graph_(std::move(graph)),
      eq_index_of_left_(std::move(eq_index_of_left)),
      params_(params),
      mode_(mode),
      closure_opts_(closure_opts),
      w_max_(w_max) {
    init_certificate(trusted);
}

void ClassifyContext::init_certificate(bool trusted) {
    if (mode_ != ClassifyMode::Strict || trusted) return;
    ExpanderCheck check = is_weak_expander(graph_, params_);
    if (!check.certified())
        throw Error(ErrorCode::InputError,
                    "strict mode requires a certified weak expander for the system graph");
}

std::vector<int> ClassifyContext::sysvars_of(Formula f) const {
    std::vector<int> out;
    for (VarId v : collect_vars(f)) {
        auto idx = sysvar_index(store_->var_name(v));
        if (idx && *idx >= 0 && *idx < sys_.nvars()) out.push_back(*idx);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<int> ClassifyContext::closure_indices(Formula c) const {
    std::vector<int> left = closure(graph_, sysvars_of(c), params_.r, closure_opts_);
    std::vector<int> out;
    for (int l : left) out.push_back(eq_index_of_left_.at(static_cast<size_t>(l)));
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<int> ClassifyContext::extension_vars(Formula c) const {
    std::vector<int> left = closure(graph_, sysvars_of(c), params_.r, closure_opts_);
    std::vector<int> out = graph_.neighbors_of_set(left);
    std::vector<int> vars = sysvars_of(c);
    out.insert(out.end(), vars.begin(), vars.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::optional<Classification> ClassifyContext::memo_get(FormulaId id) const {
    std::lock_guard<std::mutex> lk(mu_);
    auto it = memo_.find(id);
    if (it == memo_.end()) return std::nullopt;
    return it->second;
}

void ClassifyContext::memo_put(FormulaId id, const Classification& c) const {
    std::lock_guard<std::mutex> lk(mu_);
    memo_.emplace(id, c);
}

void ClassifyContext::record_deviation(const std::string& s) const {
    std::lock_guard<std::mutex> lk(mu_);
    deviations_.push_back(s);
}

std::vector<std::string> ClassifyContext::deviations() const {
    std::lock_guard<std::mutex> lk(mu_);
    return deviations_;
}

namespace {

/// Satisfiability of L^I with the given variables pinned.
bool pinned_sat(const ClassifyContext& ctx, const std::vector<int>& indices,
                const std::vector<std::pair<int, bool>>& pins) {
    LinSystem sys(ctx.system().nvars());
    int synthetic = 0;
    for (const Equation& e : ctx.system().equations()) {
        synthetic = std::max(synthetic, e.index + 1);
    }
    for (int idx : indices) {
        const Equation* e = ctx.system().find_index(idx);
        if (e == nullptr) throw Error(ErrorCode::InputError, "closure names a missing equation");
        sys.add(e->support, e->rhs, e->index);
    }
    for (const auto& [v, b] : pins) sys.add_vars({v}, b, synthetic++);
    return gaussian_sat(sys).sat;
}

} // namespace

Classification classify(const ClassifyContext& ctx, Formula c) {
    if (c.kind() == Kind::Const) {
        Classification out;
        out.forced = true;
        out.value = c.value();
        return out;
    }
    if (auto hit = ctx.memo_get(c.id())) return *hit;

    Classification out;

    // width precondition: semantic width when computable, else the syntactic
    // variable count as an upper bound
    std::vector<VarId> fvars = collect_vars(c);
    int width;
    if (static_cast<int>(fvars.size()) <= ctx.w_max()) {
        width = semantic_width(c, ctx.w_max());
    } else {
        width = static_cast<int>(fvars.size());
        ctx.record_deviation("width of " + print_formula(c) + " used as syntactic upper bound");
    }
    Rational bound = ctx.params().c * Rational(ctx.params().r) / Rational(2);
    if (Rational(width) > bound) {
        if (ctx.mode() == ClassifyMode::Strict)
            throw Error(ErrorCode::WidthBound,
                        "formula width " + std::to_string(width) + " exceeds cr/2");
        out.width_ok = false;
        ctx.record_deviation("width bound skipped for " + print_formula(c));
    }

    std::vector<int> closure_idx = ctx.closure_indices(c);

    // enumerate assignments of vars(C), each extended through the pinned
    // subsystem
    bool seen[2] = {false, false};
    size_t count = fvars.size();
    if (count > 24)
        throw Error(ErrorCode::SupportTooLarge, "too many variables to classify exhaustively");
    for (size_t mask = 0; mask < (size_t{1} << count); ++mask) {
        VarValuation val;
        std::vector<std::pair<int, bool>> pins;
        for (size_t p = 0; p < count; ++p) {
            bool b = ((mask >> p) & 1) != 0;
            val.set(fvars[p], b);
            auto sidx = sysvar_index(ctx.store().var_name(fvars[p]));
            if (sidx && *sidx >= 0 && *sidx < ctx.system().nvars()) pins.emplace_back(*sidx, b);
        }
        if (!pinned_sat(ctx, closure_idx, pins)) continue;
        seen[evaluate(c, val) ? 1 : 0] = true;
        if (seen[0] && seen[1]) break;
    }

    if (seen[0] && seen[1]) {
        out.forced = false;
    } else if (seen[0] || seen[1]) {
        out.forced = true;
        out.value = seen[1];
    } else {
        // the closure subsystem itself is unsatisfiable; unreachable in
        // strict mode
        out.forced = true;
        out.value = true;
        out.vacuous = true;
        ctx.record_deviation("closure subsystem unsatisfiable under " + print_formula(c));
    }
    ctx.memo_put(c.id(), out);
    return out;
}

bool minimally_forced(const ClassifyContext& ctx, Formula c) {
    Classification cls = classify(ctx, c);
    if (!cls.forced)
        throw Error(ErrorCode::InputError, "minimally_forced requires a forced formula");
    for (const Formula& sub : subformulas(c)) {
        if (sub == c) continue;
        if (classify(ctx, sub).forced) return false;
    }
    return true;
}

namespace {

TruthTable equation_table(const ClassifyContext& ctx, const Equation& e) {
    std::vector<VarId> support;
    std::vector<int> sysidx;
    for (size_t v = e.support.find_first(); v != boost::dynamic_bitset<>::npos;
         v = e.support.find_next(v)) {
        support.push_back(ctx.store().var(sysvar_name(static_cast<int>(v))).var());
        sysidx.push_back(static_cast<int>(v));
    }
    // table support must be sorted by variable id
    std::vector<size_t> order(support.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return support[a] < support[b]; });
    TruthTable t;
    for (size_t i : order) t.support.push_back(support[i]);
    t.bits.resize(size_t{1} << t.support.size());
    for (size_t mask = 0; mask < t.bits.size(); ++mask) {
        bool parity = false;
        for (size_t p = 0; p < t.support.size(); ++p)
            if ((mask >> p) & 1) parity = !parity;
        if (parity == e.rhs) t.bits.set(mask);
    }
    return t;
}

} // namespace

std::vector<TruthTable> certificate_axioms(const ClassifyContext& ctx, Formula c) {
    std::vector<TruthTable> out;
    for (int idx : ctx.closure_indices(c)) {
        const Equation* e = ctx.system().find_index(idx);
        out.push_back(equation_table(ctx, *e));
    }
    return out;
}

SemanticDerivation forced_axiom_certificate(const ClassifyContext& ctx, Formula c, bool alpha) {
    Classification cls = classify(ctx, c);
    if (!cls.forced || cls.value != alpha)
        throw Error(ErrorCode::InputError, "certificate requested for a non-forced value");

    SemanticDerivation d;
    if (c.kind() == Kind::Const) return d; // axiomatic truth, empty derivation

    std::vector<int> ext = ctx.extension_vars(c);
    size_t width_cap = ext.size();
    auto guard = [&](const TruthTable& t) {
        TruthTable canon = t;
        canon.canonicalize();
        if (canon.support.size() > width_cap)
            throw Error(ErrorCode::WidthOverflow,
                        "certificate line width exceeds the extension size");
        return canon;
    };

    std::vector<int> closure_idx = ctx.closure_indices(c);
    int prev = -1;
    TruthTable acc = TruthTable::full_space();
    for (int idx : closure_idx) {
        const Equation* e = ctx.system().find_index(idx);
        TruthTable t = equation_table(ctx, *e);
        Justification j;
        j.axiom = true;
        j.tag = "eq:" + std::to_string(idx);
        d.lines.push_back(SemanticLine{guard(t), std::move(j)});
        int cur = static_cast<int>(d.lines.size() - 1);
        // conjunction chain
        std::vector<VarId> u;
        std::set_union(acc.support.begin(), acc.support.end(), t.support.begin(), t.support.end(),
                       std::back_inserter(u));
        TruthTable lifted_acc = acc.lifted(u);
        TruthTable lifted_t = t.lifted(u);
        TruthTable conj;
        conj.support = u;
        conj.bits = lifted_acc.bits & lifted_t.bits;
        if (prev < 0) {
            acc = conj;
            prev = cur;
            continue;
        }
        Justification cj;
        cj.premises = {prev, cur};
        d.lines.push_back(SemanticLine{guard(conj), std::move(cj)});
        prev = static_cast<int>(d.lines.size() - 1);
        acc = conj;
    }

    Formula target = alpha ? c : ctx.store().negation(c);
    TruthTable final_set = table_of_formula(target, ctx.w_max());
    Justification fj;
    if (prev >= 0) fj.premises = {prev};
    d.lines.push_back(SemanticLine{guard(final_set), std::move(fj)});
    return d;
}

} // namespace pclab
