#include "pclab/semantic.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace pclab {

namespace {

std::vector<VarId> union_support(std::span<const TruthTable* const> tables) {
    std::vector<VarId> u;
    for (const TruthTable* t : tables) u.insert(u.end(), t->support.begin(), t->support.end());
    std::sort(u.begin(), u.end());
    u.erase(std::unique(u.begin(), u.end()), u.end());
    return u;
}

} // namespace

SemanticCheck check_semantic(const SemanticDerivation& d, std::span<const TruthTable> axioms,
                             const SemanticCheckOptions& opts) {
    std::vector<TruthTable> canon_axioms(axioms.begin(), axioms.end());
    for (TruthTable& t : canon_axioms) t.canonicalize();

    SemanticCheck out;
    auto fail = [&](int line, const std::string& reason) {
        out.ok = false;
        out.line = line;
        out.reason = reason;
        return out;
    };

    for (size_t i = 0; i < d.lines.size(); ++i) {
        const SemanticLine& l = d.lines[i];
        TruthTable set = l.set;
        set.canonicalize();
        if (l.just.axiom) {
            bool found = false;
            for (const TruthTable& a : canon_axioms)
                if (a == set) {
                    found = true;
                    break;
                }
            if (!found) return fail(static_cast<int>(i), "axiom line not in the axiom set");
            continue;
        }
        if (static_cast<int>(l.just.premises.size()) > opts.c_max)
            return fail(static_cast<int>(i), "rule uses too many premises");
        std::vector<const TruthTable*> prem;
        bool bad = false;
        for (int p : l.just.premises) {
            if (p < 0 || static_cast<size_t>(p) >= i) {
                bad = true;
                break;
            }
            prem.push_back(&d.lines[static_cast<size_t>(p)].set);
        }
        if (bad) return fail(static_cast<int>(i), "premise is not an earlier line");
        std::vector<const TruthTable*> all = prem;
        all.push_back(&l.set);
        std::vector<VarId> u = union_support(all);
        if (static_cast<int>(u.size()) > opts.w_max)
            throw Error(ErrorCode::SupportTooLarge, "rule step union support exceeds the limit");
        boost::dynamic_bitset<> meet(size_t{1} << u.size());
        meet.set();
        for (const TruthTable* t : prem) meet &= t->lifted(u).bits;
        boost::dynamic_bitset<> target = l.set.lifted(u).bits;
        if ((meet & ~target).any())
            return fail(static_cast<int>(i), "intersection of premises not contained in the line");
    }
    return out;
}

int line_width(const TruthTable& t) {
    TruthTable c = t;
    c.canonicalize();
    return static_cast<int>(c.support.size());
}

TruthTable semantic_line_of(Formula f, int w_max) { return table_of_formula(f, w_max); }

namespace {

struct TransformContext {
    FormulaStore& store;
    const FormulaAssignment& sigma;
    const VarAssignment* rho;
    int w_max;
    SemanticDerivation out;
    std::unordered_map<FormulaId, int> sigma_axiom_lines;
    size_t max_width = 0;

    Formula restricted(Formula f) {
        Formula cur = f;
        if (rho != nullptr) cur = restrict_formula(store, cur, *rho);
        return restrict_formula(store, cur, sigma);
    }

    int emit(TruthTable set, Justification just) {
        set.canonicalize();
        max_width = std::max(max_width, set.support.size());
        out.lines.push_back(SemanticLine{std::move(set), std::move(just)});
        return static_cast<int>(out.lines.size() - 1);
    }

    int emit_formula_line(Formula f, Justification just) {
        return emit(table_of_formula(f, w_max), std::move(just));
    }

    /// Line for the axiom D^alpha behind a weakening fold; emitted on demand.
    int sigma_axiom(Formula d) {
        auto it = sigma_axiom_lines.find(d.id());
        if (it != sigma_axiom_lines.end()) return it->second;
        auto v = sigma.value_of(d);
        if (!v) throw Error(ErrorCode::InputError, "internal: fold matched a non-domain formula");
        Formula ax = *v ? d : store.negation(d);
        Justification just;
        just.axiom = true;
        just.tag = "sigma:" + print_formula(ax);
        int idx = emit_formula_line(ax, std::move(just));
        sigma_axiom_lines.emplace(d.id(), idx);
        return idx;
    }

    std::vector<Formula> restricted_children(Formula f) {
        std::vector<Formula> kids;
        if (f.kind() == Kind::Or)
            for (FormulaId c : f.child_ids()) kids.push_back(restricted(store.from_id(c)));
        else
            kids.push_back(restricted(f));
        return kids;
    }
};

Justification rule_just(std::vector<int> premises) {
    Justification j;
    j.premises = std::move(premises);
    return j;
}

Justification axiom_just(std::string tag) {
    Justification j;
    j.axiom = true;
    j.tag = std::move(tag);
    return j;
}

} // namespace

TransformResult transform(FormulaStore& store, const FregeProof& proof,
                          const FormulaAssignment& sigma, const VarAssignment* rho, int w_max) {
    TransformContext ctx{store, sigma, rho, w_max, {}, {}, 0};
    std::map<int, int> line_of; // proof line id -> derivation index

    for (const ProofLine& l : proof.lines()) {
        Formula r = ctx.restricted(l.formula);
        int idx = -1;
        if (r.is_const(true)) {
            // trivially derivable as the full space
            idx = ctx.emit(TruthTable::full_space(), rule_just({}));
            line_of[l.id] = idx;
            continue;
        }
        switch (l.rule) {
            case Rule::Input:
                idx = ctx.emit_formula_line(r, axiom_just("input:" + std::to_string(l.id)));
                break;
            case Rule::Contraction:
            case Rule::Associative:
                // invisible in merged form: the premise restricts to the same formula
                idx = ctx.emit_formula_line(r, rule_just({line_of.at(l.premises[0])}));
                break;
            case Rule::Weakening:
                idx = ctx.emit_formula_line(r, rule_just({line_of.at(l.premises[0])}));
                break;
            case Rule::ExcludedMiddle:
                // non-constant restriction of p|~p is still a tautology
                idx = ctx.emit_formula_line(r, rule_just({}));
                break;
            case Rule::Cut: {
                const ProofLine* j1 = proof.by_id(l.premises[0]);
                const ProofLine* j2 = proof.by_id(l.premises[1]);
                Formula a = l.substitution.at('p');
                Formula ra = ctx.restricted(a);
                Formula rj1 = ctx.restricted(j1->formula);
                Formula rj2 = ctx.restricted(j2->formula);
                if (rj1.is_const(false)) {
                    idx = ctx.emit_formula_line(r, rule_just({line_of.at(j1->id)}));
                } else if (rj2.is_const(false)) {
                    idx = ctx.emit_formula_line(r, rule_just({line_of.at(j2->id)}));
                } else if (ra.is_const(false)) {
                    // first premise restricts to q's restriction
                    idx = ctx.emit_formula_line(r, rule_just({line_of.at(j1->id)}));
                } else if (ra.is_const(true)) {
                    idx = ctx.emit_formula_line(r, rule_just({line_of.at(j2->id)}));
                } else {
                    int p1, p2;
                    if (rj1.is_const(true)) {
                        auto d1 = weakening_match(store, ctx.restricted_children(j1->formula), sigma);
                        if (!d1)
                            throw Error(ErrorCode::InputError,
                                        "internal: premise folded to 1 without a weakening match");
                        p1 = ctx.sigma_axiom(*d1);
                    } else {
                        p1 = line_of.at(j1->id);
                    }
                    if (rj2.is_const(true)) {
                        auto d2 = weakening_match(store, ctx.restricted_children(j2->formula), sigma);
                        if (!d2)
                            throw Error(ErrorCode::InputError,
                                        "internal: premise folded to 1 without a weakening match");
                        p2 = ctx.sigma_axiom(*d2);
                    } else {
                        p2 = line_of.at(j2->id);
                    }
                    idx = ctx.emit_formula_line(r, rule_just({p1, p2}));
                }
                break;
            }
        }
        line_of[l.id] = idx;
    }

    TransformResult res;
    res.derivation = std::move(ctx.out);
    res.max_width = ctx.max_width;

    size_t base = 1;
    for (const ProofLine& l : proof.lines())
        base = std::max(base, static_cast<size_t>(table_of_formula(l.formula, w_max).support.size()));
    for (Formula ax : axiom_set(store, sigma))
        base = std::max(base, static_cast<size_t>(table_of_formula(ax, w_max).support.size()));
    res.base_width = base;
    res.width_ratio = static_cast<double>(res.max_width) / static_cast<double>(base);
    return res;
}

namespace {

// returns nullopt for tautological resolvents
std::optional<Clause> resolve(const Clause& c1, const Clause& c2, int pivot) {
    std::map<int, bool> lits;
    bool taut = false;
    auto add = [&](const Literal& l) {
        if (l.var == pivot) return;
        auto it = lits.find(l.var);
        if (it == lits.end()) lits.emplace(l.var, l.positive);
        else if (it->second != l.positive) taut = true;
    };
    for (const Literal& l : c1.lits) add(l);
    for (const Literal& l : c2.lits) add(l);
    if (taut) return std::nullopt;
    std::vector<Literal> out;
    for (const auto& [v, pos] : lits) out.push_back(Literal{v, pos});
    return Clause{std::move(out)};
}

} // namespace

SaturationResult resolution_width_saturation(const Cnf& f, int w) {
    SaturationResult res;
    std::vector<Clause> clauses;
    std::set<Clause> seen;

    for (const Clause& c : f.clauses) {
        if (static_cast<int>(c.lits.size()) > w)
            throw Error(ErrorCode::ClauseTooWide, "initial clause wider than the saturation bound");
        if (seen.insert(c).second) {
            clauses.push_back(c);
            res.initial.push_back(c);
        }
    }

    for (size_t t = 0; t < clauses.size(); ++t) {
        if (clauses[t].lits.empty()) {
            res.refutable = true;
            res.empty_clause_id = static_cast<int>(t);
            return res;
        }
        for (size_t u = 0; u < t; ++u) {
            const Clause& a = clauses[u];
            const Clause& b = clauses[t];
            // pivots: variables with opposite signs in a and b
            for (const Literal& la : a.lits) {
                for (const Literal& lb : b.lits) {
                    if (la.var != lb.var || la.positive == lb.positive) continue;
                    auto r = resolve(a, b, la.var);
                    if (!r) continue;
                    if (static_cast<int>(r->lits.size()) > w) continue;
                    if (!seen.insert(*r).second) continue;
                    clauses.push_back(*r);
                    res.steps.push_back(ResolutionStep{*r, static_cast<int>(u),
                                                       static_cast<int>(t), la.var});
                }
            }
        }
    }
    return res;
}

std::string derivation_to_jsonl(const FormulaStore& store, const SemanticDerivation& d) {
    std::ostringstream out;
    for (size_t i = 0; i < d.lines.size(); ++i) {
        const SemanticLine& l = d.lines[i];
        nlohmann::json j;
        j["id"] = i + 1;
        nlohmann::json sup = nlohmann::json::array();
        for (VarId v : l.set.support) sup.push_back(store.var_name(v));
        j["support"] = sup;
        j["bits"] = bits_to_hex(l.set.bits);
        if (l.just.axiom) {
            j["just"] = "axiom:" + l.just.tag;
        } else {
            nlohmann::json prem = nlohmann::json::array();
            for (int p : l.just.premises) prem.push_back(p + 1);
            j["just"] = prem;
        }
        out << j.dump() << "\n";
    }
    return out.str();
}

SemanticDerivation parse_derivation_jsonl(FormulaStore& store, const std::string& text) {
    SemanticDerivation d;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line);
        SemanticLine l;
        for (const auto& name : j.at("support")) {
            Formula v = store.var(name.get<std::string>());
            l.set.support.push_back(v.var());
        }
        if (!std::is_sorted(l.set.support.begin(), l.set.support.end()))
            throw Error(ErrorCode::SyntaxError, "derivation line support must be sorted");
        l.set.bits = bits_from_hex(j.at("bits").get<std::string>(),
                                   size_t{1} << l.set.support.size());
        const auto& just = j.at("just");
        if (just.is_string()) {
            std::string s = just.get<std::string>();
            if (s.rfind("axiom:", 0) != 0)
                throw Error(ErrorCode::SyntaxError, "bad justification string");
            l.just.axiom = true;
            l.just.tag = s.substr(6);
        } else {
            for (const auto& p : just) l.just.premises.push_back(p.get<int>() - 1);
        }
        d.lines.push_back(std::move(l));
    }
    return d;
}

} // namespace pclab
