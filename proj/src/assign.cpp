#include "pclab/assign.hpp"

#include <algorithm>
#include <atomic>

#include <nlohmann/json.hpp>

namespace pclab {

void VarAssignment::set(VarId v, bool b) {
    auto it = values_.find(v);
    if (it != values_.end() && it->second != b)
        throw Error(ErrorCode::DuplicateDomain, "variable assigned twice with different values");
    values_[v] = b;
}

std::optional<bool> VarAssignment::get(VarId v) const {
    auto it = values_.find(v);
    if (it == values_.end()) return std::nullopt;
    return it->second;
}

void VarAssignment::merge(const VarAssignment& other) {
    for (const auto& [v, b] : other.values()) set(v, b);
}

namespace {
std::atomic<uint64_t> next_assignment_revision{1};
}

FormulaAssignment::FormulaAssignment()
    : revision_(next_assignment_revision.fetch_add(1)), memo_(std::make_shared<Memo>()) {}

FormulaAssignment FormulaAssignment::validate(const std::vector<std::pair<Formula, bool>>& pairs) {
    FormulaAssignment out;
    for (const auto& [f, v] : pairs) {
        switch (f.kind()) {
            case Kind::Neg:
                throw Error(ErrorCode::NegationTopGate,
                            "domain formula has a negation top gate: " + print_formula(f));
            case Kind::Const:
                throw Error(ErrorCode::ConstantInDomain,
                            "domain formula is a constant: " + print_formula(f));
            case Kind::Or:
                if (!v)
                    throw Error(ErrorCode::DisjunctionMappedToZero,
                                "disjunction mapped to 0: " + print_formula(f));
                break;
            case Kind::Var: break;
        }
        auto it = out.by_id_.find(f.id());
        if (it != out.by_id_.end()) {
            if (it->second != v)
                throw Error(ErrorCode::DuplicateDomain,
                            "domain formula repeated with conflicting values: " + print_formula(f));
            continue; // identical duplicate pair, set semantics
        }
        out.by_id_.emplace(f.id(), v);
        out.pairs_.emplace_back(f, v);
        if (f.kind() == Kind::Or) out.domain_ors_.push_back(f);
    }
    std::sort(out.domain_ors_.begin(), out.domain_ors_.end());
    return out;
}

FormulaAssignment FormulaAssignment::from_var_assignment(FormulaStore& store,
                                                         const VarAssignment& rho) {
    std::vector<std::pair<Formula, bool>> pairs;
    for (const auto& [v, b] : rho.values()) pairs.emplace_back(store.var(store.var_name(v)), b);
    return validate(pairs);
}

std::optional<bool> FormulaAssignment::value_of(Formula f) const {
    auto it = by_id_.find(f.id());
    if (it == by_id_.end()) return std::nullopt;
    return it->second;
}

std::optional<FormulaId> FormulaAssignment::memo_get(FormulaId id) const {
    std::lock_guard<std::mutex> lk(memo_->mu);
    auto it = memo_->map.find(id);
    if (it == memo_->map.end()) return std::nullopt;
    return it->second;
}

void FormulaAssignment::memo_put(FormulaId id, FormulaId result) const {
    std::lock_guard<std::mutex> lk(memo_->mu);
    memo_->map.emplace(id, result);
}

namespace {

Formula restrict_rec(FormulaStore& store, Formula f, const FormulaAssignment& sigma) {
    if (auto hit = sigma.memo_get(f.id())) return store.from_id(*hit);
    Formula result;
    switch (f.kind()) {
        case Kind::Const:
            result = f;
            break;
        case Kind::Var: {
            auto v = sigma.value_of(f);
            result = v ? store.constant(*v) : f;
            break;
        }
        case Kind::Neg:
            // constant propagation is folding in the store constructor
            result = store.negation(restrict_rec(store, f.child(), sigma));
            break;
        case Kind::Or: {
            std::vector<Formula> kids;
            kids.reserve(f.child_ids().size());
            for (FormulaId c : f.child_ids())
                kids.push_back(restrict_rec(store, store.from_id(c), sigma));
            Formula merged = store.disjunction(kids);
            if (merged.kind() == Kind::Or) {
                if (weakening_match(store, kids, sigma)) {
                    result = store.constant(true);
                    break;
                }
            }
            result = merged;
            break;
        }
    }
    sigma.memo_put(f.id(), result.id());
    return result;
}

} // namespace

std::optional<Formula> weakening_match(FormulaStore& store,
                                       const std::vector<Formula>& restricted_children,
                                       const FormulaAssignment& sigma) {
    Formula merged = store.disjunction(restricted_children);
    if (merged.kind() != Kind::Or) return std::nullopt;
    for (Formula d : sigma.domain_disjunctions())
        if (weakening_of(merged, d)) return d;
    return std::nullopt;
}

Formula restrict_formula(FormulaStore& store, Formula f, const FormulaAssignment& sigma) {
    return restrict_rec(store, f, sigma);
}

Formula restrict_formula(FormulaStore& store, Formula f, const VarAssignment& rho) {
    // Variable-only domain: same induction, no weakening scan needed.
    std::unordered_map<FormulaId, Formula> memo;
    struct Rec {
        FormulaStore& store;
        const VarAssignment& rho;
        std::unordered_map<FormulaId, Formula>& memo;
        Formula run(Formula f) {
            auto it = memo.find(f.id());
            if (it != memo.end()) return it->second;
            Formula result;
            switch (f.kind()) {
                case Kind::Const: result = f; break;
                case Kind::Var: {
                    auto v = rho.get(f.var());
                    result = v ? store.constant(*v) : f;
                    break;
                }
                case Kind::Neg: result = store.negation(run(f.child())); break;
                case Kind::Or: {
                    std::vector<Formula> kids;
                    for (FormulaId c : f.child_ids()) kids.push_back(run(store.from_id(c)));
                    result = store.disjunction(kids);
                    break;
                }
            }
            memo.emplace(f.id(), result);
            return result;
        }
    } rec{store, rho, memo};
    return rec.run(f);
}

namespace {

template <typename A>
LeveledLines restrict_lines_impl(FormulaStore& store, const LeveledLines& in, const A& a) {
    LeveledLines out;
    out.lines.reserve(in.lines.size());
    for (const Formula& l : in.lines) out.lines.push_back(restrict_formula(store, l, a));
    for (const auto& [id, levels] : in.levels) {
        Formula img = restrict_formula(store, store.from_id(id), a);
        out.levels[img.id()].insert(levels.begin(), levels.end());
    }
    return out;
}

} // namespace

LeveledLines restrict_lines(FormulaStore& store, const LeveledLines& in,
                            const FormulaAssignment& sigma) {
    return restrict_lines_impl(store, in, sigma);
}

LeveledLines restrict_lines(FormulaStore& store, const LeveledLines& in, const VarAssignment& rho) {
    return restrict_lines_impl(store, in, rho);
}

std::vector<Formula> axiom_set(FormulaStore& store, const FormulaAssignment& sigma) {
    std::vector<Formula> out;
    for (const auto& [d, v] : sigma.pairs()) out.push_back(v ? d : store.negation(d));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Formula compose_restrict(FormulaStore& store, Formula f, std::span<const AnyAssignment> seq) {
    Formula cur = f;
    for (const AnyAssignment& a : seq) {
        if (std::holds_alternative<VarAssignment>(a))
            cur = restrict_formula(store, cur, std::get<VarAssignment>(a));
        else
            cur = restrict_formula(store, cur, std::get<FormulaAssignment>(a));
    }
    return cur;
}

FormulaAssignment parse_assignment_json(FormulaStore& store, const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    if (!j.is_array()) throw Error(ErrorCode::InputError, "assignment file: expected JSON array");
    std::vector<std::pair<Formula, bool>> pairs;
    for (const auto& e : j) {
        Formula f = parse_formula(store, e.at("f").get<std::string>());
        int v = e.at("v").get<int>();
        if (v != 0 && v != 1) throw Error(ErrorCode::InputError, "assignment value must be 0 or 1");
        pairs.emplace_back(f, v == 1);
    }
    return FormulaAssignment::validate(pairs);
}

std::string assignment_to_json(const FormulaAssignment& sigma) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& [f, v] : sigma.pairs())
        j.push_back({{"f", print_formula(f)}, {"v", v ? 1 : 0}});
    return j.dump();
}

std::string var_assignment_to_json(const FormulaStore& store, const VarAssignment& rho) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& [v, b] : rho.values())
        j.push_back({{"f", store.var_name(v)}, {"v", b ? 1 : 0}});
    return j.dump();
}

VarAssignment parse_var_assignment_json(FormulaStore& store, const std::string& text) {
    FormulaAssignment sigma = parse_assignment_json(store, text);
    VarAssignment rho;
    for (const auto& [f, v] : sigma.pairs()) {
        if (f.kind() != Kind::Var)
            throw Error(ErrorCode::InputError, "variable assignment file contains a non-variable");
        rho.set(f.var(), v);
    }
    return rho;
}

} // namespace pclab
