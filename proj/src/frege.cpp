#include "pclab/frege.hpp"

#include <algorithm>
#include <sstream>

#include <nlohmann/json.hpp>

namespace pclab {

const char* rule_name(Rule r) {
    switch (r) {
        case Rule::Input: return "input";
        case Rule::ExcludedMiddle: return "em";
        case Rule::Weakening: return "weak";
        case Rule::Cut: return "cut";
        case Rule::Contraction: return "contr";
        case Rule::Associative: return "assoc";
    }
    return "?";
}

std::optional<Rule> rule_from_name(const std::string& s) {
    if (s == "input") return Rule::Input;
    if (s == "em") return Rule::ExcludedMiddle;
    if (s == "weak") return Rule::Weakening;
    if (s == "cut") return Rule::Cut;
    if (s == "contr") return Rule::Contraction;
    if (s == "assoc") return Rule::Associative;
    return std::nullopt;
}

int rule_arity(Rule r) {
    switch (r) {
        case Rule::Input:
        case Rule::ExcludedMiddle: return 0;
        case Rule::Weakening:
        case Rule::Contraction:
        case Rule::Associative: return 1;
        case Rule::Cut: return 2;
    }
    return 0;
}

FregeProof::FregeProof(std::vector<ProofLine> lines, std::vector<Formula> inputs, Formula target)
    : lines_(std::move(lines)), inputs_(std::move(inputs)), target_(target) {
    std::sort(inputs_.begin(), inputs_.end());
    inputs_.erase(std::unique(inputs_.begin(), inputs_.end()), inputs_.end());
    index_ids();
    if (lines_.empty()) throw Error(ErrorCode::InputError, "proof has no lines");
    if (lines_.back().formula != target_)
        throw Error(ErrorCode::InputError, "last line differs from the target");
    for (const ProofLine& l : lines_)
        if (l.rule == Rule::Input &&
            !std::binary_search(inputs_.begin(), inputs_.end(), l.formula))
            throw Error(ErrorCode::InputError,
                        "input line " + std::to_string(l.id) + " is not in the input set");
}

FregeProof FregeProof::from_lines(std::vector<ProofLine> lines) {
    if (lines.empty()) throw Error(ErrorCode::InputError, "proof has no lines");
    std::vector<Formula> inputs;
    for (const ProofLine& l : lines)
        if (l.rule == Rule::Input) inputs.push_back(l.formula);
    Formula target = lines.back().formula;
    return FregeProof(std::move(lines), std::move(inputs), target);
}

void FregeProof::index_ids() {
    by_id_.clear();
    int prev = 0;
    for (size_t i = 0; i < lines_.size(); ++i) {
        if (lines_[i].id <= prev)
            throw Error(ErrorCode::InputError, "line ids must be strictly increasing");
        prev = lines_[i].id;
        by_id_[lines_[i].id] = i;
    }
}

const ProofLine* FregeProof::by_id(int id) const {
    auto it = by_id_.find(id);
    return it == by_id_.end() ? nullptr : &lines_[it->second];
}

std::vector<Formula> FregeProof::line_formulas() const {
    std::vector<Formula> out;
    out.reserve(lines_.size());
    for (const ProofLine& l : lines_) out.push_back(l.formula);
    return out;
}

namespace {

std::optional<Formula> get_sub(const ProofLine& l, char name) {
    auto it = l.substitution.find(name);
    if (it == l.substitution.end()) return std::nullopt;
    return it->second;
}

} // namespace

ProofCheck check_proof(FormulaStore& store, const FregeProof& proof) {
    ProofCheck out;
    auto fail = [&](const ProofLine& l, const std::string& reason) {
        out.ok = false;
        out.violations.push_back(LineViolation{l.id, l.rule, reason});
    };

    for (size_t i = 0; i < proof.lines().size(); ++i) {
        const ProofLine& l = proof.lines()[i];
        if (static_cast<int>(l.premises.size()) != rule_arity(l.rule)) {
            fail(l, "wrong premise count for rule");
            continue;
        }
        std::vector<const ProofLine*> prem;
        bool prem_ok = true;
        for (int pid : l.premises) {
            const ProofLine* p = proof.by_id(pid);
            if (p == nullptr || p->id >= l.id) {
                fail(l, "premise " + std::to_string(pid) + " is not an earlier line");
                prem_ok = false;
                break;
            }
            prem.push_back(p);
        }
        if (!prem_ok) continue;

        switch (l.rule) {
            case Rule::Input:
                if (!std::binary_search(proof.inputs().begin(), proof.inputs().end(), l.formula))
                    fail(l, "formula is not an input");
                break;
            case Rule::ExcludedMiddle: {
                auto P = get_sub(l, 'p');
                if (!P) {
                    fail(l, "missing substitution for p");
                    break;
                }
                if (store.disjunction(*P, store.negation(*P)) != l.formula)
                    fail(l, "formula is not p|~p under the substitution");
                break;
            }
            case Rule::Weakening: {
                auto P = get_sub(l, 'p');
                auto Q = get_sub(l, 'q');
                if (!P || !Q) {
                    fail(l, "missing substitution for p or q");
                    break;
                }
                if (prem[0]->formula != *P) {
                    fail(l, "premise does not match p");
                    break;
                }
                if (store.disjunction(*Q, *P) != l.formula)
                    fail(l, "formula is not q|p under the substitution");
                break;
            }
            case Rule::Cut: {
                auto P = get_sub(l, 'p');
                auto Q = get_sub(l, 'q');
                auto R = get_sub(l, 'r');
                if (!P || !Q || !R) {
                    fail(l, "missing substitution for p, q or r");
                    break;
                }
                if (store.disjunction(*P, *Q) != prem[0]->formula) {
                    fail(l, "first premise does not match p|q");
                    break;
                }
                if (store.disjunction(store.negation(*P), *R) != prem[1]->formula) {
                    fail(l, "second premise does not match ~p|r");
                    break;
                }
                if (store.disjunction(*Q, *R) != l.formula)
                    fail(l, "formula is not q|r under the substitution");
                break;
            }
            case Rule::Contraction: {
                auto P = get_sub(l, 'p');
                if (!P) {
                    fail(l, "missing substitution for p");
                    break;
                }
                // p|p and p have the same merged form
                if (store.disjunction(*P, *P) != prem[0]->formula) {
                    fail(l, "premise does not match p|p");
                    break;
                }
                if (*P != l.formula) fail(l, "formula is not p under the substitution");
                break;
            }
            case Rule::Associative: {
                auto P = get_sub(l, 'p');
                auto Q = get_sub(l, 'q');
                auto R = get_sub(l, 'r');
                if (!P || !Q || !R) {
                    fail(l, "missing substitution for p, q or r");
                    break;
                }
                Formula merged = store.disjunction({*P, *Q, *R});
                if (merged != prem[0]->formula) {
                    fail(l, "premise does not match (p|q)|r");
                    break;
                }
                if (merged != l.formula) fail(l, "formula is not p|(q|r) under the substitution");
                break;
            }
        }
    }
    return out;
}

size_t pln(const FregeProof& proof) {
    if (proof.lines().empty()) throw Error(ErrorCode::EmptyProof, "empty proof");
    return proof.lines().size();
}

size_t psz(const FregeProof& proof) {
    std::vector<Formula> fs = proof.line_formulas();
    return subformulas(fs).size();
}

size_t psz_lines(std::span<const Formula> lines) { return subformulas(lines).size(); }

ThresholdVector ThresholdVector::make(std::vector<long long> d) {
    if (d.empty() || d[0] != 1)
        throw Error(ErrorCode::InputError, "threshold vector must start with d_0 = 1");
    for (long long x : d)
        if (x <= 0) throw Error(ErrorCode::InputError, "threshold parameters must be positive");
    return ThresholdVector{std::move(d)};
}

RegularityCheck is_d_regular(const FormulaStore& store, const LevelMap& levels,
                             const ThresholdVector& d) {
    RegularityCheck out;
    std::vector<std::pair<FormulaId, int>> entries;
    for (const auto& [id, ls] : levels)
        for (int lvl : ls) entries.emplace_back(id, lvl);
    std::sort(entries.begin(), entries.end());
    for (const auto& [id, lvl] : entries) {
        if (lvl < 0 || lvl > d.k())
            throw Error(ErrorCode::LevelOutOfRange,
                        "level " + std::to_string(lvl) + " outside the threshold vector");
        Formula f = store.from_id(id);
        int deg = f.in_degree();
        if (deg > d.d[static_cast<size_t>(lvl)]) {
            out.ok = false;
            out.violations.push_back(RegularityViolation{f, lvl, deg});
        }
    }
    return out;
}

FregeProof parse_proof_jsonl(FormulaStore& store, const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<ProofLine> lines;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorCode::SyntaxError,
                        "proof line " + std::to_string(lineno) + ": " + e.what());
        }
        ProofLine pl;
        pl.id = j.at("id").get<int>();
        pl.formula = parse_formula(store, j.at("f").get<std::string>());
        auto rule = rule_from_name(j.at("rule").get<std::string>());
        if (!rule)
            throw Error(ErrorCode::SyntaxError,
                        "proof line " + std::to_string(lineno) + ": unknown rule");
        pl.rule = *rule;
        if (j.contains("prem"))
            for (const auto& p : j["prem"]) pl.premises.push_back(p.get<int>());
        if (j.contains("sub"))
            for (auto it = j["sub"].begin(); it != j["sub"].end(); ++it) {
                const std::string& key = it.key();
                if (key.size() != 1 || (key[0] != 'p' && key[0] != 'q' && key[0] != 'r'))
                    throw Error(ErrorCode::SyntaxError,
                                "proof line " + std::to_string(lineno) + ": bad metavariable");
                pl.substitution[key[0]] = parse_formula(store, it->get<std::string>());
            }
        lines.push_back(std::move(pl));
    }
    return FregeProof::from_lines(std::move(lines));
}

std::string proof_to_jsonl(const FregeProof& proof) {
    std::ostringstream out;
    for (const ProofLine& l : proof.lines()) {
        nlohmann::json j;
        j["id"] = l.id;
        j["f"] = print_formula(l.formula);
        j["rule"] = rule_name(l.rule);
        if (!l.premises.empty()) j["prem"] = l.premises;
        if (!l.substitution.empty()) {
            nlohmann::json sub = nlohmann::json::object();
            for (const auto& [k, f] : l.substitution) sub[std::string(1, k)] = print_formula(f);
            j["sub"] = sub;
        }
        out << j.dump() << "\n";
    }
    return out.str();
}

} // namespace pclab
