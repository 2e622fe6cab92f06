#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "pclab/formula.hpp"
#include "pclab/lines.hpp"

namespace pclab {

/// Partial assignment of variables. The special case of a formula assignment
/// whose domain contains identifiers only; kept as its own type because linear
/// systems and the regularizer deal in plain variables.
class VarAssignment {
  public:
    VarAssignment() = default;

    void set(VarId v, bool b);
    std::optional<bool> get(VarId v) const;
    bool contains(VarId v) const { return values_.count(v) != 0; }
    const std::map<VarId, bool>& values() const { return values_; }
    size_t size() const { return values_.size(); }
    bool empty() const { return values_.empty(); }

    /// Union; conflicting values raise DuplicateDomain.
    void merge(const VarAssignment& other);

  private:
    std::map<VarId, bool> values_;
};

/// Set of (formula, bit) pairs obeying the two structural conditions:
/// no domain formula has a negation top gate, disjunctions only map to 1.
/// Constants are excluded and domain formulas are distinct. Restriction
/// results are memoized per assignment; the memo is internally synchronized,
/// the assignment itself is immutable after validation.
class FormulaAssignment {
  public:
    FormulaAssignment();

    /// Validates in input order and throws the first violated condition
    /// (NegationTopGate, DisjunctionMappedToZero, DuplicateDomain,
    /// ConstantInDomain).
    static FormulaAssignment validate(const std::vector<std::pair<Formula, bool>>& pairs);

    static FormulaAssignment from_var_assignment(FormulaStore& store, const VarAssignment& rho);

    const std::vector<std::pair<Formula, bool>>& pairs() const { return pairs_; }
    std::optional<bool> value_of(Formula f) const;
    bool empty() const { return pairs_.empty(); }
    size_t size() const { return pairs_.size(); }

    /// Domain disjunctions sorted by id (the deterministic scan order of the
    /// weakening test).
    const std::vector<Formula>& domain_disjunctions() const { return domain_ors_; }

    uint64_t revision() const { return revision_; }

    // restriction memo, keyed by formula id
    std::optional<FormulaId> memo_get(FormulaId id) const;
    void memo_put(FormulaId id, FormulaId result) const;

  private:
    struct Memo {
        std::mutex mu;
        std::unordered_map<FormulaId, FormulaId> map;
    };

    std::vector<std::pair<Formula, bool>> pairs_;
    std::unordered_map<FormulaId, bool> by_id_;
    std::vector<Formula> domain_ors_;
    uint64_t revision_;
    std::shared_ptr<Memo> memo_; // shared across copies; the assignment is immutable
};

/// The inductive restriction operator. Variables are looked up in the domain;
/// negations recurse with constant propagation; disjunctions recurse on their
/// children and fold to 1 when the restricted disjunction is a weakening of a
/// domain disjunction.
Formula restrict_formula(FormulaStore& store, Formula f, const FormulaAssignment& sigma);
Formula restrict_formula(FormulaStore& store, Formula f, const VarAssignment& rho);

/// If the canonical disjunction over `restricted_children` is a weakening of a
/// domain disjunction, the matched one (lowest id). Used by the transform to
/// name the axiom behind a fold.
std::optional<Formula> weakening_match(FormulaStore& store,
                                       const std::vector<Formula>& restricted_children,
                                       const FormulaAssignment& sigma);

/// Restrict every line; the new level map assigns to the image of D every
/// level D had.
LeveledLines restrict_lines(FormulaStore& store, const LeveledLines& in,
                            const FormulaAssignment& sigma);
LeveledLines restrict_lines(FormulaStore& store, const LeveledLines& in, const VarAssignment& rho);

/// A_sigma: D for (D,1), ~D for (D,0); sorted by id.
std::vector<Formula> axiom_set(FormulaStore& store, const FormulaAssignment& sigma);

using AnyAssignment = std::variant<VarAssignment, FormulaAssignment>;

Formula compose_restrict(FormulaStore& store, Formula f, std::span<const AnyAssignment> seq);

/// Assignment files: JSON array of {"f": formula-string, "v": 0|1}.
FormulaAssignment parse_assignment_json(FormulaStore& store, const std::string& text);
std::string assignment_to_json(const FormulaAssignment& sigma);
std::string var_assignment_to_json(const FormulaStore& store, const VarAssignment& rho);
VarAssignment parse_var_assignment_json(FormulaStore& store, const std::string& text);

} // namespace pclab
