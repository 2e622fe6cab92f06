#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "pclab/error.hpp"

namespace pclab {

using FormulaId = uint32_t;
using VarId = uint32_t;

enum class Kind : uint8_t { Var, Const, Neg, Or };

class FormulaStore;

/// Lightweight handle into a FormulaStore. Structural equality coincides with
/// id equality because nodes are hash-consed.
class Formula {
  public:
    Formula() : store_(nullptr), id_(0) {}
    Formula(const FormulaStore* store, FormulaId id) : store_(store), id_(id) {}

    const FormulaStore* store() const { return store_; }
    FormulaId id() const { return id_; }
    bool valid() const { return store_ != nullptr; }

    Kind kind() const;
    VarId var() const;                       // Kind::Var
    bool value() const;                      // Kind::Const
    Formula child() const;                   // Kind::Neg
    std::span<const FormulaId> child_ids() const; // Kind::Or
    std::vector<Formula> children() const;   // Kind::Or

    /// Alternation depth: 0 for atoms, otherwise max(1, number of connective
    /// alternations along the deepest path).
    int depth() const;
    /// Fan-in of the top gate in merged form.
    int in_degree() const;

    bool is_const(bool v) const { return kind() == Kind::Const && value() == v; }

    bool operator==(const Formula& o) const { return store_ == o.store_ && id_ == o.id_; }
    bool operator!=(const Formula& o) const { return !(*this == o); }
    bool operator<(const Formula& o) const { return id_ < o.id_; }

  private:
    const FormulaStore* store_;
    FormulaId id_;
};

struct FormulaHash {
    size_t operator()(const Formula& f) const { return std::hash<FormulaId>()(f.id()); }
};

/// Interning table for formulas in merged form. Construction is the only
/// mutation point; canonicalization happens on the way in:
///   - Or children are flattened (no Or child of an Or), deduplicated and
///     sorted by id, constants folded (0 dropped, 1 absorbs), singletons
///     collapse to the child, the empty disjunction collapses to 0;
///   - Neg(Neg(f)) folds to f, Neg(Const) folds to the complement.
/// Nodes live in deques so existing ids stay valid while the store grows;
/// interning itself is serialized by a mutex.
class FormulaStore {
  public:
    FormulaStore();
    FormulaStore(const FormulaStore&) = delete;
    FormulaStore& operator=(const FormulaStore&) = delete;

    Formula var(std::string_view name);
    Formula constant(bool b);
    Formula negation(Formula f);
    Formula disjunction(std::span<const Formula> children);
    Formula disjunction(Formula a, Formula b);
    Formula disjunction(std::initializer_list<Formula> children) {
        return disjunction(std::span<const Formula>(children.begin(), children.size()));
    }

    Formula from_id(FormulaId id) const { return Formula(this, id); }

    const std::string& var_name(VarId v) const;
    /// Returns the VarId for a known name, or -1 cast to VarId when unknown.
    VarId lookup_var(std::string_view name) const;
    size_t var_count() const;

    size_t size() const;

    // node accessors used by Formula
    Kind kind(FormulaId id) const;
    VarId node_var(FormulaId id) const;
    bool node_value(FormulaId id) const;
    FormulaId node_child(FormulaId id) const;
    std::span<const FormulaId> node_children(FormulaId id) const;
    int node_depth(FormulaId id) const;
    int node_alt(FormulaId id) const;

  private:
    struct Node {
        Kind kind;
        uint16_t alt;   // max alternation count over paths, 0 for atoms
        uint16_t depth; // max(1, alt) for non-atoms
        uint32_t aux;   // var id / const bit / neg child
        std::vector<FormulaId> children;
    };

    FormulaId intern_node(Node&& n);

    mutable std::mutex mu_;
    std::deque<Node> nodes_;
    std::vector<std::string> var_names_;
    std::unordered_map<std::string, VarId> var_ids_;
    std::unordered_map<uint64_t, FormulaId> var_nodes_;
    FormulaId const_nodes_[2];
    std::unordered_map<FormulaId, FormulaId> neg_nodes_;
    std::map<std::vector<FormulaId>, FormulaId> or_nodes_;
};

/// Grammar: F ::= '0' | '1' | ident | '~' F | '(' F ('|' F)+ ')'.
/// Whitespace-insensitive; identifiers match [a-zA-Z_][a-zA-Z0-9_]*.
/// Throws Error(SyntaxError) with the byte position on malformed input.
Formula parse_formula(FormulaStore& store, std::string_view text);
std::string print_formula(Formula f);

/// All DAG nodes reachable from f, each once, in id order.
std::vector<Formula> subformulas(Formula f);
/// Union of subformulas over a collection of roots.
std::vector<Formula> subformulas(std::span<const Formula> roots);

/// Syntactic variables of f, sorted.
std::vector<VarId> collect_vars(Formula f);

/// Total assignment for evaluation; missing variables raise MissingVariable.
class VarValuation {
  public:
    VarValuation() = default;
    void set(VarId v, bool b) { values_[v] = b; }
    bool lookup(VarId v) const;
    bool contains(VarId v) const { return values_.count(v) != 0; }
    const std::map<VarId, bool>& values() const { return values_; }

  private:
    std::map<VarId, bool> values_;
};

bool evaluate(Formula f, const VarValuation& a);

/// True iff d's disjunct set is contained in c's (atoms and negations count as
/// singleton disjunct sets).
bool weakening_of(Formula c, Formula d);

/// Number of variables f truly depends on, decided by exhaustive truth-table
/// influence over the syntactic support. Throws SupportTooLarge when the
/// syntactic support exceeds max_support; callers that want the syntactic
/// count as a flagged upper bound catch that case.
int semantic_width(Formula f, int max_support = 24);

} // namespace pclab
