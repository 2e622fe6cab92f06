#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pclab/assign.hpp"
#include "pclab/f2sys.hpp"
#include "pclab/frege.hpp"
#include "pclab/truthtable.hpp"

namespace pclab {

/// Justification of a semantic line: an axiom reference or the semantic rule
/// applied to earlier lines (intersection of the premises must be contained
/// in the line; an empty premise list therefore derives only the full space).
struct Justification {
    bool axiom = false;
    std::string tag;         // axiom tag
    std::vector<int> premises; // 0-based indices of earlier lines
};

struct SemanticLine {
    TruthTable set; // canonical: support == semantic support
    Justification just;
};

struct SemanticDerivation {
    std::vector<SemanticLine> lines;

    bool empty() const { return lines.empty(); }
    const TruthTable* final_line() const { return lines.empty() ? nullptr : &lines.back().set; }
};

struct SemanticCheckOptions {
    int w_max = 24;
    int c_max = 3; // premises per rule application
};

struct SemanticCheck {
    bool ok = true;
    int line = -1; // 0-based index of the first violation
    std::string reason;
};

/// Verifies axiom membership (by semantic equality) and every rule step's
/// containment by enumeration over the union support. Throws SupportTooLarge
/// when a union support exceeds w_max.
SemanticCheck check_semantic(const SemanticDerivation& d, std::span<const TruthTable> axioms,
                             const SemanticCheckOptions& opts = {});

int line_width(const TruthTable& t);

/// Canonical semantic line of a formula.
TruthTable semantic_line_of(Formula f, int w_max = 24);

struct TransformResult {
    SemanticDerivation derivation;
    size_t max_width = 0;  // over all emitted lines
    size_t base_width = 0; // max(w(proof), w(axiom set), 1)
    double width_ratio = 0;
};

/// Turns a checked syntactic proof into a semantic derivation of
/// restrict(target, sigma) from restrict(inputs, sigma) together with the
/// axiom set of sigma. When rho is given the composite restriction
/// (first rho, then sigma) is applied throughout; the optional variable
/// assignment is how restricted proofs are transformed. Every rule step uses
/// at most two premises.
TransformResult transform(FormulaStore& store, const FregeProof& proof,
                          const FormulaAssignment& sigma, const VarAssignment* rho = nullptr,
                          int w_max = 24);

struct ResolutionStep {
    Clause resolvent;
    int parent1; // clause ids: initial clauses first, then derived ones
    int parent2;
    int pivot;
};

struct SaturationResult {
    bool refutable = false;
    std::vector<Clause> initial;
    std::vector<ResolutionStep> steps;
    int empty_clause_id = -1; // set when refutable
};

/// Closure of F under resolution restricted to clauses of width <= w;
/// complete for width-w refutability. Initial clauses must respect the bound
/// (ClauseTooWide otherwise). Deterministic: clauses are processed in
/// insertion order with sorted literal tuples.
SaturationResult resolution_width_saturation(const Cnf& f, int w);

/// Semantic derivation files: JSON Lines
/// {"id": n, "support": [names], "bits": hex, "just": "axiom:<tag>" | [ids]}.
std::string derivation_to_jsonl(const FormulaStore& store, const SemanticDerivation& d);
SemanticDerivation parse_derivation_jsonl(FormulaStore& store, const std::string& text);

} // namespace pclab
