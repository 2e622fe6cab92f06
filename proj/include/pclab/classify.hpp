#pragma once

#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "pclab/f2sys.hpp"
#include "pclab/formula.hpp"
#include "pclab/graph.hpp"
#include "pclab/semantic.hpp"

namespace pclab {

enum class ClassifyMode { Strict, Permissive };

struct Classification {
    bool forced = false;
    bool value = false;   // meaningful when forced
    bool width_ok = true; // width precondition w(C) <= cr/2 held
    bool vacuous = false; // closure subsystem unsatisfiable (permissive only)

    bool live() const { return !forced; }
};

/// Classification context over a fixed linear system: the system, its
/// expander parameters, the cached incidence graph and the variable
/// index mapping. Immutable after construction; classification results are
/// memoized per formula.
class ClassifyContext {
  public:
    /// Standalone construction: builds the incidence graph of `sys`.
    /// In strict mode the graph must certify as an (r, Delta, c)-weak
    /// expander; construction fails otherwise. `trusted` suppresses the
    /// certificate check when the caller has already certified the graph.
    ClassifyContext(FormulaStore& store, LinSystem sys, ExpanderParams params, ClassifyMode mode,
                    ClosureOptions closure_opts = {}, int w_max = 24, bool trusted = false);

    /// Construction over an externally maintained graph whose left ids map to
    /// equation indices through `eq_index_of_left`.
    ClassifyContext(FormulaStore& store, LinSystem sys, BipartiteGraph graph,
                    std::vector<int> eq_index_of_left, ExpanderParams params, ClassifyMode mode,
                    ClosureOptions closure_opts = {}, int w_max = 24, bool trusted = false);

    FormulaStore& store() const { return *store_; }
    const LinSystem& system() const { return sys_; }
    const BipartiteGraph& graph() const { return graph_; }
    const ExpanderParams& params() const { return params_; }
    ClassifyMode mode() const { return mode_; }
    const ClosureOptions& closure_opts() const { return closure_opts_; }
    int w_max() const { return w_max_; }

    /// System variable indices of the formula's variables, sorted; variables
    /// that are not system variables are skipped.
    std::vector<int> sysvars_of(Formula f) const;

    /// Closure of vars(C) in the context graph, as equation indices (sorted).
    std::vector<int> closure_indices(Formula c) const;
    /// Extension of vars(C): system variable indices.
    std::vector<int> extension_vars(Formula c) const;

    std::optional<Classification> memo_get(FormulaId id) const;
    void memo_put(FormulaId id, const Classification& c) const;

    void record_deviation(const std::string& s) const;
    std::vector<std::string> deviations() const;

  private:
    void init_certificate(bool trusted);

    FormulaStore* store_;
    LinSystem sys_;
    BipartiteGraph graph_;
    std::vector<int> eq_index_of_left_;
    ExpanderParams params_;
    ClassifyMode mode_;
    ClosureOptions closure_opts_;
    int w_max_;

    mutable std::mutex mu_;
    mutable std::unordered_map<FormulaId, Classification> memo_;
    mutable std::vector<std::string> deviations_;
};

/// Live/forced decision: compute I = Cl(vars(C)) and enumerate assignments of
/// vars(C), extending each through Gaussian elimination over the pinned
/// subsystem. Live when both values of C occur among consistent extensions,
/// forced to the unique occurring value otherwise. Strict mode enforces the
/// width precondition w(C) <= cr/2 (WidthBound); permissive mode records the
/// violation in the result and the context's deviation log.
Classification classify(const ClassifyContext& ctx, Formula c);

/// True iff C is forced and every proper subformula is live.
/// Requires classify(C) forced.
bool minimally_forced(const ClassifyContext& ctx, Formula c);

/// Semantic derivation of C^alpha from the equations of L^{Cl(vars(C))}:
/// one axiom line per equation, a binary conjunction chain, then C^alpha.
/// Every line's support stays inside Ext(vars(C)). Constants get the empty
/// derivation.
SemanticDerivation forced_axiom_certificate(const ClassifyContext& ctx, Formula c, bool alpha);

/// Axiom tables for a certificate check: the equations of L^{Cl(vars(C))}.
std::vector<TruthTable> certificate_axioms(const ClassifyContext& ctx, Formula c);

} // namespace pclab
