#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pclab/assign.hpp"
#include "pclab/classify.hpp"
#include "pclab/f2sys.hpp"
#include "pclab/frege.hpp"
#include "pclab/graph.hpp"

namespace pclab {

/// Derived thresholds: m = ceil(n^(1/(2^k+1))), d = (1, m, m^2, m^4, ...,
/// m^(2^(k-1))), epsilon = 1/2^(k+1).
struct ThresholdSchedule {
    long long n = 0;
    int k = 0;
    long long m = 0;
    ThresholdVector d;
    Rational epsilon{0};

    static ThresholdSchedule make(long long n, int k);
};

struct StepRecord {
    int phase = 0;
    int step = 0;
    std::string chosen;   // printed formula
    bool alpha = false;
    long long eliminated = 0;
    size_t h_before = 0;
    size_t h_after = 0;
    std::vector<std::pair<int, bool>> tau; // system variable index -> value
    size_t extension_size = 0;             // |Ext_G0(J_all)| after this step
};

struct PhaseRecord {
    int phase = 0;
    int steps = 0;
    std::vector<std::pair<std::string, bool>> sigma_pairs;
};

struct AssertionRecord {
    std::string name;
    bool pass = true;
    std::string detail;
};

struct RegularizeConfig {
    ExpanderParams params;
    ClassifyMode mode = ClassifyMode::Permissive;
    ClosureOptions closure_opts;
    int w_max = 24;
    bool ignore_extension_budget = false;
    /// In strict mode the input graph must certify as an (r, Delta, c)
    /// boundary expander; permissive records the deviation instead.
    int consistency_samples = 100;
    uint64_t sample_seed = 1;
};

struct RegularizationResult {
    enum class Outcome { Completed, BudgetExceeded };
    Outcome outcome = Outcome::Completed;

    VarAssignment rho;                    // over formula variables
    std::map<int, bool> rho_sys;          // the same assignment over system indices
    FormulaAssignment sigma;
    LeveledLines restricted;              // the lines of proof|rho|sigma with levels
    std::vector<StepRecord> steps;
    std::vector<PhaseRecord> phases;
    std::vector<AssertionRecord> assertions;
    std::vector<std::string> deviations;
    std::optional<StepRecord> offending;  // the step that blew the budget

    bool all_assertions_pass() const;
};

/// The greedy regularization: k phases over the proof levels; each phase
/// clears high-in-degree live subformulas at its level through variable
/// assignments solving the closure subsystem, then eliminates forced
/// subformulas through a fresh formula assignment. Every claim of the
/// procedure runs as a recorded assertion; exhausting the cr/4 extension
/// budget stops the run with the offending step unless the override is set.
RegularizationResult regularize(FormulaStore& store, const FregeProof& proof, const LinSystem& sys,
                                const ThresholdSchedule& sched, const RegularizeConfig& config);

} // namespace pclab
