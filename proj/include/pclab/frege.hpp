#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pclab/formula.hpp"
#include "pclab/lines.hpp"

namespace pclab {

/// Shoenfield's rules plus Input for members of the hypothesis set.
enum class Rule { Input, ExcludedMiddle, Weakening, Cut, Contraction, Associative };

const char* rule_name(Rule r);
std::optional<Rule> rule_from_name(const std::string& s);
int rule_arity(Rule r);

struct ProofLine {
    int id = 0; // 1-based, strictly increasing
    Formula formula;
    Rule rule = Rule::Input;
    std::vector<int> premises;          // ids of earlier lines
    std::map<char, Formula> substitution; // metavariables 'p','q','r'
};

/// A derivation in Shoenfield's system. Lines are stored in merged form; the
/// last line is the target (Const(0) for refutations), and every Input line
/// must quote a member of the input set.
class FregeProof {
  public:
    FregeProof() = default;
    FregeProof(std::vector<ProofLine> lines, std::vector<Formula> inputs, Formula target);

    /// Derives inputs (= formulas of Input lines) and target (= last formula)
    /// from the lines themselves.
    static FregeProof from_lines(std::vector<ProofLine> lines);

    const std::vector<ProofLine>& lines() const { return lines_; }
    const std::vector<Formula>& inputs() const { return inputs_; }
    Formula target() const { return target_; }

    const ProofLine* by_id(int id) const;
    std::vector<Formula> line_formulas() const;

  private:
    void index_ids();

    std::vector<ProofLine> lines_;
    std::vector<Formula> inputs_; // sorted, distinct
    Formula target_;
    std::map<int, size_t> by_id_;
};

struct LineViolation {
    int line_id;
    Rule rule;
    std::string reason;
};

struct ProofCheck {
    bool ok = true;
    std::vector<LineViolation> violations;
};

/// Checks that every line is a correct substitution instance of its rule:
/// the rule shape is instantiated and merged, then compared to the stored
/// (merged) line. Contraction and associativity become identity checks this
/// way, which accepts exactly the instances that are invisible in merged form.
ProofCheck check_proof(FormulaStore& store, const FregeProof& proof);

/// Number of steps. Throws EmptyProof on an empty proof.
size_t pln(const FregeProof& proof);
/// Number of distinct subformulas across all lines.
size_t psz(const FregeProof& proof);
size_t psz_lines(std::span<const Formula> lines);

/// d = (d_0, ..., d_k) with d_0 = 1.
struct ThresholdVector {
    std::vector<long long> d;

    static ThresholdVector make(std::vector<long long> d);
    int k() const { return static_cast<int>(d.size()) - 1; }
};

struct RegularityViolation {
    Formula formula;
    int level;
    int in_degree;
};

struct RegularityCheck {
    bool ok = true;
    std::vector<RegularityViolation> violations;
};

/// Every subformula appearing on level i must have in-degree at most d_i.
/// Throws LevelOutOfRange when a level exceeds k.
RegularityCheck is_d_regular(const FormulaStore& store, const LevelMap& levels,
                             const ThresholdVector& d);

/// Proof files are JSON Lines, one object per proof line:
/// {"id": n, "f": "...", "rule": "input|em|weak|cut|contr|assoc",
///  "prem": [ids], "sub": {"p": "...", ...}}.
FregeProof parse_proof_jsonl(FormulaStore& store, const std::string& text);
std::string proof_to_jsonl(const FregeProof& proof);

} // namespace pclab
