#pragma once

#include <boost/dynamic_bitset.hpp>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pclab/formula.hpp"
#include "pclab/graph.hpp"

namespace pclab {

/// Literal over 0-based variables; positive means the variable unnegated.
struct Literal {
    int var;
    bool positive;

    bool operator==(const Literal& o) const = default;
    bool operator<(const Literal& o) const {
        return var != o.var ? var < o.var : positive < o.positive;
    }
};

/// Clause as a set of literals, at most one per variable.
struct Clause {
    std::vector<Literal> lits; // sorted by variable

    static Clause make(std::vector<Literal> lits);
    bool operator==(const Clause& o) const = default;
    bool operator<(const Clause& o) const { return lits < o.lits; }
};

struct Cnf {
    int nvars = 0;
    std::vector<Clause> clauses;
};

/// F2 equation: sum of the support variables = rhs. Equations keep their
/// original index through subsystem and restriction operations.
struct Equation {
    boost::dynamic_bitset<> support;
    bool rhs = false;
    int index = 0;
};

/// Linear system over F2. Trivial 0 = 0 equations are never stored; an
/// inconsistent 0 = 1 only ever shows up as a Gaussian certificate.
class LinSystem {
  public:
    LinSystem() = default;
    explicit LinSystem(int nvars) : nvars_(nvars) {}

    int nvars() const { return nvars_; }
    const std::vector<Equation>& equations() const { return eqs_; }
    size_t size() const { return eqs_.size(); }

    /// Appends an equation (drops empty-support rhs-0; empty-support rhs-1 is
    /// an input error).
    void add(boost::dynamic_bitset<> support, bool rhs, int index);
    void add_vars(const std::vector<int>& vars, bool rhs, int index);

    const Equation* find_index(int index) const;

  private:
    int nvars_ = 0;
    std::vector<Equation> eqs_;
};

/// One equation per 3-clause: x1+x2+x3 = d1+d2+d3 (mod 2), where di is the
/// literal's sign. Requires exactly 3 distinct variables per clause.
LinSystem cnf3_to_xor(const Cnf& f);

/// Canonical CNF encoding: an equation of support w becomes the 2^(w-1)
/// clauses ruling out each wrong-parity assignment. Throws WidthLimit beyond
/// width_limit.
Cnf cnf_encoding(const LinSystem& sys, int width_limit = 8);

LinSystem subsystem(const LinSystem& sys, const std::vector<int>& indices);

struct GaussResult {
    bool sat = false;
    std::vector<bool> model;     // one model when sat (free variables 0)
    std::vector<int> unsat_core; // original indices summing to 0 = 1 when unsat
};

/// Gaussian elimination with certificate tracking. Self-checks its own
/// postcondition: the model satisfies every equation / the core sums to 0 = 1.
GaussResult gaussian_sat(const LinSystem& sys);

/// Substitute assigned variables; fully assigned satisfied equations are
/// dropped, surviving equations keep their indices. Throws FalsifiedEquation
/// when the assignment falsifies an equation.
LinSystem restrict_system(const LinSystem& sys, const std::map<int, bool>& rho);

/// Left vertices are equations in storage order (labelled by position),
/// right vertices the variables.
BipartiteGraph incidence_graph(const LinSystem& sys);

/// Random 3-CNF with round(density * n) clauses (ties up): per clause three
/// distinct variables without replacement, signs uniform; clauses may repeat.
/// Deterministic for a given seed.
Cnf random_3cnf(int n, const Rational& density, uint64_t seed);

/// The density threshold 8 ln 2 below which the classic unsatisfiability and
/// expansion guarantees stop applying; rational approximation, good to 1e-15.
inline Rational density_threshold() { return Rational(5545177444479562LL, 1000000000000000LL); }

// --- file formats ---

Cnf parse_dimacs(const std::string& text);
std::string dimacs_to_string(const Cnf& f);

/// "p xor n m" then one line per equation: "v1 v2 ... vk b".
LinSystem parse_xor(const std::string& text);
std::string xor_to_string(const LinSystem& sys);

// --- bridging to formulas ---

/// Canonical variable naming for system variables: x1..xn (1-based).
std::string sysvar_name(int idx);
/// Parses "x<k>" back to the 0-based index; nullopt for other identifiers.
std::optional<int> sysvar_index(const std::string& name);

Formula formula_of_literal(FormulaStore& store, const Literal& lit);
Formula formula_of_clause(FormulaStore& store, const Clause& c);
std::vector<Formula> formulas_of_cnf(FormulaStore& store, const Cnf& f);

} // namespace pclab
