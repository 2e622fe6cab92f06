#pragma once

#include <boost/dynamic_bitset.hpp>
#include <string>
#include <vector>

#include "pclab/formula.hpp"

namespace pclab {

/// A set S of assignments represented on an explicit variable support: bit i
/// is membership of the assignment where the variable at support position p
/// takes value (i >> p) & 1. canonicalize() projects away variables the set
/// does not depend on, so after it the support is the semantic support and
/// size() is the width.
struct TruthTable {
    std::vector<VarId> support; // sorted, distinct
    boost::dynamic_bitset<> bits;

    static TruthTable of_formula(Formula f);
    static TruthTable full_space() { return TruthTable{{}, boost::dynamic_bitset<>(1, 1)}; }
    static TruthTable empty_set() { return TruthTable{{}, boost::dynamic_bitset<>(1, 0)}; }

    size_t rows() const { return bits.size(); }
    bool is_full() const { return bits.all(); }
    bool is_empty() const { return bits.none(); }

    bool depends_on_position(size_t p) const;

    /// Remove dummy variables; afterwards support is exactly the semantic
    /// support.
    void canonicalize();

    int width() const;

    /// Membership of a total assignment given as a lookup over VarId.
    bool contains(const VarValuation& a) const;

    /// Re-express the table over a superset support (positions mapped by
    /// variable id). Throws InputError if some support variable is missing
    /// from `sup`.
    TruthTable lifted(const std::vector<VarId>& sup) const;

    bool operator==(const TruthTable& o) const { return support == o.support && bits == o.bits; }
};

/// Canonical table of f over its syntactic variables, then canonicalized.
/// Throws SupportTooLarge beyond max_support variables.
TruthTable table_of_formula(Formula f, int max_support = 24);

std::string bits_to_hex(const boost::dynamic_bitset<>& bits);
boost::dynamic_bitset<> bits_from_hex(const std::string& hex, size_t nbits);

} // namespace pclab
