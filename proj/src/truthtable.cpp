#include "pclab/truthtable.hpp"

#include <algorithm>
#include <unordered_map>

namespace pclab {

namespace {

// Bottom-up table construction over the DAG: every node gets a bitset over the
// shared support.
boost::dynamic_bitset<> node_table(Formula f, const std::vector<VarId>& support,
                                   std::unordered_map<FormulaId, boost::dynamic_bitset<>>& memo) {
    auto it = memo.find(f.id());
    if (it != memo.end()) return it->second;
    size_t n = size_t{1} << support.size();
    boost::dynamic_bitset<> t(n);
    switch (f.kind()) {
        case Kind::Const:
            if (f.value()) t.set();
            break;
        case Kind::Var: {
            size_t p = static_cast<size_t>(
                std::lower_bound(support.begin(), support.end(), f.var()) - support.begin());
            for (size_t i = 0; i < n; ++i)
                if ((i >> p) & 1) t.set(i);
            break;
        }
        case Kind::Neg:
            t = ~node_table(f.child(), support, memo);
            break;
        case Kind::Or:
            for (FormulaId c : f.child_ids()) t |= node_table(Formula(f.store(), c), support, memo);
            break;
    }
    memo.emplace(f.id(), t);
    return t;
}

} // namespace

TruthTable TruthTable::of_formula(Formula f) {
    TruthTable out;
    out.support = collect_vars(f);
    std::unordered_map<FormulaId, boost::dynamic_bitset<>> memo;
    out.bits = node_table(f, out.support, memo);
    return out;
}

bool TruthTable::depends_on_position(size_t p) const {
    size_t stride = size_t{1} << p;
    for (size_t i = 0; i < bits.size(); ++i)
        if (((i >> p) & 1) == 0 && bits[i] != bits[i | stride]) return true;
    return false;
}

void TruthTable::canonicalize() {
    for (size_t p = support.size(); p-- > 0;) {
        if (depends_on_position(p)) continue;
        // project away position p (keep the half with bit p = 0)
        size_t n = bits.size() / 2;
        boost::dynamic_bitset<> nb(n);
        size_t low_mask = (size_t{1} << p) - 1;
        for (size_t i = 0; i < n; ++i) {
            size_t src = (i & low_mask) | ((i & ~low_mask) << 1);
            if (bits[src]) nb.set(i);
        }
        bits = std::move(nb);
        support.erase(support.begin() + static_cast<long>(p));
    }
}

int TruthTable::width() const {
    int w = 0;
    for (size_t p = 0; p < support.size(); ++p)
        if (depends_on_position(p)) ++w;
    return w;
}

bool TruthTable::contains(const VarValuation& a) const {
    size_t idx = 0;
    for (size_t p = 0; p < support.size(); ++p)
        if (a.lookup(support[p])) idx |= size_t{1} << p;
    return bits[idx];
}

TruthTable TruthTable::lifted(const std::vector<VarId>& sup) const {
    std::vector<size_t> pos(support.size());
    for (size_t p = 0; p < support.size(); ++p) {
        auto it = std::lower_bound(sup.begin(), sup.end(), support[p]);
        if (it == sup.end() || *it != support[p])
            throw Error(ErrorCode::InputError, "lifted: support not contained");
        pos[p] = static_cast<size_t>(it - sup.begin());
    }
    TruthTable out;
    out.support = sup;
    size_t n = size_t{1} << sup.size();
    out.bits.resize(n);
    for (size_t i = 0; i < n; ++i) {
        size_t idx = 0;
        for (size_t p = 0; p < support.size(); ++p)
            if ((i >> pos[p]) & 1) idx |= size_t{1} << p;
        if (bits[idx]) out.bits.set(i);
    }
    return out;
}

TruthTable table_of_formula(Formula f, int max_support) {
    std::vector<VarId> vars = collect_vars(f);
    if (static_cast<int>(vars.size()) > max_support)
        throw Error(ErrorCode::SupportTooLarge,
                    "support " + std::to_string(vars.size()) + " exceeds limit " +
                        std::to_string(max_support));
    TruthTable t = TruthTable::of_formula(f);
    t.canonicalize();
    return t;
}

std::string bits_to_hex(const boost::dynamic_bitset<>& bits) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    size_t nibbles = (bits.size() + 3) / 4;
    out.reserve(nibbles);
    for (size_t k = 0; k < nibbles; ++k) {
        unsigned v = 0;
        for (unsigned b = 0; b < 4; ++b) {
            size_t i = 4 * k + b;
            if (i < bits.size() && bits[i]) v |= 1u << b;
        }
        out.push_back(digits[v]);
    }
    return out;
}

boost::dynamic_bitset<> bits_from_hex(const std::string& hex, size_t nbits) {
    boost::dynamic_bitset<> bits(nbits);
    for (size_t k = 0; k < hex.size(); ++k) {
        char c = hex[k];
        unsigned v;
        if (c >= '0' && c <= '9') v = static_cast<unsigned>(c - '0');
        else if (c >= 'a' && c <= 'f') v = static_cast<unsigned>(c - 'a' + 10);
        else if (c >= 'A' && c <= 'F') v = static_cast<unsigned>(c - 'A' + 10);
        else throw Error(ErrorCode::SyntaxError, "bad hex digit in truth table");
        for (unsigned b = 0; b < 4; ++b) {
            size_t i = 4 * k + b;
            if (i < nbits && (v >> b & 1)) bits.set(i);
        }
    }
    return bits;
}

} // namespace pclab
