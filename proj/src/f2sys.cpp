#include "pclab/f2sys.hpp"

#include <algorithm>
#include <sstream>

#include "pclab/rng.hpp"

namespace pclab {

Clause Clause::make(std::vector<Literal> lits) {
    std::sort(lits.begin(), lits.end());
    for (size_t i = 1; i < lits.size(); ++i)
        if (lits[i].var == lits[i - 1].var)
            throw Error(ErrorCode::InputError, "clause contains a variable twice");
    return Clause{std::move(lits)};
}

void LinSystem::add(boost::dynamic_bitset<> support, bool rhs, int index) {
    if (support.size() != static_cast<size_t>(nvars_))
        throw Error(ErrorCode::InputError, "equation support size mismatch");
    if (support.none()) {
        if (rhs) throw Error(ErrorCode::InputError, "inconsistent empty equation 0 = 1");
        return; // trivial 0 = 0 removed
    }
    eqs_.push_back(Equation{std::move(support), rhs, index});
}

void LinSystem::add_vars(const std::vector<int>& vars, bool rhs, int index) {
    boost::dynamic_bitset<> s(static_cast<size_t>(nvars_));
    for (int v : vars) {
        if (v < 0 || v >= nvars_) throw Error(ErrorCode::InputError, "equation variable out of range");
        s.flip(static_cast<size_t>(v)); // repeated variables cancel over F2
    }
    add(std::move(s), rhs, index);
}

const Equation* LinSystem::find_index(int index) const {
    for (const Equation& e : eqs_)
        if (e.index == index) return &e;
    return nullptr;
}

LinSystem cnf3_to_xor(const Cnf& f) {
    LinSystem sys(f.nvars);
    for (size_t i = 0; i < f.clauses.size(); ++i) {
        const Clause& c = f.clauses[i];
        if (c.lits.size() != 3)
            throw Error(ErrorCode::ClauseArity,
                        "clause " + std::to_string(i + 1) + " does not have 3 literals");
        bool rhs = false;
        std::vector<int> vars;
        for (const Literal& l : c.lits) {
            vars.push_back(l.var);
            rhs ^= l.positive;
        }
        sys.add_vars(vars, rhs, static_cast<int>(i));
    }
    return sys;
}

Cnf cnf_encoding(const LinSystem& sys, int width_limit) {
    Cnf out;
    out.nvars = sys.nvars();
    for (const Equation& e : sys.equations()) {
        size_t w = e.support.count();
        if (static_cast<int>(w) > width_limit)
            throw Error(ErrorCode::WidthLimit, "equation support exceeds the encoding width limit");
        std::vector<int> vars;
        for (size_t v = e.support.find_first(); v != boost::dynamic_bitset<>::npos;
             v = e.support.find_next(v))
            vars.push_back(static_cast<int>(v));
        // forbid every assignment of wrong parity
        for (size_t pattern = 0; pattern < (size_t{1} << w); ++pattern) {
            bool parity = false;
            for (size_t p = 0; p < w; ++p)
                if ((pattern >> p) & 1) parity = !parity;
            if (parity == e.rhs) continue;
            std::vector<Literal> lits;
            for (size_t p = 0; p < w; ++p)
                lits.push_back(Literal{vars[p], ((pattern >> p) & 1) == 0});
            out.clauses.push_back(Clause::make(std::move(lits)));
        }
    }
    return out;
}

LinSystem subsystem(const LinSystem& sys, const std::vector<int>& indices) {
    LinSystem out(sys.nvars());
    for (int idx : indices) {
        const Equation* e = sys.find_index(idx);
        if (e == nullptr)
            throw Error(ErrorCode::InputError, "subsystem: no equation with index " + std::to_string(idx));
        out.add(e->support, e->rhs, e->index);
    }
    return out;
}

GaussResult gaussian_sat(const LinSystem& sys) {
    struct Row {
        boost::dynamic_bitset<> support;
        bool rhs;
        boost::dynamic_bitset<> used; // original-index set combined into this row
    };
    size_t n = static_cast<size_t>(sys.nvars());
    int max_index = -1;
    for (const Equation& e : sys.equations()) max_index = std::max(max_index, e.index);
    size_t mbits = static_cast<size_t>(max_index + 1);

    std::vector<Row> rows;
    for (const Equation& e : sys.equations()) {
        Row r{e.support, e.rhs, boost::dynamic_bitset<>(mbits)};
        r.used.set(static_cast<size_t>(e.index));
        rows.push_back(std::move(r));
    }

    std::vector<std::optional<size_t>> pivot_row(n);
    for (Row& r : rows) {
        for (size_t v = r.support.find_first(); v != boost::dynamic_bitset<>::npos;
             v = r.support.find_first()) {
            if (!pivot_row[v]) break;
            const Row& p = rows[*pivot_row[v]];
            r.support ^= p.support;
            r.rhs ^= p.rhs;
            r.used ^= p.used;
        }
        size_t v = r.support.find_first();
        if (v == boost::dynamic_bitset<>::npos) {
            if (r.rhs) {
                GaussResult res;
                res.sat = false;
                for (size_t i = r.used.find_first(); i != boost::dynamic_bitset<>::npos;
                     i = r.used.find_next(i))
                    res.unsat_core.push_back(static_cast<int>(i));
                // postcondition: the core literally sums to 0 = 1
                boost::dynamic_bitset<> acc(n);
                bool rhs_acc = false;
                for (int idx : res.unsat_core) {
                    const Equation* e = sys.find_index(idx);
                    acc ^= e->support;
                    rhs_acc ^= e->rhs;
                }
                if (acc.any() || !rhs_acc)
                    throw Error(ErrorCode::InputError, "internal: unsat certificate does not cancel");
                return res;
            }
            continue; // dependent consistent row
        }
        pivot_row[v] = static_cast<size_t>(&r - rows.data());
    }

    GaussResult res;
    res.sat = true;
    res.model.assign(n, false);
    // back substitution in descending pivot order; free variables stay 0
    for (size_t v = n; v-- > 0;) {
        if (!pivot_row[v]) continue;
        const Row& r = rows[*pivot_row[v]];
        bool val = r.rhs;
        for (size_t u = r.support.find_first(); u != boost::dynamic_bitset<>::npos;
             u = r.support.find_next(u))
            if (u != v && res.model[u]) val = !val;
        res.model[v] = val;
    }
    for (const Equation& e : sys.equations()) {
        bool acc = false;
        for (size_t v = e.support.find_first(); v != boost::dynamic_bitset<>::npos;
             v = e.support.find_next(v))
            if (res.model[v]) acc = !acc;
        if (acc != e.rhs) throw Error(ErrorCode::InputError, "internal: model check failed");
    }
    return res;
}

LinSystem restrict_system(const LinSystem& sys, const std::map<int, bool>& rho) {
    LinSystem out(sys.nvars());
    for (const Equation& e : sys.equations()) {
        boost::dynamic_bitset<> support = e.support;
        bool rhs = e.rhs;
        for (const auto& [v, b] : rho) {
            if (v < 0 || static_cast<size_t>(v) >= support.size()) continue;
            if (support[static_cast<size_t>(v)]) {
                support.reset(static_cast<size_t>(v));
                rhs ^= b;
            }
        }
        if (support.none()) {
            if (rhs)
                throw Error(ErrorCode::FalsifiedEquation,
                            "assignment falsifies equation " + std::to_string(e.index));
            continue; // satisfied, removed
        }
        out.add(support, rhs, e.index);
    }
    return out;
}

BipartiteGraph incidence_graph(const LinSystem& sys) {
    std::vector<std::vector<int>> adj;
    for (const Equation& e : sys.equations()) {
        std::vector<int> nbrs;
        for (size_t v = e.support.find_first(); v != boost::dynamic_bitset<>::npos;
             v = e.support.find_next(v))
            nbrs.push_back(static_cast<int>(v));
        adj.push_back(std::move(nbrs));
    }
    return BipartiteGraph(static_cast<int>(sys.size()), sys.nvars(), std::move(adj));
}

Cnf random_3cnf(int n, const Rational& density, uint64_t seed) {
    if (n < 3) throw Error(ErrorCode::InputError, "random_3cnf needs n >= 3");
    // round(density * n), ties up
    Rational total = density * Rational(n);
    long long m = boost::rational_cast<long long>((2 * total + Rational(1)) / Rational(2));
    if (m < 0) throw Error(ErrorCode::InputError, "negative clause count");
    SplitMix64 rng(seed);
    Cnf out;
    out.nvars = n;
    for (long long i = 0; i < m; ++i) {
        int v[3];
        v[0] = static_cast<int>(rng.below(static_cast<uint64_t>(n)));
        do {
            v[1] = static_cast<int>(rng.below(static_cast<uint64_t>(n)));
        } while (v[1] == v[0]);
        do {
            v[2] = static_cast<int>(rng.below(static_cast<uint64_t>(n)));
        } while (v[2] == v[0] || v[2] == v[1]);
        std::vector<Literal> lits;
        for (int k = 0; k < 3; ++k) lits.push_back(Literal{v[k], rng.coin()});
        out.clauses.push_back(Clause::make(std::move(lits)));
    }
    return out;
}

Cnf parse_dimacs(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    Cnf out;
    long long m = -1;
    bool header = false;
    std::vector<Literal> lits;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == 'c') continue;
        std::istringstream ls(line);
        if (line[0] == 'p') {
            std::string p, fmt;
            ls >> p >> fmt >> out.nvars >> m;
            if (fmt != "cnf") throw Error(ErrorCode::SyntaxError, "expected 'p cnf'");
            header = true;
            continue;
        }
        if (!header) throw Error(ErrorCode::SyntaxError, "clause before DIMACS header");
        long long lit;
        while (ls >> lit) {
            if (lit == 0) {
                out.clauses.push_back(Clause::make(std::move(lits)));
                lits.clear();
            } else {
                int v = static_cast<int>(std::llabs(lit)) - 1;
                if (v >= out.nvars) throw Error(ErrorCode::SyntaxError, "literal out of range");
                lits.push_back(Literal{v, lit > 0});
            }
        }
    }
    if (!lits.empty()) throw Error(ErrorCode::SyntaxError, "unterminated clause");
    if (m >= 0 && static_cast<long long>(out.clauses.size()) != m)
        throw Error(ErrorCode::SyntaxError, "clause count does not match header");
    return out;
}

std::string dimacs_to_string(const Cnf& f) {
    std::ostringstream out;
    out << "p cnf " << f.nvars << " " << f.clauses.size() << "\n";
    for (const Clause& c : f.clauses) {
        for (const Literal& l : c.lits) out << (l.positive ? l.var + 1 : -(l.var + 1)) << " ";
        out << "0\n";
    }
    return out.str();
}

LinSystem parse_xor(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int n = 0;
    long long m = -1;
    bool header = false;
    LinSystem sys;
    int index = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == 'c') continue;
        std::istringstream ls(line);
        if (line[0] == 'p') {
            std::string p, fmt;
            ls >> p >> fmt >> n >> m;
            if (fmt != "xor") throw Error(ErrorCode::SyntaxError, "expected 'p xor'");
            sys = LinSystem(n);
            header = true;
            continue;
        }
        if (!header) throw Error(ErrorCode::SyntaxError, "equation before XOR header");
        std::vector<long long> nums;
        long long x;
        while (ls >> x) nums.push_back(x);
        if (nums.empty()) continue;
        bool rhs = nums.back() != 0;
        std::vector<int> vars;
        for (size_t i = 0; i + 1 < nums.size(); ++i) {
            if (nums[i] < 1 || nums[i] > n)
                throw Error(ErrorCode::SyntaxError, "equation variable out of range");
            vars.push_back(static_cast<int>(nums[i]) - 1);
        }
        sys.add_vars(vars, rhs, index++);
    }
    if (m >= 0 && static_cast<long long>(sys.size()) != m)
        throw Error(ErrorCode::SyntaxError, "equation count does not match header");
    return sys;
}

std::string xor_to_string(const LinSystem& sys) {
    std::ostringstream out;
    out << "p xor " << sys.nvars() << " " << sys.size() << "\n";
    for (const Equation& e : sys.equations()) {
        for (size_t v = e.support.find_first(); v != boost::dynamic_bitset<>::npos;
             v = e.support.find_next(v))
            out << (v + 1) << " ";
        out << (e.rhs ? 1 : 0) << "\n";
    }
    return out.str();
}

std::string sysvar_name(int idx) { return "x" + std::to_string(idx + 1); }

std::optional<int> sysvar_index(const std::string& name) {
    if (name.size() < 2 || name[0] != 'x') return std::nullopt;
    for (size_t i = 1; i < name.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(name[i]))) return std::nullopt;
    if (name[1] == '0') return std::nullopt;
    return std::stoi(name.substr(1)) - 1;
}

Formula formula_of_literal(FormulaStore& store, const Literal& lit) {
    Formula v = store.var(sysvar_name(lit.var));
    return lit.positive ? v : store.negation(v);
}

Formula formula_of_clause(FormulaStore& store, const Clause& c) {
    std::vector<Formula> lits;
    for (const Literal& l : c.lits) lits.push_back(formula_of_literal(store, l));
    return store.disjunction(lits);
}

std::vector<Formula> formulas_of_cnf(FormulaStore& store, const Cnf& f) {
    std::vector<Formula> out;
    for (const Clause& c : f.clauses) out.push_back(formula_of_clause(store, c));
    return out;
}

} // namespace pclab
