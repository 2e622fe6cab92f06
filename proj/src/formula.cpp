#include "pclab/formula.hpp"

#include <algorithm>
#include <cctype>

#include "pclab/truthtable.hpp"

namespace pclab {

Kind Formula::kind() const { return store_->kind(id_); }
VarId Formula::var() const { return store_->node_var(id_); }
bool Formula::value() const { return store_->node_value(id_); }
Formula Formula::child() const { return Formula(store_, store_->node_child(id_)); }
std::span<const FormulaId> Formula::child_ids() const { return store_->node_children(id_); }

std::vector<Formula> Formula::children() const {
    std::vector<Formula> out;
    for (FormulaId c : child_ids()) out.emplace_back(store_, c);
    return out;
}

int Formula::depth() const { return store_->node_depth(id_); }

int Formula::in_degree() const {
    switch (kind()) {
        case Kind::Or: return static_cast<int>(child_ids().size());
        case Kind::Neg: return 1;
        default: return 0;
    }
}

FormulaStore::FormulaStore() {
    for (int b = 0; b < 2; ++b) {
        Node n;
        n.kind = Kind::Const;
        n.alt = 0;
        n.depth = 0;
        n.aux = static_cast<uint32_t>(b);
        nodes_.push_back(std::move(n));
        const_nodes_[b] = static_cast<FormulaId>(nodes_.size() - 1);
    }
}

FormulaId FormulaStore::intern_node(Node&& n) {
    nodes_.push_back(std::move(n));
    return static_cast<FormulaId>(nodes_.size() - 1);
}

Formula FormulaStore::var(std::string_view name) {
    std::lock_guard<std::mutex> lk(mu_);
    auto it = var_ids_.find(std::string(name));
    VarId v;
    if (it == var_ids_.end()) {
        v = static_cast<VarId>(var_names_.size());
        var_names_.emplace_back(name);
        var_ids_.emplace(std::string(name), v);
    } else {
        v = it->second;
    }
    auto nit = var_nodes_.find(v);
    if (nit != var_nodes_.end()) return Formula(this, nit->second);
    Node n;
    n.kind = Kind::Var;
    n.alt = 0;
    n.depth = 0;
    n.aux = v;
    FormulaId id = intern_node(std::move(n));
    var_nodes_.emplace(v, id);
    return Formula(this, id);
}

Formula FormulaStore::constant(bool b) { return Formula(this, const_nodes_[b ? 1 : 0]); }

Formula FormulaStore::negation(Formula f) {
    if (f.store() != this) throw Error(ErrorCode::InputError, "formula from a different store");
    Kind k = kind(f.id());
    if (k == Kind::Const) return constant(!node_value(f.id()));
    if (k == Kind::Neg) return Formula(this, node_child(f.id()));
    std::lock_guard<std::mutex> lk(mu_);
    auto it = neg_nodes_.find(f.id());
    if (it != neg_nodes_.end()) return Formula(this, it->second);
    Node n;
    n.kind = Kind::Neg;
    n.aux = f.id();
    n.alt = static_cast<uint16_t>(k == Kind::Or ? node_alt(f.id()) + 1 : 0);
    n.depth = static_cast<uint16_t>(std::max<int>(1, n.alt));
    FormulaId id = intern_node(std::move(n));
    neg_nodes_.emplace(f.id(), id);
    return Formula(this, id);
}

Formula FormulaStore::disjunction(Formula a, Formula b) {
    Formula two[2] = {a, b};
    return disjunction(std::span<const Formula>(two, 2));
}

Formula FormulaStore::disjunction(std::span<const Formula> children) {
    // Flatten nested disjunctions, fold constants, dedup, sort by id.
    std::vector<FormulaId> flat;
    for (const Formula& c : children) {
        if (c.store() != this) throw Error(ErrorCode::InputError, "formula from a different store");
        Kind k = kind(c.id());
        if (k == Kind::Or) {
            auto sub = node_children(c.id());
            flat.insert(flat.end(), sub.begin(), sub.end());
        } else if (k == Kind::Const) {
            if (node_value(c.id())) return constant(true);
            // drop 0
        } else {
            flat.push_back(c.id());
        }
    }
    std::sort(flat.begin(), flat.end());
    flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
    if (flat.empty()) return constant(false);
    if (flat.size() == 1) return Formula(this, flat[0]);

    std::lock_guard<std::mutex> lk(mu_);
    auto it = or_nodes_.find(flat);
    if (it != or_nodes_.end()) return Formula(this, it->second);
    Node n;
    n.kind = Kind::Or;
    int alt = 0;
    for (FormulaId c : flat)
        if (kind(c) == Kind::Neg) alt = std::max(alt, node_alt(c) + 1);
    n.alt = static_cast<uint16_t>(alt);
    n.depth = static_cast<uint16_t>(std::max(1, alt));
    n.aux = 0;
    n.children = flat;
    FormulaId id = intern_node(std::move(n));
    or_nodes_.emplace(std::move(flat), id);
    return Formula(this, id);
}

const std::string& FormulaStore::var_name(VarId v) const {
    std::lock_guard<std::mutex> lk(mu_);
    return var_names_.at(v);
}

VarId FormulaStore::lookup_var(std::string_view name) const {
    std::lock_guard<std::mutex> lk(mu_);
    auto it = var_ids_.find(std::string(name));
    return it == var_ids_.end() ? static_cast<VarId>(-1) : it->second;
}

size_t FormulaStore::var_count() const {
    std::lock_guard<std::mutex> lk(mu_);
    return var_names_.size();
}

size_t FormulaStore::size() const {
    std::lock_guard<std::mutex> lk(mu_);
    return nodes_.size();
}

Kind FormulaStore::kind(FormulaId id) const { return nodes_[id].kind; }
VarId FormulaStore::node_var(FormulaId id) const { return nodes_[id].aux; }
bool FormulaStore::node_value(FormulaId id) const { return nodes_[id].aux != 0; }
FormulaId FormulaStore::node_child(FormulaId id) const { return nodes_[id].aux; }
std::span<const FormulaId> FormulaStore::node_children(FormulaId id) const {
    const Node& n = nodes_[id];
    return {n.children.data(), n.children.size()};
}
int FormulaStore::node_depth(FormulaId id) const { return nodes_[id].depth; }
int FormulaStore::node_alt(FormulaId id) const { return nodes_[id].alt; }

namespace {

struct Parser {
    FormulaStore& store;
    std::string_view text;
    size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    [[noreturn]] void fail(const std::string& msg) {
        throw Error(ErrorCode::SyntaxError, msg + " at position " + std::to_string(pos));
    }

    Formula parse() {
        skip_ws();
        if (pos >= text.size()) fail("unexpected end of input");
        char c = text[pos];
        if (c == '0' || c == '1') {
            ++pos;
            return store.constant(c == '1');
        }
        if (c == '~') {
            ++pos;
            return store.negation(parse());
        }
        if (c == '(') {
            ++pos;
            std::vector<Formula> parts;
            parts.push_back(parse());
            skip_ws();
            if (pos >= text.size() || text[pos] != '|') fail("expected '|'");
            while (pos < text.size() && text[pos] == '|') {
                ++pos;
                parts.push_back(parse());
                skip_ws();
            }
            if (pos >= text.size() || text[pos] != ')') fail("expected ')'");
            ++pos;
            return store.disjunction(parts);
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos;
            while (pos < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
                ++pos;
            return store.var(text.substr(start, pos - start));
        }
        fail(std::string("unexpected character '") + c + "'");
    }
};

} // namespace

Formula parse_formula(FormulaStore& store, std::string_view text) {
    Parser p{store, text};
    Formula f = p.parse();
    p.skip_ws();
    if (p.pos != text.size()) p.fail("trailing input");
    return f;
}

std::string print_formula(Formula f) {
    switch (f.kind()) {
        case Kind::Const: return f.value() ? "1" : "0";
        case Kind::Var: return f.store()->var_name(f.var());
        case Kind::Neg: return "~" + print_formula(f.child());
        case Kind::Or: {
            std::string out = "(";
            bool first = true;
            for (FormulaId c : f.child_ids()) {
                if (!first) out += "|";
                first = false;
                out += print_formula(Formula(f.store(), c));
            }
            out += ")";
            return out;
        }
    }
    return "";
}

namespace {

void collect_subformulas(Formula f, std::vector<char>& seen, std::vector<FormulaId>& out) {
    if (f.id() < seen.size() && seen[f.id()]) return;
    if (f.id() >= seen.size()) seen.resize(f.id() + 1, 0);
    seen[f.id()] = 1;
    out.push_back(f.id());
    if (f.kind() == Kind::Neg) {
        collect_subformulas(f.child(), seen, out);
    } else if (f.kind() == Kind::Or) {
        for (FormulaId c : f.child_ids()) collect_subformulas(Formula(f.store(), c), seen, out);
    }
}

} // namespace

std::vector<Formula> subformulas(Formula f) {
    Formula one[1] = {f};
    return subformulas(std::span<const Formula>(one, 1));
}

std::vector<Formula> subformulas(std::span<const Formula> roots) {
    std::vector<char> seen;
    std::vector<FormulaId> ids;
    const FormulaStore* store = nullptr;
    for (const Formula& r : roots) {
        store = r.store();
        collect_subformulas(r, seen, ids);
    }
    std::sort(ids.begin(), ids.end());
    std::vector<Formula> out;
    out.reserve(ids.size());
    for (FormulaId id : ids) out.emplace_back(store, id);
    return out;
}

std::vector<VarId> collect_vars(Formula f) {
    std::vector<VarId> vars;
    for (const Formula& s : subformulas(f))
        if (s.kind() == Kind::Var) vars.push_back(s.var());
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    return vars;
}

bool VarValuation::lookup(VarId v) const {
    auto it = values_.find(v);
    if (it == values_.end())
        throw Error(ErrorCode::MissingVariable, "variable id " + std::to_string(v) + " unassigned");
    return it->second;
}

namespace {

bool evaluate_rec(Formula f, const VarValuation& a, std::unordered_map<FormulaId, bool>& memo) {
    auto it = memo.find(f.id());
    if (it != memo.end()) return it->second;
    bool v = false;
    switch (f.kind()) {
        case Kind::Const: v = f.value(); break;
        case Kind::Var: v = a.lookup(f.var()); break;
        case Kind::Neg: v = !evaluate_rec(f.child(), a, memo); break;
        case Kind::Or:
            for (FormulaId c : f.child_ids()) {
                if (evaluate_rec(Formula(f.store(), c), a, memo)) {
                    v = true;
                    break;
                }
            }
            break;
    }
    memo.emplace(f.id(), v);
    return v;
}

} // namespace

bool evaluate(Formula f, const VarValuation& a) {
    std::unordered_map<FormulaId, bool> memo;
    return evaluate_rec(f, a, memo);
}

namespace {

std::vector<FormulaId> disjunct_set(Formula f) {
    if (f.kind() == Kind::Or) {
        auto ids = f.child_ids();
        return {ids.begin(), ids.end()}; // already sorted
    }
    return {f.id()};
}

} // namespace

bool weakening_of(Formula c, Formula d) {
    std::vector<FormulaId> cs = disjunct_set(c);
    std::vector<FormulaId> ds = disjunct_set(d);
    return std::includes(cs.begin(), cs.end(), ds.begin(), ds.end());
}

int semantic_width(Formula f, int max_support) {
    std::vector<VarId> vars = collect_vars(f);
    if (static_cast<int>(vars.size()) > max_support)
        throw Error(ErrorCode::SupportTooLarge,
                    "support " + std::to_string(vars.size()) + " exceeds max_support " +
                        std::to_string(max_support));
    TruthTable t = TruthTable::of_formula(f);
    return t.width();
}

} // namespace pclab
