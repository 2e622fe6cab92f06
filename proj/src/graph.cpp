#include "pclab/graph.hpp"

#include <algorithm>
#include <sstream>

#include "pclab/rng.hpp"

namespace pclab {

Rational parse_rational(const std::string& text) {
    // accepts "p", "p/q" and plain decimals like "1.5"
    auto slash = text.find('/');
    try {
        if (slash != std::string::npos) {
            long long p = std::stoll(text.substr(0, slash));
            long long q = std::stoll(text.substr(slash + 1));
            if (q == 0) throw Error(ErrorCode::InputError, "zero denominator: " + text);
            return Rational(p, q);
        }
        auto dot = text.find('.');
        if (dot == std::string::npos) return Rational(std::stoll(text));
        std::string digits = text.substr(0, dot) + text.substr(dot + 1);
        long long den = 1;
        for (size_t i = dot + 1; i < text.size(); ++i) {
            if (den > 900'000'000'000'000'000LL / 10)
                throw Error(ErrorCode::InputError, "decimal too long: " + text);
            den *= 10;
        }
        return Rational(std::stoll(digits), den);
    } catch (const std::invalid_argument&) {
        throw Error(ErrorCode::InputError, "bad rational: " + text);
    } catch (const std::out_of_range&) {
        throw Error(ErrorCode::InputError, "rational out of range: " + text);
    }
}

std::string rational_to_string(const Rational& r) {
    if (r.denominator() == 1) return std::to_string(r.numerator());
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

BipartiteGraph::BipartiteGraph(int left_size, int right_size,
                               std::vector<std::vector<int>> adjacency)
    : adj_(std::move(adjacency)),
      left_alive_(static_cast<size_t>(left_size), 1),
      right_alive_(static_cast<size_t>(right_size), 1) {
    if (adj_.size() != static_cast<size_t>(left_size))
        throw Error(ErrorCode::InputError, "adjacency size mismatch");
    for (auto& nbrs : adj_) {
        std::sort(nbrs.begin(), nbrs.end());
        nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
        for (int j : nbrs)
            if (j < 0 || j >= right_size)
                throw Error(ErrorCode::InputError, "right vertex out of range");
    }
}

int BipartiteGraph::alive_left_count() const {
    return static_cast<int>(std::count(left_alive_.begin(), left_alive_.end(), 1));
}

int BipartiteGraph::alive_right_count() const {
    return static_cast<int>(std::count(right_alive_.begin(), right_alive_.end(), 1));
}

std::vector<int> BipartiteGraph::alive_left() const {
    std::vector<int> out;
    for (int i = 0; i < left_size(); ++i)
        if (left_alive_[static_cast<size_t>(i)]) out.push_back(i);
    return out;
}

std::vector<int> BipartiteGraph::alive_right() const {
    std::vector<int> out;
    for (int j = 0; j < right_size(); ++j)
        if (right_alive_[static_cast<size_t>(j)]) out.push_back(j);
    return out;
}

int BipartiteGraph::max_left_degree() const {
    int d = 0;
    for (int i : alive_left()) d = std::max(d, static_cast<int>(adj_[static_cast<size_t>(i)].size()));
    return d;
}

std::vector<int> BipartiteGraph::boundary(const std::vector<int>& left_set) const {
    std::vector<int> count(static_cast<size_t>(right_size()), 0);
    for (int i : left_set) {
        if (!left_alive(i)) throw Error(ErrorCode::InputError, "boundary of a dead left vertex");
        for (int j : adj_[static_cast<size_t>(i)]) ++count[static_cast<size_t>(j)];
    }
    std::vector<int> out;
    for (int j = 0; j < right_size(); ++j)
        if (count[static_cast<size_t>(j)] == 1) out.push_back(j);
    return out;
}

std::vector<int> BipartiteGraph::neighbors_of_set(const std::vector<int>& left_set) const {
    std::vector<char> mark(static_cast<size_t>(right_size()), 0);
    for (int i : left_set)
        for (int j : adj_[static_cast<size_t>(i)]) mark[static_cast<size_t>(j)] = 1;
    std::vector<int> out;
    for (int j = 0; j < right_size(); ++j)
        if (mark[static_cast<size_t>(j)]) out.push_back(j);
    return out;
}

BipartiteGraph BipartiteGraph::remove_right(const std::vector<int>& right_set) const {
    BipartiteGraph out = *this;
    std::vector<char> dead(static_cast<size_t>(right_size()), 0);
    for (int j : right_set) {
        if (j < 0 || j >= right_size()) throw Error(ErrorCode::InputError, "right vertex out of range");
        dead[static_cast<size_t>(j)] = 1;
        out.right_alive_[static_cast<size_t>(j)] = 0;
    }
    for (int i = 0; i < left_size(); ++i) {
        if (!out.left_alive_[static_cast<size_t>(i)]) continue;
        auto& nbrs = out.adj_[static_cast<size_t>(i)];
        nbrs.erase(std::remove_if(nbrs.begin(), nbrs.end(),
                                  [&](int j) { return dead[static_cast<size_t>(j)] != 0; }),
                   nbrs.end());
        if (nbrs.empty()) {
            out.left_alive_[static_cast<size_t>(i)] = 0;
            nbrs.clear();
        }
    }
    return out;
}

bool BipartiteGraph::operator==(const BipartiteGraph& o) const {
    return left_alive_ == o.left_alive_ && right_alive_ == o.right_alive_ && adj_ == o.adj_;
}

BipartiteGraph BipartiteGraph::parse(const std::string& text) {
    std::istringstream in(text);
    std::string tag;
    int nl = 0, nr = 0;
    if (!(in >> tag >> nl >> nr) || tag != "g")
        throw Error(ErrorCode::SyntaxError, "graph file: expected header 'g |L| |R|'");
    std::vector<std::vector<int>> adj(static_cast<size_t>(nl));
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string head;
        ls >> head;
        if (head.empty()) continue;
        if (head.back() != ':')
            throw Error(ErrorCode::SyntaxError, "graph file: expected 'i:' row label");
        int i = std::stoi(head.substr(0, head.size() - 1));
        if (i < 1 || i > nl) throw Error(ErrorCode::SyntaxError, "graph file: left label out of range");
        int j;
        while (ls >> j) {
            if (j < 1 || j > nr)
                throw Error(ErrorCode::SyntaxError, "graph file: right label out of range");
            adj[static_cast<size_t>(i - 1)].push_back(j - 1);
        }
    }
    return BipartiteGraph(nl, nr, std::move(adj));
}

std::string BipartiteGraph::print() const {
    std::ostringstream out;
    out << "g " << left_size() << " " << right_size() << "\n";
    for (int i = 0; i < left_size(); ++i) {
        if (!left_alive(i)) continue;
        out << (i + 1) << ":";
        for (int j : adj_[static_cast<size_t>(i)]) out << " " << (j + 1);
        out << "\n";
    }
    return out.str();
}

namespace {

// sum_{s<=r} C(n, s), saturating at cap
uint64_t subset_count(int n, long long r, uint64_t cap) {
    uint64_t total = 0;
    long double binom = 1;
    for (long long s = 0; s <= r && s <= n; ++s) {
        if (s > 0) binom = binom * static_cast<long double>(n - s + 1) / static_cast<long double>(s);
        if (binom > static_cast<long double>(cap) || total > cap) return cap + 1;
        total += static_cast<uint64_t>(binom);
    }
    return total;
}

struct SubsetScan {
    const BipartiteGraph& g;
    std::vector<int> candidates;
    std::vector<int> count; // per right vertex, neighbours in the current set
    std::vector<int> chosen;
    int boundary_size = 0;

    explicit SubsetScan(const BipartiteGraph& graph) : g(graph), candidates(graph.alive_left()) {
        count.assign(static_cast<size_t>(graph.right_size()), 0);
    }

    void push(int v) {
        chosen.push_back(v);
        for (int j : g.neighbors(v)) {
            int& c = count[static_cast<size_t>(j)];
            if (c == 0) ++boundary_size;
            else if (c == 1) --boundary_size;
            ++c;
        }
    }

    void pop() {
        int v = chosen.back();
        chosen.pop_back();
        for (int j : g.neighbors(v)) {
            int& c = count[static_cast<size_t>(j)];
            --c;
            if (c == 0) --boundary_size;
            else if (c == 1) ++boundary_size;
        }
    }

    // visit all subsets of size exactly s; returns the first for which
    // pred(boundary_size, s) is false, if any
    template <typename Pred>
    std::optional<std::vector<int>> scan_size(size_t s, size_t from, const Pred& pred) {
        if (chosen.size() == s) {
            if (!pred(boundary_size, static_cast<long long>(s))) return chosen;
            return std::nullopt;
        }
        size_t need = s - chosen.size();
        for (size_t k = from; k < candidates.size() && candidates.size() - k >= need; ++k) {
            push(candidates[k]);
            auto bad = scan_size(s, k + 1, pred);
            if (bad) return bad;
            pop();
        }
        return std::nullopt;
    }
};

template <typename Pred>
ExpanderCheck expansion_check(const BipartiteGraph& g, const ExpanderParams& p,
                              const ExpanderCheckOptions& opts, const Pred& pred) {
    for (int i : g.alive_left()) {
        if (static_cast<long long>(g.neighbors(i).size()) > p.degree_cap) {
            ExpanderCheck out;
            out.result = ExpanderCheck::Result::DegreeViolation;
            out.witness = {i};
            out.detail = "left degree exceeds cap";
            return out;
        }
    }
    long long r = std::min<long long>(p.r, g.alive_left_count());
    if (r <= 0) {
        ExpanderCheck out;
        out.result = ExpanderCheck::Result::Certified;
        out.detail = "no nonempty sets to check";
        return out;
    }
    if (opts.sampled) {
        SplitMix64 rng(opts.seed);
        std::vector<int> alive = g.alive_left();
        for (uint64_t t = 0; t < opts.sample_count && !alive.empty(); ++t) {
            long long s = 1 + static_cast<long long>(rng.below(static_cast<uint64_t>(r)));
            s = std::min<long long>(s, static_cast<long long>(alive.size()));
            std::vector<int> pool = alive;
            std::vector<int> pick;
            for (long long k = 0; k < s; ++k) {
                size_t idx = static_cast<size_t>(rng.below(pool.size()));
                pick.push_back(pool[idx]);
                pool.erase(pool.begin() + static_cast<long>(idx));
            }
            int b = static_cast<int>(g.boundary(pick).size());
            if (!pred(b, s)) {
                std::sort(pick.begin(), pick.end());
                ExpanderCheck out;
                out.result = ExpanderCheck::Result::Counterexample;
                out.witness = pick;
                return out;
            }
        }
        ExpanderCheck out;
        out.result = ExpanderCheck::Result::NoCounterexampleFound;
        out.detail = "sampled mode is not a certificate";
        return out;
    }
    if (subset_count(g.alive_left_count(), r, opts.subset_budget) > opts.subset_budget)
        throw Error(ErrorCode::BudgetExceeded, "exhaustive expander check infeasible within budget");
    SubsetScan scan(g);
    for (long long s = 1; s <= r; ++s) {
        auto bad = scan.scan_size(static_cast<size_t>(s), 0, pred);
        if (bad) {
            ExpanderCheck out;
            out.result = ExpanderCheck::Result::Counterexample;
            out.witness = *bad;
            return out;
        }
    }
    ExpanderCheck out;
    out.result = ExpanderCheck::Result::Certified;
    return out;
}

} // namespace

ExpanderCheck is_boundary_expander(const BipartiteGraph& g, const ExpanderParams& p,
                                   const ExpanderCheckOptions& opts) {
    const Rational& c = p.c;
    return expansion_check(g, p, opts, [&](int boundary_size, long long s) {
        return Rational(boundary_size) >= c * Rational(s);
    });
}

ExpanderCheck is_weak_expander(const BipartiteGraph& g, const ExpanderParams& p,
                               const ExpanderCheckOptions& opts) {
    const Rational& c = p.c;
    long long r = p.r;
    return expansion_check(g, p, opts, [&](int boundary_size, long long s) {
        if (2 * s <= r) return boundary_size > 0;
        return Rational(boundary_size) >= c * Rational(s);
    });
}

namespace {

struct ClosureSearch {
    const BipartiteGraph& g;
    std::vector<char> in_j;          // right vertex in J
    std::vector<int> candidates;     // alive left, ascending
    std::vector<int> count;          // neighbours in current set, per right vertex
    std::vector<int> undecided;      // candidate neighbours not yet decided, per right vertex
    std::vector<int> chosen;
    std::vector<int> best;
    bool have_best = false;
    long long r;
    uint64_t nodes = 0;
    uint64_t node_budget;

    ClosureSearch(const BipartiteGraph& graph, const std::vector<int>& right_set, long long rr,
                  uint64_t budget)
        : g(graph), candidates(graph.alive_left()), r(rr), node_budget(budget) {
        in_j.assign(static_cast<size_t>(g.right_size()), 0);
        for (int j : right_set)
            if (j >= 0 && j < g.right_size()) in_j[static_cast<size_t>(j)] = 1;
        count.assign(static_cast<size_t>(g.right_size()), 0);
        undecided.assign(static_cast<size_t>(g.right_size()), 0);
        for (int v : candidates)
            for (int j : g.neighbors(v)) ++undecided[static_cast<size_t>(j)];
    }

    bool leaked(int j) const {
        return !in_j[static_cast<size_t>(j)] && count[static_cast<size_t>(j)] == 1 &&
               undecided[static_cast<size_t>(j)] == 0;
    }

    // returns false when the decision leaks a boundary vertex outside J for good
    bool decide(int v, bool include) {
        bool ok = true;
        for (int j : g.neighbors(v)) {
            --undecided[static_cast<size_t>(j)];
            if (include) ++count[static_cast<size_t>(j)];
            if (leaked(j)) ok = false;
        }
        if (include) chosen.push_back(v);
        return ok;
    }

    void undo(int v, bool include) {
        if (include) chosen.pop_back();
        for (int j : g.neighbors(v)) {
            ++undecided[static_cast<size_t>(j)];
            if (include) --count[static_cast<size_t>(j)];
        }
    }

    void consider_leaf() {
        if (!have_best || chosen.size() > best.size() ||
            (chosen.size() == best.size() && chosen < best)) {
            best = chosen;
            have_best = true;
        }
    }

    void dfs(size_t pos) {
        if (++nodes > node_budget)
            throw Error(ErrorCode::BudgetExceeded, "closure search exceeded node budget");
        if (pos == candidates.size()) {
            consider_leaf();
            return;
        }
        // capacity prune: strictly smaller than the incumbent even if we take everything
        size_t room = std::min<size_t>(candidates.size() - pos,
                                       static_cast<size_t>(std::max<long long>(
                                           0, r - static_cast<long long>(chosen.size()))));
        if (have_best && chosen.size() + room < best.size()) return;

        int v = candidates[pos];
        if (static_cast<long long>(chosen.size()) < r) {
            bool ok = decide(v, true);
            if (ok) dfs(pos + 1);
            undo(v, true);
        }
        bool ok = decide(v, false);
        if (ok) dfs(pos + 1);
        undo(v, false);
    }
};

// greedy single-vertex saturation; sound as an incumbent seed only
std::vector<int> saturation_seed(const BipartiteGraph& g, const std::vector<int>& right_set,
                                 long long r) {
    std::vector<char> in_j(static_cast<size_t>(g.right_size()), 0);
    for (int j : right_set)
        if (j >= 0 && j < g.right_size()) in_j[static_cast<size_t>(j)] = 1;
    std::vector<int> current;
    std::vector<char> used(static_cast<size_t>(g.left_size()), 0);
    bool grew = true;
    while (grew && static_cast<long long>(current.size()) < r) {
        grew = false;
        for (int v : g.alive_left()) {
            if (used[static_cast<size_t>(v)]) continue;
            std::vector<int> trial = current;
            trial.push_back(v);
            bool contained = true;
            for (int j : g.boundary(trial))
                if (!in_j[static_cast<size_t>(j)]) {
                    contained = false;
                    break;
                }
            if (contained) {
                current = std::move(trial);
                used[static_cast<size_t>(v)] = 1;
                grew = true;
                if (static_cast<long long>(current.size()) >= r) break;
            }
        }
    }
    std::sort(current.begin(), current.end());
    return current;
}

} // namespace

std::vector<int> closure(const BipartiteGraph& g, const std::vector<int>& right_set, long long r,
                         const ClosureOptions& opts) {
    if (!opts.force_exhaustive && g.alive_left_count() > opts.exhaustive_limit)
        throw Error(ErrorCode::BudgetExceeded,
                    "closure: left side larger than the exhaustive limit; raise the limit or force");
    ClosureSearch search(g, right_set, r, opts.node_budget);
    std::vector<int> seed = saturation_seed(g, right_set, r);
    if (!seed.empty()) {
        search.best = seed;
        search.have_best = true;
    }
    search.dfs(0);
    if (!search.have_best) return {};
    return search.best;
}

std::vector<int> extension(const BipartiteGraph& g, const std::vector<int>& right_set, long long r,
                           const ClosureOptions& opts) {
    std::vector<int> cl = closure(g, right_set, r, opts);
    std::vector<int> out = g.neighbors_of_set(cl);
    out.insert(out.end(), right_set.begin(), right_set.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

} // namespace pclab
