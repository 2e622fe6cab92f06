#pragma once

#include <boost/rational.hpp>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pclab/error.hpp"

namespace pclab {

using Rational = boost::rational<long long>;

Rational parse_rational(const std::string& text);
std::string rational_to_string(const Rational& r);

/// (r, Delta, c) parameters. c is an exact rational; every threshold
/// comparison (cr/2, cr/4, ...) is exact.
struct ExpanderParams {
    long long r = 0;
    long long degree_cap = 0; // Delta
    Rational c{0};
};

/// Bipartite incidence structure with stable vertex labels. Left and right
/// vertices keep their original indices across deletions; dead vertices are
/// masked out and adjacency lists of survivors are filtered in place.
class BipartiteGraph {
  public:
    BipartiteGraph() = default;
    BipartiteGraph(int left_size, int right_size, std::vector<std::vector<int>> adjacency);

    int left_size() const { return static_cast<int>(left_alive_.size()); }
    int right_size() const { return static_cast<int>(right_alive_.size()); }
    bool left_alive(int i) const { return left_alive_[static_cast<size_t>(i)] != 0; }
    bool right_alive(int j) const { return right_alive_[static_cast<size_t>(j)] != 0; }
    int alive_left_count() const;
    int alive_right_count() const;
    std::vector<int> alive_left() const;
    std::vector<int> alive_right() const;

    /// Neighbours of a live left vertex among live right vertices, sorted.
    const std::vector<int>& neighbors(int i) const { return adj_[static_cast<size_t>(i)]; }

    int max_left_degree() const;

    /// Unique neighbours of I (right vertices with exactly one neighbour in I).
    std::vector<int> boundary(const std::vector<int>& left_set) const;
    std::vector<int> neighbors_of_set(const std::vector<int>& left_set) const;

    /// Removes the right vertices in J together with every left vertex whose
    /// neighbours all lie in J.
    BipartiteGraph remove_right(const std::vector<int>& right_set) const;

    bool operator==(const BipartiteGraph& o) const;

    /// Text format: "g |L| |R|" then one line per left vertex "i: j1 j2 ..."
    /// (1-based labels in the file, 0-based in memory).
    static BipartiteGraph parse(const std::string& text);
    std::string print() const;

  private:
    std::vector<std::vector<int>> adj_;
    std::vector<char> left_alive_;
    std::vector<char> right_alive_;
};

struct ExpanderCheck {
    enum class Result { Certified, Counterexample, DegreeViolation, NoCounterexampleFound };
    Result result;
    std::vector<int> witness; // violating left set, or the offending vertex
    std::string detail;

    bool certified() const { return result == Result::Certified; }
};

struct ExpanderCheckOptions {
    bool sampled = false;           // sampled mode never certifies
    uint64_t sample_count = 20000;
    uint64_t seed = 0;
    uint64_t subset_budget = 8'000'000; // cap on sum_{i<=r} C(|L|, i) in exhaustive mode
};

/// Boundary expansion: |boundary(I)| >= c|I| for every live I with |I| <= r.
ExpanderCheck is_boundary_expander(const BipartiteGraph& g, const ExpanderParams& p,
                                   const ExpanderCheckOptions& opts = {});

/// Weak expansion: nonempty boundary for 0 < |I| <= r/2, and
/// |boundary(I)| >= c|I| for r/2 < |I| <= r.
ExpanderCheck is_weak_expander(const BipartiteGraph& g, const ExpanderParams& p,
                               const ExpanderCheckOptions& opts = {});

struct ClosureOptions {
    int exhaustive_limit = 20;       // pruned DFS is the exact mode up to this |L|
    uint64_t node_budget = 30'000'000;
    bool force_exhaustive = false;   // ignore the limit, rely on the node budget only
};

/// Largest set I of live left vertices with |I| <= r and boundary(I) <= J,
/// lexicographically first among the maximum-size ones. Exact via pruned
/// enumeration (a greedy saturation pass only seeds the incumbent); raises
/// BudgetExceeded when the search cannot finish within budget.
std::vector<int> closure(const BipartiteGraph& g, const std::vector<int>& right_set, long long r,
                         const ClosureOptions& opts = {});

/// Ext(J) = J union N(Cl(J)).
std::vector<int> extension(const BipartiteGraph& g, const std::vector<int>& right_set, long long r,
                           const ClosureOptions& opts = {});

} // namespace pclab
