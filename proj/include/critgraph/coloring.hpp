#pragma once

#include "critgraph/assignment.hpp"
#include "critgraph/clique.hpp"
#include "critgraph/graph.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

namespace critgraph {

enum class SolveStatus { Colored, Uncolorable, BudgetExhausted };

inline const char* to_string(SolveStatus s)
{
    switch (s) {
    case SolveStatus::Colored: return "colored";
    case SolveStatus::Uncolorable: return "uncolorable";
    case SolveStatus::BudgetExhausted: return "budget_exhausted";
    }
    return "?";
}

struct ColoringResult {
    SolveStatus status = SolveStatus::Uncolorable;
    std::vector<color_t> coloring;  // actual colors, when Colored
    std::uint64_t nodes = 0;
};

inline constexpr std::uint64_t default_node_budget = 50'000'000;

namespace detail {

// Backtracking with most-constrained-vertex selection and forward checking.
class ListColorSearch {
public:
    ListColorSearch(const Graph& g, const ListAssignment& L, std::uint64_t budget) : g_(g), L_(L), budget_(budget)
    {
        const int n = g.order();
        color_.assign(static_cast<std::size_t>(n), -1);
        // banned[v][i] counts colored neighbours currently using L(v)[i]
        banned_.resize(static_cast<std::size_t>(n));
        avail_.resize(static_cast<std::size_t>(n));
        for (vertex_t v = 0; v < n; ++v) {
            banned_[v].assign(static_cast<std::size_t>(L.size(v)), 0);
            avail_[v] = L.size(v);
        }
    }

    ColoringResult run()
    {
        ColoringResult r;
        bool ok = search(g_.order());
        r.nodes = nodes_;
        if (exhausted_) {
            r.status = SolveStatus::BudgetExhausted;
        } else if (ok) {
            r.status = SolveStatus::Colored;
            r.coloring.resize(color_.size());
            for (std::size_t v = 0; v < color_.size(); ++v) r.coloring[v] = L_[static_cast<vertex_t>(v)][color_[v]];
        } else {
            r.status = SolveStatus::Uncolorable;
        }
        return r;
    }

private:
    bool search(int remaining)
    {
        if (remaining == 0) return true;
        if (++nodes_ > budget_) {
            exhausted_ = true;
            return false;
        }
        vertex_t best = -1;
        for (vertex_t v = 0; v < g_.order(); ++v) {
            if (color_[v] >= 0) continue;
            if (avail_[v] == 0) return false;
            if (best < 0 || avail_[v] < avail_[best] || (avail_[v] == avail_[best] && g_.degree(v) > g_.degree(best))) best = v;
        }
        for (int i = 0; i < L_.size(best); ++i) {
            if (banned_[best][i]) continue;
            assign(best, i, +1);
            bool ok = search(remaining - 1);
            assign(best, i, -1);
            if (ok) {
                color_[best] = i;
                return true;
            }
            if (exhausted_) return false;
        }
        return false;
    }

    void assign(vertex_t v, int i, int dir)
    {
        color_[v] = dir > 0 ? i : -1;
        const color_t c = L_[v][i];
        for (vertex_t u : g_.neighbors(v)) {
            int j = L_.index_of(u, c);
            if (j < 0) continue;
            if (dir > 0) {
                if (banned_[u][j]++ == 0) --avail_[u];
            } else {
                if (--banned_[u][j] == 0) ++avail_[u];
            }
        }
    }

    const Graph& g_;
    const ListAssignment& L_;
    std::uint64_t budget_;
    std::uint64_t nodes_ = 0;
    bool exhausted_ = false;
    std::vector<int> color_;
    std::vector<std::vector<int>> banned_;
    std::vector<int> avail_;
};

}  // namespace detail

/// Exact list coloring. BudgetExhausted is never reported as Uncolorable.
inline ColoringResult list_color(const Graph& g, const ListAssignment& L, std::uint64_t budget = default_node_budget)
{
    if (L.order() != g.order()) throw std::invalid_argument("list assignment size does not match graph order");
    return detail::ListColorSearch(g, L, budget).run();
}

inline bool is_proper_list_coloring(const Graph& g, const ListAssignment& L, const std::vector<color_t>& c)
{
    if (static_cast<int>(c.size()) != g.order()) return false;
    for (vertex_t v = 0; v < g.order(); ++v)
        if (!L.has(v, c[v])) return false;
    for (auto [u, v] : g.edges())
        if (c[u] == c[v]) return false;
    return true;
}

/// k-coloring with colors 0..k-1 (the first vertex of a maximum clique
/// ordering is pinned to break symmetry).
inline ColoringResult k_color(const Graph& g, int k, std::uint64_t budget = default_node_budget)
{
    if (k < 0) return {};
    ListAssignment L = ListAssignment::uniform(g.order(), k);
    // pin a maximum clique to distinct colors; any k-coloring can be permuted to agree
    auto clique = max_clique(g);
    if (static_cast<int>(clique.size()) > k) return {SolveStatus::Uncolorable, {}, 0};
    for (std::size_t i = 0; i < clique.size(); ++i) L.set(clique[i], {static_cast<color_t>(i)});
    return list_color(g, L, budget);
}

struct ChromaticResult {
    SolveStatus status = SolveStatus::Colored;  // BudgetExhausted when unresolved
    int chi = 0;
    std::vector<color_t> coloring;
};

/// Exact chromatic number: clique lower bound, DSATUR-style greedy upper
/// bound, then decreasing k-colorability tests.
inline ChromaticResult chromatic_number(const Graph& g, std::uint64_t budget = default_node_budget)
{
    ChromaticResult res;
    const int n = g.order();
    if (n == 0) return res;
    // greedy in degeneracy order for an upper bound
    std::vector<vertex_t> order(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](vertex_t a, vertex_t b) { return g.degree(a) > g.degree(b); });
    std::vector<color_t> greedy(static_cast<std::size_t>(n), -1);
    int upper = 0;
    for (vertex_t v : order) {
        std::vector<char> used(static_cast<std::size_t>(n) + 1, 0);
        for (vertex_t u : g.neighbors(v))
            if (greedy[u] >= 0) used[greedy[u]] = 1;
        color_t c = 0;
        while (used[c]) ++c;
        greedy[v] = c;
        upper = std::max(upper, c + 1);
    }
    const int lower = clique_number(g);
    res.chi = upper;
    res.coloring = greedy;
    for (int k = upper - 1; k >= lower; --k) {
        auto r = k_color(g, k, budget);
        if (r.status == SolveStatus::BudgetExhausted) {
            res.status = SolveStatus::BudgetExhausted;
            return res;
        }
        if (r.status == SolveStatus::Uncolorable) break;
        res.chi = k;
        res.coloring = r.coloring;
    }
    return res;
}

}  // namespace critgraph
