#pragma once

#include "critgraph/graph.hpp"
#include "critgraph/numeric.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <queue>
#include <vector>

namespace critgraph {

inline long long triangle_count(const Graph& g)
{
    long long t = 0;
    for (vertex_t u = 0; u < g.order(); ++u)
        for (vertex_t v : g.neighbors(u))
            if (u < v) {
                Bitset common = g.row(u) & g.row(v);
                for (auto w = common.find_next(static_cast<std::size_t>(v)); w != Bitset::npos; w = common.find_next(w)) ++t;
            }
    return t;
}

/// |T| <= (2|E|)^{3/2} / 6, decided exactly as 36 |T|^2 <= 8 |E|^3.
inline bool rivin_check(const Graph& g)
{
    BigInt t = triangle_count(g);
    BigInt m = static_cast<long long>(g.size());
    return 36 * t * t <= 8 * m * m * m;
}

inline Rational average_degree(const Graph& g)
{
    if (g.order() == 0) return Rational(0);
    return Rational(2 * static_cast<long long>(g.size()), g.order());
}

namespace detail {

// Dinic max-flow on int64 capacities.
class Dinic {
public:
    explicit Dinic(int n) : head_(static_cast<std::size_t>(n), -1), level_(static_cast<std::size_t>(n)), it_(static_cast<std::size_t>(n)) {}

    void add_edge(int u, int v, std::int64_t cap)
    {
        edges_.push_back({v, head_[u], cap});
        head_[u] = static_cast<int>(edges_.size()) - 1;
        edges_.push_back({u, head_[v], 0});
        head_[v] = static_cast<int>(edges_.size()) - 1;
    }

    std::int64_t max_flow(int s, int t)
    {
        std::int64_t flow = 0;
        while (bfs(s, t)) {
            it_ = head_;
            while (std::int64_t f = dfs(s, t, std::numeric_limits<std::int64_t>::max())) flow += f;
        }
        return flow;
    }

    // Vertices reachable from s in the residual graph after max_flow.
    std::vector<char> source_side(int s) const
    {
        std::vector<char> seen(head_.size(), 0);
        std::vector<int> stack{s};
        seen[s] = 1;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (int e = head_[u]; e != -1; e = edges_[e].next)
                if (edges_[e].cap > 0 && !seen[edges_[e].to]) {
                    seen[edges_[e].to] = 1;
                    stack.push_back(edges_[e].to);
                }
        }
        return seen;
    }

private:
    struct Edge {
        int to;
        int next;
        std::int64_t cap;
    };

    bool bfs(int s, int t)
    {
        std::fill(level_.begin(), level_.end(), -1);
        std::queue<int> q;
        level_[s] = 0;
        q.push(s);
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            for (int e = head_[u]; e != -1; e = edges_[e].next)
                if (edges_[e].cap > 0 && level_[edges_[e].to] < 0) {
                    level_[edges_[e].to] = level_[u] + 1;
                    q.push(edges_[e].to);
                }
        }
        return level_[t] >= 0;
    }

    std::int64_t dfs(int u, int t, std::int64_t f)
    {
        if (u == t) return f;
        for (int& e = it_[u]; e != -1; e = edges_[e].next) {
            Edge& ed = edges_[e];
            if (ed.cap > 0 && level_[ed.to] == level_[u] + 1) {
                std::int64_t got = dfs(ed.to, t, std::min(f, ed.cap));
                if (got > 0) {
                    ed.cap -= got;
                    edges_[e ^ 1].cap += got;
                    return got;
                }
            }
        }
        return 0;
    }

    std::vector<Edge> edges_;
    std::vector<int> head_;
    std::vector<int> level_;
    std::vector<int> it_;
};

inline long long edges_within(const Graph& g, const std::vector<vertex_t>& s)
{
    long long e = 0;
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j)
            if (g.adjacent(s[i], s[j])) ++e;
    return e;
}

}  // namespace detail

/// Exact mad by enumerating all vertex subsets; n <= 22.
inline Rational mad_exhaustive(const Graph& g)
{
    const int n = g.order();
    if (n == 0) return Rational(0);
    if (n > 22) throw precondition_error("mad_exhaustive limited to 22 vertices");
    std::vector<std::uint32_t> nb(static_cast<std::size_t>(n), 0);
    for (vertex_t v = 0; v < n; ++v)
        for (vertex_t u : g.neighbors(v)) nb[v] |= 1u << u;
    const std::uint32_t full = (1u << n) - 1;
    std::vector<std::int32_t> e(static_cast<std::size_t>(full) + 1, 0);
    long long best_e = 0, best_s = 1;
    for (std::uint32_t s = 1; s <= full; ++s) {
        int v = __builtin_ctz(s);
        std::uint32_t rest = s & (s - 1);
        e[s] = e[rest] + __builtin_popcount(nb[v] & rest);
        long long size = __builtin_popcount(s);
        if (static_cast<long long>(e[s]) * best_s > best_e * size) {
            best_e = e[s];
            best_s = size;
        }
    }
    return Rational(2 * best_e, best_s);
}

/// Exact mad by Dinkelbach iteration on the densest-subgraph selection
/// network (edge nodes feed both endpoints; vertices pay lambda).
inline Rational mad_flow(const Graph& g)
{
    const int n = g.order();
    if (n == 0 || g.size() == 0) return Rational(0);
    auto edges = g.edges();
    const int m = static_cast<int>(edges.size());
    long long num = m, den = n;  // lambda = num / den = |E(S)| / |S|
    for (;;) {
        // maximise q|E(S)| - p|S| with lambda = p/q
        const int src = m + n, sink = m + n + 1;
        detail::Dinic flow(m + n + 2);
        const std::int64_t inf = std::numeric_limits<std::int64_t>::max() / 4;
        for (int i = 0; i < m; ++i) {
            flow.add_edge(src, i, den);
            flow.add_edge(i, m + edges[i].first, inf);
            flow.add_edge(i, m + edges[i].second, inf);
        }
        for (int v = 0; v < n; ++v) flow.add_edge(m + v, sink, num);
        std::int64_t cut = flow.max_flow(src, sink);
        std::int64_t value = static_cast<std::int64_t>(m) * den - cut;
        if (value <= 0) break;
        auto side = flow.source_side(src);
        std::vector<vertex_t> next;
        for (int v = 0; v < n; ++v)
            if (side[m + v]) next.push_back(v);
        long long e = detail::edges_within(g, next);
        long long sz = static_cast<long long>(next.size());
        if (sz == 0 || e * den <= num * sz) break;  // no strict improvement
        num = e;
        den = sz;
    }
    return Rational(2 * num, den);
}

/// Maximum average degree over all subgraphs.
inline Rational mad(const Graph& g) { return g.order() <= 20 ? mad_exhaustive(g) : mad_flow(g); }

}  // namespace critgraph
