#pragma once

#include <boost/dynamic_bitset.hpp>

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace critgraph {

using vertex_t = int;
using color_t = int;
using Bitset = boost::dynamic_bitset<unsigned long long>;

/// Simple undirected graph on vertices 0..n-1. Immutable once built.
class Graph {
public:
    Graph() = default;
    explicit Graph(int n) : adj_(static_cast<std::size_t>(n)), rows_(static_cast<std::size_t>(n), Bitset(static_cast<std::size_t>(n))) {}

    /// Duplicate edges are merged; self-loops and out-of-range ids throw.
    static Graph from_edges(int n, const std::vector<std::pair<vertex_t, vertex_t>>& edges)
    {
        if (n < 0) throw std::invalid_argument("negative vertex count");
        Graph g(n);
        for (auto [u, v] : edges) {
            if (u < 0 || v < 0 || u >= n || v >= n)
                throw std::invalid_argument("edge endpoint out of range: " + std::to_string(u) + "-" + std::to_string(v));
            if (u == v) throw std::invalid_argument("self-loop at vertex " + std::to_string(u));
            g.rows_[u].set(v);
            g.rows_[v].set(u);
        }
        g.rebuild_lists();
        return g;
    }

    int order() const { return static_cast<int>(adj_.size()); }
    std::size_t size() const { return edge_count_; }
    int degree(vertex_t v) const { return static_cast<int>(adj_[v].size()); }
    const std::vector<vertex_t>& neighbors(vertex_t v) const { return adj_[v]; }
    const Bitset& row(vertex_t v) const { return rows_[v]; }
    bool adjacent(vertex_t u, vertex_t v) const { return rows_[u].test(v); }
    bool contains(vertex_t v) const { return v >= 0 && v < order(); }

    std::vector<std::pair<vertex_t, vertex_t>> edges() const
    {
        std::vector<std::pair<vertex_t, vertex_t>> out;
        out.reserve(edge_count_);
        for (vertex_t u = 0; u < order(); ++u)
            for (vertex_t v : adj_[u])
                if (u < v) out.emplace_back(u, v);
        return out;
    }

    int max_degree() const
    {
        int d = 0;
        for (vertex_t v = 0; v < order(); ++v) d = std::max(d, degree(v));
        return d;
    }

    int min_degree() const
    {
        if (order() == 0) return 0;
        int d = degree(0);
        for (vertex_t v = 1; v < order(); ++v) d = std::min(d, degree(v));
        return d;
    }

    Graph complement() const
    {
        Graph h(order());
        for (vertex_t v = 0; v < order(); ++v) {
            h.rows_[v] = ~rows_[v];
            h.rows_[v].reset(v);
        }
        h.rebuild_lists();
        return h;
    }

    /// Induced subgraph on `keep`, relabelled 0..|keep|-1 in the given order.
    Graph induced(const std::vector<vertex_t>& keep) const
    {
        Graph h(static_cast<int>(keep.size()));
        for (std::size_t i = 0; i < keep.size(); ++i)
            for (std::size_t j = i + 1; j < keep.size(); ++j)
                if (adjacent(keep[i], keep[j])) {
                    h.rows_[i].set(j);
                    h.rows_[j].set(i);
                }
        h.rebuild_lists();
        return h;
    }

    Graph without_edge(vertex_t u, vertex_t v) const
    {
        Graph h = *this;
        h.rows_[u].reset(v);
        h.rows_[v].reset(u);
        h.rebuild_lists();
        return h;
    }

    Graph with_edge(vertex_t u, vertex_t v) const
    {
        if (u == v) throw std::invalid_argument("self-loop");
        Graph h = *this;
        h.rows_[u].set(v);
        h.rows_[v].set(u);
        h.rebuild_lists();
        return h;
    }

    /// Appends one vertex adjacent to `nbrs`.
    Graph with_vertex(const std::vector<vertex_t>& nbrs) const
    {
        auto e = edges();
        int n = order();
        for (vertex_t u : nbrs) e.emplace_back(u, n);
        return from_edges(n + 1, e);
    }

    friend bool operator==(const Graph& a, const Graph& b) { return a.rows_ == b.rows_; }

private:
    void rebuild_lists()
    {
        edge_count_ = 0;
        for (std::size_t v = 0; v < rows_.size(); ++v) {
            adj_[v].clear();
            for (auto u = rows_[v].find_first(); u != Bitset::npos; u = rows_[v].find_next(u))
                adj_[v].push_back(static_cast<vertex_t>(u));
            edge_count_ += adj_[v].size();
        }
        edge_count_ /= 2;
    }

    std::vector<std::vector<vertex_t>> adj_;
    std::vector<Bitset> rows_;
    std::size_t edge_count_ = 0;
};

inline Bitset to_bitset(int n, const std::vector<vertex_t>& vs)
{
    Bitset b(static_cast<std::size_t>(n));
    for (vertex_t v : vs) b.set(v);
    return b;
}

inline std::vector<vertex_t> to_vector(const Bitset& b)
{
    std::vector<vertex_t> out;
    for (auto i = b.find_first(); i != Bitset::npos; i = b.find_next(i)) out.push_back(static_cast<vertex_t>(i));
    return out;
}

/// Number of edges of the complement of G[vs].
inline long long complement_edges_within(const Graph& g, const std::vector<vertex_t>& vs)
{
    long long present = 0;
    for (std::size_t i = 0; i < vs.size(); ++i)
        for (std::size_t j = i + 1; j < vs.size(); ++j)
            if (g.adjacent(vs[i], vs[j])) ++present;
    long long s = static_cast<long long>(vs.size());
    return s * (s - 1) / 2 - present;
}

namespace graphs {

inline Graph complete(int n)
{
    std::vector<std::pair<vertex_t, vertex_t>> e;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) e.emplace_back(i, j);
    return Graph::from_edges(n, e);
}

inline Graph cycle(int n)
{
    std::vector<std::pair<vertex_t, vertex_t>> e;
    for (int i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
    return Graph::from_edges(n, e);
}

inline Graph path(int n)
{
    std::vector<std::pair<vertex_t, vertex_t>> e;
    for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
    return Graph::from_edges(n, e);
}

inline Graph complete_bipartite(int a, int b)
{
    std::vector<std::pair<vertex_t, vertex_t>> e;
    for (int i = 0; i < a; ++i)
        for (int j = 0; j < b; ++j) e.emplace_back(i, a + j);
    return Graph::from_edges(a + b, e);
}

inline Graph petersen()
{
    std::vector<std::pair<vertex_t, vertex_t>> e;
    for (int i = 0; i < 5; ++i) {
        e.emplace_back(i, (i + 1) % 5);
        e.emplace_back(i, i + 5);
        e.emplace_back(5 + i, 5 + (i + 2) % 5);
    }
    return Graph::from_edges(10, e);
}

// Two diamonds sharing apex 0, far tips 3 and 6 joined.
inline Graph moser_spindle()
{
    return Graph::from_edges(7, {{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3},
                                 {0, 4}, {0, 5}, {4, 5}, {4, 6}, {5, 6}, {3, 6}});
}

}  // namespace graphs

}  // namespace critgraph
