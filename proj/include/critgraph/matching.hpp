#pragma once

#include "critgraph/graph.hpp"

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/max_cardinality_matching.hpp>

#include <algorithm>
#include <stdexcept>
#include <utility>
#include <vector>

namespace critgraph {

/// Pairwise-disjoint vertex pairs (u < v), sorted.
struct Matching {
    std::vector<std::pair<vertex_t, vertex_t>> edges;

    std::size_t size() const { return edges.size(); }

    bool valid_in(const Graph& host) const
    {
        std::vector<char> used(static_cast<std::size_t>(host.order()), 0);
        for (auto [u, v] : edges) {
            if (!host.contains(u) || !host.contains(v) || u == v || !host.adjacent(u, v)) return false;
            if (used[u] || used[v]) return false;
            used[u] = used[v] = 1;
        }
        return true;
    }
};

/// Maximum-cardinality matching (Edmonds' blossom algorithm).
inline Matching max_matching(const Graph& g)
{
    using BG = boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS>;
    Matching m;
    if (g.order() == 0) return m;
    BG bg(static_cast<std::size_t>(g.order()));
    for (auto [u, v] : g.edges()) boost::add_edge(static_cast<std::size_t>(u), static_cast<std::size_t>(v), bg);
    std::vector<boost::graph_traits<BG>::vertex_descriptor> mate(static_cast<std::size_t>(g.order()));
    boost::edmonds_maximum_cardinality_matching(bg, &mate[0]);
    const auto null = boost::graph_traits<BG>::null_vertex();
    for (std::size_t u = 0; u < mate.size(); ++u)
        if (mate[u] != null && u < mate[u]) m.edges.emplace_back(static_cast<vertex_t>(u), static_cast<vertex_t>(mate[u]));
    return m;
}

}  // namespace critgraph
