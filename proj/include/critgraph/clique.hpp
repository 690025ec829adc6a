#pragma once

#include "critgraph/graph.hpp"

#include <algorithm>
#include <vector>

namespace critgraph {

namespace detail {

// Branch and bound with a greedy-coloring bound (Tomita & Seki style).
class CliqueSearch {
public:
    explicit CliqueSearch(const Graph& g) : g_(g) {}

    std::vector<vertex_t> run(const Bitset& candidates)
    {
        best_.clear();
        current_.clear();
        expand(candidates);
        std::sort(best_.begin(), best_.end());
        return best_;
    }

private:
    void expand(Bitset cand)
    {
        std::vector<vertex_t> order;
        std::vector<int> bound;
        color_sort(cand, order, bound);
        for (int i = static_cast<int>(order.size()) - 1; i >= 0; --i) {
            if (current_.size() + static_cast<std::size_t>(bound[i]) <= best_.size()) return;
            vertex_t v = order[i];
            current_.push_back(v);
            Bitset next = cand & g_.row(v);
            if (next.none()) {
                if (current_.size() > best_.size()) best_ = current_;
            } else {
                expand(next);
            }
            current_.pop_back();
            cand.reset(v);
        }
    }

    // Greedy sequential coloring of the candidates; bound[i] is the color
    // class number of order[i], an upper bound on the clique it can extend.
    void color_sort(const Bitset& cand, std::vector<vertex_t>& order, std::vector<int>& bound) const
    {
        Bitset uncolored = cand;
        int color = 0;
        while (uncolored.any()) {
            ++color;
            Bitset q = uncolored;
            while (q.any()) {
                auto v = q.find_first();
                q.reset(v);
                q -= g_.row(static_cast<vertex_t>(v));
                uncolored.reset(v);
                order.push_back(static_cast<vertex_t>(v));
                bound.push_back(color);
            }
        }
    }

    const Graph& g_;
    std::vector<vertex_t> best_;
    std::vector<vertex_t> current_;
};

}  // namespace detail

/// A maximum clique of G[candidates], sorted.
inline std::vector<vertex_t> max_clique(const Graph& g, const Bitset& candidates)
{
    return detail::CliqueSearch(g).run(candidates);
}

inline std::vector<vertex_t> max_clique(const Graph& g)
{
    Bitset all(static_cast<std::size_t>(g.order()));
    all.set();
    return max_clique(g, all);
}

/// Size of the largest clique containing v.
inline int clique_number_at(const Graph& g, vertex_t v)
{
    return 1 + static_cast<int>(max_clique(g, g.row(v)).size());
}

inline int clique_number(const Graph& g) { return static_cast<int>(max_clique(g).size()); }

inline int gap(const Graph& g, vertex_t v) { return g.degree(v) + 1 - clique_number_at(g, v); }

/// omega(v) for every vertex.
inline std::vector<int> clique_numbers(const Graph& g)
{
    std::vector<int> out(static_cast<std::size_t>(g.order()));
    for (vertex_t v = 0; v < g.order(); ++v) out[v] = clique_number_at(g, v);
    return out;
}

}  // namespace critgraph
