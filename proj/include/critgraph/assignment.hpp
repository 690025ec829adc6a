#pragma once

#include "critgraph/graph.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace critgraph {

/// One list of colors per vertex, kept sorted and duplicate-free.
class ListAssignment {
public:
    ListAssignment() = default;
    explicit ListAssignment(int n) : lists_(static_cast<std::size_t>(n)) {}
    explicit ListAssignment(std::vector<std::vector<color_t>> lists) : lists_(std::move(lists))
    {
        for (auto& l : lists_) normalize(l);
    }

    static ListAssignment uniform(int n, int size)
    {
        ListAssignment L(n);
        for (auto& l : L.lists_)
            for (int c = 0; c < size; ++c) l.push_back(c);
        return L;
    }

    int order() const { return static_cast<int>(lists_.size()); }
    const std::vector<color_t>& operator[](vertex_t v) const { return lists_[v]; }
    int size(vertex_t v) const { return static_cast<int>(lists_[v].size()); }
    bool has(vertex_t v, color_t c) const { return std::binary_search(lists_[v].begin(), lists_[v].end(), c); }
    int index_of(vertex_t v, color_t c) const
    {
        auto it = std::lower_bound(lists_[v].begin(), lists_[v].end(), c);
        if (it == lists_[v].end() || *it != c) return -1;
        return static_cast<int>(it - lists_[v].begin());
    }
    int max_size() const
    {
        int m = 0;
        for (auto& l : lists_) m = std::max(m, static_cast<int>(l.size()));
        return m;
    }

    void set(vertex_t v, std::vector<color_t> colors)
    {
        normalize(colors);
        lists_[v] = std::move(colors);
    }

    ListAssignment induced(const std::vector<vertex_t>& keep) const
    {
        ListAssignment out(static_cast<int>(keep.size()));
        for (std::size_t i = 0; i < keep.size(); ++i) out.lists_[i] = lists_[keep[i]];
        return out;
    }

    friend bool operator==(const ListAssignment& a, const ListAssignment& b) { return a.lists_ == b.lists_; }

private:
    static void normalize(std::vector<color_t>& l)
    {
        for (color_t c : l)
            if (c < 0) throw std::invalid_argument("negative color id " + std::to_string(c));
        std::sort(l.begin(), l.end());
        l.erase(std::unique(l.begin(), l.end()), l.end());
    }

    std::vector<std::vector<color_t>> lists_;
};

inline int save(const Graph& g, const ListAssignment& L, vertex_t v) { return g.degree(v) + 1 - L.size(v); }

/// Lists plus, for every edge uv, a partial matching between L(u) and L(v).
///
/// Matchings are stored per edge under the key (min, max) as pairs
/// (color of min endpoint, color of max endpoint). For fast lookup the
/// constructor also builds, per arc u->v, the partner index in L(v) of each
/// color index of L(u) (-1 when unmatched).
class CorrespondenceAssignment {
public:
    using Pairs = std::vector<std::pair<color_t, color_t>>;

    CorrespondenceAssignment(const Graph& g, ListAssignment L, std::map<std::pair<vertex_t, vertex_t>, Pairs> matchings)
        : L_(std::move(L)), matchings_(std::move(matchings))
    {
        if (L_.order() != g.order()) throw std::invalid_argument("list assignment size does not match graph order");
        for (auto& [key, pairs] : matchings_) {
            auto [u, v] = key;
            if (u >= v || !g.contains(u) || !g.contains(v) || !g.adjacent(u, v))
                throw std::invalid_argument("matching given for non-edge " + std::to_string(u + 1) + "-" + std::to_string(v + 1));
            std::sort(pairs.begin(), pairs.end());
        }
        arcs_.resize(static_cast<std::size_t>(g.order()));
        for (vertex_t u = 0; u < g.order(); ++u) {
            for (vertex_t v : g.neighbors(u)) arcs_[u].push_back(Arc{v, std::vector<int>(L_.size(u), -1)});
        }
        for (auto& [key, pairs] : matchings_) {
            auto [u, v] = key;
            auto& fwd = arc(u, v);
            auto& bwd = arc(v, u);
            for (auto [cu, cv] : pairs) {
                int iu = L_.index_of(u, cu), iv = L_.index_of(v, cv);
                if (iu < 0 || iv < 0)
                    throw std::invalid_argument("matched color not in list on edge " + std::to_string(u + 1) + "-" + std::to_string(v + 1));
                if (fwd[iu] != -1 || bwd[iv] != -1)
                    throw std::invalid_argument("matching is not one-to-one on edge " + std::to_string(u + 1) + "-" + std::to_string(v + 1));
                fwd[iu] = iv;
                bwd[iv] = iu;
            }
        }
    }

    const ListAssignment& lists() const { return L_; }
    const std::map<std::pair<vertex_t, vertex_t>, Pairs>& matchings() const { return matchings_; }

    /// Index in L(v) matched to color index `iu` of L(u) across edge uv, or -1.
    int partner(vertex_t u, vertex_t v, int iu) const { return arc(u, v)[iu]; }

    /// Partner table of the arc from u to its i-th neighbour (neighbour order
    /// of the graph the assignment was built on).
    const std::vector<int>& partners_at(vertex_t u, std::size_t i) const { return arcs_[u][i].partner; }

    /// Number of colors of L(u) covered by M_uv.
    int covered(vertex_t u, vertex_t v) const
    {
        const auto& a = arc(u, v);
        return static_cast<int>(std::count_if(a.begin(), a.end(), [](int x) { return x >= 0; }));
    }

    /// Every edge matching saturates L(u) or L(v).
    bool is_total(const Graph& g) const
    {
        for (auto [u, v] : g.edges())
            if (covered(u, v) < L_.size(u) && covered(v, u) < L_.size(v)) return false;
        return true;
    }

private:
    struct Arc {
        vertex_t to;
        std::vector<int> partner;
    };

    const std::vector<int>& arc(vertex_t u, vertex_t v) const
    {
        for (const auto& a : arcs_[u])
            if (a.to == v) return a.partner;
        throw std::out_of_range("no edge " + std::to_string(u) + "-" + std::to_string(v));
    }
    std::vector<int>& arc(vertex_t u, vertex_t v)
    {
        return const_cast<std::vector<int>&>(static_cast<const CorrespondenceAssignment*>(this)->arc(u, v));
    }

    ListAssignment L_;
    std::map<std::pair<vertex_t, vertex_t>, Pairs> matchings_;
    std::vector<std::vector<Arc>> arcs_;
};

/// Matches equal colors on every edge, then pairs leftover colors in
/// increasing id order until the smaller side is saturated.
inline CorrespondenceAssignment identity_correspondence(const Graph& g, const ListAssignment& L)
{
    std::map<std::pair<vertex_t, vertex_t>, CorrespondenceAssignment::Pairs> m;
    for (auto [u, v] : g.edges()) {
        auto& pairs = m[{u, v}];
        std::vector<color_t> left_u, left_v;
        for (color_t c : L[u]) {
            if (L.has(v, c))
                pairs.emplace_back(c, c);
            else
                left_u.push_back(c);
        }
        for (color_t c : L[v])
            if (!L.has(u, c)) left_v.push_back(c);
        for (std::size_t i = 0; i < std::min(left_u.size(), left_v.size()); ++i) pairs.emplace_back(left_u[i], left_v[i]);
    }
    return CorrespondenceAssignment(g, L, std::move(m));
}

}  // namespace critgraph
