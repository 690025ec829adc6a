#pragma once

#include "critgraph/graph.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <vector>

namespace critgraph {

/// Canonical form: the upper-triangle adjacency bits under the labeling
/// that minimises them over an individualisation-refinement search tree.
/// Two graphs are isomorphic iff their forms are equal.
struct CanonicalForm {
    int n = 0;
    std::vector<std::uint64_t> bits;
    friend bool operator==(const CanonicalForm&, const CanonicalForm&) = default;
    friend auto operator<=>(const CanonicalForm&, const CanonicalForm&) = default;
};

struct CanonicalFormHash {
    std::size_t operator()(const CanonicalForm& f) const
    {
        std::uint64_t h = static_cast<std::uint64_t>(f.n) * 0x9E3779B97F4A7C15ULL;
        for (auto w : f.bits) h = (h ^ w) * 0x100000001B3ULL + (h >> 29);
        return static_cast<std::size_t>(h);
    }
};

namespace detail {

class Canonizer {
public:
    explicit Canonizer(const Graph& g) : g_(g), n_(g.order()) {}

    void run()
    {
        std::vector<std::vector<vertex_t>> part(1);
        for (vertex_t v = 0; v < n_; ++v) part[0].push_back(v);
        if (n_ == 0) {
            best_.n = 0;
            have_ = true;
            return;
        }
        search(std::move(part));
    }

    const CanonicalForm& form() const { return best_; }
    const std::vector<vertex_t>& labeling() const { return best_perm_; }  // position -> vertex

private:
    void refine(std::vector<std::vector<vertex_t>>& part) const
    {
        bool changed = true;
        while (changed) {
            changed = false;
            for (std::size_t s = 0; s < part.size() && !changed; ++s) {
                const auto splitter = part[s];
                std::vector<std::vector<vertex_t>> next;
                for (auto& cell : part) {
                    if (cell.size() == 1) {
                        next.push_back(cell);
                        continue;
                    }
                    std::map<int, std::vector<vertex_t>> by;
                    for (vertex_t v : cell) {
                        int c = 0;
                        for (vertex_t w : splitter) c += g_.adjacent(v, w);
                        by[c].push_back(v);
                    }
                    if (by.size() > 1) changed = true;
                    for (auto& [c, vs] : by) next.push_back(std::move(vs));
                }
                part = std::move(next);
            }
        }
    }

    bool twins(vertex_t a, vertex_t b) const
    {
        Bitset x = g_.row(a) ^ g_.row(b);
        x.reset(static_cast<std::size_t>(a));
        x.reset(static_cast<std::size_t>(b));
        return x.none();
    }

    void leaf(const std::vector<std::vector<vertex_t>>& part)
    {
        std::vector<vertex_t> perm;
        for (auto& c : part) perm.push_back(c[0]);
        CanonicalForm f;
        f.n = n_;
        const std::size_t bits = static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_ - 1) / 2;
        f.bits.assign((bits + 63) / 64, 0);
        std::size_t k = 0;
        for (int i = 0; i < n_; ++i)
            for (int j = i + 1; j < n_; ++j, ++k)
                if (g_.adjacent(perm[i], perm[j])) f.bits[k / 64] |= std::uint64_t{1} << (63 - k % 64);
        if (!have_ || f < best_) {
            best_ = std::move(f);
            best_perm_ = std::move(perm);
            have_ = true;
        }
    }

    void search(std::vector<std::vector<vertex_t>> part)
    {
        refine(part);
        std::size_t target = part.size();
        for (std::size_t i = 0; i < part.size(); ++i)
            if (part[i].size() > 1) {
                target = i;
                break;
            }
        if (target == part.size()) {
            leaf(part);
            return;
        }
        std::vector<vertex_t> tried;
        for (vertex_t w : part[target]) {
            // swapping twins is an automorphism fixing everything individualised so far
            bool dup = false;
            for (vertex_t t : tried) dup = dup || twins(t, w);
            if (dup) continue;
            tried.push_back(w);
            auto child = part;
            std::vector<vertex_t> rest;
            for (vertex_t u : part[target])
                if (u != w) rest.push_back(u);
            child[target] = {w};
            child.insert(child.begin() + static_cast<std::ptrdiff_t>(target) + 1, rest);
            search(std::move(child));
        }
    }

    const Graph& g_;
    int n_;
    CanonicalForm best_;
    std::vector<vertex_t> best_perm_;
    bool have_ = false;
};

}  // namespace detail

inline CanonicalForm canonical_form(const Graph& g)
{
    detail::Canonizer c(g);
    c.run();
    return c.form();
}

/// The graph relabeled canonically.
inline Graph canonical_graph(const Graph& g)
{
    detail::Canonizer c(g);
    c.run();
    const auto& perm = c.labeling();
    std::vector<int> pos(static_cast<std::size_t>(g.order()));
    for (std::size_t i = 0; i < perm.size(); ++i) pos[perm[i]] = static_cast<int>(i);
    std::vector<std::pair<vertex_t, vertex_t>> e;
    for (auto [u, v] : g.edges()) e.emplace_back(pos[u], pos[v]);
    return Graph::from_edges(g.order(), e);
}

}  // namespace critgraph
