#pragma once

#include "critgraph/canonical.hpp"
#include "critgraph/clique.hpp"
#include "critgraph/coloring.hpp"
#include "critgraph/density.hpp"
#include "critgraph/graph.hpp"
#include "critgraph/numeric.hpp"

#include <boost/multiprecision/mpfr.hpp>

#include <optional>
#include <unordered_set>
#include <vector>

namespace critgraph {

/// Thrown when an exact solver runs out of its node budget.
class budget_exhausted : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

// true iff g is c-colorable; throws on budget exhaustion
inline bool colorable(const Graph& g, int c, std::uint64_t budget, std::vector<color_t>* witness = nullptr)
{
    auto r = k_color(g, c, budget);
    if (r.status == SolveStatus::BudgetExhausted) throw budget_exhausted("coloring budget exhausted");
    if (r.status == SolveStatus::Colored && witness) *witness = r.coloring;
    return r.status == SolveStatus::Colored;
}

}  // namespace detail

struct CriticalityCertificate {
    Graph graph{0};
    int k = 0;
    std::vector<color_t> k_coloring;
    std::vector<std::pair<std::pair<vertex_t, vertex_t>, std::vector<color_t>>> edge_deleted;  // (k-1)-colorings of G - e
};

/// chi(G) = k and G - e is (k-1)-colorable for every edge e. Isolated
/// vertices are rejected for k >= 2 since deleting one leaves chi unchanged.
inline std::optional<CriticalityCertificate> criticality_certificate(const Graph& g, int k,
                                                                     std::uint64_t budget = default_node_budget)
{
    if (k < 1 || g.order() == 0) return std::nullopt;
    if (k == 1) {
        if (g.order() != 1) return std::nullopt;
        return CriticalityCertificate{g, 1, {0}, {}};
    }
    if (g.min_degree() < k - 1) return std::nullopt;
    CriticalityCertificate cert{g, k, {}, {}};
    if (!detail::colorable(g, k, budget, &cert.k_coloring)) return std::nullopt;
    if (detail::colorable(g, k - 1, budget)) return std::nullopt;
    for (auto [u, v] : g.edges()) {
        std::vector<color_t> w;
        if (!detail::colorable(g.without_edge(u, v), k - 1, budget, &w)) return std::nullopt;
        cert.edge_deleted.push_back({{u, v}, std::move(w)});
    }
    return cert;
}

inline bool is_k_critical(const Graph& g, int k, std::uint64_t budget = default_node_budget)
{
    return criticality_certificate(g, k, budget).has_value();
}

/// Not L-colorable, while every proper induced subgraph is; single-vertex
/// deletions suffice because colorability passes to induced subgraphs.
inline bool is_L_critical(const Graph& g, const ListAssignment& L, std::uint64_t budget = default_node_budget)
{
    auto whole = list_color(g, L, budget);
    if (whole.status == SolveStatus::BudgetExhausted) throw budget_exhausted("list coloring budget exhausted");
    if (whole.status == SolveStatus::Colored) return false;
    for (vertex_t v = 0; v < g.order(); ++v) {
        std::vector<vertex_t> keep;
        for (vertex_t u = 0; u < g.order(); ++u)
            if (u != v) keep.push_back(u);
        auto r = list_color(g.induced(keep), L.induced(keep), budget);
        if (r.status == SolveStatus::BudgetExhausted) throw budget_exhausted("list coloring budget exhausted");
        if (r.status != SolveStatus::Colored) return false;
    }
    return true;
}

// ---- Ore composition ----------------------------------------------------

/// Deletes xy from g1, splits z of g2 into z1 (joined to `to_x`) and z2
/// (joined to the rest of N(z)), and identifies x with z1 and y with z2.
/// Vertices of g1 keep their ids; g2 - z follows in increasing order.
inline Graph ore_compose(const Graph& g1, const Graph& g2, vertex_t x, vertex_t y, vertex_t z, const std::vector<vertex_t>& to_x)
{
    if (!g1.contains(x) || !g1.contains(y) || !g1.adjacent(x, y)) throw precondition_error("xy is not an edge of the first graph");
    if (!g2.contains(z)) throw precondition_error("z is not a vertex of the second graph");
    std::vector<char> side(static_cast<std::size_t>(g2.order()), 0);
    for (vertex_t w : to_x) {
        if (!g2.contains(w) || !g2.adjacent(z, w)) throw precondition_error("split part must be neighbours of z");
        side[w] = 1;
    }
    const std::size_t nx = std::count(side.begin(), side.end(), 1);
    if (nx == 0 || nx == static_cast<std::size_t>(g2.degree(z))) throw precondition_error("split must leave both sides nonempty");

    std::vector<vertex_t> map(static_cast<std::size_t>(g2.order()), -1);
    int next = g1.order();
    for (vertex_t w = 0; w < g2.order(); ++w)
        if (w != z) map[w] = next++;
    std::vector<std::pair<vertex_t, vertex_t>> e;
    for (auto [a, b] : g1.edges())
        if (!((a == x && b == y) || (a == y && b == x))) e.emplace_back(a, b);
    for (auto [a, b] : g2.edges()) {
        if (a == z || b == z) {
            vertex_t w = a == z ? b : a;
            e.emplace_back(side[w] ? x : y, map[w]);
        } else {
            e.emplace_back(map[a], map[b]);
        }
    }
    return Graph::from_edges(next, e);
}

struct OreResult {
    Graph graph{0};
    std::vector<vertex_t> to_x;
};

/// Tries splits of N(z) in a fixed order until the composition is
/// k-critical.
inline std::optional<OreResult> ore_compose_critical(const Graph& g1, const Graph& g2, vertex_t x, vertex_t y, vertex_t z, int k,
                                                     std::uint64_t budget = default_node_budget)
{
    const auto& nb = g2.neighbors(z);
    const int d = static_cast<int>(nb.size());
    if (d < 2 || d > 20) throw precondition_error("split enumeration needs 2 <= d(z) <= 20");
    for (std::uint32_t mask = 1; mask + 1 < (1u << d); ++mask) {
        std::vector<vertex_t> to_x;
        for (int i = 0; i < d; ++i)
            if (mask >> i & 1u) to_x.push_back(nb[i]);
        Graph h = ore_compose(g1, g2, x, y, z, to_x);
        if (is_k_critical(h, k, budget)) return OreResult{std::move(h), std::move(to_x)};
    }
    return std::nullopt;
}

/// K_k, then K_k composed onto the previous member, `count` graphs in all.
inline std::vector<Graph> ore_chain(int k, int count)
{
    std::vector<Graph> out;
    if (count <= 0) return out;
    out.push_back(graphs::complete(k));
    while (static_cast<int>(out.size()) < count) {
        const Graph& prev = out.back();
        auto e = prev.edges().front();
        auto r = ore_compose_critical(graphs::complete(k), prev, 0, 1, e.first, k);
        if (!r) throw std::logic_error("no critical split found");
        out.push_back(std::move(r->graph));
    }
    return out;
}

// ---- density bounds -----------------------------------------------------

/// k - 2/(k-1) - (k^2 - 3k)/(n(k-1)).
inline Rational ky_bound(int k, int n)
{
    return Rational(k) - Rational(2, k - 1) - Rational(static_cast<long long>(k) * k - 3LL * k, static_cast<long long>(n) * (k - 1));
}

/// ad(G) minus the k-critical density lower bound; non-negative on every
/// k-critical graph.
inline Rational verify_ky_bound(const Graph& g, int k, std::uint64_t budget = default_node_budget)
{
    if (k < 2) throw precondition_error("k must be at least 2");
    if (!is_k_critical(g, k, budget)) throw precondition_error("graph is not k-critical");
    return average_degree(g) - ky_bound(k, g.order());
}

inline Real log10_power(const Real& x) { return x > 1 ? boost::multiprecision::pow(boost::multiprecision::log(x), 10) : Real(0); }

struct CliqueDensityCheck {
    Rational average_degree;
    Rational bound;    // (1 + eps)(k - 1) - eps * omega_cap - 1
    bool holds = false;
    int omega = 0;
    bool omega_hypothesis = false;  // omega_cap <= k - log^10 k
};

/// ad(G) > (1 + eps)(k - 1) - eps * omega_cap - 1 for k-critical G with
/// clique number at most omega_cap.
inline CliqueDensityCheck verify_clique_density_bound(const Graph& g, int k, int omega_cap, const Rational& eps,
                                                      std::uint64_t budget = default_node_budget)
{
    if (!is_k_critical(g, k, budget)) throw precondition_error("graph is not k-critical");
    CliqueDensityCheck c;
    c.omega = clique_number(g);
    if (c.omega > omega_cap) throw precondition_error("clique number exceeds the cap");
    c.average_degree = average_degree(g);
    c.bound = (1 + eps) * (k - 1) - eps * omega_cap - 1;
    c.holds = c.average_degree > c.bound;
    c.omega_hypothesis = Real(omega_cap) <= Real(k) - log10_power(Real(k));
    return c;
}

struct ChromaticMadCheck {
    int chi = 0;
    Rational mad;
    int omega = 0;
    BigInt bound;  // ceil((1 - eps)(mad + 1) + eps * omega)
    bool holds = false;
    bool omega_hypothesis = false;  // omega <= mad - log^10 mad
};

/// chi(G) <= ceil((1 - eps)(mad(G) + 1) + eps * omega(G)).
inline ChromaticMadCheck verify_chromatic_mad_bound(const Graph& g, const Rational& eps, std::uint64_t budget = default_node_budget)
{
    ChromaticMadCheck c;
    auto chi = chromatic_number(g, budget);
    if (chi.status == SolveStatus::BudgetExhausted) throw budget_exhausted("chromatic number budget exhausted");
    c.chi = chi.chi;
    c.mad = mad(g);
    c.omega = clique_number(g);
    c.bound = ceil((1 - eps) * (c.mad + 1) + eps * c.omega);
    c.holds = BigInt(c.chi) <= c.bound;
    Real m = rational_to<Real>(c.mad);
    c.omega_hypothesis = Real(c.omega) <= m - log10_power(m);
    return c;
}

// ---- enumeration --------------------------------------------------------

/// All graphs on n vertices up to isomorphism, built by adding one vertex
/// in every possible way to each graph on n - 1 vertices.
inline std::vector<Graph> extend_all(const std::vector<Graph>& smaller)
{
    std::unordered_set<CanonicalForm, CanonicalFormHash> seen;
    std::vector<Graph> out;
    for (const Graph& h : smaller) {
        const int m = h.order();
        for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
            std::vector<vertex_t> nb;
            for (int i = 0; i < m; ++i)
                if (mask >> i & 1u) nb.push_back(i);
            Graph g = h.with_vertex(nb);
            auto f = canonical_form(g);
            if (seen.insert(f).second) out.push_back(canonical_graph(g));
        }
    }
    return out;
}

inline std::vector<Graph> all_graphs(int n)
{
    std::vector<Graph> level{Graph(0)};
    for (int i = 1; i <= n; ++i) level = extend_all(level);
    return level;
}

/// Every k-critical graph on at most n_max vertices up to isomorphism, with
/// certificates, in order of vertex count.
inline std::vector<CriticalityCertificate> enumerate_k_critical(int k, int n_max, std::uint64_t budget = default_node_budget)
{
    if (k < 1 || n_max < 0 || n_max > 10) throw precondition_error("enumeration supports 1 <= k and n_max <= 10");
    std::vector<CriticalityCertificate> out;
    std::vector<Graph> level{Graph(0)};
    for (int n = 1; n <= n_max; ++n) {
        if (n < n_max) {
            level = extend_all(level);
            for (const Graph& g : level)
                if (auto c = criticality_certificate(g, k, budget)) out.push_back(std::move(*c));
            continue;
        }
        // last level: filter before canonicalising, nothing is stored
        std::unordered_set<CanonicalForm, CanonicalFormHash> seen;
        for (const Graph& h : level)
            for (std::uint32_t mask = 0; mask < (1u << h.order()); ++mask) {
                if (__builtin_popcount(mask) < k - 1) continue;
                std::vector<vertex_t> nb;
                for (int i = 0; i < h.order(); ++i)
                    if (mask >> i & 1u) nb.push_back(i);
                Graph g = h.with_vertex(nb);
                if (g.min_degree() < k - 1) continue;
                auto c = criticality_certificate(g, k, budget);
                if (!c) continue;
                if (!seen.insert(canonical_form(g)).second) continue;
                c->graph = canonical_graph(g);
                // recompute witnesses on the relabeled graph
                out.push_back(std::move(*criticality_certificate(c->graph, k, budget)));
            }
    }
    return out;
}

}  // namespace critgraph
