#pragma once

#include "critgraph/assignment.hpp"
#include "critgraph/classify.hpp"
#include "critgraph/graph.hpp"
#include "critgraph/matching.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace critgraph {

struct DenseWitness {
    vertex_t host = 0;
    std::vector<vertex_t> H;
    Matching M;  // in the complement of G[H]
    long long lhs = 0;  // |E(complement of G[H])|
    long long rhs = 0;  // |M|(|H| - |M|) - sum of Save over H
    std::string source;  // which candidate produced it
};

namespace detail {

inline long long save_sum(const Graph& g, const ListAssignment& L, const std::vector<vertex_t>& H)
{
    long long s = 0;
    for (vertex_t u : H) s += save(g, L, u);
    return s;
}

inline bool matching_in_complement(const Graph& g, const std::vector<vertex_t>& H, const Matching& M)
{
    std::vector<char> inH(static_cast<std::size_t>(g.order()), 0), used(static_cast<std::size_t>(g.order()), 0);
    for (vertex_t u : H) inH[u] = 1;
    for (auto [a, b] : M.edges) {
        if (!g.contains(a) || !g.contains(b) || a == b || !inH[a] || !inH[b]) return false;
        if (g.adjacent(a, b) || used[a] || used[b]) return false;
        used[a] = used[b] = 1;
    }
    return true;
}

}  // namespace detail

/// |E(complement of G[H])| < |M|(|H| - |M|) - sum_{u in H} Save(u).
inline bool is_dense(const Graph& g, const ListAssignment& L, const std::vector<vertex_t>& H, const Matching& M,
                     long long* lhs_out = nullptr, long long* rhs_out = nullptr)
{
    if (!detail::matching_in_complement(g, H, M)) throw std::invalid_argument("M is not a matching in the complement of G[H]");
    const long long h = static_cast<long long>(H.size()), m = static_cast<long long>(M.size());
    long long lhs = complement_edges_within(g, H);
    long long rhs = m * (h - m) - detail::save_sum(g, L, H);
    if (lhs_out) *lhs_out = lhs;
    if (rhs_out) *rhs_out = rhs;
    return lhs < rhs;
}

enum class DenseMode { Heuristic, Exhaustive };

inline Matching complement_max_matching(const Graph& g, const std::vector<vertex_t>& H)
{
    Graph sub = g.induced(H).complement();
    Matching local = max_matching(sub), out;
    for (auto [a, b] : local.edges) out.edges.emplace_back(std::min(H[a], H[b]), std::max(H[a], H[b]));
    return out;
}

/// Per-candidate log line: which H was tried and the matching size found.
struct DenseProbe {
    std::string source;
    std::size_t h = 0;
    std::size_t matching = 0;
    long long lhs = 0, rhs = 0;
};

namespace detail {

inline std::optional<DenseWitness> try_candidate(const Graph& g, const ListAssignment& L, vertex_t v, std::vector<vertex_t> H,
                                                 const std::string& source, std::vector<DenseProbe>* log)
{
    std::sort(H.begin(), H.end());
    Matching M = complement_max_matching(g, H);
    long long lhs = 0, rhs = 0;
    bool dense = is_dense(g, L, H, M, &lhs, &rhs);
    if (log) log->push_back({source, H.size(), M.size(), lhs, rhs});
    if (!dense) return std::nullopt;
    return DenseWitness{v, std::move(H), std::move(M), lhs, rhs, source};
}

// Exhaustive search over all subsets of N(v) (at most 14 vertices). The
// maximum matching of the complement of every subset comes from one DP
// table, so the whole search costs O(2^d d).
inline std::optional<DenseWitness> exhaustive_dense(const Graph& g, const ListAssignment& L, vertex_t v,
                                                    std::vector<DenseProbe>* log)
{
    std::vector<vertex_t> nb = g.neighbors(v);
    const int d = static_cast<int>(nb.size());
    if (d > 14) throw precondition_error("exhaustive dense search limited to degree 14");
    std::vector<std::uint32_t> non(static_cast<std::size_t>(d), 0);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            if (i != j && !g.adjacent(nb[i], nb[j])) non[i] |= 1u << j;
    std::vector<int> save_of(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) save_of[i] = save(g, L, nb[i]);

    const std::uint32_t full = d == 0 ? 0 : (1u << d) - 1;
    std::vector<std::int8_t> mm(static_cast<std::size_t>(full) + 1, 0);
    std::vector<std::int16_t> cedges(static_cast<std::size_t>(full) + 1, 0);
    std::vector<std::int32_t> ssum(static_cast<std::size_t>(full) + 1, 0);
    for (std::uint32_t s = 1; s <= full; ++s) {
        int i = __builtin_ctz(s);
        std::uint32_t rest = s & (s - 1);
        cedges[s] = static_cast<std::int16_t>(cedges[rest] + __builtin_popcount(non[i] & rest));
        ssum[s] = ssum[rest] + save_of[i];
        int best = mm[rest];
        for (std::uint32_t c = non[i] & rest; c; c &= c - 1) {
            int j = __builtin_ctz(c);
            best = std::max(best, 1 + mm[rest & ~(1u << j)]);
        }
        mm[s] = static_cast<std::int8_t>(best);
    }
    for (std::uint32_t s = 1; s <= full; ++s) {
        long long h = __builtin_popcount(s), m = mm[s];
        long long lhs = cedges[s], rhs = m * (h - m) - ssum[s];
        if (lhs >= rhs) continue;
        DenseWitness w;
        w.host = v;
        w.source = "exhaustive";
        w.lhs = lhs;
        w.rhs = rhs;
        for (int i = 0; i < d; ++i)
            if (s >> i & 1u) w.H.push_back(nb[i]);
        // recover a maximum matching by walking the DP
        for (std::uint32_t r = s; r;) {
            int i = __builtin_ctz(r);
            std::uint32_t rest = r & (r - 1);
            if (mm[r] == mm[rest]) {
                r = rest;
                continue;
            }
            for (std::uint32_t c = non[i] & rest; c; c &= c - 1) {
                int j = __builtin_ctz(c);
                if (mm[r] == 1 + mm[rest & ~(1u << j)]) {
                    w.M.edges.emplace_back(std::min(nb[i], nb[j]), std::max(nb[i], nb[j]));
                    r = rest & ~(1u << j);
                    break;
                }
            }
        }
        std::sort(w.M.edges.begin(), w.M.edges.end());
        std::sort(w.H.begin(), w.H.end());
        if (log) log->push_back({"exhaustive", w.H.size(), w.M.size(), lhs, rhs});
        return w;
    }
    if (log) log->push_back({"exhaustive", static_cast<std::size_t>(d), static_cast<std::size_t>(full ? mm[full] : 0), 0, 0});
    return std::nullopt;
}

}  // namespace detail

/// Heuristic mode tries H = N(v), E(v), E_sigma(v), each with a maximum
/// matching of its complement; exhaustive mode tries every H within N(v).
inline std::optional<DenseWitness> find_dense_subgraph(const Analysis& a, vertex_t v, DenseMode mode = DenseMode::Heuristic,
                                                       std::vector<DenseProbe>* log = nullptr)
{
    const Graph& g = a.graph();
    const ListAssignment& L = a.lists();
    if (mode == DenseMode::Exhaustive) return detail::exhaustive_dense(g, L, v, log);
    if (auto w = detail::try_candidate(g, L, v, g.neighbors(v), "neighborhood", log)) return w;
    auto np = partition_neighbors(a, v);
    if (auto w = detail::try_candidate(g, L, v, np.egal, "egalitarian", log)) return w;
    return detail::try_candidate(g, L, v, np.egal_sigma, "sigma_egalitarian", log);
}

struct DenseScan {
    bool none = true;
    std::optional<DenseWitness> witness;
    std::vector<std::vector<DenseProbe>> log;  // per vertex
};

inline DenseScan has_no_dense_subgraph(const Analysis& a, DenseMode mode = DenseMode::Heuristic)
{
    DenseScan scan;
    scan.log.resize(static_cast<std::size_t>(a.graph().order()));
    for (vertex_t v = 0; v < a.graph().order(); ++v) {
        auto w = find_dense_subgraph(a, v, mode, &scan.log[v]);
        if (w && scan.none) {
            scan.none = false;
            scan.witness = std::move(w);
        }
    }
    return scan;
}

}  // namespace critgraph
