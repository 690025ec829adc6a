#pragma once

#include "critgraph/assignment.hpp"
#include "critgraph/clique.hpp"
#include "critgraph/graph.hpp"
#include "critgraph/numeric.hpp"
#include "critgraph/params.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

namespace critgraph {

/// c0 + c1 * lambda, where lambda = log^10 k. Keeps charges exact in the
/// rational coefficients so that sums and differences cancel exactly.
struct Affine {
    Rational c0;
    Rational c1;

    Real value(const Real& lambda) const { return rational_to<Real>(c0) + rational_to<Real>(c1) * lambda; }
    double approx(double lambda) const { return to_double(c0) + to_double(c1) * lambda; }

    friend Affine operator+(const Affine& a, const Affine& b) { return {a.c0 + b.c0, a.c1 + b.c1}; }
    friend Affine operator-(const Affine& a, const Affine& b) { return {a.c0 - b.c0, a.c1 - b.c1}; }
    friend Affine operator*(const Rational& s, const Affine& a) { return {s * a.c0, s * a.c1}; }
    friend bool operator==(const Affine& a, const Affine& b) { return a.c0 == b.c0 && a.c1 == b.c1; }
    Affine& operator+=(const Affine& o) { return *this = *this + o; }
    Affine& operator-=(const Affine& o) { return *this = *this - o; }
};

/// -1, 0, +1. Exact when the lambda coefficient vanishes.
inline int sign(const Affine& a, const Real& lambda)
{
    if (a.c1 == 0) return a.c0 > 0 ? 1 : (a.c0 < 0 ? -1 : 0);
    Real v = a.value(lambda);
    return v > 0 ? 1 : (v < 0 ? -1 : 0);
}

/// Parameter-derived reals used by every threshold, computed once.
struct Calibration {
    ParamSet p;
    DerivedConstants dc;
    Real lambda;      // log^10 k
    Real eps, eps1;   // as reals
    Real prio_den;    // (1-K)(1-eps')

    explicit Calibration(const ParamSet& params)
        : p(params), dc(derive_constants(params)), lambda(log_term(params, params.k)),
          eps(rational_to<Real>(params.epsilon)), eps1(rational_to<Real>(params.epsilon_prime)),
          prio_den((1 - dc.K) * (1 - eps1))
    {
    }

    bool c_A_positive() const { return dc.c_A > 0; }

    /// Save + 11 eps' log^10 k.
    Real static_need(int save) const { return Real(save) + 11 * eps1 * lambda; }
    /// (Save + eps' log^10 k) / ((1-K)(1-eps')), the ordering-priority bar.
    Real priority_need(int save) const { return (Real(save) + eps1 * lambda) / prio_den; }
    /// (Save + eps log^10 k) / ((1-K)(1-eps')), the layer bar of the decomposition.
    Real layer_need(int save) const { return (Real(save) + eps * lambda) / prio_den; }
};

/// Per-instance cache of degrees, clique numbers and list sizes.
class Analysis {
public:
    Analysis(const Graph& g, const ListAssignment& L, const ParamSet& p) : g_(g), L_(L), cal_(p)
    {
        if (L.order() != g.order()) throw std::invalid_argument("list assignment size does not match graph order");
        omega_ = clique_numbers(g);
    }

    const Graph& graph() const { return g_; }
    const ListAssignment& lists() const { return L_; }
    const Calibration& cal() const { return cal_; }
    const ParamSet& params() const { return cal_.p; }

    int degree(vertex_t v) const { return g_.degree(v); }
    int omega(vertex_t v) const { return omega_[v]; }
    int gap(vertex_t v) const { return g_.degree(v) + 1 - omega_[v]; }
    int save(vertex_t v) const { return g_.degree(v) + 1 - L_.size(v); }
    int list_size(vertex_t v) const { return L_.size(v); }

private:
    const Graph& g_;
    const ListAssignment& L_;
    Calibration cal_;
    std::vector<int> omega_;
};

struct NeighborPartition {
    std::vector<vertex_t> subserv;            // |L(u)| < (1-delta)|L(v)|
    std::vector<vertex_t> egal;               // [(1-delta)|L(v)|, (1+alpha)|L(v)|)
    std::vector<vertex_t> lordlier;           // >= (1+alpha)|L(v)|
    std::vector<vertex_t> slightly_lordlier;  // >= |L(v)| + alpha Gap(v)
    std::vector<vertex_t> egal_sigma;         // >= (1-sigma)|L(v)|
};

inline NeighborPartition partition_neighbors(const Analysis& a, vertex_t v)
{
    const auto& p = a.params();
    const Rational lv = a.list_size(v);
    const Rational lo = (1 - p.delta) * lv, hi = (1 + p.alpha) * lv;
    const Rational slight = lv + p.alpha * a.gap(v);
    const Rational sig = (1 - p.sigma) * lv;
    NeighborPartition np;
    for (vertex_t u : a.graph().neighbors(v)) {
        const Rational lu = a.list_size(u);
        if (lu < lo)
            np.subserv.push_back(u);
        else if (lu < hi)
            np.egal.push_back(u);
        else
            np.lordlier.push_back(u);
        if (lu >= slight) np.slightly_lordlier.push_back(u);
        if (lu >= sig) np.egal_sigma.push_back(u);
    }
    return np;
}

/// ch(v) = Save - 2 eps Gap + eps log^10 k + 7 eps (k - |L(v)|), exact in lambda.
inline Affine charge_form(const Analysis& a, vertex_t v)
{
    const auto& p = a.params();
    if (a.list_size(v) > p.k)
        throw precondition_error("charge needs |L(v)| <= k at vertex " + std::to_string(v + 1));
    return {Rational(a.save(v)) - 2 * p.epsilon * a.gap(v) + 7 * p.epsilon * (p.k - a.list_size(v)), p.epsilon};
}

inline Real charge(const Analysis& a, vertex_t v) { return charge_form(a, v).value(a.cal().lambda); }

// ---- ways to save -------------------------------------------------------

namespace detail {
inline void require_positive(const Real& c, const char* name)
{
    if (!(c > 0)) throw precondition_error(std::string(name) + " is not positive for these parameters");
}
}  // namespace detail

inline bool is_aberrant(const Analysis& a, vertex_t v, const NeighborPartition& np)
{
    detail::require_positive(a.cal().dc.c_A, "c_A");
    return Real(static_cast<long>(np.lordlier.size())) >= a.cal().static_need(a.save(v)) / a.cal().dc.c_A;
}

inline bool is_slightly_aberrant(const Analysis& a, vertex_t v, const NeighborPartition& np)
{
    detail::require_positive(a.cal().dc.c_A, "c_A");
    if (a.gap(v) == 0) return false;
    Real need = Real(a.degree(v)) / Real(a.gap(v)) * a.cal().static_need(a.save(v)) / a.cal().dc.c_A;
    return Real(static_cast<long>(np.slightly_lordlier.size())) >= need;
}

inline bool is_egalitarian_sparse(const Analysis& a, vertex_t v, const NeighborPartition& np)
{
    detail::require_positive(a.cal().dc.c_ES, "c_ES");
    long long sparse = complement_edges_within(a.graph(), np.egal);
    return Real(sparse) >= Real(a.degree(v)) * a.cal().static_need(a.save(v)) / a.cal().dc.c_ES;
}

struct Bipartition {
    std::vector<vertex_t> A;
    std::vector<vertex_t> B;
};

enum class BipartitionRecipe {
    EgalitarianSet,  // B = E(v); optimal since the A-condition is monotone in B
    MaxClique,       // B = a maximum clique of G[N(v) \ lordlier(v)], restricted to E(v)
    Exhaustive,      // every B within E(v); |N(v)| <= 14
};

/// (delta - eps')/(1 - eps') - 15 delta / 16.
inline Rational bipartition_slack(const ParamSet& p)
{
    return (p.delta - p.epsilon_prime) / (1 - p.epsilon_prime) - 15 * p.delta / 16;
}

namespace detail {

inline std::vector<vertex_t> qualifying_A(const Analysis& a, vertex_t v, const NeighborPartition& np,
                                          const std::vector<vertex_t>& B, const Rational& need)
{
    std::vector<vertex_t> sigma_sorted = np.egal_sigma;
    std::sort(sigma_sorted.begin(), sigma_sorted.end());
    std::vector<vertex_t> A;
    for (vertex_t u : np.subserv) {
        if (!std::binary_search(sigma_sorted.begin(), sigma_sorted.end(), u)) continue;
        long long non = 0;
        for (vertex_t b : B)
            if (!a.graph().adjacent(u, b)) ++non;
        if (Rational(non) >= need) A.push_back(u);
    }
    (void)v;
    return A;
}

}  // namespace detail

/// Half-egalitarian bipartition maximising |A| under the chosen recipe;
/// empty when A would be empty or the required non-neighbour count is not
/// positive.
inline std::optional<Bipartition> find_half_egalitarian_bipartition(const Analysis& a, vertex_t v, const NeighborPartition& np,
                                                                    BipartitionRecipe recipe = BipartitionRecipe::EgalitarianSet)
{
    const Rational t = bipartition_slack(a.params());
    if (t <= 0) return std::nullopt;
    const Rational need = t * a.degree(v);
    Bipartition best;
    switch (recipe) {
    case BipartitionRecipe::EgalitarianSet:
        best.B = np.egal;
        best.A = detail::qualifying_A(a, v, np, best.B, need);
        break;
    case BipartitionRecipe::MaxClique: {
        Bitset cand(static_cast<std::size_t>(a.graph().order()));
        for (vertex_t u : a.graph().neighbors(v)) cand.set(u);
        for (vertex_t u : np.lordlier) cand.reset(u);
        auto clique = max_clique(a.graph(), cand);
        std::vector<vertex_t> egal_sorted = np.egal;
        std::sort(egal_sorted.begin(), egal_sorted.end());
        for (vertex_t u : clique)
            if (std::binary_search(egal_sorted.begin(), egal_sorted.end(), u)) best.B.push_back(u);
        best.A = detail::qualifying_A(a, v, np, best.B, need);
        break;
    }
    case BipartitionRecipe::Exhaustive: {
        if (a.degree(v) > 14) throw precondition_error("exhaustive bipartition search limited to degree 14");
        const auto& E = np.egal;
        for (unsigned mask = 0; mask < (1u << E.size()); ++mask) {
            std::vector<vertex_t> B;
            for (std::size_t i = 0; i < E.size(); ++i)
                if (mask >> i & 1u) B.push_back(E[i]);
            auto A = detail::qualifying_A(a, v, np, B, need);
            if (A.size() > best.A.size() || (mask == 0 && best.A.empty())) best = {std::move(A), std::move(B)};
        }
        break;
    }
    }
    if (best.A.empty()) return std::nullopt;
    return best;
}

/// Checks the three clauses of a half-egalitarian bipartition directly.
inline bool is_half_egalitarian_bipartition(const Analysis& a, vertex_t v, const NeighborPartition& np, const Bipartition& w)
{
    auto in = [](const std::vector<vertex_t>& s, vertex_t x) { return std::find(s.begin(), s.end(), x) != s.end(); };
    for (vertex_t b : w.B)
        if (!in(np.egal, b) || in(w.A, b)) return false;
    const Rational need = bipartition_slack(a.params()) * a.degree(v);
    for (vertex_t u : w.A) {
        if (!in(np.egal_sigma, u) || !in(np.subserv, u)) return false;
        long long non = 0;
        for (vertex_t b : w.B)
            if (!a.graph().adjacent(u, b)) ++non;
        if (Rational(non) < need) return false;
    }
    return true;
}

inline std::optional<Bipartition> bipartite_sparse_witness(const Analysis& a, vertex_t v, const NeighborPartition& np,
                                                           BipartitionRecipe recipe = BipartitionRecipe::EgalitarianSet)
{
    detail::require_positive(a.cal().dc.c_BS, "c_BS");
    auto w = find_half_egalitarian_bipartition(a, v, np, recipe);
    if (!w) return std::nullopt;
    if (Real(static_cast<long>(w->A.size())) >= a.cal().static_need(a.save(v)) / a.cal().dc.c_BS) return w;
    return std::nullopt;
}

inline bool is_bipartite_sparse(const Analysis& a, vertex_t v, const NeighborPartition& np)
{
    return bipartite_sparse_witness(a, v, np).has_value();
}

/// Orderings are rank vectors: u precedes v iff rank[u] < rank[v].
using Ordering = std::vector<int>;

inline long long later_neighbors(const Analysis& a, vertex_t v, const Ordering& rank)
{
    long long c = 0;
    for (vertex_t u : a.graph().neighbors(v))
        if (rank[v] < rank[u]) ++c;
    return c;
}

inline bool is_prioritized(const Analysis& a, vertex_t v, const std::optional<Ordering>& rank)
{
    if (!rank) throw precondition_error("is_prioritized needs an ordering");
    if (static_cast<int>(rank->size()) != a.graph().order()) throw precondition_error("ordering size does not match graph");
    return Real(later_neighbors(a, v, *rank)) >= a.cal().priority_need(a.save(v));
}

// ---- discharging classes ------------------------------------------------

inline bool heavy_from(const Affine& ch, int gap, const ParamSet& p, const Real& lambda)
{
    return sign(ch - Affine{36 * p.epsilon / p.delta * gap, 0}, lambda) >= 0;
}

inline bool extremely_heavy_from(const Affine& ch, int degree, const ParamSet& p, const Real& lambda)
{
    return sign(ch - Affine{9 * p.epsilon * degree, 0}, lambda) >= 0;
}

inline bool is_heavy(const Analysis& a, vertex_t v)
{
    return heavy_from(charge_form(a, v), a.gap(v), a.params(), a.cal().lambda);
}

inline bool is_extremely_heavy(const Analysis& a, vertex_t v)
{
    return extremely_heavy_from(charge_form(a, v), a.degree(v), a.params(), a.cal().lambda);
}

inline bool is_very_lordly(const Analysis& a, vertex_t v, const NeighborPartition& np)
{
    const auto& p = a.params();
    Rational g = a.gap(v);
    return g >= 3 * p.delta / 4 * a.degree(v) && Rational(static_cast<long>(np.subserv.size())) > g / 4;
}

/// Save threshold of a sponsoring neighbour, per unit of Gap(v):
/// eps(5/2 - alpha) / (delta/(36+2delta) - eps).
inline Rational sponsor_save_factor(const ParamSet& p)
{
    return p.epsilon * (Rational(5, 2) - p.alpha) / (p.delta / (36 + 2 * p.delta) - p.epsilon);
}

inline bool is_sponsoring_neighbor(const Analysis& a, vertex_t v, vertex_t u)
{
    const auto& p = a.params();
    if (!is_heavy(a, u)) return false;
    if (Rational(a.save(u)) < sponsor_save_factor(p) * a.gap(v)) return false;
    return Rational(a.degree(u)) <= (1 + p.alpha * p.delta / 4) / (1 - p.epsilon_prime) * a.degree(v);
}

inline bool is_sponsored(const Analysis& a, vertex_t v)
{
    long long count = 0;
    for (vertex_t u : a.graph().neighbors(v))
        if (is_sponsoring_neighbor(a, v, u)) ++count;
    return Rational(count) >= Rational(a.degree(v), 2);
}

// ---- per-vertex report --------------------------------------------------

struct VertexFlags {
    bool aberrant = false;
    bool slightly_aberrant = false;
    bool egalitarian_sparse = false;
    bool bipartite_sparse = false;
    bool prioritized = false;
    bool heavy = false;
    bool extremely_heavy = false;
    bool very_lordly = false;
    bool sponsored = false;
    bool normal = false;
};

struct VertexReport {
    vertex_t v = 0;
    int degree = 0;
    int list_size = 0;
    int gap = 0;
    int save = 0;
    int omega = 0;
    std::optional<Affine> charge;  // empty when |L(v)| > k
    Real charge_value;
    std::size_t n_subserv = 0, n_egal = 0, n_lordlier = 0, n_slightly_lordlier = 0, n_egal_sigma = 0;
    long long egal_complement_edges = 0;
    VertexFlags flags;
    std::optional<Bipartition> witness;
    std::vector<std::string> warnings;

    bool static_saved() const
    {
        return flags.aberrant || flags.slightly_aberrant || flags.egalitarian_sparse || flags.bipartite_sparse;
    }
};

/// Evaluates every predicate. A way to save whose constant is not positive
/// counts as not satisfied and leaves a warning.
inline VertexReport classify_vertex(const Analysis& a, vertex_t v, const std::optional<Ordering>& rank = std::nullopt)
{
    VertexReport r;
    r.v = v;
    r.degree = a.degree(v);
    r.list_size = a.list_size(v);
    r.gap = a.gap(v);
    r.save = a.save(v);
    r.omega = a.omega(v);
    auto np = partition_neighbors(a, v);
    r.n_subserv = np.subserv.size();
    r.n_egal = np.egal.size();
    r.n_lordlier = np.lordlier.size();
    r.n_slightly_lordlier = np.slightly_lordlier.size();
    r.n_egal_sigma = np.egal_sigma.size();
    r.egal_complement_edges = complement_edges_within(a.graph(), np.egal);

    const auto& dc = a.cal().dc;
    if (dc.c_A > 0) {
        r.flags.aberrant = is_aberrant(a, v, np);
        r.flags.slightly_aberrant = is_slightly_aberrant(a, v, np);
    } else {
        r.warnings.push_back("c_A not positive; aberrance predicates treated as false");
    }
    if (dc.c_ES > 0)
        r.flags.egalitarian_sparse = is_egalitarian_sparse(a, v, np);
    else
        r.warnings.push_back("c_ES not positive; egalitarian-sparse treated as false");
    if (dc.c_BS > 0) {
        r.witness = bipartite_sparse_witness(a, v, np);
        r.flags.bipartite_sparse = r.witness.has_value();
    } else {
        r.warnings.push_back("c_BS not positive; bipartite-sparse treated as false");
    }
    if (rank) r.flags.prioritized = is_prioritized(a, v, rank);
    r.flags.very_lordly = is_very_lordly(a, v, np);
    if (r.list_size <= a.params().k) {
        r.charge = charge_form(a, v);
        r.charge_value = r.charge->value(a.cal().lambda);
        r.flags.heavy = heavy_from(*r.charge, r.gap, a.params(), a.cal().lambda);
        r.flags.extremely_heavy = extremely_heavy_from(*r.charge, r.degree, a.params(), a.cal().lambda);
        r.flags.normal = !r.flags.heavy;
        r.flags.sponsored = is_sponsored(a, v);
    } else {
        r.warnings.push_back("|L(v)| > k; charge-based flags not evaluated");
    }
    return r;
}

/// Static four-class membership (aberrant, slightly aberrant,
/// egalitarian-sparse, bipartite-sparse) for every vertex.
inline std::vector<char> static_saved_set(const Analysis& a)
{
    std::vector<char> s(static_cast<std::size_t>(a.graph().order()), 0);
    const auto& dc = a.cal().dc;
    for (vertex_t v = 0; v < a.graph().order(); ++v) {
        auto np = partition_neighbors(a, v);
        bool in = false;
        if (dc.c_A > 0) in = is_aberrant(a, v, np) || is_slightly_aberrant(a, v, np);
        if (!in && dc.c_ES > 0) in = is_egalitarian_sparse(a, v, np);
        if (!in && dc.c_BS > 0) in = is_bipartite_sparse(a, v, np);
        s[v] = in;
    }
    return s;
}

/// Layer index per vertex (-1 = never absorbed). Layer 0 is `seed`; layer
/// i >= 1 holds the vertices with at least need(v) neighbours in layers < i.
template <class Need>
std::vector<int> build_layers(const Graph& g, const std::vector<char>& seed, Need need)
{
    const int n = g.order();
    std::vector<int> layer(static_cast<std::size_t>(n), -1);
    std::vector<long long> count(static_cast<std::size_t>(n), 0);
    std::vector<vertex_t> frontier;
    for (vertex_t v = 0; v < n; ++v)
        if (seed[v]) {
            layer[v] = 0;
            frontier.push_back(v);
        }
    for (int i = 1; !frontier.empty(); ++i) {
        for (vertex_t u : frontier)
            for (vertex_t w : g.neighbors(u)) ++count[w];
        std::vector<vertex_t> next;
        for (vertex_t v = 0; v < n; ++v)
            if (layer[v] < 0 && need(v, count[v])) next.push_back(v);
        for (vertex_t v : next) layer[v] = i;
        frontier = std::move(next);
    }
    return layer;
}

/// Rank vector from layers: later layers first, then by vertex id inside a
/// layer. Unlayered vertices (layer -1) are placed before every layer.
inline Ordering ordering_from_layers(const std::vector<int>& layer)
{
    const int n = static_cast<int>(layer.size());
    std::vector<vertex_t> order(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) order[i] = i;
    auto key = [&](vertex_t v) { return layer[v] < 0 ? std::numeric_limits<int>::max() : layer[v]; };
    std::stable_sort(order.begin(), order.end(), [&](vertex_t x, vertex_t y) { return key(x) > key(y); });
    Ordering rank(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) rank[order[i]] = i;
    return rank;
}

enum class SavedStatus { Saved, ListTooLarge, ListOutsideSandwich, NotAbsorbed };

struct SavedResult {
    SavedStatus status = SavedStatus::NotAbsorbed;
    std::optional<vertex_t> offending;  // first vertex breaking a list-size condition
    std::vector<int> layer;
    Ordering ordering;
    std::vector<vertex_t> unabsorbed;

    bool saved() const { return status == SavedStatus::Saved; }
};

/// Saved test: list-size conditions, then the layered fixed point seeded
/// with the static classes using the ordering-priority bar.
inline SavedResult is_saved(const Analysis& a)
{
    SavedResult res;
    const auto& p = a.params();
    for (vertex_t v = 0; v < a.graph().order(); ++v) {
        if (a.list_size(v) > p.k) {
            res.status = SavedStatus::ListTooLarge;
            res.offending = v;
            return res;
        }
        Rational l = a.list_size(v);
        if (l < (1 - p.epsilon_prime) * a.degree(v) || l > a.degree(v)) {
            res.status = SavedStatus::ListOutsideSandwich;
            res.offending = v;
            return res;
        }
    }
    auto seed = static_saved_set(a);
    res.layer = build_layers(a.graph(), seed, [&](vertex_t v, long long c) { return Real(c) >= a.cal().priority_need(a.save(v)); });
    for (vertex_t v = 0; v < a.graph().order(); ++v)
        if (res.layer[v] < 0) res.unabsorbed.push_back(v);
    if (!res.unabsorbed.empty()) return res;
    res.ordering = ordering_from_layers(res.layer);
    res.status = SavedStatus::Saved;
    return res;
}

inline const char* to_string(SavedStatus s)
{
    switch (s) {
    case SavedStatus::Saved: return "saved";
    case SavedStatus::ListTooLarge: return "list_exceeds_k";
    case SavedStatus::ListOutsideSandwich: return "list_outside_degree_window";
    case SavedStatus::NotAbsorbed: return "not_absorbed";
    }
    return "?";
}

}  // namespace critgraph
