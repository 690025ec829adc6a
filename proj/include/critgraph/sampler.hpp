#pragma once

#include "critgraph/assignment.hpp"
#include "critgraph/classify.hpp"
#include "critgraph/graph.hpp"
#include "critgraph/numeric.hpp"
#include "critgraph/params.hpp"
#include "critgraph/rng.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace critgraph {

struct PartialColoring {
    std::vector<int> phi;          // index into L(v)
    std::vector<char> uncolored;   // membership in U

    bool in_U(vertex_t v) const { return uncolored[v] != 0; }
};

/// Per-vertex, per-color probability that no neighbour's uniform draw is
/// matched to that color, and the equalizing keep probability K / q.
class Retention {
public:
    Retention(const Graph& g, const CorrespondenceAssignment& lm, const Rational& eps_proc)
        : K_(retention_constant<double>(eps_proc))
    {
        const auto& L = lm.lists();
        const Real K = retention_constant<Real>(eps_proc);
        const int n = g.order();
        q_.resize(static_cast<std::size_t>(n));
        keep_.resize(static_cast<std::size_t>(n));
        for (vertex_t v = 0; v < n; ++v) {
            if (L.size(v) == 0) throw precondition_error("empty list at vertex " + std::to_string(v + 1));
            for (int i = 0; i < L.size(v); ++i) {
                Rational q = 1;
                for (vertex_t u : g.neighbors(v))
                    if (lm.partner(v, u, i) >= 0) q *= Rational(L.size(u) - 1, L.size(u));
                if (rational_to<Real>(q) < K)
                    throw precondition_error("retention probability below K at vertex " + std::to_string(v + 1) + ", color " +
                                             std::to_string(L[v][i]));
                q_[v].push_back(to_double(q));
                keep_[v].push_back(static_cast<double>(K / rational_to<Real>(q)));
            }
        }
    }

    double K() const { return K_; }
    double q(vertex_t v, int i) const { return q_[v][i]; }
    double keep(vertex_t v, int i) const { return keep_[v][i]; }

private:
    double K_;
    std::vector<std::vector<double>> q_;
    std::vector<std::vector<double>> keep_;
};

/// Whether q_{v,c} >= K holds everywhere; the first failing vertex otherwise.
inline std::optional<vertex_t> retention_violation(const Graph& g, const CorrespondenceAssignment& lm, const Rational& eps_proc)
{
    try {
        Retention r(g, lm, eps_proc);
    } catch (const precondition_error& e) {
        std::string msg = e.what();
        auto p = msg.find("vertex ");
        if (p == std::string::npos) return vertex_t{0};
        return static_cast<vertex_t>(std::stoi(msg.substr(p + 7)) - 1);
    }
    return std::nullopt;
}

namespace detail {

inline void draw_into(const Graph& g, const CorrespondenceAssignment& lm, const Retention& r, const CounterRng& rng,
                      std::uint64_t trial, PartialColoring& out)
{
    const int n = g.order();
    const auto& L = lm.lists();
    out.phi.resize(static_cast<std::size_t>(n));
    out.uncolored.assign(static_cast<std::size_t>(n), 0);
    for (vertex_t v = 0; v < n; ++v) out.phi[v] = static_cast<int>(rng.below(trial, static_cast<std::uint64_t>(v), 0, static_cast<std::uint32_t>(L.size(v))));
    for (vertex_t v = 0; v < n; ++v) {
        const auto& nb = g.neighbors(v);
        bool conflict = false;
        for (std::size_t k = 0; k < nb.size() && !conflict; ++k) conflict = lm.partners_at(v, k)[out.phi[v]] == out.phi[nb[k]];
        out.uncolored[v] = conflict || rng.uniform(trial, static_cast<std::uint64_t>(v), 1) >= r.keep(v, out.phi[v]);
    }
}

}  // namespace detail

/// One draw of the local naive random coloring procedure with per-color
/// equalizing coins: phi(v) is uniform on L(v) and P(v in U | phi(v)) = 1 - K.
inline PartialColoring sample_coloring(const Graph& g, const CorrespondenceAssignment& lm, const Rational& eps_proc,
                                       std::uint64_t seed, std::uint64_t trial = 0)
{
    Retention r(g, lm, eps_proc);
    PartialColoring pc;
    detail::draw_into(g, lm, r, CounterRng(seed), trial, pc);
    return pc;
}

/// Restricted to the colored vertices, phi is an (L, M)-coloring.
inline bool is_proper_partial(const Graph& g, const CorrespondenceAssignment& lm, const PartialColoring& pc)
{
    for (auto [u, v] : g.edges())
        if (!pc.in_U(u) && !pc.in_U(v) && lm.partner(u, v, pc.phi[u]) == pc.phi[v]) return false;
    return true;
}

struct SavingsRecord {
    long long aberrance = 0;
    long long pairs = 0;
    long long trips = 0;
    long long subservience = 0;
    long long savings = 0;
};

inline std::vector<vertex_t> sigma_egalitarian(const Graph& g, const ListAssignment& L, const ParamSet& p, vertex_t v)
{
    std::vector<vertex_t> out;
    const Rational bar = (1 - p.sigma) * L.size(v);
    for (vertex_t u : g.neighbors(v))
        if (Rational(L.size(u)) >= bar) out.push_back(u);
    return out;
}

/// The four savings random variables at v for one sample.
inline SavingsRecord compute_rvs(const Graph& g, const CorrespondenceAssignment& lm, const ParamSet& p, vertex_t v,
                                 const Ordering& rank, const PartialColoring& pc)
{
    SavingsRecord s;
    for (vertex_t u : g.neighbors(v)) {
        if (!pc.in_U(u) && lm.partner(u, v, pc.phi[u]) < 0) ++s.aberrance;
        if (pc.in_U(u) && rank[u] < rank[v]) ++s.subservience;
    }
    // colored sigma-egalitarian neighbours and the color of L(v) each one hits
    std::vector<std::pair<vertex_t, int>> hit;
    for (vertex_t u : sigma_egalitarian(g, lm.lists(), p, v))
        if (!pc.in_U(u)) {
            int c = lm.partner(u, v, pc.phi[u]);
            if (c >= 0) hit.emplace_back(u, c);
        }
    for (std::size_t i = 0; i < hit.size(); ++i)
        for (std::size_t j = i + 1; j < hit.size(); ++j) {
            if (hit[i].second != hit[j].second || g.adjacent(hit[i].first, hit[j].first)) continue;
            ++s.pairs;
            for (std::size_t l = j + 1; l < hit.size(); ++l)
                if (hit[l].second == hit[i].second && !g.adjacent(hit[i].first, hit[l].first) && !g.adjacent(hit[j].first, hit[l].first))
                    ++s.trips;
        }
    s.savings = s.aberrance + s.subservience + s.pairs - s.trips;
    return s;
}

struct ExpectedSavings {
    double aberrance = 0;
    double pairs = 0;
    double trips = 0;
    double subservience = 0;
    double savings = 0;
    // K^2 and K^3 times the independent-draw sums; equal to the exact values
    // only when the colored events of the vertices involved are independent.
    double pairs_independent = 0;
    double trips_independent = 0;
};

namespace detail {

// P(every vertex of S is colored | S draws the given color indices), for
// pairwise non-adjacent S: K^{|S|} times, for every vertex w adjacent to two
// or more members, the joint no-conflict fraction over the product of the
// single ones.
inline double joint_colored(const Graph& g, const CorrespondenceAssignment& lm, const Retention& r,
                            const std::vector<std::pair<vertex_t, int>>& S)
{
    double p = 1;
    for (std::size_t i = 0; i < S.size(); ++i) p *= r.K();
    std::vector<vertex_t> common;
    for (std::size_t i = 0; i < S.size(); ++i)
        for (vertex_t w : g.neighbors(S[i].first)) common.push_back(w);
    std::sort(common.begin(), common.end());
    const auto& L = lm.lists();
    for (std::size_t a = 0; a < common.size();) {
        std::size_t b = a;
        while (b < common.size() && common[b] == common[a]) ++b;
        if (b - a >= 2) {
            vertex_t w = common[a];
            std::vector<std::pair<vertex_t, int>> touched;
            for (auto& s : S)
                if (g.adjacent(w, s.first)) touched.push_back(s);
            int free_all = 0;
            std::vector<int> free_one(touched.size(), 0);
            for (int j = 0; j < L.size(w); ++j) {
                bool ok = true;
                for (std::size_t t = 0; t < touched.size(); ++t) {
                    bool hits = lm.partner(w, touched[t].first, j) == touched[t].second;
                    if (!hits) ++free_one[t];
                    ok = ok && !hits;
                }
                if (ok) ++free_all;
            }
            double ratio = static_cast<double>(free_all) / L.size(w);
            for (int f : free_one) ratio /= static_cast<double>(f) / L.size(w);
            p *= ratio;
        }
        a = b;
    }
    return p;
}

}  // namespace detail

/// Exact expectations of the savings variables under sample_coloring.
inline ExpectedSavings exact_expectations(const Graph& g, const CorrespondenceAssignment& lm, const ParamSet& p, vertex_t v,
                                          const Ordering& rank, const Retention& r)
{
    const auto& L = lm.lists();
    ExpectedSavings e;
    const double K = r.K();
    long long before = 0;
    for (vertex_t u : g.neighbors(v)) {
        e.aberrance += K * static_cast<double>(L.size(u) - lm.covered(u, v)) / L.size(u);
        if (rank[u] < rank[v]) ++before;
    }
    e.subservience = (1 - K) * static_cast<double>(before);

    auto es = sigma_egalitarian(g, L, p, v);
    // for each sigma-egalitarian x: color index of L(x) matched to each color index of L(v)
    std::vector<std::vector<int>> back(es.size());
    for (std::size_t i = 0; i < es.size(); ++i) {
        back[i].assign(static_cast<std::size_t>(L.size(v)), -1);
        for (int c = 0; c < L.size(v); ++c) back[i][c] = lm.partner(v, es[i], c);
    }
    for (std::size_t i = 0; i < es.size(); ++i)
        for (std::size_t j = i + 1; j < es.size(); ++j) {
            if (g.adjacent(es[i], es[j])) continue;
            for (int c = 0; c < L.size(v); ++c) {
                int a = back[i][c], b = back[j][c];
                if (a < 0 || b < 0) continue;
                double draw = 1.0 / (L.size(es[i]) * static_cast<double>(L.size(es[j])));
                e.pairs_independent += K * K * draw;
                e.pairs += draw * detail::joint_colored(g, lm, r, {{es[i], a}, {es[j], b}});
                for (std::size_t l = j + 1; l < es.size(); ++l) {
                    int z = back[l][c];
                    if (z < 0 || g.adjacent(es[i], es[l]) || g.adjacent(es[j], es[l])) continue;
                    double d3 = draw / L.size(es[l]);
                    e.trips_independent += K * K * K * d3;
                    e.trips += d3 * detail::joint_colored(g, lm, r, {{es[i], a}, {es[j], b}, {es[l], z}});
                }
            }
        }
    e.savings = e.aberrance + e.subservience + e.pairs - e.trips;
    return e;
}

inline ExpectedSavings exact_expectations(const Graph& g, const CorrespondenceAssignment& lm, const ParamSet& p, vertex_t v,
                                          const Ordering& rank)
{
    return exact_expectations(g, lm, p, v, rank, Retention(g, lm, p.sampler_epsilon));
}

struct LowerBounds {
    std::optional<double> aberrance;          // present when |L(v)| <= d(v)
    std::optional<double> egalitarian_sparse; // present when (1-eps')d(v) <= |L(v)| <= d(v)
    std::optional<double> bipartite_sparse;   // present when a half-egalitarian bipartition exists
    std::size_t bipartition_A = 0;
    double subservience = 0;                  // exact: (1-K) |{u in N(v) : u before v}|
    bool total = false;
};

/// Lower bounds on the expected savings from the lordlier, egalitarian and
/// bipartite structure at v, each only when its hypothesis holds.
inline LowerBounds analytic_lower_bounds(const Graph& g, const CorrespondenceAssignment& lm, const ParamSet& p, vertex_t v,
                                         const Ordering& rank)
{
    Analysis a(g, lm.lists(), p);
    const auto& dc = a.cal().dc;
    const double one_minus = 1 - to_double(p.epsilon_prime);
    LowerBounds b;
    b.total = lm.is_total(g);
    auto np = partition_neighbors(a, v);
    const int d = g.degree(v), l = lm.lists().size(v);
    if (l <= d && d > 0) {
        double slight = a.gap(v) == 0 ? 0.0 : static_cast<double>(a.gap(v)) / d * static_cast<double>(np.slightly_lordlier.size());
        b.aberrance = to_double(dc.c_A) / one_minus * std::max(static_cast<double>(np.lordlier.size()), slight);
    }
    if (l <= d && d > 0 && Rational(l) >= (1 - p.epsilon_prime) * d)
        b.egalitarian_sparse = to_double(dc.c_ES) / one_minus * static_cast<double>(complement_edges_within(g, np.egal)) / d;
    if (auto w = find_half_egalitarian_bipartition(a, v, np)) {
        b.bipartition_A = w->A.size();
        b.bipartite_sparse = static_cast<double>(w->A.size()) * to_double(dc.c_BS) / one_minus;
    }
    long long before = 0;
    for (vertex_t u : g.neighbors(v))
        if (rank[u] < rank[v]) ++before;
    b.subservience = (1 - retention_constant<double>(p.sampler_epsilon)) * static_cast<double>(before);
    return b;
}

struct PremiseRow {
    vertex_t v = 0;
    bool degree_cap = false;    // d(v) <= Delta
    bool degree_floor = false;  // d(v) >= 100/(1-eps)^2
    bool list_window = false;   // Delta >= |L(v)| >= (1-eps) d(v)
    std::optional<bool> expectation;  // empty when the sampler precondition fails
    double expected_savings = 0;
    double required = 0;
};

struct PremiseReport {
    Rational Delta;
    double xi1 = 0, xi2 = 0;
    std::string large_delta = "undeterminable";
    std::vector<PremiseRow> rows;
    std::string note;

    bool all_checkable_pass() const
    {
        for (auto& r : rows)
            if (!r.degree_cap || !r.degree_floor || !r.list_window || !r.expectation.value_or(false)) return false;
        return true;
    }
};

/// Premises of the local coloring result per vertex, wired with Delta = 2k,
/// xi1 = eps'/(1-eps'), xi2 = .99 eps/(1-eps') and eps the procedure parameter.
inline PremiseReport check_coloring_premises(const Graph& g, const CorrespondenceAssignment& lm, const ParamSet& p,
                                             const Ordering& rank, std::optional<long long> Delta = std::nullopt)
{
    PremiseReport rep;
    const long long D = Delta.value_or(2 * p.k);
    rep.Delta = D;
    const Rational eps = p.sampler_epsilon;
    const Rational xi1 = p.epsilon_prime / (1 - p.epsilon_prime);
    const Rational xi2 = Rational(99, 100) * eps / (1 - p.epsilon_prime);
    rep.xi1 = to_double(xi1);
    rep.xi2 = to_double(xi2);
    const Rational floor = Rational(100) / ((1 - eps) * (1 - eps));
    const double log_part = static_cast<double>(log_term(p, D));
    std::optional<Retention> r;
    try {
        r.emplace(g, lm, eps);
    } catch (const precondition_error& e) {
        rep.note = e.what();
    }
    for (vertex_t v = 0; v < g.order(); ++v) {
        PremiseRow row;
        row.v = v;
        const int d = g.degree(v), l = lm.lists().size(v);
        row.degree_cap = d <= D;
        row.degree_floor = Rational(d) >= floor;
        row.list_window = l <= D && Rational(l) >= (1 - eps) * d;
        row.required = std::max(to_double(Rational(1 + xi1)) * (d + 1 - l), rep.xi2 * log_part);
        if (r) {
            row.expected_savings = exact_expectations(g, lm, p, v, rank, *r).savings;
            row.expectation = row.expected_savings >= row.required;
        }
        rep.rows.push_back(row);
    }
    return rep;
}

// ---- Monte Carlo --------------------------------------------------------

inline unsigned worker_count()
{
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("CRITGRAPH_THREADS")) {
        int cap = std::atoi(env);
        if (cap > 0) hw = std::min(hw, static_cast<unsigned>(cap));
    }
    return hw;
}

struct MonteCarloTally {
    std::uint64_t trials = 0;
    std::vector<std::uint64_t> uncolored;                // per vertex
    std::vector<std::vector<std::uint64_t>> color_hits;  // per vertex, per color index
    std::uint64_t improper = 0;                          // samples breaking properness
    std::vector<double> savings_sum;                     // per vertex, when a ordering was given
    std::uint64_t identity_failures = 0;                 // savings != a + s + p - t
};

/// Runs `trials` samples with trial indices [0, trials). Tallies are sums,
/// so the result is independent of the number of workers.
inline MonteCarloTally monte_carlo(const Graph& g, const CorrespondenceAssignment& lm, const ParamSet& p, std::uint64_t seed,
                                   std::uint64_t trials, const std::optional<Ordering>& rank = std::nullopt,
                                   unsigned workers = 0)
{
    const Retention r(g, lm, p.sampler_epsilon);
    const CounterRng rng(seed);
    const int n = g.order();
    if (workers == 0) workers = worker_count();
    workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, std::max<std::uint64_t>(trials, 1)));

    auto fresh = [&] {
        MonteCarloTally t;
        t.uncolored.assign(static_cast<std::size_t>(n), 0);
        t.color_hits.resize(static_cast<std::size_t>(n));
        for (vertex_t v = 0; v < n; ++v) t.color_hits[v].assign(static_cast<std::size_t>(lm.lists().size(v)), 0);
        t.savings_sum.assign(static_cast<std::size_t>(n), 0.0);
        return t;
    };
    std::vector<MonteCarloTally> parts(workers, fresh());
    auto work = [&](unsigned w) {
        auto& t = parts[w];
        PartialColoring pc;
        const std::uint64_t lo = trials * w / workers, hi = trials * (w + 1) / workers;
        for (std::uint64_t i = lo; i < hi; ++i) {
            detail::draw_into(g, lm, r, rng, i, pc);
            for (vertex_t v = 0; v < n; ++v) {
                t.uncolored[v] += pc.uncolored[v];
                ++t.color_hits[v][pc.phi[v]];
            }
            if (!is_proper_partial(g, lm, pc)) ++t.improper;
            if (rank)
                for (vertex_t v = 0; v < n; ++v) {
                    auto s = compute_rvs(g, lm, p, v, *rank, pc);
                    if (s.savings != s.aberrance + s.subservience + s.pairs - s.trips) ++t.identity_failures;
                    t.savings_sum[v] += static_cast<double>(s.savings);
                }
        }
        t.trials = hi - lo;
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (auto& th : pool) th.join();
    }
    MonteCarloTally total = fresh();
    for (auto& t : parts) {
        total.trials += t.trials;
        total.improper += t.improper;
        total.identity_failures += t.identity_failures;
        for (vertex_t v = 0; v < n; ++v) {
            total.uncolored[v] += t.uncolored[v];
            total.savings_sum[v] += t.savings_sum[v];
            for (std::size_t c = 0; c < t.color_hits[v].size(); ++c) total.color_hits[v][c] += t.color_hits[v][c];
        }
    }
    return total;
}

/// Upper-tail p-value of a chi-square statistic.
inline double chi_square_p(double stat, double dof) { return boost::math::gamma_q(dof / 2, stat / 2); }

/// Pearson statistic of observed counts against the uniform distribution.
inline double uniform_chi_square(const std::vector<std::uint64_t>& counts)
{
    double total = 0;
    for (auto c : counts) total += static_cast<double>(c);
    const double expect = total / static_cast<double>(counts.size());
    double stat = 0;
    for (auto c : counts) stat += (static_cast<double>(c) - expect) * (static_cast<double>(c) - expect) / expect;
    return stat;
}

}  // namespace critgraph
