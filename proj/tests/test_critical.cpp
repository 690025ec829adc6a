#include "critgraph.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

using namespace critgraph;

TEST(Solvers, Examples)
{
    EXPECT_EQ(chromatic_number(graphs::cycle(5)).chi, 3);
    EXPECT_EQ(list_color(graphs::complete(4), ListAssignment(std::vector<std::vector<color_t>>(4, {1, 2, 3}))).status,
              SolveStatus::Uncolorable);
    Graph p = graphs::petersen();
    EXPECT_EQ(chromatic_number(p).chi, oracle::chromatic_number(p));
    EXPECT_EQ(chromatic_number(p).chi, 3);
}

namespace {

// Mycielski graph of C_5: triangle-free with chromatic number 4, so clique
// bounds never settle it.
Graph grotzsch()
{
    std::vector<std::pair<vertex_t, vertex_t>> e;
    for (int i = 0; i < 5; ++i) {
        e.emplace_back(i, (i + 1) % 5);
        e.emplace_back(5 + i, (i + 1) % 5);
        e.emplace_back(5 + i, (i + 4) % 5);
        e.emplace_back(5 + i, 10);
    }
    return Graph::from_edges(11, e);
}

}  // namespace

TEST(Solvers, BudgetIsADistinctOutcome)
{
    Graph g = grotzsch();
    ASSERT_EQ(chromatic_number(g).chi, 4);
    EXPECT_EQ(k_color(g, 3, 5).status, SolveStatus::BudgetExhausted);
    EXPECT_EQ(chromatic_number(g, 5).status, SolveStatus::BudgetExhausted);
    EXPECT_THROW(is_k_critical(g, 4, 5), budget_exhausted);
    EXPECT_TRUE(is_k_critical(g, 4));
}

TEST(Solvers, AgreeWithBruteForceOnEveryGraphUpToSevenVertices)
{
    std::size_t count = 0;
    for (int n = 1; n <= 7; ++n)
        for (const Graph& g : all_graphs(n)) {
            ++count;
            auto r = chromatic_number(g);
            ASSERT_EQ(r.status, SolveStatus::Colored);
            ASSERT_EQ(r.chi, oracle::chromatic_number(g));
        }
    // non-isomorphic graphs on 1..7 vertices
    EXPECT_EQ(count, 1u + 2 + 4 + 11 + 34 + 156 + 1044);
}

TEST(Solvers, ListColoringAgreesWithBruteForce)
{
    gen::Rng rng(71);
    for (int t = 0; t < 400; ++t) {
        Graph g = gen::gnp(gen::uniform_int(rng, 1, 8), gen::uniform01(rng), rng);
        auto L = gen::random_lists(g, rng, 1, 3, 4);
        auto r = list_color(g, L);
        ASSERT_NE(r.status, SolveStatus::BudgetExhausted);
        ASSERT_EQ(r.status == SolveStatus::Colored, oracle::list_colorable(g, L));
        if (r.status == SolveStatus::Colored) ASSERT_TRUE(is_proper_list_coloring(g, L, r.coloring));
    }
}

TEST(Criticality, Examples)
{
    for (int k = 1; k <= 6; ++k) EXPECT_TRUE(is_k_critical(graphs::complete(k), k)) << k;
    EXPECT_TRUE(is_k_critical(graphs::cycle(7), 3));
    EXPECT_FALSE(is_k_critical(graphs::cycle(6), 3));
    Graph m = graphs::moser_spindle();
    EXPECT_EQ(m.order(), 7);
    EXPECT_EQ(m.size(), 11);
    EXPECT_TRUE(is_k_critical(m, 4));
    EXPECT_FALSE(is_k_critical(graphs::petersen(), 3));
}

TEST(Criticality, CertificateColoringsAreValid)
{
    Graph m = graphs::moser_spindle();
    auto cert = criticality_certificate(m, 4);
    ASSERT_TRUE(cert);
    EXPECT_EQ(cert->edge_deleted.size(), static_cast<std::size_t>(m.size()));
    auto proper = [](const Graph& g, const std::vector<color_t>& c, int k) {
        for (auto [u, v] : g.edges())
            if (c[u] == c[v]) return false;
        for (auto x : c)
            if (x < 0 || x >= k) return false;
        return true;
    };
    EXPECT_TRUE(proper(m, cert->k_coloring, 4));
    for (auto& [e, col] : cert->edge_deleted) EXPECT_TRUE(proper(m.without_edge(e.first, e.second), col, 3));
}

TEST(Criticality, ListCritical)
{
    // K_4 with identical 3-lists: not colorable, every K_3 is
    Graph g = graphs::complete(4);
    auto L = ListAssignment::uniform(4, 3);
    EXPECT_TRUE(is_L_critical(g, L));
    // an extra isolated vertex can be removed without changing anything
    Graph h = Graph::from_edges(5, g.edges());
    EXPECT_FALSE(is_L_critical(h, ListAssignment::uniform(5, 3)));
    EXPECT_FALSE(is_L_critical(graphs::cycle(4), ListAssignment::uniform(4, 2)));
}

TEST(Ore, TwoCliques)
{
    auto r = ore_compose_critical(graphs::complete(4), graphs::complete(4), 0, 1, 0, 4);
    ASSERT_TRUE(r);
    EXPECT_EQ(r->graph.order(), 7);
    EXPECT_EQ(r->graph.size(), 11);
    EXPECT_EQ(average_degree(r->graph), Rational(22, 7));
    EXPECT_TRUE(is_k_critical(r->graph, 4));
}

TEST(Ore, ChainMeetsTheBoundWithEquality)
{
    auto chain = ore_chain(4, 3);
    ASSERT_EQ(chain.size(), 3u);
    const int n[] = {4, 7, 10}, m[] = {6, 11, 16};
    for (int i = 0; i < 3; ++i) {
        EXPECT_EQ(chain[i].order(), n[i]);
        EXPECT_EQ(chain[i].size(), m[i]);
        EXPECT_TRUE(is_k_critical(chain[i], 4));
        EXPECT_EQ(verify_ky_bound(chain[i], 4), 0);
    }
    EXPECT_EQ(average_degree(chain[2]), Rational(16, 5));
}

TEST(Ore, CountsAndRejectedSplits)
{
    gen::Rng rng(72);
    const Graph seeds[] = {graphs::complete(3), graphs::cycle(5), graphs::cycle(7)};
    for (const Graph& g1 : seeds)
        for (const Graph& g2 : seeds) {
            auto e = g1.edges()[static_cast<std::size_t>(gen::uniform_int(rng, 0, g1.size() - 1))];
            vertex_t z = gen::uniform_int(rng, 0, g2.order() - 1);
            Graph h = ore_compose(g1, g2, e.first, e.second, z, {g2.neighbors(z)[0]});
            EXPECT_EQ(h.order(), g1.order() + g2.order() - 1);
            EXPECT_EQ(h.size(), g1.size() + g2.size() - 1);
            auto r = ore_compose_critical(g1, g2, e.first, e.second, z, 3);
            ASSERT_TRUE(r);
            EXPECT_TRUE(is_k_critical(r->graph, 3));
        }
    Graph k4 = graphs::complete(4);
    EXPECT_THROW(ore_compose(k4, k4, 0, 1, 0, {}), precondition_error);
    EXPECT_THROW(ore_compose(k4, k4, 0, 1, 0, {1, 2, 3}), precondition_error);
}

TEST(KyBound, Margins)
{
    EXPECT_EQ(ky_bound(4, 4), Rational(3));
    EXPECT_EQ(verify_ky_bound(graphs::complete(4), 4), 0);
    EXPECT_EQ(verify_ky_bound(graphs::moser_spindle(), 4), 0);
    EXPECT_EQ(ky_bound(3, 5), Rational(2));
    EXPECT_EQ(verify_ky_bound(graphs::cycle(5), 3), 0);
    EXPECT_THROW(verify_ky_bound(graphs::cycle(6), 3), precondition_error);
}

TEST(CliqueDensity, Examples)
{
    // eps = 0: the bound is k - 2, below every k-critical average degree
    auto m = verify_clique_density_bound(graphs::moser_spindle(), 4, 3, Rational(0));
    EXPECT_EQ(m.bound, Rational(2));
    EXPECT_TRUE(m.holds);
    EXPECT_FALSE(m.omega_hypothesis);
    for (int k = 3; k <= 6; ++k) {
        const Rational eps = parse_rational("2.6e-10");
        auto c = verify_clique_density_bound(graphs::complete(k), k, k, eps);
        EXPECT_EQ(c.bound, Rational(k - 2) - eps);
        EXPECT_EQ(c.average_degree, Rational(k - 1));
        EXPECT_TRUE(c.holds);
    }
    EXPECT_THROW(verify_clique_density_bound(graphs::complete(4), 4, 3, Rational(0)), precondition_error);
}

TEST(CliqueDensity, ExactComparisonNearTheThreshold)
{
    // with the cap at k - 1 the eps terms cancel and the bound is exactly 2
    const Rational eps = parse_rational("2.6e-10");
    auto c = verify_clique_density_bound(graphs::moser_spindle(), 4, 3, eps);
    EXPECT_EQ(c.bound, Rational(2));
    EXPECT_TRUE(c.holds);
}

TEST(ChromaticMad, Examples)
{
    auto k4 = verify_chromatic_mad_bound(graphs::complete(4), Rational(1, 100));
    EXPECT_EQ(k4.chi, 4);
    EXPECT_EQ(k4.mad, Rational(3));
    EXPECT_EQ(k4.bound, 4);
    EXPECT_TRUE(k4.holds);
    EXPECT_FALSE(k4.omega_hypothesis);

    auto p = verify_chromatic_mad_bound(graphs::petersen(), Rational(1, 20));
    EXPECT_EQ(p.chi, 3);
    EXPECT_EQ(p.mad, Rational(3));
    EXPECT_EQ(p.omega, 2);
    EXPECT_EQ(p.bound, 4);
    EXPECT_TRUE(p.holds);
}

TEST(ChromaticMad, ZeroEpsilonIsTheDegeneracyBound)
{
    gen::Rng rng(73);
    for (int t = 0; t < 200; ++t) {
        Graph g = gen::gnp(gen::uniform_int(rng, 1, 12), gen::uniform01(rng), rng);
        auto c = verify_chromatic_mad_bound(g, Rational(0));
        ASSERT_EQ(c.bound, ceil(c.mad + 1));
        ASSERT_TRUE(c.holds);
    }
}

TEST(Enumerate, ThreeCriticalGraphsAreTheOddCycles)
{
    auto all = enumerate_k_critical(3, 9);
    ASSERT_EQ(all.size(), 4u);
    for (std::size_t i = 0; i < all.size(); ++i) {
        const int n = 3 + 2 * static_cast<int>(i);
        EXPECT_EQ(canonical_form(all[i].graph), canonical_form(graphs::cycle(n)));
    }
}

TEST(Enumerate, FourCriticalCounts)
{
    auto all = enumerate_k_critical(4, 8);
    std::map<int, int> by_n;
    for (auto& c : all) {
        ++by_n[c.graph.order()];
        EXPECT_GE(c.graph.min_degree(), 3);
        EXPECT_GE(verify_ky_bound(c.graph, 4), 0);
        EXPECT_EQ(oracle::chromatic_number(c.graph), 4);
    }
    EXPECT_EQ(by_n[4], 1);
    EXPECT_EQ(by_n[5], 0);
    EXPECT_EQ(by_n[6], 1);
    EXPECT_EQ(by_n[7], 2);
    EXPECT_EQ(by_n[8], 5);
    bool moser = false;
    for (auto& c : all) moser = moser || canonical_form(c.graph) == canonical_form(graphs::moser_spindle());
    EXPECT_TRUE(moser);
}

TEST(Enumerate, RejectsOutOfRangeRequests)
{
    EXPECT_THROW(enumerate_k_critical(3, 11), precondition_error);
    EXPECT_THROW(enumerate_k_critical(0, 4), precondition_error);
}

TEST(Canonical, InvariantUnderRelabelling)
{
    gen::Rng rng(74);
    for (int t = 0; t < 200; ++t) {
        Graph g = gen::gnp(gen::uniform_int(rng, 1, 9), gen::uniform01(rng), rng);
        std::vector<vertex_t> perm(static_cast<std::size_t>(g.order()));
        for (int i = 0; i < g.order(); ++i) perm[i] = i;
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<std::pair<vertex_t, vertex_t>> e;
        for (auto [u, v] : g.edges()) e.emplace_back(perm[u], perm[v]);
        ASSERT_EQ(canonical_form(g), canonical_form(Graph::from_edges(g.order(), e)));
    }
    EXPECT_NE(canonical_form(graphs::cycle(6)), canonical_form(Graph::from_edges(6, {{0, 1}, {1, 2}, {2, 0}, {3, 4}, {4, 5}, {5, 3}})));
}
