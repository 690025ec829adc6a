#include "critgraph.hpp"
#include "support/expectation_oracle.hpp"
#include "support/generators.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace critgraph;

namespace {

CorrespondenceAssignment no_matchings(const Graph& g, const ListAssignment& L)
{
    return CorrespondenceAssignment(g, L, {});
}

ListAssignment colors(std::vector<std::vector<color_t>> l) { return ListAssignment(std::move(l)); }

double K_default() { return oracle::retention_K(to_double(default_paper_params().sampler_epsilon)); }

PartialColoring coloring_of(std::vector<int> phi, std::vector<char> U) { return PartialColoring{std::move(phi), std::move(U)}; }

// Star with center 0; leaves 1..m are pairwise non-adjacent and every leaf
// color i is matched to color 0 of the center.
struct Fan {
    Graph g;
    CorrespondenceAssignment lm;
};

Fan fan(int m)
{
    std::vector<std::pair<vertex_t, vertex_t>> e;
    for (int i = 1; i <= m; ++i) e.emplace_back(0, i);
    Graph g = Graph::from_edges(m + 1, e);
    std::vector<std::vector<color_t>> l(static_cast<std::size_t>(m + 1), {0, 1});
    std::map<std::pair<vertex_t, vertex_t>, CorrespondenceAssignment::Pairs> mm;
    for (int i = 1; i <= m; ++i) mm[{0, i}] = {{0, 0}};
    return {g, CorrespondenceAssignment(g, ListAssignment(l), mm)};
}

}  // namespace

TEST(Retention, RequiresNonEmptyListsAndEnoughRoom)
{
    Graph e = Graph::from_edges(2, {{0, 1}});
    EXPECT_THROW(Retention(e, identity_correspondence(e, colors({{1}, {}})), default_paper_params().sampler_epsilon), precondition_error);
    // a single shared color is always blocked
    auto lm = identity_correspondence(e, colors({{1}, {1}}));
    EXPECT_TRUE(retention_violation(e, lm, default_paper_params().sampler_epsilon));
    auto ok = identity_correspondence(e, colors({{1, 2}, {1, 2}}));
    EXPECT_FALSE(retention_violation(e, ok, default_paper_params().sampler_epsilon));
}

TEST(SampleColoring, IsolatedVertexMarginals)
{
    Graph g(1);
    auto lm = identity_correspondence(g, colors({{4, 5, 6}}));
    Retention r(g, lm, default_paper_params().sampler_epsilon);
    EXPECT_DOUBLE_EQ(r.q(0, 0), 1.0);
    auto t = monte_carlo(g, lm, default_paper_params(), 7, 200000);
    const double K = K_default(), N = 200000;
    EXPECT_NEAR(t.uncolored[0] / N, 1 - K, 4 * std::sqrt(K * (1 - K) / N));
    for (auto c : t.color_hits[0]) EXPECT_NEAR(c / N, 1.0 / 3, 4 * std::sqrt(2.0 / 9 / N));
}

TEST(SampleColoring, SingleEdgeIdentityLists)
{
    Graph g = Graph::from_edges(2, {{0, 1}});
    auto lm = identity_correspondence(g, colors({{1, 2}, {1, 2}}));
    Retention r(g, lm, default_paper_params().sampler_epsilon);
    EXPECT_DOUBLE_EQ(r.q(0, 0), 0.5);
    EXPECT_NEAR(r.keep(0, 1), 2 * K_default(), 1e-15);

    oracle::Enumerator en{g, lm, K_default(), Rational(2, 3), {0, 1}};
    auto ex = en.run();
    ASSERT_TRUE(ex);
    EXPECT_NEAR((*ex)[0].p_uncolored, 1 - K_default(), 1e-14);

    const double N = 400000;
    auto t = monte_carlo(g, lm, default_paper_params(), 8, 400000);
    for (vertex_t v = 0; v < 2; ++v) EXPECT_NEAR(t.uncolored[v] / N, 1 - K_default(), 4 * std::sqrt(K_default() * (1 - K_default()) / N));
    EXPECT_EQ(t.improper, 0u);
}

TEST(SampleColoring, ReproducibleAndShardIndependent)
{
    gen::Rng rng(51);
    Graph g = gen::gnp(12, 0.3, rng);
    auto L = gen::random_lists(g, rng, 3, 6, 8);
    auto lm = gen::random_correspondence(g, L, rng, 0.3);
    if (retention_violation(g, lm, default_paper_params().sampler_epsilon)) GTEST_SKIP() << "fixture infeasible";
    auto rank = gen::random_rank(g.order(), rng);
    auto a = monte_carlo(g, lm, default_paper_params(), 99, 5000, rank, 1);
    auto b = monte_carlo(g, lm, default_paper_params(), 99, 5000, rank, 3);
    EXPECT_EQ(a.uncolored, b.uncolored);
    EXPECT_EQ(a.color_hits, b.color_hits);
    EXPECT_EQ(a.savings_sum, b.savings_sum);
    auto s1 = sample_coloring(g, lm, default_paper_params().sampler_epsilon, 5, 17);
    auto s2 = sample_coloring(g, lm, default_paper_params().sampler_epsilon, 5, 17);
    EXPECT_EQ(s1.phi, s2.phi);
    EXPECT_EQ(s1.uncolored, s2.uncolored);
}

TEST(SampleColoring, EverySampleIsProperAndSatisfiesTheSavingsIdentity)
{
    gen::Rng rng(52);
    int used = 0;
    for (int t = 0; t < 40; ++t) {
        Graph g = gen::gnp(gen::uniform_int(rng, 2, 16), 0.25, rng);
        auto L = gen::random_lists(g, rng, 3, 6, 7);
        auto lm = gen::random_correspondence(g, L, rng, gen::uniform01(rng));
        if (retention_violation(g, lm, default_paper_params().sampler_epsilon)) continue;
        ++used;
        auto tally = monte_carlo(g, lm, default_paper_params(), static_cast<std::uint64_t>(t), 2000, gen::random_rank(g.order(), rng));
        ASSERT_EQ(tally.improper, 0u);
        ASSERT_EQ(tally.identity_failures, 0u);
    }
    EXPECT_GT(used, 10);
}

TEST(SampleColoring, ColorChoiceIsUniform)
{
    gen::Rng rng(53);
    int tested = 0;
    for (int t = 0; t < 30 && tested < 10; ++t) {
        Graph g = gen::gnp(gen::uniform_int(rng, 4, 20), 0.2, rng);
        auto L = gen::random_lists(g, rng, 3, 6, 8);
        auto lm = gen::random_correspondence(g, L, rng, 0.3);
        if (retention_violation(g, lm, default_paper_params().sampler_epsilon)) continue;
        ++tested;
        auto tally = monte_carlo(g, lm, default_paper_params(), 1000 + static_cast<std::uint64_t>(t), 100000);
        double stat = 0, dof = 0;
        for (vertex_t v = 0; v < g.order(); ++v) {
            stat += uniform_chi_square(tally.color_hits[v]);
            dof += static_cast<double>(tally.color_hits[v].size() - 1);
        }
        EXPECT_GT(chi_square_p(stat, dof), 0.001) << "fixture " << t;
    }
    EXPECT_EQ(tested, 10);
}

TEST(ComputeRvs, AllNeighboursUncolored)
{
    auto f = fan(3);
    auto pc = coloring_of({0, 0, 0, 0}, {0, 1, 1, 1});
    Ordering rank{2, 0, 1, 3};  // leaves 1 and 2 precede the center
    auto s = compute_rvs(f.g, f.lm, default_paper_params(), 0, rank, pc);
    EXPECT_EQ(s.aberrance, 0);
    EXPECT_EQ(s.pairs, 0);
    EXPECT_EQ(s.trips, 0);
    EXPECT_EQ(s.subservience, 2);
}

TEST(ComputeRvs, TwoLeavesOnOneColorMakeAPair)
{
    auto f = fan(2);
    auto pc = coloring_of({1, 0, 0}, {0, 0, 0});
    auto s = compute_rvs(f.g, f.lm, default_paper_params(), 0, Ordering{0, 1, 2}, pc);
    EXPECT_EQ(s.pairs, 1);
    EXPECT_EQ(s.trips, 0);
    EXPECT_EQ(s.aberrance, 0);
}

TEST(ComputeRvs, ThreeLeavesOnOneColorMakeThreePairsAndATrip)
{
    auto f = fan(3);
    auto pc = coloring_of({1, 0, 0, 0}, {0, 0, 0, 0});
    auto s = compute_rvs(f.g, f.lm, default_paper_params(), 0, Ordering{0, 1, 2, 3}, pc);
    EXPECT_EQ(s.pairs, 3);
    EXPECT_EQ(s.trips, 1);
    EXPECT_EQ(s.pairs - s.trips, 2);
    EXPECT_EQ(s.savings, s.aberrance + s.subservience + s.pairs - s.trips);
}

TEST(ComputeRvs, UnmatchedColorCountsAsAberrance)
{
    auto f = fan(3);
    auto pc = coloring_of({1, 1, 1, 0}, {0, 0, 0, 0});
    auto s = compute_rvs(f.g, f.lm, default_paper_params(), 0, Ordering{0, 1, 2, 3}, pc);
    EXPECT_EQ(s.aberrance, 2);
    EXPECT_EQ(s.pairs, 0);
}

TEST(ExactExpectations, EmptyMatchingGivesFullAberrance)
{
    Graph g = Graph::from_edges(2, {{0, 1}});
    auto lm = no_matchings(g, colors({{1, 2}, {3}}));
    auto e = exact_expectations(g, lm, default_paper_params(), 0, Ordering{0, 1});
    EXPECT_NEAR(e.aberrance, K_default(), 1e-15);
}

TEST(ExactExpectations, PairTermUnderIndependenceAndTheTrueValue)
{
    // x = 1, y = 2 non-adjacent with lists {0, 1, 2}; colors 0 and 1 of
    // each are matched to colors 0 and 1 of v
    Graph g = Graph::from_edges(3, {{0, 1}, {0, 2}});
    auto L = colors({{0, 1, 2, 3, 4, 5}, {0, 1, 2}, {0, 1, 2}});
    std::map<std::pair<vertex_t, vertex_t>, CorrespondenceAssignment::Pairs> m;
    m[{0, 1}] = {{0, 0}, {1, 1}};
    m[{0, 2}] = {{0, 0}, {1, 1}};
    CorrespondenceAssignment lm(g, L, m);
    auto e = exact_expectations(g, lm, default_paper_params(), 0, Ordering{0, 1, 2});
    const double K = K_default();
    EXPECT_NEAR(e.pairs_independent, K * K * 2 / 9, 1e-15);
    // both leaves see the same draw at v, so the true value differs
    oracle::Enumerator en{g, lm, K, Rational(2, 3), {0, 1, 2}};
    auto ex = en.run();
    ASSERT_TRUE(ex);
    EXPECT_NEAR(e.pairs, (*ex)[0].pairs, 1e-12);
    EXPECT_GT(std::abs(e.pairs - e.pairs_independent), 1e-6);
}

TEST(ExactExpectations, LastVertexCountsEveryNeighbour)
{
    Graph g = graphs::cycle(5);
    auto lm = no_matchings(g, ListAssignment::uniform(5, 3));
    auto e = exact_expectations(g, lm, default_paper_params(), 4, Ordering{0, 1, 2, 3, 4});
    EXPECT_NEAR(e.subservience, (1 - K_default()) * 2, 1e-15);
    auto first = exact_expectations(g, lm, default_paper_params(), 0, Ordering{0, 1, 2, 3, 4});
    EXPECT_EQ(first.subservience, 0);
}

TEST(ExactExpectations, MatchesEnumerationOnSmallInstances)
{
    gen::Rng rng(54);
    int compared = 0;
    for (int t = 0; t < 400 && compared < 60; ++t) {
        Graph g = gen::gnp(gen::uniform_int(rng, 1, 5), gen::uniform01(rng), rng);
        auto L = gen::random_lists(g, rng, 1, 3, 4);
        auto lm = gen::random_correspondence(g, L, rng, gen::uniform01(rng));
        if (retention_violation(g, lm, default_paper_params().sampler_epsilon)) continue;
        auto rank = gen::random_rank(g.order(), rng);
        oracle::Enumerator en{g, lm, K_default(), Rational(2, 3), rank};
        auto ex = en.run();
        ASSERT_TRUE(ex);
        for (vertex_t v = 0; v < g.order(); ++v) {
            auto e = exact_expectations(g, lm, default_paper_params(), v, rank);
            ASSERT_NEAR(e.aberrance, (*ex)[v].aberrance, 1e-12);
            ASSERT_NEAR(e.pairs, (*ex)[v].pairs, 1e-12);
            ASSERT_NEAR(e.trips, (*ex)[v].trips, 1e-12);
            ASSERT_NEAR(e.subservience, (*ex)[v].subservience, 1e-12);
            ASSERT_NEAR((*ex)[v].p_uncolored, 1 - K_default(), 1e-12);
        }
        ++compared;
    }
    EXPECT_EQ(compared, 60);
}

TEST(LowerBounds, NoLordlierNeighboursGivesZeroAberranceBound)
{
    Graph g = graphs::cycle(5);
    auto lm = identity_correspondence(g, ListAssignment::uniform(5, 2));
    auto b = analytic_lower_bounds(g, lm, default_paper_params(), 0, Ordering{0, 1, 2, 3, 4});
    ASSERT_TRUE(b.aberrance);
    EXPECT_EQ(*b.aberrance, 0.0);
}

TEST(LowerBounds, CliqueOfEgalitarianNeighboursGivesZeroSparseBound)
{
    Graph g = graphs::complete(5);
    auto lm = identity_correspondence(g, ListAssignment::uniform(5, 4));
    auto b = analytic_lower_bounds(g, lm, default_paper_params(), 0, Ordering{0, 1, 2, 3, 4});
    ASSERT_TRUE(b.egalitarian_sparse);
    EXPECT_EQ(*b.egalitarian_sparse, 0.0);
}

TEST(LowerBounds, BipartiteBoundScalesWithA)
{
    // v = 0 with a clique B = {1..4} of equal lists and five subservient
    // sigma-egalitarian neighbours 5..9 with no edges into B.
    std::vector<std::pair<vertex_t, vertex_t>> e;
    for (int i = 1; i <= 9; ++i) e.emplace_back(0, i);
    for (int i = 1; i <= 4; ++i)
        for (int j = i + 1; j <= 4; ++j) e.emplace_back(i, j);
    Graph g = Graph::from_edges(10, e);
    std::vector<std::vector<color_t>> l(10);
    for (int c = 0; c < 9; ++c) l[0].push_back(c);
    for (int i = 1; i <= 4; ++i) l[i] = l[0];
    for (int i = 5; i <= 9; ++i) l[i] = {0, 1, 2, 3, 4};
    auto lm = identity_correspondence(g, ListAssignment(l));
    auto p = default_paper_params();
    auto b = analytic_lower_bounds(g, lm, p, 0, Ordering{0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
    ASSERT_TRUE(b.bipartite_sparse);
    EXPECT_EQ(b.bipartition_A, 5u);
    EXPECT_NEAR(*b.bipartite_sparse, 5 * to_double(derive_constants(p).c_BS) / (1 - to_double(p.epsilon_prime)), 1e-15);
}

TEST(Premises, FloorAndListWindowFailures)
{
    Graph g = graphs::cycle(5);
    auto lm = no_matchings(g, ListAssignment::uniform(5, 3));
    auto rep = check_coloring_premises(g, lm, default_paper_params(), Ordering{0, 1, 2, 3, 4}, 2);
    for (auto& row : rep.rows) {
        EXPECT_FALSE(row.degree_floor);
        EXPECT_FALSE(row.list_window);  // |L| = 3 > Delta = 2
    }
    EXPECT_FALSE(rep.all_checkable_pass());
    EXPECT_EQ(rep.large_delta, "undeterminable");
}

TEST(Premises, LargeBipartiteInstanceWithoutMatchingsPasses)
{
    const int d = 101;
    std::vector<std::pair<vertex_t, vertex_t>> e;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) e.emplace_back(i, d + j);
    Graph g = Graph::from_edges(2 * d, e);
    auto lm = no_matchings(g, ListAssignment::uniform(2 * d, d));
    Ordering rank(static_cast<std::size_t>(2 * d));
    for (int i = 0; i < 2 * d; ++i) rank[i] = i;
    auto rep = check_coloring_premises(g, lm, default_paper_params(), rank);
    EXPECT_TRUE(rep.all_checkable_pass()) << rep.note;
}
