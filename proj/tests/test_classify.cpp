#include "critgraph.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

using namespace critgraph;

namespace {

// Charge-only parameter set: epsilon and k as given, lambda = 1.
ParamSet unit_lambda(Rational eps, std::int64_t k)
{
    ParamSet p = make_params(Rational(1, 1000), Rational(1, 100), k);
    p.epsilon = eps;
    p.log_base = Rational(k);
    return p;
}

Graph star(int leaves)
{
    std::vector<std::pair<vertex_t, vertex_t>> e;
    for (int i = 1; i <= leaves; ++i) e.emplace_back(0, i);
    return Graph::from_edges(leaves + 1, e);
}

ListAssignment sized(const std::vector<int>& sizes)
{
    ListAssignment L(static_cast<int>(sizes.size()));
    for (std::size_t v = 0; v < sizes.size(); ++v) {
        std::vector<color_t> l;
        for (int c = 0; c < sizes[v]; ++c) l.push_back(c);
        L.set(static_cast<vertex_t>(v), l);
    }
    return L;
}

// Parameters with a negligible log term and a comfortable egalitarian-sparse
// constant, used for fixtures that are saved through the static classes.
ParamSet sparse_friendly()
{
    ParamSet p = make_params(Rational(1, 1000000), Rational(1, 1000), 1000);
    p.log_base = parse_rational("1e30");
    return p;
}

// K_{d,d} with |L| = d everywhere plus a vertex b of list size 2 joined to
// two vertices x, y of the left side, whose lists grow by one. The grown
// lists make the right side subservient to x and y, so they leave the
// static class and b is absorbed only after them.
struct SavedFixture {
    Graph g;
    ListAssignment L;
    vertex_t b, x, y;
};

SavedFixture bipartite_with_pendant(int d)
{
    std::vector<std::pair<vertex_t, vertex_t>> e;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) e.emplace_back(i, d + j);
    const vertex_t b = 2 * d;
    e.emplace_back(b, 0);
    e.emplace_back(b, 1);
    std::vector<int> sizes(static_cast<std::size_t>(2 * d + 1), d);
    sizes[0] = sizes[1] = d + 1;
    sizes[b] = 2;
    return {Graph::from_edges(2 * d + 1, e), sized(sizes), b, 0, 1};
}

}  // namespace

TEST(PartitionNeighbors, UniformListsAreAllEgalitarian)
{
    Graph g = graphs::petersen();
    auto L = ListAssignment::uniform(10, 3);
    Analysis a(g, L, default_paper_params());
    auto np = partition_neighbors(a, 0);
    EXPECT_EQ(np.egal.size(), 3u);
    EXPECT_TRUE(np.subserv.empty());
    EXPECT_TRUE(np.lordlier.empty());
}

TEST(PartitionNeighbors, EmptyListIsSubservientAndNotSigmaEgalitarian)
{
    Graph g = star(2);
    auto L = sized({3, 0, 3});
    Analysis a(g, L, default_paper_params());
    auto np = partition_neighbors(a, 0);
    EXPECT_EQ(np.subserv, std::vector<vertex_t>{1});
    EXPECT_EQ(np.egal_sigma, std::vector<vertex_t>{2});
}

TEST(PartitionNeighbors, SlightlyLordlierButNotLordlier)
{
    // center with 11 leaves: omega = 2, Gap = 10
    Graph g = star(11);
    // 1001 clears |L(v)| + alpha Gap(v) but not (1 + alpha)|L(v)|
    std::vector<int> sizes(12, 1000);
    sizes[1] = 1001;
    auto L = sized(sizes);
    Analysis a(g, L, default_paper_params());
    ASSERT_EQ(a.gap(0), 10);
    auto np = partition_neighbors(a, 0);
    auto has = [](const std::vector<vertex_t>& s, vertex_t x) { return std::find(s.begin(), s.end(), x) != s.end(); };
    EXPECT_TRUE(has(np.slightly_lordlier, 1));
    EXPECT_FALSE(has(np.lordlier, 1));
}

TEST(PartitionNeighbors, ThreeClassesPartitionTheNeighbourhood)
{
    gen::Rng rng(31);
    for (int t = 0; t < 1000; ++t) {
        Graph g = gen::gnp(gen::uniform_int(rng, 2, 14), 0.4, rng);
        auto L = gen::random_lists(g, rng, 0, 12, 15);
        auto p = t % 2 ? default_paper_params() : make_params(Rational(1, 60), Rational(2, 5), 12);
        Analysis a(g, L, p);
        for (vertex_t v = 0; v < g.order(); ++v) {
            auto np = partition_neighbors(a, v);
            std::vector<vertex_t> all;
            for (auto* s : {&np.subserv, &np.egal, &np.lordlier}) all.insert(all.end(), s->begin(), s->end());
            std::sort(all.begin(), all.end());
            std::vector<vertex_t> nb = g.neighbors(v);
            std::sort(nb.begin(), nb.end());
            ASSERT_EQ(all, nb);
        }
    }
}

TEST(Charge, SaveOneGapZero)
{
    // K_4 with lists of size k - 1 = 3: Save 1, Gap 0
    auto p = unit_lambda(Rational(1, 100), 4);
    Graph g = graphs::complete(4);
    auto L = ListAssignment::uniform(4, 3);
    Analysis a(g, L, p);
    EXPECT_EQ(charge_form(a, 0), (Affine{1 + 7 * p.epsilon, p.epsilon}));
    EXPECT_NEAR(to_double(charge(a, 0)), 1 + 0.01 + 0.07, 1e-15);
}

TEST(Charge, SaveZeroFullGap)
{
    // star center with d leaves: |L| = d + 1 = k, Save 0
    Graph g = star(5);
    auto L = sized({6, 1, 1, 1, 1, 1});
    ParamSet p = default_paper_params();
    p.k = 6;
    Analysis a(g, L, p);
    const int d = 5;
    EXPECT_EQ(a.save(0), 0);
    EXPECT_EQ(charge_form(a, 0), (Affine{-2 * p.epsilon * a.gap(0), p.epsilon}));
    EXPECT_EQ(a.gap(0), d + 1 - 2);
}

TEST(Charge, UnitLogTermArithmetic)
{
    // Save 2, Gap 5, |L| = k, eps = 1/10, lambda = 1: 2 - 1 + 0.1
    Graph g = star(6);
    auto L = sized({5, 1, 1, 1, 1, 1, 1});
    auto p = unit_lambda(Rational(1, 10), 5);
    p.epsilon_prime = Rational(1, 2);
    Analysis a(g, L, p);
    ASSERT_EQ(a.save(0), 2);
    ASSERT_EQ(a.gap(0), 5);
    EXPECT_EQ(charge_form(a, 0).c0 + charge_form(a, 0).c1, Rational(11, 10));
    EXPECT_NEAR(to_double(charge(a, 0)), 1.1, 1e-30);
}

TEST(Charge, ListAboveKIsAPreconditionViolation)
{
    Graph g = graphs::complete(2);
    auto L = sized({5, 5});
    ParamSet p = default_paper_params();
    p.k = 4;
    Analysis a(g, L, p);
    EXPECT_THROW(charge_form(a, 0), precondition_error);
}

TEST(WaysToSave, AberrantWhenEveryNeighbourIsLordlier)
{
    Graph g = star(3);
    auto L = sized({5, 6, 6, 6});
    Analysis a(g, L, default_paper_params());
    auto np = partition_neighbors(a, 0);
    ASSERT_EQ(np.lordlier.size(), 3u);
    ASSERT_LE(a.cal().static_need(a.save(0)) / a.cal().dc.c_A, Real(3));
    EXPECT_TRUE(is_aberrant(a, 0, np));
}

TEST(WaysToSave, SlightlyAberrantFalseWithoutGap)
{
    Graph g = graphs::complete(4);
    auto L = sized({1, 50, 50, 50});
    Analysis a(g, L, default_paper_params());
    EXPECT_EQ(a.gap(0), 0);
    EXPECT_FALSE(is_slightly_aberrant(a, 0, partition_neighbors(a, 0)));
}

TEST(WaysToSave, LastVertexIsNotPrioritized)
{
    Graph g = graphs::cycle(5);
    auto L = ListAssignment::uniform(5, 2);
    Analysis a(g, L, default_paper_params());
    Ordering rank{0, 1, 2, 3, 4};
    ASSERT_GT(a.cal().priority_need(a.save(4)), 0);
    EXPECT_FALSE(is_prioritized(a, 4, rank));
    EXPECT_THROW(is_prioritized(a, 4, std::nullopt), precondition_error);
}

TEST(WaysToSave, PrioritizedCountsLaterNeighbours)
{
    Graph g = star(4);
    auto L = sized({4, 1, 1, 1, 1});  // Save(center) = 1, bar ~ 1/(1-K)
    Analysis a(g, L, default_paper_params());
    Ordering first{0, 1, 2, 3, 4};
    EXPECT_EQ(later_neighbors(a, 0, first), 4);
    EXPECT_TRUE(is_prioritized(a, 0, first));
}

TEST(HalfEgalitarianBipartition, AbsentWithoutSubservientNeighbours)
{
    Graph g = graphs::complete(5);
    auto L = ListAssignment::uniform(5, 4);
    Analysis a(g, L, default_paper_params());
    auto np = partition_neighbors(a, 0);
    EXPECT_FALSE(find_half_egalitarian_bipartition(a, 0, np));
}

TEST(HalfEgalitarianBipartition, CliquePlusIsolatedSubservientNeighbour)
{
    // v = 0; 1..4 a clique with |L| = |L(v)|; 5 has a smaller list and no
    // neighbour among 1..4.
    std::vector<std::pair<vertex_t, vertex_t>> e{{0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5}};
    for (int i = 1; i <= 4; ++i)
        for (int j = i + 1; j <= 4; ++j) e.emplace_back(i, j);
    Graph g = Graph::from_edges(6, e);
    auto L = sized({10, 10, 10, 10, 10, 5});
    Analysis a(g, L, default_paper_params());
    auto np = partition_neighbors(a, 0);
    for (auto recipe : {BipartitionRecipe::EgalitarianSet, BipartitionRecipe::MaxClique}) {
        auto w = find_half_egalitarian_bipartition(a, 0, np, recipe);
        ASSERT_TRUE(w);
        EXPECT_EQ(w->A, std::vector<vertex_t>{5});
        std::vector<vertex_t> B = w->B;
        std::sort(B.begin(), B.end());
        EXPECT_EQ(B, (std::vector<vertex_t>{1, 2, 3, 4}));
        EXPECT_TRUE(is_half_egalitarian_bipartition(a, 0, np, *w));
    }
    // exhaustive search maximises |A| only; any qualifying B may come back
    auto x = find_half_egalitarian_bipartition(a, 0, np, BipartitionRecipe::Exhaustive);
    ASSERT_TRUE(x);
    EXPECT_EQ(x->A, std::vector<vertex_t>{5});
    EXPECT_TRUE(is_half_egalitarian_bipartition(a, 0, np, *x));
}

TEST(HalfEgalitarianBipartition, NegativeSlackMeansAbsent)
{
    std::vector<std::pair<vertex_t, vertex_t>> e{{0, 1}, {0, 2}};
    Graph g = Graph::from_edges(3, e);
    auto L = sized({10, 10, 5});
    ParamSet p = default_paper_params();
    p.delta = p.epsilon_prime / 2;
    Analysis a(g, L, p);
    EXPECT_FALSE(find_half_egalitarian_bipartition(a, 0, partition_neighbors(a, 0), BipartitionRecipe::Exhaustive));
}

TEST(HalfEgalitarianBipartition, RecipesProduceValidWitnessesAndExhaustiveIsBest)
{
    gen::Rng rng(32);
    auto p = make_params(Rational(1, 22000), Rational(1, 50));
    int found = 0;
    for (int t = 0; t < 400; ++t) {
        Graph g = gen::gnp(gen::uniform_int(rng, 4, 12), gen::uniform01(rng), rng);
        auto L = gen::random_lists(g, rng, 2, 9, 12);
        Analysis a(g, L, p);
        for (vertex_t v = 0; v < g.order(); ++v) {
            auto np = partition_neighbors(a, v);
            auto best = find_half_egalitarian_bipartition(a, v, np, BipartitionRecipe::Exhaustive);
            for (auto r : {BipartitionRecipe::EgalitarianSet, BipartitionRecipe::MaxClique}) {
                auto w = find_half_egalitarian_bipartition(a, v, np, r);
                if (!w) continue;
                ++found;
                ASSERT_TRUE(is_half_egalitarian_bipartition(a, v, np, *w));
                ASSERT_TRUE(best);
                ASSERT_GE(best->A.size(), w->A.size());
            }
            // B = E(v) is optimal because each A-condition only grows with B
            auto full = find_half_egalitarian_bipartition(a, v, np, BipartitionRecipe::EgalitarianSet);
            ASSERT_EQ(full.has_value(), best.has_value());
            if (full) ASSERT_EQ(full->A.size(), best->A.size());
        }
    }
    EXPECT_GT(found, 0);
}

TEST(Heaviness, ZeroChargeZeroGapIsHeavy)
{
    // K_3 with |L| = 4 = k - 1 and eps = 1/8: ch = -1 + 1/8 + 7/8 = 0
    Graph g = graphs::complete(3);
    auto L = ListAssignment::uniform(3, 4);
    auto p = unit_lambda(Rational(1, 8), 5);
    p.epsilon_prime = Rational(1, 2);
    Analysis a(g, L, p);
    ASSERT_EQ(sign(charge_form(a, 0), a.cal().lambda), 0);
    ASSERT_EQ(a.gap(0), 0);
    EXPECT_TRUE(is_heavy(a, 0));
    EXPECT_FALSE(classify_vertex(a, 0).flags.normal);
}

TEST(Heaviness, NegativeChargeIsNotExtremelyHeavy)
{
    EXPECT_FALSE(extremely_heavy_from(Affine{Rational(-1), 0}, 3, default_paper_params(), Real(1)));
    EXPECT_FALSE(extremely_heavy_from(Affine{Rational(-1), 0}, 0, default_paper_params(), Real(1)));
}

TEST(Heaviness, VeryLordlyExample)
{
    // d = 10, one edge among the neighbours (omega = 3, Gap = 8), three
    // subservient neighbours.
    std::vector<std::pair<vertex_t, vertex_t>> e;
    for (int i = 1; i <= 10; ++i) e.emplace_back(0, i);
    e.emplace_back(1, 2);
    Graph g = Graph::from_edges(11, e);
    std::vector<int> sizes(11, 10);
    sizes[8] = sizes[9] = sizes[10] = 1;
    auto L = sized(sizes);
    Analysis a(g, L, default_paper_params());
    ASSERT_EQ(a.gap(0), 8);
    auto np = partition_neighbors(a, 0);
    ASSERT_EQ(np.subserv.size(), 3u);
    EXPECT_TRUE(is_very_lordly(a, 0, np));
}

TEST(Heaviness, SponsoredCountsQualifyingHeavyNeighbours)
{
    // every vertex of K_4 with |L| = 1: Save 3, very heavy; Gap 0 so the
    // sponsor Save threshold is 0 and degrees are equal.
    Graph g = graphs::complete(4);
    auto L = ListAssignment::uniform(4, 1);
    Analysis a(g, L, default_paper_params());
    EXPECT_TRUE(is_sponsored(a, 0));
}

TEST(Heaviness, NormalIsExactlyNotHeavy)
{
    gen::Rng rng(33);
    for (int t = 0; t < 300; ++t) {
        Graph g = gen::gnp(gen::uniform_int(rng, 1, 12), 0.5, rng);
        auto L = gen::random_lists(g, rng, 0, 8, 10);
        ParamSet p = t % 2 ? default_paper_params() : unit_lambda(Rational(1, 60), 10);
        p.k = 10;
        Analysis a(g, L, p);
        for (vertex_t v = 0; v < g.order(); ++v) {
            auto r = classify_vertex(a, v);
            ASSERT_NE(r.flags.heavy, r.flags.normal);
            ASSERT_EQ(r.flags.heavy, heavy_from(charge_form(a, v), a.gap(v), p, a.cal().lambda));
            ASSERT_EQ(r.omega, oracle::clique_at(g, v));
        }
    }
}

TEST(IsSaved, SandwichViolationsAreDistinct)
{
    Graph g = graphs::complete(3);
    auto L = ListAssignment::uniform(3, 3);
    Analysis a(g, L, default_paper_params());
    auto r = is_saved(a);
    EXPECT_EQ(r.status, SavedStatus::ListOutsideSandwich);
    ASSERT_TRUE(r.offending);

    auto big = ListAssignment::uniform(3, 2);
    ParamSet p = default_paper_params();
    p.k = 1;
    Analysis b(g, big, p);
    EXPECT_EQ(is_saved(b).status, SavedStatus::ListTooLarge);
}

TEST(IsSaved, EveryVertexStaticallySavedGivesOneLayer)
{
    const int d = 200;
    std::vector<std::pair<vertex_t, vertex_t>> e;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) e.emplace_back(i, d + j);
    Graph g = Graph::from_edges(2 * d, e);
    auto L = ListAssignment::uniform(2 * d, d);
    Analysis a(g, L, sparse_friendly());
    ASSERT_TRUE(a.cal().dc.c_ES > 0);
    auto r = is_saved(a);
    ASSERT_TRUE(r.saved()) << to_string(r.status);
    for (vertex_t v = 0; v < g.order(); ++v) EXPECT_EQ(r.layer[v], 0);
}

TEST(IsSaved, PendantJoinsALaterLayer)
{
    auto f = bipartite_with_pendant(200);
    Analysis a(f.g, f.L, sparse_friendly());
    auto r = is_saved(a);
    ASSERT_TRUE(r.saved()) << to_string(r.status);
    EXPECT_EQ(r.layer[2], 0);
    EXPECT_EQ(r.layer[200], 0);
    EXPECT_EQ(r.layer[f.x], 1);
    EXPECT_EQ(r.layer[f.y], 1);
    EXPECT_EQ(r.layer[f.b], 2);
    // later layers come first in the ordering
    EXPECT_LT(r.ordering[f.b], r.ordering[f.x]);
}

TEST(BuildLayers, PathFixedPoint)
{
    Graph g = graphs::path(3);
    std::vector<char> seed{1, 0, 1};
    auto layer = build_layers(g, seed, [](vertex_t, long long c) { return c >= 2; });
    EXPECT_EQ(layer, (std::vector<int>{0, 1, 0}));
    auto rank = ordering_from_layers(layer);
    EXPECT_LT(rank[1], rank[0]);
    EXPECT_LT(rank[1], rank[2]);
    auto none = build_layers(g, seed, [](vertex_t, long long c) { return c >= 3; });
    EXPECT_EQ(none[1], -1);
    EXPECT_LT(ordering_from_layers(none)[1], ordering_from_layers(none)[0]);
}

TEST(Structure, FactCheckersHoldOnRandomInstances)
{
    gen::Rng rng(34);
    std::size_t list_checked = 0, heavy_checked = 0, normal_checked = 0;
    for (int t = 0; t < 200; ++t) {
        Graph g = gen::gnp(gen::uniform_int(rng, 3, 14), gen::uniform01(rng), rng);
        ListAssignment L(g.order());
        for (vertex_t v = 0; v < g.order(); ++v) {
            std::vector<color_t> l;
            for (int c = 0; c < g.degree(v) + 1 - gen::uniform_int(rng, 0, 1); ++c) l.push_back(c);
            L.set(v, l);
        }
        ParamSet p = make_params(Rational(1, 60), Rational(2, 5), std::max(1, L.max_size()));
        p.log_base = Rational(p.k);
        Analysis a(g, L, p);
        auto f1 = check_list_size_bounds(a);
        auto f2 = check_heavy_vertex_facts(a);
        auto f3 = check_normal_gap_bound(a);
        auto f4 = check_very_lordly_promotion(a);
        ASSERT_TRUE(f1.pass());
        ASSERT_TRUE(f2.pass());
        ASSERT_TRUE(f3.pass());
        ASSERT_TRUE(f4.pass());
        list_checked += f1.checked;
        heavy_checked += f2.checked;
        normal_checked += f3.checked;
    }
    EXPECT_GT(list_checked, 0u);
    EXPECT_GT(heavy_checked, 0u);
    EXPECT_GT(normal_checked, 0u);
}

TEST(Structure, ListSizeBoundsSkipNegativeSave)
{
    // a star centre with a list far above its degree is not extremely heavy
    // and would break |L(v)| > k/3 if it were checked
    Graph g = Graph::from_edges(3, {{0, 1}, {0, 2}});
    ListAssignment L(3);
    L.set(0, {0, 1, 2, 3, 4, 5, 6, 7});
    L.set(1, {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19, 20, 21, 22, 23, 24, 25, 26, 27, 28, 29});
    L.set(2, L[1]);
    ParamSet p = default_paper_params();
    p.k = 30;
    p.log_base = parse_rational("1e30");
    Analysis a(g, L, p);
    ASSERT_LT(a.save(0), 0);
    ASSERT_FALSE(is_extremely_heavy(a, 0));
    auto f = check_list_size_bounds(a);
    EXPECT_TRUE(f.pass());
    EXPECT_EQ(f.checked, 0u);
}

TEST(Structure, VeryLordlyCheckerNeedsItsParameterHypotheses)
{
    Graph g = graphs::complete(3);
    auto L = ListAssignment::uniform(3, 2);
    ParamSet p = make_params(Rational(1, 60), Rational(2, 5), 3);
    p.alpha = Rational(1, 2);
    Analysis a(g, L, p);
    EXPECT_EQ(check_very_lordly_promotion(a).checked, 0u);
}
