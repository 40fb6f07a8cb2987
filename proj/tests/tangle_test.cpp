#include <gtest/gtest.h>

#include <random>

#include "support.hpp"
#include "tangles/tangle.hpp"

namespace tangles
{
namespace
{

Tangle toward(const Graph& g, int k, const VertexSet& x)
{
    // orient every separation so that its big side contains more of x
    return orientation_by(make_system(g, k), [&](const Separation& s) {
        return (s.small & x).size() < (s.big & x).size();
    });
}

TEST(ForbiddenTriple, Examples)
{
    Graph k2 = path_graph(2);
    VertexSet v = k2.vertices();
    Separation empty{{}, v};
    EXPECT_FALSE(is_forbidden_triple(k2, empty, empty, empty));
    EXPECT_FALSE(is_forbidden_triple(k2, {{0}, v}, {{1}, v}, empty));

    Graph p3 = path_graph(3);
    Separation a{{0, 1}, {1, 2}};
    Separation b{{1, 2}, {0, 1}};
    EXPECT_TRUE(is_forbidden_triple(p3, a, b, {{}, p3.vertices()}));
}

TEST(IsTangle, Examples)
{
    Graph k4 = complete_graph(4);
    EXPECT_TRUE(is_tangle(k4, toward(k4, 3, k4.vertices())));

    Graph k2 = path_graph(2);
    EXPECT_TRUE(is_tangle(k2, toward(k2, 2, k2.vertices())));

    Graph p3 = path_graph(3);
    auto sys = make_system(p3, 2);
    Tangle left = orientation_by(sys, [&](const Separation& s) { return VertexSet({0, 1}).subset_of(s.big); });
    EXPECT_TRUE(is_tangle(p3, left));
    EXPECT_TRUE(is_tangle_naive(p3, left));
    Tangle right = orientation_by(sys, [&](const Separation& s) { return VertexSet({1, 2}).subset_of(s.big); });
    EXPECT_TRUE(is_tangle(p3, right));
    // cut separation toward {0,1} but ({2}, V) reversed
    Tangle mixed = orientation_by(sys, [&](const Separation& s) {
        if (s.small == VertexSet{2} || s.big == VertexSet{2})
            return s.small == p3.vertices();
        return VertexSet({0, 1}).subset_of(s.big);
    });
    EXPECT_FALSE(is_tangle(p3, mixed));
    EXPECT_FALSE(is_tangle_naive(p3, mixed));
}

TEST(IsTangle, RejectsNonOrientations)
{
    Graph k4 = complete_graph(4);
    std::vector<Separation> none;
    try
    {
        is_tangle(k4, 3, none);
        FAIL();
    }
    catch (const TangleError& e)
    {
        EXPECT_STREQ(e.what(), "not an orientation");
    }
    Tangle t = toward(k4, 3, k4.vertices());
    std::vector<Separation> dup = t.members();
    dup.push_back(dup.front().inverse());
    EXPECT_THROW(is_tangle(k4, 3, dup), TangleError);
    EXPECT_TRUE(is_tangle(k4, 3, t.members()));
}

TEST(EnumerateTangles, MatchesNaiveScan)
{
    for (const Graph& g : testing::graphs_up_to(5, false))
    {
        for (int k = 1; k <= 3; ++k)
        {
            if (enumerate_separations(g, k).size() > 16)
                continue;
            std::vector<std::vector<std::uint8_t>> fast;
            std::vector<std::vector<std::uint8_t>> slow;
            for (const auto& t : enumerate_tangles(g, k))
                fast.push_back(t.bits());
            for (const auto& t : testing::naive_tangles(g, k))
                slow.push_back(t.bits());
            std::sort(fast.begin(), fast.end());
            std::sort(slow.begin(), slow.end());
            EXPECT_EQ(fast, slow) << g << " k=" << k;
        }
    }
}

TEST(EnumerateTangles, Examples)
{
    Graph two = Graph::from_edges(6, {{0, 1}, {1, 2}, {2, 0}, {3, 4}, {4, 5}, {5, 3}});
    EXPECT_EQ(enumerate_tangles(two, 1).size(), 2U);
    EXPECT_EQ(enumerate_tangles(path_graph(3), 2).size(), 2U);
    EXPECT_EQ(enumerate_tangles(complete_graph(4), 3).size(), 1U);
    EXPECT_EQ(enumerate_tangles(cycle_graph(4), 3).size(), 0U);
}

TEST(EnumerateTangles, OrderOneAndTwoCount)
{
    for (const Graph& g : testing::graphs_up_to(6, false))
    {
        EXPECT_EQ(enumerate_tangles(g, 1).size(), g.component_sets().size()) << g;
        EXPECT_EQ(enumerate_tangles(g, 2).size(), g.blocks().size()) << g;
    }
}

TEST(EnumerateTangles, FixedOrientationsAndLimit)
{
    Graph p3 = path_graph(3);
    EnumerateOptions opts;
    opts.fixed.push_back({{1, 2}, {0, 1}});
    auto ts = enumerate_tangles(p3, 2, opts);
    ASSERT_EQ(ts.size(), 1U);
    EXPECT_EQ(tangle_core(ts[0], p3), VertexSet({0, 1}));
    EnumerateOptions one;
    one.limit = 1;
    EXPECT_EQ(enumerate_tangles(p3, 2, one).size(), 1U);
}

TEST(TangleCore, Examples)
{
    Graph two = Graph::from_edges(6, {{0, 1}, {1, 2}, {2, 0}, {3, 4}, {4, 5}, {5, 3}});
    std::vector<VertexSet> cores;
    for (const auto& t : enumerate_tangles(two, 1))
        cores.push_back(tangle_core(t, two));
    std::sort(cores.begin(), cores.end(), VertexSet::lex_less);
    EXPECT_EQ(cores, (std::vector<VertexSet>{{0, 1, 2}, {3, 4, 5}}));

    Graph p3 = path_graph(3);
    std::vector<VertexSet> blocks;
    for (const auto& t : enumerate_tangles(p3, 2))
        blocks.push_back(tangle_core(t, p3));
    std::sort(blocks.begin(), blocks.end(), VertexSet::lex_less);
    EXPECT_EQ(blocks, (std::vector<VertexSet>{{0, 1}, {1, 2}}));

    Graph k2 = path_graph(2);
    EXPECT_EQ(tangle_core(enumerate_tangles(k2, 2).at(0), k2), k2.vertices());
}

TEST(TangleCore, CoresAreComponentsAndBlocks)
{
    for (const Graph& g : testing::graphs_up_to(6, false))
    {
        std::vector<VertexSet> comps;
        for (const auto& t : enumerate_tangles(g, 1))
            comps.push_back(tangle_core(t, g));
        std::sort(comps.begin(), comps.end(), VertexSet::lex_less);
        auto expect = g.component_sets();
        std::sort(expect.begin(), expect.end(), VertexSet::lex_less);
        EXPECT_EQ(comps, expect);
        std::vector<VertexSet> blocks;
        for (const auto& t : enumerate_tangles(g, 2))
            blocks.push_back(tangle_core(t, g));
        std::sort(blocks.begin(), blocks.end(), VertexSet::lex_less);
        EXPECT_EQ(blocks, g.blocks());
    }
}

TEST(CheckAxioms, Examples)
{
    Graph k4 = complete_graph(4);
    Tangle t = enumerate_tangles(k4, 3).at(0);
    EXPECT_TRUE(check_axioms(t, k4).all());
    for (const Graph& g : testing::graphs_up_to(5, false))
        for (const auto& one : enumerate_tangles(g, 1))
            EXPECT_TRUE(check_axioms(one, g).all());

    auto bits = t.bits();
    std::size_t idx = 0;
    for (; idx < t.size(); ++idx)
        if (t.system()[idx].order() == 1)
            break;
    ASSERT_LT(idx, t.size());
    bits[idx] ^= 1U;
    Tangle flipped(t.system_ptr(), bits);
    EXPECT_FALSE(check_axioms(flipped, k4).consistent);
    EXPECT_FALSE(is_tangle(k4, flipped));
}

TEST(CheckAxioms, HoldForAllSmallTangles)
{
    for (const Graph& g : testing::graphs_up_to(5, false))
        for (int k = 1; k <= 4; ++k)
            for (const auto& t : enumerate_tangles(g, k))
                EXPECT_TRUE(check_axioms(t, g).all()) << g << " k=" << k;
}

TEST(Tangles, MaximalMembersHaveConnectedStrictBigSide)
{
    for (const Graph& g : testing::graphs_up_to(6, true))
    {
        for (int k = 1; k <= 3; ++k)
        {
            for (const auto& t : enumerate_tangles(g, k))
            {
                auto ms = t.members();
                for (std::size_t i : maximal_elements(ms))
                    EXPECT_TRUE(g.connected_within(ms[i].strict_big())) << g << " " << ms[i];
            }
        }
    }
}

TEST(Extends, Examples)
{
    Graph k4 = complete_graph(4);
    Tangle t3 = enumerate_tangles(k4, 3).at(0);
    EXPECT_TRUE(extends(t3, t3));
    Tangle t2 = enumerate_tangles(k4, 2).at(0);
    EXPECT_TRUE(extends(t2, t3));
    EXPECT_FALSE(extends(t3, t2));

    Graph p3 = path_graph(3);
    auto ts = enumerate_tangles(p3, 2);
    ASSERT_EQ(ts.size(), 2U);
    EXPECT_FALSE(extends(ts[0], ts[1]));
    EXPECT_FALSE(extends(ts[1], ts[0]));
}

TEST(LiftSubgraph, Examples)
{
    Graph k4 = complete_graph(4);
    Tangle t = enumerate_tangles(k4, 3).at(0);
    EXPECT_EQ(lift_subgraph(t, k4, k4), t);

    Graph two = Graph::from_edges(6, {{0, 1}, {1, 2}, {2, 0}, {3, 4}, {4, 5}, {5, 3}});
    Graph tri = two.induced({3, 4, 5});
    Tangle c = enumerate_tangles(tri, 1).at(0);
    Tangle up = lift_subgraph(c, tri, two);
    EXPECT_TRUE(is_tangle(two, up));
    EXPECT_EQ(tangle_core(up, two), VertexSet({3, 4, 5}));

    Graph pend = complete_graph(4);
    pend.add_edge(3, 4);
    Tangle lifted = lift_subgraph(t, k4, pend);
    EXPECT_TRUE(is_tangle(pend, lifted));
    auto all = enumerate_tangles(pend, 3);
    ASSERT_EQ(all.size(), 1U);
    EXPECT_EQ(lifted, all[0]);
    EXPECT_TRUE(lifted.contains({{3, 4}, VertexSet::range(4)}));
}

TEST(LiftSubgraph, AlwaysATangle)
{
    std::mt19937 rng(17);
    for (int trial = 0; trial < 80; ++trial)
    {
        Graph g = testing::random_connected_graph(rng, 7, 0.5);
        Graph sub = g;
        for (const auto& e : g.edges())
            if (rng() % 4 == 0)
                sub.remove_edge(e.u, e.v);
        for (int k = 1; k <= 3; ++k)
            for (const auto& t : enumerate_tangles(sub, k))
                EXPECT_TRUE(is_tangle(g, lift_subgraph(t, sub, g)));
    }
}

TEST(LiftSuppression, Examples)
{
    Graph sub = subdivided_k4(1);
    Graph k4 = suppress_vertex(sub, 4);
    ASSERT_EQ(k4, complete_graph(4));
    Tangle t = enumerate_tangles(k4, 3).at(0);
    Tangle up = lift_suppression(t, sub, 4);
    auto all = enumerate_tangles(sub, 3);
    ASSERT_EQ(all.size(), 1U);
    EXPECT_EQ(up, all[0]);

    Graph sub2 = subdivided_k4(2);
    Graph mid = suppress_vertex(sub2, 5);
    Tangle step1 = lift_suppression(t, mid, 4);
    Tangle step2 = lift_suppression(step1, sub2, 5);
    auto all2 = enumerate_tangles(sub2, 3);
    ASSERT_EQ(all2.size(), 1U);
    EXPECT_EQ(step2, all2[0]);

    EXPECT_THROW(lift_suppression(enumerate_tangles(k4, 2).at(0), sub, 4), TangleError);
}

TEST(LiftSuppression, AlwaysATangle)
{
    std::mt19937 rng(29);
    int checked = 0;
    for (int trial = 0; trial < 200 && checked < 60; ++trial)
    {
        Graph g = testing::random_connected_graph(rng, 7, 0.35);
        g.vertices().for_each([&](int v) {
            if (g.degree(v) != 2)
                return;
            Graph h = suppress_vertex(g, v);
            for (int k = 3; k <= 4; ++k)
            {
                for (const auto& t : enumerate_tangles(h, k))
                {
                    Tangle up = lift_suppression(t, g, v);
                    EXPECT_TRUE(is_tangle(g, up));
                    ++checked;
                }
            }
        });
    }
    EXPECT_GT(checked, 0);
}

TEST(Serialization, TextAndJsonRoundTrip)
{
    Graph k4 = complete_graph(4);
    Tangle t = enumerate_tangles(k4, 3).at(0);
    std::string text = format_tangle(t);
    EXPECT_EQ(text.substr(0, 4), "k 3\n");
    Tangle back = parse_tangle(text, k4);
    EXPECT_EQ(back, t);
    EXPECT_EQ(format_tangle(back), text);
    EXPECT_EQ(parse_tangle(tangle_to_json(t).dump(), k4), t);
    EXPECT_THROW(parse_tangle("k 3\n[0] [0, 1, 2, 3]\n", k4), TangleError);
}

TEST(MaximalTriples, AgreeWithFullScan)
{
    std::mt19937 rng(41);
    for (const Graph& g : testing::graphs_up_to(5, false))
    {
        for (int k = 1; k <= 3; ++k)
        {
            auto sys = make_system(g, k);
            for (const auto& t : enumerate_tangles(g, sys))
            {
                EXPECT_TRUE(is_tangle(g, t));
                EXPECT_TRUE(is_tangle_naive(g, t));
            }
            for (int trial = 0; trial < 10; ++trial)
            {
                std::vector<std::uint8_t> bits(sys->size());
                for (auto& b : bits)
                    b = static_cast<std::uint8_t>(rng() & 1U);
                Tangle r(sys, bits);
                EXPECT_EQ(is_tangle(g, r), is_tangle_naive(g, r));
            }
        }
    }
}

} // namespace
} // namespace tangles
