#include <gtest/gtest.h>

#include "purepairs/blockade.hpp"

using namespace purepairs;

namespace {

std::shared_ptr<const Graph> share(Graph g) { return std::make_shared<const Graph>(std::move(g)); }

// Anticomplete X ⊆ A, Y ⊆ B with the given sizes, by brute force over masks.
bool brute_divergent_pair(const Graph & g, const VertexSet & a, const VertexSet & b, std::size_t x, std::size_t y)
{
    for (std::uint32_t m = 1; m < (1u << a.size()); ++m) {
        if (static_cast<std::size_t>(std::popcount(m)) < x)
            continue;
        std::size_t free = 0;
        for (int v : b) {
            bool ok = true;
            for (std::size_t k = 0; k < a.size(); ++k)
                if (((m >> k) & 1u) && g.adjacent(a[k], v))
                    ok = false;
            free += ok;
        }
        if (free >= y)
            return true;
    }
    return false;
}

}  // namespace

TEST(Blockade, RejectsBadBlocks)
{
    auto g = share(cycle_graph(5));
    EXPECT_THROW(Blockade(g, {{0, 1}, {1, 2}}), PreconditionError);
    EXPECT_THROW(Blockade(g, {{0, 1}, {}}), PreconditionError);
    EXPECT_THROW(Blockade(g, {1, 0}, {{0}, {1}}), PreconditionError);
}

TEST(Metrics, Examples)
{
    auto g = share(edgeless_graph(100));
    VertexSet a, b;
    for (int v = 0; v < 10; ++v) {
        a.push_back(v);
        b.push_back(10 + v);
    }
    Blockade bl(g, {a, b});
    auto m = metrics(bl);
    EXPECT_EQ(m.width, 10);
    EXPECT_NEAR(m.shrinkage, 0.5, 1e-12);
    EXPECT_EQ(m.linkage, 0);
    EXPECT_TRUE(shrinkage_at_most(bl, Rational(1, 2)));
    EXPECT_FALSE(shrinkage_at_most(bl, Rational(49, 100)));

    auto c4 = share(cycle_graph(4));
    EXPECT_EQ(linkage(Blockade(c4, {{0}, {2}})), 0);
    EXPECT_EQ(linkage(Blockade(c4, {{0}, {1}})), 1);
    EXPECT_THROW(metrics(Blockade(share(edgeless_graph(1)), {{0}})), PreconditionError);
}

TEST(Metrics, InvariantUnderReindexing)
{
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        auto g = share(gnp(20, 0.3, seed));
        Blockade b = equipartition(g, 5);
        Blockade r = b.reindex({3, 7, 8, 20, 21});
        auto m1 = metrics(b), m2 = metrics(r);
        EXPECT_EQ(m1.length, m2.length);
        EXPECT_EQ(m1.width, m2.width);
        EXPECT_EQ(m1.shrinkage, m2.shrinkage);
        EXPECT_EQ(m1.linkage, m2.linkage);
    }
}

TEST(Divergence, Examples)
{
    auto e = share(edgeless_graph(4));
    EXPECT_EQ(is_divergent(Blockade(e, {{0, 1}, {2, 3}}), 1, 1, 1000).verdict, Verdict::found);

    auto k = share(complete_bipartite(2, 2));
    EXPECT_EQ(is_divergent(Blockade(k, {{0, 1}, {2, 3}}), Rational(1, 2), Rational(1, 2), 1000).verdict, Verdict::absent);

    auto c5 = share(cycle_graph(5));
    auto r = is_divergent(Blockade(c5, {{0, 1}, {2, 3}}), Rational(1, 2), Rational(1, 2), 1000);
    ASSERT_EQ(r.verdict, Verdict::found);
    for (int x : r.x)
        for (int y : r.y)
            EXPECT_FALSE(c5->adjacent(x, y));
    EXPECT_THROW(is_divergent(Blockade(c5, {{0}, {2}}), 0, 1, 10), PreconditionError);
    EXPECT_THROW(is_divergent(Blockade(c5, {{0}, {2}}), 1, 1, 0), PreconditionError);
}

TEST(Divergence, MatchesBruteForceAndIsMonotone)
{
    const Rational grid[] = {Rational(1, 4), Rational(1, 3), Rational(1, 2), Rational(3, 4), 1};
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        auto g = share(gnp(12, 0.5, seed));
        Blockade b = equipartition(g, 3);
        for (const auto & gamma : grid)
            for (const auto & delta : grid) {
                auto r = is_divergent(b, gamma, delta, 1u << 20);
                bool brute = false;
                for (int p = 0; p < 3; ++p)
                    for (int q = 0; q < 3; ++q)
                        if (p != q)
                            brute = brute || brute_divergent_pair(*g, b.at(p), b.at(q),
                                                                   static_cast<std::size_t>(ceil_rational(gamma * 4)),
                                                                   static_cast<std::size_t>(ceil_rational(delta * 4)));
                ASSERT_EQ(r.verdict == Verdict::found, brute);
                if (r.verdict != Verdict::absent)
                    continue;
                for (const auto & g2 : grid)
                    for (const auto & d2 : grid)
                        if (g2 >= gamma && d2 >= delta) {
                            ASSERT_EQ(is_divergent(b, g2, d2, 1u << 20).verdict, Verdict::absent);
                        }
            }
    }
}

TEST(Equipartition, Examples)
{
    auto b = equipartition(share(edgeless_graph(10)), 3);
    EXPECT_EQ(b.at(0).size(), 4u);
    EXPECT_EQ(b.at(1).size(), 3u);
    EXPECT_EQ(b.at(2).size(), 3u);
    auto s = equipartition(share(edgeless_graph(6)), 6);
    for (int p = 0; p < 6; ++p)
        EXPECT_EQ(s.at(p).size(), 1u);
    auto w = equipartition(share(edgeless_graph(100)), 7);
    EXPECT_EQ(w.width(), 14);
    EXPECT_GE(Rational(w.width()), Rational(100, 14));
    EXPECT_THROW(equipartition(share(edgeless_graph(3)), 4), PreconditionError);
}

TEST(RainbowCopy, Examples)
{
    auto c5 = share(cycle_graph(5));
    Blockade singles(c5, {{0}, {1}, {2}, {3}, {4}});
    auto r = find_rainbow_copy(singles, cycle_graph(5));
    ASSERT_TRUE(r);
    EXPECT_TRUE(is_rainbow_copy(singles, cycle_graph(5), *r));

    Blockade short_b(c5, {{0, 1}, {2, 3}});
    EXPECT_FALSE(find_rainbow_copy(short_b, path_graph(3)));

    auto c6 = share(cycle_graph(6));
    Blockade eq = equipartition(c6, 3);
    auto p3 = find_rainbow_copy(eq, path_graph(3));
    bool brute = false;
    for (int a : eq.at(0))
        for (int b : eq.at(1))
            for (int c : eq.at(2)) {
                int e = c6->adjacent(a, b) + c6->adjacent(b, c) + c6->adjacent(a, c);
                brute = brute || e == 2;
            }
    EXPECT_EQ(p3.has_value(), brute);
}

TEST(RainbowCopy, FirstLastConstraints)
{
    auto p = share(path_graph(4));
    Blockade singles(p, {{0}, {1}, {2}, {3}});
    RainbowConstraints ends{0, 2};
    auto r = find_rainbow_copy(singles, path_graph(3), ends);
    ASSERT_TRUE(r);
    EXPECT_TRUE(is_rainbow_copy(singles, path_graph(3), *r, ends));
    RainbowConstraints middle_first{1, std::nullopt};
    EXPECT_FALSE(find_rainbow_copy(singles, path_graph(3), middle_first));
}

TEST(RainbowCopy, AgreesWithBruteForce)
{
    for (std::uint64_t seed = 0; seed < 150; ++seed) {
        auto g = share(gnp(9, 0.4, seed));
        Blockade b = equipartition(g, 4);
        Graph h = gnp(3, 0.6, seed + 7);
        auto r = find_rainbow_copy(b, h);
        bool brute = false;
        std::vector<int> pick(3);
        for (int p0 = 0; p0 < 4; ++p0)
            for (int p1 = 0; p1 < 4; ++p1)
                for (int p2 = 0; p2 < 4; ++p2) {
                    if (p0 == p1 || p0 == p2 || p1 == p2)
                        continue;
                    for (int a : b.at(p0))
                        for (int c : b.at(p1))
                            for (int d : b.at(p2))
                                brute = brute || is_induced_embedding(*g, h, {a, c, d});
                }
        ASSERT_EQ(r.has_value(), brute) << seed;
        if (r) {
            ASSERT_TRUE(is_rainbow_copy(b, h, *r));
        }
    }
}

TEST(Blockade, JsonRoundTrip)
{
    auto g = share(gnp(15, 0.3, 2));
    Blockade b = equipartition(g, 4);
    Blockade back = blockade_from_json(g, blockade_to_json(b));
    EXPECT_EQ(back.blocks(), b.blocks());
    EXPECT_EQ(back.indices(), b.indices());
    auto other = share(gnp(15, 0.3, 3));
    EXPECT_THROW(blockade_from_json(other, blockade_to_json(b)), PreconditionError);
}
