#include <gtest/gtest.h>

#include "purepairs/check.hpp"
#include "purepairs/expansion.hpp"
#include "purepairs/synthetic.hpp"

using namespace purepairs;

namespace {

std::shared_ptr<const Graph> share(Graph g) { return std::make_shared<const Graph>(std::move(g)); }

// Blocks of the given size; random edges only between consecutive blocks.
Blockade chain(int blocks, int size, double p, std::uint64_t seed)
{
    Graph g(blocks * size);
    for (int b = 0; b + 1 < blocks; ++b)
        for (int x = 0; x < size; ++x)
            for (int y = 0; y < size; ++y)
                if (unit_from(seed, static_cast<std::uint64_t>((b * size + x) * blocks * size + y)) < p)
                    g.add_edge(b * size + x, (b + 1) * size + y);
    return equipartition(share(std::move(g)), blocks);
}

}  // namespace

TEST(CheckExpanding, Examples)
{
    Blockade kb(share(complete_bipartite(4, 5)), {{0, 1, 2, 3}, {4, 5, 6, 7, 8}});
    EXPECT_EQ(check_expanding(kb, 1000).verdict, ExpansionVerdict::pass);

    Blockade anti(share(edgeless_graph(6)), {{0, 1, 2}, {3, 4, 5}});
    auto r = check_expanding(anti, 1);
    ASSERT_EQ(r.verdict, ExpansionVerdict::fail);
    EXPECT_EQ(r.witness.size(), 1u);
    EXPECT_TRUE(check::expanding(anti, 1).has_value());
}

TEST(CheckExpanding, AgreesWithBruteForce)
{
    const Rational taus[] = {Rational(1, 2), 1, 2, 4};
    for (std::uint64_t seed = 0; seed < 80; ++seed) {
        Blockade b = equipartition(share(gnp(15, 0.45, seed)), 3);
        for (const auto & tau : taus) {
            auto fast = check_expanding(b, tau);
            ASSERT_NE(fast.verdict, ExpansionVerdict::sampled_pass);
            ASSERT_EQ(fast.verdict == ExpansionVerdict::pass, !check::expanding(b, tau).has_value()) << seed;
        }
    }
}

TEST(CheckExpanding, SamplingReportsCount)
{
    Blockade b = equipartition(share(gnp(40, 0.6, 3)), 2);
    auto r = check_expanding(b, Rational(1, 2), 8, 5, 100);
    ASSERT_NE(r.verdict, ExpansionVerdict::pass);
    if (r.verdict == ExpansionVerdict::sampled_pass) {
        EXPECT_EQ(r.samples, 2u * (20u + 100u));
    }
}

TEST(ExpandingContraction, CompletePairIsUntouched)
{
    Blockade kb(share(complete_bipartite(4, 4)), {{0, 1, 2, 3}, {4, 5, 6, 7}});
    auto r = expanding_contraction(kb, Rational(1, 8));
    EXPECT_TRUE(r.z.empty());
    EXPECT_EQ(r.contraction.blocks(), kb.blocks());
    EXPECT_EQ(r.tau, 2);
}

TEST(ExpandingContraction, DivergentInputReportsWitness)
{
    Blockade anti(share(edgeless_graph(16)), {{0, 1, 2, 3, 4, 5, 6, 7}, {8, 9, 10, 11, 12, 13, 14, 15}});
    try {
        expanding_contraction(anti, Rational(1, 8));
        FAIL() << "expected a divergence witness";
    } catch (const DivergenceWitness & e) {
        for (int x : e.x)
            for (int y : e.y)
                EXPECT_FALSE(anti.host().adjacent(x, y));
        EXPECT_GE(e.x.size(), 1u);
        EXPECT_GE(e.y.size(), 1u);
    }
    EXPECT_THROW(expanding_contraction(anti, Rational(1, 8), Mode::relaxed), DivergenceWitness);
    EXPECT_THROW(expanding_contraction(anti, Rational(1, 4)), HypothesisViolation);
}

TEST(ExpandingContraction, SeededInstancePassesExhaustiveCheck)
{
    Blockade a = nondivergent_blockade(2, 10, 7, Rational(1, 8), Rational(1, 8));
    ASSERT_EQ(is_divergent(a, Rational(1, 8), Rational(1, 8), 1u << 24).verdict, Verdict::absent);
    auto r = expanding_contraction(a, Rational(1, 8));
    EXPECT_EQ(r.final_check.verdict, ExpansionVerdict::pass);
    EXPECT_FALSE(check::expanding(r.contraction, r.tau).has_value());
    EXPECT_GE(relative_size(a, r.contraction), Rational(3, 4));
}

TEST(ExpandingContraction, NonDivergentCorpus)
{
    int done = 0, nontrivial = 0;
    for (std::uint64_t seed = 0; seed < 120; ++seed) {
        // two blocks of 9..12 vertices: the only shape at this scale where
        // non-divergence does not force completeness between blocks
        const int k = 2;
        Rational delta(1, 8);
        Blockade a = nondivergent_blockade(k, 9 + static_cast<int>(seed % 4), seed, delta, Rational(1, 8));
        auto r = expanding_contraction(a, delta);
        ASSERT_FALSE(check::expanding(r.contraction, r.tau).has_value()) << seed;
        ASSERT_GE(relative_size(a, r.contraction), 1 - delta * k);
        nontrivial += !r.z.empty();
        ++done;
    }
    EXPECT_EQ(done, 120);
    EXPECT_GT(nontrivial, 30);
}

TEST(RainbowPath, Examples)
{
    Blockade kb(share(complete_bipartite(3, 3)), {{0, 1, 2}, {3, 4, 5}});
    auto p = rainbow_path(kb, kb, 0, 1, 1, {3, 4, 5}, Rational(1, 8), Rational(1, 8));
    EXPECT_EQ(p.size(), 2u);
    EXPECT_FALSE(check::induced_path(kb.host(), p).has_value());

    Graph g(4);
    g.add_edge(0, 1);
    Blockade lonely(share(g), {{0, 1}, {2, 3}});
    try {
        rainbow_path(lonely, lonely, 0, 0, 1, {2, 3}, Rational(1, 8), Rational(1, 8));
        FAIL() << "expected failure";
    } catch (const RainbowPathFailure & e) {
        EXPECT_EQ(e.layer, 1);
    }
}

TEST(RainbowPath, ChainMatchesExhaustiveSearch)
{
    Blockade b = chain(3, 5, 0.4, 11);
    const Graph & g = b.host();
    for (int v : b.at(0)) {
        bool oracle = find_rainbow_copy(b, path_graph(3), RainbowConstraints{0, 2}).has_value() &&
                      g.has_neighbour_in(v, b.at(1));
        std::optional<std::vector<int>> got;
        try {
            got = rainbow_path(b, b, 0, v, 2, b.at(2), Rational(1, 8), Rational(1, 8));
        } catch (const RainbowPathFailure &) {
        }
        bool exists = false;
        for (int x : b.at(1))
            if (g.adjacent(v, x) && g.has_neighbour_in(x, b.at(2)))
                exists = true;
        ASSERT_EQ(got.has_value(), exists);
        if (got) {
            EXPECT_EQ(got->size(), 3u);
            EXPECT_FALSE(check::induced_path(g, *got).has_value());
            EXPECT_TRUE(oracle);
        }
    }
}
