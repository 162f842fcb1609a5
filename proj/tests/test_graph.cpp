#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "purepairs/embedding.hpp"
#include "purepairs/io.hpp"
#include "purepairs/purepair.hpp"

using namespace purepairs;

namespace {

Graph from_mask(int n, std::uint32_t mask)
{
    Graph g(n);
    int bit = 0;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v, ++bit)
            if ((mask >> bit) & 1u)
                g.add_edge(u, v);
    return g;
}

// Brute force over all ordered pairs of disjoint vertex masks.
bool brute_anticomplete(const Graph & g, int a_min, int b_min)
{
    int n = g.n();
    for (std::uint32_t a = 1; a < (1u << n); ++a) {
        if (std::popcount(a) < a_min)
            continue;
        std::uint32_t rest = ((1u << n) - 1) & ~a;
        for (std::uint32_t b = rest; b; b = (b - 1) & rest) {
            if (std::popcount(b) < b_min)
                continue;
            bool ok = true;
            for (int u = 0; u < n && ok; ++u)
                if ((a >> u) & 1u)
                    for (int v = 0; v < n && ok; ++v)
                        if (((b >> v) & 1u) && g.adjacent(u, v))
                            ok = false;
            if (ok)
                return true;
        }
    }
    return false;
}

std::vector<Graph> small_patterns()
{
    std::vector<Graph> reps;
    for (int n = 1; n <= 4; ++n)
        for (std::uint32_t m = 0; m < (1u << (n * (n - 1) / 2)); ++m) {
            Graph h = from_mask(n, m);
            bool seen = false;
            for (const auto & r : reps)
                if (are_isomorphic(r, h))
                    seen = true;
            if (!seen)
                reps.push_back(h);
        }
    return reps;
}

}  // namespace

TEST(Graph, ComplementOfCompleteIsEdgeless)
{
    EXPECT_EQ(complement(complete_graph(4)), edgeless_graph(4));
}

TEST(Graph, ComplementIsInvolution)
{
    EXPECT_EQ(complement(complement(cycle_graph(5))), cycle_graph(5));
}

TEST(Graph, FiveCycleIsSelfComplementary)
{
    EXPECT_TRUE(are_isomorphic(complement(cycle_graph(5)), cycle_graph(5)));
}

TEST(Graph, ContainsExamples)
{
    auto p4 = contains(cycle_graph(5), path_graph(4));
    ASSERT_TRUE(p4);
    EXPECT_TRUE(is_induced_embedding(cycle_graph(5), path_graph(4), p4->map));
    EXPECT_FALSE(contains(cycle_graph(5), complete_graph(3)));
    auto c5 = contains(petersen_graph(), cycle_graph(5));
    ASSERT_TRUE(c5);
    EXPECT_TRUE(is_induced_embedding(petersen_graph(), cycle_graph(5), c5->map));
}

TEST(Graph, PetersenShape)
{
    Graph p = petersen_graph();
    EXPECT_EQ(p.edge_count(), 15);
    for (int v = 0; v < 10; ++v)
        EXPECT_EQ(p.degree(v), 3);
    EXPECT_FALSE(contains(p, complete_graph(3)));
    EXPECT_FALSE(contains(p, cycle_graph(4)));
}

TEST(Graph, Sparse)
{
    EXPECT_TRUE(is_sparse(edgeless_graph(5), Rational(1, 10)));
    EXPECT_FALSE(is_sparse(complete_graph(4), Rational(1, 2)));
    EXPECT_TRUE(is_sparse(cycle_graph(10), Rational(1, 4)));
    EXPECT_THROW(is_sparse(cycle_graph(10), Rational(0)), PreconditionError);
}

TEST(Graph, ContainmentCommutesWithComplement)
{
    auto patterns = small_patterns();
    ASSERT_EQ(patterns.size(), 1u + 2u + 4u + 11u);
    std::vector<Graph> pc;
    for (const auto & h : patterns)
        pc.push_back(complement(h));
    for (int n = 1; n <= 6; ++n)
        for (std::uint32_t m = 0; m < (1u << (n * (n - 1) / 2)); ++m) {
            Graph g = from_mask(n, m);
            Graph gc = complement(g);
            for (std::size_t i = 0; i < patterns.size(); ++i)
                ASSERT_EQ(contains(g, patterns[i]).has_value(), contains(gc, pc[i]).has_value());
        }
}

TEST(PurePair, AnticompleteExamples)
{
    auto r = find_anticomplete_pair(edgeless_graph(4), 2, 2, 1000);
    ASSERT_EQ(r.verdict, Verdict::found);
    EXPECT_TRUE(is_pure_pair(edgeless_graph(4), *r.pair));
    EXPECT_EQ(find_anticomplete_pair(complete_graph(5), 1, 1, 1000).verdict, Verdict::absent);
    EXPECT_EQ(find_anticomplete_pair(cycle_graph(5), 2, 2, 1000).verdict, Verdict::absent);
    EXPECT_FALSE(brute_anticomplete(cycle_graph(5), 2, 2));
    EXPECT_THROW(find_anticomplete_pair(cycle_graph(5), 2, 2, 0), PreconditionError);
}

TEST(PurePair, PurePairExamples)
{
    Graph k33 = complete_bipartite(3, 3);
    auto r = find_pure_pair(k33, 3, 10000);
    ASSERT_EQ(r.verdict, Verdict::found);
    EXPECT_EQ(r.pair->kind, PairKind::complete);
    EXPECT_TRUE(is_pure_pair(k33, *r.pair));
    auto e = find_pure_pair(edgeless_graph(4), 2, 1000);
    ASSERT_EQ(e.verdict, Verdict::found);
    EXPECT_EQ(e.pair->kind, PairKind::anticomplete);
    EXPECT_EQ(find_pure_pair(cycle_graph(5), 2, 1000).verdict, Verdict::absent);
}

TEST(PurePair, BudgetExhaustionIsInconclusive)
{
    auto r = find_anticomplete_pair(complete_graph(12), 3, 3, 5);
    EXPECT_EQ(r.verdict, Verdict::inconclusive);
}

TEST(PurePair, AgreesWithBruteForceAndComplementSymmetry)
{
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        int n = 3 + static_cast<int>(seed % 5);
        Graph g = gnp(n, 0.5, seed);
        for (int a = 1; a <= 3; ++a)
            for (int b = 1; b <= 3; ++b) {
                auto r = find_anticomplete_pair(g, a, b, 1u << 20);
                ASSERT_NE(r.verdict, Verdict::inconclusive);
                ASSERT_EQ(r.verdict == Verdict::found, brute_anticomplete(g, a, b));
                if (r.pair) {
                    ASSERT_TRUE(is_pure_pair(g, *r.pair));
                    ASSERT_GE(r.pair->a.size(), static_cast<std::size_t>(a));
                    ASSERT_GE(r.pair->b.size(), static_cast<std::size_t>(b));
                }
            }
        for (int t = 1; t <= 3; ++t) {
            auto p = find_pure_pair(g, t, 1u << 20);
            auto q = find_pure_pair(complement(g), t, 1u << 20);
            ASSERT_EQ(p.verdict, q.verdict);
            if (p.pair && q.pair && p.pair->a == q.pair->a && p.pair->b == q.pair->b) {
                ASSERT_NE(p.pair->kind, q.pair->kind);
            }
        }
    }
}

TEST(Gnp, Extremes)
{
    EXPECT_EQ(gnp(5, 0.0, 17), edgeless_graph(5));
    EXPECT_EQ(gnp(5, 1.0, 17), complete_graph(5));
    EXPECT_EQ(gnp(30, 0.4, 99), gnp(30, 0.4, 99));
    EXPECT_THROW(gnp(5, 1.5, 1), PreconditionError);
}

TEST(Gnp, EdgeCountConcentration)
{
    const double pairs = 1000.0 * 999.0 / 2.0;
    const double mean = 0.3 * pairs;
    const double sd = std::sqrt(pairs * 0.3 * 0.7);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        double e = static_cast<double>(gnp(1000, 0.3, seed).edge_count());
        EXPECT_LE(std::abs(e - mean), 4 * sd) << "seed " << seed;
    }
}

TEST(Io, EdgeListRoundTrip)
{
    Graph p = petersen_graph();
    std::istringstream in(write_edge_list(p));
    EXPECT_EQ(read_edge_list(in), p);
    std::istringstream bad("3 2\n0 1\n");
    EXPECT_THROW(read_edge_list(bad), PreconditionError);
}

TEST(Io, Graph6)
{
    // Petersen graph in graph6 as printed by nauty's geng/showg.
    EXPECT_TRUE(are_isomorphic(parse_graph6("IheA@GUAo"), petersen_graph()));
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Graph g = gnp(5 + static_cast<int>(seed * 4), 0.3, seed);
        EXPECT_EQ(parse_graph6(to_graph6(g)), g);
    }
    EXPECT_EQ(to_graph6(complete_graph(3)), "Bw");
}

TEST(Io, Json)
{
    Graph g = cycle_graph(6);
    EXPECT_EQ(graph_from_json(graph_to_json(g)), g);
}
