#include <gtest/gtest.h>

#include "purepairs/congestion.hpp"

using namespace purepairs;

namespace {

// Max over every subgraph J (any vertex set, any edge subset with an edge) of
// 1 - (|J|-1)/|E(J)|, with isolated vertices of J allowed.
Rational brute_over_edge_subsets(const Graph & g)
{
    auto es = g.edges();
    Rational best = 0;
    int m = static_cast<int>(es.size());
    for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
        std::uint32_t vmask = 0;
        for (int i = 0; i < m; ++i)
            if ((mask >> i) & 1u)
                vmask |= (1u << es[i].first) | (1u << es[i].second);
        Rational v = 1 - Rational(std::popcount(vmask) - 1, std::popcount(mask));
        if (v > best)
            best = v;
    }
    return best;
}

Graph random_tree(int n, std::uint64_t seed)
{
    Graph g(n);
    for (int v = 1; v < n; ++v)
        g.add_edge(v, static_cast<int>(hash_combine(seed, v) % static_cast<std::uint64_t>(v)));
    return g;
}

}  // namespace

TEST(Congestion, Examples)
{
    for (auto method : {CongestionMethod::exhaustive, CongestionMethod::parametric_cut}) {
        auto c5 = congestion(cycle_graph(5), method);
        EXPECT_EQ(c5.value, Rational(1, 5));
        EXPECT_EQ(*c5.witness, (VertexSet{0, 1, 2, 3, 4}));
        EXPECT_EQ(congestion(complete_graph(4), method).value, Rational(1, 2));
        EXPECT_EQ(congestion(random_tree(12, 5), method).value, 0);
    }
}

TEST(Congestion, EdgelessHasNoWitness)
{
    auto r = congestion(edgeless_graph(3));
    EXPECT_EQ(r.value, 0);
    EXPECT_FALSE(r.witness);
}

TEST(Congestion, ExhaustiveLimit)
{
    EXPECT_THROW(congestion(cycle_graph(17), CongestionMethod::exhaustive), PreconditionError);
    EXPECT_EQ(congestion(cycle_graph(17), CongestionMethod::exhaustive, 20).value, Rational(1, 17));
}

TEST(MaxDensity, Examples)
{
    Graph edge = path_graph(2);
    EXPECT_EQ(max_density(edge).gamma, 1);
    EXPECT_EQ(max_density(complete_graph(4)).gamma, 2);
    Graph two = disjoint_union(complete_graph(3), complete_graph(3));
    for (auto method : {CongestionMethod::exhaustive, CongestionMethod::parametric_cut}) {
        auto d = max_density(two, method);
        EXPECT_EQ(d.gamma, Rational(3, 2));
        EXPECT_EQ(density_of(two, d.witness), Rational(3, 2));
    }
    EXPECT_EQ(max_density(two, CongestionMethod::exhaustive).witness, (VertexSet{0, 1, 2}));
    EXPECT_THROW(max_density(edgeless_graph(4)), PreconditionError);
}

TEST(Congestion, CycleValues)
{
    for (int k = 3; k <= 12; ++k) {
        EXPECT_EQ(congestion(cycle_graph(k), CongestionMethod::exhaustive).value, Rational(1, k));
        EXPECT_EQ(congestion(cycle_graph(k), CongestionMethod::parametric_cut).value, Rational(1, k));
    }
}

TEST(Congestion, VertexSubsetsSufficeOverEdgeSubsets)
{
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        Graph g = gnp(3 + static_cast<int>(seed % 4), 0.55, seed);
        if (g.edge_count() > 12)
            continue;
        EXPECT_EQ(congestion(g, CongestionMethod::exhaustive).value, brute_over_edge_subsets(g)) << seed;
    }
}

TEST(Congestion, MethodsAgreeAndWitnessesCheck)
{
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        Graph g = gnp(2 + static_cast<int>(seed % 9), 0.15 + 0.1 * static_cast<double>(seed % 7), seed);
        auto a = congestion(g, CongestionMethod::exhaustive);
        auto b = congestion(g, CongestionMethod::parametric_cut);
        ASSERT_EQ(a.value, b.value) << seed;
        if (g.edge_count() == 0)
            continue;
        EXPECT_EQ(congestion_of_witness(a), a.value);
        EXPECT_EQ(congestion_of_witness(b), b.value);
        EXPECT_EQ(a.value, 1 - 1 / a.gamma);
        EXPECT_GE(a.gamma, 1);
        EXPECT_EQ(a.value == 0, is_forest(g));
    }
}

TEST(Congestion, MonotoneUnderSubgraphs)
{
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Graph g = gnp(8, 0.45, seed);
        Graph sub(8);
        auto es = g.edges();
        for (std::size_t i = 0; i < es.size(); ++i)
            if (hash_combine(seed + 1000, i) % 3 != 0)
                sub.add_edge(es[i].first, es[i].second);
        EXPECT_LE(congestion(sub).value, congestion(g).value);
    }
}
