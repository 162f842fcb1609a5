#include <gtest/gtest.h>

#include <functional>

#include "purepairs/check.hpp"
#include "purepairs/exact.hpp"
#include "purepairs/synthetic.hpp"

using namespace purepairs;

namespace {

std::shared_ptr<const Graph> share(Graph g) { return std::make_shared<const Graph>(std::move(g)); }

std::int64_t sz(const VertexSet & s) { return static_cast<std::int64_t>(s.size()); }

// Apex 0; L = 0, {1,2,3}; M = 0, {4,5}; blocks {6,7}, {8,9}, {10,11}.
// l_p sees block p, 4 sees the first vertex of each block, 5 the second,
// and the first vertex of block i sees the second of every later block.
struct Ladder {
    Blockade a;
    BiLevelling bl;
};

Ladder small_ladder()
{
    Graph g(12);
    for (int l = 1; l <= 5; ++l)
        g.add_edge(0, l);
    for (int p = 0; p < 3; ++p) {
        g.add_edge(1 + p, 6 + 2 * p);
        g.add_edge(1 + p, 7 + 2 * p);
        g.add_edge(4, 6 + 2 * p);
        g.add_edge(5, 7 + 2 * p);
        for (int q = p + 1; q < 3; ++q)
            g.add_edge(6 + 2 * p, 7 + 2 * q);
    }
    Blockade a(share(std::move(g)), {{0}, {1, 2, 3}, {4, 5}, {6, 7}, {8, 9}, {10, 11}});
    BiLevelling bl;
    bl.l.layers = {{0}, {1, 2, 3}};
    bl.m.layers = {{0}, {4, 5}};
    bl.blocks = {{3, {6, 7}}, {4, {8, 9}}, {5, {10, 11}}};
    bl.forward = {{1, 2, 3}, {2, 3}, {3}};
    return {a, bl};
}

const ExtendParams loose{Rational(1, 64), Rational(1, 4), Rational(1, 64), Rational(1, 2)};

}  // namespace

TEST(SelectiveCover, UniversalVertexGivesPair)
{
    Graph g(7);
    for (int v = 1; v < 7; ++v)
        g.add_edge(0, v);
    Blockade b(share(std::move(g)), {{1, 2}, {3, 4}, {5, 6}});
    auto out = selective_cover({0}, b, 1, 1, Scaled{Rational(1, 2), 0}, 2);
    ASSERT_EQ(out.kind, SelectiveCoverOutcome::Kind::pair);
    EXPECT_EQ(out.pair.x, (VertexSet{0}));
    EXPECT_EQ(out.pair.j, (std::vector<int>{0}));
    EXPECT_TRUE(out.bounds_hold);
    EXPECT_EQ(out.absorbed, 0);
}

TEST(SelectiveCover, EmptySetIsRejected)
{
    Graph g(4);
    g.add_edge(0, 2);
    Blockade b(share(std::move(g)), {{0, 1}, {2, 3}});
    EXPECT_THROW(selective_cover({}, b, 1, 1, Scaled{1, 0}, 1), PreconditionError);
    EXPECT_THROW(selective_cover({1}, b, 1, 1, Scaled{1, 0}, 1), PreconditionError);
}

TEST(SelectiveCover, SeededBoundsReverified)
{
    int pairs = 0, partitions = 0;
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        Blockade base = random_blockade(5, 10, 0.25, seed);
        const Graph & g = base.host();
        const VertexSet a_set = base.block(0);
        std::vector<int> idx;
        std::vector<VertexSet> blocks;
        for (int i = 1; i < 5; ++i) {
            VertexSet kept;
            for (int v : base.block(i))
                if (g.has_neighbour_in(v, a_set))
                    kept.push_back(v);
            idx.push_back(i);
            blocks.push_back(kept);
        }
        if (std::any_of(blocks.begin(), blocks.end(), [](const VertexSet & s) { return s.empty(); }))
            continue;
        Blockade b(base.host_ptr(), idx, blocks);
        const int k = 2;
        const Rational alpha(1, 3);
        auto out = selective_cover(a_set, b, k, 1, Scaled{alpha, 0}, Rational(1, 10), Mode::relaxed);
        const Rational cap = alpha * 16;  // K^k alpha
        auto ratio = [&](const VertexSet & x, int j) {
            return Rational(sz(g.neighbourhood_in(x, b.block(j))), sz(b.block(j)));
        };
        if (out.kind == SelectiveCoverOutcome::Kind::partition) {
            ++partitions;
            VertexSet all;
            std::size_t total = 0;
            bool sparse = true;
            for (const auto & part : out.parts) {
                ASSERT_EQ(part.j.size(), static_cast<std::size_t>(k));
                all = set_union(all, part.x);
                total += part.x.size();
                for (int j : part.j)
                    sparse = sparse && ratio(part.x, j) < cap;
            }
            EXPECT_EQ(all, a_set);
            EXPECT_EQ(total, a_set.size());
            EXPECT_EQ(sparse, out.bounds_hold);
        } else {
            ++pairs;
            ASSERT_EQ(out.pair.j.size(), static_cast<std::size_t>(k));
            EXPECT_TRUE(std::includes(a_set.begin(), a_set.end(), out.pair.x.begin(), out.pair.x.end()));
            bool within = true;
            for (int j : out.pair.j) {
                const Rational r = ratio(out.pair.x, j);
                within = within && r >= alpha / g.n() && r < cap + out.eps;
            }
            EXPECT_EQ(within, out.bounds_hold);
        }
    }
    EXPECT_GT(pairs + partitions, 30);
}

TEST(ExtendBilevelling, AddsOneLevel)
{
    auto [a, bl] = small_ladder();
    ASSERT_FALSE(check::bilevelling(a.host(), bl, &a).has_value());
    auto r = extend_bilevelling(a, bl, 1, Rational(1, 2), loose, Mode::relaxed);
    EXPECT_EQ(r.result.height(), bl.height() + 1);
    EXPECT_EQ(r.result.length(), 1);
    EXPECT_FALSE(check::bilevelling(a.host(), r.result, &a).has_value());
    for (const auto & t : r.result.blocks) {
        const auto & parent = a.block(t.index);
        EXPECT_GE(2 * t.vertices.size(), parent.size());
    }
    auto path = connecting_path(a.host(), r.result, r.result.m.base().front(), r.result.l.base().front());
    EXPECT_EQ(static_cast<int>(path.size()) - 1, r.result.height());
}

TEST(ExtendBilevelling, NamedInequality)
{
    auto [a, bl] = small_ladder();
    try {
        extend_bilevelling(a, bl, 1, Rational(1, 2), loose);
        FAIL() << "expected a hypothesis violation";
    } catch (const HypothesisViolation & e) {
        EXPECT_EQ(e.condition(), "K >= (2 + 1/c) k");
    }
}

TEST(ExtendBilevelling, ForwardWitnessesMustNest)
{
    auto [a, bl] = small_ladder();
    bl.forward[2] = {1, 3};
    EXPECT_THROW(extend_bilevelling(a, bl, 1, Rational(1, 2), loose, Mode::relaxed), PreconditionError);
    bl.forward.pop_back();
    EXPECT_THROW(extend_bilevelling(a, bl, 1, Rational(1, 2), loose, Mode::relaxed), PreconditionError);
}

TEST(ExactBilevelling, RequiredLength)
{
    EXPECT_EQ(exact_bilevel_length(1, 1, 7), BigInt(262144));
    EXPECT_EQ(exact_bilevel_length(2, Rational(1, 2), 0), BigInt(50));
}

TEST(ExactBilevelling, HeightBelowThreeRhoMinusTwo)
{
    Blockade a = random_blockade(10, 40, 0.07, 9);
    EXPECT_THROW(exact_bilevelling(a, 1, Rational(1, 2), 6, {}, Mode::relaxed), PreconditionError);
}

TEST(ExactBilevelling, StrictLengthIsNamed)
{
    Blockade a = random_blockade(10, 40, 0.07, 9);
    try {
        exact_bilevelling(a, 1, Rational(1, 2), 7);
        FAIL() << "expected a hypothesis violation";
    } catch (const HypothesisViolation & e) {
        EXPECT_EQ(e.condition(), "length K = ceil(k (3 + 1/c)^(ell + 2))");
    }
}

TEST(ExactBilevelling, SeedNineRelaxed)
{
    Blockade a = random_blockade(10, 40, 0.07, 9);
    try {
        auto run = exact_bilevelling(a, 1, Rational(1, 2), 7, {}, Mode::relaxed);
        EXPECT_EQ(run.result.height(), 7);
        EXPECT_EQ(run.result.length(), 1);
        EXPECT_FALSE(check::bilevelling(a.host(), run.result, &a).has_value());
    } catch (const StageFailure & e) {
        // desk-scale blockades rarely yield an initial bi-levelling long enough for the ladder
        EXPECT_FALSE(e.stage().empty());
    }
}

namespace {

// Every ell-subset inducing a connected 2-regular subgraph.
bool has_induced_cycle(const Graph & g, int ell)
{
    const int n = g.n();
    std::vector<int> pick;
    std::function<bool(int)> rec = [&](int from) {
        if (static_cast<int>(pick.size()) == ell) {
            for (int x : pick) {
                int d = 0;
                for (int y : pick)
                    d += g.adjacent(x, y);
                if (d != 2)
                    return false;
            }
            VertexSet seen{pick.front()}, frontier{pick.front()};
            while (!frontier.empty()) {
                VertexSet next;
                for (int x : frontier)
                    for (int y : pick)
                        if (g.adjacent(x, y) && !contains_vertex(seen, y))
                            next = set_union(next, {y});
                seen = set_union(seen, next);
                frontier = next;
            }
            return static_cast<int>(seen.size()) == ell;
        }
        for (int v = from; v < n; ++v) {
            pick.push_back(v);
            if (rec(v + 1))
                return true;
            pick.pop_back();
        }
        return false;
    };
    return rec(0);
}

}  // namespace

TEST(FindInducedCycle, SevenCycle)
{
    Graph g = cycle_graph(7);
    auto r = find_induced_cycle(g, 7, 1, Rational(1, 10));
    ASSERT_TRUE(r.cycle.has_value());
    EXPECT_FALSE(check::induced_cycle(g, *r.cycle).has_value());
    EXPECT_EQ(r.cycle->size(), 7u);
}

TEST(FindInducedCycle, TreeHasNone)
{
    auto r = find_induced_cycle(path_graph(30), 7, 1, Rational(1, 10));
    EXPECT_FALSE(r.cycle.has_value());
    EXPECT_TRUE(r.exhaustive_complete);
}

TEST(FindInducedCycle, Preconditions)
{
    Graph g = cycle_graph(12);
    EXPECT_THROW(find_induced_cycle(g, 7, Rational(2, 3), Rational(1, 10)), PreconditionError);
    EXPECT_THROW(find_induced_cycle(g, 11, Rational(1, 3), Rational(1, 10)), PreconditionError);
}

TEST(FindInducedCycle, SeededAgreesWithSubsetSearch)
{
    int found = 0;
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        Graph g = gnp(13, 0.22, seed);
        auto r = find_induced_cycle(g, 6, 1, Rational(1, 10));
        ASSERT_TRUE(r.exhaustive_complete || r.via_pipeline);
        EXPECT_EQ(r.cycle.has_value(), has_induced_cycle(g, 6)) << seed;
        if (r.cycle) {
            ++found;
            EXPECT_FALSE(check::induced_cycle(g, *r.cycle).has_value());
        }
    }
    EXPECT_GT(found, 0);
    EXPECT_LT(found, 30);
}
