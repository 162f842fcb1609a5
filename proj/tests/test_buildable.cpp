#include <gtest/gtest.h>

#include "purepairs/buildable.hpp"

using namespace purepairs;

namespace {

Graph random_tree(int n, std::uint64_t seed)
{
    Graph g(n);
    for (int v = 1; v < n; ++v)
        g.add_edge(v, static_cast<int>(hash_combine(seed, v) % static_cast<std::uint64_t>(v)));
    return g;
}

bool only_subleaves(const BuildCertificate & c)
{
    return c.handle_count() == 0;
}

}  // namespace

TEST(Branches, Examples)
{
    auto c6 = branches(cycle_graph(6));
    ASSERT_EQ(c6.branches.size(), 1u);
    EXPECT_TRUE(c6.branches[0].cycle);
    EXPECT_EQ(c6.branches[0].length(), 6);

    auto p5 = branches(path_graph(5));
    ASSERT_EQ(p5.branches.size(), 1u);
    EXPECT_FALSE(p5.branches[0].cycle);
    EXPECT_EQ(p5.branches[0].length(), 4);

    auto k4 = branches(complete_graph(4));
    ASSERT_EQ(k4.branches.size(), 6u);
    for (const auto & b : k4.branches)
        EXPECT_EQ(b.length(), 1);
}

TEST(Branches, EveryEdgeInExactlyOneBranch)
{
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        Graph g = gnp(10, 0.2, seed);
        std::map<std::pair<int, int>, int> count;
        for (const auto & b : branches(g).branches) {
            const auto & v = b.vertices;
            std::size_t steps = b.cycle ? v.size() : v.size() - 1;
            for (std::size_t k = 0; k < steps; ++k) {
                int a = v[k], c = v[(k + 1) % v.size()];
                ASSERT_TRUE(g.adjacent(a, c));
                ++count[{std::min(a, c), std::max(a, c)}];
            }
            for (std::size_t k = 1; k + (b.cycle ? 0 : 1) < v.size(); ++k)
                ASSERT_EQ(g.degree(v[k]), 2);
            if (!b.cycle) {
                ASSERT_NE(g.degree(v.front()), 2);
                ASSERT_NE(g.degree(v.back()), 2);
            }
        }
        ASSERT_EQ(static_cast<std::int64_t>(count.size()), g.edge_count());
        for (auto & [e, c] : count)
            ASSERT_EQ(c, 1);
    }
}

TEST(Replay, Examples)
{
    BuildCertificate empty;
    EXPECT_EQ(replay(empty).n(), 0);

    BuildCertificate strong;
    strong.mode = BuildMode::strong;
    strong.beta = 5;
    strong.vertex_count = 6;
    strong.steps.push_back(BuildStep::handle({0, 2, 3, 4, 5, 1}));
    EXPECT_TRUE(are_isomorphic(replay(strong), path_graph(6)));
}

TEST(Replay, RejectsInvalidSteps)
{
    BuildCertificate c;
    c.mode = BuildMode::strong;
    c.beta = 5;
    c.vertex_count = 5;
    c.steps.push_back(BuildStep::handle({0, 2, 3, 4, 1}));
    EXPECT_THROW(replay(c), PreconditionError);  // length 4 < beta

    BuildCertificate w;
    w.beta = 2;
    w.vertex_count = 3;
    w.steps = {BuildStep::subleaf(0), BuildStep::subleaf(1, 0), BuildStep::handle({0, 2, 1})};
    EXPECT_THROW(replay(w), PreconditionError);  // ends adjacent

    BuildCertificate s;
    s.mode = BuildMode::strong;
    s.vertex_count = 3;
    s.steps = {BuildStep::subleaf(2, 0)};
    EXPECT_THROW(replay(s), PreconditionError);

    BuildCertificate bad;
    bad.vertex_count = 2;
    bad.steps = {BuildStep::subleaf(0), BuildStep::subleaf(7)};
    EXPECT_THROW(replay(bad), PreconditionError);
}

TEST(WeakCertificate, Examples)
{
    Graph tree = random_tree(9, 4);
    auto t = weak_certificate(tree, 5);
    ASSERT_EQ(t.verdict, Verdict::found);
    EXPECT_TRUE(only_subleaves(*t.certificate));
    EXPECT_EQ(replay(*t.certificate), tree);

    auto c6 = weak_certificate(cycle_graph(6), 3);
    ASSERT_EQ(c6.verdict, Verdict::found);
    EXPECT_EQ(replay(*c6.certificate), cycle_graph(6));
    EXPECT_GE(c6.certificate->handle_count(), 1);
    for (const auto & s : c6.certificate->steps)
        if (s.kind == BuildStep::Kind::handle) {
            EXPECT_GE(s.handle_length(), 3);
        }

    EXPECT_EQ(weak_certificate(complete_graph(4), 2).verdict, Verdict::absent);
    EXPECT_EQ(weak_certificate(complete_graph(3), 2).verdict, Verdict::absent);
    EXPECT_EQ(weak_certificate(cycle_graph(6), 5).verdict, Verdict::absent);
    EXPECT_THROW(weak_certificate(cycle_graph(6), 1), PreconditionError);
}

TEST(WeakCertificate, ImpliesCongestionBound)
{
    int found = 0;
    for (std::uint64_t seed = 0; seed < 1500; ++seed) {
        int n = 3 + static_cast<int>(seed % 6);
        Graph h = gnp(n, 0.2 + 0.05 * static_cast<double>(seed % 5), seed);
        auto c = congestion(h, CongestionMethod::exhaustive);
        for (int beta = 2; beta <= 5; ++beta) {
            auto w = weak_certificate(h, beta);
            ASSERT_NE(w.verdict, Verdict::inconclusive);
            if (!w.certificate)
                continue;
            ++found;
            ASSERT_EQ(replay(*w.certificate), h);
            ASSERT_LE(c.value, Rational(1, beta)) << seed;
        }
    }
    EXPECT_GT(found, 1000);
}

TEST(Longbranch, Examples)
{
    auto c6 = longbranch_witness(cycle_graph(6), Rational(1, 6));
    EXPECT_EQ(c6.beta, 3);
    EXPECT_EQ(replay(c6), cycle_graph(6));

    auto p4 = longbranch_witness(path_graph(4), Rational(1, 3));
    EXPECT_EQ(p4.beta, 2);
    EXPECT_TRUE(only_subleaves(p4));

    try {
        longbranch_witness(complete_graph(4), Rational(1, 3));
        FAIL() << "expected congestion violation";
    } catch (const CongestionTooLarge & e) {
        EXPECT_EQ(e.value, Rational(1, 2));
        EXPECT_EQ(e.witness, (VertexSet{0, 1, 2, 3}));
    }
}

TEST(Longbranch, BetaFormula)
{
    EXPECT_EQ(longbranch_beta(Rational(1, 3)), 2);
    EXPECT_EQ(longbranch_beta(Rational(1, 6)), 3);
    EXPECT_EQ(longbranch_beta(Rational(1, 9)), 4);
    EXPECT_EQ(longbranch_beta(Rational(1, 10)), 4);
}

TEST(Longbranch, TriangleAtOneThirdHasNoHandle)
{
    // congestion(K3) = 1/3, yet an induced handle of length >= 2 never exists in a triangle
    EXPECT_EQ(congestion(complete_graph(3)).value, Rational(1, 3));
    EXPECT_THROW(longbranch_witness(complete_graph(3), Rational(1, 3)), StageFailure);
}

TEST(Longbranch, SucceedsBelowOneThird)
{
    int checked = 0;
    for (std::uint64_t seed = 0; seed < 3000; ++seed) {
        int n = 1 + static_cast<int>(seed % 8);
        Graph h = gnp(n, 0.15 + 0.05 * static_cast<double>(seed % 4), seed);
        auto c = congestion(h).value;
        for (Rational xi : {Rational(1, 6), Rational(1, 9)}) {
            if (c > xi)
                continue;
            auto cert = longbranch_witness(h, xi);
            ASSERT_EQ(replay(cert), h) << seed;
            ASSERT_EQ(cert.beta, longbranch_beta(xi));
            ++checked;
        }
    }
    EXPECT_GT(checked, 1000);
}

TEST(Embed, Examples)
{
    auto two = embed_in_buildable(edgeless_graph(2), 4);
    EXPECT_EQ(two.host.n(), 2);
    EXPECT_TRUE(two.cert.steps.empty());

    auto one = embed_in_buildable(edgeless_graph(1), 4);
    ASSERT_EQ(one.cert.steps.size(), 1u);
    const auto & path = one.cert.steps[0].path;
    EXPECT_NE(one.emb.map[0], path.front());
    EXPECT_NE(one.emb.map[0], path.back());
    EXPECT_TRUE(is_induced_embedding(one.host, edgeless_graph(1), one.emb.map));

    auto c6 = embed_in_buildable(cycle_graph(6), 3);
    EXPECT_EQ(replay(c6.cert), c6.host);
    EXPECT_EQ(c6.cert.mode, BuildMode::strong);
    EXPECT_TRUE(is_induced_embedding(c6.host, cycle_graph(6), c6.emb.map));

    EXPECT_THROW(embed_in_buildable(complete_graph(4), 2), PreconditionError);
}

TEST(Embed, RandomWeaklyBuildable)
{
    int done = 0;
    for (std::uint64_t seed = 0; seed < 600 && done < 200; ++seed) {
        Graph h = gnp(3 + static_cast<int>(seed % 7), 0.25, seed);
        int beta = 2 + static_cast<int>(seed % 4);
        auto w = weak_certificate(h, beta);
        if (!w.certificate)
            continue;
        auto e = embed_from_certificate(*w.certificate);
        ASSERT_EQ(replay(e.cert), e.host);
        ASSERT_EQ(e.cert.mode, BuildMode::strong);
        for (const auto & s : e.cert.steps)
            ASSERT_GE(s.handle_length(), beta);
        ASSERT_TRUE(is_induced_embedding(e.host, h, e.emb.map));
        ++done;
    }
    EXPECT_EQ(done, 200);
}

TEST(Certificate, JsonRoundTrip)
{
    auto w = weak_certificate(cycle_graph(7), 3);
    ASSERT_TRUE(w.certificate);
    auto back = certificate_from_json(certificate_to_json(*w.certificate));
    EXPECT_EQ(back.steps, w.certificate->steps);
    EXPECT_EQ(replay(back), cycle_graph(7));
    auto s = random_strong_certificate(4, 30, 9);
    auto sb = certificate_from_json(certificate_to_json(s));
    EXPECT_EQ(replay(sb), replay(s));
}

TEST(Certificate, RandomStrongRespectsCongestionBound)
{
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        int beta = 3 + static_cast<int>(seed % 6);
        auto c = random_strong_certificate(beta, 40, seed);
        Graph g = replay(c);
        EXPECT_LE(g.n(), 40);
        EXPECT_LE(congestion(g).value, Rational(1, beta));
    }
}
