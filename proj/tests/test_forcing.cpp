#include <gtest/gtest.h>

#include "purepairs/forcing.hpp"
#include "purepairs/synthetic.hpp"

using namespace purepairs;

namespace {

// Base {0, 1} plus one handle 0 - 2 - ... - 1 of the given length.
BuildCertificate one_handle(int beta, int len)
{
    BuildCertificate c;
    c.beta = beta;
    c.mode = BuildMode::strong;
    c.base = {0, 1};
    std::vector<int> path{0};
    for (int i = 0; i < len - 1; ++i)
        path.push_back(2 + i);
    path.push_back(1);
    c.vertex_count = len + 1;
    c.steps.push_back(BuildStep::handle(path));
    return c;
}

bool all_hold(const ConstantsLedger & l)
{
    for (const auto & s : l.steps)
        for (const auto & q : s.checks)
            if (!q.holds())
                return false;
    return true;
}

}  // namespace

TEST(LedgerShrink, ThresholdOnC)
{
    EXPECT_THROW(ledger_bigrade_shrink(7, Rational(1, 2), Rational(1, 4), Rational(1, 2), 1, 1), PreconditionError);
    EXPECT_THROW(ledger_bigrade_shrink(7, 1, Rational(1, 2), Rational(1, 4), 1, 1), PreconditionError);
}

TEST(LedgerShrink, SevenOneQuarterHalf)
{
    auto r = ledger_bigrade_shrink(7, 1, Rational(1, 4), Rational(1, 2), 1, 1);
    ASSERT_EQ(r.step.checks.size(), 11u);
    for (const auto & q : r.step.checks)
        EXPECT_TRUE(q.holds()) << q.label;
    // c' = 3/4, d = 1/8
    EXPECT_EQ(r.k, bigrade_length(1, 7, Rational(3, 4), Rational(1, 8)));
    EXPECT_GT(r.lambda, 0);
    EXPECT_GT(r.n_log2, 0);

    // independent re-check of the N bounds with bitlen(K) >= log2 K
    const Rational e(r.n_log2);
    const std::int64_t bits = static_cast<std::int64_t>(msb(r.k)) + 1;
    EXPECT_GE(e * 1, Rational(6 + 14 + bits));
    EXPECT_GE(e * Rational(1, 4), Rational(r.k) * bits);
    EXPECT_GE(e * Rational(1, 8), Rational(1 + 14) + Rational(r.k) * bits);
}

TEST(LedgerShrink, LadderTooLarge)
{
    EXPECT_THROW(ledger_bigrade_shrink(7, 1, Rational(1, 4), Rational(1, 2), 5000, 1), StageFailure);
}

TEST(LedgerChain, TwoVertexBase)
{
    BuildCertificate c;
    c.beta = 15;
    c.mode = BuildMode::strong;
    c.vertex_count = 2;
    auto l = ledger_chain(c, Rational(1, 2), Rational(1, 8));
    EXPECT_TRUE(l.steps.empty());
    EXPECT_EQ(l.result.k, 2);
    EXPECT_EQ(l.result.n_log2, 0);
    EXPECT_EQ(l.result.lambda, Rational(1, 2));
}

TEST(LedgerChain, OneHandleBetaFifteen)
{
    auto c = one_handle(15, 15);
    auto l = ledger_chain(c, Rational(1, 2), Rational(1, 8));
    EXPECT_FALSE(l.steps.empty());
    EXPECT_TRUE(all_hold(l));
    EXPECT_GT(l.inequality_count(), 10);
    EXPECT_GT(l.result.k, 2);
    EXPECT_EQ(ledger_to_json(l).dump(), ledger_to_json(ledger_chain(c, Rational(1, 2), Rational(1, 8))).dump());
}

TEST(LedgerChain, ThresholdOnC)
{
    auto c = one_handle(15, 15);
    EXPECT_THROW(ledger_chain(c, Rational(1, 4), Rational(1, 100)), PreconditionError);
    EXPECT_THROW(ledger_chain(c, Rational(1, 2), Rational(1, 4)), PreconditionError);
    EXPECT_NO_THROW(ledger_chain(c, Rational(1, 4) + Rational(1, 50), Rational(1, 100)));
}

TEST(LedgerChain, SecondHandleOverflowsLadder)
{
    auto c = one_handle(15, 15);
    std::vector<int> path{0};
    for (int i = 0; i < 14; ++i)
        path.push_back(16 + i);
    path.push_back(1);
    c.steps.push_back(BuildStep::handle(path));
    c.vertex_count = 30;
    EXPECT_THROW(ledger_chain(c, Rational(1, 2), Rational(1, 8)), StageFailure);
}

TEST(EpsilonForSparse, InequalitiesHold)
{
    auto c = one_handle(15, 15);
    auto e = epsilon_for_sparse(c, Rational(1, 2));
    EXPECT_EQ(e.sigma, Rational(1, 8));
    for (const auto & q : e.checks)
        EXPECT_TRUE(q.holds()) << q.label;
    const BigInt & k = e.ledger.result.k;
    const Rational eps = Rational(1) / Rational(BigInt(1) << static_cast<unsigned>(e.t));
    EXPECT_LE(eps, Rational(1) / Rational(k));
    EXPECT_LE(eps * 2 * Rational(k), e.ledger.result.lambda);
    // eps^(1/8) <= 1/(2K)  <=>  (2K)^8 <= 2^t
    EXPECT_LE(boost::multiprecision::pow(2 * k, 8), BigInt(1) << static_cast<unsigned>(e.t));
    // t - 1 fails one of the three
    const BigInt t = e.t - 1;
    const BigInt two_t = BigInt(1) << static_cast<unsigned>(t);
    EXPECT_TRUE(two_t < k || boost::multiprecision::pow(2 * k, 8) > (BigInt(1) << static_cast<unsigned>(t)) ||
                Rational(two_t) * e.ledger.result.lambda < 2 * Rational(k));
}

TEST(EpsilonForSparse, MonotoneInC)
{
    auto c = one_handle(15, 15);
    BigInt prev = -1;
    for (Rational cv : {Rational(3, 8), Rational(1, 2), Rational(3, 4), Rational(1)}) {
        auto e = epsilon_for_sparse(c, cv);
        if (prev >= 0) {
            EXPECT_LE(e.t, prev) << cv;
        }
        prev = e.t;
    }
}

TEST(EpsilonForSparse, InvalidC)
{
    auto c = one_handle(15, 15);
    EXPECT_THROW(epsilon_for_sparse(c, Rational(1, 4)), PreconditionError);
}

namespace {

void expect_sparse(const Graph & g, const SparseReduction & r, const Rational & eta)
{
    for (int v : r.x) {
        std::int64_t d = 0;
        for (int w : r.x)
            if (w != v && g.adjacent(v, w) != r.complement)
                ++d;
        EXPECT_LT(Rational(d), eta * static_cast<std::int64_t>(r.x.size()));
    }
}

}  // namespace

TEST(ReduceToSparse, Edgeless)
{
    auto r = reduce_to_sparse(edgeless_graph(9), Rational(1, 10));
    ASSERT_TRUE(r);
    EXPECT_EQ(r->x.size(), 9u);
    EXPECT_FALSE(r->complement);
}

TEST(ReduceToSparse, Complete)
{
    auto r = reduce_to_sparse(complete_graph(9), Rational(1, 10));
    ASSERT_TRUE(r);
    EXPECT_EQ(r->x.size(), 9u);
    EXPECT_TRUE(r->complement);
    EXPECT_THROW(reduce_to_sparse(complete_graph(3), 0), PreconditionError);
}

TEST(ReduceToSparse, RandomHalf)
{
    for (std::uint64_t s = 0; s < 5; ++s) {
        Graph g = gnp(60, 0.5, s);
        auto r = reduce_to_sparse(g, Rational(3, 10));
        ASSERT_TRUE(r) << s;
        EXPECT_GE(r->x.size(), 4u);
        expect_sparse(g, *r, Rational(3, 10));
    }
}

TEST(ReduceToSparse, SmallIsExhaustive)
{
    Graph g = cycle_graph(7);
    auto r = reduce_to_sparse(g, Rational(1, 4));
    ASSERT_TRUE(r);
    EXPECT_TRUE(r->exhaustive);
    expect_sparse(g, *r, Rational(1, 4));
    // C_7 has an independent set of 3 and no sparse set of 5 or more
    EXPECT_GE(r->x.size(), 3u);
}

namespace {

std::shared_ptr<const Graph> share(Graph g) { return std::make_shared<const Graph>(std::move(g)); }

}  // namespace

TEST(ForceRainbowCopy, SingleEdge)
{
    BuildCertificate c;
    c.beta = 2;
    c.mode = BuildMode::weak;
    c.vertex_count = 2;
    c.steps = {BuildStep::subleaf(0), BuildStep::subleaf(1, 0)};
    Graph h = path_graph(2);
    Graph g(4);
    g.add_edge(1, 2);
    Blockade a(share(std::move(g)), {{0, 1}, {2, 3}});
    ForcingParams p{0, 2, Rational(1, 8), Rational(1, 2), Rational(1, 2)};
    for (Mode m : {Mode::strict, Mode::relaxed}) {
        auto r = force_rainbow_copy(a, h, c, p, m);
        ASSERT_TRUE(r.copy);
        EXPECT_TRUE(is_rainbow_copy(a, h, *r.copy));
    }
}

TEST(ForceRainbowCopy, ShortBlockade)
{
    auto c = one_handle(3, 3);
    Graph h = replay(c);
    Blockade a = random_blockade(3, 4, 0.5, 1);
    ForcingParams p{0, 2, Rational(1, 8), Rational(1, 2), Rational(1, 2)};
    auto r = force_rainbow_copy(a, h, c, p, Mode::relaxed);
    EXPECT_FALSE(r.copy);
    EXPECT_EQ(r.stage, "length");
}

TEST(ForceRainbowCopy, CertificateMustRebuild)
{
    auto c = one_handle(3, 3);
    Blockade a = random_blockade(6, 4, 0.5, 1);
    EXPECT_THROW(force_rainbow_copy(a, cycle_graph(4), c, {}, Mode::relaxed), PreconditionError);
}

TEST(ForceRainbowCopy, HexagonMatchesExhaustive)
{
    BuildCertificate c = one_handle(3, 3);
    c.steps.push_back(BuildStep::handle({0, 4, 5, 1}));
    c.vertex_count = 6;
    Graph h = replay(c);
    ASSERT_EQ(h.edges().size(), 6u);
    ForcingParams p{0, 2, Rational(1, 8), Rational(1, 2), Rational(1, 2)};
    int found = 0;
    for (std::uint64_t s = 0; s < 20; ++s) {
        Blockade a = random_blockade(8, 3, 0.18, s);
        auto r = force_rainbow_copy(a, h, c, p, Mode::relaxed);
        auto oracle = find_rainbow_copy(a, h);
        EXPECT_EQ(r.copy.has_value(), oracle.has_value()) << s;
        if (r.copy) {
            ++found;
            EXPECT_TRUE(is_rainbow_copy(a, h, *r.copy));
        }
    }
    EXPECT_GT(found, 0);
}
