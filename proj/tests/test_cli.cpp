#include <gtest/gtest.h>

#include <cmath>

#include "purepairs/campaign.hpp"
#include "purepairs/counterexample.hpp"

using namespace purepairs;

TEST(CounterexampleConfig, PentagonIsValid)
{
    auto cfg = pentagon_config({20}, 1, 0);
    auto chk = check_counterexample_config(cfg);
    EXPECT_EQ(chk.c_prime, Rational(1, 5));
    // both congestions exceed c
    EXPECT_GT(congestion(chk.j).value, cfg.c);
    EXPECT_GT(congestion(chk.j_prime).value, cfg.c);
    EXPECT_EQ(cfg.d, Rational(3, 20));
}

TEST(CounterexampleConfig, Rejections)
{
    auto cfg = pentagon_config({20}, 1, 0);
    cfg.d = Rational(1, 5);
    EXPECT_THROW(check_counterexample_config(cfg), PreconditionError);
    cfg = pentagon_config({20}, 1, 0);
    cfg.c = Rational(1, 4);
    EXPECT_THROW(check_counterexample_config(cfg), PreconditionError);
    cfg = pentagon_config({20}, 1, 0);
    cfg.j = {0, 1};  // a single edge: |V| - 1 = |E|
    EXPECT_THROW(check_counterexample_config(cfg), PreconditionError);
}

TEST(CounterexampleExperiment, EdgeProbability)
{
    EXPECT_NEAR(edge_probability(30, Rational(1, 2)), 1 / std::sqrt(30.0), 1e-12);
    EXPECT_NEAR(edge_probability(30, Rational(1, 2)), 0.1826, 5e-5);
}

TEST(CounterexampleExperiment, ZeroTrials)
{
    auto rep = counterexample_experiment(pentagon_config({30}, 0, 0));
    auto j = rep.to_json();
    EXPECT_TRUE(j["trials"].empty());
    EXPECT_TRUE(rep.pass());
    EXPECT_EQ(j["version"], report_version);
    EXPECT_NEAR(j["params"]["p"][0].get<double>(), std::pow(30.0, -0.85), 1e-12);
}

TEST(CounterexampleExperiment, DeletedGraphsAreFree)
{
    auto cfg = pentagon_config({15}, 6, 3);
    cfg.d = Rational(19, 100);  // denser, so copies occur
    auto rep = counterexample_experiment(cfg);
    ASSERT_EQ(rep.trials.size(), 6u);
    int copies = 0;
    for (const auto & t : rep.trials) {
        EXPECT_TRUE(t["J_free"].get<bool>());
        EXPECT_TRUE(t["J_prime_free"].get<bool>());
        copies += t["copies_J"].get<int>() + t["copies_J_prime"].get<int>();
        EXPECT_LE(t["deleted"].get<int>(), t["copies_J"].get<int>() + t["copies_J_prime"].get<int>());
    }
    EXPECT_GT(copies, 0);
    EXPECT_TRUE(rep.properties.front().pass);
}

TEST(CounterexampleExperiment, SubsetScanAgreesWithEmbedding)
{
    for (std::uint64_t s = 0; s < 20; ++s) {
        Graph g = gnp(9, 0.45, s);
        EXPECT_EQ(detail::has_induced_copy_by_subsets(g, cycle_graph(5)), contains(g, cycle_graph(5)).has_value());
    }
}

TEST(Campaign, CongestionOracleAgreement)
{
    auto rep = campaign("congestion-oracle-agreement", {7, 60, 1u << 20});
    EXPECT_TRUE(rep.pass());
    EXPECT_EQ(rep.properties[1].detail["n_le_5"], 52);
    EXPECT_EQ(rep.properties[1].detail["n_eq_6"], 156);
}

TEST(Campaign, UnknownSuite) { EXPECT_THROW(campaign("no-such-suite", {}), PreconditionError); }

TEST(Campaign, SameSeedSameBytes)
{
    for (const char * suite : {"forest-characterization", "force-oracle", "machinery-invariants"}) {
        CampaignParams p{5, 3, 1u << 20};
        EXPECT_EQ(campaign(suite, p).to_json().dump(), campaign(suite, p).to_json().dump()) << suite;
        EXPECT_EQ(campaign(suite, p).to_csv(), campaign(suite, p).to_csv()) << suite;
    }
}

TEST(Report, CsvQuotesAndOrders)
{
    Report r;
    r.trials.push_back({{"b", "x,y"}, {"a", 1}, {"nested", {1, 2}}});
    r.add("p", false, "exact");
    EXPECT_EQ(r.to_csv(), "section,a,b\ntrial,1,\"x,y\"\nproperty,name,pass,tolerance\nproperty,p,false,exact\n");
    EXPECT_FALSE(r.pass());
}
