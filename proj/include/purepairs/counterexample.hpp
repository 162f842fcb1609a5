#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <cstdint>
#include <string>
#include <vector>

#include "purepairs/congestion.hpp"
#include "purepairs/embedding.hpp"
#include "purepairs/purepair.hpp"
#include "purepairs/report.hpp"

namespace purepairs {

/// Sample G(n, n^(d-1)), delete a vertex per induced copy of J (in the graph)
/// or J' (in the complement), then look for a pure pair of size pair_size.
struct CounterexampleConfig {
    Graph h;
    VertexSet j;        // J = h[j]
    VertexSet j_prime;  // J' = complement(h)[j_prime]
    Rational c;
    Rational d;
    std::vector<int> n;
    int trials = 0;
    std::uint64_t seed = 0;
    std::size_t pair_size = 6;
    std::uint64_t budget = std::uint64_t{1} << 26;
};

struct ConfigCheck {
    Rational c_prime;  // 1 - c' = max slack ratio of J and J'
    Graph j;
    Graph j_prime;
};

namespace detail {

inline std::pair<Graph, Rational> slack_piece(const Graph & host, const VertexSet & s, const Rational & c,
                                              const char * name)
{
    for (int v : s)
        if (v < 0 || v >= host.n())
            throw PreconditionError(std::string(name) + " has a vertex outside h");
    Graph sub = host.induced(s);
    const auto e = static_cast<std::int64_t>(sub.edge_count());
    if (e == 0)
        throw PreconditionError(std::string(name) + " has no edges");
    if (!(Rational(sub.n() - 1) < (1 - c) * e))
        throw PreconditionError(std::string(name) + ": |V| - 1 < (1 - c)|E| fails");
    return {sub, Rational(sub.n() - 1, e)};
}

}  // namespace detail

/// Validates everything but d and returns J, J' and c'.
inline ConfigCheck counterexample_slack(const CounterexampleConfig & cfg)
{
    auto [j, rj] = detail::slack_piece(cfg.h, cfg.j, cfg.c, "J");
    auto [jp, rjp] = detail::slack_piece(complement(cfg.h), cfg.j_prime, cfg.c, "J'");
    return {1 - std::max(rj, rjp), j, jp};
}

/// Validates the configuration; throws PreconditionError naming the failed
/// condition.
inline ConfigCheck check_counterexample_config(const CounterexampleConfig & cfg)
{
    ConfigCheck out = counterexample_slack(cfg);
    if (!(cfg.c < cfg.d && cfg.d < out.c_prime))
        throw PreconditionError("need c < d < c' = " + to_string(out.c_prime));
    if (cfg.trials < 0)
        throw PreconditionError("trials must be non-negative");
    for (int n : cfg.n)
        if (n < 2)
            throw PreconditionError("n must be at least 2");
    if (cfg.pair_size == 0)
        throw PreconditionError("pair size must be positive");
    return out;
}

namespace detail {

inline std::uint64_t count_embeddings(const Graph & g, const Graph & h)
{
    std::uint64_t count = 0;
    for_each_embedding(g, h, [&](const std::vector<int> &) {
        ++count;
        return false;
    });
    return count;
}

/// Subset scan, independent of the embedding search: some |h|-subset of g
/// with the right edge count induces a copy of h.
inline bool has_induced_copy_by_subsets(const Graph & g, const Graph & h)
{
    const int k = h.n(), n = g.n();
    if (k > n)
        return false;
    const std::size_t e = h.edge_count();
    std::vector<int> pick(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i)
        pick[static_cast<std::size_t>(i)] = i;
    while (true) {
        std::size_t inside = 0;
        for (int a = 0; a < k; ++a)
            for (int b = a + 1; b < k; ++b)
                inside += g.adjacent(pick[static_cast<std::size_t>(a)], pick[static_cast<std::size_t>(b)]);
        if (inside == e && are_isomorphic(g.induced(pick), h))
            return true;
        int i = k - 1;
        while (i >= 0 && pick[static_cast<std::size_t>(i)] == n - k + i)
            --i;
        if (i < 0)
            return false;
        ++pick[static_cast<std::size_t>(i)];
        for (int t = i + 1; t < k; ++t)
            pick[static_cast<std::size_t>(t)] = pick[static_cast<std::size_t>(t - 1)] + 1;
    }
}

}  // namespace detail

inline double edge_probability(int n, const Rational & d)
{
    return std::pow(static_cast<double>(n), static_cast<double>(d - 1));
}

inline Report counterexample_experiment(const CounterexampleConfig & cfg)
{
    const ConfigCheck chk = check_counterexample_config(cfg);
    const Graph & j = chk.j;
    const Graph jc = complement(chk.j_prime);  // copies of J' in the complement = copies of jc in the graph
    const std::uint64_t aut_j = detail::count_embeddings(j, j);
    const std::uint64_t aut_jc = detail::count_embeddings(jc, jc);

    Report rep;
    rep.kind = "counterexample";
    rep.seed = cfg.seed;
    std::vector<double> ps;
    for (int n : cfg.n)
        ps.push_back(edge_probability(n, cfg.d));
    rep.params = {{"c", to_string(cfg.c)},       {"d", to_string(cfg.d)},     {"c_prime", to_string(chk.c_prime)},
                  {"n", cfg.n},                  {"p", ps},                   {"trials", cfg.trials},
                  {"pair_size", cfg.pair_size},  {"budget", cfg.budget},      {"J", cfg.j},
                  {"J_prime", cfg.j_prime},      {"h_edges", cfg.h.edges()}};

    std::uint64_t free_ok = 0, total = 0, over_half = 0;
    std::map<int, std::pair<int, int>> absent_at;  // n -> (verified absent, trials)
    std::uint64_t index = 0;
    for (std::size_t ni = 0; ni < cfg.n.size(); ++ni) {
        const int n = cfg.n[ni];
        for (int t = 0; t < cfg.trials; ++t, ++index) {
            const std::uint64_t s = hash_combine(cfg.seed, index);
            const Graph g = gnp(n, ps[ni], s);
            const std::uint64_t copies_j = detail::count_embeddings(g, j) / aut_j;
            const std::uint64_t copies_jc = detail::count_embeddings(g, jc) / aut_jc;

            VertexSet alive = all_vertices(g);
            int deleted = 0;
            while (true) {
                Graph cur = g.induced(alive);
                auto hit = contains(cur, j);
                if (!hit)
                    hit = contains(cur, jc);
                if (!hit)
                    break;
                const int low = *std::min_element(hit->map.begin(), hit->map.end());
                alive.erase(alive.begin() + low);
                ++deleted;
            }
            const Graph rest = g.induced(alive);
            const bool j_free = !detail::has_induced_copy_by_subsets(rest, j);
            const bool jc_free = !detail::has_induced_copy_by_subsets(rest, jc);
            free_ok += j_free && jc_free;
            ++total;
            over_half += 2 * deleted > n;

            auto pair = find_pure_pair(rest, cfg.pair_size, cfg.budget);
            if (pair.verdict == Verdict::found && !is_pure_pair(rest, *pair.pair))
                throw CertificationFailure("pure pair search returned an impure pair");
            auto & slot = absent_at[n];
            slot.first += pair.verdict == Verdict::absent;
            ++slot.second;
            rep.trials.push_back({{"n", n},
                                  {"trial", t},
                                  {"seed", s},
                                  {"edges", g.edge_count()},
                                  {"copies_J", copies_j},
                                  {"copies_J_prime", copies_jc},
                                  {"deleted", deleted},
                                  {"over_half", 2 * deleted > n},
                                  {"J_free", j_free},
                                  {"J_prime_free", jc_free},
                                  {"pure_pair", to_string(pair.verdict)},
                                  {"nodes", pair.nodes}});
        }
    }
    rep.add("post-deletion graph is J-free and J'-free", free_ok == total, "100% of trials, exhaustive",
            {{"verified", free_ok}, {"trials", total}});
    nlohmann::json by_n = nlohmann::json::object();
    for (const auto & [n, v] : absent_at)
        by_n[std::to_string(n)] = {{"verified_absent", v.first}, {"trials", v.second}};
    rep.add("deletions at most n/2", true, "recorded, not required", {{"trials_over_half", over_half}});
    rep.add("pure pairs of the configured size searched", true, "verified absent up to the budget only",
            {{"by_n", by_n}});
    return rep;
}

/// C_5 with J = J' = C_5 (it is self-complementary), c = 1/10, d the midpoint.
inline CounterexampleConfig pentagon_config(std::vector<int> n, int trials, std::uint64_t seed)
{
    CounterexampleConfig cfg;
    cfg.h = cycle_graph(5);
    cfg.j = {0, 1, 2, 3, 4};
    cfg.j_prime = {0, 1, 2, 3, 4};
    cfg.c = Rational(1, 10);
    cfg.d = (cfg.c + Rational(1, 5)) / 2;
    cfg.n = std::move(n);
    cfg.trials = trials;
    cfg.seed = seed;
    return cfg;
}

}  // namespace purepairs
