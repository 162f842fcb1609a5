#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "purepairs/blockade.hpp"
#include "purepairs/buildable.hpp"
#include "purepairs/congestion.hpp"
#include "purepairs/counterexample.hpp"
#include "purepairs/exact.hpp"
#include "purepairs/expansion.hpp"
#include "purepairs/forcing.hpp"
#include "purepairs/machinery.hpp"
#include "purepairs/report.hpp"
#include "purepairs/synthetic.hpp"

namespace purepairs {

/// count = 0 selects each suite's default size.
struct CampaignParams {
    std::uint64_t seed = 0;
    int count = 0;
    std::uint64_t budget = std::uint64_t{1} << 24;
};

namespace detail {

inline int count_or(const CampaignParams & p, int fallback) { return p.count > 0 ? p.count : fallback; }

/// Uniform integer in [lo, hi] keyed on (seed, index).
inline int draw_int(std::uint64_t seed, std::uint64_t index, int lo, int hi)
{
    return lo + static_cast<int>(hash_combine(seed, index) % static_cast<std::uint64_t>(hi - lo + 1));
}

inline Graph random_tree(int n, std::uint64_t seed)
{
    Graph g(n);
    for (int v = 1; v < n; ++v)
        g.add_edge(v, draw_int(seed, static_cast<std::uint64_t>(v), 0, v - 1));
    return g;
}

/// Random tree with `drop` edges removed and `extra` non-edges added.
inline Graph random_sparse(int n, int drop, int extra, std::uint64_t seed)
{
    Graph t = random_tree(n, seed);
    auto es = t.edges();
    std::uint64_t k = 1000;
    for (int i = 0; i < drop && !es.empty(); ++i)
        es.erase(es.begin() + draw_int(seed, k++, 0, static_cast<int>(es.size()) - 1));
    Graph g = from_edges(n, es);
    for (int i = 0, tries = 0; i < extra && tries < 100; ++tries) {
        int u = draw_int(seed, k++, 0, n - 1), v = draw_int(seed, k++, 0, n - 1);
        if (u != v && !g.adjacent(u, v)) {
            g.add_edge(u, v);
            ++i;
        }
    }
    return g;
}

/// Smallest adjacency bitmask over all relabellings; n <= 7.
inline std::uint32_t canonical_mask(const Graph & g)
{
    const int n = g.n();
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::uint32_t best = ~0u;
    do {
        std::uint32_t m = 0;
        int bit = 0;
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v, ++bit)
                if (g.adjacent(perm[static_cast<std::size_t>(u)], perm[static_cast<std::size_t>(v)]))
                    m |= 1u << bit;
        best = std::min(best, m);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

/// One representative per isomorphism class on n vertices.
inline std::vector<Graph> graphs_up_to_isomorphism(int n)
{
    const int pairs = n * (n - 1) / 2;
    std::set<std::uint32_t> seen;
    std::vector<Graph> out;
    for (std::uint32_t mask = 0; mask < (1u << pairs); ++mask) {
        Graph g(n);
        int bit = 0;
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v, ++bit)
                if (mask >> bit & 1u)
                    g.add_edge(u, v);
        if (seen.insert(canonical_mask(g)).second)
            out.push_back(g);
    }
    return out;
}

inline nlohmann::json graph_record(const Graph & g) { return {{"n", g.n()}, {"edges", g.edges()}}; }

}  // namespace detail

inline Report suite_congestion_oracle(const CampaignParams & p)
{
    Report rep;
    rep.kind = "congestion-oracle-agreement";
    rep.seed = p.seed;
    const int random_count = detail::count_or(p, 2000);
    rep.params = {{"classes_up_to_n", 6}, {"random", random_count}, {"random_n", {6, 9}}};
    std::map<int, int> classes;
    int mismatches = 0, checked = 0;
    auto compare = [&](const Graph & g, const char * source) {
        auto a = congestion(g, CongestionMethod::exhaustive);
        auto b = congestion(g, CongestionMethod::parametric_cut);
        ++checked;
        if (a.value != b.value) {
            ++mismatches;
            rep.trials.push_back({{"source", source},
                                  {"graph", detail::graph_record(g)},
                                  {"exhaustive", to_string(a.value)},
                                  {"parametric", to_string(b.value)}});
        }
    };
    for (int n = 1; n <= 6; ++n)
        for (const Graph & g : detail::graphs_up_to_isomorphism(n)) {
            ++classes[n];
            compare(g, "class");
        }
    for (int i = 0; i < random_count; ++i) {
        const std::uint64_t s = hash_combine(p.seed, static_cast<std::uint64_t>(i));
        const int n = detail::draw_int(s, 0, 6, 9);
        const double q = unit_from(s, 1);
        compare(gnp(n, q, hash_combine(s, 2)), "random");
    }
    int small = 0;
    for (int n = 1; n <= 5; ++n)
        small += classes[n];
    rep.add("exhaustive and parametric congestion agree", mismatches == 0, "exact equality",
            {{"checked", checked}, {"mismatches", mismatches}});
    rep.add("isomorphism classes enumerated", classes[6] == 156, "exact count",
            {{"n_le_5", small}, {"n_eq_6", classes[6]}});
    return rep;
}

inline Report suite_forest(const CampaignParams & p)
{
    Report rep;
    rep.kind = "forest-characterization";
    rep.seed = p.seed;
    const int count = detail::count_or(p, 500);
    rep.params = {{"trees", count}, {"cyclic", count}, {"n", {1, 14}}};
    int bad = 0;
    for (int i = 0; i < 2 * count; ++i) {
        const std::uint64_t s = hash_combine(p.seed, static_cast<std::uint64_t>(i));
        const bool tree = i < count;
        const int n = detail::draw_int(s, 0, tree ? 1 : 3, 14);
        Graph g = tree ? detail::random_tree(n, s) : detail::random_sparse(n, 0, detail::draw_int(s, 1, 1, 4), s);
        const bool forest = is_forest(g);
        const bool zero = congestion(g).value == 0;
        if (forest != tree || zero != forest) {
            ++bad;
            rep.trials.push_back({{"graph", detail::graph_record(g)}, {"forest", forest}, {"zero", zero}});
        }
    }
    rep.add("congestion is zero exactly on forests", bad == 0, "exact", {{"failures", bad}});
    return rep;
}

inline Report suite_cycles(const CampaignParams & p)
{
    Report rep;
    rep.kind = "cycle-values";
    rep.seed = p.seed;
    bool ok = true;
    for (int k = 3; k <= 12; ++k) {
        auto a = congestion(cycle_graph(k), CongestionMethod::exhaustive).value;
        auto b = congestion(cycle_graph(k), CongestionMethod::parametric_cut).value;
        const bool good = a == Rational(1, k) && b == Rational(1, k);
        ok = ok && good;
        rep.trials.push_back({{"k", k}, {"exhaustive", to_string(a)}, {"parametric", to_string(b)}, {"pass", good}});
    }
    rep.add("congestion(C_k) = 1/k for 3 <= k <= 12", ok, "exact");
    return rep;
}

inline Report suite_longbranch(const CampaignParams & p)
{
    Report rep;
    rep.kind = "longbranch-certificates";
    rep.seed = p.seed;
    const int count = detail::count_or(p, 1000);
    const std::vector<Rational> xis{Rational(1, 3), Rational(1, 6), Rational(1, 9)};
    rep.params = {{"graphs", count}, {"xi", {"1/3", "1/6", "1/9"}}, {"n", {1, 8}}};
    std::map<std::string, std::pair<int, int>> tally;  // xi -> (ok, sampled)
    int failures = 0, sampled = 0;
    std::uint64_t draw = 0;
    while (sampled < count && draw < 200ull * static_cast<std::uint64_t>(count)) {
        const std::uint64_t s = hash_combine(p.seed, draw++);
        const Rational & xi = xis[static_cast<std::size_t>(sampled % 3)];
        const int n = detail::draw_int(s, 0, 1, 8);
        Graph h = detail::random_sparse(n, detail::draw_int(s, 1, 0, 3), detail::draw_int(s, 2, 0, 2), s);
        if (congestion(h).value > xi)
            continue;
        ++sampled;
        auto & t = tally[to_string(xi)];
        ++t.second;
        std::string problem;
        try {
            auto cert = longbranch_witness(h, xi);
            if (cert.beta != longbranch_beta(xi))
                problem = "beta " + std::to_string(cert.beta);
            else if (!(replay(cert) == h))
                problem = "replay differs";
        } catch (const std::exception & e) {
            problem = e.what();
        }
        if (problem.empty()) {
            ++t.first;
        } else {
            ++failures;
            rep.trials.push_back({{"xi", to_string(xi)}, {"graph", detail::graph_record(h)}, {"problem", problem}});
        }
    }
    nlohmann::json by_xi = nlohmann::json::object();
    for (const auto & [k, v] : tally)
        by_xi[k] = {{"certified", v.first}, {"sampled", v.second}};
    rep.add("weak certificate with beta = floor(1/(3 xi)) + 1 replays exactly", failures == 0 && sampled == count,
            "exact, every sampled graph", {{"sampled", sampled}, {"failures", failures}, {"by_xi", by_xi}});
    return rep;
}

inline Report suite_buildable_congestion(const CampaignParams & p)
{
    Report rep;
    rep.kind = "buildable-congestion";
    rep.seed = p.seed;
    const int count = detail::count_or(p, 500);
    rep.params = {{"certificates", count}, {"beta", {3, 8}}, {"max_vertices", 40}};
    int bad = 0;
    for (int i = 0; i < count; ++i) {
        const std::uint64_t s = hash_combine(p.seed, static_cast<std::uint64_t>(i));
        const int beta = detail::draw_int(s, 0, 3, 8);
        auto cert = random_strong_certificate(beta, 40, s);
        Graph g = replay(cert);
        auto c = congestion(g).value;
        if (c > Rational(1, beta)) {
            ++bad;
            rep.trials.push_back({{"beta", beta}, {"seed", s}, {"congestion", to_string(c)}});
        }
    }
    rep.add("strongly beta-buildable graphs have congestion <= 1/beta", bad == 0, "exact", {{"violations", bad}});
    return rep;
}

inline Report suite_weakbuild(const CampaignParams & p)
{
    Report rep;
    rep.kind = "weakbuild-embedding";
    rep.seed = p.seed;
    const int count = detail::count_or(p, 200);
    rep.params = {{"graphs", count}, {"beta", {2, 4}}, {"n", {2, 9}}};
    int found = 0, bad = 0;
    std::uint64_t draw = 0;
    while (found < count && draw < 100ull * static_cast<std::uint64_t>(count)) {
        const std::uint64_t s = hash_combine(p.seed, draw++);
        const int beta = detail::draw_int(s, 0, 2, 4);
        const int n = detail::draw_int(s, 1, 2, 9);
        Graph h = detail::random_sparse(n, detail::draw_int(s, 2, 0, 2), detail::draw_int(s, 3, 0, 2), s);
        if (!weak_certificate(h, beta).certificate)
            continue;
        ++found;
        std::string problem;
        try {
            auto e = embed_in_buildable(h, beta);
            if (e.cert.mode != BuildMode::strong || !(replay(e.cert) == e.host))
                problem = "strong certificate does not rebuild the host";
            else if (!is_induced_embedding(e.host, h, e.emb.map))
                problem = "embedding is not induced";
        } catch (const std::exception & ex) {
            problem = ex.what();
        }
        if (!problem.empty()) {
            ++bad;
            rep.trials.push_back({{"beta", beta}, {"graph", detail::graph_record(h)}, {"problem", problem}});
        }
    }
    rep.add("weakly buildable graphs embed induced in strongly buildable hosts", bad == 0 && found == count,
            "exact, every graph", {{"graphs", found}, {"failures", bad}});
    return rep;
}

inline Report suite_blockexpand(const CampaignParams & p)
{
    Report rep;
    rep.kind = "blockexpand";
    rep.seed = p.seed;
    const int count = detail::count_or(p, 200);
    const Rational delta(1, 8);
    const int k = 2;
    rep.params = {{"blockades", count}, {"k", k}, {"delta", to_string(delta)}, {"block_size", {9, 12}}};
    int bad = 0, nontrivial = 0;
    for (int i = 0; i < count; ++i) {
        const std::uint64_t s = hash_combine(p.seed, static_cast<std::uint64_t>(i));
        const int size = 9 + static_cast<int>(s % 4);
        std::string problem;
        try {
            Blockade a = nondivergent_blockade(k, size, s, delta, delta);
            auto div = is_divergent(a, delta, delta, std::uint64_t{1} << 30);
            if (div.verdict != Verdict::absent) {
                problem = std::string("divergence not refuted: ") + to_string(div.verdict);
            } else {
                auto r = expanding_contraction(a, delta, Mode::strict, p.budget);
                auto chk = check_expanding(r.contraction, r.tau, 12);
                if (relative_size(a, r.contraction) < 1 - delta * k)
                    problem = "A-size below 1 - delta K";
                else if (chk.verdict != ExpansionVerdict::pass)
                    problem = std::string("expansion check: ") + to_string(chk.verdict);
                else if (check::expanding(r.contraction, r.tau))
                    problem = "independent expansion check failed";
                nontrivial += !r.z.empty();
            }
        } catch (const std::exception & e) {
            problem = e.what();
        }
        if (!problem.empty()) {
            ++bad;
            rep.trials.push_back({{"seed", s}, {"size", size}, {"problem", problem}});
        }
    }
    rep.add("contraction keeps A-size >= 1 - delta K and is 1/(4 delta)-expanding", bad == 0,
            "exact, zero failures", {{"blockades", count}, {"failures", bad}, {"nontrivial", nontrivial}});
    return rep;
}

namespace detail {

struct MachineryTally {
    int runs = 0;
    int built = 0;
    int paths = 0;
    int failures = 0;
    std::map<std::string, int> by_kind;
};

inline std::vector<int> upto(int n)
{
    std::vector<int> out(static_cast<std::size_t>(n));
    std::iota(out.begin(), out.end(), 0);
    return out;
}

/// Every connecting path between the two bases: induced, with height edges.
inline std::string check_paths(const Graph & g, const BiLevelling & bl, int & paths)
{
    for (int x : bl.m.base())
        for (int y : bl.l.base()) {
            auto path = connecting_path(g, bl, x, y);
            ++paths;
            if (static_cast<int>(path.size()) - 1 != bl.height())
                return "connecting path has " + std::to_string(path.size() - 1) + " edges, height " +
                       std::to_string(bl.height());
            if (auto q = check::induced_path(g, path))
                return "connecting path: " + *q;
        }
    return {};
}

}  // namespace detail

/// Relaxed-mode runs of each construction, re-checked independently. Runs
/// whose construction stops at a named stage produce no structure.
inline Report suite_machinery(const CampaignParams & p)
{
    Report rep;
    rep.kind = "machinery-invariants";
    rep.seed = p.seed;
    const int count = detail::count_or(p, 500);
    rep.params = {{"runs", count}, {"bigrading_every", 100}};
    detail::MachineryTally t;
    const BilevelParams loose{Rational(1, 64), Rational(1, 16), {}};
    for (int r = 0; r < count; ++r) {
        const std::uint64_t s = hash_combine(p.seed, static_cast<std::uint64_t>(r));
        std::string kind, problem;
        bool built = false;
        try {
            switch (r % 4) {
            case 0: {
                kind = "levelling";
                Blockade b = random_blockade(6, 8, 0.12, s);
                const int v = b.block(0)[static_cast<std::size_t>(r / 4 % 8)];
                auto res = build_levelling(b, detail::upto(4), 0, v, 4, 12, Mode::relaxed);
                built = true;
                if (auto q = check::levelling(b.host(), res.lev))
                    problem = *q;
                break;
            }
            case 1: {
                kind = "grading";
                Blockade b = matching_blockade(5, 40, 3, s);
                const int v = b.block(0)[static_cast<std::size_t>(r / 4 % 40)];
                auto res = build_grading(b, detail::upto(2), 0, v, 2, 1000, Mode::relaxed);
                built = true;
                if (auto q = check::grading(b.host(), res.grading))
                    problem = *q;
                else if (auto q2 = check::levelling(b.host(), res.grading.lev.layers, 0))
                    problem = *q2;
                break;
            }
            default: {
                const bool bigrade = r % 100 == 3;
                kind = bigrade ? "bigrading" : "bilevelling";
                Blockade a = bigrade ? random_blockade(20, 150, 0.05, s)
                                     : (r % 4 == 2 ? random_blockade(10, 40, 0.07, s)
                                                   : random_blockade(10, 80, 0.03, s));
                BiLevelling bl = bigrade ? build_bigrading(a, 1, 7, Rational(1, 2), Rational(1, 2), Rational(1, 2),
                                                           Mode::relaxed)
                                               .result
                                         : build_bilevelling(a, 1, Rational(1, 2), loose, Mode::relaxed).result;
                built = true;
                if (auto q = check::bilevelling(a.host(), bl, &a))
                    problem = *q;
                else if (bigrade && !bl.bigrading)
                    problem = "bi-grading flag not set";
                else
                    problem = detail::check_paths(a.host(), bl, t.paths);
                break;
            }
            }
        } catch (const CertificationFailure & e) {
            problem = e.what();
        } catch (const StageFailure &) {
        } catch (const HypothesisViolation &) {
        } catch (const PreconditionError &) {
        }
        ++t.runs;
        t.built += built;
        t.by_kind[kind] += built;
        if (!problem.empty()) {
            ++t.failures;
            rep.trials.push_back({{"run", r}, {"kind", kind}, {"seed", s}, {"problem", problem}});
        }
    }
    rep.add("every produced structure passes its checker; connecting paths have height edges", t.failures == 0,
            "100% of produced structures",
            {{"runs", t.runs}, {"built", t.built}, {"paths", t.paths}, {"failures", t.failures},
             {"built_by_kind", t.by_kind}});
    rep.add("some structure of every kind was produced", t.by_kind.size() == 4 &&
            std::all_of(t.by_kind.begin(), t.by_kind.end(), [](const auto & kv) { return kv.second > 0; }),
            "at least one each");
    return rep;
}

inline Report suite_force_oracle(const CampaignParams & p)
{
    Report rep;
    rep.kind = "force-oracle";
    rep.seed = p.seed;
    const int count = detail::count_or(p, 1000);
    rep.params = {{"cases", count}, {"host_n", {2, 12}}, {"pattern_n", {1, 5}}, {"mode", "relaxed"}};
    const ForcingParams fp{0, 2, Rational(1, 8), Rational(1, 2), Rational(1, 2)};
    int cases = 0, mismatches = 0, present = 0, pipeline = 0;
    std::uint64_t draw = 0;
    while (cases < count && draw < 50ull * static_cast<std::uint64_t>(count)) {
        const std::uint64_t s = hash_combine(p.seed, draw++);
        const int m = detail::draw_int(s, 0, 1, 5);
        Graph h = detail::random_sparse(m, detail::draw_int(s, 1, 0, 2), detail::draw_int(s, 2, 0, 2), s);
        auto w = weak_certificate(h, 2);
        if (!w.certificate)
            continue;
        const int k = detail::draw_int(s, 3, 2, 6);
        const int size = detail::draw_int(s, 4, 1, 12 / k);
        const double q = 0.15 + 0.6 * unit_from(s, 5);
        Blockade a = random_blockade(k, size, q, hash_combine(s, 6));
        ++cases;
        auto forced = force_rainbow_copy(a, h, *w.certificate, fp, Mode::relaxed);
        auto oracle = find_rainbow_copy(a, h);
        bool ok = forced.copy.has_value() == oracle.has_value();
        if (forced.copy && !is_rainbow_copy(a, h, *forced.copy))
            ok = false;
        present += oracle.has_value();
        pipeline += forced.via_pipeline;
        if (!ok) {
            ++mismatches;
            rep.trials.push_back({{"seed", s},
                                  {"pattern", detail::graph_record(h)},
                                  {"blockade", blockade_to_json(a)},
                                  {"forced", forced.copy.has_value()},
                                  {"oracle", oracle.has_value()},
                                  {"stage", forced.stage}});
        }
    }
    rep.add("relaxed forcing verdict equals exhaustive rainbow search", mismatches == 0 && cases == count,
            "exact, every case",
            {{"cases", cases}, {"mismatches", mismatches}, {"present", present}, {"via_pipeline", pipeline}});
    return rep;
}

/// Base {0, 1} plus one handle of length `len` between them.
inline BuildCertificate one_handle_certificate(int beta, int len)
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

inline Report suite_ledger(const CampaignParams & p)
{
    Report rep;
    rep.kind = "constants-ledger";
    rep.seed = p.seed;
    const BigInt k = exact_bilevel_length(1, 1, 7);
    rep.add("exact bi-levelling length for (k, c, ell) = (1, 1, 7)", k == 262144, "exact", {{"K", k.str()}});

    const Rational c(1, 2);
    const auto cert = one_handle_certificate(15, 15);
    const int f = (cert.beta - 3) / 3;
    const Rational sigma = (c - Rational(1, f)) / 2;
    rep.params = {{"beta", cert.beta}, {"c", to_string(c)}, {"sigma", to_string(sigma)}};
    auto first = ledger_chain(cert, c, sigma);
    auto second = ledger_chain(cert, c, sigma);
    int failing = 0;
    for (const auto & s : first.steps)
        for (const auto & q : s.checks)
            if (!q.holds()) {
                ++failing;
                rep.trials.push_back({{"rule", s.rule}, {"label", q.label}});
            }
    rep.add("every recorded inequality holds", failing == 0 && first.inequality_count() > 0, "exact rational",
            {{"inequalities", first.inequality_count()}, {"steps", first.steps.size()}, {"failing", failing}});
    const std::string a = ledger_to_json(first).dump(), b = ledger_to_json(second).dump();
    rep.add("ledger replay is bit-identical", a == b, "byte equality", {{"bytes", a.size()}});
    return rep;
}

inline Report suite_counterexample(const CampaignParams & p)
{
    const int trials = detail::count_or(p, 50);
    auto cfg = pentagon_config({20, 30, 40}, trials, p.seed);
    Report rep = counterexample_experiment(cfg);
    int absent = 0, at20 = 0;
    for (const auto & t : rep.trials)
        if (t["n"] == 20) {
            ++at20;
            absent += t["pure_pair"] == "absent";
        }
    rep.add("no pure pair of size 6 at n = 20", 10 * absent >= 9 * at20 && at20 > 0, ">= 90% of trials",
            {{"verified_absent", absent}, {"trials", at20}});
    return rep;
}

inline const std::vector<std::pair<std::string, std::function<Report(const CampaignParams &)>>> & campaign_suites()
{
    static const std::vector<std::pair<std::string, std::function<Report(const CampaignParams &)>>> suites{
        {"congestion-oracle-agreement", suite_congestion_oracle},
        {"forest-characterization", suite_forest},
        {"cycle-values", suite_cycles},
        {"longbranch-certificates", suite_longbranch},
        {"buildable-congestion", suite_buildable_congestion},
        {"weakbuild-embedding", suite_weakbuild},
        {"blockexpand", suite_blockexpand},
        {"machinery-invariants", suite_machinery},
        {"force-oracle", suite_force_oracle},
        {"constants-ledger", suite_ledger},
        {"counterexample", suite_counterexample},
    };
    return suites;
}

inline Report campaign(const std::string & suite, const CampaignParams & p)
{
    for (const auto & [name, run] : campaign_suites())
        if (name == suite)
            return run(p);
    throw PreconditionError("unknown suite: " + suite);
}

}  // namespace purepairs
