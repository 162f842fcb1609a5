#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "purepairs/bigrade.hpp"
#include "purepairs/buildable.hpp"

namespace purepairs {

/// (N, K, sigma, lambda, c) with N = 2^n_log2; N itself is far too large to hold.
struct ForcingParams {
    BigInt n_log2 = 0;
    BigInt k = 1;
    Rational sigma;
    Rational lambda;
    Rational c;
};

struct LedgerInequality {
    std::string label;
    Rational lhs;
    Rational rhs;
    std::string rel;  // ">", ">=" or "=="

    bool holds() const
    {
        if (rel == ">")
            return lhs > rhs;
        if (rel == ">=")
            return lhs >= rhs;
        return lhs == rhs;
    }
};

struct LedgerStep {
    std::string rule;
    bool declared = false;  // constants taken as given, not derived
    std::vector<std::pair<std::string, Rational>> inputs;
    std::vector<std::pair<std::string, Rational>> outputs;
    std::vector<LedgerInequality> checks;

    const Rational & out(const std::string & name) const
    {
        for (const auto & [k, v] : outputs)
            if (k == name)
                return v;
        throw PreconditionError("ledger step has no output " + name);
    }
};

struct ConstantsLedger {
    int beta = 2;
    Rational c;
    Rational sigma;
    std::vector<LedgerStep> steps;
    ForcingParams result;

    /// First recorded inequality that fails, if any.
    std::optional<std::string> violated() const
    {
        for (std::size_t s = 0; s < steps.size(); ++s)
            for (const auto & q : steps[s].checks)
                if (!q.holds())
                    return "step " + std::to_string(s) + " (" + steps[s].rule + "): " + q.label;
        return std::nullopt;
    }

    std::size_t inequality_count() const
    {
        std::size_t n = 0;
        for (const auto & s : steps)
            n += s.checks.size();
        return n;
    }
};

namespace detail {

/// bits needed for x >= 1, so that x < 2^bitlen(x)
inline std::int64_t bitlen(const BigInt & x)
{
    if (x <= 0)
        return 0;
    return static_cast<std::int64_t>(boost::multiprecision::msb(x)) + 1;
}

inline Rational as_rational(const BigInt & x) { return Rational(x); }

inline BigInt pow2(std::int64_t e) { return BigInt(1) << static_cast<unsigned>(e); }

inline nlohmann::json pairs_json(const std::vector<std::pair<std::string, Rational>> & v)
{
    nlohmann::json j = nlohmann::json::array();
    for (const auto & [k, x] : v)
        j.push_back({{"name", k}, {"value", to_string(x)}});
    return j;
}

}  // namespace detail

inline nlohmann::json ledger_to_json(const ConstantsLedger & l)
{
    nlohmann::json steps = nlohmann::json::array();
    for (const auto & s : l.steps) {
        nlohmann::json checks = nlohmann::json::array();
        for (const auto & q : s.checks)
            checks.push_back({{"label", q.label},
                              {"lhs", to_string(q.lhs)},
                              {"rel", q.rel},
                              {"rhs", to_string(q.rhs)},
                              {"holds", q.holds()}});
        steps.push_back({{"rule", s.rule},
                         {"declared", s.declared},
                         {"inputs", detail::pairs_json(s.inputs)},
                         {"outputs", detail::pairs_json(s.outputs)},
                         {"checks", checks}});
    }
    return {{"beta", l.beta},
            {"c", to_string(l.c)},
            {"sigma", to_string(l.sigma)},
            {"steps", steps},
            {"result",
             {{"log2_N", l.result.n_log2.str()},
              {"K", l.result.k.str()},
              {"sigma", to_string(l.result.sigma)},
              {"lambda", to_string(l.result.lambda)},
              {"c", to_string(l.result.c)}}}};
}

struct ShrinkConstants {
    Rational lambda;
    BigInt n_log2;
    BigInt k;
    LedgerStep step;
};

/// Largest ladder the exact bigrade constants are evaluated for.
inline constexpr int max_exact_ladder = 4096;

/// Constants for a shrinking bi-grading: c' and d are interval midpoints, K
/// and lambda come from the bi-grading ladder with k = K', and N = 2^E with E
/// the least integer meeting the three lower bounds on N, each certified with
/// log2 K < bitlen(K).
inline ShrinkConstants ledger_bigrade_shrink(int ell, const Rational & c, const Rational & sigma,
                                             const Rational & sigma_p, const BigInt & k_p, const Rational & lambda_p)
{
    if (ell < 4)
        throw PreconditionError("ell must be at least 4");
    const Rational floor_term = Rational(1, (ell - 1) / 3);
    if (!(sigma > 0 && sigma < sigma_p))
        throw PreconditionError("need 0 < sigma < sigma'");
    if (!(c > floor_term))
        throw PreconditionError("c > 1/floor((ell-1)/3)");
    if (k_p < 1 || lambda_p <= 0 || lambda_p > 1)
        throw PreconditionError("need K' >= 1 and 0 < lambda' <= 1");
    if (k_p > max_exact_ladder)
        throw StageFailure("ledger", "K' = " + k_p.str() + " exceeds the exactly evaluated ladder size " +
                                         std::to_string(max_exact_ladder));
    const int kp = static_cast<int>(k_p);
    const Rational cp = (floor_term + c) / 2;
    const Rational d = (sigma_p - sigma) / 2;
    const BigInt k = bigrade_length(kp, ell, cp, d);
    const Rational eta = Rational(1) / (Rational(detail::pow2(2 * ell - 6)) * Rational(k));
    const Rational lambda = lambda_p * eta / (8 * kp * Rational(detail::pow2(kp)));
    const std::int64_t bits = detail::bitlen(k);

    auto ceil_of = [](const Rational & r) { return ceil_rational(r); };
    const Rational kl = Rational(k) * bits;
    const BigInt e1 = ceil_of(Rational(6 + 2 * ell + bits) / c);
    const BigInt e2 = ceil_of(kl / (c - cp));
    const BigInt e3 = ceil_of((Rational(k_p) + 2 * ell + kl) / (sigma_p - sigma - d));
    const BigInt e = std::max({e1, e2, e3, BigInt(0)});

    ShrinkConstants out{lambda, e, k, {}};
    LedgerStep & s = out.step;
    s.rule = "shrinking bi-grading";
    s.inputs = {{"ell", ell}, {"c", c}, {"sigma", sigma}, {"sigma'", sigma_p}, {"K'", Rational(k_p)},
                {"lambda'", lambda_p}};
    s.outputs = {{"c'", cp}, {"d", d}, {"K", Rational(k)}, {"lambda", lambda}, {"log2 N", Rational(e)}};
    const Rational er(e);
    s.checks = {
        {"c > c'", c, cp, ">"},
        {"c' > 1/floor((ell-1)/3)", cp, floor_term, ">"},
        {"ell >= 3 ceil(1/c') + 1", ell, 3 * Rational(ceil_rational(1 / cp)) + 1, ">="},
        {"d > 0", d, 0, ">"},
        {"sigma' - sigma > d", sigma_p - sigma, d, ">"},
        {"K = ceil(K_0 (3 + 1/c')^(ell + 2))", Rational(k), Rational(bigrade_length(kp, ell, cp, d)),
         "=="},
        {"2^bitlen(K) > K", Rational(detail::pow2(bits)), Rational(k), ">"},
        {"log2 N * c >= 6 + 2 ell + bitlen(K)", er * c, Rational(6 + 2 * ell + bits), ">="},
        {"log2 N * (c - c') >= K bitlen(K)", er * (c - cp), kl, ">="},
        {"log2 N * (sigma' - sigma - d) >= K' + 2 ell + K bitlen(K)", er * (sigma_p - sigma - d),
         Rational(k_p) + 2 * ell + kl, ">="},
        {"lambda = lambda' eta/(8 K' 2^K'), eta = 2^(6-2 ell)/K", lambda,
         lambda_p / (Rational(detail::pow2(2 * ell - 6)) * Rational(k) * 8 * kp * Rational(detail::pow2(kp))), "=="},
    };
    return out;
}

namespace detail {

/// Declared constants for the leaf-cover step: K = K', lambda = lambda', N = 1.
inline LedgerStep leaf_cover_step(const BigInt & k_in, const Rational & sigma, const Rational & sigma_p,
                                  const Rational & lambda_p, const Rational & c)
{
    LedgerStep s;
    s.rule = "leaf cover";
    s.declared = true;
    s.inputs = {{"K'", Rational(k_in)}, {"sigma", sigma}, {"sigma'", sigma_p}, {"lambda'", lambda_p}, {"c", c}};
    s.outputs = {{"K", Rational(k_in)}, {"lambda", lambda_p}, {"log2 N", 0}};
    s.checks = {{"sigma' > sigma", sigma_p, sigma, ">"},
                {"c > sigma'", c, sigma_p, ">"},
                {"sigma > 0", sigma, 0, ">"},
                {"K >= K'", Rational(k_in), Rational(k_in), ">="}};
    return s;
}

inline ForcingParams params_of(const LedgerStep & s, const Rational & sigma, const Rational & c)
{
    return {numerator(s.out("log2 N")), numerator(s.out("K")), sigma, s.out("lambda"), c};
}

}  // namespace detail

/// Constants forcing the graph a strong certificate builds: sigma is pushed
/// down the handles by midpoints, the two-vertex base is forced with
/// (N, K, lambda) = (1, 2, 1/2), and each handle adds a leaf-cover pair, the
/// two-leaf step, the shrinking bi-grading and the handle step.
inline ConstantsLedger ledger_chain(const BuildCertificate & cert, const Rational & c, const Rational & sigma)
{
    if (cert.mode != BuildMode::strong)
        throw PreconditionError("ledger needs a strong certificate");
    replay(cert);
    const int f = (cert.beta - 3) / 3;
    if (f < 1)
        throw PreconditionError("beta must be at least 6");
    const Rational gap = c - Rational(1, f);
    if (!(sigma > 0))
        throw PreconditionError("sigma > 0");
    if (!(c - sigma > Rational(1, f)))
        throw PreconditionError("c - sigma > 1/floor((beta-3)/3)");

    ConstantsLedger out;
    out.beta = cert.beta;
    out.c = c;
    out.sigma = sigma;
    std::vector<int> lengths;
    for (const auto & s : cert.steps)
        if (s.kind == BuildStep::Kind::handle)
            lengths.push_back(s.handle_length());
    const std::size_t m = lengths.size();
    std::vector<Rational> sig(m + 1);
    sig[m] = sigma;
    for (std::size_t i = m; i > 0; --i)
        sig[i - 1] = (sig[i] + gap) / 2;

    ForcingParams cur{0, 2, sig[0], Rational(1, 2), c};
    for (std::size_t i = 0; i < m; ++i) {
        const int ell = lengths[i] - 2;
        const Rational s_lo = sig[i + 1];   // target sigma
        const Rational s_hi = sig[i];       // sigma' of the smaller graph
        const Rational s2 = (s_lo + s_hi) / 2;
        const Rational s3 = (s2 + s_hi) / 2;

        // two leaves: forced u-first and v-last at sigma''
        out.steps.push_back(detail::leaf_cover_step(cur.k + 1, s3, s_hi, cur.lambda, c));
        const BigInt k3 = numerator(out.steps.back().out("K"));
        const Rational l3 = out.steps.back().out("lambda");
        out.steps.push_back(detail::leaf_cover_step(k3 + 1, s2, s3, l3, c));
        const BigInt k2 = numerator(out.steps.back().out("K"));
        const Rational l2 = out.steps.back().out("lambda");
        LedgerStep two;
        two.rule = "two leaves";
        two.inputs = {{"log2 N'", Rational(cur.n_log2)}, {"K'", Rational(cur.k)}, {"sigma'", s_hi},
                      {"lambda'", cur.lambda}, {"sigma", s2}};
        const BigInt n2 = cur.n_log2;
        two.outputs = {{"sigma''", s3}, {"K", Rational(k2)}, {"lambda", l2}, {"log2 N", Rational(n2)}};
        two.checks = {{"sigma'' > sigma", s3, s2, ">"}, {"sigma' > sigma''", s_hi, s3, ">"}, {"c > sigma'", c, s_hi, ">"},
                      {"log2 N >= log2 N'", Rational(n2), Rational(cur.n_log2), ">="}};
        out.steps.push_back(two);

        // handle of length ell + 2 through a bi-grading of height ell
        auto shrink = ledger_bigrade_shrink(ell, c - s_lo, s_lo, s2, k2, l2);
        out.steps.push_back(shrink.step);
        LedgerStep add;
        add.rule = "add handle";
        add.inputs = {{"handle length", lengths[i]}, {"sigma", s_lo}, {"sigma''", s2}, {"K''", Rational(k2)},
                      {"lambda''", l2}, {"log2 N''", Rational(n2)}};
        const BigInt nn = std::max(shrink.n_log2, n2);
        add.outputs = {{"K", Rational(shrink.k)}, {"lambda", shrink.lambda}, {"log2 N", Rational(nn)}};
        add.checks = {{"sigma'' > sigma", s2, s_lo, ">"},
                      {"c - sigma > 1/floor((ell-1)/3)", c - s_lo, Rational(1, (ell - 1) / 3), ">"},
                      {"sigma' > sigma''", s_hi, s2, ">"},
                      {"log2 N >= log2 N''", Rational(nn), Rational(n2), ">="}};
        out.steps.push_back(add);
        cur = detail::params_of(add, s_lo, c);
    }
    out.result = cur;
    return out;
}

/// eps = 2^-t for the least t with eps <= 1/K, eps^sigma <= 1/(2K) and
/// eps <= lambda/(2K). Whether 1/eps also reaches N is reported separately.
struct SparseEpsilon {
    BigInt t;
    Rational sigma;
    ConstantsLedger ledger;
    std::vector<LedgerInequality> checks;
    bool reaches_n = false;  // t >= log2 N
};

inline SparseEpsilon epsilon_for_sparse(const BuildCertificate & cert, const Rational & c)
{
    const int f = (cert.beta - 3) / 3;
    if (f < 1)
        throw PreconditionError("beta must be at least 6");
    if (!(c > Rational(1, f)))
        throw PreconditionError("c > 1/floor((beta-3)/3)");
    SparseEpsilon out;
    out.sigma = (c - Rational(1, f)) / 2;
    out.ledger = ledger_chain(cert, c, out.sigma);
    const BigInt & k = out.ledger.result.k;
    const Rational & lambda = out.ledger.result.lambda;

    const BigInt t1 = detail::bitlen(k - 1);  // least t with 2^t >= K
    const BigInt p = numerator(out.sigma), q = denominator(out.sigma);
    const BigInt two_k_q = boost::multiprecision::pow(2 * k, static_cast<unsigned>(q));
    const std::int64_t m = detail::bitlen(two_k_q - 1);  // least m with 2^m >= (2K)^q
    const BigInt t2 = (BigInt(m) + p - 1) / p;
    const BigInt need3 = ceil_rational(Rational(2 * k) / lambda);
    const BigInt t3 = detail::bitlen(need3 - 1);
    out.t = std::max({t1, t2, t3});
    const Rational t(out.t);
    out.checks = {
        {"2^t1 >= K", Rational(detail::pow2(static_cast<std::int64_t>(t1))), Rational(k), ">="},
        {"t >= t1", t, Rational(t1), ">="},
        {"2^m >= (2K)^q, sigma = p/q", Rational(detail::pow2(m)), Rational(two_k_q), ">="},
        {"t p >= m", t * Rational(p), Rational(m), ">="},
        {"2^t3 >= 2K/lambda", Rational(detail::pow2(static_cast<std::int64_t>(t3))), Rational(2 * k) / lambda, ">="},
        {"t >= t3", t, Rational(t3), ">="},
    };
    out.reaches_n = out.t >= out.ledger.result.n_log2;
    return out;
}

struct SparseReduction {
    VertexSet x;
    bool complement = false;  // the sparse side is the complement of G[X]
    bool exhaustive = false;  // no larger X exists (searched every larger subset)
};

inline constexpr int sparse_exhaustive_limit = 20;

/// Large X with G[X] or its complement eta-sparse: greedy max-degree pruning
/// on both sides, then, for small graphs, subsets larger than the greedy
/// answer in decreasing size. Absent when nothing with |X| >= 2 is found.
inline std::optional<SparseReduction> reduce_to_sparse(const Graph & g, const Rational & eta,
                                                       std::uint64_t budget = std::uint64_t{1} << 22)
{
    if (eta <= 0)
        throw PreconditionError("eta must be positive");
    const int n = g.n();
    auto degree_in = [&](int v, const VertexSet & x, bool comp) {
        std::int64_t d = 0;
        for (int w : x)
            if (w != v && g.adjacent(v, w) != comp)
                ++d;
        return d;
    };
    auto sparse = [&](const VertexSet & x, bool comp) {
        const Rational cap = eta * static_cast<std::int64_t>(x.size());
        return std::all_of(x.begin(), x.end(), [&](int v) { return Rational(degree_in(v, x, comp)) < cap; });
    };
    auto greedy = [&](bool comp) {
        VertexSet x;
        for (int v = 0; v < n; ++v)
            x.push_back(v);
        while (!x.empty()) {
            int worst = -1;
            std::int64_t worst_deg = -1;
            for (int v : x) {
                auto d = degree_in(v, x, comp);
                if (d > worst_deg) {
                    worst_deg = d;
                    worst = v;
                }
            }
            if (Rational(worst_deg) < eta * static_cast<std::int64_t>(x.size()))
                break;
            x = set_difference(x, {worst});
        }
        return x;
    };
    SparseReduction best{greedy(false), false, false};
    VertexSet other = greedy(true);
    if (other.size() > best.x.size())
        best = {other, true, false};
    if (n <= sparse_exhaustive_limit) {
        std::uint64_t nodes = 0;
        bool done = false, out_of_budget = false;
        for (int size = n; size > static_cast<int>(best.x.size()) && !done && !out_of_budget; --size) {
            std::vector<int> pick(static_cast<std::size_t>(size));
            for (int i = 0; i < size; ++i)
                pick[static_cast<std::size_t>(i)] = i;
            while (true) {
                if (++nodes > budget) {
                    out_of_budget = true;
                    break;
                }
                for (bool comp : {false, true})
                    if (!done && sparse(pick, comp)) {
                        best = {pick, comp, false};
                        done = true;
                    }
                if (done)
                    break;
                int i = size - 1;
                while (i >= 0 && pick[static_cast<std::size_t>(i)] == n - size + i)
                    --i;
                if (i < 0)
                    break;
                ++pick[static_cast<std::size_t>(i)];
                for (int j = i + 1; j < size; ++j)
                    pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
            }
        }
        best.exhaustive = !out_of_budget;
    }
    if (best.x.size() < 2)
        return std::nullopt;
    return best;
}

struct ForceOutcome {
    std::optional<RainbowEmbedding> copy;
    std::string stage;          // where the pipeline stopped, empty on success
    bool via_pipeline = false;  // copy came from bi-grading plus handle closure
};

/// Rainbow copy of a buildable h in a: bi-grade a for the last
/// handle, embed h minus that handle's interior with its ends first and last,
/// then close the handle through the bi-levelling. Relaxed mode falls back to
/// exhaustive rainbow search whenever a stage fails.
inline ForceOutcome force_rainbow_copy(const Blockade & a, const Graph & h, const BuildCertificate & cert,
                                       const ForcingParams & params, Mode mode = Mode::strict)
{
    if (!(replay(cert) == h))
        throw PreconditionError("certificate does not rebuild h");
    ForceOutcome out;
    if (h.n() > a.length()) {
        out.stage = "length";
        return out;
    }
    auto direct = [&](std::string stage) {
        out.stage = std::move(stage);
        if (mode == Mode::relaxed)
            out.copy = find_rainbow_copy(a, h);
        return out;
    };
    const BuildStep * last = nullptr;
    for (const auto & s : cert.steps)
        if (s.kind == BuildStep::Kind::handle)
            last = &s;
    if (!last) {
        out.copy = find_rainbow_copy(a, h);
        return out;
    }

    const auto & p = last->path;
    const int len = last->handle_length();
    VertexSet interior(p.begin() + 1, p.end() - 1);
    std::sort(interior.begin(), interior.end());
    VertexSet all;
    for (int v = 0; v < h.n(); ++v)
        all.push_back(v);
    const VertexSet keep = set_difference(all, interior);
    const Graph rest = h.induced(keep);
    auto rank = [&](int v) { return static_cast<int>(std::lower_bound(keep.begin(), keep.end(), v) - keep.begin()); };
    const int u = rank(p.front()), v = rank(p.back());

    BigradeRun run;
    try {
        run = build_bigrading(a, static_cast<int>(keep.size()), len - 2, params.c, Rational(1, 2), 1, mode);
    } catch (const std::exception & e) {
        if (mode == Mode::strict && dynamic_cast<const PreconditionError *>(&e))
            throw;
        return direct(std::string("bigrading: ") + e.what());
    }
    const BiLevelling & bl = run.result;
    const Graph & g = a.host();
    if (bl.height() != len - 2)
        return direct("height " + std::to_string(bl.height()) + " does not close a handle of length " +
                      std::to_string(len));

    std::vector<int> order;
    std::vector<VertexSet> blocks;
    for (std::size_t i = 0; i < bl.blocks.size(); ++i) {
        order.push_back(static_cast<int>(i));
        blocks.push_back(bl.blocks[i].vertices);
    }
    Blockade graded(a.host_ptr(), order, blocks);
    auto sub = find_rainbow_copy(graded, rest, RainbowConstraints{u, v});
    if (!sub)
        return direct("no end-constrained copy of h minus the handle");
    const int fu = sub->emb.map[static_cast<std::size_t>(u)], fv = sub->emb.map[static_cast<std::size_t>(v)];
    VertexSet image(sub->emb.map.begin(), sub->emb.map.end());
    std::sort(image.begin(), image.end());
    auto only_sees = [&](int w, int target) {
        for (int z : image)
            if (g.adjacent(w, z) != (z == target))
                return false;
        return true;
    };
    const int first = sub->block_of[static_cast<std::size_t>(u)];
    const int final_block = sub->block_of[static_cast<std::size_t>(v)];
    for (int x : set_intersection(bl.backward[static_cast<std::size_t>(first)], bl.m.base())) {
        if (!only_sees(x, fu))
            continue;
        for (int y : set_intersection(bl.forward[static_cast<std::size_t>(final_block)], bl.l.base())) {
            if (!only_sees(y, fv))
                continue;
            auto path = connecting_path(g, bl, x, y);
            std::vector<int> map(static_cast<std::size_t>(h.n()), -1);
            for (std::size_t i = 0; i < keep.size(); ++i)
                map[static_cast<std::size_t>(keep[i])] = sub->emb.map[i];
            for (std::size_t i = 0; i < path.size(); ++i)
                map[static_cast<std::size_t>(p[i + 1])] = path[i];
            RainbowEmbedding r;
            r.emb.map = map;
            auto where = a.index_of_vertex();
            for (int w : map)
                r.block_of.push_back(w < 0 ? -1 : where[static_cast<std::size_t>(w)]);
            if (is_rainbow_copy(a, h, r)) {
                out.copy = std::move(r);
                out.via_pipeline = true;
                return out;
            }
        }
    }
    return direct("handle closure is not a rainbow copy");
}

}  // namespace purepairs
