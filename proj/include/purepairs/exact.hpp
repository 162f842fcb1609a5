#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "purepairs/bilevel.hpp"
#include "purepairs/selective.hpp"

namespace purepairs {

struct ExtendParams {
    Rational delta;
    Rational lambda;
    Rational gamma;
    Rational eta;
};

struct ExtendResult {
    BiLevelling result;
    SelectiveCoverOutcome cover;
    int i = -1;               // grading position that hosts M
    std::vector<int> j;       // surviving grading positions
    VertexSet x;
    VertexSet m;
};

namespace detail {

inline bool nested_forward(const BiLevelling & bl)
{
    for (std::size_t p = 1; p < bl.forward.size(); ++p)
        if (!std::includes(bl.forward[p - 1].begin(), bl.forward[p - 1].end(), bl.forward[p].begin(),
                           bl.forward[p].end()))
            return false;
    return true;
}

}  // namespace detail

/// One more level: a selective cover of M's base against the blocks picks X
/// and a block C_i; M grows by (X, N(X) ∩ C_i), L swaps its base for the
/// forward witness of the first surviving block, and the other chosen
/// blocks shrink to what X misses and N(X) ∩ C_i sees.
inline ExtendResult extend_bilevelling(const Blockade & a, const BiLevelling & bl, int k, const Rational & c,
                                       const ExtendParams & prm, Mode mode = Mode::strict)
{
    const Graph & g = a.host();
    const int K = bl.length();
    if (k < 1 || K < k + 1)
        throw PreconditionError("extending needs at least k + 1 blocks");
    if (static_cast<int>(bl.forward.size()) != K || !detail::nested_forward(bl))
        throw PreconditionError("forward witnesses must be given and nested along the grading order");
    if (prm.lambda <= 0 || prm.eta <= 0 || prm.delta <= 0 || prm.gamma <= 0)
        throw PreconditionError("delta, lambda, gamma and eta must be positive");
    if (auto p = check::bilevelling(g, bl, &a))
        throw PreconditionError("input is not an A-rainbow bi-levelling: " + *p);
    if (mode == Mode::strict) {
        if (Rational(K) < (2 + 1 / c) * k)
            throw HypothesisViolation("K >= (2 + 1/c) k");
        if (linkage(a) > prm.lambda)
            throw HypothesisViolation("linkage <= lambda", "linkage = " + to_string(linkage(a)));
        const Rational slack = prm.eta / 2 - prm.lambda - prm.gamma;
        const Rational scale = Rational(detail::ipow(K, k + 1)) * prm.delta;
        if (slack <= 0 || compare_with_power(slack / scale, g.n(), c) < 0)
            throw HypothesisViolation("eta/2 >= K^(k+1) delta |G|^c + lambda + gamma");
        for (const auto & t : bl.blocks)
            if (Rational(static_cast<std::int64_t>(t.vertices.size()),
                         static_cast<std::int64_t>(a.block(t.index).size())) < prm.eta)
                throw HypothesisViolation("A-size of the blocks >= eta");
        auto d = is_divergent(a, prm.gamma, prm.delta, std::uint64_t{1} << 26);
        if (d.verdict == Verdict::inconclusive)
            throw InconclusiveSearch("divergence search exhausted its budget");
        if (d.verdict == Verdict::found)
            throw DivergenceWitness("not (gamma, delta)-divergent", d.i, d.j, d.x, d.y);
    }
    std::vector<int> positions;
    std::vector<VertexSet> cblocks;
    for (int p = 0; p < K; ++p) {
        positions.push_back(p);
        cblocks.push_back(bl.blocks[static_cast<std::size_t>(p)].vertices);
    }
    Blockade cb(a.host_ptr(), positions, cblocks);
    ExtendResult out;
    out.cover = selective_cover(bl.m.base(), cb, k + 1, c, Scaled{prm.delta / prm.eta, c}, prm.lambda / prm.eta, mode);
    std::vector<int> jprime;
    if (out.cover.kind == SelectiveCoverOutcome::Kind::partition) {
        std::size_t best = 0, best_size = 0;
        for (std::size_t q = 0; q < out.cover.parts.size(); ++q) {
            auto sz = g.neighbourhood_in(out.cover.parts[q].x, cblocks[0]).size();
            if (sz > best_size) {
                best_size = sz;
                best = q;
            }
        }
        out.x = out.cover.parts[best].x;
        out.i = 0;
        for (int p : out.cover.parts[best].j)
            if (p != 0)
                jprime.push_back(p);
    } else {
        out.x = out.cover.pair.x;
        out.i = out.cover.pair.j.front();
        jprime.assign(out.cover.pair.j.begin() + 1, out.cover.pair.j.end());
    }
    jprime.resize(static_cast<std::size_t>(k));
    out.j = jprime;
    out.m = g.neighbourhood_in(out.x, cblocks[static_cast<std::size_t>(out.i)]);
    if (out.m.empty())
        throw StageFailure("extend", "X sees nothing of its block");

    BiLevelling next;
    const VertexSet & base = bl.forward[static_cast<std::size_t>(out.j.front())];
    next.l.layers.assign(bl.l.layers.begin(), bl.l.layers.end() - 1);
    next.l.layers.push_back(base);
    next.m.layers.assign(bl.m.layers.begin(), bl.m.layers.end() - 1);
    next.m.layers.push_back(out.x);
    next.m.layers.push_back(out.m);
    for (int p : out.j) {
        VertexSet cj;
        for (int y : cblocks[static_cast<std::size_t>(p)])
            if (!g.has_neighbour_in(y, out.x) && g.has_neighbour_in(y, out.m))
                cj.push_back(y);
        if (cj.empty()) {
            if (mode == Mode::strict)
                throw CertificationFailure("extended block is empty");
            throw StageFailure("extend", "block at grading position " + std::to_string(p) + " emptied");
        }
        if (mode == Mode::strict && 2 * cj.size() < cblocks[static_cast<std::size_t>(p)].size())
            throw CertificationFailure("extended block keeps less than half of its parent");
        next.blocks.push_back({bl.blocks[static_cast<std::size_t>(p)].index, cj});
        next.forward.push_back(set_intersection(bl.forward[static_cast<std::size_t>(p)], base));
    }
    if (auto p = check::bilevelling(g, next, &a))
        throw CertificationFailure("extended bi-levelling invalid: " + *p);
    if (next.height() != bl.height() + 1)
        throw CertificationFailure("extension did not add exactly one level");
    out.result = std::move(next);
    return out;
}

/// ceil(k (3 + 1/c)^(ell + 2)), the length the exact-height construction asks for.
inline BigInt exact_bilevel_length(int k, const Rational & c, int ell)
{
    if (k < 1 || c <= 0 || ell < 0)
        throw PreconditionError("need k >= 1, c > 0 and ell >= 0");
    Rational base = 3 + 1 / c;
    Rational p = k;
    for (int i = 0; i < ell + 2; ++i)
        p *= base;
    return ceil_rational(p);
}

struct ExactParams {
    Rational gamma = Rational(1, 64);
    Rational delta = Rational(1, 16);       // relaxed runs only; strict derives it
    std::optional<Rational> lambda;         // unset: the measured linkage
};

struct ExactRun {
    BiLevelling result;
    BilevelRun initial;
    std::vector<int> ladder;                // K_0 = k, ..., K_t
    std::vector<ExtendResult> steps;        // t first, down to 1
    int rotation = 0;                       // initial run saw the blocks of a rotated left by this much
};

/// Bi-levelling of length k and height exactly ell: a short bi-levelling of
/// height ell - t followed by t extensions down the ladder K_t, ..., K_0 = k.
/// Relaxed mode uses the shortest usable ladder K_i = K_{i-1} + 1.
inline ExactRun exact_bilevelling(const Blockade & a, int k, const Rational & c, int ell, const ExactParams & prm = {},
                                  Mode mode = Mode::strict)
{
    const Graph & g = a.host();
    if (k < 1 || c <= 0)
        throw PreconditionError("need k >= 1 and c > 0");
    const int rho = static_cast<int>(ceil_rational(1 + 1 / c));
    if (ell < 3 * rho - 2)
        throw PreconditionError("ell must be at least 3 rho - 2 = " + std::to_string(3 * rho - 2));
    ExactRun run;
    Rational lambda = prm.lambda.value_or(linkage(a));
    if (lambda <= 0)
        lambda = Rational(1, g.n());
    BilevelParams bp{prm.gamma, prm.delta, ell, mode == Mode::relaxed};
    int first_length = k;
    std::int64_t kbig = a.length();
    if (mode == Mode::strict) {
        const BigInt need = exact_bilevel_length(k, c, ell);
        if (BigInt(a.length()) != need)
            throw HypothesisViolation("length K = ceil(k (3 + 1/c)^(ell + 2))",
                                      "K = " + std::to_string(a.length()) + ", needs " + need.str());
        const Rational cap = Rational(1, detail::ipow(2, 8 + ell) * rho * rho * rho * kbig);
        if (lambda > cap || linkage(a) > cap)
            throw HypothesisViolation("lambda <= 2^(-8-ell)/(rho^3 K)");
        if (prm.gamma > cap)
            throw HypothesisViolation("gamma <= 2^(-8-ell)/(rho^3 K)");
        // K^-K |G|^-c, rounded down to a rational so that non-divergence stays sufficient
        bp.delta = Rational(1, detail::ipow(kbig, static_cast<int>(kbig)) *
                                   detail::ipow(g.n(), static_cast<int>(ceil_rational(c))));
        Rational fl = k;
        for (int i = 0; i < ell - 2; ++i)
            fl *= 3 + 1 / c;
        first_length = static_cast<int>(floor_rational(fl));
    }
    // relaxed: retry with the blocks rotated, so that other blocks play H1
    const int K = a.length();
    const int rotations = mode == Mode::strict ? 1 : K;
    std::optional<StageFailure> last;
    BiLevelling bl;
    for (int r = 0; r < rotations; ++r) {
        std::vector<int> idx;
        std::vector<VertexSet> blocks;
        for (int p = 0; p < K; ++p) {
            idx.push_back(p);
            blocks.push_back(a.at((p + r) % K));
        }
        try {
            ExactRun cand;
            cand.rotation = r;
            cand.initial = build_bilevelling(r == 0 ? a : Blockade(a.host_ptr(), idx, blocks), first_length, c, bp, mode);
            bl = cand.initial.result;
            if (r != 0)
                for (auto & tb : bl.blocks)
                    tb.index = a.index_at((tb.index + r) % K);
            const int t = ell - bl.height();
            if (t < 0)
                throw CertificationFailure("initial bi-levelling is taller than ell");
            cand.ladder = {k};
            for (int i = 1; i <= t; ++i)
                cand.ladder.push_back(mode == Mode::strict
                                          ? static_cast<int>(ceil_rational((2 + 1 / c) * cand.ladder.back()))
                                          : cand.ladder.back() + 1);
            const int kt = cand.ladder.back();
            if (bl.length() < kt) {
                if (mode == Mode::strict)
                    throw CertificationFailure("initial bi-levelling is shorter than K_t");
                throw StageFailure("ladder", "initial bi-levelling has " + std::to_string(bl.length()) +
                                                 " blocks, needs " + std::to_string(kt));
            }
            bl.blocks.resize(static_cast<std::size_t>(kt));
            bl.forward.resize(static_cast<std::size_t>(kt));
            for (int s = t; s >= 1; --s) {
                const Rational eta = Rational(1, detail::ipow(2, t - s + 6) * rho * rho * rho * kbig);
                ExtendParams ep{bp.delta, lambda, prm.gamma, eta};
                cand.steps.push_back(
                    extend_bilevelling(a, bl, cand.ladder[static_cast<std::size_t>(s - 1)], c, ep, mode));
                bl = cand.steps.back().result;
            }
            run = std::move(cand);
            last.reset();
            break;
        } catch (const StageFailure & e) {
            if (mode == Mode::strict)
                throw;
            last = e;
        }
    }
    if (last)
        throw *last;
    if (bl.height() != ell || bl.length() != k)
        throw CertificationFailure("exact bi-levelling missed its height or length");
    if (mode == Mode::strict)
        for (const auto & tb : bl.blocks)
            if (Rational(static_cast<std::int64_t>(tb.vertices.size()),
                         static_cast<std::int64_t>(a.block(tb.index).size())) <
                Rational(16, detail::ipow(2, ell) * rho * rho * rho * kbig))
                throw CertificationFailure("A-size below 2^(4-ell)/(rho^3 K)");
    run.result = std::move(bl);
    return run;
}

struct CycleSearch {
    std::optional<std::vector<int>> cycle;
    std::string stage;            // last stage the pipeline reached, or "exhaustive"
    bool via_pipeline = false;
    bool exhaustive_complete = false;
    std::uint64_t nodes = 0;
};

/// Induced cycle of length ell by depth-first search, each cycle rooted at
/// its smallest vertex. Stops after `budget` search nodes.
inline CycleSearch exhaustive_induced_cycle(const Graph & g, int ell, std::uint64_t budget = std::uint64_t{1} << 26)
{
    CycleSearch out;
    out.stage = "exhaustive";
    if (ell < 3)
        throw PreconditionError("cycles have length at least 3");
    std::vector<int> path;
    bool out_of_budget = false;
    std::function<bool()> grow = [&]() -> bool {
        if (++out.nodes > budget) {
            out_of_budget = true;
            return false;
        }
        const int i = static_cast<int>(path.size());
        for (int x : g.neighbours(path.back())) {
            if (x <= path.front() || std::find(path.begin(), path.end(), x) != path.end())
                continue;
            bool ok = true;
            for (int q = 1; q + 1 < i && ok; ++q)
                ok = !g.adjacent(x, path[static_cast<std::size_t>(q)]);
            if (!ok)
                continue;
            const bool closes = g.adjacent(x, path.front());
            if (i == ell - 1) {
                if (closes) {
                    path.push_back(x);
                    return true;
                }
                continue;
            }
            if (closes && i >= 2)
                continue;
            path.push_back(x);
            if (grow())
                return true;
            path.pop_back();
            if (out_of_budget)
                return false;
        }
        return false;
    };
    for (int s = 0; s < g.n() && !out_of_budget; ++s) {
        path = {s};
        if (grow()) {
            out.cycle = path;
            break;
        }
    }
    out.exhaustive_complete = !out_of_budget;
    return out;
}

struct CycleOptions {
    int blocks = 10;
    ExactParams exact;
    std::uint64_t budget = std::uint64_t{1} << 26;
};

/// Induced cycle of length ell: equipartition, exact bi-levelling of length 1
/// and height ell - 2, then close through a vertex w of the single block.
/// Falls back to exhaustive search when the pipeline stops early.
inline CycleSearch find_induced_cycle(const Graph & g, int ell, const Rational & c, const Rational & eps,
                                      const CycleOptions & opt = {})
{
    if (c <= 0 || eps <= 0)
        throw PreconditionError("c and eps must be positive");
    const Rational inv = 1 / c;
    if (boost::multiprecision::denominator(inv) != 1)
        throw PreconditionError("1/c must be an integer");
    if (Rational(ell) < 3 / c + 3)
        throw PreconditionError("ell must be at least 3/c + 3");
    std::string stage = "equipartition";
    try {
        if (g.n() < 4 * opt.blocks)
            throw StageFailure("equipartition", "graph too small for the block count");
        auto host = std::make_shared<const Graph>(g);
        Blockade a = equipartition(host, opt.blocks);
        stage = "bilevelling";
        auto run = exact_bilevelling(a, 1, c, ell - 2, opt.exact, Mode::relaxed);
        stage = "closing";
        const BiLevelling & bl = run.result;
        const Vertex w = bl.blocks.front().vertices.front();
        const Vertex u = detail::first_neighbour(g, w, bl.l.base());
        const Vertex v = detail::first_neighbour(g, w, bl.m.base());
        auto cyc = connecting_path(g, bl, v, u);
        cyc.push_back(w);
        if (auto p = check::induced_cycle(g, cyc); p || static_cast<int>(cyc.size()) != ell)
            throw CertificationFailure("closed cycle is not an induced cycle of the requested length");
        CycleSearch out;
        out.cycle = cyc;
        out.stage = stage;
        out.via_pipeline = true;
        return out;
    } catch (const StageFailure & e) {
        stage += std::string(" (") + e.what() + ")";
    }
    auto out = exhaustive_induced_cycle(g, ell, opt.budget);
    if (out.cycle) {
        if (auto p = check::induced_cycle(g, *out.cycle); p || static_cast<int>(out.cycle->size()) != ell)
            throw CertificationFailure("exhaustive search returned a bad cycle");
    }
    out.stage = stage + "; exhaustive";
    return out;
}

}  // namespace purepairs
